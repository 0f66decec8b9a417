use copycat_core::finset::FiniteMap;
use copycat_core::gen;
use copycat_core::krnfib::{
    beck_chevalley, flat, reindex, restrict, sharp, sigma_mor, FibreKernel, PullbackSquare,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_is_functorial(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let base = gen::set(&mut rng, "b", 1, 3);
        let p0 = gen::bundle_over(&mut rng, &base, "s", 2);
        let p1 = gen::bundle_over(&mut rng, &base, "t", 2);
        let p2 = gen::bundle_over(&mut rng, &base, "u", 2);
        let h = gen::fibre_kernel(&mut rng, &p0, &p1);
        let k = gen::fibre_kernel(&mut rng, &p1, &p2);
        let j = gen::set(&mut rng, "j", 0, 5);
        let b = gen::map(&mut rng, &j, &base);
        let whole = restrict(&h.then(&k).unwrap(), &b).unwrap();
        let parts = restrict(&h, &b).unwrap().then(&restrict(&k, &b).unwrap()).unwrap();
        prop_assert_eq!(whole.kernel().entries(), parts.kernel().entries());
        prop_assert!(whole.check_support().is_ok());

        let id = FibreKernel::identity(&p0);
        let pulled = restrict(&id, &b).unwrap();
        prop_assert_eq!(&pulled, &FibreKernel::identity(pulled.src()));
    }

    #[test]
    fn sigma_is_functorial(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (base, c) = (gen::set(&mut rng, "b", 1, 3), gen::set(&mut rng, "c", 1, 3));
        let f = gen::map(&mut rng, &base, &c);
        let p0 = gen::bundle_over(&mut rng, &base, "s", 2);
        let p1 = gen::bundle_over(&mut rng, &base, "t", 2);
        let p2 = gen::bundle_over(&mut rng, &base, "u", 2);
        let h = gen::fibre_kernel(&mut rng, &p0, &p1);
        let k = gen::fibre_kernel(&mut rng, &p1, &p2);
        let whole = sigma_mor(&f, &h.then(&k).unwrap()).unwrap();
        let parts = sigma_mor(&f, &h).unwrap().then(&sigma_mor(&f, &k).unwrap()).unwrap();
        prop_assert_eq!(&whole, &parts);
        let id = sigma_mor(&f, &FibreKernel::identity(&p0)).unwrap();
        prop_assert_eq!(&id, &FibreKernel::identity(id.src()));
    }

    #[test]
    fn transposition_roundtrips(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (b, c) = (gen::set(&mut rng, "b", 1, 4), gen::set(&mut rng, "c", 1, 4));
        let f = gen::map(&mut rng, &b, &c);
        let p = gen::bundle_over(&mut rng, &b, "e", 3);
        let q = gen::bundle_over(&mut rng, &c, "g", 3);
        let pulled = reindex(&f, &q).unwrap().bundle;
        let beta = gen::fibre_kernel(&mut rng, &p, &pulled);
        let gamma = flat(&beta, &f, &q).unwrap();
        let back = sharp(&gamma, &p, &f, &q).unwrap();
        prop_assert!(back.kernel().max_abs_diff(beta.kernel()) <= 1e-12);
        prop_assert!(flat(&back, &f, &q).unwrap().max_abs_diff(&gamma) <= 1e-12);
        prop_assert!(back.check_support().is_ok());
    }

    #[test]
    fn beck_chevalley_certifies(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let b = gen::set(&mut rng, "b", 1, 3);
        let (e, f) = (gen::set(&mut rng, "e", 1, 5), gen::set(&mut rng, "f", 1, 5));
        let (p, q) = (gen::map(&mut rng, &e, &b), gen::map(&mut rng, &f, &b));
        let sq = PullbackSquare::of(&p, &q).unwrap();
        let src = gen::bundle_over(&mut rng, &e, "s", 2);
        let dst = gen::bundle_over(&mut rng, &e, "t", 2);
        let k = gen::fibre_kernel(&mut rng, &src, &dst);
        let bc = beck_chevalley(&sq, &k).unwrap();
        prop_assert!(bc.certified, "residual {}", bc.residual);
        prop_assert!(bc.pull_push.check_support().is_ok());
        prop_assert!(bc.push_pull.check_support().is_ok());
        let (fwd, bwd) = &bc.dst_iso;
        prop_assert!(fwd.then(bwd).unwrap() == FiniteMap::identity(fwd.dom()));
    }
}
