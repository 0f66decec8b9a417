use copycat_core::dspan::{
    self, bayes_joint, extend_context, extend_context_parts, graph_section, hcompose, hunit,
    restrict_cell, BayesNet, Section, SpanCell,
};
use copycat_core::finset::{FiniteMap, FiniteSet};
use copycat_core::gen;
use copycat_core::krnfib::Kernel;
use copycat_core::matcat::Domain;
use copycat_core::oracle::brute_joint_bn;
use proptest::prelude::*;

fn resection(s: &Section) -> bool {
    Section::new(s.span().clone(), s.kernel().clone()).is_ok()
}

#[test]
fn deterministic_graph_is_a_point_mass() {
    let x = FiniteSet::of(&["0", "1", "2"]);
    let y = FiniteSet::of(&["p", "q"]);
    let f = FiniteMap::from_indices(x.clone(), y.clone(), vec![1, 0, 1]).unwrap();
    let g = graph_section(&Kernel::deterministic(&f)).unwrap();
    for xi in 0..x.len() {
        for e in 0..g.apex().len() {
            let (l, r) = (g.span().left().image(e), g.span().right().image(e));
            let want = if l == xi && r == f.image(xi) {
                1.0
            } else {
                0.0
            };
            assert_eq!(g.kernel().get(e, xi), want);
        }
    }
}

#[test]
fn empty_unit() {
    let u = hunit(&FiniteSet::empty());
    assert!(u.apex().is_empty() && u.kernel().entries().is_empty());
    assert_eq!(hcompose(&u, &u).unwrap(), u);
}

#[test]
fn unit_composes_with_itself() {
    let e = FiniteSet::of(&["a", "b", "c"]);
    let u = hunit(&e);
    assert!(resection(&u));
    assert_eq!(hcompose(&u, &u).unwrap(), u);
}

#[test]
fn uniform_chain_of_three() {
    let b = || Domain::range("B", 2);
    let net = BayesNet::new(
        vec![
            (copycat_core::finset::label("X"), b()),
            (copycat_core::finset::label("Y"), b()),
            (copycat_core::finset::label("Z"), b()),
        ],
        vec![vec![], vec![0], vec![1]],
        vec![vec![0.5; 2], vec![0.5; 4], vec![0.5; 4]],
    )
    .unwrap();
    let joint = bayes_joint(&net).unwrap();
    assert_eq!(joint.entries().len(), 8);
    assert!(joint.entries().iter().all(|&v| v == 0.125));
}

#[test]
fn identity_cell_restricts_to_itself() {
    let mut rng = gen::rng(3);
    let s = &gen::composable_sections(&mut rng, 1, 4)[0];
    let id = SpanCell::identity(s);
    assert_eq!(&restrict_cell(id.maps(), s).unwrap(), s);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn units_are_exact(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let s = &gen::composable_sections(&mut rng, 1, 4)[0];
        prop_assert_eq!(&hcompose(&hunit(s.left_foot()), s).unwrap(), s);
        prop_assert_eq!(&hcompose(s, &hunit(s.right_foot())).unwrap(), s);
    }

    #[test]
    fn composition_is_associative_and_supported(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let ss = gen::composable_sections(&mut rng, 3, 4);
        let (l, r, iso) = dspan::associator(&ss[0], &ss[1], &ss[2]).unwrap();
        let moved = l.transport(&FiniteMap::identity(l.left_foot()), &iso).unwrap();
        prop_assert!(moved.max_abs_diff(&r) <= 1e-9);
        prop_assert!(resection(&l) && resection(&r));
        prop_assert!(resection(&hcompose(&ss[0], &ss[1]).unwrap()));
    }

    #[test]
    fn extension_by_a_singleton_copies_the_kernel(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let s = &gen::composable_sections(&mut rng, 1, 4)[0];
        let ext = extend_context_parts(s, &FiniteSet::of(&["w"])).unwrap();
        prop_assert_eq!(ext.section.apex().len(), s.apex().len());
        prop_assert_eq!(ext.section.left_foot().len(), s.left_foot().len());
        for e in 0..ext.section.apex().len() {
            for x in 0..ext.section.left_foot().len() {
                prop_assert_eq!(
                    ext.section.kernel().get(e, x),
                    s.kernel().get(ext.apex.1.image(e), ext.foot.1.image(x))
                );
            }
        }
        let two = extend_context(s, &FiniteSet::of(&["w0", "w1"])).unwrap();
        prop_assert!(resection(&two));
    }

    #[test]
    fn restriction_commutes_with_composition(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let [_, [c1, c2]] = gen::span_cell_grid(&mut rng).unwrap();
        let h = c1.hcompose(&c2).unwrap();
        let pulled = restrict_cell(h.maps(), h.bottom()).unwrap();
        let separately = hcompose(
            &restrict_cell(c1.maps(), c1.bottom()).unwrap(),
            &restrict_cell(c2.maps(), c2.bottom()).unwrap(),
        )
        .unwrap();
        prop_assert!(pulled.max_abs_diff(h.top()) <= 1e-9);
        prop_assert!(separately.max_abs_diff(h.top()) <= 1e-9);
    }

    #[test]
    fn bayes_joint_matches_the_oracle(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let net = gen::bayes_net(&mut rng, 6).unwrap();
        let joint = bayes_joint(&net).unwrap();
        prop_assert!(joint.approx_eq(&brute_joint_bn(&net).unwrap(), 1e-9));
        prop_assert!((joint.total() - 1.0).abs() <= 1e-9);
    }
}
