use copycat_core::finset::label;
use copycat_core::matcat::{
    copy, is_comonoid_hom, is_function_matrix, par, seq, Axis, Domain, Tensor,
};
use proptest::prelude::*;

fn domain(n: usize) -> Domain {
    Domain::range(&format!("D{n}"), n)
}

fn wire(from: usize, to: usize, entries: Vec<f64>) -> Tensor {
    Tensor::new(
        vec![Axis::new(label("o"), domain(to))],
        vec![Axis::new(label("i"), domain(from))],
        entries,
    )
    .unwrap()
}

/// A single-wire table whose entries are drawn from `{0, 0.5, 1}`.
fn small_wire() -> impl Strategy<Value = Tensor> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(from, to)| {
        prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0]), from * to)
            .prop_map(move |e| wire(from, to, e))
    })
}

fn dense(from: usize, to: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(0.0f64..1.0, from * to).prop_map(move |e| wire(from, to, e))
}

#[test]
fn exhaustive_two_by_two() {
    for bits in 0u32..16 {
        let e: Vec<f64> = (0..4).map(|k| f64::from((bits >> k) & 1)).collect();
        let t = wire(2, 2, e);
        assert_eq!(
            is_comonoid_hom(&t).unwrap(),
            is_function_matrix(&t),
            "{bits:04b}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn comonoid_homs_are_exactly_functions(t in small_wire()) {
        prop_assert_eq!(is_comonoid_hom(&t).unwrap(), is_function_matrix(&t));
    }

    #[test]
    fn copiers_are_counital_and_coassociative(n in 1usize..=4) {
        let d = domain(n);
        let id = Tensor::identity(vec![Axis::new(d.name().clone(), d.clone())]).unwrap();
        let (delta, eps) = (copy(&d, 2), copy(&d, 0));
        prop_assert_eq!(&seq(&delta, &par(&eps, &id).unwrap()).unwrap(), &id);
        prop_assert_eq!(&seq(&delta, &par(&id, &eps).unwrap()).unwrap(), &id);
        let l = seq(&delta, &par(&delta, &id).unwrap()).unwrap();
        let r = seq(&delta, &par(&id, &delta).unwrap()).unwrap();
        prop_assert_eq!(&l, &r);
        prop_assert_eq!(&l, &copy(&d, 3));
        // Discarding after the identity is discarding: the k = 0 equation.
        prop_assert_eq!(&seq(&id, &eps).unwrap(), &eps);
    }

    #[test]
    fn seq_is_associative_and_unital(
        (f, g, h) in (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
            .prop_flat_map(|(a, b, c, d)| (dense(a, b), dense(b, c), dense(c, d)))
    ) {
        let l = seq(&seq(&f, &g).unwrap(), &h).unwrap();
        let r = seq(&f, &seq(&g, &h).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-12));
        let id = Tensor::identity(f.in_axes().to_vec()).unwrap();
        let unit = seq(&id, &f).unwrap();
        prop_assert_eq!(unit.entries(), f.entries());
    }

    #[test]
    fn interchange(
        (f, g, h, k) in (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
            .prop_flat_map(|(a, b, c, d, e, x)| (dense(b, e), dense(d, x), dense(a, b), dense(c, d)))
    ) {
        let l = seq(&par(&h, &k).unwrap(), &par(&f, &g).unwrap()).unwrap();
        let r = par(&seq(&h, &f).unwrap(), &seq(&k, &g).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-12));
    }

    #[test]
    fn par_is_strictly_associative(
        (f, g, h) in (dense(1, 2), dense(2, 2), dense(3, 1))
    ) {
        let l = par(&par(&f, &g).unwrap(), &h).unwrap();
        let r = par(&f, &par(&g, &h).unwrap()).unwrap();
        // Axes are flat, so no reassociation is needed; entries only differ
        // by the rounding of a·b·c grouped two ways.
        prop_assert_eq!(l.out_axes(), r.out_axes());
        prop_assert_eq!(l.in_axes(), r.in_axes());
        prop_assert!(l.approx_eq(&r, 1e-15));
    }
}
