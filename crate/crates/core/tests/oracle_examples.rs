use copycat_core::dspan::BayesNet;
use copycat_core::finset::{label, pullback, FiniteMap, FiniteSet};
use copycat_core::gen;
use copycat_core::matcat::Domain;
use copycat_core::ofg::{Factor, Interface};
use copycat_core::oracle::{
    brute_joint_bn, brute_joint_fg, check_universal, product_at, Assignment, Universal,
};
use copycat_core::Error;

fn iface(ports: &[(&str, usize)]) -> Interface {
    Interface::new(
        ports
            .iter()
            .map(|(p, n)| (label(p), Domain::range(&format!("D{n}"), *n))),
    )
    .unwrap()
}

#[test]
fn ones_stay_ones() {
    let all = iface(&[("a", 2), ("b", 3)]);
    let fs = vec![
        Factor::ones(iface(&[("a", 2)])).unwrap(),
        Factor::ones(iface(&[("a", 2), ("b", 3)])).unwrap(),
    ];
    let joint = brute_joint_fg(&fs, &all).unwrap();
    assert!(joint.entries().iter().all(|&v| v == 1.0));
}

#[test]
fn a_single_factor_is_its_own_joint() {
    let all = iface(&[("a", 2), ("b", 2)]);
    let f = Factor::new(all.clone(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!(brute_joint_fg(std::slice::from_ref(&f), &all).unwrap(), f);
}

#[test]
fn six_factor_spot_check() {
    let mut rng = gen::rng(2024);
    let (all, fs) = gen::fig1_factors(&mut rng).unwrap();
    let joint = brute_joint_fg(&fs, &all).unwrap();
    // a=1, b=0, c=1, d=0, e=1, read off each table by hand.
    let digits = [1, 0, 1, 0, 1];
    let by_hand = fs[0].value(&[1, 0])
        * fs[1].value(&[1, 1])
        * fs[2].value(&[0, 1, 0])
        * fs[3].value(&[0, 1])
        * fs[4].value(&[1])
        * fs[5].value(&[0]);
    assert!((joint.value(&digits) - by_hand).abs() <= 1e-15 * by_hand.abs());
    let s: Assignment = ["a", "b", "c", "d", "e"]
        .iter()
        .zip(digits)
        .map(|(v, d)| {
            let dom = all.domain(&label(v)).unwrap();
            (label(v), dom.values()[d].clone())
        })
        .collect();
    assert_eq!(product_at(&fs, &s).unwrap(), joint.value(&digits));
}

#[test]
fn mismatched_domains_are_rejected() {
    let all = iface(&[("a", 2)]);
    let f = Factor::ones(iface(&[("a", 3)])).unwrap();
    assert!(matches!(brute_joint_fg(&[f], &all), Err(Error::Type(_))));
}

#[test]
fn two_node_net() {
    let b = || Domain::range("B", 2);
    let net = BayesNet::new(
        vec![(label("X"), b()), (label("Y"), b())],
        vec![vec![], vec![0]],
        vec![vec![0.6, 0.4], vec![0.9, 0.1, 0.2, 0.8]],
    )
    .unwrap();
    let joint = brute_joint_bn(&net).unwrap();
    assert_eq!(joint.value(&[0, 0]), 0.6 * 0.9);
    assert_eq!(joint.value(&[1, 1]), 0.4 * 0.8);
}

#[test]
fn uniform_root() {
    let net = BayesNet::new(
        vec![(label("X"), Domain::range("B", 2))],
        vec![vec![]],
        vec![vec![0.5, 0.5]],
    )
    .unwrap();
    assert_eq!(brute_joint_bn(&net).unwrap().entries(), &[0.5, 0.5]);
}

#[test]
fn random_nets_have_unit_mass() {
    let mut rng = gen::rng(99);
    for _ in 0..50 {
        let net = gen::bayes_net(&mut rng, 6).unwrap();
        assert!((brute_joint_bn(&net).unwrap().total() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn products_are_pullbacks() {
    let pt = FiniteSet::unit();
    let (e, f) = (FiniteSet::of(&["x", "y"]), FiniteSet::of(&["p", "q", "r"]));
    let (l, r) = (
        FiniteMap::to_point(&e, &pt).unwrap(),
        FiniteMap::to_point(&f, &pt).unwrap(),
    );
    let pb = pullback(&l, &r).unwrap();
    let instance = Universal::Pullback {
        left: &l,
        right: &r,
        proj_left: pb.proj_left(),
        proj_right: pb.proj_right(),
    };
    assert!(check_universal(instance, 3).unwrap());
    assert!(matches!(check_universal(instance, 5), Err(Error::Size(_))));

    // Drop (y, r) from the apex.
    let kept: Vec<usize> = (0..pb.apex().len())
        .filter(|&i| i != pb.pair_index(1, 2).unwrap())
        .collect();
    let apex = FiniteSet::new(kept.iter().map(|&i| pb.apex().get(i).clone())).unwrap();
    let leg = |m: &FiniteMap| {
        FiniteMap::from_indices(
            apex.clone(),
            m.cod().clone(),
            kept.iter().map(|&i| m.image(i)).collect(),
        )
        .unwrap()
    };
    let (pl, pr) = (leg(pb.proj_left()), leg(pb.proj_right()));
    let broken = Universal::Pullback {
        left: &l,
        right: &r,
        proj_left: &pl,
        proj_right: &pr,
    };
    assert!(!check_universal(broken, 2).unwrap());
}
