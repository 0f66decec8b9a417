//! The randomized law suites behind `copycat check`.
//!
//! Each law draws `count` instances from its own ChaCha stream of `seed`,
//! so adding or reordering laws never changes another law's instances.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dspan::{self, graph_section, BayesNet, Section};
use crate::error::{Error, Result};
use crate::finset::{label, pullback, pushout, Cospan, FiniteMap, FiniteSet, Label};
use crate::gen;
use crate::krnfib::{
    beck_chevalley, flat, kleisli, reindex, restrict, sharp, sharp_naturality, PullbackSquare,
};
use crate::matcat::{copy, is_comonoid_hom, par, seq, Axis, Domain, Tensor};
use crate::ofg::{
    self, associator, cell_hcompose, cell_vcompose, chain_leaves, check_naturality,
    hcompose_with_pushout, left_unitor, pointwise_law_holds, right_unitor, vcompose, Factor,
    Interface, InterfaceMap, OpenFactorGraph,
};
use crate::oracle::{brute_joint_bn, brute_joint_fg, check_universal, Universal};

pub const LAW_TOL: f64 = 1e-9;
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawConfig {
    pub seed: u64,
    pub count: usize,
    /// Compose with a copier that has one spurious entry, to show the
    /// associativity law can fail.
    pub inject_copy_fault: bool,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: 0,
            count: 20,
            inject_copy_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawResult {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// Empty on success; otherwise the first failing instance.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LawResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// `copy(d, k)` with one extra entry sending the first value to the output
/// tuple `(v1, v0, ..., v0)`.
pub fn faulty_copy(d: &Domain, k: usize) -> Tensor {
    let t = copy(d, k);
    if k < 2 || d.len() < 2 {
        return t;
    }
    let n = d.len();
    let mut entries = t.entries().to_vec();
    let out = n.pow(k as u32 - 1);
    entries[out * n] = 1.0;
    Tensor::new(t.out_axes().to_vec(), t.in_axes().to_vec(), entries).expect("same shape")
}

type Check = fn(&mut ChaCha8Rng, &LawConfig) -> Result<std::result::Result<(), String>>;

const LAWS: &[(&str, Check)] = &[
    ("finset.pullback.universal", pullback_universal),
    ("finset.pushout.universal", pushout_universal),
    ("matcat.copy.comonoid", copy_comonoid),
    ("matcat.comonoid_hom.functions", comonoid_homs),
    ("matcat.interchange", tensor_interchange),
    ("krnfib.restrict.functorial", restrict_functorial),
    ("krnfib.adjunction.roundtrip", adjunction_roundtrip),
    ("krnfib.adjunction.naturality", adjunction_naturality),
    ("krnfib.beck_chevalley", beck_chevalley_law),
    ("dspan.hcompose.units", span_units),
    ("dspan.hcompose.associativity", span_associativity),
    ("dspan.hcompose.support", span_support),
    ("dspan.marginalization", span_marginalization),
    ("dspan.cell.interchange", span_interchange),
    ("dspan.bayes_joint", bayes_joint_law),
    ("ofg.hcompose.pointwise", ofg_pointwise),
    ("ofg.hcompose.associativity", ofg_associativity),
    ("ofg.hcompose.units", ofg_units),
    ("ofg.naturality.deterministic", ofg_naturality),
    ("ofg.naturality.counterexample", ofg_counterexample),
    ("ofg.vcompose.category", ofg_vertical_category),
    ("ofg.cell.interchange", ofg_interchange),
    ("ofg.fig1.chain", ofg_fig1),
    ("oracle.fg.reorder", oracle_reorder),
    ("oracle.bn_matches_fg", oracle_bn_fg),
];

pub fn law_names() -> Vec<&'static str> {
    LAWS.iter().map(|(n, _)| *n).collect()
}

pub fn run_laws(cfg: &LawConfig) -> LawReport {
    let results = LAWS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| run_one(i, name, *check, cfg))
        .collect();
    LawReport { results }
}

pub fn run_law(name: &str, cfg: &LawConfig) -> Option<LawResult> {
    LAWS.iter()
        .enumerate()
        .find(|(_, (n, _))| *n == name)
        .map(|(i, (n, check))| run_one(i, n, *check, cfg))
}

fn run_one(stream: usize, name: &'static str, check: Check, cfg: &LawConfig) -> LawResult {
    let mut rng = gen::rng(cfg.seed);
    rng.set_stream(stream as u64);
    for i in 0..cfg.count {
        let outcome = match check(&mut rng, cfg) {
            Ok(o) => o,
            Err(e) => Err(e.to_string()),
        };
        if let Err(detail) = outcome {
            return LawResult {
                name,
                passed: false,
                instances: i + 1,
                detail: format!("instance {i}: {detail}"),
            };
        }
    }
    LawResult {
        name,
        passed: true,
        instances: cfg.count,
        detail: String::new(),
    }
}

type Outcome = Result<std::result::Result<(), String>>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    Ok(if ok { Ok(()) } else { Err(detail()) })
}

fn pullback_universal(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let b = gen::set(rng, "b", 1, 3);
    let (e, f) = (gen::set(rng, "e", 0, 4), gen::set(rng, "f", 0, 4));
    let (p, q) = (gen::map(rng, &e, &b), gen::map(rng, &f, &b));
    let pb = pullback(&p, &q)?;
    let inst = Universal::Pullback {
        left: &p,
        right: &q,
        proj_left: pb.proj_left(),
        proj_right: pb.proj_right(),
    };
    ensure(check_universal(inst, 3)?, || {
        format!("pullback of {p:?} and {q:?}")
    })
}

fn pushout_universal(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let b = gen::set(rng, "b", 0, 3);
    let (x, y) = (gen::set(rng, "x", 1, 4), gen::set(rng, "y", 1, 4));
    let (l, r) = (gen::map(rng, &b, &x), gen::map(rng, &b, &y));
    let po = pushout(&l, &r)?;
    let inst = Universal::Pushout {
        left: &l,
        right: &r,
        in_left: po.in_left(),
        in_right: po.in_right(),
    };
    ensure(check_universal(inst, 3)?, || {
        format!("pushout of {l:?} and {r:?}")
    })
}

fn single(d: &Domain) -> Vec<Axis> {
    vec![Axis::new(d.name().clone(), d.clone())]
}

fn copy_comonoid(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let d = gen::domain(rng, 1, 4);
    let id = Tensor::identity(single(&d))?;
    let delta = copy(&d, 2);
    let eps = copy(&d, 0);
    let counit_l = seq(&delta, &par(&eps, &id)?)?;
    let counit_r = seq(&delta, &par(&id, &eps)?)?;
    let assoc_l = seq(&delta, &par(&delta, &id)?)?;
    let assoc_r = seq(&delta, &par(&id, &delta)?)?;
    let unary = copy(&d, 1);
    ensure(
        counit_l == id
            && counit_r == id
            && assoc_l == assoc_r
            && assoc_l == copy(&d, 3)
            && unary == id,
        || format!("copier on {d:?}"),
    )
}

fn comonoid_homs(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let (from, to) = (gen::domain(rng, 1, 3), gen::domain(rng, 2, 3));
    let port = label("w");
    let f = gen::function_tensor(rng, &from, &to, &port)?;
    // Spread one column over two values, which no function matrix does.
    let mut entries = f.entries().to_vec();
    let x = rng.gen_range(0..from.len());
    let hit = (0..to.len())
        .find(|&y| entries[y * from.len() + x] == 1.0)
        .expect("a function");
    let other = (hit + 1) % to.len();
    entries[hit * from.len() + x] = 0.5;
    entries[other * from.len() + x] = 0.5;
    let g = Tensor::new(f.out_axes().to_vec(), f.in_axes().to_vec(), entries)?;
    ensure(is_comonoid_hom(&f)? && !is_comonoid_hom(&g)?, || {
        format!("function {:?} / spread {:?}", f.entries(), g.entries())
    })
}

fn tensor_interchange(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let ds: Vec<Domain> = (0..6).map(|_| gen::domain(rng, 1, 3)).collect();
    let mut t = |i: usize, o: usize| gen::latent_tensor(rng, &ds[i], &ds[o], &label("w"));
    let (h, k) = (t(0, 1)?, t(2, 3)?);
    let (f, g) = (t(1, 4)?, t(3, 5)?);
    let lhs = seq(&par(&h, &k)?, &par(&f, &g)?)?;
    let rhs = par(&seq(&h, &f)?, &seq(&k, &g)?)?;
    ensure(lhs.approx_eq(&rhs, EXACT_TOL), || "interchange".into())
}

fn restrict_functorial(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let base = gen::set(rng, "b", 1, 3);
    let p0 = gen::bundle_over(rng, &base, "s", 2);
    let p1 = gen::bundle_over(rng, &base, "t", 2);
    let p2 = gen::bundle_over(rng, &base, "u", 2);
    let (k1, k2) = (
        gen::fibre_kernel(rng, &p0, &p1),
        gen::fibre_kernel(rng, &p1, &p2),
    );
    let j = gen::set(rng, "j", 0, 3);
    let b = gen::map(rng, &j, &base);
    let whole = restrict(&k1.then(&k2)?, &b)?;
    let parts = restrict(&k1, &b)?.then(&restrict(&k2, &b)?)?;
    let id = restrict(&k1, &FiniteMap::identity(&base))?;
    ensure(
        whole.kernel().max_abs_diff(parts.kernel()) <= EXACT_TOL && id == k1,
        || "restriction is not functorial".into(),
    )
}

fn adjunction_roundtrip(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let (b, c) = (gen::set(rng, "b", 1, 3), gen::set(rng, "c", 1, 3));
    let f = gen::map(rng, &b, &c);
    let p = gen::bundle_over(rng, &b, "e", 2);
    let q = gen::bundle_over(rng, &c, "g", 2);
    let pulled = reindex(&f, &q)?.bundle;
    let beta = gen::fibre_kernel(rng, &p, &pulled);
    let back = sharp(&flat(&beta, &f, &q)?, &p, &f, &q)?;
    let gamma = flat(&gen::fibre_kernel(rng, &p, &pulled), &f, &q)?;
    let again = flat(&sharp(&gamma, &p, &f, &q)?, &f, &q)?;
    let (d1, d2) = (
        back.kernel().max_abs_diff(beta.kernel()),
        again.max_abs_diff(&gamma),
    );
    ensure(d1 <= EXACT_TOL && d2 <= EXACT_TOL, || {
        format!("roundtrip errors {d1}, {d2}")
    })
}

fn adjunction_naturality(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let (b, c) = (gen::set(rng, "b", 1, 3), gen::set(rng, "c", 1, 3));
    let f = gen::map(rng, &b, &c);
    let p0 = gen::bundle_over(rng, &b, "d", 2);
    let p = gen::bundle_over(rng, &b, "e", 2);
    let q = gen::bundle_over(rng, &c, "g", 2);
    let q2 = gen::bundle_over(rng, &c, "h", 2);
    let phi = gen::fibre_kernel(rng, &p0, &p);
    let psi = gen::fibre_kernel(rng, &q, &q2);
    let gamma = flat(
        &gen::fibre_kernel(rng, &p, &reindex(&f, &q)?.bundle),
        &f,
        &q,
    )?;
    let (left, right) = sharp_naturality(&phi, &gamma, &psi, &f)?;
    let d = left.kernel().max_abs_diff(right.kernel());
    ensure(left.dst() == right.dst() && d <= LAW_TOL, || {
        format!("residual {d}")
    })
}

fn beck_chevalley_law(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let b = gen::set(rng, "b", 1, 3);
    let (e, f) = (gen::set(rng, "e", 1, 5), gen::set(rng, "f", 1, 5));
    let (p, q) = (gen::map(rng, &e, &b), gen::map(rng, &f, &b));
    let sq = PullbackSquare::of(&p, &q)?;
    let src = gen::bundle_over(rng, &e, "s", 2);
    let dst = gen::bundle_over(rng, &e, "t", 2);
    let k = gen::fibre_kernel(rng, &src, &dst);
    let bc = beck_chevalley(&sq, &k)?;
    ensure(bc.certified, || format!("residual {}", bc.residual))
}

fn span_units(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let s = &gen::composable_sections(rng, 1, 4)[0];
    let l = dspan::hcompose(&dspan::hunit(s.left_foot()), s)?;
    let r = dspan::hcompose(s, &dspan::hunit(s.right_foot()))?;
    ensure(&l == s && &r == s, || "units are not strict".into())
}

fn span_associativity(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let ss = gen::composable_sections(rng, 3, 4);
    let (l, r, iso) = dspan::associator(&ss[0], &ss[1], &ss[2])?;
    let moved = l.transport(&FiniteMap::identity(l.left_foot()), &iso)?;
    let d = moved.max_abs_diff(&r);
    ensure(d <= LAW_TOL, || format!("residual {d}"))
}

fn span_support(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let ss = gen::composable_sections(rng, 2, 4);
    let c = dspan::hcompose(&ss[0], &ss[1])?;
    // Rebuilding re-runs the support check.
    let ok = Section::new(c.span().clone(), c.kernel().clone()).is_ok();
    ensure(ok, || "composite leaves its fibres".into())
}

fn span_marginalization(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let x = gen::set(rng, "x", 1, 5);
    let y = gen::set(rng, "y", 1, 5);
    let z = gen::set(rng, "z", 1, 5);
    let (f, g) = (gen::kernel(rng, &x, &y), gen::kernel(rng, &y, &z));
    let c = dspan::hcompose_with_projections(&graph_section(&f)?, &graph_section(&g)?)?;
    let direct = graph_section(&kleisli(&f, &g)?)?;
    let (gf, gg) = (graph_section(&f)?, graph_section(&g)?);
    // Send ((x,y),(y,z)) to (x,z).
    let images = (0..c.section.apex().len())
        .map(|t| {
            let xs = gf.span().left().apply(gf.apex().get(c.to_left.image(t)))?;
            let zs = gg
                .span()
                .right()
                .apply(gg.apex().get(c.to_right.image(t)))?;
            direct
                .apex()
                .index_of(&Label::pair(xs, zs))
                .ok_or_else(|| Error::Label("missing pair".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let forget = FiniteMap::from_indices(c.section.apex().clone(), direct.apex().clone(), images)?;
    let summed = c.section.kernel().pushforward(&forget)?;
    let d = summed.max_abs_diff(direct.kernel());
    ensure(d <= EXACT_TOL, || format!("residual {d}"))
}

fn span_interchange(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let [[c11, c12], [c21, c22]] = gen::span_cell_grid(rng)?;
    let hv = c11.hcompose(&c12)?.vcompose(&c21.hcompose(&c22)?)?;
    let vh = c11.vcompose(&c21)?.hcompose(&c12.vcompose(&c22)?)?;
    let d = hv
        .top()
        .max_abs_diff(vh.top())
        .max(hv.bottom().max_abs_diff(vh.bottom()));
    ensure(hv.maps() == vh.maps() && d <= LAW_TOL, || {
        format!("residual {d}")
    })
}

fn bayes_joint_law(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let net = gen::bayes_net(rng, 6)?;
    let joint = dspan::bayes_joint(&net)?;
    let oracle = brute_joint_bn(&net)?;
    let total = joint.total();
    ensure(
        joint.approx_eq(&oracle, LAW_TOL) && (total - 1.0).abs() <= LAW_TOL,
        || format!("net of {} nodes, total {total}", net.len()),
    )
}

fn copier_for(cfg: &LawConfig) -> fn(&Domain, usize) -> Tensor {
    if cfg.inject_copy_fault {
        faulty_copy
    } else {
        copy
    }
}

fn ofg_pointwise(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let gs = gen::composable_graphs(rng, 2, 4, false)?;
    let c = hcompose_with_pushout(&gs[0], &gs[1])?;
    let feet =
        c.graph.left_foot() == gs[0].left_foot() && c.graph.right_foot() == gs[1].right_foot();
    ensure(feet && pointwise_law_holds(&gs[0], &gs[1], &c)?, || {
        "composite is not the pointwise product".into()
    })
}

fn ofg_associativity(rng: &mut ChaCha8Rng, cfg: &LawConfig) -> Outcome {
    let gs = gen::composable_graphs(rng, 3, 4, false)?;
    let (l, r, iso) = associator(&gs[0], &gs[1], &gs[2], &copier_for(cfg))?;
    let moved = l.transport(&iso)?;
    let d = moved.factor().max_abs_diff(r.factor());
    ensure(moved.approx_eq(&r, LAW_TOL), || {
        format!("max difference {d}")
    })
}

fn ofg_units(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let g = &gen::composable_graphs(rng, 1, 4, false)?[0];
    let (l, li) = left_unitor(g)?;
    let (r, ri) = right_unitor(g)?;
    ensure(
        l.transport(&li)?.approx_eq(g, LAW_TOL) && r.transport(&ri)?.approx_eq(g, LAW_TOL),
        || "unit law fails".into(),
    )
}

fn ofg_naturality(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let gs = gen::composable_graphs(rng, 2, 4, true)?;
    let beta = gen::retyping(rng, gs[0].right_foot())?;
    let n = check_naturality(&beta, &gs[0], &gs[1])?;
    ensure(n.holds, || format!("residual {}", n.residual))
}

/// The fixed stochastic retyping of a shared binary port between the
/// costates `(1, 2)` and `(3, 5)`.
pub fn naturality_counterexample() -> Result<ofg::Naturality> {
    let d = Domain::range("D2", 2);
    let b = label("b");
    let foot = Interface::new([(b.clone(), d.clone())])?;
    let leg = FiniteMap::identity(foot.ports());
    let empty = FiniteMap::from_empty(foot.ports());
    let g1 = OpenFactorGraph::new(
        Cospan::new(empty.clone(), leg.clone())?,
        Factor::new(foot.clone(), vec![1.0, 2.0])?,
    )?;
    let g2 = OpenFactorGraph::new(
        Cospan::new(leg.clone(), empty)?,
        Factor::new(foot.clone(), vec![3.0, 5.0])?,
    )?;
    let half = Tensor::new(
        vec![Axis::new(b.clone(), d.clone())],
        vec![Axis::new(b, d)],
        vec![0.5; 4],
    )?;
    let beta = InterfaceMap::new(leg, foot.clone(), foot, vec![half])?;
    check_naturality(&beta, &g1, &g2)
}

fn ofg_counterexample(_: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let n = naturality_counterexample()?;
    ensure(!n.holds && n.residual >= 0.4, || {
        format!("residual {}", n.residual)
    })
}

/// A vertical map out of `source` onto fresh ports with random domains and
/// arbitrary (or, with `deterministic`, function-matrix) components.
fn random_vertical(
    rng: &mut ChaCha8Rng,
    source: &Interface,
    prefix: &str,
    deterministic: bool,
) -> Result<InterfaceMap> {
    let ports = gen::set(rng, prefix, 1, 3);
    let base = gen::map(rng, source.ports(), &ports);
    let target = Interface::from_typing(
        ports.clone(),
        (0..ports.len()).map(|_| gen::domain(rng, 1, 3)).collect(),
    )?;
    let pushed = ofg::pushforward_interface(&base, source)?;
    let comps = (0..ports.len())
        .map(|k| {
            let (from, to, p) = (pushed.domain_at(k), target.domain_at(k), ports.get(k));
            if deterministic {
                gen::function_tensor(rng, from, to, p)
            } else {
                gen::latent_tensor(rng, from, to, p)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    InterfaceMap::new(base, source.clone(), target, comps)
}

fn ofg_vertical_category(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let deterministic = rng.gen_bool(0.5);
    let ports = gen::set(rng, "x", 1, 3);
    let chi = Interface::from_typing(
        ports.clone(),
        (0..ports.len()).map(|_| gen::domain(rng, 1, 3)).collect(),
    )?;
    let v1 = random_vertical(rng, &chi, "y", deterministic)?;
    let v2 = random_vertical(rng, v1.target(), "z", deterministic)?;
    let v3 = random_vertical(rng, v2.target(), "u", deterministic)?;
    let l = vcompose(&vcompose(&v1, &v2)?, &v3)?;
    let r = vcompose(&v1, &vcompose(&v2, &v3)?)?;
    let tol = if deterministic { 0.0 } else { EXACT_TOL };
    let assoc = l.base() == r.base()
        && l.components()
            .iter()
            .zip(r.components())
            .all(|(a, b)| a.approx_eq(b, tol));
    let id_l = vcompose(&InterfaceMap::identity(&chi), &v1)?;
    let id_r = vcompose(&v1, &InterfaceMap::identity(v1.target()))?;
    let flag = l.is_deterministic() == deterministic || !deterministic;
    ensure(assoc && id_l == v1 && id_r == v1 && flag, || {
        format!("deterministic={deterministic}")
    })
}

fn ofg_interchange(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let [[c11, c12], [c21, c22]] = gen::ofg_cell_grid(rng)?;
    let hv = cell_vcompose(&cell_hcompose(&c11, &c12)?, &cell_hcompose(&c21, &c22)?)?;
    let vh = cell_hcompose(&cell_vcompose(&c11, &c21)?, &cell_vcompose(&c12, &c22)?)?;
    let mids = hv.mid().base() == vh.mid().base()
        && hv
            .mid()
            .components()
            .iter()
            .zip(vh.mid().components())
            .all(|(a, b)| a.approx_eq(b, LAW_TOL));
    ensure(
        mids && hv.top().approx_eq(vh.top(), LAW_TOL)
            && hv.bottom().approx_eq(vh.bottom(), LAW_TOL)
            && hv.left() == vh.left()
            && hv.right() == vh.right(),
        || "interchange fails".into(),
    )
}

/// Composes `leaves` left to right, and as a balanced tree.
pub fn fold_both_ways(leaves: &[OpenFactorGraph]) -> Result<(OpenFactorGraph, OpenFactorGraph)> {
    fn balanced(gs: &[OpenFactorGraph]) -> Result<OpenFactorGraph> {
        match gs {
            [] => Err(Error::Composition("nothing to compose".into())),
            [g] => Ok(g.clone()),
            _ => {
                let mid = gs.len() / 2;
                ofg::hcompose(&balanced(&gs[..mid])?, &balanced(&gs[mid..])?)
            }
        }
    }
    let mut linear = leaves
        .first()
        .cloned()
        .ok_or_else(|| Error::Composition("nothing to compose".into()))?;
    for g in &leaves[1..] {
        linear = ofg::hcompose(&linear, g)?;
    }
    Ok((linear, balanced(leaves)?))
}

/// Relabels a composite's apex onto `all` by matching port names.
pub fn onto_variables(g: &OpenFactorGraph, all: &Interface) -> Result<Factor> {
    let iso = FiniteMap::from_fn(g.interface().ports().clone(), all.ports().clone(), |l| {
        l.clone()
    })?;
    g.factor().relabel(&iso)
}

fn ofg_fig1(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let (all, factors) = gen::fig1_factors(rng)?;
    let none = FiniteSet::empty();
    let leaves = chain_leaves(&all, &factors, &none, &none)?;
    let (linear, balanced) = fold_both_ways(&leaves)?;
    let oracle = brute_joint_fg(&factors, &all)?;
    let (a, b) = (
        onto_variables(&linear, &all)?,
        onto_variables(&balanced, &all)?,
    );
    ensure(
        leaves.len() == 6 && a.approx_eq(&oracle, LAW_TOL) && b.approx_eq(&oracle, LAW_TOL),
        || "chain composite differs from the product".into(),
    )
}

fn oracle_reorder(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let (all, mut factors) = gen::fig1_factors(rng)?;
    let before = brute_joint_fg(&factors, &all)?;
    factors.shuffle(rng);
    let after = brute_joint_fg(&factors, &all)?;
    ensure(before.entries() == after.entries(), || {
        "product depends on order".into()
    })
}

/// Node `i`'s conditional table as a factor over itself and its parents.
pub fn cpt_factor(net: &BayesNet, i: usize) -> Result<Factor> {
    let mut ports: Vec<(Label, Domain)> = vec![net.nodes()[i].clone()];
    ports.extend(net.parents(i).iter().map(|&p| net.nodes()[p].clone()));
    let interface = Interface::new(ports)?;
    let node_of: Vec<usize> = interface
        .ports()
        .iter()
        .map(|l| {
            net.nodes()
                .iter()
                .position(|(n, _)| n == l)
                .expect("a node")
        })
        .collect();
    Factor::from_fn(interface, |digits| {
        let at = |j: usize| digits[node_of.iter().position(|&n| n == j).expect("in scope")];
        let pv: Vec<usize> = net.parents(i).iter().map(|&p| at(p)).collect();
        net.cpt(i, at(i), &pv)
    })
}

fn oracle_bn_fg(rng: &mut ChaCha8Rng, _: &LawConfig) -> Outcome {
    let net = gen::bayes_net(rng, 6)?;
    let factors = (0..net.len())
        .map(|i| cpt_factor(&net, i))
        .collect::<Result<Vec<_>>>()?;
    let all = Interface::new(net.nodes().iter().cloned())?;
    let fg = brute_joint_fg(&factors, &all)?;
    let bn = brute_joint_bn(&net)?;
    ensure(bn.approx_eq(&fg, EXACT_TOL), || {
        "net and factor products differ".into()
    })
}
