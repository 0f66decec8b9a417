//! Stochastic kernels between finite sets, fibred over a base.
//!
//! A [`Bundle`] is a map `p: E → B`; a [`FibreKernel`] between bundles over
//! the same base moves mass only within fibres. Reindexing ([`restrict`])
//! pulls a kernel back along a base map, dependent sum ([`sigma`]) pushes a
//! bundle forward by post-composition, and [`flat`]/[`sharp`] witness the
//! adjunction between the two.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finset::{compose_map, pullback, FiniteMap, FiniteSet, Label};
use crate::limits;
use crate::matcat::{Axis, Domain, Tensor};

pub const STOCHASTIC_TOL: f64 = 1e-9;

/// A column-stochastic matrix `dom ⇝ cod`, entry `[y, x]` at `y * |dom| + x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    dom: FiniteSet,
    cod: FiniteSet,
    entries: Vec<f64>,
}

impl Kernel {
    pub fn new(dom: FiniteSet, cod: FiniteSet, entries: Vec<f64>) -> Result<Self> {
        let cells = limits::cell_count([dom.len(), cod.len()])?;
        if entries.len() != cells {
            return Err(Error::Stochastic(format!(
                "kernel {dom} ⇝ {cod} needs {cells} entries, got {}",
                entries.len()
            )));
        }
        let k = Kernel { dom, cod, entries };
        k.validate()?;
        Ok(k)
    }

    pub fn from_fn(
        dom: FiniteSet,
        cod: FiniteSet,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        limits::cell_count([dom.len(), cod.len()])?;
        let n = dom.len();
        let entries = (0..cod.len() * n).map(|k| f(k / n, k % n)).collect();
        Kernel::new(dom, cod, entries)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dom.len();
        if let Some(bad) = self.entries.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Stochastic(format!(
                "entry {bad} is not a probability"
            )));
        }
        for x in 0..n {
            let mass: f64 = (0..self.cod.len()).map(|y| self.entries[y * n + x]).sum();
            if (mass - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Stochastic(format!(
                    "column {} has mass {mass}",
                    self.dom.get(x)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(set: &FiniteSet) -> Self {
        Kernel::deterministic(&FiniteMap::identity(set))
    }

    /// The point-mass kernel of a function.
    pub fn deterministic(f: &FiniteMap) -> Self {
        let n = f.dom().len();
        let mut entries = vec![0.0; f.cod().len() * n];
        for x in 0..n {
            entries[f.image(x) * n + x] = 1.0;
        }
        Kernel {
            dom: f.dom().clone(),
            cod: f.cod().clone(),
            entries,
        }
    }

    pub fn dom(&self) -> &FiniteSet {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteSet {
        &self.cod
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Probability of `y` given `x`, by index.
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.entries[y * self.dom.len() + x]
    }

    pub fn prob(&self, y: &Label, x: &Label) -> Result<f64> {
        let yi = self
            .cod
            .index_of(y)
            .ok_or_else(|| Error::Label(format!("{y} not in {}", self.cod)))?;
        let xi = self
            .dom
            .index_of(x)
            .ok_or_else(|| Error::Label(format!("{x} not in {}", self.dom)))?;
        Ok(self.get(yi, xi))
    }

    /// Whether every column is a point mass.
    pub fn is_deterministic(&self) -> bool {
        let n = self.dom.len();
        (0..n).all(|x| {
            (0..self.cod.len())
                .all(|y| matches!(self.entries[y * n + x], v if v == 0.0 || v == 1.0))
        })
    }

    /// Views the kernel as a single-wire tensor; both sets must be nonempty.
    pub fn to_tensor(&self, dom_name: Label, cod_name: Label) -> Result<Tensor> {
        let x = Domain::from_set(dom_name.clone(), &self.dom)?;
        let y = Domain::from_set(cod_name.clone(), &self.cod)?;
        Tensor::new(
            vec![Axis::new(cod_name, y)],
            vec![Axis::new(dom_name, x)],
            self.entries.clone(),
        )
    }

    /// Moves entries along bijections of domain and codomain:
    /// `out[cod_iso(y), dom_iso(x)] = self[y, x]`.
    pub fn transport(&self, dom_iso: &FiniteMap, cod_iso: &FiniteMap) -> Result<Kernel> {
        if dom_iso.dom() != &self.dom || cod_iso.dom() != &self.cod {
            return Err(Error::Composition(
                "transport maps do not match the kernel".into(),
            ));
        }
        if !dom_iso.is_bijection() || !cod_iso.is_bijection() {
            return Err(Error::Universality("transport needs bijections".into()));
        }
        let n = self.dom.len();
        let mut entries = vec![0.0; self.entries.len()];
        for y in 0..self.cod.len() {
            for x in 0..n {
                entries[cod_iso.image(y) * n + dom_iso.image(x)] = self.entries[y * n + x];
            }
        }
        Ok(Kernel {
            dom: dom_iso.cod().clone(),
            cod: cod_iso.cod().clone(),
            entries,
        })
    }

    /// Largest entrywise absolute difference; infinite unless both kernels
    /// have the same domain and codomain.
    pub fn max_abs_diff(&self, other: &Kernel) -> f64 {
        if self.dom != other.dom || self.cod != other.cod {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Image measure along `f: cod → Y`: `out[y', x] = Σ_{f(y) = y'} self[y, x]`.
    pub fn pushforward(&self, f: &FiniteMap) -> Result<Kernel> {
        if f.dom() != &self.cod {
            return Err(Error::Composition(
                "pushforward map does not start at the codomain".into(),
            ));
        }
        let n = self.dom.len();
        let mut entries = vec![0.0; f.cod().len() * n];
        for y in 0..self.cod.len() {
            for x in 0..n {
                entries[f.image(y) * n + x] += self.entries[y * n + x];
            }
        }
        Ok(Kernel::from_raw(self.dom.clone(), f.cod().clone(), entries))
    }

    pub(crate) fn from_raw(dom: FiniteSet, cod: FiniteSet, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), dom.len() * cod.len());
        Kernel { dom, cod, entries }
    }
}

/// Kleisli composite `k ∘ h`: sums over the intermediate state.
pub fn kleisli(h: &Kernel, k: &Kernel) -> Result<Kernel> {
    if h.cod != k.dom {
        return Err(Error::Composition(format!(
            "kernel codomain {} does not match domain {}",
            h.cod, k.dom
        )));
    }
    let (nz, ny, nx) = (k.cod.len(), h.cod.len(), h.dom.len());
    limits::check(nz.saturating_mul(nx))?;
    let mut entries = vec![0.0; nz * nx];
    for z in 0..nz {
        for y in 0..ny {
            let kzy = k.entries[z * ny + y];
            if kzy == 0.0 {
                continue;
            }
            for x in 0..nx {
                entries[z * nx + x] += kzy * h.entries[y * nx + x];
            }
        }
    }
    Ok(Kernel::from_raw(h.dom.clone(), k.cod.clone(), entries))
}

/// An object `p: E → B` of the fibre over `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle(FiniteMap);

impl Bundle {
    pub fn new(proj: FiniteMap) -> Self {
        Bundle(proj)
    }

    /// `(B, id_B)`, the bundle a base set carries over itself.
    pub fn over_itself(base: &FiniteSet) -> Self {
        Bundle(FiniteMap::identity(base))
    }

    pub fn proj(&self) -> &FiniteMap {
        &self.0
    }

    pub fn total(&self) -> &FiniteSet {
        self.0.dom()
    }

    pub fn base(&self) -> &FiniteSet {
        self.0.cod()
    }
}

/// A kernel between bundles over one base that preserves fibres.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreKernel {
    src: Bundle,
    dst: Bundle,
    kernel: Kernel,
}

impl FibreKernel {
    pub fn new(src: Bundle, dst: Bundle, kernel: Kernel) -> Result<Self> {
        if src.base() != dst.base() {
            return Err(Error::Base(format!(
                "bundles lie over {} and {}",
                src.base(),
                dst.base()
            )));
        }
        if kernel.dom() != src.total() || kernel.cod() != dst.total() {
            return Err(Error::Fibre("kernel does not connect the bundles".into()));
        }
        let fk = FibreKernel { src, dst, kernel };
        fk.check_support()?;
        Ok(fk)
    }

    /// Positive mass only between points in the same fibre.
    pub fn check_support(&self) -> Result<()> {
        let (p, q) = (self.src.proj(), self.dst.proj());
        for y in 0..self.kernel.cod.len() {
            for x in 0..self.kernel.dom.len() {
                if self.kernel.get(y, x) > 0.0 && q.image(y) != p.image(x) {
                    return Err(Error::Fibre(format!(
                        "mass from {} to {} crosses fibres",
                        self.kernel.dom.get(x),
                        self.kernel.cod.get(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(bundle: &Bundle) -> Self {
        FibreKernel {
            src: bundle.clone(),
            dst: bundle.clone(),
            kernel: Kernel::identity(bundle.total()),
        }
    }

    pub fn src(&self) -> &Bundle {
        &self.src
    }

    pub fn dst(&self) -> &Bundle {
        &self.dst
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn base(&self) -> &FiniteSet {
        self.src.base()
    }

    /// `k ∘ self`.
    pub fn then(&self, k: &FibreKernel) -> Result<FibreKernel> {
        if self.dst != k.src {
            return Err(Error::Composition(
                "fibre kernels are not composable".into(),
            ));
        }
        Ok(FibreKernel {
            src: self.src.clone(),
            dst: k.dst.clone(),
            kernel: kleisli(&self.kernel, &k.kernel)?,
        })
    }
}

/// A bundle pulled back along a base map, remembering where each new point
/// came from.
#[derive(Clone, Debug)]
pub struct Reindexed {
    pub bundle: Bundle,
    /// For each new point: (index in the old total set, index in the new base).
    pub origin: Vec<(usize, usize)>,
}

impl Reindexed {
    /// The map from the new total set back to the old one.
    pub fn to_old(&self, old: &Bundle) -> FiniteMap {
        FiniteMap::from_indices(
            self.bundle.total().clone(),
            old.total().clone(),
            self.origin.iter().map(|o| o.0).collect(),
        )
        .expect("origin indices lie in the old total set")
    }

    /// New point over base index `j` coming from old point `e`.
    pub fn lookup(&self) -> HashMap<(usize, usize), usize> {
        self.origin
            .iter()
            .enumerate()
            .map(|(n, &o)| (o, n))
            .collect()
    }
}

/// Pulls `p: E → B` back along `b: J → B`.
///
/// Identity maps are handled without relabeling: along `id_B` the bundle is
/// returned as is, and `(B, id_B)` pulls back to `(J, id_J)`. Otherwise the
/// new total set is the pullback with labels `(j,e)`.
pub fn reindex(b: &FiniteMap, p: &Bundle) -> Result<Reindexed> {
    if b.cod() != p.base() {
        return Err(Error::Base(format!(
            "cannot reindex a bundle over {} along a map into {}",
            p.base(),
            b.cod()
        )));
    }
    if b.is_identity() {
        let proj = p.proj();
        return Ok(Reindexed {
            bundle: p.clone(),
            origin: (0..proj.dom().len()).map(|e| (e, proj.image(e))).collect(),
        });
    }
    if p.proj().is_identity() {
        return Ok(Reindexed {
            bundle: Bundle::over_itself(b.dom()),
            origin: (0..b.dom().len()).map(|j| (b.image(j), j)).collect(),
        });
    }
    let pb = pullback(b, p.proj())?;
    let origin = (0..pb.apex().len())
        .map(|n| (pb.proj_right().image(n), pb.proj_left().image(n)))
        .collect();
    Ok(Reindexed {
        bundle: Bundle(pb.proj_left().clone()),
        origin,
    })
}

/// `Δ_b k`: the kernel acting fibrewise on the pulled-back bundles.
pub fn restrict(k: &FibreKernel, b: &FiniteMap) -> Result<FibreKernel> {
    if b.cod() != k.base() {
        return Err(Error::Base(format!(
            "kernel lies over {}, map lands in {}",
            k.base(),
            b.cod()
        )));
    }
    let src = reindex(b, &k.src)?;
    let dst = reindex(b, &k.dst)?;
    let (n_src, n_dst) = (src.origin.len(), dst.origin.len());
    limits::check(n_src.saturating_mul(n_dst))?;
    let mut entries = vec![0.0; n_src * n_dst];
    for (m, &(e2, j2)) in dst.origin.iter().enumerate() {
        for (n, &(e1, j1)) in src.origin.iter().enumerate() {
            if j1 == j2 {
                entries[m * n_src + n] = k.kernel.get(e2, e1);
            }
        }
    }
    let kernel = Kernel::from_raw(
        src.bundle.total().clone(),
        dst.bundle.total().clone(),
        entries,
    );
    Ok(FibreKernel {
        src: src.bundle,
        dst: dst.bundle,
        kernel,
    })
}

/// `Σ_f p = f ∘ p`.
pub fn sigma(f: &FiniteMap, p: &Bundle) -> Result<Bundle> {
    if f.dom() != p.base() {
        return Err(Error::Base(format!(
            "bundle lies over {}, map starts at {}",
            p.base(),
            f.dom()
        )));
    }
    Ok(Bundle(compose_map(p.proj(), f)?))
}

/// `Σ_f` on morphisms: the same matrix over the bigger base.
pub fn sigma_mor(f: &FiniteMap, k: &FibreKernel) -> Result<FibreKernel> {
    Ok(FibreKernel {
        src: sigma(f, &k.src)?,
        dst: sigma(f, &k.dst)?,
        kernel: k.kernel.clone(),
    })
}

/// Transposes `β: p → Δ_f q` over `B` into a plain kernel `E ⇝ F` by
/// forgetting the base coordinate of each pullback point.
pub fn flat(beta: &FibreKernel, f: &FiniteMap, q: &Bundle) -> Result<Kernel> {
    let r = reindex(f, q)?;
    if beta.dst != r.bundle {
        return Err(Error::Fibre(
            "kernel does not land in the pulled-back bundle".into(),
        ));
    }
    let n = beta.kernel.dom.len();
    let mut entries = vec![0.0; q.total().len() * n];
    for (m, &(y, _)) in r.origin.iter().enumerate() {
        for x in 0..n {
            entries[y * n + x] += beta.kernel.get(m, x);
        }
    }
    Ok(Kernel::from_raw(
        beta.kernel.dom.clone(),
        q.total().clone(),
        entries,
    ))
}

/// Inverse of [`flat`]: lifts `γ: E ⇝ F`, supported over `f ∘ p`, to a fibre
/// kernel `p → Δ_f q` by pairing each target with its source's base point.
pub fn sharp(gamma: &Kernel, p: &Bundle, f: &FiniteMap, q: &Bundle) -> Result<FibreKernel> {
    if gamma.dom() != p.total() || gamma.cod() != q.total() {
        return Err(Error::Fibre("kernel does not connect the bundles".into()));
    }
    if f.dom() != p.base() {
        return Err(Error::Base(
            "base map does not start at the source base".into(),
        ));
    }
    for y in 0..gamma.cod.len() {
        for x in 0..gamma.dom.len() {
            if gamma.get(y, x) > 0.0 && q.proj().image(y) != f.image(p.proj().image(x)) {
                return Err(Error::Fibre(format!(
                    "mass from {} to {} is not over the same base point",
                    gamma.dom.get(x),
                    gamma.cod.get(y)
                )));
            }
        }
    }
    let r = reindex(f, q)?;
    let mediator = r.lookup();
    let n = gamma.dom.len();
    let mut entries = vec![0.0; r.origin.len() * n];
    for y in 0..gamma.cod.len() {
        for x in 0..n {
            let v = gamma.get(y, x);
            if v > 0.0 {
                let m = mediator[&(y, p.proj().image(x))];
                entries[m * n + x] = v;
            }
        }
    }
    let kernel = Kernel::from_raw(gamma.dom.clone(), r.bundle.total().clone(), entries);
    Ok(FibreKernel {
        src: p.clone(),
        dst: r.bundle,
        kernel,
    })
}

/// Both sides of the naturality square for the transpose, given
/// `φ: p0 → p` over `B`, `γ: E ⇝ F` over `f`, and `ψ: q → q'` over `C`:
/// `sharp(ψ ∘ γ ∘ Σ_f φ)` and `Δ_f ψ ∘ sharp(γ) ∘ φ`.
pub fn sharp_naturality(
    phi: &FibreKernel,
    gamma: &Kernel,
    psi: &FibreKernel,
    f: &FiniteMap,
) -> Result<(FibreKernel, FibreKernel)> {
    let outer = kleisli(&kleisli(sigma_mor(f, phi)?.kernel(), gamma)?, &psi.kernel)?;
    let left = sharp(&outer, &phi.src, f, &psi.dst)?;
    let right = phi
        .then(&sharp(gamma, &phi.dst, f, &psi.src)?)?
        .then(&restrict(psi, f)?)?;
    Ok((left, right))
}

/// A commuting square `p ∘ π = q ∘ ρ` with apex `P`, checked to be a pullback.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pi: FiniteMap,
    rho: FiniteMap,
    p: FiniteMap,
    q: FiniteMap,
    by_pair: HashMap<(usize, usize), usize>,
}

impl PullbackSquare {
    pub fn new(pi: FiniteMap, rho: FiniteMap, p: FiniteMap, q: FiniteMap) -> Result<Self> {
        if pi.dom() != rho.dom() || pi.cod() != p.dom() || rho.cod() != q.dom() {
            return Err(Error::Composition("square maps do not line up".into()));
        }
        if compose_map(&pi, &p)? != compose_map(&rho, &q)? {
            return Err(Error::Universality("square does not commute".into()));
        }
        let canonical = pullback(&p, &q)?.mediate(&pi, &rho)?;
        if !canonical.is_bijection() {
            return Err(Error::Universality("square is not a pullback".into()));
        }
        let by_pair = (0..pi.dom().len())
            .map(|t| ((pi.image(t), rho.image(t)), t))
            .collect();
        Ok(PullbackSquare {
            pi,
            rho,
            p,
            q,
            by_pair,
        })
    }

    /// The square computed by [`pullback`].
    pub fn of(p: &FiniteMap, q: &FiniteMap) -> Result<Self> {
        let pb = pullback(p, q)?;
        PullbackSquare::new(
            pb.proj_left().clone(),
            pb.proj_right().clone(),
            p.clone(),
            q.clone(),
        )
    }

    pub fn pi(&self) -> &FiniteMap {
        &self.pi
    }

    pub fn rho(&self) -> &FiniteMap {
        &self.rho
    }

    pub fn p(&self) -> &FiniteMap {
        &self.p
    }

    pub fn q(&self) -> &FiniteMap {
        &self.q
    }
}

/// The two composites of a Beck-Chevalley square and the bijections relating
/// them.
#[derive(Clone, Debug)]
pub struct BeckChevalley {
    /// `Σ_ρ Δ_π k`.
    pub pull_push: FibreKernel,
    /// `Δ_q Σ_p k`.
    pub push_pull: FibreKernel,
    /// Mutually inverse bijections between the source total sets.
    pub src_iso: (FiniteMap, FiniteMap),
    /// Mutually inverse bijections between the target total sets.
    pub dst_iso: (FiniteMap, FiniteMap),
    pub residual: f64,
    pub certified: bool,
}

fn pasting_iso(
    sq: &PullbackSquare,
    alpha: &Bundle,
    along_pi: &Reindexed,
    along_q: &Reindexed,
) -> Result<(FiniteMap, FiniteMap)> {
    // (t, x) over P goes to (ρ t, x) over F; back via the unique t over (α x, f).
    let back = along_q.lookup();
    let forward: Vec<usize> = along_pi
        .origin
        .iter()
        .map(|&(x, t)| back[&(x, sq.rho.image(t))])
        .collect();
    let fwd_lookup = along_pi.lookup();
    let backward = along_q
        .origin
        .iter()
        .map(|&(x, f)| {
            let t = sq.by_pair[&(alpha.proj().image(x), f)];
            fwd_lookup[&(x, t)]
        })
        .collect();
    let fwd = FiniteMap::from_indices(
        along_pi.bundle.total().clone(),
        along_q.bundle.total().clone(),
        forward,
    )?;
    let bwd = FiniteMap::from_indices(
        along_q.bundle.total().clone(),
        along_pi.bundle.total().clone(),
        backward,
    )?;
    if !fwd.is_bijection() || compose_map(&fwd, &bwd)? != FiniteMap::identity(fwd.dom()) {
        return Err(Error::Universality("pasting map is not a bijection".into()));
    }
    Ok((fwd, bwd))
}

/// Computes `Σ_ρ Δ_π k` and `Δ_q Σ_p k` for a kernel `k` over the corner `E`
/// of the square and certifies that they agree after transport along the
/// canonical pasting bijection.
pub fn beck_chevalley(sq: &PullbackSquare, k: &FibreKernel) -> Result<BeckChevalley> {
    if k.base() != sq.p.dom() {
        return Err(Error::Base(
            "kernel does not lie over the square's corner".into(),
        ));
    }
    let pull_push = sigma_mor(&sq.rho, &restrict(k, &sq.pi)?)?;
    let push_pull = restrict(&sigma_mor(&sq.p, k)?, &sq.q)?;

    let src_pi = reindex(&sq.pi, &k.src)?;
    let src_q = reindex(&sq.q, &sigma(&sq.p, &k.src)?)?;
    let dst_pi = reindex(&sq.pi, &k.dst)?;
    let dst_q = reindex(&sq.q, &sigma(&sq.p, &k.dst)?)?;
    let src_iso = pasting_iso(sq, &k.src, &src_pi, &src_q)?;
    let dst_iso = pasting_iso(sq, &k.dst, &dst_pi, &dst_q)?;

    let bundles_agree = compose_map(&src_iso.0, push_pull.src.proj())? == *pull_push.src.proj()
        && compose_map(&dst_iso.0, push_pull.dst.proj())? == *pull_push.dst.proj();
    let moved = pull_push.kernel.transport(&src_iso.0, &dst_iso.0)?;
    let residual = moved.max_abs_diff(&push_pull.kernel);
    Ok(BeckChevalley {
        certified: bundles_agree && residual <= STOCHASTIC_TOL,
        pull_push,
        push_pull,
        src_iso,
        dst_iso,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::label;

    fn set(xs: &[&str]) -> FiniteSet {
        FiniteSet::of(xs)
    }

    fn map(dom: &[&str], cod: &[&str], imgs: &[&str]) -> FiniteMap {
        let pairs: Vec<_> = dom
            .iter()
            .zip(imgs)
            .map(|(x, y)| (label(x), label(y)))
            .collect();
        FiniteMap::from_pairs(set(dom), set(cod), &pairs).unwrap()
    }

    // E = {e1,e2,e3} over B = {u,v}: e1,e2 ↦ u, e3 ↦ v.
    fn bundle() -> Bundle {
        Bundle::new(map(&["e1", "e2", "e3"], &["u", "v"], &["u", "u", "v"]))
    }

    fn fibre_kernel() -> FibreKernel {
        let k = Kernel::new(
            set(&["e1", "e2", "e3"]),
            set(&["e1", "e2", "e3"]),
            vec![0.25, 0.5, 0.0, 0.75, 0.5, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        FibreKernel::new(bundle(), bundle(), k).unwrap()
    }

    #[test]
    fn kernels_must_be_stochastic() {
        let r = Kernel::new(set(&["a"]), set(&["x", "y"]), vec![0.5, 0.4]);
        assert!(matches!(r, Err(Error::Stochastic(_))));
        assert!(Kernel::new(set(&["a"]), set(&[]), vec![]).is_err());
        assert!(Kernel::new(set(&[]), set(&[]), vec![]).is_ok());
    }

    #[test]
    fn support_is_checked() {
        let k = Kernel::new(
            set(&["e1", "e2", "e3"]),
            set(&["e1", "e2", "e3"]),
            vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            FibreKernel::new(bundle(), bundle(), k),
            Err(Error::Fibre(_))
        ));
    }

    #[test]
    fn restrict_identity_is_identity() {
        let b = map(&["j1", "j2"], &["u", "v"], &["u", "u"]);
        let id = FibreKernel::identity(&bundle());
        let r = restrict(&id, &b).unwrap();
        assert_eq!(r.kernel(), &Kernel::identity(r.src().total()));
    }

    #[test]
    fn restrict_to_a_point_is_the_fibre_block() {
        let b = map(&["j"], &["u", "v"], &["u"]);
        let r = restrict(&fibre_kernel(), &b).unwrap();
        assert_eq!(r.src().total().len(), 2);
        // labels (j,e1) < (j,e2) keep the block order
        assert_eq!(r.kernel().entries(), &[0.25, 0.5, 0.75, 0.5]);
    }

    #[test]
    fn restrict_rejects_foreign_maps() {
        let b = map(&["j"], &["w"], &["w"]);
        assert!(matches!(restrict(&fibre_kernel(), &b), Err(Error::Base(_))));
    }

    #[test]
    fn sigma_to_a_point() {
        let pt = set(&["*"]);
        let f = FiniteMap::to_point(&set(&["u", "v"]), &pt).unwrap();
        let s = sigma(&f, &bundle()).unwrap();
        assert_eq!(s.base(), &pt);
        let id = FiniteMap::identity(&set(&["u", "v"]));
        assert_eq!(sigma(&id, &bundle()).unwrap(), bundle());
    }

    #[test]
    fn sharp_of_a_deterministic_kernel_pairs_points() {
        let p = Bundle::over_itself(&set(&["u", "v"]));
        let q = Bundle::new(map(&["f1", "f2"], &["c"], &["c", "c"]));
        let f = map(&["u", "v"], &["c"], &["c", "c"]);
        let gamma = Kernel::deterministic(&map(&["u", "v"], &["f1", "f2"], &["f2", "f1"]));
        let s = sharp(&gamma, &p, &f, &q).unwrap();
        let pair = |a: &str, b: &str| Label::pair(&label(a), &label(b));
        assert_eq!(s.kernel().prob(&pair("u", "f2"), &label("u")).unwrap(), 1.0);
        assert_eq!(s.kernel().prob(&pair("v", "f1"), &label("v")).unwrap(), 1.0);
        assert_eq!(flat(&s, &f, &q).unwrap(), gamma);
    }

    #[test]
    fn identity_square_certifies() {
        let id = FiniteMap::identity(&set(&["u", "v"]));
        let sq = PullbackSquare::new(id.clone(), id.clone(), id.clone(), id).unwrap();
        let bc = beck_chevalley(&sq, &fibre_kernel()).unwrap();
        assert!(bc.certified);
        assert!(bc.src_iso.0.is_identity());
    }

    #[test]
    fn non_pullback_squares_are_rejected() {
        let to_pt = |xs: &[&str]| FiniteMap::to_point(&set(xs), &set(&["*"])).unwrap();
        let pi = map(&["t"], &["a", "b"], &["a"]);
        let rho = map(&["t"], &["c"], &["c"]);
        let r = PullbackSquare::new(pi, rho, to_pt(&["a", "b"]), to_pt(&["c"]));
        assert!(matches!(r, Err(Error::Universality(_))));
    }
}
