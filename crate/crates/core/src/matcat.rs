//! The copy-discard category of nonnegative tables.
//!
//! Objects are finite value domains; a morphism is a dense [`Tensor`] with
//! ordered lists of output and input axes. Axes are flat, so associators and
//! unitors are identities and the only coherence data is axis permutation.
//! Entry `(o, i)` lives at `o * in_size + i`, where each block index is mixed
//! radix over its axes with the first axis slowest.

use std::fmt;

use crate::error::{Error, Result};
use crate::finset::{FiniteSet, Label};
use crate::limits;

/// Relative closeness `|a-b| <= tol * max(|a|, |b|)`.
///
/// Adequate here because every table entry is a sum of nonnegative products,
/// so there is no cancellation to make relative error meaningless.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// A finite, nonempty, ordered set of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    name: Label,
    values: Vec<Label>,
}

impl Domain {
    pub fn new(name: Label, values: Vec<Label>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Label(format!("domain {name} has no values")));
        }
        let mut sorted = values.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Label(format!(
                "domain {name} repeats value {}",
                w[0]
            )));
        }
        Ok(Domain { name, values })
    }

    /// Builds a domain of atoms; panics on invalid input.
    pub fn of(name: &str, values: &[&str]) -> Self {
        let values = values.iter().map(|v| crate::finset::label(v)).collect();
        Domain::new(crate::finset::label(name), values).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `{0, 1, ..., n-1}` named `name`.
    pub fn range(name: &str, n: usize) -> Self {
        let values = (0..n)
            .map(|v| crate::finset::label(&v.to_string()))
            .collect();
        Domain::new(crate::finset::label(name), values).unwrap_or_else(|e| panic!("{e}"))
    }

    /// The domain whose values are the elements of `set`, in set order.
    pub fn from_set(name: Label, set: &FiniteSet) -> Result<Self> {
        Domain::new(name, set.elements().to_vec())
    }

    /// The monoidal unit: a single value `()`.
    pub fn unit() -> Self {
        Domain {
            name: Label::tuple(&[]),
            values: vec![Label::tuple(&[])],
        }
    }

    /// Product domain with tuple values in mixed-radix order, first factor
    /// slowest. A one-factor product is that factor; the empty product is
    /// [`Domain::unit`].
    pub fn product(factors: &[Domain]) -> Result<Self> {
        match factors {
            [] => return Ok(Domain::unit()),
            [only] => return Ok(only.clone()),
            _ => {}
        }
        let size = limits::cell_count(factors.iter().map(Domain::len))?;
        let sizes: Vec<usize> = factors.iter().map(Domain::len).collect();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0; factors.len()];
        for idx in 0..size {
            decode_into(idx, &sizes, &mut digits);
            let parts: Vec<Label> = digits
                .iter()
                .zip(factors)
                .map(|(&d, f)| f.values[d].clone())
                .collect();
            values.push(Label::tuple(&parts));
        }
        let names: Vec<Label> = factors.iter().map(|f| f.name.clone()).collect();
        Ok(Domain {
            name: Label::tuple(&names),
            values,
        })
    }

    pub fn name(&self) -> &Label {
        &self.name
    }

    pub fn values(&self) -> &[Label] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_of(&self, value: &Label) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.name)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A named tensor leg.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    pub port: Label,
    pub domain: Domain,
}

impl Axis {
    pub fn new(port: Label, domain: Domain) -> Self {
        Axis { port, domain }
    }
}

pub(crate) fn decode_into(mut idx: usize, sizes: &[usize], digits: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        digits[k] = idx % sizes[k];
        idx /= sizes[k];
    }
}

/// Mixed-radix digits of `idx`, first digit slowest.
pub fn decode(idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    decode_into(idx, sizes, &mut digits);
    digits
}

/// Inverse of [`decode`].
pub fn encode(digits: &[usize], sizes: &[usize]) -> usize {
    digits
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&d, &s)| acc * s + d)
}

fn sizes_of(axes: &[Axis]) -> Vec<usize> {
    axes.iter().map(|a| a.domain.len()).collect()
}

fn same_domains(xs: &[Axis], ys: &[Axis]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.domain == y.domain)
}

/// Inverse of a permutation given as `new position -> old position`.
pub fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        if old >= perm.len() || inv[old] != usize::MAX {
            return Err(Error::Axis(format!("{perm:?} is not a permutation")));
        }
        inv[old] = new;
    }
    Ok(inv)
}

/// A morphism `⊗ in_axes → ⊗ out_axes` with nonnegative entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    out_axes: Vec<Axis>,
    in_axes: Vec<Axis>,
    entries: Vec<f64>,
}

impl Tensor {
    pub fn new(out_axes: Vec<Axis>, in_axes: Vec<Axis>, entries: Vec<f64>) -> Result<Self> {
        let expected =
            limits::cell_count(sizes_of(&out_axes).into_iter().chain(sizes_of(&in_axes)))?;
        if entries.len() != expected {
            return Err(Error::Axis(format!(
                "table has {} entries, shape needs {expected}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Axis(format!(
                "entry {bad} is not finite and nonnegative"
            )));
        }
        Ok(Tensor {
            out_axes,
            in_axes,
            entries,
        })
    }

    /// Fills a table from `f(out_digits, in_digits)`.
    pub fn from_fn(
        out_axes: Vec<Axis>,
        in_axes: Vec<Axis>,
        mut f: impl FnMut(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let out_sizes = sizes_of(&out_axes);
        let in_sizes = sizes_of(&in_axes);
        let total = limits::cell_count(out_sizes.iter().chain(&in_sizes).copied())?;
        let n_in: usize = in_sizes.iter().product();
        let mut entries = Vec::with_capacity(total);
        let mut od = vec![0; out_sizes.len()];
        let mut id = vec![0; in_sizes.len()];
        for idx in 0..total {
            decode_into(idx / n_in.max(1), &out_sizes, &mut od);
            decode_into(idx % n_in.max(1), &in_sizes, &mut id);
            entries.push(f(&od, &id));
        }
        Tensor::new(out_axes, in_axes, entries)
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Tensor::new(Vec::new(), Vec::new(), vec![value])
    }

    /// A morphism into the unit.
    pub fn costate(axes: Vec<Axis>, entries: Vec<f64>) -> Result<Self> {
        Tensor::new(Vec::new(), axes, entries)
    }

    /// A morphism out of the unit.
    pub fn state(axes: Vec<Axis>, entries: Vec<f64>) -> Result<Self> {
        Tensor::new(axes, Vec::new(), entries)
    }

    pub fn identity(axes: Vec<Axis>) -> Result<Self> {
        Tensor::from_fn(axes.clone(), axes, |o, i| if o == i { 1.0 } else { 0.0 })
    }

    pub fn out_axes(&self) -> &[Axis] {
        &self.out_axes
    }

    pub fn in_axes(&self) -> &[Axis] {
        &self.in_axes
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn out_size(&self) -> usize {
        self.out_axes.iter().map(|a| a.domain.len()).product()
    }

    pub fn in_size(&self) -> usize {
        self.in_axes.iter().map(|a| a.domain.len()).product()
    }

    pub fn out_sizes(&self) -> Vec<usize> {
        sizes_of(&self.out_axes)
    }

    pub fn in_sizes(&self) -> Vec<usize> {
        sizes_of(&self.in_axes)
    }

    pub fn at(&self, out_index: usize, in_index: usize) -> f64 {
        self.entries[out_index * self.in_size() + in_index]
    }

    /// Entry at the given per-axis value indices.
    pub fn get(&self, out_digits: &[usize], in_digits: &[usize]) -> f64 {
        self.at(
            encode(out_digits, &self.out_sizes()),
            encode(in_digits, &self.in_sizes()),
        )
    }

    pub fn is_costate(&self) -> bool {
        self.out_axes.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Same axes, with the port names replaced.
    pub fn with_ports(&self, out_ports: &[Label], in_ports: &[Label]) -> Result<Self> {
        if out_ports.len() != self.out_axes.len() || in_ports.len() != self.in_axes.len() {
            return Err(Error::Axis("wrong number of port names".into()));
        }
        let rename = |axes: &[Axis], ports: &[Label]| {
            axes.iter()
                .zip(ports)
                .map(|(a, p)| Axis::new(p.clone(), a.domain.clone()))
                .collect()
        };
        Ok(Tensor {
            out_axes: rename(&self.out_axes, out_ports),
            in_axes: rename(&self.in_axes, in_ports),
            entries: self.entries.clone(),
        })
    }

    /// Swaps the roles of input and output axes.
    pub fn transpose(&self) -> Tensor {
        let (n_out, n_in) = (self.out_size(), self.in_size());
        let mut entries = vec![0.0; self.entries.len()];
        for o in 0..n_out {
            for i in 0..n_in {
                entries[i * n_out + o] = self.entries[o * n_in + i];
            }
        }
        Tensor {
            out_axes: self.in_axes.clone(),
            in_axes: self.out_axes.clone(),
            entries,
        }
    }

    /// Axis domains agree position by position; ports are ignored.
    pub fn same_shape(&self, other: &Tensor) -> bool {
        same_domains(&self.out_axes, &other.out_axes) && same_domains(&self.in_axes, &other.in_axes)
    }

    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        self.same_shape(other)
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(&a, &b)| close(a, b, tol))
    }

    /// Largest entrywise absolute difference; infinite if shapes differ.
    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        if !self.same_shape(other) {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Merges all output axes into one axis over their product domain.
    /// Entries are unchanged because the product domain uses the same layout.
    pub fn fuse_out(&self, port: Label) -> Result<Tensor> {
        let domains: Vec<Domain> = self.out_axes.iter().map(|a| a.domain.clone()).collect();
        Ok(Tensor {
            out_axes: vec![Axis::new(port, Domain::product(&domains)?)],
            in_axes: self.in_axes.clone(),
            entries: self.entries.clone(),
        })
    }

    /// Input-side counterpart of [`Tensor::fuse_out`].
    pub fn fuse_in(&self, port: Label) -> Result<Tensor> {
        let domains: Vec<Domain> = self.in_axes.iter().map(|a| a.domain.clone()).collect();
        Ok(Tensor {
            out_axes: self.out_axes.clone(),
            in_axes: vec![Axis::new(port, Domain::product(&domains)?)],
            entries: self.entries.clone(),
        })
    }

    /// Replaces the single input axis by the given axes, whose product must be
    /// that axis's domain in the fused layout.
    pub fn split_in(&self, axes: Vec<Axis>) -> Result<Tensor> {
        let domains: Vec<Domain> = axes.iter().map(|a| a.domain.clone()).collect();
        match self.in_axes.as_slice() {
            [only] if only.domain == Domain::product(&domains)? => Ok(Tensor {
                out_axes: self.out_axes.clone(),
                in_axes: axes,
                entries: self.entries.clone(),
            }),
            _ => Err(Error::Axis(
                "input axis is not the product of the given axes".into(),
            )),
        }
    }
}

/// `g ∘ f`: contracts `f`'s outputs against `g`'s inputs.
pub fn seq(f: &Tensor, g: &Tensor) -> Result<Tensor> {
    if !same_domains(&f.out_axes, &g.in_axes) {
        return Err(Error::Axis(format!(
            "cannot compose: outputs {:?} do not match inputs {:?}",
            f.out_axes.iter().map(|a| &a.domain).collect::<Vec<_>>(),
            g.in_axes.iter().map(|a| &a.domain).collect::<Vec<_>>()
        )));
    }
    let (nz, ny, nx) = (g.out_size(), f.out_size(), f.in_size());
    limits::check(nz.saturating_mul(nx))?;
    let mut entries = vec![0.0; nz * nx];
    for z in 0..nz {
        for y in 0..ny {
            let gzy = g.entries[z * ny + y];
            if gzy == 0.0 {
                continue;
            }
            for x in 0..nx {
                entries[z * nx + x] += gzy * f.entries[y * nx + x];
            }
        }
    }
    Ok(Tensor {
        out_axes: g.out_axes.clone(),
        in_axes: f.in_axes.clone(),
        entries,
    })
}

/// `f ⊗ g`, with `f`'s axes first in each block.
pub fn par(f: &Tensor, g: &Tensor) -> Result<Tensor> {
    let (fo, fi, go, gi) = (f.out_size(), f.in_size(), g.out_size(), g.in_size());
    limits::cell_count([fo, fi, go, gi])?;
    let n_in = fi * gi;
    let mut entries = vec![0.0; fo * go * n_in];
    for yo in 0..fo {
        for xi in 0..fi {
            let a = f.entries[yo * fi + xi];
            for y2 in 0..go {
                for x2 in 0..gi {
                    entries[(yo * go + y2) * n_in + xi * gi + x2] = a * g.entries[y2 * gi + x2];
                }
            }
        }
    }
    let mut out_axes = f.out_axes.clone();
    out_axes.extend(g.out_axes.iter().cloned());
    let mut in_axes = f.in_axes.clone();
    in_axes.extend(g.in_axes.iter().cloned());
    Ok(Tensor {
        out_axes,
        in_axes,
        entries,
    })
}

/// The `k`-ary copier on `d`: one input, `k` outputs, entry 1 exactly when
/// every output equals the input. `k = 0` is discard, `k = 1` the identity.
/// All axes carry the domain's name as port.
pub fn copy(d: &Domain, k: usize) -> Tensor {
    let n = d.len();
    let axis = Axis::new(d.name.clone(), d.clone());
    let n_out = n.pow(k as u32);
    let mut entries = vec![0.0; n_out * n];
    for v in 0..n {
        let diag = (0..k).fold(0, |acc, _| acc * n + v);
        entries[diag * n + v] = 1.0;
    }
    Tensor {
        out_axes: vec![axis.clone(); k],
        in_axes: vec![axis],
        entries,
    }
}

/// Whether a single-wire map commutes with copy and discard, tested by the
/// two defining equations as exact equalities.
pub fn is_comonoid_hom(f: &Tensor) -> Result<bool> {
    let (dom, cod) = match (f.in_axes.as_slice(), f.out_axes.as_slice()) {
        ([i], [o]) => (&i.domain, &o.domain),
        _ => {
            return Err(Error::Axis(format!(
                "comonoid test needs one input and one output axis, got {} and {}",
                f.in_axes.len(),
                f.out_axes.len()
            )))
        }
    };
    let copy_after = seq(f, &copy(cod, 2))?;
    let copy_before = seq(&copy(dom, 2), &par(f, f)?)?;
    let discard_after = seq(f, &copy(cod, 0))?;
    let discard = copy(dom, 0);
    Ok(copy_after.entries == copy_before.entries && discard_after.entries == discard.entries)
}

/// Whether every input column has a single 1 and zeros elsewhere.
pub fn is_function_matrix(f: &Tensor) -> bool {
    let (n_out, n_in) = (f.out_size(), f.in_size());
    (0..n_in).all(|i| {
        let col = (0..n_out).map(|o| f.entries[o * n_in + i]);
        let (mut ones, mut others) = (0, 0);
        for v in col {
            if v == 1.0 {
                ones += 1;
            } else if v != 0.0 {
                others += 1;
            }
        }
        ones == 1 && others == 0
    })
}

/// Reorders axes: new output axis `k` is old output axis `out_perm[k]`, and
/// likewise for inputs.
pub fn permute_axes(f: &Tensor, out_perm: &[usize], in_perm: &[usize]) -> Result<Tensor> {
    if out_perm.len() != f.out_axes.len() || in_perm.len() != f.in_axes.len() {
        return Err(Error::Axis(
            "permutation length does not match axis count".into(),
        ));
    }
    inverse_permutation(out_perm)?;
    inverse_permutation(in_perm)?;
    let out_axes: Vec<Axis> = out_perm.iter().map(|&k| f.out_axes[k].clone()).collect();
    let in_axes: Vec<Axis> = in_perm.iter().map(|&k| f.in_axes[k].clone()).collect();
    let (old_out, old_in) = (f.out_sizes(), f.in_sizes());
    let mut old_od = vec![0; old_out.len()];
    let mut old_id = vec![0; old_in.len()];
    let n_old_in = f.in_size();
    Tensor::from_fn(out_axes, in_axes, |od, id| {
        for (new, &old) in out_perm.iter().enumerate() {
            old_od[old] = od[new];
        }
        for (new, &old) in in_perm.iter().enumerate() {
            old_id[old] = id[new];
        }
        f.entries[encode(&old_od, &old_out) * n_old_in + encode(&old_id, &old_in)]
    })
}

/// Feeds `m`'s outputs into the input axes of `f` at `positions` (in order).
///
/// The result keeps `f`'s outputs, then its remaining inputs in their original
/// order followed by `m`'s inputs.
pub fn precompose(f: &Tensor, positions: &[usize], m: &Tensor) -> Result<Tensor> {
    if positions.len() != m.out_axes.len() {
        return Err(Error::Axis(
            "position count does not match the feeding map".into(),
        ));
    }
    let mut taken = vec![false; f.in_axes.len()];
    for (&p, axis) in positions.iter().zip(&m.out_axes) {
        if p >= taken.len() || taken[p] {
            return Err(Error::Axis(format!("bad contraction position {p}")));
        }
        taken[p] = true;
        if f.in_axes[p].domain != axis.domain {
            return Err(Error::Axis(format!(
                "contracted axis {} has domain {:?}, feeding axis has {:?}",
                f.in_axes[p].port, f.in_axes[p].domain, axis.domain
            )));
        }
    }
    let kept: Vec<usize> = (0..f.in_axes.len()).filter(|&p| !taken[p]).collect();
    let mut in_axes: Vec<Axis> = kept.iter().map(|&p| f.in_axes[p].clone()).collect();
    in_axes.extend(m.in_axes.iter().cloned());

    let f_in = f.in_sizes();
    let kept_sizes: Vec<usize> = kept.iter().map(|&p| f_in[p]).collect();
    let m_out = m.out_sizes();
    let n_c = m.out_size();
    let n_kept: usize = kept_sizes.iter().product();
    let n_s = m.in_size();
    let n_fin = f.in_size();
    let n_fo = f.out_size();
    limits::check(n_fo.saturating_mul(n_kept).saturating_mul(n_s))?;

    // Precompute f's input index as a sum of kept and contracted contributions.
    let mut strides = vec![0; f_in.len()];
    let mut acc = 1;
    for p in (0..f_in.len()).rev() {
        strides[p] = acc;
        acc *= f_in[p];
    }
    let kept_offset: Vec<usize> = (0..n_kept)
        .map(|r| {
            let d = decode(r, &kept_sizes);
            kept.iter().zip(&d).map(|(&p, &v)| strides[p] * v).sum()
        })
        .collect();
    let contracted_offset: Vec<usize> = (0..n_c)
        .map(|c| {
            let d = decode(c, &m_out);
            positions
                .iter()
                .zip(&d)
                .map(|(&p, &v)| strides[p] * v)
                .sum()
        })
        .collect();

    let n_in = n_kept * n_s;
    let mut entries = vec![0.0; n_fo * n_in];
    for o in 0..n_fo {
        let row = &f.entries[o * n_fin..(o + 1) * n_fin];
        for c in 0..n_c {
            let m_row = &m.entries[c * n_s..(c + 1) * n_s];
            for r in 0..n_kept {
                let fv = row[kept_offset[r] + contracted_offset[c]];
                if fv == 0.0 {
                    continue;
                }
                let base = o * n_in + r * n_s;
                for (s, &mv) in m_row.iter().enumerate() {
                    entries[base + s] += fv * mv;
                }
            }
        }
    }
    Tensor::new(f.out_axes.clone(), in_axes, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::label;

    fn d2() -> Domain {
        Domain::range("D2", 2)
    }

    fn ax(port: &str, d: &Domain) -> Axis {
        Axis::new(label(port), d.clone())
    }

    fn matrix(d_out: &Domain, d_in: &Domain, entries: Vec<f64>) -> Tensor {
        Tensor::new(vec![ax("y", d_out)], vec![ax("x", d_in)], entries).unwrap()
    }

    #[test]
    fn scalars_multiply() {
        let two = Tensor::scalar(2.0).unwrap();
        let three = Tensor::scalar(3.0).unwrap();
        assert_eq!(seq(&two, &three).unwrap().entries(), &[6.0]);
        assert_eq!(par(&two, &three).unwrap().entries(), &[6.0]);
    }

    #[test]
    fn identity_is_a_unit_for_seq() {
        let d = Domain::range("D3", 3);
        let f = matrix(&d, &d2(), vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        let id = Tensor::identity(vec![ax("y", &d)]).unwrap();
        assert_eq!(seq(&f, &id).unwrap().entries(), f.entries());
        let id2 = Tensor::identity(vec![ax("x", &d2())]).unwrap();
        assert_eq!(seq(&id2, &f).unwrap().entries(), f.entries());
    }

    #[test]
    fn seq_rejects_mismatched_axes() {
        let f = matrix(&d2(), &d2(), vec![1.0, 0.0, 0.0, 1.0]);
        let g = Tensor::identity(vec![ax("z", &Domain::range("D3", 3))]).unwrap();
        assert!(matches!(seq(&f, &g), Err(Error::Axis(_))));
    }

    #[test]
    fn par_of_identities_is_identity() {
        let e = Domain::range("E", 3);
        let p = par(
            &Tensor::identity(vec![ax("a", &d2())]).unwrap(),
            &Tensor::identity(vec![ax("b", &e)]).unwrap(),
        )
        .unwrap();
        let id = Tensor::identity(vec![ax("a", &d2()), ax("b", &e)]).unwrap();
        assert_eq!(p, id);
    }

    #[test]
    fn copier_shapes() {
        let c2 = copy(&d2(), 2);
        assert_eq!(c2.get(&[0, 0], &[0]), 1.0);
        assert_eq!(c2.get(&[0, 1], &[0]), 0.0);
        assert_eq!(copy(&Domain::range("D3", 3), 0).entries(), &[1.0, 1.0, 1.0]);
        let c3 = copy(&d2(), 3);
        assert_eq!(c3.entries().iter().filter(|&&v| v != 0.0).count(), 2);
        assert!(c3.entries().iter().all(|&v| v == 0.0 || v == 1.0));
        assert_eq!(
            copy(&d2(), 1),
            Tensor::identity(vec![ax("D2", &d2())]).unwrap()
        );
    }

    #[test]
    fn comonoid_homs_are_function_matrices() {
        let id = matrix(&d2(), &d2(), vec![1.0, 0.0, 0.0, 1.0]);
        assert!(is_comonoid_hom(&id).unwrap());
        let constant = matrix(&d2(), &d2(), vec![0.0, 0.0, 1.0, 1.0]);
        assert!(is_comonoid_hom(&constant).unwrap());
        let half = matrix(&d2(), &d2(), vec![0.5; 4]);
        assert!(!is_comonoid_hom(&half).unwrap());
        let dd = seq(&half, &copy(&d2(), 2)).unwrap();
        let ff = seq(&copy(&d2(), 2), &par(&half, &half).unwrap()).unwrap();
        assert_eq!(dd.get(&[0, 0], &[0]), 0.5);
        assert_eq!(ff.get(&[0, 0], &[0]), 0.25);
        assert!(matches!(
            is_comonoid_hom(&copy(&d2(), 2)),
            Err(Error::Axis(_))
        ));
    }

    #[test]
    fn permutations_roundtrip() {
        let c = copy(&d2(), 2);
        assert_eq!(permute_axes(&c, &[1, 0], &[0]).unwrap(), c);
        let e = Domain::range("E", 3);
        let t = Tensor::costate(
            vec![ax("a", &d2()), ax("b", &e)],
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        )
        .unwrap();
        let p = permute_axes(&t, &[], &[1, 0]).unwrap();
        assert_eq!(p.get(&[], &[2, 1]), 6.0);
        assert_eq!(p.get(&[], &[1, 0]), 2.0);
        assert_eq!(permute_axes(&p, &[], &[1, 0]).unwrap(), t);
        assert!(matches!(
            permute_axes(&t, &[], &[0, 0]),
            Err(Error::Axis(_))
        ));
    }

    #[test]
    fn precompose_with_copier_multiplies_along_the_diagonal() {
        let t = Tensor::costate(
            vec![ax("a", &d2()), ax("b", &d2())],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        let diag = precompose(&t, &[0, 1], &copy(&d2(), 2)).unwrap();
        assert_eq!(diag.entries(), &[1.0, 4.0]);
        let summed = precompose(&t, &[0], &copy(&d2(), 0).transpose()).unwrap();
        assert_eq!(summed.entries(), &[4.0, 6.0]);
    }

    #[test]
    fn product_domains_match_the_tensor_layout() {
        let e = Domain::range("E", 3);
        let p = Domain::product(&[d2(), e.clone()]).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.values()[4].as_str(), "(1,1)");
        assert_eq!(Domain::product(std::slice::from_ref(&e)).unwrap(), e);
        assert_eq!(Domain::product(&[]).unwrap(), Domain::unit());
    }

    #[test]
    fn domains_reject_empty_and_repeated_values() {
        assert!(Domain::new(label("D"), vec![]).is_err());
        assert!(Domain::new(label("D"), vec![label("a"), label("a")]).is_err());
    }
}
