//! Open factor graphs: cospans of finite sets whose apex carries typed ports
//! and a nonnegative factor over them.
//!
//! Two graphs sharing a boundary compose by pushing out their cospans and
//! copying every glued variable into each factor that mentions it, so the
//! composite factor is the pointwise product of the two. Vertical maps retype
//! ports along tables; on exposed ports those tables must be deterministic,
//! since only deterministic maps commute with copying.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finset::{compose_map, pushout, Cospan, FiniteMap, FiniteSet, Label, Pushout};
use crate::matcat::{
    self, close, copy, decode, encode, is_comonoid_hom, par, permute_axes, precompose, seq, Axis,
    Domain, Tensor,
};

pub const FACTOR_TOL: f64 = 1e-9;

/// Typed ports: a domain for each element of a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Interface {
    ports: FiniteSet,
    typing: Vec<Domain>,
}

impl Interface {
    pub fn new<I: IntoIterator<Item = (Label, Domain)>>(pairs: I) -> Result<Self> {
        let mut pairs: Vec<(Label, Domain)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let ports = FiniteSet::new(pairs.iter().map(|p| p.0.clone()))?;
        Ok(Interface {
            ports,
            typing: pairs.into_iter().map(|p| p.1).collect(),
        })
    }

    pub fn from_typing(ports: FiniteSet, typing: Vec<Domain>) -> Result<Self> {
        if ports.len() != typing.len() {
            return Err(Error::Port(format!(
                "{} ports but {} domains",
                ports.len(),
                typing.len()
            )));
        }
        Ok(Interface { ports, typing })
    }

    pub fn empty() -> Self {
        Interface::default()
    }

    pub fn ports(&self) -> &FiniteSet {
        &self.ports
    }

    pub fn typing(&self) -> &[Domain] {
        &self.typing
    }

    pub fn len(&self) -> usize {
        self.ports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ports.is_empty()
    }

    pub fn domain(&self, port: &Label) -> Result<&Domain> {
        self.ports
            .index_of(port)
            .map(|i| &self.typing[i])
            .ok_or_else(|| Error::Port(format!("no port {port}")))
    }

    pub fn domain_at(&self, i: usize) -> &Domain {
        &self.typing[i]
    }

    /// One axis per port, in port order.
    pub fn axes(&self) -> Vec<Axis> {
        self.ports
            .iter()
            .zip(&self.typing)
            .map(|(p, d)| Axis::new(p.clone(), d.clone()))
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.typing.iter().map(Domain::len).collect()
    }

    /// The interface `χ ∘ m` on the domain of `m: A → ports`.
    pub fn along(&self, m: &FiniteMap) -> Result<Interface> {
        if m.cod() != &self.ports {
            return Err(Error::Port(format!(
                "map lands in {}, interface has ports {}",
                m.cod(),
                self.ports
            )));
        }
        Ok(Interface {
            ports: m.dom().clone(),
            typing: m.images().iter().map(|&j| self.typing[j].clone()).collect(),
        })
    }
}

/// A costate on the product of an interface's domains, axes in port order.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    interface: Interface,
    table: Tensor,
}

impl Factor {
    /// Entries in mixed-radix order over the sorted ports, first port slowest.
    pub fn new(interface: Interface, entries: Vec<f64>) -> Result<Self> {
        let table = Tensor::costate(interface.axes(), entries)?;
        Ok(Factor { interface, table })
    }

    pub fn from_tensor(interface: Interface, table: Tensor) -> Result<Self> {
        if !table.is_costate() || table.in_axes() != interface.axes().as_slice() {
            return Err(Error::Axis("table axes do not match the interface".into()));
        }
        Ok(Factor { interface, table })
    }

    /// Fills the table from `f(value indices in port order)`.
    pub fn from_fn(interface: Interface, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let table = Tensor::from_fn(Vec::new(), interface.axes(), |_, digits| f(digits))?;
        Ok(Factor { interface, table })
    }

    /// The discarding factor: constantly one.
    pub fn ones(interface: Interface) -> Result<Self> {
        Factor::from_fn(interface, |_| 1.0)
    }

    pub fn interface(&self) -> &Interface {
        &self.interface
    }

    pub fn table(&self) -> &Tensor {
        &self.table
    }

    pub fn entries(&self) -> &[f64] {
        self.table.entries()
    }

    pub fn value(&self, digits: &[usize]) -> f64 {
        self.table.at(0, encode(digits, &self.interface.sizes()))
    }

    pub fn total(&self) -> f64 {
        self.table.total()
    }

    /// Renames ports along a bijection, reordering axes to the new port order.
    pub fn relabel(&self, iso: &FiniteMap) -> Result<Factor> {
        if iso.dom() != self.interface.ports() {
            return Err(Error::Port("relabeling does not start at the ports".into()));
        }
        let inv = iso.inverse()?;
        let perm: Vec<usize> = (0..inv.dom().len()).map(|k| inv.image(k)).collect();
        let typing: Vec<Domain> = perm
            .iter()
            .map(|&o| self.interface.typing[o].clone())
            .collect();
        let interface = Interface::from_typing(iso.cod().clone(), typing)?;
        let table = permute_axes(&self.table, &[], &perm)?.with_ports(&[], iso.cod().elements())?;
        Factor::from_tensor(interface, table)
    }

    pub fn approx_eq(&self, other: &Factor, tol: f64) -> bool {
        self.interface == other.interface && self.table.approx_eq(&other.table, tol)
    }

    pub fn max_abs_diff(&self, other: &Factor) -> f64 {
        if self.interface != other.interface {
            return f64::INFINITY;
        }
        self.table.max_abs_diff(&other.table)
    }
}

/// Feeds `comps[k]` into input axis `k` of `table`, for every axis; the
/// result's axes are the components' inputs in order.
fn precompose_each(table: &Tensor, comps: &[Tensor]) -> Result<Tensor> {
    if comps.len() != table.in_axes().len() {
        return Err(Error::Axis("one component per axis is required".into()));
    }
    let mut t = table.clone();
    for c in comps {
        t = precompose(&t, &[0], c)?;
    }
    Ok(t)
}

/// `f_*χ`: each target port is typed by the product of its fibre's domains.
pub fn pushforward_interface(f: &FiniteMap, chi: &Interface) -> Result<Interface> {
    if f.dom() != chi.ports() {
        return Err(Error::Port(format!(
            "map starts at {}, interface has ports {}",
            f.dom(),
            chi.ports()
        )));
    }
    let typing = (0..f.cod().len())
        .map(|y| {
            let fibre: Vec<Domain> = f
                .fibre_indices(y)
                .into_iter()
                .map(|x| chi.typing[x].clone())
                .collect();
            Domain::product(&fibre)
        })
        .collect::<Result<Vec<_>>>()?;
    Interface::from_typing(f.cod().clone(), typing)
}

/// A vertical map `(f, φ)`: a base map `f: X → X'` and, for each `x'`, a
/// table `(f_*χ)(x') → χ'(x')`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceMap {
    base: FiniteMap,
    source: Interface,
    target: Interface,
    components: Vec<Tensor>,
    deterministic: bool,
}

impl InterfaceMap {
    pub fn new(
        base: FiniteMap,
        source: Interface,
        target: Interface,
        components: Vec<Tensor>,
    ) -> Result<Self> {
        if base.cod() != target.ports() {
            return Err(Error::Port(
                "base map does not land in the target ports".into(),
            ));
        }
        let pushed = pushforward_interface(&base, &source)?;
        if components.len() != target.len() {
            return Err(Error::Port(format!(
                "{} components for {} ports",
                components.len(),
                target.len()
            )));
        }
        let mut normalized = Vec::with_capacity(components.len());
        for (k, c) in components.iter().enumerate() {
            let ok = matches!(
                (c.in_axes(), c.out_axes()),
                ([i], [o]) if i.domain == pushed.typing[k] && o.domain == target.typing[k]
            );
            if !ok {
                return Err(Error::Type(format!(
                    "component at {} is not a map {:?} → {:?}",
                    target.ports().get(k),
                    pushed.typing[k],
                    target.typing[k]
                )));
            }
            let port = target.ports().get(k).clone();
            normalized
                .push(c.with_ports(std::slice::from_ref(&port), std::slice::from_ref(&port))?);
        }
        let mut deterministic = true;
        for c in &normalized {
            deterministic &= is_comonoid_hom(c)?;
        }
        Ok(InterfaceMap {
            base,
            source,
            target,
            components: normalized,
            deterministic,
        })
    }

    pub fn identity(chi: &Interface) -> Self {
        let components = chi
            .axes()
            .into_iter()
            .map(|a| Tensor::identity(vec![a]).expect("identity fits the cap"))
            .collect();
        InterfaceMap {
            base: FiniteMap::identity(chi.ports()),
            source: chi.clone(),
            target: chi.clone(),
            components,
            deterministic: true,
        }
    }

    pub fn base(&self) -> &FiniteMap {
        &self.base
    }

    pub fn source(&self) -> &Interface {
        &self.source
    }

    pub fn target(&self) -> &Interface {
        &self.target
    }

    pub fn components(&self) -> &[Tensor] {
        &self.components
    }

    pub fn component(&self, port: &Label) -> Result<&Tensor> {
        self.target
            .ports()
            .index_of(port)
            .map(|k| &self.components[k])
            .ok_or_else(|| Error::Port(format!("no component at {port}")))
    }

    /// Whether every component commutes with copy and discard.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// `φ^* p'`, expressed on the source ports: each target port's table is
    /// fed through its component and split back into the fibre's ports.
    pub fn pull_factor(&self, p: &Factor) -> Result<Factor> {
        if p.interface != self.target {
            return Err(Error::Type(
                "factor does not live on the map's target".into(),
            ));
        }
        let split = (0..self.target.len())
            .map(|k| {
                let fibre: Vec<Axis> = self
                    .base
                    .fibre_indices(k)
                    .into_iter()
                    .map(|x| {
                        Axis::new(
                            self.source.ports.get(x).clone(),
                            self.source.typing[x].clone(),
                        )
                    })
                    .collect();
                self.components[k].split_in(fibre)
            })
            .collect::<Result<Vec<_>>>()?;
        let t = precompose_each(&p.table, &split)?;
        // Axes now run over fibres in target order; sort them back by port.
        let order: Vec<usize> = (0..self.target.len())
            .flat_map(|k| self.base.fibre_indices(k))
            .collect();
        let perm = matcat::inverse_permutation(&order)?;
        let sorted = permute_axes(&t, &[], &perm)?;
        Factor::from_tensor(self.source.clone(), sorted)
    }
}

/// `g_*φ` for `φ` over `X'` and `g: X' → Y`: the fibrewise tensor product of
/// components, as a map over `Y` with identity base.
pub fn pushforward_map(g: &FiniteMap, phi: &InterfaceMap) -> Result<InterfaceMap> {
    if g.dom() != phi.target.ports() {
        return Err(Error::Port(
            "map does not start at the components' ports".into(),
        ));
    }
    let pushed_source = pushforward_interface(g, &pushforward_interface(&phi.base, &phi.source)?)?;
    let pushed_target = pushforward_interface(g, &phi.target)?;
    let components = (0..g.cod().len())
        .map(|y| {
            let port = g.cod().get(y).clone();
            let mut t = Tensor::scalar(1.0)?;
            for x in g.fibre_indices(y) {
                t = par(&t, &phi.components[x])?;
            }
            t.fuse_in(port.clone())?.fuse_out(port)
        })
        .collect::<Result<Vec<_>>>()?;
    InterfaceMap::new(
        FiniteMap::identity(g.cod()),
        pushed_source,
        pushed_target,
        components,
    )
}

/// The permutation `((f'∘f)_*χ)(y) → (f'_* f_* χ)(y)` regrouping a flat
/// fibre by its intermediate images.
fn reassociate(f: &FiniteMap, f2: &FiniteMap, chi: &Interface, y: usize) -> Result<Tensor> {
    let port = f2.cod().get(y).clone();
    let mids = f2.fibre_indices(y);
    let inner: Vec<Vec<usize>> = mids.iter().map(|&m| f.fibre_indices(m)).collect();
    let mut flat: Vec<usize> = inner.iter().flatten().copied().collect();
    flat.sort_unstable();
    let flat_domains: Vec<Domain> = flat.iter().map(|&x| chi.typing[x].clone()).collect();
    let inner_domains: Vec<Domain> = inner
        .iter()
        .map(|xs| {
            Domain::product(
                &xs.iter()
                    .map(|&x| chi.typing[x].clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect::<Result<_>>()?;
    let nested = Domain::product(&inner_domains)?;
    let flat_domain = Domain::product(&flat_domains)?;
    let flat_sizes: Vec<usize> = flat_domains.iter().map(Domain::len).collect();
    let inner_sizes: Vec<usize> = inner_domains.iter().map(Domain::len).collect();
    let position: HashMap<usize, usize> = flat.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let image: Vec<usize> = (0..flat_domain.len())
        .map(|i| {
            let digits = decode(i, &flat_sizes);
            let outer: Vec<usize> = inner
                .iter()
                .map(|xs| {
                    let d: Vec<usize> = xs.iter().map(|x| digits[position[x]]).collect();
                    let s: Vec<usize> = xs.iter().map(|&x| chi.typing[x].len()).collect();
                    encode(&d, &s)
                })
                .collect();
            encode(&outer, &inner_sizes)
        })
        .collect();
    Tensor::from_fn(
        vec![Axis::new(port.clone(), nested)],
        vec![Axis::new(port, flat_domain)],
        |o, i| if image[i[0]] == o[0] { 1.0 } else { 0.0 },
    )
}

/// Vertical composite `(f'∘f, φ'∘f'_*φ)`.
pub fn vcompose(v1: &InterfaceMap, v2: &InterfaceMap) -> Result<InterfaceMap> {
    if v1.target != v2.source {
        return Err(Error::Composition("vertical maps do not meet".into()));
    }
    let pushed = pushforward_map(&v2.base, v1)?;
    let components = (0..v2.target.len())
        .map(|y| {
            let r = reassociate(&v1.base, &v2.base, &v1.source, y)?;
            seq(&seq(&r, &pushed.components[y])?, &v2.components[y])
        })
        .collect::<Result<Vec<_>>>()?;
    InterfaceMap::new(
        compose_map(&v1.base, &v2.base)?,
        v1.source.clone(),
        v2.target.clone(),
        components,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A horizontal 1-cell `A → X ← B` with a factor on typed apex ports.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenFactorGraph {
    cospan: Cospan,
    factor: Factor,
    left_foot: Interface,
    right_foot: Interface,
}

impl OpenFactorGraph {
    /// Feet are typed by restricting the apex interface along the legs.
    pub fn new(cospan: Cospan, factor: Factor) -> Result<Self> {
        if factor.interface.ports() != cospan.apex() {
            return Err(Error::Port("factor ports are not the cospan apex".into()));
        }
        let left_foot = factor.interface.along(cospan.left())?;
        let right_foot = factor.interface.along(cospan.right())?;
        Ok(OpenFactorGraph {
            cospan,
            factor,
            left_foot,
            right_foot,
        })
    }

    /// Like [`OpenFactorGraph::new`], insisting the feet are as given.
    pub fn with_feet(
        cospan: Cospan,
        factor: Factor,
        left: Interface,
        right: Interface,
    ) -> Result<Self> {
        let g = OpenFactorGraph::new(cospan, factor)?;
        if g.left_foot != left || g.right_foot != right {
            return Err(Error::Type(
                "feet are not typed like the ports they expose".into(),
            ));
        }
        Ok(g)
    }

    pub fn cospan(&self) -> &Cospan {
        &self.cospan
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn interface(&self) -> &Interface {
        &self.factor.interface
    }

    pub fn left_foot(&self) -> &Interface {
        &self.left_foot
    }

    pub fn right_foot(&self) -> &Interface {
        &self.right_foot
    }

    /// Moves the apex along a bijection.
    pub fn transport(&self, iso: &FiniteMap) -> Result<OpenFactorGraph> {
        let cospan = Cospan::new(
            compose_map(self.cospan.left(), iso)?,
            compose_map(self.cospan.right(), iso)?,
        )?;
        OpenFactorGraph::new(cospan, self.factor.relabel(iso)?)
    }

    /// Same cospan and interface, factors within relative `tol`.
    pub fn approx_eq(&self, other: &OpenFactorGraph, tol: f64) -> bool {
        self.cospan == other.cospan && self.factor.approx_eq(&other.factor, tol)
    }
}

/// The stored foot interface on one side.
pub fn project_foot(g: &OpenFactorGraph, side: Side) -> Interface {
    match side {
        Side::Left => g.left_foot.clone(),
        Side::Right => g.right_foot.clone(),
    }
}

/// The identity cospan on `alpha` with the discarding factor.
pub fn hunit(alpha: &Interface) -> Result<OpenFactorGraph> {
    OpenFactorGraph::new(
        Cospan::identity(alpha.ports()),
        Factor::ones(alpha.clone())?,
    )
}

/// A composite together with the pushout its apex came from.
#[derive(Clone, Debug)]
pub struct Composition {
    pub graph: OpenFactorGraph,
    pub pushout: Pushout,
}

/// Copy-composite `([χ,γ]_B, (f⊗g)∘δ)` along the shared foot.
pub fn hcompose(g1: &OpenFactorGraph, g2: &OpenFactorGraph) -> Result<OpenFactorGraph> {
    Ok(hcompose_with_pushout(g1, g2)?.graph)
}

pub fn hcompose_with_pushout(g1: &OpenFactorGraph, g2: &OpenFactorGraph) -> Result<Composition> {
    let c = compose_impl(g1, g2, &copy)?;
    debug_assert!(
        pointwise_law_holds(g1, g2, &c)?,
        "copy-composite is not the pointwise product"
    );
    Ok(c)
}

/// Copy-composition with a caller-supplied copier family, for fault
/// injection. `copier(d, k)` must have one input and `k` outputs on `d`.
pub fn hcompose_with_copier(
    g1: &OpenFactorGraph,
    g2: &OpenFactorGraph,
    copier: &dyn Fn(&Domain, usize) -> Tensor,
) -> Result<Composition> {
    compose_impl(g1, g2, copier)
}

fn compose_impl(
    g1: &OpenFactorGraph,
    g2: &OpenFactorGraph,
    copier: &dyn Fn(&Domain, usize) -> Tensor,
) -> Result<Composition> {
    let (b, b2) = (g1.cospan.right(), g2.cospan.left());
    if b.dom() != b2.dom() {
        return Err(Error::Composition(format!(
            "right foot {} does not match left foot {}",
            b.dom(),
            b2.dom()
        )));
    }
    for k in 0..b.dom().len() {
        if g1.right_foot.typing[k] != g2.left_foot.typing[k] {
            return Err(Error::Type(format!(
                "shared port {} is typed {:?} and {:?}",
                b.dom().get(k),
                g1.right_foot.typing[k],
                g2.left_foot.typing[k]
            )));
        }
    }
    let po = pushout(b, b2)?;
    let (chi, gamma) = (g1.interface(), g2.interface());
    let mut typing: Vec<Option<Domain>> = vec![None; po.apex().len()];
    let members = po
        .in_left()
        .images()
        .iter()
        .zip(chi.typing())
        .chain(po.in_right().images().iter().zip(gamma.typing()));
    for (&j, d) in members {
        match &typing[j] {
            Some(existing) if existing != d => {
                return Err(Error::Type(format!(
                    "glued port {} has domains {existing:?} and {d:?}",
                    po.apex().get(j)
                )))
            }
            Some(_) => {}
            None => typing[j] = Some(d.clone()),
        }
    }
    let typing: Vec<Domain> = typing
        .into_iter()
        .map(|d| d.expect("every class has a member"))
        .collect();
    let interface = Interface::from_typing(po.apex().clone(), typing)?;

    // Axis k of the running table belongs to class slots[k]; None once copied.
    let mut table = par(&g1.factor.table, &g2.factor.table)?;
    let mut slots: Vec<Option<usize>> = po
        .in_left()
        .images()
        .iter()
        .chain(po.in_right().images())
        .map(|&j| Some(j))
        .collect();
    for j in 0..po.apex().len() {
        let positions: Vec<usize> = (0..slots.len()).filter(|&k| slots[k] == Some(j)).collect();
        let delta = copier(&interface.typing[j], positions.len());
        table = precompose(&table, &positions, &delta)?;
        slots = slots
            .iter()
            .enumerate()
            .filter(|(k, _)| !positions.contains(k))
            .map(|(_, s)| *s)
            .collect();
        slots.push(None);
    }
    let table = table.with_ports(&[], po.apex().elements())?;
    let factor = Factor::from_tensor(interface, table)?;
    let cospan = Cospan::new(
        compose_map(g1.cospan.left(), po.in_left())?,
        compose_map(g2.cospan.right(), po.in_right())?,
    )?;
    Ok(Composition {
        graph: OpenFactorGraph::new(cospan, factor)?,
        pushout: po,
    })
}

/// Whether the composite's value at every assignment is the product of the
/// two factors at its restrictions.
pub fn pointwise_law_holds(
    g1: &OpenFactorGraph,
    g2: &OpenFactorGraph,
    c: &Composition,
) -> Result<bool> {
    let h = &c.graph.factor;
    let sizes = h.interface.sizes();
    let (il, ir) = (c.pushout.in_left(), c.pushout.in_right());
    let n = h.entries().len();
    for idx in 0..n {
        let s = decode(idx, &sizes);
        let sx: Vec<usize> = il.images().iter().map(|&j| s[j]).collect();
        let sy: Vec<usize> = ir.images().iter().map(|&j| s[j]).collect();
        let expected = g1.factor.value(&sx) * g2.factor.value(&sy);
        if !close(h.entries()[idx], expected, FACTOR_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `((g1;g2);g3)`, `(g1;(g2;g3))` and the bijection between their apices
/// given by the pushouts' universal properties.
pub fn associator(
    g1: &OpenFactorGraph,
    g2: &OpenFactorGraph,
    g3: &OpenFactorGraph,
    copier: &dyn Fn(&Domain, usize) -> Tensor,
) -> Result<(OpenFactorGraph, OpenFactorGraph, FiniteMap)> {
    let p1 = hcompose_with_copier(g1, g2, copier)?;
    let p2 = hcompose_with_copier(&p1.graph, g3, copier)?;
    let q1 = hcompose_with_copier(g2, g3, copier)?;
    let q2 = hcompose_with_copier(g1, &q1.graph, copier)?;
    let y_to_q = compose_map(q1.pushout.in_left(), q2.pushout.in_right())?;
    let z_to_q = compose_map(q1.pushout.in_right(), q2.pushout.in_right())?;
    let p1_to_q = p1.pushout.copair(q2.pushout.in_left(), &y_to_q)?;
    let iso = p2.pushout.copair(&p1_to_q, &z_to_q)?;
    if !iso.is_bijection() {
        return Err(Error::Universality("associator is not a bijection".into()));
    }
    Ok((p2.graph, q2.graph, iso))
}

/// `hunit;g` with the bijection from its apex onto `g`'s apex.
pub fn left_unitor(g: &OpenFactorGraph) -> Result<(OpenFactorGraph, FiniteMap)> {
    let c = hcompose_with_pushout(&hunit(&g.left_foot)?, g)?;
    let iso = c
        .pushout
        .copair(g.cospan.left(), &FiniteMap::identity(g.cospan.apex()))?;
    Ok((c.graph, iso))
}

/// `g;hunit` with the bijection from its apex onto `g`'s apex.
pub fn right_unitor(g: &OpenFactorGraph) -> Result<(OpenFactorGraph, FiniteMap)> {
    let c = hcompose_with_pushout(g, &hunit(&g.right_foot)?)?;
    let iso = c
        .pushout
        .copair(&FiniteMap::identity(g.cospan.apex()), g.cospan.right())?;
    Ok((c.graph, iso))
}

/// Retypes the listed ports of `f` by precomposing with the given tables
/// (each `new domain → old domain`).
fn retype(f: &Factor, changes: &HashMap<usize, &Tensor>) -> Result<Factor> {
    let comps = f
        .interface
        .axes()
        .into_iter()
        .enumerate()
        .map(|(k, axis)| match changes.get(&k) {
            Some(t) => Ok((*t).clone()),
            None => Tensor::identity(vec![axis]),
        })
        .collect::<Result<Vec<_>>>()?;
    let t = precompose_each(&f.table, &comps)?;
    let typing: Vec<Domain> = t.in_axes().iter().map(|a| a.domain.clone()).collect();
    let interface = Interface::from_typing(f.interface.ports.clone(), typing)?;
    let t = t.with_ports(&[], interface.ports.elements())?;
    Factor::from_tensor(interface, t)
}

/// Outcome of comparing the two ways round the naturality square.
#[derive(Clone, Debug)]
pub struct Naturality {
    /// Compose the retyped graphs.
    pub transform_then_compose: Factor,
    /// Compose, then retype the glued ports.
    pub compose_then_transform: Factor,
    pub residual: f64,
    pub holds: bool,
}

/// Retypes the shared foot of `g1` and `g2` by `β` (components run from the
/// new domains to the current ones) either before or after composing them.
/// Both legs into the shared foot must be injective.
pub fn check_naturality(
    beta: &InterfaceMap,
    g1: &OpenFactorGraph,
    g2: &OpenFactorGraph,
) -> Result<Naturality> {
    if !beta.base.is_identity()
        || beta.base.dom() != g1.cospan.right().dom()
        || beta.target != g1.right_foot
        || beta.target != g2.left_foot
    {
        return Err(Error::Type("β must retype the shared foot in place".into()));
    }
    let (b, b2) = (g1.cospan.right(), g2.cospan.left());
    if !b.is_injective() || !b2.is_injective() {
        return Err(Error::Port("shared foot must expose distinct ports".into()));
    }
    let on = |leg: &FiniteMap| -> HashMap<usize, &Tensor> {
        (0..leg.dom().len())
            .map(|k| (leg.image(k), &beta.components[k]))
            .collect()
    };
    let g1t = OpenFactorGraph::new(g1.cospan.clone(), retype(&g1.factor, &on(b))?)?;
    let g2t = OpenFactorGraph::new(g2.cospan.clone(), retype(&g2.factor, &on(b2))?)?;
    let left = hcompose(&g1t, &g2t)?.factor;

    let c = hcompose_with_pushout(g1, g2)?;
    let glued = compose_map(b, c.pushout.in_left())?;
    let right = retype(&c.graph.factor, &on(&glued))?;
    let residual = left.max_abs_diff(&right);
    Ok(Naturality {
        holds: residual <= FACTOR_TOL,
        transform_then_compose: left,
        compose_then_transform: right,
        residual,
    })
}

/// Sums out every port not in `keep`.
pub fn marginal(f: &Factor, keep: &[Label]) -> Result<Factor> {
    for k in keep {
        f.interface.domain(k)?;
    }
    let comps: Vec<Tensor> = f
        .interface
        .axes()
        .into_iter()
        .map(|axis| {
            if keep.contains(&axis.port) {
                Tensor::identity(vec![axis])
            } else {
                Ok(copy(&axis.domain, 0).transpose())
            }
        })
        .collect::<Result<_>>()?;
    let t = precompose_each(&f.table, &comps)?;
    let kept: Vec<(Label, Domain)> = f
        .interface
        .axes()
        .into_iter()
        .filter(|a| keep.contains(&a.port))
        .map(|a| (a.port, a.domain))
        .collect();
    let interface = Interface::new(kept)?;
    let t = t.with_ports(&[], interface.ports.elements())?;
    Factor::from_tensor(interface, t)
}

/// A 2-cell: vertical maps on both feet and on the apex making the factor
/// condition `p = φ^* p'` hold.
#[derive(Clone, Debug)]
pub struct OfgCell {
    top: OpenFactorGraph,
    bottom: OpenFactorGraph,
    left: InterfaceMap,
    mid: InterfaceMap,
    right: InterfaceMap,
}

impl OfgCell {
    pub fn new(
        top: OpenFactorGraph,
        bottom: OpenFactorGraph,
        left: InterfaceMap,
        mid: InterfaceMap,
        right: InterfaceMap,
    ) -> Result<Self> {
        if mid.source != *top.interface()
            || mid.target != *bottom.interface()
            || left.source != top.left_foot
            || left.target != bottom.left_foot
            || right.source != top.right_foot
            || right.target != bottom.right_foot
        {
            return Err(Error::Composition(
                "cell maps do not connect the graphs".into(),
            ));
        }
        if !left.deterministic || !right.deterministic {
            return Err(Error::Cell("foot maps must be deterministic".into()));
        }
        let (a, b) = (top.cospan.left(), top.cospan.right());
        let (a2, b2) = (bottom.cospan.left(), bottom.cospan.right());
        if compose_map(&left.base, a2)? != compose_map(a, &mid.base)?
            || compose_map(&right.base, b2)? != compose_map(b, &mid.base)?
        {
            return Err(Error::Cell(
                "base maps do not form a cospan morphism".into(),
            ));
        }
        for (foot, leg) in [(&left, a2), (&right, b2)] {
            for k in 0..leg.dom().len() {
                let projected = &mid.components[leg.image(k)];
                let given = &foot.components[k];
                if !projected.same_shape(given) || projected.entries() != given.entries() {
                    return Err(Error::Cell(format!(
                        "apex map at {} disagrees with its foot map",
                        leg.cod().get(leg.image(k))
                    )));
                }
            }
        }
        let pulled = mid.pull_factor(&bottom.factor)?;
        if !pulled.approx_eq(&top.factor, FACTOR_TOL) {
            return Err(Error::Cell(
                "top factor is not the pullback of the bottom one".into(),
            ));
        }
        Ok(OfgCell {
            top,
            bottom,
            left,
            mid,
            right,
        })
    }

    pub fn identity(g: &OpenFactorGraph) -> Self {
        OfgCell {
            top: g.clone(),
            bottom: g.clone(),
            left: InterfaceMap::identity(&g.left_foot),
            mid: InterfaceMap::identity(g.interface()),
            right: InterfaceMap::identity(&g.right_foot),
        }
    }

    pub fn top(&self) -> &OpenFactorGraph {
        &self.top
    }

    pub fn bottom(&self) -> &OpenFactorGraph {
        &self.bottom
    }

    pub fn left(&self) -> &InterfaceMap {
        &self.left
    }

    pub fn mid(&self) -> &InterfaceMap {
        &self.mid
    }

    pub fn right(&self) -> &InterfaceMap {
        &self.right
    }
}

/// Stacks `c2` below `c1`.
pub fn cell_vcompose(c1: &OfgCell, c2: &OfgCell) -> Result<OfgCell> {
    if c1.bottom.cospan != c2.top.cospan || !c1.bottom.factor.approx_eq(&c2.top.factor, FACTOR_TOL)
    {
        return Err(Error::Composition("cells do not stack".into()));
    }
    OfgCell::new(
        c1.top.clone(),
        c2.bottom.clone(),
        vcompose(&c1.left, &c2.left)?,
        vcompose(&c1.mid, &c2.mid)?,
        vcompose(&c1.right, &c2.right)?,
    )
}

/// Places `c2` beside `c1`. The apex map is the pushout copairing, and each
/// apex component routes class values to the fibre members before applying
/// the component of the side that owns the class.
pub fn cell_hcompose(c1: &OfgCell, c2: &OfgCell) -> Result<OfgCell> {
    if c1.right != c2.left {
        return Err(Error::Composition(
            "cells disagree on the shared boundary".into(),
        ));
    }
    let top = hcompose_with_pushout(&c1.top, &c2.top)?;
    let bottom = hcompose_with_pushout(&c1.bottom, &c2.bottom)?;
    let (po, po2) = (&top.pushout, &bottom.pushout);
    let base = po.copair(
        &compose_map(&c1.mid.base, po2.in_left())?,
        &compose_map(&c2.mid.base, po2.in_right())?,
    )?;
    let source = top.graph.interface();
    let components = (0..po2.apex().len())
        .map(|j2| {
            let (lefts, rights) = po2.class_members(j2);
            let (cell, member, to_class) = match (lefts.first(), rights.first()) {
                (Some(&x), _) => (c1, x, po.in_left()),
                (None, Some(&y)) => (c2, y, po.in_right()),
                (None, None) => unreachable!("pushout classes are nonempty"),
            };
            let fibre = cell.mid.base.fibre_indices(member);
            let classes = base.fibre_indices(j2);
            let port = po2.apex().get(j2).clone();
            let class_domains: Vec<Domain> =
                classes.iter().map(|&j| source.typing[j].clone()).collect();
            let class_sizes: Vec<usize> = class_domains.iter().map(Domain::len).collect();
            let member_domains: Vec<Domain> = fibre
                .iter()
                .map(|&x| cell.mid.source.typing[x].clone())
                .collect();
            let member_sizes: Vec<usize> = member_domains.iter().map(Domain::len).collect();
            let slot: Vec<usize> = fibre
                .iter()
                .map(|&x| {
                    let j = to_class.image(x);
                    classes
                        .iter()
                        .position(|&c| c == j)
                        .expect("member's class maps here")
                })
                .collect();
            let route = Tensor::from_fn(
                vec![Axis::new(port.clone(), Domain::product(&member_domains)?)],
                vec![Axis::new(port.clone(), Domain::product(&class_domains)?)],
                |o, i| {
                    let cls = decode(i[0], &class_sizes);
                    let mem: Vec<usize> = slot.iter().map(|&s| cls[s]).collect();
                    if encode(&mem, &member_sizes) == o[0] {
                        1.0
                    } else {
                        0.0
                    }
                },
            )?;
            seq(&route, &cell.mid.components[member])
        })
        .collect::<Result<Vec<_>>>()?;
    let mid = InterfaceMap::new(
        base,
        source.clone(),
        bottom.graph.interface().clone(),
        components,
    )?;
    OfgCell::new(
        top.graph,
        bottom.graph,
        c1.left.clone(),
        mid,
        c2.right.clone(),
    )
}

/// The graph on `apex` whose factor is `f` times one on the remaining ports,
/// exposing `left` and `right` by inclusion.
pub fn leaf(
    apex: &Interface,
    f: &Factor,
    left: &FiniteSet,
    right: &FiniteSet,
) -> Result<OpenFactorGraph> {
    let scope: Vec<usize> = f
        .interface
        .ports
        .iter()
        .map(|p| {
            let k = apex
                .ports
                .index_of(p)
                .ok_or_else(|| Error::Port(format!("factor port {p} not in the apex")))?;
            if apex.typing[k] != *f.interface.domain(p)? {
                return Err(Error::Type(format!("port {p} is typed differently")));
            }
            Ok(k)
        })
        .collect::<Result<_>>()?;
    let factor = Factor::from_fn(apex.clone(), |s| {
        let sub: Vec<usize> = scope.iter().map(|&k| s[k]).collect();
        f.value(&sub)
    })?;
    let cospan = Cospan::new(
        FiniteMap::inclusion(left, apex.ports())?,
        FiniteMap::inclusion(right, apex.ports())?,
    )?;
    OpenFactorGraph::new(cospan, factor)
}

/// Splits a product of factors into a chain of composable graphs, one per
/// factor. A variable is carried from the first factor that mentions it to
/// the last, so composing the chain in any association yields the product of
/// all factors over `all`, exposing `open_left` and `open_right`. Variables
/// no factor mentions ride on the first leaf.
pub fn chain_leaves(
    all: &Interface,
    factors: &[Factor],
    open_left: &FiniteSet,
    open_right: &FiniteSet,
) -> Result<Vec<OpenFactorGraph>> {
    for p in open_left.iter().chain(open_right.iter()) {
        all.domain(p)?;
    }
    let n = factors.len();
    if n == 0 {
        let ones = Factor::ones(Interface::empty())?;
        return Ok(vec![leaf(all, &ones, open_left, open_right)?]);
    }
    let scope = |i: usize| -> Vec<Label> { factors[i].interface.ports.elements().to_vec() };
    let covered: Vec<Label> = (0..n).flat_map(scope).collect();
    let uncovered: Vec<Label> = all
        .ports
        .iter()
        .filter(|p| !covered.contains(p))
        .cloned()
        .collect();

    // prefix[i]: variables seen before leaf i; suffix[i]: needed from leaf i on.
    let mut boundaries = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i == 0 || i == n {
            boundaries.push(if i == 0 {
                open_left.clone()
            } else {
                open_right.clone()
            });
            continue;
        }
        let mut prefix: Vec<Label> = open_left.elements().to_vec();
        if i > 0 {
            prefix.extend(uncovered.iter().cloned());
        }
        prefix.extend((0..i).flat_map(scope));
        let mut suffix: Vec<Label> = open_right.elements().to_vec();
        suffix.extend((i..n).flat_map(scope));
        let mut b: Vec<Label> = prefix.into_iter().filter(|p| suffix.contains(p)).collect();
        b.sort();
        b.dedup();
        boundaries.push(FiniteSet::new(b)?);
    }
    (0..n)
        .map(|i| {
            let mut ports: Vec<Label> = scope(i);
            ports.extend(boundaries[i].iter().cloned());
            ports.extend(boundaries[i + 1].iter().cloned());
            if i == 0 {
                ports.extend(uncovered.iter().cloned());
            }
            ports.sort();
            ports.dedup();
            let apex = Interface::new(
                ports
                    .into_iter()
                    .map(|p| all.domain(&p).map(|d| (p.clone(), d.clone())))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            leaf(&apex, &factors[i], &boundaries[i], &boundaries[i + 1])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::label;

    fn d2() -> Domain {
        Domain::range("D2", 2)
    }

    fn iface(ports: &[&str], d: &Domain) -> Interface {
        Interface::new(ports.iter().map(|p| (label(p), d.clone()))).unwrap()
    }

    fn open(ports: &[&str], left: &[&str], right: &[&str], entries: Vec<f64>) -> OpenFactorGraph {
        let i = iface(ports, &d2());
        let cospan = Cospan::new(
            FiniteMap::inclusion(&FiniteSet::of(left), i.ports()).unwrap(),
            FiniteMap::inclusion(&FiniteSet::of(right), i.ports()).unwrap(),
        )
        .unwrap();
        OpenFactorGraph::new(cospan, Factor::new(i, entries).unwrap()).unwrap()
    }

    #[test]
    fn pushforward_multiplies_fibre_domains() {
        let chi =
            Interface::new([(label("x"), d2()), (label("y"), Domain::range("D3", 3))]).unwrap();
        let f = FiniteMap::to_point(chi.ports(), &FiniteSet::of(&["z"])).unwrap();
        let pushed = pushforward_interface(&f, &chi).unwrap();
        assert_eq!(pushed.domain(&label("z")).unwrap().len(), 6);
        let id = FiniteMap::identity(chi.ports());
        assert_eq!(pushforward_interface(&id, &chi).unwrap(), chi);
    }

    #[test]
    fn two_factor_composite() {
        let f = open(&["a", "b"], &["a"], &["b"], vec![1.0, 2.0, 3.0, 4.0]);
        let g = open(&["b", "c"], &["b"], &["c"], vec![5.0, 6.0, 7.0, 8.0]);
        let h = hcompose(&f, &g).unwrap();
        assert_eq!(h.interface().ports(), &FiniteSet::of(&["a", "b", "c"]));
        assert_eq!(h.factor().value(&[0, 0, 0]), 5.0);
        assert_eq!(h.factor().value(&[1, 0, 1]), 18.0);
        let m = marginal(h.factor(), &[label("a"), label("c")]).unwrap();
        assert_eq!(m.value(&[0, 0]), 19.0);
    }

    #[test]
    fn empty_gluing_is_a_tensor_product() {
        let f = open(&["a"], &[], &[], vec![1.0, 2.0]);
        let g = open(&["c"], &[], &[], vec![3.0, 5.0]);
        let h = hcompose(&f, &g).unwrap();
        assert_eq!(h.factor().entries(), &[3.0, 5.0, 6.0, 10.0]);
    }

    #[test]
    fn units() {
        let u = hunit(&iface(&["p"], &Domain::range("D3", 3))).unwrap();
        assert_eq!(u.factor().entries(), &[1.0, 1.0, 1.0]);
        assert_eq!(
            hunit(&Interface::empty()).unwrap().factor().entries(),
            &[1.0]
        );
        let g = open(&["a", "b"], &["a"], &["b"], vec![1.0, 2.0, 3.0, 4.0]);
        let (lg, iso) = left_unitor(&g).unwrap();
        assert!(lg.transport(&iso).unwrap().approx_eq(&g, 0.0));
        let (rg, iso) = right_unitor(&g).unwrap();
        assert!(rg.transport(&iso).unwrap().approx_eq(&g, 0.0));
    }

    #[test]
    fn typing_disagreement_is_reported() {
        let f = open(&["a", "b"], &["a"], &["b"], vec![1.0; 4]);
        let i = Interface::new([(label("b"), Domain::range("D3", 3))]).unwrap();
        let g = hunit(&i).unwrap();
        assert!(matches!(hcompose(&f, &g), Err(Error::Type(_))));
        let h = hunit(&iface(&["q"], &d2())).unwrap();
        assert!(matches!(hcompose(&f, &h), Err(Error::Composition(_))));
    }

    fn beta(entries: Vec<f64>) -> InterfaceMap {
        let b = iface(&["b"], &d2());
        let t = Tensor::new(
            vec![Axis::new(label("b"), d2())],
            vec![Axis::new(label("b"), d2())],
            entries,
        )
        .unwrap();
        InterfaceMap::new(FiniteMap::identity(b.ports()), b.clone(), b, vec![t]).unwrap()
    }

    #[test]
    fn stochastic_retyping_is_not_natural() {
        let f = open(&["b"], &[], &["b"], vec![1.0, 2.0]);
        let g = open(&["b"], &["b"], &[], vec![3.0, 5.0]);
        let n = check_naturality(&beta(vec![0.5; 4]), &f, &g).unwrap();
        assert!(!n.holds);
        assert_eq!(n.transform_then_compose.entries(), &[6.0, 6.0]);
        assert_eq!(n.compose_then_transform.entries(), &[6.5, 6.5]);
        assert_eq!(n.residual, 0.5);
        let n = check_naturality(&beta(vec![0.0, 0.0, 1.0, 1.0]), &f, &g).unwrap();
        assert!(n.holds);
        let n = check_naturality(&beta(vec![1.0, 0.0, 0.0, 1.0]), &f, &g).unwrap();
        assert_eq!(n.residual, 0.0);
    }

    #[test]
    fn marginal_extremes() {
        let f = open(&["a", "b"], &[], &[], vec![1.0, 2.0, 3.0, 4.0]);
        let all = marginal(f.factor(), &[label("a"), label("b")]).unwrap();
        assert_eq!(&all, f.factor());
        assert_eq!(marginal(f.factor(), &[]).unwrap().entries(), &[10.0]);
        assert!(matches!(
            marginal(f.factor(), &[label("z")]),
            Err(Error::Port(_))
        ));
    }

    #[test]
    fn deterministic_flag_is_computed() {
        assert!(beta(vec![0.0, 1.0, 1.0, 0.0]).is_deterministic());
        assert!(!beta(vec![0.5; 4]).is_deterministic());
    }

    #[test]
    fn vertical_identity_is_neutral() {
        let v = beta(vec![0.2, 0.3, 0.8, 0.7]);
        let id = InterfaceMap::identity(v.source());
        assert_eq!(vcompose(&id, &v).unwrap(), v);
        assert_eq!(vcompose(&v, &id).unwrap(), v);
    }

    #[test]
    fn identity_cells_compose() {
        let f = open(&["a", "b"], &["a"], &["b"], vec![1.0, 2.0, 3.0, 4.0]);
        let g = open(&["b", "c"], &["b"], &["c"], vec![5.0, 6.0, 7.0, 8.0]);
        let c = cell_hcompose(&OfgCell::identity(&f), &OfgCell::identity(&g)).unwrap();
        assert!(c.mid().base().is_identity());
        assert!(c.mid().is_deterministic());
        let v = cell_vcompose(&OfgCell::identity(&f), &OfgCell::identity(&f)).unwrap();
        assert_eq!(v.mid(), &InterfaceMap::identity(f.interface()));
    }

    #[test]
    fn chain_of_two() {
        let all = iface(&["a", "b", "c"], &d2());
        let f = Factor::new(iface(&["a", "b"], &d2()), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = Factor::new(iface(&["b", "c"], &d2()), vec![5.0, 6.0, 7.0, 8.0]).unwrap();
        let leaves = chain_leaves(&all, &[f, g], &FiniteSet::empty(), &FiniteSet::empty()).unwrap();
        assert_eq!(leaves[0].right_foot().ports(), &FiniteSet::of(&["b"]));
        let h = hcompose(&leaves[0], &leaves[1]).unwrap();
        assert_eq!(h.factor().value(&[1, 0, 1]), 18.0);
    }

    #[test]
    fn chain_exposes_every_open_port() {
        let all = iface(&["a", "b", "z"], &d2());
        let f = Factor::new(iface(&["a", "b"], &d2()), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = Factor::new(iface(&["b"], &d2()), vec![5.0, 6.0]).unwrap();
        let (left, right) = (FiniteSet::of(&["z"]), FiniteSet::of(&["a", "z"]));
        let leaves = chain_leaves(&all, &[f, g], &left, &right).unwrap();
        let h = hcompose(&leaves[0], &leaves[1]).unwrap();
        assert_eq!(h.left_foot().ports(), &left);
        assert_eq!(h.right_foot().ports(), &right);
        assert_eq!(h.interface().ports(), all.ports());
    }
}
