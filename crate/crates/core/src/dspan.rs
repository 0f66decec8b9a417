//! Spans of finite sets decorated with stochastic sections.
//!
//! A [`Section`] on `A ← E → B` is a kernel `σ: A ⇝ E` that only moves `x`
//! into the fibre of the left leg over `x`. Sections compose by pull-push:
//! the right section is pulled back along the shared foot and the results are
//! chained as kernels, so the composite keeps every intermediate variable.
//! Bayesian networks are the special case of sequentially composed
//! [`fong_factor`]s.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finset::{compose_map, pullback, FiniteMap, FiniteSet, Label, Span};
use crate::krnfib::{kleisli, reindex, restrict, Bundle, FibreKernel, Kernel, PullbackSquare};
use crate::limits;
use crate::matcat::Domain;
use crate::ofg::{Factor, Interface};

pub const DECORATION_TOL: f64 = 1e-9;

/// A span decorated with a section of its left leg.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    span: Span,
    kernel: Kernel,
}

impl Section {
    pub fn new(span: Span, kernel: Kernel) -> Result<Self> {
        if kernel.dom() != span.left_foot() || kernel.cod() != span.apex() {
            return Err(Error::Composition(
                "section kernel must run from the left foot to the apex".into(),
            ));
        }
        let a = span.left();
        for e in 0..span.apex().len() {
            for x in 0..span.left_foot().len() {
                if kernel.get(e, x) > 0.0 && a.image(e) != x {
                    return Err(Error::Fibre(format!(
                        "section sends {} to {}, outside its fibre",
                        span.left_foot().get(x),
                        span.apex().get(e)
                    )));
                }
            }
        }
        Ok(Section { span, kernel })
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn apex(&self) -> &FiniteSet {
        self.span.apex()
    }

    pub fn left_foot(&self) -> &FiniteSet {
        self.span.left_foot()
    }

    pub fn right_foot(&self) -> &FiniteSet {
        self.span.right_foot()
    }

    /// Largest entrywise difference of the kernels; infinite unless the spans
    /// are identical.
    pub fn max_abs_diff(&self, other: &Section) -> f64 {
        if self.span != other.span {
            return f64::INFINITY;
        }
        self.kernel.max_abs_diff(&other.kernel)
    }

    /// Moves the section along bijections of the left foot and the apex; the
    /// right foot is kept.
    pub fn transport(&self, foot_iso: &FiniteMap, apex_iso: &FiniteMap) -> Result<Section> {
        let apex_inv = apex_iso.inverse()?;
        let left = compose_map(&compose_map(&apex_inv, self.span.left())?, foot_iso)?;
        let right = compose_map(&apex_inv, self.span.right())?;
        Section::new(
            Span::new(left, right)?,
            self.kernel.transport(foot_iso, apex_iso)?,
        )
    }
}

/// The section of `X ← X×Y → Y` given by `σ[(x',y), x] = [x' = x]·k[y, x]`.
pub fn graph_section(k: &Kernel) -> Result<Section> {
    let pt = FiniteSet::unit();
    let pb = pullback(
        &FiniteMap::to_point(k.dom(), &pt)?,
        &FiniteMap::to_point(k.cod(), &pt)?,
    )?;
    let (px, py) = (pb.proj_left(), pb.proj_right());
    let n = k.dom().len();
    limits::check(pb.apex().len().saturating_mul(n))?;
    let mut entries = vec![0.0; pb.apex().len() * n];
    for e in 0..pb.apex().len() {
        let x = px.image(e);
        entries[e * n + x] = k.get(py.image(e), x);
    }
    let kernel = Kernel::new(k.dom().clone(), pb.apex().clone(), entries)?;
    Section::new(Span::new(px.clone(), py.clone())?, kernel)
}

/// A context extension together with the projections of its new sets.
#[derive(Clone, Debug)]
pub struct Extension {
    pub section: Section,
    /// `W×A → W` and `W×A → A`.
    pub foot: (FiniteMap, FiniteMap),
    /// `W×E → W` and `W×E → E`.
    pub apex: (FiniteMap, FiniteMap),
    /// `W×B → W` and `W×B → B`.
    pub right: (FiniteMap, FiniteMap),
}

/// Pulls a section on `A ← E → B` back along `W×A → A`, giving a section on
/// `W×A ← W×E → W×B` that carries `w` along unchanged.
pub fn extend_context(s: &Section, w: &FiniteSet) -> Result<Section> {
    Ok(extend_context_parts(s, w)?.section)
}

pub fn extend_context_parts(s: &Section, w: &FiniteSet) -> Result<Extension> {
    let pt = FiniteSet::unit();
    let w_pt = FiniteMap::to_point(w, &pt)?;
    let times = |set: &FiniteSet| pullback(&w_pt, &FiniteMap::to_point(set, &pt)?);
    let (pa, pe, pb) = (
        times(s.left_foot())?,
        times(s.apex())?,
        times(s.right_foot())?,
    );
    let leg = |target: &crate::finset::Pullback, m: &FiniteMap| -> Result<FiniteMap> {
        let images = (0..pe.apex().len())
            .map(|n| {
                let (wi, ei) = (pe.proj_left().image(n), pe.proj_right().image(n));
                target
                    .pair_index(wi, m.image(ei))
                    .expect("product contains every pair")
            })
            .collect();
        FiniteMap::from_indices(pe.apex().clone(), target.apex().clone(), images)
    };
    let span = Span::new(leg(&pa, s.span.left())?, leg(&pb, s.span.right())?)?;
    let (na, ne) = (pa.apex().len(), pe.apex().len());
    limits::check(na.saturating_mul(ne))?;
    let mut entries = vec![0.0; na * ne];
    for m in 0..ne {
        let (w2, e) = (pe.proj_left().image(m), pe.proj_right().image(m));
        for n in 0..na {
            let (w1, x) = (pa.proj_left().image(n), pa.proj_right().image(n));
            if w1 == w2 {
                entries[m * na + n] = s.kernel.get(e, x);
            }
        }
    }
    let kernel = Kernel::new(pa.apex().clone(), pe.apex().clone(), entries)?;
    Ok(Extension {
        section: Section::new(span, kernel)?,
        foot: (pa.proj_left().clone(), pa.proj_right().clone()),
        apex: (pe.proj_left().clone(), pe.proj_right().clone()),
        right: (pb.proj_left().clone(), pb.proj_right().clone()),
    })
}

/// A composite section with the projections of its apex onto the two
/// original apices.
#[derive(Clone, Debug)]
pub struct Composite {
    pub section: Section,
    pub to_left: FiniteMap,
    pub to_right: FiniteMap,
}

/// Pull-push composite `Σ_a Δ_b(τ) ∘ σ` of `A ← E → B` and `B ← F → C`.
pub fn hcompose(m: &Section, n: &Section) -> Result<Section> {
    Ok(hcompose_with_projections(m, n)?.section)
}

pub fn hcompose_with_projections(m: &Section, n: &Section) -> Result<Composite> {
    if m.right_foot() != n.left_foot() {
        return Err(Error::Composition(format!(
            "right foot {} does not match left foot {}",
            m.right_foot(),
            n.left_foot()
        )));
    }
    let b = m.span.right();
    let tau = FibreKernel::new(
        Bundle::over_itself(n.left_foot()),
        Bundle::new(n.span.left().clone()),
        n.kernel.clone(),
    )?;
    let pulled = restrict(&tau, b)?;
    let apex = reindex(b, &Bundle::new(n.span.left().clone()))?;
    debug_assert_eq!(&apex.bundle, pulled.dst());
    let to_left = apex.bundle.proj().clone();
    let to_right = apex.to_old(&Bundle::new(n.span.left().clone()));
    let span = Span::new(
        compose_map(&to_left, m.span.left())?,
        compose_map(&to_right, n.span.right())?,
    )?;
    let kernel = kleisli(&m.kernel, pulled.kernel())?;
    Ok(Composite {
        section: Section::new(span, kernel)?,
        to_left,
        to_right,
    })
}

/// `((m;n);o)`, `(m;(n;o))` and the bijection between their apices that
/// matches points by their images in the three original apices.
pub fn associator(m: &Section, n: &Section, o: &Section) -> Result<(Section, Section, FiniteMap)> {
    let c1 = hcompose_with_projections(m, n)?;
    let c2 = hcompose_with_projections(&c1.section, o)?;
    let d1 = hcompose_with_projections(n, o)?;
    let d2 = hcompose_with_projections(m, &d1.section)?;
    let right_index: HashMap<(usize, usize, usize), usize> = (0..d2.section.apex().len())
        .map(|t| {
            let mid = d2.to_right.image(t);
            let key = (
                d2.to_left.image(t),
                d1.to_left.image(mid),
                d1.to_right.image(mid),
            );
            (key, t)
        })
        .collect();
    let images = (0..c2.section.apex().len())
        .map(|t| {
            let mid = c2.to_left.image(t);
            let key = (
                c1.to_left.image(mid),
                c1.to_right.image(mid),
                c2.to_right.image(t),
            );
            right_index
                .get(&key)
                .copied()
                .ok_or_else(|| Error::Universality("pasted apices differ".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso =
        FiniteMap::from_indices(c2.section.apex().clone(), d2.section.apex().clone(), images)?;
    if !iso.is_bijection() {
        return Err(Error::Universality("pasting map is not a bijection".into()));
    }
    Ok((c2.section, d2.section, iso))
}

/// The identity span on `e` with the identity kernel.
pub fn hunit(e: &FiniteSet) -> Section {
    Section {
        span: Span::identity(e),
        kernel: Kernel::identity(e),
    }
}

/// A morphism of spans `(f_l, f, f_r)` whose two squares are pullbacks.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanMorphism {
    src: Span,
    dst: Span,
    fl: FiniteMap,
    f: FiniteMap,
    fr: FiniteMap,
}

impl SpanMorphism {
    pub fn new(src: Span, dst: Span, fl: FiniteMap, f: FiniteMap, fr: FiniteMap) -> Result<Self> {
        PullbackSquare::new(
            src.left().clone(),
            f.clone(),
            fl.clone(),
            dst.left().clone(),
        )?;
        PullbackSquare::new(
            src.right().clone(),
            f.clone(),
            fr.clone(),
            dst.right().clone(),
        )?;
        Ok(SpanMorphism {
            src,
            dst,
            fl,
            f,
            fr,
        })
    }

    pub fn identity(span: &Span) -> Self {
        SpanMorphism {
            src: span.clone(),
            dst: span.clone(),
            fl: FiniteMap::identity(span.left_foot()),
            f: FiniteMap::identity(span.apex()),
            fr: FiniteMap::identity(span.right_foot()),
        }
    }

    pub fn src(&self) -> &Span {
        &self.src
    }

    pub fn dst(&self) -> &Span {
        &self.dst
    }

    pub fn maps(&self) -> (&FiniteMap, &FiniteMap, &FiniteMap) {
        (&self.fl, &self.f, &self.fr)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpanMorphism) -> Result<SpanMorphism> {
        if self.dst != other.src {
            return Err(Error::Composition(
                "span morphisms are not composable".into(),
            ));
        }
        Ok(SpanMorphism {
            src: self.src.clone(),
            dst: other.dst.clone(),
            fl: compose_map(&self.fl, &other.fl)?,
            f: compose_map(&self.f, &other.f)?,
            fr: compose_map(&self.fr, &other.fr)?,
        })
    }
}

/// `Δ_{f_l}` of a section on the target span, expressed on the source span:
/// `σ[e, x] = [a(e) = x]·σ'[f(e), f_l(x)]`.
pub fn restrict_cell(f: &SpanMorphism, s: &Section) -> Result<Section> {
    if s.span != f.dst {
        return Err(Error::Composition(
            "section does not sit on the morphism's target".into(),
        ));
    }
    let a = f.src.left();
    let (nx, ne) = (f.src.left_foot().len(), f.src.apex().len());
    limits::check(nx.saturating_mul(ne))?;
    let mut entries = vec![0.0; nx * ne];
    for e in 0..ne {
        let x = a.image(e);
        entries[e * nx + x] = s.kernel.get(f.f.image(e), f.fl.image(x));
    }
    let kernel = Kernel::new(f.src.left_foot().clone(), f.src.apex().clone(), entries)?;
    Section::new(f.src.clone(), kernel)
}

/// A 2-cell: a Cartesian span morphism whose top decoration is the
/// restriction of the bottom one.
#[derive(Clone, Debug)]
pub struct SpanCell {
    top: Section,
    bottom: Section,
    maps: SpanMorphism,
}

impl SpanCell {
    pub fn new(top: Section, bottom: Section, maps: SpanMorphism) -> Result<Self> {
        if maps.src != top.span || maps.dst != bottom.span {
            return Err(Error::Composition(
                "cell maps do not connect the sections".into(),
            ));
        }
        let expected = restrict_cell(&maps, &bottom)?;
        let diff = expected.kernel.max_abs_diff(&top.kernel);
        if diff > DECORATION_TOL {
            return Err(Error::Cell(format!(
                "top section differs from the restricted bottom by {diff}"
            )));
        }
        Ok(SpanCell { top, bottom, maps })
    }

    pub fn identity(s: &Section) -> Self {
        SpanCell {
            top: s.clone(),
            bottom: s.clone(),
            maps: SpanMorphism::identity(&s.span),
        }
    }

    pub fn top(&self) -> &Section {
        &self.top
    }

    pub fn bottom(&self) -> &Section {
        &self.bottom
    }

    pub fn maps(&self) -> &SpanMorphism {
        &self.maps
    }

    /// Stacks `below` under `self`.
    pub fn vcompose(&self, below: &SpanCell) -> Result<SpanCell> {
        if self.bottom.span != below.top.span
            || self.bottom.kernel.max_abs_diff(&below.top.kernel) > DECORATION_TOL
        {
            return Err(Error::Composition("cells do not stack".into()));
        }
        SpanCell::new(
            self.top.clone(),
            below.bottom.clone(),
            self.maps.then(&below.maps)?,
        )
    }

    /// Places `right` beside `self`; the apex map is the pullback mediator.
    pub fn hcompose(&self, right: &SpanCell) -> Result<SpanCell> {
        if self.maps.fr != right.maps.fl {
            return Err(Error::Composition(
                "cells disagree on the shared boundary".into(),
            ));
        }
        let top = hcompose_with_projections(&self.top, &right.top)?;
        let bottom = hcompose_with_projections(&self.bottom, &right.bottom)?;
        let index: HashMap<(usize, usize), usize> = (0..bottom.section.apex().len())
            .map(|g| ((bottom.to_left.image(g), bottom.to_right.image(g)), g))
            .collect();
        let images = (0..top.section.apex().len())
            .map(|g| {
                let key = (
                    self.maps.f.image(top.to_left.image(g)),
                    right.maps.f.image(top.to_right.image(g)),
                );
                index
                    .get(&key)
                    .copied()
                    .ok_or_else(|| Error::Universality("composite apex has no image below".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mid = FiniteMap::from_indices(
            top.section.apex().clone(),
            bottom.section.apex().clone(),
            images,
        )?;
        let maps = SpanMorphism::new(
            top.section.span.clone(),
            bottom.section.span.clone(),
            self.maps.fl.clone(),
            mid,
            right.maps.fr.clone(),
        )?;
        SpanCell::new(top.section, bottom.section, maps)
    }
}

/// A finite product with flat tuple labels: the empty product is `{()}` and a
/// one-factor product keeps the factor's labels.
#[derive(Clone, Debug)]
pub(crate) struct Product {
    pub set: FiniteSet,
    pub coords: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
}

pub(crate) fn product(factors: &[&FiniteSet]) -> Result<Product> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total = limits::cell_count(sizes.iter().copied())?;
    let mut members: Vec<(Label, Vec<usize>)> = (0..total)
        .map(|k| {
            let coords = crate::matcat::decode(k, &sizes);
            let label = match factors {
                [only] => only.get(coords[0]).clone(),
                _ => {
                    let parts: Vec<Label> = coords
                        .iter()
                        .zip(factors)
                        .map(|(&c, f)| f.get(c).clone())
                        .collect();
                    Label::tuple(&parts)
                }
            };
            (label, coords)
        })
        .collect();
    members.sort();
    let set = FiniteSet::new(members.iter().map(|m| m.0.clone()))?;
    let coords: Vec<Vec<usize>> = members.into_iter().map(|m| m.1).collect();
    let index = coords
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Ok(Product { set, coords, index })
}

/// A discrete Bayesian network in ancestral order.
///
/// `tables[i]` lists `P(x_i | parents)` column by column: entry
/// `cfg * |D_i| + v`, where `cfg` enumerates parent assignments in declared
/// parent order with the first parent slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesNet {
    nodes: Vec<(Label, Domain)>,
    parents: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
}

impl BayesNet {
    pub fn new(
        nodes: Vec<(Label, Domain)>,
        parents: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if parents.len() != nodes.len() || tables.len() != nodes.len() {
            return Err(Error::Topology(
                "every node needs parents and a table".into(),
            ));
        }
        for (i, (name, domain)) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::Label(format!("node {name} declared twice")));
            }
            let pa = &parents[i];
            for (k, &p) in pa.iter().enumerate() {
                if p >= i {
                    return Err(Error::Topology(format!(
                        "parent {p} of node {name} does not precede it"
                    )));
                }
                if pa[..k].contains(&p) {
                    return Err(Error::Topology(format!("node {name} repeats a parent")));
                }
            }
            let configs = limits::cell_count(pa.iter().map(|&p| nodes[p].1.len()))?;
            let d = domain.len();
            let table = &tables[i];
            if table.len() != configs * d {
                return Err(Error::Axis(format!(
                    "table of {name} has {} entries, needs {}",
                    table.len(),
                    configs * d
                )));
            }
            for cfg in 0..configs {
                let column = &table[cfg * d..(cfg + 1) * d];
                if column.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::Stochastic(format!(
                        "table of {name} has a bad entry"
                    )));
                }
                let mass: f64 = column.iter().sum();
                if (mass - 1.0).abs() > crate::krnfib::STOCHASTIC_TOL {
                    return Err(Error::Stochastic(format!(
                        "column {cfg} of {name} has mass {mass}"
                    )));
                }
            }
        }
        Ok(BayesNet {
            nodes,
            parents,
            tables,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[(Label, Domain)] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &Label {
        &self.nodes[i].0
    }

    pub fn domain(&self, i: usize) -> &Domain {
        &self.nodes[i].1
    }

    /// Parents in declared order.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn table(&self, i: usize) -> &[f64] {
        &self.tables[i]
    }

    /// `P(x_i = value | parents = parent_values)`, all as domain indices and
    /// parents in declared order.
    pub fn cpt(&self, i: usize, value: usize, parent_values: &[usize]) -> f64 {
        let cfg = self.parents[i]
            .iter()
            .zip(parent_values)
            .fold(0, |acc, (&p, &v)| acc * self.nodes[p].1.len() + v);
        self.tables[i][cfg * self.nodes[i].1.len() + value]
    }

    /// Values of node `i` as a finite set.
    pub fn value_set(&self, i: usize) -> FiniteSet {
        FiniteSet::new(self.nodes[i].1.values().iter().cloned())
            .expect("domain values are distinct")
    }

    fn sorted_parents(&self, i: usize) -> Vec<usize> {
        let mut pa = self.parents[i].clone();
        pa.sort_unstable();
        pa
    }

    /// Domain index of the element at set index `k` of node `j`.
    fn domain_index(&self, j: usize, set: &FiniteSet, k: usize) -> usize {
        self.nodes[j]
            .1
            .index_of(set.get(k))
            .expect("set built from the domain")
    }

    /// The conditional of node `i` as a kernel from the product of its parents
    /// (in node order) to its values.
    pub fn cpt_kernel(&self, i: usize) -> Result<Kernel> {
        let pa = self.sorted_parents(i);
        let sets: Vec<FiniteSet> = pa.iter().map(|&p| self.value_set(p)).collect();
        let prod = product(&sets.iter().collect::<Vec<_>>())?;
        let own = self.value_set(i);
        let declared_pos: Vec<usize> = self.parents[i]
            .iter()
            .map(|p| pa.iter().position(|q| q == p).expect("same parents"))
            .collect();
        Kernel::from_fn(prod.set.clone(), own.clone(), |y, x| {
            let coords = &prod.coords[x];
            let values: Vec<usize> = declared_pos
                .iter()
                .map(|&k| self.domain_index(pa[k], &sets[k], coords[k]))
                .collect();
            self.cpt(i, self.domain_index(i, &own, y), &values)
        })
    }
}

/// The factor contributed by node `i`: a section over `∏_{j<i} X_j` with apex
/// `∏_{j≤i} X_j`, copying the parents into the conditional and carrying the
/// other predecessors along. Its right leg is the identity on the apex, so
/// consecutive factors compose directly.
pub fn fong_factor(i: usize, net: &BayesNet) -> Result<Section> {
    if i >= net.len() {
        return Err(Error::Topology(format!(
            "no node {i} in a net of {}",
            net.len()
        )));
    }
    let sets: Vec<FiniteSet> = (0..=i).map(|j| net.value_set(j)).collect();
    let pa = net.sorted_parents(i);
    let others: Vec<usize> = (0..i).filter(|j| !pa.contains(j)).collect();

    let graph = graph_section(&net.cpt_kernel(i)?)?;
    let pa_prod = product(&pa.iter().map(|&p| &sets[p]).collect::<Vec<_>>())?;
    let w_prod = product(&others.iter().map(|&j| &sets[j]).collect::<Vec<_>>())?;
    let ext = extend_context_parts(&graph, &w_prod.set)?;

    let before = product(&sets[..i].iter().collect::<Vec<_>>())?;
    let upto = product(&sets.iter().collect::<Vec<_>>())?;
    let place = |coords: &mut Vec<usize>, w: usize, p: usize| {
        for (k, &j) in others.iter().enumerate() {
            coords[j] = w_prod.coords[w][k];
        }
        for (k, &j) in pa.iter().enumerate() {
            coords[j] = pa_prod.coords[p][k];
        }
    };

    let ext_foot = ext.section.left_foot();
    let foot_images = (0..ext_foot.len())
        .map(|n| {
            let mut coords = vec![0; i];
            place(&mut coords, ext.foot.0.image(n), ext.foot.1.image(n));
            before.index[&coords]
        })
        .collect();
    let foot_iso = FiniteMap::from_indices(ext_foot.clone(), before.set.clone(), foot_images)?;

    let ext_apex = ext.section.apex();
    let apex_images = (0..ext_apex.len())
        .map(|n| {
            let g = ext.apex.1.image(n);
            let mut coords = vec![0; i + 1];
            place(&mut coords, ext.apex.0.image(n), graph.span.left().image(g));
            coords[i] = graph.span.right().image(g);
            upto.index[&coords]
        })
        .collect();
    let apex_iso = FiniteMap::from_indices(ext_apex.clone(), upto.set.clone(), apex_images)?;

    let moved = ext.section.kernel.transport(&foot_iso, &apex_iso)?;
    let left = compose_map(
        &compose_map(&apex_iso.inverse()?, ext.section.span.left())?,
        &foot_iso,
    )?;
    Section::new(Span::new(left, FiniteMap::identity(&upto.set))?, moved)
}

/// The joint distribution of a net as the composite of its factors, read off
/// as a table over the node names.
pub fn bayes_joint(net: &BayesNet) -> Result<Factor> {
    if net.is_empty() {
        return Err(Error::Topology("a net needs at least one node".into()));
    }
    let mut joint = fong_factor(0, net)?;
    for i in 1..net.len() {
        joint = hcompose(&joint, &fong_factor(i, net)?)?;
    }
    let sets: Vec<FiniteSet> = (0..net.len()).map(|j| net.value_set(j)).collect();
    let all = product(&sets.iter().collect::<Vec<_>>())?;
    debug_assert_eq!(&all.set, joint.apex());

    let interface = Interface::new(net.nodes.iter().cloned())?;
    let node_of_port: Vec<usize> = interface
        .ports()
        .iter()
        .map(|p| {
            net.nodes
                .iter()
                .position(|(n, _)| n == p)
                .expect("port is a node")
        })
        .collect();
    Factor::from_fn(interface, |digits| {
        let mut coords = vec![0; net.len()];
        for (k, &j) in node_of_port.iter().enumerate() {
            coords[j] = sets[j]
                .index_of(&net.nodes[j].1.values()[digits[k]])
                .expect("value in set");
        }
        joint.kernel.get(all.index[&coords], 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::label;

    fn set(xs: &[&str]) -> FiniteSet {
        FiniteSet::of(xs)
    }

    fn binary() -> FiniteSet {
        set(&["0", "1"])
    }

    fn kernel(cols: &[&[f64]]) -> Kernel {
        let n = cols.len();
        let m = cols[0].len();
        let mut entries = vec![0.0; n * m];
        for (x, col) in cols.iter().enumerate() {
            for (y, &v) in col.iter().enumerate() {
                entries[y * n + x] = v;
            }
        }
        let dom = FiniteSet::new((0..n).map(|i| label(&i.to_string()))).unwrap();
        let cod = FiniteSet::new((0..m).map(|i| label(&i.to_string()))).unwrap();
        Kernel::new(dom, cod, entries).unwrap()
    }

    fn pair(a: &str, b: &str) -> Label {
        Label::pair(&label(a), &label(b))
    }

    fn two_node() -> BayesNet {
        BayesNet::new(
            vec![
                (label("X"), Domain::range("B", 2)),
                (label("Y"), Domain::range("B", 2)),
            ],
            vec![vec![], vec![0]],
            vec![vec![0.6, 0.4], vec![0.9, 0.1, 0.2, 0.8]],
        )
        .unwrap()
    }

    #[test]
    fn graph_of_identity_is_diagonal() {
        let g = graph_section(&Kernel::identity(&binary())).unwrap();
        assert_eq!(g.kernel().prob(&pair("0", "0"), &label("0")).unwrap(), 1.0);
        assert_eq!(g.kernel().prob(&pair("1", "1"), &label("1")).unwrap(), 1.0);
        assert_eq!(g.kernel().prob(&pair("0", "1"), &label("0")).unwrap(), 0.0);
    }

    #[test]
    fn graph_section_entries() {
        let g = graph_section(&kernel(&[&[0.3, 0.7], &[0.6, 0.4]])).unwrap();
        assert_eq!(g.kernel().prob(&pair("0", "0"), &label("0")).unwrap(), 0.3);
        assert_eq!(g.kernel().prob(&pair("0", "1"), &label("0")).unwrap(), 0.7);
        assert_eq!(g.kernel().prob(&pair("1", "0"), &label("0")).unwrap(), 0.0);
    }

    #[test]
    fn units_are_strict() {
        let g = graph_section(&kernel(&[&[0.3, 0.7], &[0.6, 0.4]])).unwrap();
        assert_eq!(hcompose(&hunit(g.left_foot()), &g).unwrap(), g);
        assert_eq!(hcompose(&g, &hunit(g.right_foot())).unwrap(), g);
        let e = set(&["p", "q"]);
        assert_eq!(hcompose(&hunit(&e), &hunit(&e)).unwrap(), hunit(&e));
        assert_eq!(hunit(&FiniteSet::empty()).apex().len(), 0);
    }

    #[test]
    fn uniform_graphs_compose_to_quarters() {
        let u = kernel(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let c = hcompose(&graph_section(&u).unwrap(), &graph_section(&u).unwrap()).unwrap();
        assert_eq!(c.apex().len(), 8);
        for e in 0..8 {
            let x = c.span().left().image(e);
            assert_eq!(c.kernel().get(e, x), 0.25);
            assert_eq!(c.kernel().get(e, 1 - x), 0.0);
        }
    }

    #[test]
    fn foot_mismatch_is_rejected() {
        let g = graph_section(&Kernel::identity(&binary())).unwrap();
        let h = hunit(&set(&["a"]));
        assert!(matches!(hcompose(&g, &h), Err(Error::Composition(_))));
    }

    #[test]
    fn extension_by_a_point_restricts_back() {
        let g = graph_section(&kernel(&[&[0.3, 0.7], &[0.6, 0.4]])).unwrap();
        let w = set(&["w0", "w1"]);
        let ext = extend_context(&g, &w).unwrap();
        let incl = |s: &FiniteSet, t: &FiniteSet| {
            FiniteMap::from_fn(s.clone(), t.clone(), |x| Label::pair(&label("w0"), x)).unwrap()
        };
        let f = SpanMorphism::new(
            g.span().clone(),
            ext.span().clone(),
            incl(g.left_foot(), ext.left_foot()),
            incl(g.apex(), ext.apex()),
            incl(g.right_foot(), ext.right_foot()),
        )
        .unwrap();
        assert_eq!(restrict_cell(&f, &ext).unwrap(), g);
        SpanCell::new(g, ext, f).unwrap();
    }

    #[test]
    fn two_node_joint() {
        let joint = bayes_joint(&two_node()).unwrap();
        assert_eq!(joint.value(&[0, 0]), 0.54);
        assert_eq!(joint.value(&[1, 1]), 0.4 * 0.8);
        assert_eq!(joint.value(&[0, 1]), 0.6 * 0.1);
        assert_eq!(joint.value(&[1, 0]), 0.4 * 0.2);
    }

    #[test]
    fn root_factor_is_the_prior() {
        let f = fong_factor(0, &two_node()).unwrap();
        assert_eq!(f.left_foot(), &FiniteSet::unit());
        assert_eq!(f.apex(), &binary());
        assert_eq!(f.kernel().entries(), &[0.6, 0.4]);
    }

    #[test]
    fn chain_factor_matches_the_graph() {
        let net = two_node();
        let f = fong_factor(1, &net).unwrap();
        let g = graph_section(&net.cpt_kernel(1).unwrap()).unwrap();
        assert_eq!(f.span().left(), g.span().left());
        assert_eq!(f.kernel(), g.kernel());
        assert!(f.span().right().is_identity());
    }

    #[test]
    fn parent_and_bystander() {
        // W → (nothing), X → Y: node 2 has parent 1 and bystander 0.
        let d = Domain::range("B", 2);
        let net = BayesNet::new(
            vec![
                (label("W"), d.clone()),
                (label("X"), d.clone()),
                (label("Y"), d.clone()),
            ],
            vec![vec![], vec![], vec![1]],
            vec![vec![0.5, 0.5], vec![0.5, 0.5], vec![0.3, 0.7, 0.6, 0.4]],
        )
        .unwrap();
        let f = fong_factor(2, &net).unwrap();
        let k = net.cpt_kernel(2).unwrap();
        let t = |a: &str, b: &str, c: &str| Label::tuple(&[label(a), label(b), label(c)]);
        for w in ["0", "1"] {
            for x in ["0", "1"] {
                for w2 in ["0", "1"] {
                    for x2 in ["0", "1"] {
                        for y in ["0", "1"] {
                            let expected = if w == w2 && x == x2 {
                                k.prob(&label(y), &label(x)).unwrap()
                            } else {
                                0.0
                            };
                            let got = f.kernel().prob(&t(w2, x2, y), &pair(w, x)).unwrap();
                            assert_eq!(got, expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nets_check_order_and_tables() {
        let d = Domain::range("B", 2);
        let r = BayesNet::new(
            vec![(label("X"), d.clone())],
            vec![vec![0]],
            vec![vec![0.5, 0.5, 0.5, 0.5]],
        );
        assert!(matches!(r, Err(Error::Topology(_))));
        let r = BayesNet::new(vec![(label("X"), d)], vec![vec![]], vec![vec![0.5, 0.4]]);
        assert!(matches!(r, Err(Error::Stochastic(_))));
    }
}
