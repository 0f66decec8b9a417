//! Labeled finite sets, total maps between them, and the (co)limits the
//! span and cospan double categories are built from.
//!
//! Elements are [`Label`]s kept in ascending order, so every set has a single
//! canonical enumeration. Maps store the index of each image in the codomain.
//! Apices of pullbacks and pushouts are labeled deterministically:
//!
//! * a pullback element over `(e, f)` is labeled `(e,f)`;
//! * a pushout class is labeled by its least member label (left members win
//!   ties). A right-led class whose label collides with a left-led class gets
//!   `'` appended until it is unique in the apex.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const RESERVED: [char; 5] = ['(', ')', ',', '=', ':'];

/// Name of an element of a finite set.
///
/// User-facing labels are atoms: nonempty, no whitespace, none of `( ) , = :`.
/// Tuple labels such as `(a,b)` are only built by [`Label::tuple`], so a tuple
/// label never collides with an atom and tuple labeling is injective.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::Label("empty label".into()));
        }
        if let Some(c) = text
            .chars()
            .find(|c| c.is_whitespace() || RESERVED.contains(c))
        {
            return Err(Error::Label(format!(
                "label {text:?} contains reserved character {c:?}"
            )));
        }
        Ok(Label(Arc::from(text)))
    }

    /// The tuple label `(p1,...,pk)`; the empty tuple is `()`.
    pub fn tuple(parts: &[Label]) -> Self {
        let mut text = String::from("(");
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                text.push(',');
            }
            text.push_str(&p.0);
        }
        text.push(')');
        Label(Arc::from(text))
    }

    pub fn pair(left: &Label, right: &Label) -> Self {
        Self::tuple(&[left.clone(), right.clone()])
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_atom(&self) -> bool {
        !self.0.starts_with('(')
    }

    fn primed(&self) -> Self {
        Label(Arc::from(format!("{}'", self.0)))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Convenience for literals in tests and examples; panics on an invalid atom.
pub fn label(text: &str) -> Label {
    Label::new(text).unwrap_or_else(|e| panic!("{e}"))
}

/// A finite set of labels, stored sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteSet {
    elements: Vec<Label>,
}

impl FiniteSet {
    pub fn new<I: IntoIterator<Item = Label>>(elements: I) -> Result<Self> {
        let mut elements: Vec<Label> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Label(format!("duplicate element {}", w[0])));
        }
        Ok(FiniteSet { elements })
    }

    /// Builds a set of atoms from text; panics on invalid input.
    pub fn of(texts: &[&str]) -> Self {
        Self::new(texts.iter().map(|t| label(t))).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn empty() -> Self {
        FiniteSet::default()
    }

    /// The one-element set `{()}`, the empty product.
    pub fn unit() -> Self {
        FiniteSet {
            elements: vec![Label::tuple(&[])],
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.elements.iter()
    }

    pub fn get(&self, index: usize) -> &Label {
        &self.elements[index]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.elements.binary_search(label).ok()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.index_of(label).is_some()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.iter().all(|l| other.contains(l))
    }

    /// Cartesian product labeled by pairs `(x,y)`.
    pub fn product(&self, other: &FiniteSet) -> FiniteSet {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for x in self.iter() {
            for y in other.iter() {
                elements.push(Label::pair(x, y));
            }
        }
        elements.sort();
        FiniteSet { elements }
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A total map between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMap {
    dom: FiniteSet,
    cod: FiniteSet,
    images: Vec<usize>,
}

impl FiniteMap {
    /// Builds a map from the index of each image in `cod`.
    pub fn from_indices(dom: FiniteSet, cod: FiniteSet, images: Vec<usize>) -> Result<Self> {
        if images.len() != dom.len() {
            return Err(Error::Composition(format!(
                "map needs {} images, got {}",
                dom.len(),
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::Label(format!(
                "image index {bad} outside codomain {cod}"
            )));
        }
        Ok(FiniteMap { dom, cod, images })
    }

    /// Builds a map from `(x, f(x))` label pairs; every element of `dom` must
    /// appear exactly once.
    pub fn from_pairs(dom: FiniteSet, cod: FiniteSet, pairs: &[(Label, Label)]) -> Result<Self> {
        let mut images = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom
                .index_of(x)
                .ok_or_else(|| Error::Label(format!("{x} not in domain {dom}")))?;
            let j = cod
                .index_of(y)
                .ok_or_else(|| Error::Label(format!("{y} not in codomain {cod}")))?;
            if images[i] != usize::MAX {
                return Err(Error::Composition(format!("{x} assigned twice")));
            }
            images[i] = j;
        }
        if let Some(i) = images.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Composition(format!(
                "{} left unassigned",
                dom.get(i)
            )));
        }
        Ok(FiniteMap { dom, cod, images })
    }

    /// Builds a map from a labeling function.
    pub fn from_fn(dom: FiniteSet, cod: FiniteSet, f: impl Fn(&Label) -> Label) -> Result<Self> {
        let pairs: Vec<(Label, Label)> = dom.iter().map(|x| (x.clone(), f(x))).collect();
        Self::from_pairs(dom, cod, &pairs)
    }

    pub fn identity(set: &FiniteSet) -> Self {
        FiniteMap {
            dom: set.clone(),
            cod: set.clone(),
            images: (0..set.len()).collect(),
        }
    }

    /// The unique map out of the empty set.
    pub fn from_empty(cod: &FiniteSet) -> Self {
        FiniteMap {
            dom: FiniteSet::empty(),
            cod: cod.clone(),
            images: Vec::new(),
        }
    }

    /// The unique map into a one-element set.
    pub fn to_point(dom: &FiniteSet, point: &FiniteSet) -> Result<Self> {
        if point.len() != 1 {
            return Err(Error::Composition(format!("{point} is not a singleton")));
        }
        Ok(FiniteMap {
            dom: dom.clone(),
            cod: point.clone(),
            images: vec![0; dom.len()],
        })
    }

    pub fn inclusion(sub: &FiniteSet, sup: &FiniteSet) -> Result<Self> {
        let images = sub
            .iter()
            .map(|l| {
                sup.index_of(l)
                    .ok_or_else(|| Error::Label(format!("{l} not in {sup}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMap {
            dom: sub.clone(),
            cod: sup.clone(),
            images,
        })
    }

    pub fn dom(&self) -> &FiniteSet {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteSet {
        &self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Index of the image of the `i`-th domain element.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply(&self, x: &Label) -> Result<&Label> {
        let i = self
            .dom
            .index_of(x)
            .ok_or_else(|| Error::Label(format!("{x} not in domain {}", self.dom)))?;
        Ok(self.cod.get(self.images[i]))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FiniteMap) -> Result<FiniteMap> {
        compose_map(self, g)
    }

    /// Domain indices in the fibre over codomain index `j`, ascending.
    pub fn fibre_indices(&self, j: usize) -> Vec<usize> {
        (0..self.dom.len())
            .filter(|&i| self.images[i] == j)
            .collect()
    }

    pub fn preimage(&self, y: &Label) -> Result<FiniteSet> {
        let j = self
            .cod
            .index_of(y)
            .ok_or_else(|| Error::Label(format!("{y} not in codomain {}", self.cod)))?;
        let elements = self
            .fibre_indices(j)
            .into_iter()
            .map(|i| self.dom.get(i).clone())
            .collect();
        Ok(FiniteSet { elements })
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.images
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in &self.images {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijection(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<FiniteMap> {
        if !self.is_bijection() {
            return Err(Error::Universality("map is not a bijection".into()));
        }
        let mut images = vec![0; self.cod.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Ok(FiniteMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            images,
        })
    }
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &j) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}↦{}", self.dom.get(i), self.cod.get(j))?;
        }
        write!(f, "}} : {} → {}", self.dom, self.cod)
    }
}

/// `g ∘ f`.
pub fn compose_map(f: &FiniteMap, g: &FiniteMap) -> Result<FiniteMap> {
    if f.cod != g.dom {
        return Err(Error::Composition(format!(
            "codomain {} does not match domain {}",
            f.cod, g.dom
        )));
    }
    Ok(FiniteMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        images: f.images.iter().map(|&j| g.images[j]).collect(),
    })
}

/// `A ← E → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    left: FiniteMap,
    right: FiniteMap,
}

impl Span {
    pub fn new(left: FiniteMap, right: FiniteMap) -> Result<Self> {
        if left.dom != right.dom {
            return Err(Error::Composition("span legs have different apices".into()));
        }
        Ok(Span { left, right })
    }

    pub fn identity(set: &FiniteSet) -> Self {
        Span {
            left: FiniteMap::identity(set),
            right: FiniteMap::identity(set),
        }
    }

    pub fn left(&self) -> &FiniteMap {
        &self.left
    }

    pub fn right(&self) -> &FiniteMap {
        &self.right
    }

    pub fn apex(&self) -> &FiniteSet {
        &self.left.dom
    }

    pub fn left_foot(&self) -> &FiniteSet {
        &self.left.cod
    }

    pub fn right_foot(&self) -> &FiniteSet {
        &self.right.cod
    }
}

/// `A → X ← B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cospan {
    left: FiniteMap,
    right: FiniteMap,
}

impl Cospan {
    pub fn new(left: FiniteMap, right: FiniteMap) -> Result<Self> {
        if left.cod != right.cod {
            return Err(Error::Composition(
                "cospan legs have different apices".into(),
            ));
        }
        Ok(Cospan { left, right })
    }

    pub fn identity(set: &FiniteSet) -> Self {
        Cospan {
            left: FiniteMap::identity(set),
            right: FiniteMap::identity(set),
        }
    }

    pub fn left(&self) -> &FiniteMap {
        &self.left
    }

    pub fn right(&self) -> &FiniteMap {
        &self.right
    }

    pub fn apex(&self) -> &FiniteSet {
        &self.left.cod
    }

    pub fn left_foot(&self) -> &FiniteSet {
        &self.left.dom
    }

    pub fn right_foot(&self) -> &FiniteSet {
        &self.right.dom
    }
}

/// Pullback of `left: E → B` and `right: F → B`.
#[derive(Clone, Debug)]
pub struct Pullback {
    apex: FiniteSet,
    proj_left: FiniteMap,
    proj_right: FiniteMap,
    left: FiniteMap,
    right: FiniteMap,
    by_pair: HashMap<(usize, usize), usize>,
}

pub fn pullback(left: &FiniteMap, right: &FiniteMap) -> Result<Pullback> {
    if left.cod != right.cod {
        return Err(Error::Composition(format!(
            "cannot pull back over different bases {} and {}",
            left.cod, right.cod
        )));
    }
    let mut members = Vec::new();
    for (e, &be) in left.images.iter().enumerate() {
        for (f, &bf) in right.images.iter().enumerate() {
            if be == bf {
                members.push((Label::pair(left.dom.get(e), right.dom.get(f)), e, f));
            }
        }
    }
    members.sort();
    let apex = FiniteSet {
        elements: members.iter().map(|m| m.0.clone()).collect(),
    };
    let by_pair = members
        .iter()
        .enumerate()
        .map(|(k, m)| ((m.1, m.2), k))
        .collect();
    let proj_left = FiniteMap {
        dom: apex.clone(),
        cod: left.dom.clone(),
        images: members.iter().map(|m| m.1).collect(),
    };
    let proj_right = FiniteMap {
        dom: apex.clone(),
        cod: right.dom.clone(),
        images: members.iter().map(|m| m.2).collect(),
    };
    Ok(Pullback {
        apex,
        proj_left,
        proj_right,
        left: left.clone(),
        right: right.clone(),
        by_pair,
    })
}

impl Pullback {
    pub fn apex(&self) -> &FiniteSet {
        &self.apex
    }

    pub fn proj_left(&self) -> &FiniteMap {
        &self.proj_left
    }

    pub fn proj_right(&self) -> &FiniteMap {
        &self.proj_right
    }

    /// The cospan this is a pullback of.
    pub fn legs(&self) -> (&FiniteMap, &FiniteMap) {
        (&self.left, &self.right)
    }

    /// Apex index of the element over `(e, f)`, if `left(e) = right(f)`.
    pub fn pair_index(&self, e: usize, f: usize) -> Option<usize> {
        self.by_pair.get(&(e, f)).copied()
    }

    /// The unique `u` with `proj_left ∘ u = t1` and `proj_right ∘ u = t2`.
    pub fn mediate(&self, t1: &FiniteMap, t2: &FiniteMap) -> Result<FiniteMap> {
        if t1.dom != t2.dom || t1.cod != self.left.dom || t2.cod != self.right.dom {
            return Err(Error::Composition("cone is not over this cospan".into()));
        }
        let images = (0..t1.dom.len())
            .map(|t| {
                self.pair_index(t1.images[t], t2.images[t]).ok_or_else(|| {
                    Error::Universality(format!("cone does not commute at {}", t1.dom.get(t)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMap {
            dom: t1.dom.clone(),
            cod: self.apex.clone(),
            images,
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Pushout of `left: B → X` and `right: B → Y`.
#[derive(Clone, Debug)]
pub struct Pushout {
    apex: FiniteSet,
    in_left: FiniteMap,
    in_right: FiniteMap,
    left: FiniteMap,
    right: FiniteMap,
}

pub fn pushout(left: &FiniteMap, right: &FiniteMap) -> Result<Pushout> {
    if left.dom != right.dom {
        return Err(Error::Composition(format!(
            "cannot push out spans with different feet {} and {}",
            left.dom, right.dom
        )));
    }
    let nx = left.cod.len();
    let ny = right.cod.len();
    let mut uf = UnionFind::new(nx + ny);
    for b in 0..left.dom.len() {
        uf.union(left.images[b], nx + right.images[b]);
    }

    // Least member per class; `false` (left) sorts before `true` (right).
    let mut best: HashMap<usize, (Label, bool)> = HashMap::new();
    for k in 0..nx + ny {
        let root = uf.find(k);
        let cand = if k < nx {
            (left.cod.get(k).clone(), false)
        } else {
            (right.cod.get(k - nx).clone(), true)
        };
        best.entry(root)
            .and_modify(|cur| {
                if cand < *cur {
                    *cur = cand.clone();
                }
            })
            .or_insert(cand);
    }

    let mut roots: Vec<usize> = best.keys().copied().collect();
    roots.sort_by(|a, b| best[a].cmp(&best[b]));
    let left_led: BTreeSet<Label> = best
        .values()
        .filter(|(_, right_led)| !right_led)
        .map(|(l, _)| l.clone())
        .collect();
    let mut used: BTreeSet<Label> = best.values().map(|(l, _)| l.clone()).collect();
    let mut class_label: HashMap<usize, Label> = HashMap::new();
    for &root in &roots {
        let (l, right_led) = &best[&root];
        let mut name = l.clone();
        if *right_led && left_led.contains(l) {
            while used.contains(&name) {
                name = name.primed();
            }
            used.insert(name.clone());
        }
        class_label.insert(root, name);
    }

    let apex = FiniteSet::new(class_label.values().cloned())?;
    let index_of_root: HashMap<usize, usize> = class_label
        .iter()
        .map(|(&r, l)| (r, apex.index_of(l).expect("class label in apex")))
        .collect();
    let in_left = FiniteMap {
        dom: left.cod.clone(),
        cod: apex.clone(),
        images: (0..nx).map(|k| index_of_root[&uf.find(k)]).collect(),
    };
    let in_right = FiniteMap {
        dom: right.cod.clone(),
        cod: apex.clone(),
        images: (0..ny).map(|k| index_of_root[&uf.find(nx + k)]).collect(),
    };
    Ok(Pushout {
        apex,
        in_left,
        in_right,
        left: left.clone(),
        right: right.clone(),
    })
}

/// Disjoint union, i.e. the pushout over the empty set.
pub fn coproduct(x: &FiniteSet, y: &FiniteSet) -> Result<Pushout> {
    pushout(&FiniteMap::from_empty(x), &FiniteMap::from_empty(y))
}

impl Pushout {
    pub fn apex(&self) -> &FiniteSet {
        &self.apex
    }

    pub fn in_left(&self) -> &FiniteMap {
        &self.in_left
    }

    pub fn in_right(&self) -> &FiniteMap {
        &self.in_right
    }

    /// The span this is a pushout of.
    pub fn legs(&self) -> (&FiniteMap, &FiniteMap) {
        (&self.left, &self.right)
    }

    /// Left and right member indices of apex class `j`.
    pub fn class_members(&self, j: usize) -> (Vec<usize>, Vec<usize>) {
        (
            self.in_left.fibre_indices(j),
            self.in_right.fibre_indices(j),
        )
    }

    /// The unique `w` with `w ∘ in_left = u` and `w ∘ in_right = v`.
    pub fn copair(&self, u: &FiniteMap, v: &FiniteMap) -> Result<FiniteMap> {
        if u.dom != self.left.cod || v.dom != self.right.cod || u.cod != v.cod {
            return Err(Error::Composition("cocone is not under this span".into()));
        }
        for b in 0..self.left.dom.len() {
            if u.images[self.left.images[b]] != v.images[self.right.images[b]] {
                return Err(Error::Universality(format!(
                    "cocone disagrees over {}",
                    self.left.dom.get(b)
                )));
            }
        }
        let mut images = vec![usize::MAX; self.apex.len()];
        let members = u
            .images
            .iter()
            .zip(&self.in_left.images)
            .chain(v.images.iter().zip(&self.in_right.images));
        for (&t, &j) in members {
            if images[j] != usize::MAX && images[j] != t {
                return Err(Error::Universality(
                    "cocone is not constant on a class".into(),
                ));
            }
            images[j] = t;
        }
        Ok(FiniteMap {
            dom: self.apex.clone(),
            cod: u.cod.clone(),
            images,
        })
    }
}

/// The bijection between two apices that commutes with both families of legs.
///
/// `legs1[k]` and `legs2[k]` must share a codomain; each element of the first
/// apex is sent to the unique element of the second with the same images
/// under every leg. Fails unless this matching is a bijection, which is the
/// case exactly when both apices are limits of the same diagram.
pub fn canonical_iso(legs1: &[FiniteMap], legs2: &[FiniteMap]) -> Result<FiniteMap> {
    let (Some(first1), Some(first2)) = (legs1.first(), legs2.first()) else {
        return Err(Error::Universality("no legs to match along".into()));
    };
    if legs1.len() != legs2.len() {
        return Err(Error::Universality("leg families differ in length".into()));
    }
    for (l1, l2) in legs1.iter().zip(legs2) {
        if l1.cod != l2.cod || l1.dom != first1.dom || l2.dom != first2.dom {
            return Err(Error::Composition("legs are not parallel".into()));
        }
    }
    let key = |legs: &[FiniteMap], i: usize| legs.iter().map(|l| l.images[i]).collect::<Vec<_>>();
    let mut target: HashMap<Vec<usize>, usize> = HashMap::new();
    for i in 0..first2.dom.len() {
        if target.insert(key(legs2, i), i).is_some() {
            return Err(Error::Universality("legs are not jointly injective".into()));
        }
    }
    let images = (0..first1.dom.len())
        .map(|i| {
            target
                .get(&key(legs1, i))
                .copied()
                .ok_or_else(|| Error::Universality(format!("{} has no partner", first1.dom.get(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = FiniteMap {
        dom: first1.dom.clone(),
        cod: first2.dom.clone(),
        images,
    };
    if !iso.is_bijection() {
        return Err(Error::Universality("apices are not in bijection".into()));
    }
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dom: &[&str], cod: &[&str], pairs: &[(&str, &str)]) -> FiniteMap {
        let pairs: Vec<_> = pairs.iter().map(|(x, y)| (label(x), label(y))).collect();
        FiniteMap::from_pairs(FiniteSet::of(dom), FiniteSet::of(cod), &pairs).unwrap()
    }

    #[test]
    fn labels_reject_reserved_characters() {
        assert!(Label::new("").is_err());
        assert!(Label::new("a b").is_err());
        for bad in ["(a", "a)", "a,b", "a=b", "a:b"] {
            assert!(matches!(Label::new(bad), Err(Error::Label(_))), "{bad}");
        }
        assert!(Label::new("x_1'").is_ok());
        assert_eq!(Label::tuple(&[]).as_str(), "()");
        assert_eq!(Label::pair(&label("a"), &label("b")).as_str(), "(a,b)");
    }

    #[test]
    fn sets_are_sorted_and_distinct() {
        let s = FiniteSet::of(&["c", "a", "b"]);
        assert_eq!(s.elements(), &[label("a"), label("b"), label("c")]);
        assert!(FiniteSet::new([label("a"), label("a")]).is_err());
    }

    #[test]
    fn compose_identities_and_constants() {
        let id = FiniteMap::identity(&FiniteSet::of(&["a", "b"]));
        assert_eq!(compose_map(&id, &id).unwrap(), id);

        let f = map(&["x", "y"], &["z"], &[("x", "z"), ("y", "z")]);
        let g = map(&["z"], &["w"], &[("z", "w")]);
        let gf = compose_map(&f, &g).unwrap();
        assert_eq!(gf.apply(&label("x")).unwrap(), &label("w"));
        assert_eq!(gf.apply(&label("y")).unwrap(), &label("w"));
        assert!(matches!(compose_map(&g, &g), Err(Error::Composition(_))));
    }

    #[test]
    fn preimages() {
        let f = map(&["x", "y"], &["z"], &[("x", "z"), ("y", "z")]);
        assert_eq!(f.preimage(&label("z")).unwrap(), FiniteSet::of(&["x", "y"]));
        let id = FiniteMap::identity(&FiniteSet::of(&["a"]));
        assert_eq!(id.preimage(&label("a")).unwrap(), FiniteSet::of(&["a"]));
        let g = map(&["x"], &["y", "z"], &[("x", "y")]);
        assert!(g.preimage(&label("z")).unwrap().is_empty());
        assert!(matches!(g.preimage(&label("q")), Err(Error::Label(_))));
    }

    #[test]
    fn pullback_over_a_point_is_a_product() {
        let a = map(&["e1", "e2"], &["b"], &[("e1", "b"), ("e2", "b")]);
        let q = map(&["f1"], &["b"], &[("f1", "b")]);
        let pb = pullback(&a, &q).unwrap();
        assert_eq!(pb.apex().len(), 2);
        assert!(pb.apex().contains(&Label::pair(&label("e1"), &label("f1"))));
        assert_eq!(
            compose_map(pb.proj_left(), &a).unwrap(),
            compose_map(pb.proj_right(), &q).unwrap()
        );
    }

    #[test]
    fn identity_pullback_is_the_base() {
        let b = FiniteSet::of(&["u", "v", "w"]);
        let id = FiniteMap::identity(&b);
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.apex().len(), 3);
        assert!(pb.proj_left().is_bijection());
        let bad = FiniteMap::identity(&FiniteSet::of(&["u"]));
        assert!(matches!(pullback(&id, &bad), Err(Error::Composition(_))));
    }

    #[test]
    fn pushout_glues_one_element() {
        let b = map(&["b1"], &["u", "v"], &[("b1", "v")]);
        let c = map(&["b1"], &["w", "z"], &[("b1", "w")]);
        let po = pushout(&b, &c).unwrap();
        assert_eq!(po.apex(), &FiniteSet::of(&["u", "v", "z"]));
        assert_eq!(po.in_right().apply(&label("w")).unwrap(), &label("v"));
        assert_eq!(
            compose_map(&b, po.in_left()).unwrap(),
            compose_map(&c, po.in_right()).unwrap()
        );
    }

    #[test]
    fn empty_pushout_is_disjoint_union_with_primed_clashes() {
        let po = coproduct(&FiniteSet::of(&["a", "b"]), &FiniteSet::of(&["b", "c"])).unwrap();
        assert_eq!(po.apex().len(), 4);
        assert_eq!(po.in_left().apply(&label("b")).unwrap(), &label("b"));
        assert_eq!(po.in_right().apply(&label("b")).unwrap(), &label("b'"));
    }

    #[test]
    fn pushout_left_wins_ties() {
        // classes {L:y, R:x} and {L:x}: the right-led `x` must be renamed.
        let b = map(&["k"], &["x", "y"], &[("k", "y")]);
        let c = map(&["k"], &["x"], &[("k", "x")]);
        let po = pushout(&b, &c).unwrap();
        assert_eq!(po.apex(), &FiniteSet::of(&["x", "x'"]));
        assert_eq!(po.in_left().apply(&label("x")).unwrap(), &label("x"));
        assert_eq!(po.in_left().apply(&label("y")).unwrap(), &label("x'"));
    }

    #[test]
    fn copair_of_injections_is_identity() {
        let b = map(&["b1"], &["u", "v"], &[("b1", "v")]);
        let c = map(&["b1"], &["w", "z"], &[("b1", "w")]);
        let po = pushout(&b, &c).unwrap();
        let w = po.copair(po.in_left(), po.in_right()).unwrap();
        assert!(w.is_identity());

        let pt = FiniteSet::of(&["*"]);
        let u = FiniteMap::to_point(&FiniteSet::of(&["u", "v"]), &pt).unwrap();
        let v = FiniteMap::to_point(&FiniteSet::of(&["w", "z"]), &pt).unwrap();
        let w = po.copair(&u, &v).unwrap();
        assert_eq!(w, FiniteMap::to_point(po.apex(), &pt).unwrap());

        let t = FiniteSet::of(&["0", "1"]);
        let u = map(&["u", "v"], &["0", "1"], &[("u", "0"), ("v", "0")]);
        let v = map(&["w", "z"], &["0", "1"], &[("w", "1"), ("z", "1")]);
        assert_eq!(u.cod(), &t);
        assert!(matches!(po.copair(&u, &v), Err(Error::Universality(_))));
    }

    #[test]
    fn mediator_rejects_non_commuting_cones() {
        let a = map(&["e1", "e2"], &["b1", "b2"], &[("e1", "b1"), ("e2", "b2")]);
        let q = map(&["f1"], &["b1", "b2"], &[("f1", "b1")]);
        let pb = pullback(&a, &q).unwrap();
        let t = FiniteSet::of(&["t"]);
        let t1 = map(&["t"], &["e1", "e2"], &[("t", "e2")]);
        let t2 = map(&["t"], &["f1"], &[("t", "f1")]);
        assert_eq!(t1.dom(), &t);
        assert!(matches!(pb.mediate(&t1, &t2), Err(Error::Universality(_))));
    }

    #[test]
    fn canonical_iso_matches_legs() {
        let b = FiniteSet::of(&["p", "q"]);
        let id = FiniteMap::identity(&b);
        let pb = pullback(&id, &id).unwrap();
        let iso = canonical_iso(&[pb.proj_left().clone()], std::slice::from_ref(&id)).unwrap();
        assert_eq!(
            iso.apply(&Label::pair(&label("p"), &label("p"))).unwrap(),
            &label("p")
        );
    }
}
