//! Brute-force references. Everything here enumerates assignments or maps
//! directly and multiplies table entries; none of it goes through the
//! composition machinery it is used to check.

use std::collections::BTreeMap;

use crate::dspan::BayesNet;
use crate::error::{Error, Result};
use crate::finset::{FiniteMap, Label};
use crate::limits;
use crate::ofg::{Factor, Interface};

/// A value for each port.
pub type Assignment = BTreeMap<Label, Label>;

/// Odometer over `sizes`, last position fastest.
fn advance(digits: &mut [usize], sizes: &[usize]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < sizes[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

fn assignment_count(sizes: &[usize]) -> Result<usize> {
    limits::cell_count(sizes.iter().copied())
}

/// Position in `all` of every port of `f`, checking the domains agree.
fn scope_in(f: &Factor, all: &Interface) -> Result<Vec<usize>> {
    let fi = f.interface();
    let mut scope = Vec::with_capacity(fi.len());
    for (k, port) in fi.ports().iter().enumerate() {
        let j = all
            .ports()
            .iter()
            .position(|p| p == port)
            .ok_or_else(|| Error::Type(format!("factor port {port} is not declared")))?;
        if all.typing()[j] != fi.typing()[k] {
            return Err(Error::Type(format!("port {port} has two domains")));
        }
        scope.push(j);
    }
    Ok(scope)
}

fn entry(f: &Factor, scope: &[usize], digits: &[usize]) -> f64 {
    let mut idx = 0;
    for (k, &j) in scope.iter().enumerate() {
        idx = idx * f.interface().typing()[k].len() + digits[j];
    }
    f.entries()[idx]
}

/// The product of all factors at every assignment of `all`, in canonical
/// assignment order.
pub fn brute_joint_fg(factors: &[Factor], all: &Interface) -> Result<Factor> {
    let scopes = factors
        .iter()
        .map(|f| scope_in(f, all))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = all.typing().iter().map(|d| d.len()).collect();
    let n = assignment_count(&sizes)?;
    let mut entries = Vec::with_capacity(n);
    let mut digits = vec![0; sizes.len()];
    if n > 0 {
        let mut values = Vec::with_capacity(factors.len());
        loop {
            values.clear();
            values.extend(
                factors
                    .iter()
                    .zip(&scopes)
                    .map(|(f, s)| entry(f, s, &digits)),
            );
            // Multiplying in sorted order makes the result independent of
            // the order the factors were listed in, bit for bit.
            values.sort_by(f64::total_cmp);
            entries.push(values.iter().product());
            if !advance(&mut digits, &sizes) {
                break;
            }
        }
    }
    Factor::new(all.clone(), entries)
}

/// The product of all factors at one assignment given by value labels.
pub fn product_at(factors: &[Factor], s: &Assignment) -> Result<f64> {
    let mut v = 1.0;
    for f in factors {
        let fi = f.interface();
        let mut idx = 0;
        for (k, port) in fi.ports().iter().enumerate() {
            let d = &fi.typing()[k];
            let value = s
                .get(port)
                .ok_or_else(|| Error::Port(format!("assignment misses {port}")))?;
            let digit = d
                .values()
                .iter()
                .position(|x| x == value)
                .ok_or_else(|| Error::Type(format!("{value} is not a value of {port}")))?;
            idx = idx * d.len() + digit;
        }
        v *= f.entries()[idx];
    }
    Ok(v)
}

/// `∏ P(x_i | pa(i))` at every assignment, over the node names in sorted
/// order, read straight from the raw conditional tables.
pub fn brute_joint_bn(net: &BayesNet) -> Result<Factor> {
    let interface = Interface::new(net.nodes().iter().cloned())?;
    let node_at: Vec<usize> = interface
        .ports()
        .iter()
        .map(|p| {
            net.nodes()
                .iter()
                .position(|(n, _)| n == p)
                .expect("port is a node")
        })
        .collect();
    let sizes: Vec<usize> = interface.typing().iter().map(|d| d.len()).collect();
    let n = assignment_count(&sizes)?;
    let mut entries = Vec::with_capacity(n);
    let mut digits = vec![0; sizes.len()];
    let mut by_node = vec![0; net.len()];
    for _ in 0..n {
        for (k, &i) in node_at.iter().enumerate() {
            by_node[i] = digits[k];
        }
        let mut v = 1.0;
        for i in 0..net.len() {
            let pv: Vec<usize> = net.parents(i).iter().map(|&p| by_node[p]).collect();
            v *= net.cpt(i, by_node[i], &pv);
        }
        entries.push(v);
        advance(&mut digits, &sizes);
    }
    Factor::new(interface, entries)
}

/// A candidate (co)limit to verify against its universal property.
#[derive(Clone, Copy, Debug)]
pub enum Universal<'a> {
    /// Legs `proj_left: P → E`, `proj_right: P → F` over `left: E → B`,
    /// `right: F → B`.
    Pullback {
        left: &'a FiniteMap,
        right: &'a FiniteMap,
        proj_left: &'a FiniteMap,
        proj_right: &'a FiniteMap,
    },
    /// Legs `in_left: X → Q`, `in_right: Y → Q` under `left: B → X`,
    /// `right: B → Y`.
    Pushout {
        left: &'a FiniteMap,
        right: &'a FiniteMap,
        in_left: &'a FiniteMap,
        in_right: &'a FiniteMap,
    },
}

/// Every map `{0..k} → {0..n}` as an image vector, for `k` up to the bound.
fn all_maps(k: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    let count = limits::cell_count(std::iter::repeat_n(n, k))?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let sizes = vec![n; k];
    let mut digits = vec![0; k];
    loop {
        out.push(digits.clone());
        if !advance(&mut digits, &sizes) {
            break;
        }
    }
    Ok(out)
}

/// Whether every (co)cone from or to a test set of size at most `bound`
/// factors through the candidate in exactly one way. Mediators are counted
/// point by point, which enumerates them all since a map out of (into) a
/// finite set is fixed by its values on points (its fibres).
pub fn check_universal(instance: Universal<'_>, bound: usize) -> Result<bool> {
    const MAX_TEST_OBJECT: usize = 4;
    if bound > MAX_TEST_OBJECT {
        return Err(Error::Size(format!(
            "test objects up to {bound} exceed the limit of {MAX_TEST_OBJECT}"
        )));
    }
    match instance {
        Universal::Pullback {
            left,
            right,
            proj_left,
            proj_right,
        } => {
            let (ne, nf, np) = (left.dom().len(), right.dom().len(), proj_left.dom().len());
            if proj_right.dom().len() != np
                || proj_left.cod().len() != ne
                || proj_right.cod().len() != nf
                || left.cod() != right.cod()
            {
                return Err(Error::Universality("candidate legs do not fit".into()));
            }
            for p in 0..np {
                if left.images()[proj_left.images()[p]] != right.images()[proj_right.images()[p]] {
                    return Ok(false);
                }
            }
            let mut over = vec![vec![0usize; nf]; ne];
            for p in 0..np {
                over[proj_left.images()[p]][proj_right.images()[p]] += 1;
            }
            for k in 0..=bound {
                let (t1s, t2s) = (all_maps(k, ne)?, all_maps(k, nf)?);
                limits::check(t1s.len().saturating_mul(t2s.len()))?;
                for t1 in &t1s {
                    for t2 in &t2s {
                        let commutes =
                            (0..k).all(|t| left.images()[t1[t]] == right.images()[t2[t]]);
                        if !commutes {
                            continue;
                        }
                        let mediators: usize = (0..k).map(|t| over[t1[t]][t2[t]]).product();
                        if mediators != 1 {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        Universal::Pushout {
            left,
            right,
            in_left,
            in_right,
        } => {
            let (nx, ny, nq) = (left.cod().len(), right.cod().len(), in_left.cod().len());
            if in_right.cod().len() != nq
                || in_left.dom().len() != nx
                || in_right.dom().len() != ny
                || left.dom() != right.dom()
            {
                return Err(Error::Universality("candidate legs do not fit".into()));
            }
            for b in 0..left.dom().len() {
                if in_left.images()[left.images()[b]] != in_right.images()[right.images()[b]] {
                    return Ok(false);
                }
            }
            for k in 0..=bound {
                let (us, vs) = (all_maps(nx, k)?, all_maps(ny, k)?);
                limits::check(us.len().saturating_mul(vs.len()))?;
                for u in &us {
                    for v in &vs {
                        let commutes = (0..left.dom().len())
                            .all(|b| u[left.images()[b]] == v[right.images()[b]]);
                        if !commutes {
                            continue;
                        }
                        // Each point of Q must receive exactly one value.
                        let mut forced: Vec<Option<usize>> = vec![None; nq];
                        let mut clash = false;
                        let pins = (0..nx)
                            .map(|x| (in_left.images()[x], u[x]))
                            .chain((0..ny).map(|y| (in_right.images()[y], v[y])));
                        for (q, value) in pins {
                            match forced[q] {
                                Some(w) if w != value => clash = true,
                                _ => forced[q] = Some(value),
                            }
                        }
                        if clash {
                            return Ok(false);
                        }
                        let mediators: usize = forced
                            .iter()
                            .map(|f| if f.is_some() { 1 } else { k })
                            .product();
                        if mediators != 1 {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}
