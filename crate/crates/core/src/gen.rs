//! Seeded random instances for the law suites. Every generator draws only
//! from the caller's `ChaCha8Rng`, so a seed fixes the whole instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dspan::{extend_context_parts, BayesNet, Section, SpanCell, SpanMorphism};
use crate::error::Result;
use crate::finset::{compose_map, label, Cospan, FiniteMap, FiniteSet, Label, Span};
use crate::krnfib::{Bundle, FibreKernel, Kernel};
use crate::matcat::{Axis, Domain, Tensor};
use crate::ofg::{Factor, Interface, InterfaceMap, OfgCell, OpenFactorGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `{prefix0, ..., prefix(n-1)}`.
pub fn named_set(prefix: &str, n: usize) -> FiniteSet {
    FiniteSet::new((0..n).map(|i| label(&format!("{prefix}{i}")))).expect("distinct labels")
}

pub fn set(rng: &mut ChaCha8Rng, prefix: &str, lo: usize, hi: usize) -> FiniteSet {
    named_set(prefix, rng.gen_range(lo..=hi))
}

/// A uniformly random map; `cod` must be nonempty unless `dom` is empty.
pub fn map(rng: &mut ChaCha8Rng, dom: &FiniteSet, cod: &FiniteSet) -> FiniteMap {
    let images = (0..dom.len())
        .map(|_| rng.gen_range(0..cod.len()))
        .collect();
    FiniteMap::from_indices(dom.clone(), cod.clone(), images).expect("images in range")
}

pub fn permutation(rng: &mut ChaCha8Rng, s: &FiniteSet) -> FiniteMap {
    let mut images: Vec<usize> = (0..s.len()).collect();
    images.shuffle(rng);
    FiniteMap::from_indices(s.clone(), s.clone(), images).expect("a permutation")
}

/// A probability vector; about one entry in five is zeroed when that
/// leaves some mass.
pub fn distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.05..1.0)
            }
        })
        .collect();
    if v.iter().all(|&x| x == 0.0) && n > 0 {
        v[rng.gen_range(0..n)] = 1.0;
    }
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}

pub fn kernel(rng: &mut ChaCha8Rng, dom: &FiniteSet, cod: &FiniteSet) -> Kernel {
    let (n, m) = (dom.len(), cod.len());
    let mut entries = vec![0.0; n * m];
    for x in 0..n {
        for (y, p) in distribution(rng, m).into_iter().enumerate() {
            entries[y * n + x] = p;
        }
    }
    Kernel::new(dom.clone(), cod.clone(), entries).expect("columns are distributions")
}

/// A bundle with between one and `max_fibre` points over each base point.
pub fn bundle_over(
    rng: &mut ChaCha8Rng,
    base: &FiniteSet,
    prefix: &str,
    max_fibre: usize,
) -> Bundle {
    let sizes: Vec<usize> = (0..base.len())
        .map(|_| rng.gen_range(1..=max_fibre))
        .collect();
    let total = named_set(prefix, sizes.iter().sum());
    let images = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    Bundle::new(FiniteMap::from_indices(total, base.clone(), images).expect("images in range"))
}

/// A random kernel moving each point of `src` within the fibre of `dst` over
/// the same base point; every such fibre must be nonempty.
pub fn fibre_kernel(rng: &mut ChaCha8Rng, src: &Bundle, dst: &Bundle) -> FibreKernel {
    let (n, m) = (src.total().len(), dst.total().len());
    let mut entries = vec![0.0; n * m];
    for x in 0..n {
        let fibre = dst.proj().fibre_indices(src.proj().image(x));
        for (k, p) in distribution(rng, fibre.len()).into_iter().enumerate() {
            entries[fibre[k] * n + x] = p;
        }
    }
    let k = Kernel::new(src.total().clone(), dst.total().clone(), entries).expect("stochastic");
    FibreKernel::new(src.clone(), dst.clone(), k).expect("supported on fibres")
}

/// A section on `left ← E → right` with one or two apex points over each
/// left point. `right` must be nonempty unless `left` is empty.
pub fn section(rng: &mut ChaCha8Rng, left: &FiniteSet, right: &FiniteSet, prefix: &str) -> Section {
    let over = bundle_over(rng, left, prefix, 2);
    let b = map(rng, over.total(), right);
    let s = fibre_kernel(rng, &Bundle::over_itself(left), &over);
    let span = Span::new(over.proj().clone(), b).expect("common apex");
    Section::new(span, s.kernel().clone()).expect("supported on fibres")
}

/// Sections `A⇝B`, `B⇝C`, ... with feet of one to `max_foot` points.
pub fn composable_sections(rng: &mut ChaCha8Rng, count: usize, max_foot: usize) -> Vec<Section> {
    let mut foot = set(rng, "a", 1, max_foot);
    (0..count)
        .map(|i| {
            let next = set(rng, &format!("f{}_", i + 1), 1, max_foot);
            let s = section(rng, &foot, &next, &format!("e{i}_"));
            foot = next;
            s
        })
        .collect()
}

/// Context-extension cells over a composable pair of sections, stacked
/// twice: row 0 extends row 1 by a second context.
pub fn span_cell_grid(rng: &mut ChaCha8Rng) -> Result<[[SpanCell; 2]; 2]> {
    let pair = composable_sections(rng, 2, 3);
    let lift = |rng: &mut ChaCha8Rng, s: &[Section; 2], prefix: &str| -> Result<[SpanCell; 2]> {
        let w = set(rng, prefix, 1, 2);
        let mut cells = Vec::new();
        for sec in s {
            let ext = extend_context_parts(sec, &w)?;
            let maps = SpanMorphism::new(
                ext.section.span().clone(),
                sec.span().clone(),
                ext.foot.1.clone(),
                ext.apex.1.clone(),
                ext.right.1.clone(),
            )?;
            cells.push(SpanCell::new(ext.section.clone(), sec.clone(), maps)?);
        }
        let [l, r]: [SpanCell; 2] = cells.try_into().expect("two cells");
        Ok([l, r])
    };
    let bottom = lift(rng, &[pair[0].clone(), pair[1].clone()], "w")?;
    let middle = [bottom[0].top().clone(), bottom[1].top().clone()];
    let top = lift(rng, &middle, "v")?;
    Ok([top, bottom])
}

pub fn domain(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Domain {
    let n = rng.gen_range(lo..=hi);
    Domain::range(&format!("D{n}"), n)
}

/// Entries uniform in `[0, 1)`.
pub fn factor(rng: &mut ChaCha8Rng, interface: &Interface) -> Result<Factor> {
    Factor::from_fn(interface.clone(), |_| rng.gen::<f64>())
}

/// A function matrix `from → to` on a single wire named `port`.
pub fn function_tensor(
    rng: &mut ChaCha8Rng,
    from: &Domain,
    to: &Domain,
    port: &Label,
) -> Result<Tensor> {
    let images: Vec<usize> = (0..from.len())
        .map(|_| rng.gen_range(0..to.len()))
        .collect();
    Tensor::from_fn(
        vec![Axis::new(port.clone(), to.clone())],
        vec![Axis::new(port.clone(), from.clone())],
        |o, i| if images[i[0]] == o[0] { 1.0 } else { 0.0 },
    )
}

/// An arbitrary nonnegative single-wire table.
pub fn latent_tensor(
    rng: &mut ChaCha8Rng,
    from: &Domain,
    to: &Domain,
    port: &Label,
) -> Result<Tensor> {
    Tensor::from_fn(
        vec![Axis::new(port.clone(), to.clone())],
        vec![Axis::new(port.clone(), from.clone())],
        |_, _| rng.gen::<f64>(),
    )
}

/// Open factor graphs `A⇝B⇝C⇝...`, each apex with at most `max_ports`
/// ports and domains of two or three values. Interior feet have one or two
/// ports; outer feet up to two. With `injective`, no apex port is exposed
/// twice on the same side.
pub fn composable_graphs(
    rng: &mut ChaCha8Rng,
    count: usize,
    max_ports: usize,
    injective: bool,
) -> Result<Vec<OpenFactorGraph>> {
    let n0 = rng.gen_range(0..=2);
    let mut left = Interface::new((0..n0).map(|k| (label(&format!("a{k}")), domain(rng, 2, 3))))?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut ports: Vec<(Label, Domain)> = Vec::new();
        let mut left_images = Vec::with_capacity(left.len());
        for k in 0..left.len() {
            let d = left.domain_at(k).clone();
            let reusable: Vec<usize> = (0..ports.len()).filter(|&p| ports[p].1 == d).collect();
            if !injective && !reusable.is_empty() && rng.gen_bool(0.3) {
                left_images.push(*reusable.choose(rng).expect("nonempty"));
            } else {
                left_images.push(ports.len());
                ports.push((label(&format!("x{i}_{}", ports.len())), d));
            }
        }
        let target = rng.gen_range(ports.len().max(1)..=max_ports.max(ports.len()).max(1));
        while ports.len() < target {
            ports.push((label(&format!("x{i}_{}", ports.len())), domain(rng, 2, 3)));
        }
        let last = i + 1 == count;
        let n_right = if last {
            rng.gen_range(0..=2)
        } else {
            rng.gen_range(1..=2)
        };
        let mut candidates: Vec<usize> = (0..ports.len()).collect();
        candidates.shuffle(rng);
        let right_images: Vec<usize> = (0..n_right)
            .filter_map(|k| {
                if injective {
                    candidates.get(k).copied()
                } else {
                    Some(rng.gen_range(0..ports.len()))
                }
            })
            .collect();

        // `ports` is in creation order; the interface sorts by label.
        let apex = Interface::new(ports.clone())?;
        let index_of = |k: usize| apex.ports().index_of(&ports[k].0).expect("port exists");
        let right_set = named_set(&format!("f{}_", i + 1), right_images.len());
        let a = FiniteMap::from_indices(
            left.ports().clone(),
            apex.ports().clone(),
            left_images.iter().map(|&k| index_of(k)).collect(),
        )?;
        let b = FiniteMap::from_indices(
            right_set,
            apex.ports().clone(),
            right_images.iter().map(|&k| index_of(k)).collect(),
        )?;
        let g = OpenFactorGraph::new(Cospan::new(a, b)?, factor(rng, &apex)?)?;
        left = g.right_foot().clone();
        out.push(g);
    }
    Ok(out)
}

/// Deterministic retyping of every port of `foot` from a fresh domain of one
/// to three values.
pub fn retyping(rng: &mut ChaCha8Rng, foot: &Interface) -> Result<InterfaceMap> {
    let fresh: Vec<Domain> = (0..foot.len())
        .map(|_| {
            let n = rng.gen_range(1..=3);
            Domain::range(&format!("N{n}"), n)
        })
        .collect();
    let comps = (0..foot.len())
        .map(|k| function_tensor(rng, &fresh[k], foot.domain_at(k), foot.ports().get(k)))
        .collect::<Result<Vec<_>>>()?;
    let source = Interface::from_typing(foot.ports().clone(), fresh)?;
    InterfaceMap::new(
        FiniteMap::identity(foot.ports()),
        source,
        foot.clone(),
        comps,
    )
}

/// A cell whose bottom is `g`: the apex and feet are permuted, exposed
/// ports get function matrices and latent ports arbitrary tables, and the
/// top factor is pulled back. `left`, when given, is reused as the left foot
/// map so the cell can sit to the right of another. Legs of `g` must be
/// injective.
pub fn lift_cell(
    rng: &mut ChaCha8Rng,
    g: &OpenFactorGraph,
    left: Option<&InterfaceMap>,
) -> Result<OfgCell> {
    let (a2, b2) = (g.cospan().left(), g.cospan().right());
    let chi2 = g.interface();
    let f = permutation(rng, chi2.ports());
    let fl_base = match left {
        Some(m) => m.base().clone(),
        None => permutation(rng, a2.dom()),
    };
    let fr_base = permutation(rng, b2.dom());
    let f_inv = f.inverse()?;
    let a = compose_map(&compose_map(&fl_base, a2)?, &f_inv)?;
    let b = compose_map(&compose_map(&fr_base, b2)?, &f_inv)?;
    let chi = Interface::from_typing(
        chi2.ports().clone(),
        (0..chi2.len())
            .map(|x| chi2.domain_at(f.image(x)).clone())
            .collect(),
    )?;

    let mut comps: Vec<Option<Tensor>> = vec![None; chi2.len()];
    if let Some(m) = left {
        for k in 0..a2.dom().len() {
            comps[a2.image(k)] = Some(m.components()[k].clone());
        }
    }
    for (x, slot) in comps.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let d = chi2.domain_at(x);
        let port = chi2.ports().get(x);
        let exposed = a2.images().contains(&x) || b2.images().contains(&x);
        *slot = Some(if exposed {
            function_tensor(rng, d, d, port)?
        } else {
            latent_tensor(rng, d, d, port)?
        });
    }
    let comps: Vec<Tensor> = comps.into_iter().map(|c| c.expect("filled")).collect();
    let mid = InterfaceMap::new(f, chi.clone(), chi2.clone(), comps)?;
    let top_factor = mid.pull_factor(g.factor())?;
    let top = OpenFactorGraph::new(Cospan::new(a, b)?, top_factor)?;

    let foot_map = |base: FiniteMap, leg: &FiniteMap, source: &Interface, target: &Interface| {
        let cs = (0..leg.dom().len())
            .map(|k| mid.components()[leg.image(k)].clone())
            .collect();
        InterfaceMap::new(base, source.clone(), target.clone(), cs)
    };
    let fl = match left {
        Some(m) => m.clone(),
        None => foot_map(fl_base, a2, top.left_foot(), g.left_foot())?,
    };
    let fr = foot_map(fr_base, b2, top.right_foot(), g.right_foot())?;
    OfgCell::new(top, g.clone(), fl, mid, fr)
}

/// A 2×2 grid of cells: `grid[0]` sits on top of `grid[1]`, and the two
/// cells of each row share their middle foot map.
pub fn ofg_cell_grid(rng: &mut ChaCha8Rng) -> Result<[[OfgCell; 2]; 2]> {
    let gs = composable_graphs(rng, 2, 4, true)?;
    let c21 = lift_cell(rng, &gs[0], None)?;
    let c22 = lift_cell(rng, &gs[1], Some(c21.right()))?;
    let c11 = lift_cell(rng, c21.top(), None)?;
    let c12 = lift_cell(rng, c22.top(), Some(c11.right()))?;
    Ok([[c11, c12], [c21, c22]])
}

/// A net of binary nodes `n0..`, each with a random subset of earlier
/// parents listed in shuffled order.
pub fn bayes_net(rng: &mut ChaCha8Rng, max_nodes: usize) -> Result<BayesNet> {
    let n = rng.gen_range(1..=max_nodes);
    let binary = Domain::range("B", 2);
    let nodes: Vec<(Label, Domain)> = (0..n)
        .map(|i| (label(&format!("n{i}")), binary.clone()))
        .collect();
    let mut parents = Vec::with_capacity(n);
    let mut tables = Vec::with_capacity(n);
    for i in 0..n {
        let mut pa: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.4)).collect();
        pa.shuffle(rng);
        let configs = 1usize << pa.len();
        let table: Vec<f64> = (0..configs).flat_map(|_| distribution(rng, 2)).collect();
        parents.push(pa);
        tables.push(table);
    }
    BayesNet::new(nodes, parents, tables)
}

/// Six random factors over five variables with the scopes
/// `(a,b) (a,c) (b,c,d) (d,e) (e) (d)` and domains of two or three values.
pub fn fig1_factors(rng: &mut ChaCha8Rng) -> Result<(Interface, Vec<Factor>)> {
    let vars = ["a", "b", "c", "d", "e"];
    let all = Interface::new(vars.iter().map(|v| (label(v), domain(rng, 2, 3))))?;
    let scopes: [&[&str]; 6] = [
        &["a", "b"],
        &["a", "c"],
        &["b", "c", "d"],
        &["d", "e"],
        &["e"],
        &["d"],
    ];
    let factors = scopes
        .iter()
        .map(|scope| {
            let i = Interface::new(
                scope
                    .iter()
                    .map(|v| (label(v), all.domain(&label(v)).expect("declared").clone())),
            )?;
            factor(rng, &i)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((all, factors))
}
