use std::collections::BTreeSet;

use copycat_core::dspan::bayes_joint;
use copycat_core::finset::{Cospan, FiniteMap, FiniteSet, Label};
use copycat_core::laws::{self, LawConfig};
use copycat_core::matcat::{decode, Domain};
use copycat_core::ofg::{self, Factor, Interface, OpenFactorGraph};

use crate::dsl::{self, Body, FactorDecl, FactorGraphModel, ModelFile};
use crate::error::{CliError, CliResult};

/// Foot labels `0, 1, ...`, padded so that label order is position order.
fn positions(k: usize) -> FiniteSet {
    let width = k.saturating_sub(1).to_string().len();
    FiniteSet::new((0..k).map(|i| Label::new(&format!("{i:0width$}")).expect("digits are atoms")))
        .expect("distinct positions")
}

impl FactorGraphModel {
    pub fn interface(&self) -> copycat_core::Result<Interface> {
        Interface::new(self.vars.iter().cloned())
    }

    /// The model as one open graph: its factors composed as a chain, then
    /// exposed through positional feet in the order of the open lists.
    pub fn open_graph(&self) -> copycat_core::Result<OpenFactorGraph> {
        let all = self.interface()?;
        let factors: Vec<Factor> = self.factors.iter().map(|f| f.factor.clone()).collect();
        let as_set = |ports: &[Label]| FiniteSet::new(ports.iter().cloned());
        let leaves = ofg::chain_leaves(
            &all,
            &factors,
            &as_set(&self.open_left)?,
            &as_set(&self.open_right)?,
        )?;
        let mut g = leaves[0].clone();
        for leaf in &leaves[1..] {
            g = ofg::hcompose(&g, leaf)?;
        }
        debug_assert_eq!(g.interface(), &all);
        let leg = |ports: &[Label]| {
            let images = ports
                .iter()
                .map(|p| all.ports().index_of(p).expect("declared port"))
                .collect();
            FiniteMap::from_indices(positions(ports.len()), all.ports().clone(), images)
        };
        OpenFactorGraph::new(
            Cospan::new(leg(&self.open_left)?, leg(&self.open_right)?)?,
            g.factor().clone(),
        )
    }
}

fn require_fg<'a>(m: &'a ModelFile, role: &str) -> CliResult<&'a FactorGraphModel> {
    m.factor_graph()
        .ok_or_else(|| CliError::Usage(format!("{role} must be a factor graph file")))
}

fn merge_domains(a: &[Domain], b: &[Domain]) -> CliResult<Vec<Domain>> {
    let mut out = a.to_vec();
    for d in b {
        match out.iter().find(|e| e.name() == d.name()) {
            Some(e) if e == d => {}
            Some(_) => {
                return Err(CliError::Usage(format!(
                    "domain {} is declared differently in the two files",
                    d.name()
                )))
            }
            None => out.push(d.clone()),
        }
    }
    Ok(out)
}

/// Glues the right open ports of `m1` to the left open ports of `m2`,
/// position by position. Variables are named after the glued classes;
/// clashing factor names from `m2` are primed.
pub fn compose(m1: &ModelFile, m2: &ModelFile) -> CliResult<ModelFile> {
    let (g1, g2) = (
        require_fg(m1, "the first model")?,
        require_fg(m2, "the second model")?,
    );
    if g1.open_right.len() != g2.open_left.len() {
        return Err(CliError::Usage(format!(
            "wiring mismatch: the first model exposes {} ports on the right, the second {} on the left",
            g1.open_right.len(),
            g2.open_left.len()
        )));
    }
    let domains = merge_domains(&m1.domains, &m2.domains)?;
    let c = ofg::hcompose_with_pushout(&g1.open_graph()?, &g2.open_graph()?)?;
    let (in_l, in_r) = (c.pushout.in_left(), c.pushout.in_right());
    let glue = |side: &FiniteMap, l: &Label| side.apply(l).cloned();

    let mut factors = Vec::with_capacity(g1.factors.len() + g2.factors.len());
    let mut names: BTreeSet<Label> = BTreeSet::new();
    for (g, side) in [(g1, in_l), (g2, in_r)] {
        for f in &g.factors {
            let mut name = f.name.clone();
            while names.contains(&name) {
                name = Label::new(&format!("{name}'"))?;
            }
            names.insert(name.clone());
            let renamed: FiniteSet = FiniteSet::new(
                f.factor
                    .interface()
                    .ports()
                    .iter()
                    .map(|p| glue(side, p))
                    .collect::<copycat_core::Result<Vec<_>>>()?,
            )?;
            let iso = FiniteMap::from_fn(f.factor.interface().ports().clone(), renamed, |p| {
                side.apply(p).expect("port of the model").clone()
            })?;
            factors.push(FactorDecl {
                name,
                scope: f
                    .scope
                    .iter()
                    .map(|p| glue(side, p))
                    .collect::<copycat_core::Result<_>>()?,
                factor: f.factor.relabel(&iso)?,
            });
        }
    }
    let apex = c.graph.interface();
    let vars = apex
        .ports()
        .iter()
        .enumerate()
        .map(|(k, p)| (p.clone(), apex.domain_at(k).clone()))
        .collect();
    let open_left = g1
        .open_left
        .iter()
        .map(|p| glue(in_l, p))
        .collect::<copycat_core::Result<_>>()?;
    let open_right = g2
        .open_right
        .iter()
        .map(|p| glue(in_r, p))
        .collect::<copycat_core::Result<_>>()?;
    Ok(ModelFile {
        domains,
        body: Body::Fg(FactorGraphModel {
            vars,
            factors,
            open_left,
            open_right,
        }),
    })
}

/// The unnormalized joint over every variable, ports sorted.
pub fn joint(m: &ModelFile) -> CliResult<Factor> {
    Ok(match &m.body {
        Body::Fg(g) => g.open_graph()?.factor().clone(),
        Body::Bn(net) => bayes_joint(net)?,
    })
}

pub fn marginal(m: &ModelFile, keep: &[String]) -> CliResult<Factor> {
    let keep = keep
        .iter()
        .map(|v| Label::new(v))
        .collect::<copycat_core::Result<Vec<_>>>()?;
    let j = joint(m)?;
    for v in &keep {
        if !j.interface().ports().contains(v) {
            return Err(CliError::Usage(format!("unknown variable {v}")));
        }
    }
    Ok(ofg::marginal(&j, &keep)?)
}

/// `v` with 17 significant digits, trailing zeros dropped, in the style of
/// C's `%.17g`.
pub fn sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..17).contains(&exp) {
        trim(&format!("{v:.*}", (16 - exp) as usize))
    } else {
        format!(
            "{}e{}{:02}",
            trim(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

/// Tab-separated table: a column per port in sorted order, then `value`;
/// rows in lexicographic order of domain positions.
pub fn render_table(f: &Factor, normalize: bool) -> CliResult<String> {
    let scale = if normalize {
        let total = f.total();
        if !(total > 0.0 && total.is_finite()) {
            return Err(CliError::Degenerate(format!(
                "total mass is {total}; nothing to normalize"
            )));
        }
        total
    } else {
        1.0
    };
    let iface = f.interface();
    let mut out = String::new();
    for p in iface.ports().iter() {
        out.push_str(p.as_str());
        out.push('\t');
    }
    out.push_str("value\n");
    let sizes = iface.sizes();
    for (idx, &v) in f.entries().iter().enumerate() {
        for (k, d) in decode(idx, &sizes).into_iter().enumerate() {
            out.push_str(iface.domain_at(k).values()[d].as_str());
            out.push('\t');
        }
        out.push_str(&sig17(if normalize { v / scale } else { v }));
        out.push('\n');
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Bipartite variable/factor graph: variables are circles, factors squares.
/// Open variables get a double border and their open positions as an
/// external label.
pub fn dot(m: &ModelFile) -> String {
    let mut vars: Vec<(Label, Vec<String>)> = m
        .variables()
        .into_iter()
        .map(|(l, _)| (l, Vec::new()))
        .collect();
    let mut factors: Vec<(String, String, Vec<Label>)> = Vec::new();
    match &m.body {
        Body::Fg(g) => {
            for (side, ports) in [("left", &g.open_left), ("right", &g.open_right)] {
                for (i, p) in ports.iter().enumerate() {
                    if let Some((_, marks)) = vars.iter_mut().find(|(l, _)| l == p) {
                        marks.push(format!("{side} {i}"));
                    }
                }
            }
            for f in &g.factors {
                factors.push((f.name.to_string(), f.name.to_string(), f.scope.clone()));
            }
        }
        Body::Bn(net) => {
            for i in 0..net.len() {
                let parents: Vec<Label> = net
                    .parents(i)
                    .iter()
                    .map(|&p| net.name(p).clone())
                    .collect();
                let caption = if parents.is_empty() {
                    format!("P({})", net.name(i))
                } else {
                    format!(
                        "P({}|{})",
                        net.name(i),
                        parents
                            .iter()
                            .map(|p| p.as_str())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                };
                let mut scope = vec![net.name(i).clone()];
                scope.extend(parents);
                factors.push((net.name(i).to_string(), caption, scope));
            }
        }
    }
    vars.sort();
    factors.sort();
    let mut edges: Vec<(String, String)> = factors
        .iter()
        .flat_map(|(id, _, scope)| scope.iter().map(move |v| (id.clone(), v.to_string())))
        .collect();
    edges.sort();
    edges.dedup();

    let mut out = String::from("graph model {\n");
    for (v, marks) in &vars {
        let id = quote(&format!("v:{v}"));
        if marks.is_empty() {
            out.push_str(&format!(
                "  {id} [label={}, shape=circle];\n",
                quote(v.as_str())
            ));
        } else {
            out.push_str(&format!(
                "  {id} [label={}, shape=circle, peripheries=2, xlabel={}];\n",
                quote(v.as_str()),
                quote(&marks.join(", "))
            ));
        }
    }
    for (id, caption, _) in &factors {
        out.push_str(&format!(
            "  {} [label={}, shape=square];\n",
            quote(&format!("f:{id}")),
            quote(caption)
        ));
    }
    for (f, v) in &edges {
        out.push_str(&format!(
            "  {} -- {};\n",
            quote(&format!("f:{f}")),
            quote(&format!("v:{v}"))
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// The algebraic laws of every module.
    Laws,
    /// The laws, the oracle cross-checks and the model round-trips.
    All,
}

const SHIPPED: [(&str, &str); 7] = [
    ("fig1.fg", include_str!("../../../models/fig1.fg")),
    ("ab.fg", include_str!("../../../models/ab.fg")),
    ("bc.fg", include_str!("../../../models/bc.fg")),
    ("unit_b.fg", include_str!("../../../models/unit_b.fg")),
    ("disjoint.fg", include_str!("../../../models/disjoint.fg")),
    ("two_node.bn", include_str!("../../../models/two_node.bn")),
    ("chain3.bn", include_str!("../../../models/chain3.bn")),
];

fn round_trip(text: &str) -> Result<bool, CliError> {
    let m = dsl::parse_str(text)?;
    Ok(dsl::parse_str(&dsl::emit(&m))? == m)
}

pub struct CheckReport {
    pub text: String,
    pub failed: usize,
    pub total: usize,
}

/// Runs a suite, one line per check.
pub fn check(suite: Suite, cfg: &LawConfig) -> CheckReport {
    let mut lines = Vec::new();
    let mut failed = 0;
    let mut total = 0;
    for name in laws::law_names() {
        if suite == Suite::Laws && name.starts_with("oracle.") {
            continue;
        }
        let r = laws::run_law(name, cfg).expect("listed law");
        total += 1;
        if r.passed {
            lines.push(format!("PASS\t{}\t{} instances", r.name, r.instances));
        } else {
            failed += 1;
            lines.push(format!("FAIL\t{}\t{}", r.name, r.detail));
        }
    }
    if suite == Suite::All {
        for (file, text) in SHIPPED {
            total += 1;
            match round_trip(text) {
                Ok(true) => lines.push(format!("PASS\tcli.roundtrip.{file}\t1 instances")),
                Ok(false) => {
                    failed += 1;
                    lines.push(format!(
                        "FAIL\tcli.roundtrip.{file}\treparsed model differs"
                    ));
                }
                Err(e) => {
                    failed += 1;
                    lines.push(format!("FAIL\tcli.roundtrip.{file}\t{e}"));
                }
            }
        }
    }
    lines.push(format!("{} of {total} checks passed", total - failed));
    CheckReport {
        text: lines.join("\n") + "\n",
        failed,
        total,
    }
}
