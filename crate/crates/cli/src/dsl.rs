//! The line-oriented model language.
//!
//! ```text
//! # comment
//! domain B = {0,1}
//! var a : B
//! factor f over (a,b) = [1 2 3 4]
//! open left = (a)
//! open right = (b)
//! node Y : B | parents (X) cpt = [0.9 0.1 0.2 0.8]
//! ```
//!
//! A file holds either `var`/`factor`/`open` statements or `node`
//! statements, never both. Names must be declared before use. A table may
//! span lines; newlines inside `[...]` are ignored. Factor tables list
//! entries with the first scope variable slowest; a cpt lists one column per
//! parent assignment, first declared parent slowest.

use std::collections::{HashMap, HashSet};

use copycat_core::dspan::BayesNet;
use copycat_core::finset::Label;
use copycat_core::matcat::{decode, encode, Domain};
use copycat_core::ofg::{Factor, Interface};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    /// In declaration order.
    pub domains: Vec<Domain>,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Fg(FactorGraphModel),
    Bn(BayesNet),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactorGraphModel {
    pub vars: Vec<(Label, Domain)>,
    pub factors: Vec<FactorDecl>,
    pub open_left: Vec<Label>,
    pub open_right: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorDecl {
    pub name: Label,
    /// Declared order; `factor` itself is indexed by sorted ports.
    pub scope: Vec<Label>,
    pub factor: Factor,
}

impl FactorDecl {
    /// Takes `entries` in declared order and stores them by sorted port.
    pub fn from_declared(
        name: Label,
        scope: Vec<(Label, Domain)>,
        entries: &[f64],
    ) -> copycat_core::Result<Self> {
        let interface = Interface::new(scope.iter().cloned())?;
        let declared_sizes: Vec<usize> = scope.iter().map(|(_, d)| d.len()).collect();
        let slot = sorted_slots(&scope, &interface);
        let factor = Factor::from_fn(interface, |sorted| {
            let declared: Vec<usize> = slot.iter().map(|&k| sorted[k]).collect();
            entries[encode(&declared, &declared_sizes)]
        })?;
        Ok(FactorDecl {
            name,
            scope: scope.into_iter().map(|(l, _)| l).collect(),
            factor,
        })
    }

    /// The table in declared order.
    pub fn declared_entries(&self) -> Vec<f64> {
        let interface = self.factor.interface();
        let scope: Vec<(Label, Domain)> = self
            .scope
            .iter()
            .map(|l| (l.clone(), interface.domain(l).expect("scope port").clone()))
            .collect();
        let sizes: Vec<usize> = scope.iter().map(|(_, d)| d.len()).collect();
        let slot = sorted_slots(&scope, interface);
        let total: usize = sizes.iter().product();
        (0..total)
            .map(|idx| {
                let declared = decode(idx, &sizes);
                let mut sorted = vec![0; declared.len()];
                for (j, &k) in slot.iter().enumerate() {
                    sorted[k] = declared[j];
                }
                self.factor.value(&sorted)
            })
            .collect()
    }
}

/// `slot[j]`: position of declared port `j` among the sorted ports.
fn sorted_slots(scope: &[(Label, Domain)], interface: &Interface) -> Vec<usize> {
    scope
        .iter()
        .map(|(l, _)| interface.ports().index_of(l).expect("port in interface"))
        .collect()
}

impl ModelFile {
    pub fn factor_graph(&self) -> Option<&FactorGraphModel> {
        match &self.body {
            Body::Fg(g) => Some(g),
            Body::Bn(_) => None,
        }
    }

    /// Every variable or node with its domain, in declaration order.
    pub fn variables(&self) -> Vec<(Label, Domain)> {
        match &self.body {
            Body::Fg(g) => g.vars.clone(),
            Body::Bn(net) => net.nodes().to_vec(),
        }
    }
}

// ---------------------------------------------------------------- lexing

const SYMBOLS: &[char] = &['{', '}', '(', ')', '[', ']', ',', '=', ':', '|'];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Sym(char),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> CliResult<Vec<Token>> {
    let mut out = Vec::new();
    // Location of the open `[`, if any; newlines inside are dropped.
    let mut open_table: Option<(usize, usize)> = None;
    let mut line = 1;
    for raw in text.split('\n') {
        let chars: Vec<char> = raw.trim_end_matches('\r').chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if SYMBOLS.contains(&c) {
                match c {
                    '[' if open_table.is_some() => {
                        return Err(parse_err(line, col, "nested '['"));
                    }
                    '[' => open_table = Some((line, col)),
                    ']' if open_table.is_none() => {
                        return Err(parse_err(line, col, "']' without a matching '['"));
                    }
                    ']' => open_table = None,
                    _ => {}
                }
                out.push(Token {
                    tok: Tok::Sym(c),
                    line,
                    col,
                });
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !SYMBOLS.contains(&chars[i])
                && chars[i] != '#'
            {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                line,
                col: start + 1,
            });
        }
        if open_table.is_none() {
            out.push(Token {
                tok: Tok::Newline,
                line,
                col: chars.len() + 1,
            });
        }
        line += 1;
    }
    if let Some((l, c)) = open_table {
        return Err(parse_err(l, c, "'[' is never closed"));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col: 1,
    });
    Ok(out)
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn name_err(at: &Token, msg: impl Into<String>) -> CliError {
    CliError::Name {
        line: at.line,
        col: at.col,
        msg: msg.into(),
    }
}

fn shape_err(at: &Token, msg: impl Into<String>) -> CliError {
    CliError::Shape {
        line: at.line,
        col: at.col,
        msg: msg.into(),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("'{w}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::Newline => "end of line".into(),
        Tok::Eof => "end of file".into(),
    }
}

// --------------------------------------------------------------- parsing

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Fg,
    Bn,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    domains: Vec<Domain>,
    domain_index: HashMap<String, usize>,
    kind: Option<Kind>,
    fg: FactorGraphModel,
    var_index: HashMap<String, usize>,
    factor_names: HashSet<String>,
    nodes: Vec<(Label, Domain)>,
    node_index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
    seen_open: [bool; 2],
}

pub fn parse_str(text: &str) -> CliResult<ModelFile> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        domains: Vec::new(),
        domain_index: HashMap::new(),
        kind: None,
        fg: FactorGraphModel::default(),
        var_index: HashMap::new(),
        factor_names: HashSet::new(),
        nodes: Vec::new(),
        node_index: HashMap::new(),
        parents: Vec::new(),
        tables: Vec::new(),
        seen_open: [false; 2],
    };
    p.file()?;
    let body = match p.kind {
        Some(Kind::Bn) => Body::Bn(BayesNet::new(p.nodes, p.parents, p.tables)?),
        _ => Body::Fg(p.fg),
    };
    Ok(ModelFile {
        domains: p.domains,
        body,
    })
}

pub fn parse_file(path: &std::path::Path) -> CliResult<ModelFile> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_str(&text).map_err(|e| e.in_file(&shown))
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> CliResult<Token> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(parse_err(
                t.line,
                t.col,
                format!("expected '{c}', found {}", describe(&t.tok)),
            ))
        }
    }

    fn expect_word(&mut self, what: &str) -> CliResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            other => Err(parse_err(
                t.line,
                t.col,
                format!("expected {what}, found {}", describe(other)),
            )),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> CliResult<()> {
        let (w, t) = self.expect_word(&format!("'{kw}'"))?;
        if w == kw {
            Ok(())
        } else {
            Err(parse_err(
                t.line,
                t.col,
                format!("expected '{kw}', found '{w}'"),
            ))
        }
    }

    fn end_of_statement(&mut self) -> CliResult<()> {
        let t = self.next();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            other => Err(parse_err(
                t.line,
                t.col,
                format!("unexpected {}", describe(&other)),
            )),
        }
    }

    /// `open w1 , w2 , ... close`, possibly empty.
    fn word_list(
        &mut self,
        open: char,
        close: char,
        what: &str,
    ) -> CliResult<Vec<(String, Token)>> {
        self.expect_sym(open)?;
        let mut items = Vec::new();
        if self.peek().tok == Tok::Sym(close) {
            self.next();
            return Ok(items);
        }
        loop {
            items.push(self.expect_word(what)?);
            let t = self.next();
            match t.tok {
                Tok::Sym(c) if c == close => return Ok(items),
                Tok::Sym(',') => {}
                other => {
                    return Err(parse_err(
                        t.line,
                        t.col,
                        format!("expected ',' or '{close}', found {}", describe(&other)),
                    ))
                }
            }
        }
    }

    /// `[ e1 e2 ... ]` of nonnegative finite numbers.
    fn table(&mut self) -> CliResult<(Vec<f64>, Token)> {
        let open = self.expect_sym('[')?;
        let mut entries = Vec::new();
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Sym(']') => return Ok((entries, open)),
                Tok::Word(w) => match w.parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => entries.push(v),
                    _ => {
                        return Err(parse_err(
                            t.line,
                            t.col,
                            format!("expected a nonnegative number, found '{w}'"),
                        ))
                    }
                },
                other => {
                    return Err(parse_err(
                        t.line,
                        t.col,
                        format!("expected a number, found {}", describe(other)),
                    ))
                }
            }
        }
    }

    fn label(&self, w: &str, at: &Token) -> CliResult<Label> {
        Label::new(w).map_err(|e| parse_err(at.line, at.col, e.to_string()))
    }

    fn domain_named(&self, w: &str, at: &Token) -> CliResult<Domain> {
        self.domain_index
            .get(w)
            .map(|&i| self.domains[i].clone())
            .ok_or_else(|| name_err(at, format!("undeclared domain '{w}'")))
    }

    fn set_kind(&mut self, kind: Kind, at: &Token) -> CliResult<()> {
        match self.kind {
            Some(k) if k != kind => Err(parse_err(
                at.line,
                at.col,
                "factor graph and network statements cannot share a file",
            )),
            _ => {
                self.kind = Some(kind);
                Ok(())
            }
        }
    }

    fn file(&mut self) -> CliResult<()> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Newline => {
                    self.next();
                }
                Tok::Word(w) => {
                    match w.as_str() {
                        "domain" => self.domain()?,
                        "var" => self.var()?,
                        "factor" => self.factor()?,
                        "open" => self.open()?,
                        "node" => self.node()?,
                        other => {
                            return Err(parse_err(
                                t.line,
                                t.col,
                                format!("unknown statement '{other}'"),
                            ))
                        }
                    }
                    self.end_of_statement()?;
                }
                other => {
                    return Err(parse_err(
                        t.line,
                        t.col,
                        format!("unexpected {}", describe(other)),
                    ))
                }
            }
        }
    }

    fn domain(&mut self) -> CliResult<()> {
        self.next();
        let (name, at) = self.expect_word("a domain name")?;
        let label = self.label(&name, &at)?;
        self.expect_sym('=')?;
        let values = self.word_list('{', '}', "a value")?;
        if self.domain_index.contains_key(&name) {
            return Err(name_err(&at, format!("domain '{name}' declared twice")));
        }
        let mut labels = Vec::with_capacity(values.len());
        for (v, vt) in &values {
            let l = self.label(v, vt)?;
            if labels.contains(&l) {
                return Err(name_err(vt, format!("domain '{name}' repeats value '{v}'")));
            }
            labels.push(l);
        }
        let d = Domain::new(label, labels).map_err(|e| shape_err(&at, e.to_string()))?;
        self.domain_index.insert(name, self.domains.len());
        self.domains.push(d);
        Ok(())
    }

    fn var(&mut self) -> CliResult<()> {
        let kw = self.next();
        self.set_kind(Kind::Fg, &kw)?;
        let (name, at) = self.expect_word("a variable name")?;
        let label = self.label(&name, &at)?;
        self.expect_sym(':')?;
        let (dname, dt) = self.expect_word("a domain name")?;
        let d = self.domain_named(&dname, &dt)?;
        if self.var_index.contains_key(&name) {
            return Err(name_err(&at, format!("variable '{name}' declared twice")));
        }
        self.var_index.insert(name, self.fg.vars.len());
        self.fg.vars.push((label, d));
        Ok(())
    }

    fn variable(&self, w: &str, at: &Token) -> CliResult<(Label, Domain)> {
        self.var_index
            .get(w)
            .map(|&i| self.fg.vars[i].clone())
            .ok_or_else(|| name_err(at, format!("undeclared variable '{w}'")))
    }

    fn factor(&mut self) -> CliResult<()> {
        let kw = self.next();
        self.set_kind(Kind::Fg, &kw)?;
        let (name, at) = self.expect_word("a factor name")?;
        let label = self.label(&name, &at)?;
        self.expect_keyword("over")?;
        let scope_words = self.word_list('(', ')', "a variable")?;
        self.expect_sym('=')?;
        let (entries, table_at) = self.table()?;
        if self.factor_names.contains(&name) {
            return Err(name_err(&at, format!("factor '{name}' declared twice")));
        }
        let mut scope: Vec<(Label, Domain)> = Vec::with_capacity(scope_words.len());
        for (w, wt) in &scope_words {
            let v = self.variable(w, wt)?;
            if scope.iter().any(|(l, _)| *l == v.0) {
                return Err(name_err(wt, format!("factor '{name}' lists '{w}' twice")));
            }
            scope.push(v);
        }
        let need: usize = scope.iter().map(|(_, d)| d.len()).product();
        if entries.len() != need {
            return Err(shape_err(
                &table_at,
                format!(
                    "factor '{name}' has {} entries, its scope needs {need}",
                    entries.len()
                ),
            ));
        }
        let decl = FactorDecl::from_declared(label, scope, &entries)
            .map_err(|e| shape_err(&table_at, e.to_string()))?;
        self.factor_names.insert(name);
        self.fg.factors.push(decl);
        Ok(())
    }

    fn open(&mut self) -> CliResult<()> {
        let kw = self.next();
        self.set_kind(Kind::Fg, &kw)?;
        let (side, st) = self.expect_word("'left' or 'right'")?;
        let which = match side.as_str() {
            "left" => 0,
            "right" => 1,
            _ => {
                return Err(parse_err(
                    st.line,
                    st.col,
                    format!("expected 'left' or 'right', found '{side}'"),
                ))
            }
        };
        if self.seen_open[which] {
            return Err(parse_err(
                st.line,
                st.col,
                format!("open {side} given twice"),
            ));
        }
        self.seen_open[which] = true;
        self.expect_sym('=')?;
        let words = self.word_list('(', ')', "a variable")?;
        let mut ports: Vec<Label> = Vec::with_capacity(words.len());
        for (w, wt) in &words {
            let (l, _) = self.variable(w, wt)?;
            if ports.contains(&l) {
                return Err(name_err(wt, format!("open {side} lists '{w}' twice")));
            }
            ports.push(l);
        }
        if which == 0 {
            self.fg.open_left = ports;
        } else {
            self.fg.open_right = ports;
        }
        Ok(())
    }

    fn node(&mut self) -> CliResult<()> {
        let kw = self.next();
        self.set_kind(Kind::Bn, &kw)?;
        let (name, at) = self.expect_word("a node name")?;
        let label = self.label(&name, &at)?;
        self.expect_sym(':')?;
        let (dname, dt) = self.expect_word("a domain name")?;
        let d = self.domain_named(&dname, &dt)?;
        self.expect_sym('|')?;
        self.expect_keyword("parents")?;
        let pws = self.word_list('(', ')', "a parent")?;
        self.expect_keyword("cpt")?;
        self.expect_sym('=')?;
        let (table, table_at) = self.table()?;
        if self.node_index.contains_key(&name) {
            return Err(name_err(&at, format!("node '{name}' declared twice")));
        }
        let mut pa = Vec::with_capacity(pws.len());
        for (w, wt) in &pws {
            let i = *self.node_index.get(w).ok_or_else(|| {
                name_err(wt, format!("parent '{w}' is not a node declared earlier"))
            })?;
            if pa.contains(&i) {
                return Err(name_err(
                    wt,
                    format!("node '{name}' lists parent '{w}' twice"),
                ));
            }
            pa.push(i);
        }
        let configs: usize = pa.iter().map(|&p| self.nodes[p].1.len()).product();
        let need = configs * d.len();
        if table.len() != need {
            return Err(shape_err(
                &table_at,
                format!("cpt of '{name}' has {} entries, needs {need}", table.len()),
            ));
        }
        self.node_index.insert(name, self.nodes.len());
        self.nodes.push((label, d));
        self.parents.push(pa);
        self.tables.push(table);
        Ok(())
    }
}

// -------------------------------------------------------------- emission

fn number(v: f64) -> String {
    // Both forms print the shortest text that parses back to `v`.
    if v == 0.0 || (1e-6..1e15).contains(&v) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn joined<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn emit(m: &ModelFile) -> String {
    let mut out = String::new();
    for d in &m.domains {
        out.push_str(&format!(
            "domain {} = {{{}}}\n",
            d.name(),
            joined(d.values(), ",")
        ));
    }
    match &m.body {
        Body::Fg(g) => {
            for (v, d) in &g.vars {
                out.push_str(&format!("var {v} : {}\n", d.name()));
            }
            for f in &g.factors {
                out.push_str(&format!(
                    "factor {} over ({}) = [{}]\n",
                    f.name,
                    joined(&f.scope, ","),
                    joined(f.declared_entries().into_iter().map(number), " ")
                ));
            }
            for (side, ports) in [("left", &g.open_left), ("right", &g.open_right)] {
                if !ports.is_empty() {
                    out.push_str(&format!("open {side} = ({})\n", joined(ports.iter(), ",")));
                }
            }
        }
        Body::Bn(net) => {
            for i in 0..net.len() {
                let parents = net.parents(i).iter().map(|&p| net.name(p));
                out.push_str(&format!(
                    "node {} : {} | parents ({}) cpt = [{}]\n",
                    net.name(i),
                    net.domain(i).name(),
                    joined(parents, ","),
                    joined(net.table(i).iter().map(|&v| number(v)), " ")
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "domain B = {0,1}\nvar a : B\nfactor one over (a) = [1 1]\n";

    #[test]
    fn minimal_file() {
        let m = parse_str(MINIMAL).unwrap();
        let g = m.factor_graph().unwrap();
        assert_eq!(g.vars.len(), 1);
        assert_eq!(g.factors[0].factor.entries(), &[1.0, 1.0]);
        assert_eq!(parse_str(&emit(&m)).unwrap(), m);
    }

    #[test]
    fn tables_are_stored_by_sorted_port() {
        let text = "domain B = {0,1}\ndomain T = {x,y,z}\nvar b : B\nvar a : T\n\
                    factor f over (b,a) = [1 2 3 4 5 6]\n";
        let m = parse_str(text).unwrap();
        let f = &m.factor_graph().unwrap().factors[0];
        // Sorted order is (a, b); f(b=1, a=0) is the fourth declared entry.
        assert_eq!(f.factor.value(&[0, 1]), 4.0);
        assert_eq!(f.declared_entries(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn wrong_entry_count_names_the_factor() {
        let err = parse_str("domain B = {0,1}\nvar a : B\nfactor lonely over (a) = [1 2 3]\n")
            .unwrap_err();
        match err {
            CliError::Shape { line, msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("lonely"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn locations_are_reported() {
        let err = parse_str("domain B = {0,1}\nvar a : C\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Name {
                    line: 2,
                    col: 9,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_str("domain B = {0,1}\nvar a B\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Parse {
                    line: 2,
                    col: 7,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_str("domain B = {0,1}\nvar a : B\nfactor f over (a) = [1\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Parse {
                    line: 3,
                    col: 21,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn tables_may_span_lines() {
        let m = parse_str(
            "domain B = {0,1}\nvar a : B\nfactor f over (a) = [\n  1   # first\n  2\n]\n",
        )
        .unwrap();
        assert_eq!(
            m.factor_graph().unwrap().factors[0].factor.entries(),
            &[1.0, 2.0]
        );
    }

    #[test]
    fn mixed_files_are_rejected() {
        let err =
            parse_str("domain B = {0,1}\nvar a : B\nnode X : B | parents () cpt = [0.5 0.5]\n")
                .unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }));
    }

    #[test]
    fn parents_must_come_first() {
        let err = parse_str(
            "domain B = {0,1}\nnode Y : B | parents (X) cpt = [1 0 0 1]\nnode X : B | parents () cpt = [1 0]\n",
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Name { line: 2, .. }));
    }

    #[test]
    fn network_round_trip() {
        let text = "domain B = {0,1}\nnode X : B | parents () cpt = [0.6 0.4]\n\
                    node Y : B | parents (X) cpt = [0.9 0.1 0.2 0.8]\n";
        let m = parse_str(text).unwrap();
        assert_eq!(emit(&m), text);
        assert!(matches!(m.body, Body::Bn(_)));
    }

    #[test]
    fn open_lists_keep_their_order() {
        let m = parse_str(
            "domain B = {0,1}\nvar a : B\nvar b : B\nopen right = (b,a)\nopen left = (a)\n",
        )
        .unwrap();
        let g = m.factor_graph().unwrap();
        assert_eq!(
            g.open_right,
            vec![Label::new("b").unwrap(), Label::new("a").unwrap()]
        );
        assert_eq!(parse_str(&emit(&m)).unwrap(), m);
        let err = parse_str("domain B = {0,1}\nvar a : B\nopen left = (a,a)\n").unwrap_err();
        assert!(matches!(err, CliError::Name { .. }));
    }

    #[test]
    fn awkward_numbers_survive_emission() {
        for v in [0.1 + 0.2, 1e-300, 123456789012345678.0, 0.0, 7.0] {
            let text = format!(
                "domain B = {{0}}\nvar a : B\nfactor f over (a) = [{}]\n",
                number(v)
            );
            let m = parse_str(&text).unwrap();
            assert_eq!(m.factor_graph().unwrap().factors[0].factor.entries(), &[v]);
        }
    }
}
