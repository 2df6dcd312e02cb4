//! The `.mla` file format: named sections describing algebras, metrics,
//! derivations, pairs, cochains, cocycles, and witnesses.
//!
//! Grammar (line-oriented, `#` starts a comment, rationals as `p/q` or
//! integers, indices 1-based):
//!
//! ```text
//! algebra <name>
//! dim <n>
//! bracket <i> <j> = <coef> <k> [<coef> <k> ...]
//!
//! metric <name> on <algebra>
//! entry <i> <j> = <coef>
//!
//! derivation <name> on <algebra>
//! row <i> = <coef> ... <coef>
//!
//! pair <name>
//! l = <algebra>
//! Dl = <derivation>
//! adim <m>
//! agram <i> = <m coefs>
//! Da <i> = <m coefs>
//! rho <i> <j> = <m coefs>
//!
//! cochain <name> deg <p> target R
//! cochain <name> deg <p> target a dim <m>
//! at <i1> ... <ip> = <vector>
//!
//! cocycle <name> = <alpha> <gamma> <delta> <epsilon>
//!
//! witness <name>
//! tau = <cochain>
//! sigma = <cochain>
//! S <i> = <coefs>
//! U <i> = <coefs>
//! ```
//!
//! Metric entries complete symmetrically; omitted derivation, agram, Da,
//! and rho rows are zero; a-valued cochain headers carry an explicit
//! `dim <m>` because the target dimension of a sparse cochain is not
//! recoverable from its coefficient lines. References resolve against
//! sections earlier in the same document, names are unique per kind, and
//! every parse error carries the number of the offending line.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use mslaw_core::cochain::{Cochain, QuadCocycle, Target};
use mslaw_core::lie::LieAlgebra;
use mslaw_core::matrix::{Matrix, Rat};
use mslaw_core::pair::PairLDA;
use mslaw_core::{Error, Result};
use num_traits::Zero;

// ---- Document model ----

/// One named section of a document.
#[derive(Clone, Debug, PartialEq)]
pub enum Section {
    Algebra { name: String, algebra: LieAlgebra },
    Metric { name: String, on: String, gram: Matrix },
    Derivation { name: String, on: String, matrix: Matrix },
    Pair { name: String, l_ref: String, dl_ref: String, pair: PairLDA },
    Cochain { name: String, cochain: Cochain },
    Cocycle { name: String, refs: [String; 4], cocycle: QuadCocycle },
    Witness { name: String, witness: WitnessData },
}

impl Section {
    fn kind(&self) -> &'static str {
        match self {
            Section::Algebra { .. } => "algebra",
            Section::Metric { .. } => "metric",
            Section::Derivation { .. } => "derivation",
            Section::Pair { .. } => "pair",
            Section::Cochain { .. } => "cochain",
            Section::Cocycle { .. } => "cocycle",
            Section::Witness { .. } => "witness",
        }
    }

    fn name(&self) -> &str {
        match self {
            Section::Algebra { name, .. }
            | Section::Metric { name, .. }
            | Section::Derivation { name, .. }
            | Section::Pair { name, .. }
            | Section::Cochain { name, .. }
            | Section::Cocycle { name, .. }
            | Section::Witness { name, .. } => name,
        }
    }
}

/// Witness payload: cochain references for an equivalence transform and
/// matrix blocks for a morphism of pairs. All parts are optional; each
/// command demands the parts it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessData {
    pub tau: Option<String>,
    pub sigma: Option<String>,
    pub s: Option<Matrix>,
    pub u: Option<Matrix>,
}

/// Parsed document: ordered sections with per-kind unique names.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MlaDocument {
    pub sections: Vec<Section>,
}

impl MlaDocument {
    pub fn algebras(&self) -> Vec<(&str, &LieAlgebra)> {
        self.sections
            .iter()
            .filter_map(|s| match s {
                Section::Algebra { name, algebra } => Some((name.as_str(), algebra)),
                _ => None,
            })
            .collect()
    }

    /// All metric sections as (name, algebra name, Gram matrix).
    pub fn metrics(&self) -> Vec<(&str, &str, &Matrix)> {
        self.sections
            .iter()
            .filter_map(|s| match s {
                Section::Metric { name, on, gram } => Some((name.as_str(), on.as_str(), gram)),
                _ => None,
            })
            .collect()
    }

    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Algebra { name: n, algebra } if n == name => Some(algebra),
                _ => None,
            })
            .ok_or_else(|| missing("algebra", name))
    }

    /// The algebra a metric lives on together with its Gram matrix.
    pub fn metric(&self, name: &str) -> Result<(&str, &Matrix)> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Metric { name: n, on, gram } if n == name => Some((on.as_str(), gram)),
                _ => None,
            })
            .ok_or_else(|| missing("metric", name))
    }

    /// The algebra a derivation acts on together with its matrix.
    pub fn derivation(&self, name: &str) -> Result<(&str, &Matrix)> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Derivation { name: n, on, matrix } if n == name => {
                    Some((on.as_str(), matrix))
                }
                _ => None,
            })
            .ok_or_else(|| missing("derivation", name))
    }

    pub fn pair(&self, name: &str) -> Result<&PairLDA> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Pair { name: n, pair, .. } if n == name => Some(pair),
                _ => None,
            })
            .ok_or_else(|| missing("pair", name))
    }

    pub fn cochain(&self, name: &str) -> Result<&Cochain> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Cochain { name: n, cochain } if n == name => Some(cochain),
                _ => None,
            })
            .ok_or_else(|| missing("cochain", name))
    }

    pub fn cocycle(&self, name: &str) -> Result<&QuadCocycle> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Cocycle { name: n, cocycle, .. } if n == name => Some(cocycle),
                _ => None,
            })
            .ok_or_else(|| missing("cocycle", name))
    }

    pub fn witness(&self, name: &str) -> Result<&WitnessData> {
        self.sections
            .iter()
            .find_map(|s| match s {
                Section::Witness { name: n, witness } if n == name => Some(witness),
                _ => None,
            })
            .ok_or_else(|| missing("witness", name))
    }
}

fn missing(kind: &str, name: &str) -> Error {
    Error::usage(format!("no {kind} named '{name}'"))
}

// ---- Parsing ----

/// Parse a document, reporting the first malformed line.
pub fn parse_mla(text: &str) -> Result<MlaDocument> {
    let mut doc = MlaDocument::default();
    let mut open: Option<Open> = None;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "algebra" | "metric" | "derivation" | "pair" | "cochain" | "witness" => {
                close(&mut doc, open.take())?;
                open = Some(Open::start(&doc, ln, &tokens)?);
            }
            "cocycle" => {
                close(&mut doc, open.take())?;
                let section = cocycle_line(&doc, ln, &tokens)?;
                push(&mut doc, section, ln)?;
            }
            word => match open.as_mut() {
                Some(o) => o.body_line(&doc, ln, &tokens)?,
                None => {
                    return Err(Error::usage(format!(
                        "line {ln}: unexpected '{word}' outside a section"
                    )))
                }
            },
        }
    }
    close(&mut doc, open.take())?;
    Ok(doc)
}

fn close(doc: &mut MlaDocument, open: Option<Open>) -> Result<()> {
    if let Some(o) = open {
        let ln = o.header_line();
        let section = o.finish()?;
        push(doc, section, ln)?;
    }
    Ok(())
}

fn push(doc: &mut MlaDocument, section: Section, ln: usize) -> Result<()> {
    if doc.sections.iter().any(|s| s.kind() == section.kind() && s.name() == section.name()) {
        return Err(Error::usage(format!(
            "line {ln}: duplicate {} '{}'",
            section.kind(),
            section.name()
        )));
    }
    doc.sections.push(section);
    Ok(())
}

/// Builders for the sections that span multiple lines.
enum Open {
    Algebra(AlgebraBuilder),
    Metric(MetricBuilder),
    Derivation(DerivationBuilder),
    Pair(PairBuilder),
    Cochain(CochainBuilder),
    Witness(WitnessBuilder),
}

impl Open {
    fn start(doc: &MlaDocument, ln: usize, tokens: &[&str]) -> Result<Open> {
        match tokens[0] {
            "algebra" => {
                expect_len(ln, tokens, 2, "algebra <name>")?;
                Ok(Open::Algebra(AlgebraBuilder {
                    line: ln,
                    name: tokens[1].to_string(),
                    algebra: None,
                    seen: BTreeSet::new(),
                }))
            }
            "metric" | "derivation" => {
                expect_len(ln, tokens, 4, "<kind> <name> on <algebra>")?;
                expect_word(ln, tokens[2], "on")?;
                let on = tokens[3].to_string();
                let n = doc.algebra(&on).map_err(|e| at_line(ln, e))?.dim();
                if tokens[0] == "metric" {
                    Ok(Open::Metric(MetricBuilder {
                        line: ln,
                        name: tokens[1].to_string(),
                        on,
                        n,
                        entries: BTreeMap::new(),
                    }))
                } else {
                    Ok(Open::Derivation(DerivationBuilder {
                        line: ln,
                        name: tokens[1].to_string(),
                        on,
                        n,
                        rows: BTreeMap::new(),
                    }))
                }
            }
            "pair" => {
                expect_len(ln, tokens, 2, "pair <name>")?;
                Ok(Open::Pair(PairBuilder {
                    line: ln,
                    name: tokens[1].to_string(),
                    l: None,
                    dl: None,
                    adim: None,
                    agram: BTreeMap::new(),
                    da: BTreeMap::new(),
                    rho: BTreeMap::new(),
                }))
            }
            "cochain" => Ok(Open::Cochain(CochainBuilder::start(ln, tokens)?)),
            "witness" => {
                expect_len(ln, tokens, 2, "witness <name>")?;
                Ok(Open::Witness(WitnessBuilder {
                    line: ln,
                    name: tokens[1].to_string(),
                    tau: None,
                    sigma: None,
                    s: BTreeMap::new(),
                    u: BTreeMap::new(),
                }))
            }
            _ => unreachable!("start is only called on section keywords"),
        }
    }

    fn header_line(&self) -> usize {
        match self {
            Open::Algebra(b) => b.line,
            Open::Metric(b) => b.line,
            Open::Derivation(b) => b.line,
            Open::Pair(b) => b.line,
            Open::Cochain(b) => b.line,
            Open::Witness(b) => b.line,
        }
    }

    fn body_line(&mut self, doc: &MlaDocument, ln: usize, tokens: &[&str]) -> Result<()> {
        match self {
            Open::Algebra(b) => b.line_in(ln, tokens),
            Open::Metric(b) => b.line_in(ln, tokens),
            Open::Derivation(b) => b.line_in(ln, tokens),
            Open::Pair(b) => b.line_in(doc, ln, tokens),
            Open::Cochain(b) => b.line_in(ln, tokens),
            Open::Witness(b) => b.line_in(doc, ln, tokens),
        }
    }

    fn finish(self) -> Result<Section> {
        match self {
            Open::Algebra(b) => b.finish(),
            Open::Metric(b) => b.finish(),
            Open::Derivation(b) => b.finish(),
            Open::Pair(b) => b.finish(),
            Open::Cochain(b) => b.finish(),
            Open::Witness(b) => b.finish(),
        }
    }
}

struct AlgebraBuilder {
    line: usize,
    name: String,
    algebra: Option<LieAlgebra>,
    seen: BTreeSet<(usize, usize)>,
}

impl AlgebraBuilder {
    fn line_in(&mut self, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "dim" => {
                expect_len(ln, tokens, 2, "dim <n>")?;
                if self.algebra.is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate dim")));
                }
                let n = parse_usize(ln, tokens[1], "dimension")?;
                self.algebra = Some(LieAlgebra::abelian(n));
                Ok(())
            }
            "bracket" => {
                let Some(algebra) = self.algebra.as_mut() else {
                    return Err(Error::usage(format!("line {ln}: dim must appear before bracket")));
                };
                let n = algebra.dim();
                if tokens.len() < 6 || tokens[3] != "=" {
                    return Err(Error::usage(format!(
                        "line {ln}: expected 'bracket <i> <j> = <coef> <k> ...'"
                    )));
                }
                let i = parse_index(ln, tokens[1], n, "bracket index")?;
                let j = parse_index(ln, tokens[2], n, "bracket index")?;
                let terms = &tokens[4..];
                if terms.len() % 2 != 0 {
                    return Err(Error::usage(format!(
                        "line {ln}: bracket terms must be coefficient-index pairs"
                    )));
                }
                let mut value = vec![Rat::zero(); n];
                for term in terms.chunks(2) {
                    let c = parse_rat(ln, term[0])?;
                    let k = parse_index(ln, term[1], n, "basis index")?;
                    value[k] += c;
                }
                let key = (i.min(j), i.max(j));
                if !self.seen.insert(key) {
                    return Err(Error::usage(format!(
                        "line {ln}: duplicate bracket for ({}, {})",
                        key.0 + 1,
                        key.1 + 1
                    )));
                }
                algebra.set_bracket(i, j, value).map_err(|e| at_line(ln, e))
            }
            word => unexpected(ln, word, "an algebra"),
        }
    }

    fn finish(self) -> Result<Section> {
        let Some(algebra) = self.algebra else {
            return Err(Error::usage(format!(
                "line {}: algebra '{}' has no dim",
                self.line, self.name
            )));
        };
        Ok(Section::Algebra { name: self.name, algebra })
    }
}

struct MetricBuilder {
    line: usize,
    name: String,
    on: String,
    n: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl MetricBuilder {
    fn line_in(&mut self, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "entry" => {
                expect_len(ln, tokens, 5, "entry <i> <j> = <coef>")?;
                expect_word(ln, tokens[3], "=")?;
                let i = parse_index(ln, tokens[1], self.n, "entry index")?;
                let j = parse_index(ln, tokens[2], self.n, "entry index")?;
                let c = parse_rat(ln, tokens[4])?;
                let key = (i.min(j), i.max(j));
                if self.entries.insert(key, c).is_some() {
                    return Err(Error::usage(format!(
                        "line {ln}: duplicate entry for ({}, {})",
                        key.0 + 1,
                        key.1 + 1
                    )));
                }
                Ok(())
            }
            word => unexpected(ln, word, "a metric"),
        }
    }

    fn finish(self) -> Result<Section> {
        let gram = Matrix::from_fn(self.n, self.n, |i, j| {
            self.entries.get(&(i.min(j), i.max(j))).cloned().unwrap_or_else(Rat::zero)
        });
        Ok(Section::Metric { name: self.name, on: self.on, gram })
    }
}

struct DerivationBuilder {
    line: usize,
    name: String,
    on: String,
    n: usize,
    rows: BTreeMap<usize, Vec<Rat>>,
}

impl DerivationBuilder {
    fn line_in(&mut self, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "row" => {
                let i = row_index(ln, tokens, "row <i> = <coefs>")?;
                let i = bounded(ln, i, self.n, "row index")?;
                let coefs = parse_rats(ln, &tokens[3..], self.n, "row")?;
                if self.rows.insert(i, coefs).is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate row {}", i + 1)));
                }
                Ok(())
            }
            word => unexpected(ln, word, "a derivation"),
        }
    }

    fn finish(self) -> Result<Section> {
        let matrix = rows_to_matrix(&self.rows, self.n, self.n);
        Ok(Section::Derivation { name: self.name, on: self.on, matrix })
    }
}

struct PairBuilder {
    line: usize,
    name: String,
    l: Option<(String, LieAlgebra)>,
    dl: Option<(String, Matrix)>,
    adim: Option<usize>,
    agram: BTreeMap<usize, Vec<Rat>>,
    da: BTreeMap<usize, Vec<Rat>>,
    rho: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl PairBuilder {
    fn line_in(&mut self, doc: &MlaDocument, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "l" => {
                expect_len(ln, tokens, 3, "l = <algebra>")?;
                expect_word(ln, tokens[1], "=")?;
                if self.l.is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate l")));
                }
                let name = tokens[2].to_string();
                let algebra = doc.algebra(&name).map_err(|e| at_line(ln, e))?.clone();
                self.l = Some((name, algebra));
                Ok(())
            }
            "Dl" => {
                expect_len(ln, tokens, 3, "Dl = <derivation>")?;
                expect_word(ln, tokens[1], "=")?;
                if self.dl.is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate Dl")));
                }
                let Some((l_name, _)) = self.l.as_ref() else {
                    return Err(Error::usage(format!("line {ln}: l must appear before Dl")));
                };
                let name = tokens[2].to_string();
                let (on, matrix) = doc.derivation(&name).map_err(|e| at_line(ln, e))?;
                if on != l_name {
                    return Err(Error::usage(format!(
                        "line {ln}: derivation '{name}' is not on algebra '{l_name}'"
                    )));
                }
                self.dl = Some((name, matrix.clone()));
                Ok(())
            }
            "adim" => {
                expect_len(ln, tokens, 2, "adim <m>")?;
                if self.adim.is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate adim")));
                }
                self.adim = Some(parse_usize(ln, tokens[1], "module dimension")?);
                Ok(())
            }
            "agram" | "Da" => {
                let Some(m) = self.adim else {
                    return Err(Error::usage(format!(
                        "line {ln}: adim must appear before {}",
                        tokens[0]
                    )));
                };
                let i = row_index(ln, tokens, "<agram|Da> <i> = <coefs>")?;
                let i = bounded(ln, i, m, "row index")?;
                let coefs = parse_rats(ln, &tokens[3..], m, tokens[0])?;
                let rows = if tokens[0] == "agram" { &mut self.agram } else { &mut self.da };
                if rows.insert(i, coefs).is_some() {
                    return Err(Error::usage(format!(
                        "line {ln}: duplicate {} row {}",
                        tokens[0],
                        i + 1
                    )));
                }
                Ok(())
            }
            "rho" => {
                let Some(m) = self.adim else {
                    return Err(Error::usage(format!("line {ln}: adim must appear before rho")));
                };
                let Some((_, l)) = self.l.as_ref() else {
                    return Err(Error::usage(format!("line {ln}: l must appear before rho")));
                };
                if tokens.len() != 4 + m || tokens[3] != "=" {
                    return Err(Error::usage(format!(
                        "line {ln}: expected 'rho <i> <j> = <{m} coefs>'"
                    )));
                }
                let i = parse_index(ln, tokens[1], l.dim(), "basis index")?;
                let j = parse_index(ln, tokens[2], m, "row index")?;
                let coefs = parse_rats(ln, &tokens[4..], m, "rho")?;
                if self.rho.insert((i, j), coefs).is_some() {
                    return Err(Error::usage(format!(
                        "line {ln}: duplicate rho row ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                Ok(())
            }
            word => unexpected(ln, word, "a pair"),
        }
    }

    fn finish(self) -> Result<Section> {
        let (Some((l_ref, l)), Some((dl_ref, dl))) = (self.l, self.dl) else {
            return Err(Error::usage(format!(
                "line {}: pair '{}' needs l and Dl",
                self.line, self.name
            )));
        };
        let n = l.dim();
        let m = self.adim.unwrap_or(0);
        let built = if m == 0 {
            PairLDA::without_module(l, dl)
        } else {
            let a_gram = rows_to_matrix(&self.agram, m, m);
            let da = rows_to_matrix(&self.da, m, m);
            let rho: Vec<Matrix> = (0..n)
                .map(|i| {
                    Matrix::from_fn(m, m, |j, k| {
                        self.rho.get(&(i, j)).map(|row| row[k].clone()).unwrap_or_else(Rat::zero)
                    })
                })
                .collect();
            PairLDA::new(l, dl, a_gram, da, rho)
        };
        let pair = built.map_err(|e| at_line(self.line, e))?;
        Ok(Section::Pair { name: self.name, l_ref, dl_ref, pair })
    }
}

struct CochainBuilder {
    line: usize,
    name: String,
    cochain: Cochain,
    seen: BTreeSet<Vec<usize>>,
}

impl CochainBuilder {
    fn start(ln: usize, tokens: &[&str]) -> Result<CochainBuilder> {
        let shape = "cochain <name> deg <p> target <R | a dim <m>>";
        if tokens.len() < 6 || tokens[2] != "deg" || tokens[4] != "target" {
            return Err(Error::usage(format!("line {ln}: expected '{shape}'")));
        }
        let degree = parse_usize(ln, tokens[3], "degree")?;
        if degree == 0 {
            return Err(Error::usage(format!("line {ln}: deg must be at least 1")));
        }
        let cochain = match tokens[5] {
            "R" => {
                expect_len(ln, tokens, 6, shape)?;
                Cochain::real_zero(degree)
            }
            "a" => {
                expect_len(ln, tokens, 8, shape)?;
                expect_word(ln, tokens[6], "dim")?;
                let m = parse_usize(ln, tokens[7], "target dimension")?;
                Cochain::a_valued_zero(degree, m)
            }
            other => {
                return Err(Error::usage(format!(
                    "line {ln}: target must be 'R' or 'a', got '{other}'"
                )))
            }
        };
        Ok(CochainBuilder { line: ln, name: tokens[1].to_string(), cochain, seen: BTreeSet::new() })
    }

    fn line_in(&mut self, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "at" => {
                let p = self.cochain.degree();
                let w =
                    if self.cochain.target() == Target::A { self.cochain.target_dim() } else { 1 };
                if tokens.len() != 2 + p + w || tokens[1 + p] != "=" {
                    return Err(Error::usage(format!(
                        "line {ln}: expected 'at <{p} indices> = <{w} coefs>'"
                    )));
                }
                let mut indices = Vec::with_capacity(p);
                for t in &tokens[1..1 + p] {
                    let i = parse_usize(ln, t, "index")?;
                    if i == 0 {
                        return Err(Error::usage(format!("line {ln}: indices are 1-based")));
                    }
                    indices.push(i - 1);
                }
                let mut key = indices.clone();
                key.sort_unstable();
                if key.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::usage(format!("line {ln}: repeated index in tuple")));
                }
                if !self.seen.insert(key) {
                    return Err(Error::usage(format!("line {ln}: duplicate tuple")));
                }
                let mut value = Vec::with_capacity(w);
                for t in &tokens[2 + p..] {
                    value.push(parse_rat(ln, t)?);
                }
                self.cochain.add_term(&indices, value);
                Ok(())
            }
            word => unexpected(ln, word, "a cochain"),
        }
    }

    fn finish(self) -> Result<Section> {
        Ok(Section::Cochain { name: self.name, cochain: self.cochain })
    }
}

struct WitnessBuilder {
    line: usize,
    name: String,
    tau: Option<String>,
    sigma: Option<String>,
    s: BTreeMap<usize, Vec<Rat>>,
    u: BTreeMap<usize, Vec<Rat>>,
}

impl WitnessBuilder {
    fn line_in(&mut self, doc: &MlaDocument, ln: usize, tokens: &[&str]) -> Result<()> {
        match tokens[0] {
            "tau" | "sigma" => {
                expect_len(ln, tokens, 3, "<tau|sigma> = <cochain>")?;
                expect_word(ln, tokens[1], "=")?;
                let slot = if tokens[0] == "tau" { &mut self.tau } else { &mut self.sigma };
                if slot.is_some() {
                    return Err(Error::usage(format!("line {ln}: duplicate {}", tokens[0])));
                }
                doc.cochain(tokens[2]).map_err(|e| at_line(ln, e))?;
                *slot = Some(tokens[2].to_string());
                Ok(())
            }
            "S" | "U" => {
                let i = row_index(ln, tokens, "<S|U> <i> = <coefs>")?;
                if i == 0 {
                    return Err(Error::usage(format!("line {ln}: row indices are 1-based")));
                }
                if tokens.len() < 4 {
                    return Err(Error::usage(format!("line {ln}: expected '<S|U> <i> = <coefs>'")));
                }
                let mut coefs = Vec::with_capacity(tokens.len() - 3);
                for t in &tokens[3..] {
                    coefs.push(parse_rat(ln, t)?);
                }
                let rows = if tokens[0] == "S" { &mut self.s } else { &mut self.u };
                if rows.insert(i - 1, coefs).is_some() {
                    return Err(Error::usage(format!(
                        "line {ln}: duplicate {} row {i}",
                        tokens[0]
                    )));
                }
                Ok(())
            }
            word => unexpected(ln, word, "a witness"),
        }
    }

    fn finish(self) -> Result<Section> {
        let s = dense_block(self.line, &self.name, "S", &self.s)?;
        let u = dense_block(self.line, &self.name, "U", &self.u)?;
        let witness = WitnessData { tau: self.tau, sigma: self.sigma, s, u };
        Ok(Section::Witness { name: self.name, witness })
    }
}

/// Assemble a witness matrix block: rows 1..=max must all be present with
/// one uniform width. An absent block is None.
fn dense_block(
    header: usize,
    name: &str,
    label: &str,
    rows: &BTreeMap<usize, Vec<Rat>>,
) -> Result<Option<Matrix>> {
    if rows.is_empty() {
        return Ok(None);
    }
    let max = *rows.keys().next_back().unwrap();
    let width = rows.values().next().unwrap().len();
    let mut out = Vec::with_capacity(max + 1);
    for i in 0..=max {
        let Some(row) = rows.get(&i) else {
            return Err(Error::usage(format!(
                "line {header}: witness '{name}' is missing {label} row {}",
                i + 1
            )));
        };
        if row.len() != width {
            return Err(Error::usage(format!(
                "line {header}: witness '{name}' has {label} rows of differing lengths"
            )));
        }
        out.push(row.clone());
    }
    Ok(Some(Matrix::from_rows(out)))
}

fn cocycle_line(doc: &MlaDocument, ln: usize, tokens: &[&str]) -> Result<Section> {
    expect_len(ln, tokens, 7, "cocycle <name> = <alpha> <gamma> <delta> <epsilon>")?;
    expect_word(ln, tokens[2], "=")?;
    let refs = [
        tokens[3].to_string(),
        tokens[4].to_string(),
        tokens[5].to_string(),
        tokens[6].to_string(),
    ];
    let mut parts = Vec::with_capacity(4);
    for r in &refs {
        parts.push(doc.cochain(r).map_err(|e| at_line(ln, e))?.clone());
    }
    let epsilon = parts.pop().unwrap();
    let delta = parts.pop().unwrap();
    let gamma = parts.pop().unwrap();
    let alpha = parts.pop().unwrap();
    let cocycle = QuadCocycle::new(alpha, gamma, delta, epsilon).map_err(|e| at_line(ln, e))?;
    Ok(Section::Cocycle { name: tokens[1].to_string(), refs, cocycle })
}

// ---- Line-level helpers ----

/// Re-wrap an error with the line it surfaced on.
fn at_line(ln: usize, e: Error) -> Error {
    let msg = match e {
        Error::Usage(m) | Error::Domain(m) => m,
    };
    Error::usage(format!("line {ln}: {msg}"))
}

fn unexpected(ln: usize, word: &str, section: &str) -> Result<()> {
    Err(Error::usage(format!("line {ln}: unexpected '{word}' in {section} section")))
}

fn expect_len(ln: usize, tokens: &[&str], len: usize, shape: &str) -> Result<()> {
    if tokens.len() != len {
        return Err(Error::usage(format!("line {ln}: expected '{shape}'")));
    }
    Ok(())
}

fn expect_word(ln: usize, got: &str, want: &str) -> Result<()> {
    if got != want {
        return Err(Error::usage(format!("line {ln}: expected '{want}', got '{got}'")));
    }
    Ok(())
}

fn parse_usize(ln: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::usage(format!("line {ln}: invalid {what} '{tok}'")))
}

/// 1-based index in 1..=max, returned 0-based.
fn parse_index(ln: usize, tok: &str, max: usize, what: &str) -> Result<usize> {
    let i = parse_usize(ln, tok, what)?;
    bounded(ln, i, max, what)
}

fn bounded(ln: usize, i: usize, max: usize, what: &str) -> Result<usize> {
    if i == 0 || i > max {
        return Err(Error::usage(format!("line {ln}: {what} {i} out of range 1..={max}")));
    }
    Ok(i - 1)
}

fn parse_rat(ln: usize, tok: &str) -> Result<Rat> {
    Rat::from_str(tok).map_err(|_| Error::usage(format!("line {ln}: invalid rational '{tok}'")))
}

fn parse_rats(ln: usize, tokens: &[&str], want: usize, what: &str) -> Result<Vec<Rat>> {
    if tokens.len() != want {
        return Err(Error::usage(format!("line {ln}: {what} must have exactly {want} entries")));
    }
    tokens.iter().map(|t| parse_rat(ln, t)).collect()
}

/// Shared shape of `<keyword> <i> = ...` lines: returns the raw 1-based
/// row index; bounds are the caller's business.
fn row_index(ln: usize, tokens: &[&str], shape: &str) -> Result<usize> {
    if tokens.len() < 3 || tokens[2] != "=" {
        return Err(Error::usage(format!("line {ln}: expected '{shape}'")));
    }
    parse_usize(ln, tokens[1], "row index")
}

fn rows_to_matrix(rows: &BTreeMap<usize, Vec<Rat>>, n: usize, width: usize) -> Matrix {
    Matrix::from_fn(n, width, |i, j| {
        rows.get(&i).map(|r| r[j].clone()).unwrap_or_else(Rat::zero)
    })
}

// ---- Serialization ----

/// Canonical text for a document: one block per section, blank lines
/// between blocks, only nonzero brackets, metric entries, cochain terms,
/// and rho rows written out. Reparsing the text reproduces the document.
pub fn serialize_mla(doc: &MlaDocument) -> String {
    let blocks: Vec<String> = doc.sections.iter().map(section_text).collect();
    blocks.join("\n\n") + "\n"
}

fn section_text(section: &Section) -> String {
    let mut lines = Vec::new();
    match section {
        Section::Algebra { name, algebra } => {
            let n = algebra.dim();
            lines.push(format!("algebra {name}"));
            lines.push(format!("dim {n}"));
            for i in 0..n {
                for j in i + 1..n {
                    let v = algebra.bracket_basis(i, j);
                    if v.iter().any(|c| !c.is_zero()) {
                        let terms: Vec<String> = v
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| format!("{c} {}", k + 1))
                            .collect();
                        lines.push(format!("bracket {} {} = {}", i + 1, j + 1, terms.join(" ")));
                    }
                }
            }
        }
        Section::Metric { name, on, gram } => {
            lines.push(format!("metric {name} on {on}"));
            for i in 0..gram.rows() {
                for j in i..gram.cols() {
                    if !gram.at(i, j).is_zero() {
                        lines.push(format!("entry {} {} = {}", i + 1, j + 1, gram.at(i, j)));
                    }
                }
            }
        }
        Section::Derivation { name, on, matrix } => {
            lines.push(format!("derivation {name} on {on}"));
            for i in 0..matrix.rows() {
                lines.push(format!("row {} = {}", i + 1, row_text(matrix, i)));
            }
        }
        Section::Pair { name, l_ref, dl_ref, pair } => {
            let m = pair.a_dim();
            lines.push(format!("pair {name}"));
            lines.push(format!("l = {l_ref}"));
            lines.push(format!("Dl = {dl_ref}"));
            lines.push(format!("adim {m}"));
            if m > 0 {
                for i in 0..m {
                    lines.push(format!("agram {} = {}", i + 1, row_text(&pair.a_gram, i)));
                }
                for i in 0..m {
                    lines.push(format!("Da {} = {}", i + 1, row_text(&pair.da, i)));
                }
                for (i, rho) in pair.rho.iter().enumerate() {
                    if !rho.is_zero() {
                        for j in 0..m {
                            lines.push(format!("rho {} {} = {}", i + 1, j + 1, row_text(rho, j)));
                        }
                    }
                }
            }
        }
        Section::Cochain { name, cochain } => {
            let header = match cochain.target() {
                Target::Real => format!("cochain {name} deg {} target R", cochain.degree()),
                Target::A => format!(
                    "cochain {name} deg {} target a dim {}",
                    cochain.degree(),
                    cochain.target_dim()
                ),
            };
            lines.push(header);
            for (key, value) in cochain.terms() {
                let idx: Vec<String> = key.iter().map(|i| (i + 1).to_string()).collect();
                let val: Vec<String> = value.iter().map(|c| c.to_string()).collect();
                lines.push(format!("at {} = {}", idx.join(" "), val.join(" ")));
            }
        }
        Section::Cocycle { name, refs, .. } => {
            lines.push(format!(
                "cocycle {name} = {} {} {} {}",
                refs[0], refs[1], refs[2], refs[3]
            ));
        }
        Section::Witness { name, witness } => {
            lines.push(format!("witness {name}"));
            if let Some(t) = &witness.tau {
                lines.push(format!("tau = {t}"));
            }
            if let Some(s) = &witness.sigma {
                lines.push(format!("sigma = {s}"));
            }
            if let Some(m) = &witness.s {
                for i in 0..m.rows() {
                    lines.push(format!("S {} = {}", i + 1, row_text(m, i)));
                }
            }
            if let Some(m) = &witness.u {
                for i in 0..m.rows() {
                    lines.push(format!("U {} = {}", i + 1, row_text(m, i)));
                }
            }
        }
    }
    lines.join("\n")
}

fn row_text(m: &Matrix, i: usize) -> String {
    let parts: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expect_err(text: &str) -> String {
        match parse_mla(text) {
            Err(Error::Usage(m)) => m,
            other => panic!("expected a usage error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_abelian_algebra_parses() {
        let doc = parse_mla("algebra a\ndim 2\n").unwrap();
        let g = doc.algebra("a").unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.bracket_basis(0, 1).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# heisenberg\nalgebra h3\ndim 3\n\nbracket 1 2 = 1 3 # [e1,e2] = e3\n";
        let doc = parse_mla(text).unwrap();
        let g = doc.algebra("h3").unwrap();
        assert_eq!(g.bracket_basis(0, 1)[2], mslaw_core::matrix::rat(1));
    }

    #[test]
    fn equal_bracket_indices_report_the_library_message() {
        let msg = expect_err("algebra a\ndim 2\nbracket 1 1 = 1 2\n");
        assert_eq!(msg, "line 3: bracket of equal indices must be zero");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(expect_err("algebra a\ndim x\n").starts_with("line 2:"));
        assert!(expect_err("algebra a\ndim 2\nbracket 1 3 = 1 2\n").contains("out of range"));
        assert!(expect_err("dim 2\n").contains("outside a section"));
        assert!(expect_err("algebra a\ndim 2\nentry 1 1 = 2\n").contains("in an algebra section"));
    }

    #[test]
    fn duplicate_definitions_are_rejected() {
        assert!(expect_err("algebra a\ndim 2\n\nalgebra a\ndim 3\n").contains("duplicate algebra"));
        let text = "algebra a\ndim 2\nbracket 1 2 = 1 1\nbracket 2 1 = 1 2\n";
        assert!(expect_err(text).contains("duplicate bracket"));
        let text = "algebra a\ndim 2\n\nmetric g on a\nentry 1 2 = 1\nentry 2 1 = 3\n";
        assert!(expect_err(text).contains("duplicate entry"));
    }

    #[test]
    fn unresolved_references_are_rejected() {
        assert!(expect_err("metric g on nope\n").contains("no algebra named 'nope'"));
        let text = "algebra a\ndim 2\n\npair p\nl = a\nDl = missing\n";
        assert!(expect_err(text).contains("no derivation named 'missing'"));
    }

    #[test]
    fn metric_entries_complete_symmetrically() {
        let text = "algebra a\ndim 2\n\nmetric g on a\nentry 1 2 = 5/3\n";
        let doc = parse_mla(text).unwrap();
        let (_, gram) = doc.metric("g").unwrap();
        assert_eq!(gram.at(0, 1), gram.at(1, 0));
        assert_eq!(*gram.at(0, 1), mslaw_core::matrix::ratio(5, 3));
    }

    #[test]
    fn derivation_rows_default_to_zero() {
        let text = "algebra a\ndim 3\n\nderivation d on a\nrow 2 = 0 1 0\n";
        let doc = parse_mla(text).unwrap();
        let (_, d) = doc.derivation("d").unwrap();
        assert!(d.at(0, 0).is_zero());
        assert_eq!(*d.at(1, 1), mslaw_core::matrix::rat(1));
    }

    #[test]
    fn cochain_lines_canonicalize_with_sign() {
        let text = "cochain c deg 2 target R\nat 2 1 = 5\n";
        let doc = parse_mla(text).unwrap();
        let c = doc.cochain("c").unwrap();
        assert_eq!(c.get(&[0, 1]), vec![mslaw_core::matrix::rat(-5)]);
    }

    #[test]
    fn cochain_tuple_errors() {
        assert!(expect_err("cochain c deg 2 target R\nat 1 1 = 5\n").contains("repeated index"));
        let text = "cochain c deg 2 target R\nat 1 2 = 5\nat 2 1 = 3\n";
        assert!(expect_err(text).contains("duplicate tuple"));
        assert!(expect_err("cochain c deg 2 target a\n").contains("expected"));
    }

    #[test]
    fn pair_with_module_parses_and_mirrors_the_library_defaults() {
        let text = "algebra l3\ndim 3\n\nderivation D on l3\nrow 1 = 1 0 0\nrow 2 = 0 1 0\nrow 3 = 0 0 -2\n\npair p\nl = l3\nDl = D\nadim 2\nagram 1 = 1 0\nagram 2 = 0 1\nDa 1 = 0 -1\nDa 2 = 1 0\n";
        let doc = parse_mla(text).unwrap();
        let pair = doc.pair("p").unwrap();
        assert_eq!(pair.a_dim(), 2);
        assert!(pair.rho.iter().all(|r| r.is_zero()));

        let text = "algebra l3\ndim 3\n\nderivation D on l3\nrow 1 = 1 0 0\nrow 2 = 0 1 0\nrow 3 = 0 0 -2\n\npair q\nl = l3\nDl = D\n";
        let doc = parse_mla(text).unwrap();
        assert_eq!(doc.pair("q").unwrap().a_dim(), 0);
    }

    #[test]
    fn cocycle_lines_resolve_and_validate() {
        let text = "cochain al deg 2 target a dim 1\ncochain ga deg 3 target R\ncochain de deg 1 target a dim 1\ncochain ep deg 2 target R\n\ncocycle c = al ga de ep\n";
        let doc = parse_mla(text).unwrap();
        assert!(doc.cocycle("c").unwrap().alpha.is_zero());
        let text = "cochain al deg 1 target a dim 1\ncochain ga deg 3 target R\ncochain de deg 1 target a dim 1\ncochain ep deg 2 target R\ncocycle c = al ga de ep\n";
        assert!(expect_err(text).contains("alpha must be a degree-2"));
    }

    #[test]
    fn witness_blocks_build_matrices() {
        let text = "witness w\nS 1 = 1/2 0\nS 2 = 0 1/2\n";
        let doc = parse_mla(text).unwrap();
        let w = doc.witness("w").unwrap();
        let s = w.s.as_ref().unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 2));
        assert!(w.u.is_none());
        assert!(expect_err("witness w\nS 2 = 1 0\n").contains("missing S row 1"));
        assert!(expect_err("witness w\nS 1 = 1 0\nS 2 = 1\n").contains("differing lengths"));
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let text = "algebra h3\ndim 3\nbracket 1 2 = 1 3\n\nmetric g on h3\nentry 1 3 = 1\nentry 2 2 = 1\n\nderivation D on h3\nrow 1 = 1 0 0\nrow 2 = 0 1 0\nrow 3 = 0 0 2\n\npair p\nl = h3\nDl = D\nadim 2\nagram 1 = 1 0\nagram 2 = 0 1\nDa 1 = 0 -1\nDa 2 = 1 0\nrho 1 1 = 0 -1\nrho 1 2 = 1 0\n\ncochain al deg 2 target a dim 2\nat 1 3 = 1 0\nat 2 3 = 0 1\n\ncochain ga deg 3 target R\nat 1 2 3 = 1\n\ncochain de deg 1 target a dim 2\n\ncochain ep deg 2 target R\n\ncocycle c = al ga de ep\n\nwitness w\ntau = de\nsigma = ep\nS 1 = 1/2 0 0\nS 2 = 0 1/2 0\nS 3 = 0 0 1/2\nU 1 = 1 0\nU 2 = 0 1\n";
        let doc = parse_mla(text).unwrap();
        let out = serialize_mla(&doc);
        let reparsed = parse_mla(&out).unwrap();
        assert_eq!(doc, reparsed);
        let again = serialize_mla(&reparsed);
        assert_eq!(out, again);
    }

    #[test]
    fn missing_sections_surface_as_usage_errors() {
        let doc = parse_mla("algebra a\ndim 1\n").unwrap();
        assert!(doc.pair("p").unwrap_err().is_usage());
        assert!(doc.cocycle("c").unwrap_err().to_string().contains("no cocycle named 'c'"));
    }
}
