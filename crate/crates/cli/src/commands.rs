//! Subcommand dispatch, report printing, and exit codes.
//!
//! Every command prints deterministic plain text, one check per line in
//! `PASS`/`FAIL` report format where a check is involved. Exit codes: 0
//! when no line starts with `FAIL`, 1 when a mathematical check failed,
//! 2 for usage or parse errors. Commands never panic on malformed input;
//! they surface `usage error` (exit 2) or a `FAIL` line (exit 1).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use mslaw_core::catalog::{self, FamilyId, LChoice};
use mslaw_core::cochain::{
    act, check_zq_plus, pullback, Cochain, MorphismOfPairs, QuadCocycle, TransformPair,
};
use mslaw_core::jordan::jordan_chevalley;
use mslaw_core::lie::{
    canonical_isotropic_ideal, check_ad_invariant, check_jacobi, is_derivation, MetricLieAlgebra,
};
use mslaw_core::matrix::{signature, Matrix};
use mslaw_core::pair::PairLDA;
use mslaw_core::quadext::{
    build_standard_model, check_balanced, verify_equivalence, verify_isomorphism,
    EquivalenceWitness, IsomorphismWitness,
};
use mslaw_core::sampling;
use mslaw_core::{Error, Report, Result};

use crate::mla::{parse_mla, serialize_mla, MlaDocument, Section, WitnessData};

// ---- CLI surface ----

#[derive(Parser)]
#[command(name = "mslaw", about = "Exact workbench for metric symplectic Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Jacobi identity for every algebra in FILE.
    CheckLie { file: PathBuf },
    /// Check non-degeneracy and ad-invariance of every metric in FILE.
    CheckMetric { file: PathBuf },
    /// Check that a named matrix is a derivation of its algebra.
    CheckDerivation {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Print the Jordan-Chevalley decomposition of a named derivation.
    Jordan {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Print a basis of the canonical isotropic ideal of a metric algebra.
    Ideal {
        file: PathBuf,
        /// Metric to use; defaults to the only metric in the file.
        #[arg(long)]
        metric: Option<String>,
    },
    /// Print the signature of a named metric.
    Signature {
        file: PathBuf,
        #[arg(long)]
        metric: String,
    },
    /// Build the standard model of a cocycle over a pair and write it to OUT.
    StandardModel {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cocycle: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check membership of a cocycle in Z2_Q+, optionally the balanced conditions.
    CheckCocycle {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        balanced: bool,
    },
    /// Apply a witness transform (tau, sigma) to a cocycle and print the result.
    Act {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        transform: String,
    },
    /// Pull a cocycle over --pair2 back along a witness morphism to --pair.
    Pullback {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        pair2: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        morphism: String,
    },
    /// Verify that a witness transform carries --cocycle2 to --cocycle.
    VerifyEquivalence {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        cocycle2: String,
        #[arg(long)]
        witness: String,
    },
    /// Verify that a witness (morphism, transform) identifies two balanced cocycles.
    VerifyIsomorphism {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        pair2: String,
        #[arg(long)]
        cocycle2: String,
        #[arg(long)]
        witness: String,
    },
    /// Print a catalog entry as an .mla document.
    Emit {
        #[arg(long)]
        family: String,
        /// Parameter overrides, e.g. "a=-3,b=1,c=2".
        #[arg(long)]
        params: Option<String>,
    },
    /// Verify catalog entries; a seed adds a random action-invariance check.
    VerifyCatalog {
        /// Family name or prefix glob like "dim6-*"; all families by default.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample quadratic cocycles over a low-dimensional base and count balanced ones.
    Emptiness {
        #[arg(long)]
        l: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Parse arguments, execute, and write the report; returns the exit code.
pub fn run<W: io::Write>(args: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok(text) => {
            let _ = write!(out, "{text}");
            if text.lines().any(|l| l.starts_with("FAIL")) {
                1
            } else {
                0
            }
        }
        Err(Error::Usage(m)) => {
            let _ = writeln!(out, "error: {m}");
            2
        }
        Err(Error::Domain(m)) => {
            let _ = writeln!(out, "FAIL {m}");
            1
        }
    }
}

fn execute(cmd: Cmd) -> Result<String> {
    match cmd {
        Cmd::CheckLie { file } => cmd_check_lie(&file),
        Cmd::CheckMetric { file } => cmd_check_metric(&file),
        Cmd::CheckDerivation { file, name } => cmd_check_derivation(&file, &name),
        Cmd::Jordan { file, name } => cmd_jordan(&file, &name),
        Cmd::Ideal { file, metric } => cmd_ideal(&file, metric.as_deref()),
        Cmd::Signature { file, metric } => cmd_signature(&file, &metric),
        Cmd::StandardModel { file, pair, cocycle, out } => {
            cmd_standard_model(&file, &pair, &cocycle, &out)
        }
        Cmd::CheckCocycle { file, pair, cocycle, balanced } => {
            cmd_check_cocycle(&file, &pair, &cocycle, balanced)
        }
        Cmd::Act { file, pair, cocycle, transform } => cmd_act(&file, &pair, &cocycle, &transform),
        Cmd::Pullback { file, pair, pair2, cocycle, morphism } => {
            cmd_pullback(&file, &pair, &pair2, &cocycle, &morphism)
        }
        Cmd::VerifyEquivalence { file, pair, cocycle, cocycle2, witness } => {
            cmd_verify_equivalence(&file, &pair, &cocycle, &cocycle2, &witness)
        }
        Cmd::VerifyIsomorphism { file, pair, cocycle, pair2, cocycle2, witness } => {
            cmd_verify_isomorphism(&file, &pair, &cocycle, &pair2, &cocycle2, &witness)
        }
        Cmd::Emit { family, params } => cmd_emit(&family, params.as_deref()),
        Cmd::VerifyCatalog { family, seed } => cmd_verify_catalog(family.as_deref(), seed),
        Cmd::Emptiness { l, samples, seed } => cmd_emptiness(&l, samples, seed),
    }
}

// ---- Command bodies ----

fn cmd_check_lie(file: &Path) -> Result<String> {
    let doc = load(file)?;
    let algebras = doc.algebras();
    if algebras.is_empty() {
        return Err(Error::usage("check-lie: no algebra sections in the file"));
    }
    let mut out = String::new();
    for (name, g) in algebras {
        let mut rep = Report::for_entry(name);
        rep.absorb(check_jacobi(g));
        let _ = write!(out, "{rep}");
    }
    Ok(out)
}

fn cmd_check_metric(file: &Path) -> Result<String> {
    let doc = load(file)?;
    let metrics = doc.metrics();
    if metrics.is_empty() {
        return Err(Error::usage("check-metric: no metric sections in the file"));
    }
    let mut out = String::new();
    for (name, on, gram) in metrics {
        let g = doc.algebra(on)?;
        let mut rep = Report::for_entry(name);
        match MetricLieAlgebra::new(g.clone(), gram.clone()) {
            Ok(m) => rep.absorb(check_ad_invariant(&m)),
            Err(e) => rep.fail("metric", inner(e)),
        }
        let _ = write!(out, "{rep}");
    }
    Ok(out)
}

fn cmd_check_derivation(file: &Path, name: &str) -> Result<String> {
    let doc = load(file)?;
    let (on, d) = doc.derivation(name)?;
    let g = doc.algebra(on)?;
    let mut rep = Report::for_entry(name);
    rep.record("derivation", is_derivation(g, d)?, "Leibniz rule fails on a basis pair");
    Ok(rep.to_string())
}

fn cmd_jordan(file: &Path, name: &str) -> Result<String> {
    let doc = load(file)?;
    let (_, d) = doc.derivation(name)?;
    let jc = jordan_chevalley(d);
    let mut out = String::new();
    out.push_str("S:\n");
    push_matrix(&mut out, &jc.s);
    out.push_str("N:\n");
    push_matrix(&mut out, &jc.n);
    Ok(out)
}

fn cmd_ideal(file: &Path, metric: Option<&str>) -> Result<String> {
    let doc = load(file)?;
    let (name, on, gram) = pick_metric(&doc, metric, "ideal")?;
    let g = doc.algebra(&on)?;
    let m = MetricLieAlgebra::new(g.clone(), gram)?;
    let ideal = canonical_isotropic_ideal(&m)?;
    let mut out = String::new();
    let _ = writeln!(out, "ideal {name} dim {}", ideal.dim());
    for v in ideal.basis_vectors() {
        let _ = writeln!(out, "basis {}", rat_row(&v));
    }
    Ok(out)
}

fn cmd_signature(file: &Path, metric: &str) -> Result<String> {
    let doc = load(file)?;
    let (_, gram) = doc.metric(metric)?;
    let (neg, pos, zero) = signature(gram)?;
    if zero > 0 {
        return Ok(format!(
            "FAIL signature {metric} gram matrix is degenerate (radical dim {zero})\n"
        ));
    }
    Ok(format!("signature {metric} ({neg},{pos})\n"))
}

fn cmd_standard_model(file: &Path, pair: &str, cocycle: &str, out_path: &Path) -> Result<String> {
    let doc = load(file)?;
    let p = doc.pair(pair)?;
    let c = doc.cocycle(cocycle)?;
    check_cocycle_indices(cocycle, c, p.n())?;
    let sm = build_standard_model(p, c)?;
    let model_name = format!("{pair}.model");
    let model_doc = MlaDocument {
        sections: vec![
            Section::Algebra { name: model_name.clone(), algebra: sm.model.algebra.clone() },
            Section::Metric {
                name: format!("{pair}.gram"),
                on: model_name.clone(),
                gram: sm.model.gram.clone(),
            },
            Section::Derivation {
                name: format!("{pair}.D"),
                on: model_name,
                matrix: sm.derivation.clone(),
            },
        ],
    };
    let (n, m) = (p.n(), p.a_dim());
    let text = format!(
        "# standard model of {cocycle} over {pair}\n# basis order: Z1..Z{n} A1..A{m} L1..L{n}\n\n{}",
        serialize_mla(&model_doc)
    );
    std::fs::write(out_path, text)
        .map_err(|e| Error::usage(format!("{}: {e}", out_path.display())))?;
    Ok(format!(
        "standard model written to {} (dim {}, basis Z1..Z{n} A1..A{m} L1..L{n})\n",
        out_path.display(),
        sm.model.dim()
    ))
}

fn cmd_check_cocycle(file: &Path, pair: &str, cocycle: &str, balanced: bool) -> Result<String> {
    let doc = load(file)?;
    let p = doc.pair(pair)?;
    let c = doc.cocycle(cocycle)?;
    check_cocycle_indices(cocycle, c, p.n())?;
    let mut out = String::new();
    let zq = check_zq_plus(p, c)?;
    let _ = write!(out, "{zq}");
    if balanced {
        let bal = check_balanced(p, c)?;
        let _ = write!(out, "{bal}");
    }
    Ok(out)
}

fn cmd_act(file: &Path, pair: &str, cocycle: &str, transform: &str) -> Result<String> {
    let doc = load(file)?;
    let p = doc.pair(pair)?;
    let c = doc.cocycle(cocycle)?;
    check_cocycle_indices(cocycle, c, p.n())?;
    let w = doc.witness(transform)?;
    let t = transform_from_witness(&doc, w, p)?;
    let result = act(p, c, &t)?;
    Ok(cocycle_doc_text(&format!("{cocycle}.acted"), &result))
}

fn cmd_pullback(
    file: &Path,
    pair: &str,
    pair2: &str,
    cocycle: &str,
    morphism: &str,
) -> Result<String> {
    let doc = load(file)?;
    let p1 = doc.pair(pair)?;
    let p2 = doc.pair(pair2)?;
    let c = doc.cocycle(cocycle)?;
    check_cocycle_indices(cocycle, c, p2.n())?;
    let w = doc.witness(morphism)?;
    let m = morphism_from_witness(morphism, w, p1, p2)?;
    let result = pullback(p1, p2, &m, c)?;
    Ok(cocycle_doc_text(&format!("{cocycle}.pulled"), &result))
}

fn cmd_verify_equivalence(
    file: &Path,
    pair: &str,
    cocycle: &str,
    cocycle2: &str,
    witness: &str,
) -> Result<String> {
    let doc = load(file)?;
    let p = doc.pair(pair)?;
    let c1 = doc.cocycle(cocycle)?;
    let c2 = doc.cocycle(cocycle2)?;
    check_cocycle_indices(cocycle, c1, p.n())?;
    check_cocycle_indices(cocycle2, c2, p.n())?;
    let t = transform_from_witness(&doc, doc.witness(witness)?, p)?;
    let ok = verify_equivalence(p, c1, c2, &EquivalenceWitness { transform: t })?;
    let mut rep = Report::new();
    rep.record(
        "equivalent",
        ok,
        format!("the witness does not carry {cocycle2} to {cocycle}"),
    );
    Ok(rep.to_string())
}

fn cmd_verify_isomorphism(
    file: &Path,
    pair: &str,
    cocycle: &str,
    pair2: &str,
    cocycle2: &str,
    witness: &str,
) -> Result<String> {
    let doc = load(file)?;
    let p1 = doc.pair(pair)?;
    let c1 = doc.cocycle(cocycle)?;
    let p2 = doc.pair(pair2)?;
    let c2 = doc.cocycle(cocycle2)?;
    check_cocycle_indices(cocycle, c1, p1.n())?;
    check_cocycle_indices(cocycle2, c2, p2.n())?;
    let w = doc.witness(witness)?;
    let morphism = morphism_from_witness(witness, w, p1, p2)?;
    let transform = transform_from_witness(&doc, w, p1)?;
    let ok = verify_isomorphism(p1, c1, p2, c2, &IsomorphismWitness { morphism, transform })?;
    let mut rep = Report::new();
    rep.record(
        "isomorphic",
        ok,
        format!("the witness does not carry {cocycle2} to {cocycle}"),
    );
    Ok(rep.to_string())
}

fn cmd_emit(family: &str, params: Option<&str>) -> Result<String> {
    let fam = FamilyId::from_str(family)?;
    let overrides = parse_params(params)?;
    let entry = catalog::instantiate(fam, &overrides)?;
    entry_doc_text(&entry)
}

fn cmd_verify_catalog(family: Option<&str>, seed: Option<u64>) -> Result<String> {
    let pattern = family.unwrap_or("*");
    let families = FamilyId::matching(pattern);
    if families.is_empty() {
        return Err(Error::usage(format!("no family matches '{pattern}'")));
    }
    let mut rng = seed.map(sampling::rng);
    let mut out = String::new();
    for fam in families {
        let entry = catalog::instantiate(fam, &BTreeMap::new())?;
        let mut rep = catalog::verify_entry(&entry);
        if let Some(r) = rng.as_mut() {
            let t = sampling::cq_transform(r, &entry.pair, 2);
            match action_invariance(&entry, &t) {
                Ok(ok) => rep.record("action-invariance", ok, "acted cocycle left Z^2_Q+"),
                Err(e) => rep.fail("action-invariance", inner(e)),
            }
        }
        let _ = write!(out, "{rep}");
    }
    Ok(out)
}

/// A C1_Q transform must keep the cocycle inside Z^2_Q+ and the acted
/// cocycle must verify equivalent to the original via the transform.
fn action_invariance(entry: &catalog::CatalogEntry, t: &TransformPair) -> Result<bool> {
    let acted = act(&entry.pair, &entry.cocycle, t)?;
    let stays = check_zq_plus(&entry.pair, &acted)?.ok();
    let witness = EquivalenceWitness { transform: t.clone() };
    let equivalent = verify_equivalence(&entry.pair, &acted, &entry.cocycle, &witness)?;
    Ok(stays && equivalent)
}

fn cmd_emptiness(l: &str, samples: usize, seed: u64) -> Result<String> {
    let choice = LChoice::from_str(l)?;
    let rep = catalog::emptiness_suite(choice, samples, seed)?;
    Ok(rep.to_string())
}

// ---- Helpers ----

fn load(path: &Path) -> Result<MlaDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("{}: {e}", path.display())))?;
    parse_mla(&text)
}

/// The message inside either error variant.
fn inner(e: Error) -> String {
    match e {
        Error::Usage(m) | Error::Domain(m) => m,
    }
}

/// Resolve --metric, defaulting to the only metric section in the file.
fn pick_metric(
    doc: &MlaDocument,
    metric: Option<&str>,
    cmd: &str,
) -> Result<(String, String, Matrix)> {
    match metric {
        Some(name) => {
            let (on, gram) = doc.metric(name)?;
            Ok((name.to_string(), on.to_string(), gram.clone()))
        }
        None => {
            let metrics = doc.metrics();
            if metrics.len() != 1 {
                return Err(Error::usage(format!(
                    "{cmd}: the file has {} metric sections; pass --metric",
                    metrics.len()
                )));
            }
            let (name, on, gram) = metrics[0];
            Ok((name.to_string(), on.to_string(), gram.clone()))
        }
    }
}

/// Guard against cochain terms indexing past the base dimension of the
/// pair they are used with; `eval` has no bounds of its own.
fn check_indices(kind: &str, name: &str, c: &Cochain, n: usize) -> Result<()> {
    for (key, _) in c.terms() {
        if let Some(&j) = key.iter().max() {
            if j >= n {
                return Err(Error::usage(format!(
                    "{kind} '{name}' uses index {} but the base has dimension {n}",
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn check_cocycle_indices(name: &str, c: &QuadCocycle, n: usize) -> Result<()> {
    check_indices("cocycle", name, &c.alpha, n)?;
    check_indices("cocycle", name, &c.gamma, n)?;
    check_indices("cocycle", name, &c.delta, n)?;
    check_indices("cocycle", name, &c.epsilon, n)
}

/// Build the transform of a witness: absent tau or sigma parts are zero.
fn transform_from_witness(
    doc: &MlaDocument,
    w: &WitnessData,
    p: &PairLDA,
) -> Result<TransformPair> {
    let tau = match &w.tau {
        Some(name) => {
            let c = doc.cochain(name)?.clone();
            check_indices("cochain", name, &c, p.n())?;
            c
        }
        None => Cochain::a_valued_zero(1, p.a_dim()),
    };
    let sigma = match &w.sigma {
        Some(name) => {
            let c = doc.cochain(name)?.clone();
            check_indices("cochain", name, &c, p.n())?;
            c
        }
        None => Cochain::real_zero(2),
    };
    TransformPair::new(tau, sigma)
}

/// Build the morphism of a witness: S is required, an absent U is the
/// zero map (the only choice when either module is trivial).
fn morphism_from_witness(
    name: &str,
    w: &WitnessData,
    p1: &PairLDA,
    p2: &PairLDA,
) -> Result<MorphismOfPairs> {
    let Some(s) = w.s.clone() else {
        return Err(Error::usage(format!("witness '{name}' has no S block")));
    };
    let u = w.u.clone().unwrap_or_else(|| Matrix::zeros(p1.a_dim(), p2.a_dim()));
    Ok(MorphismOfPairs { s, u })
}

/// Serialize a cocycle as a document of four cochains plus the cocycle line.
fn cocycle_doc_text(base: &str, c: &QuadCocycle) -> String {
    let refs = [
        format!("{base}.alpha"),
        format!("{base}.gamma"),
        format!("{base}.delta"),
        format!("{base}.epsilon"),
    ];
    let doc = MlaDocument {
        sections: vec![
            Section::Cochain { name: refs[0].clone(), cochain: c.alpha.clone() },
            Section::Cochain { name: refs[1].clone(), cochain: c.gamma.clone() },
            Section::Cochain { name: refs[2].clone(), cochain: c.delta.clone() },
            Section::Cochain { name: refs[3].clone(), cochain: c.epsilon.clone() },
            Section::Cocycle { name: base.to_string(), refs, cocycle: c.clone() },
        ],
    };
    serialize_mla(&doc)
}

/// The full document for a catalog entry: base data, pair, cocycle, and
/// the assembled standard model.
fn entry_doc_text(entry: &catalog::CatalogEntry) -> Result<String> {
    let base = entry.family.name();
    let l_name = format!("{base}.l");
    let dl_name = format!("{base}.Dl");
    let model_name = format!("{base}.model");
    let refs = [
        format!("{base}.alpha"),
        format!("{base}.gamma"),
        format!("{base}.delta"),
        format!("{base}.epsilon"),
    ];
    let sm = build_standard_model(&entry.pair, &entry.cocycle)?;
    let doc = MlaDocument {
        sections: vec![
            Section::Algebra { name: l_name.clone(), algebra: entry.pair.l.clone() },
            Section::Derivation {
                name: dl_name.clone(),
                on: l_name.clone(),
                matrix: entry.pair.dl.clone(),
            },
            Section::Pair {
                name: format!("{base}.pair"),
                l_ref: l_name,
                dl_ref: dl_name,
                pair: entry.pair.clone(),
            },
            Section::Cochain { name: refs[0].clone(), cochain: entry.cocycle.alpha.clone() },
            Section::Cochain { name: refs[1].clone(), cochain: entry.cocycle.gamma.clone() },
            Section::Cochain { name: refs[2].clone(), cochain: entry.cocycle.delta.clone() },
            Section::Cochain { name: refs[3].clone(), cochain: entry.cocycle.epsilon.clone() },
            Section::Cocycle {
                name: format!("{base}.c"),
                refs,
                cocycle: entry.cocycle.clone(),
            },
            Section::Algebra { name: model_name.clone(), algebra: sm.model.algebra.clone() },
            Section::Metric {
                name: format!("{base}.gram"),
                on: model_name.clone(),
                gram: sm.model.gram.clone(),
            },
            Section::Derivation {
                name: format!("{base}.D"),
                on: model_name,
                matrix: sm.derivation.clone(),
            },
        ],
    };
    let (n, m) = (entry.pair.n(), entry.pair.a_dim());
    Ok(format!(
        "# catalog entry {}\n# basis order of {base}.model: Z1..Z{n} A1..A{m} L1..L{n}\n\n{}",
        entry.name(),
        serialize_mla(&doc)
    ))
}

fn parse_params(params: Option<&str>) -> Result<BTreeMap<String, mslaw_core::matrix::Rat>> {
    let mut out = BTreeMap::new();
    let Some(text) = params else {
        return Ok(out);
    };
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let Some((k, v)) = part.split_once('=') else {
            return Err(Error::usage(format!("emit: bad parameter '{part}' (expected key=value)")));
        };
        let (k, v) = (k.trim(), v.trim());
        let value = mslaw_core::matrix::Rat::from_str(v)
            .map_err(|_| Error::usage(format!("emit: invalid rational '{v}' for parameter '{k}'")))?;
        out.insert(k.to_string(), value);
    }
    Ok(out)
}

fn push_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let parts: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
        let _ = writeln!(out, "  {}", parts.join(" "));
    }
}

fn rat_row(v: &[mslaw_core::matrix::Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    parts.join(" ")
}
