//! Command-line front end: argument parsing, input files and exit codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use crate::algebra::{check_associativity, check_nondegenerate, AlgebraFile, AlgebraRef, FiniteAlgebra, Functional, Verdict};
use crate::coproduct::{Coproduct, CounitVariant, Map, TableRule};
use crate::error::Error;
use crate::gallery::{build, Expected, GalleryEntry, Params, QRule, FAMILIES};
use crate::index::{Element, Index};
use crate::report::{run, AnalysisConfig, AnalysisReport, Section, DEFAULT_DEPTH, DEFAULT_SEED};
use crate::scalar::{Gauss, Scalar};

pub const EXIT_MET: u8 = 0;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Analyse a coproduct on a non-unital algebra: regularity of the canonical
/// maps, coassociativity, counits, fullness, non-degeneracy and the dual algebras.
#[derive(Debug, Parser)]
#[command(name = "coprod", version)]
pub struct Args {
    /// Gallery family, e.g. `matrix` or `sandwich:ex3_24`.
    #[arg(long, conflicts_with = "spec", required_unless_present_any = ["spec", "list"])]
    pub family: Option<String>,
    /// Coproduct spec file (JSON, or a `gallery: <name> { k=v, ... }` line).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated subset of regularity,coassociativity,counit,fullness,nondegeneracy,dual,pairing.
    #[arg(long, value_delimiter = ',')]
    pub sections: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Value substituted for the formal parameter `t`.
    #[arg(long)]
    pub t: Option<String>,
    /// Print the gallery family names and exit.
    #[arg(long)]
    pub list: bool,
    /// Family parameters as `key=value`: `t`, `depth`, `q` (`p` or `qn`), `seed`.
    pub params: Vec<String>,
}

/// Family name plus `key=value` parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Source {
    pub family: String,
    pub params: BTreeMap<String, String>,
}

fn parse_t(s: &str) -> Result<Gauss, Error> {
    Scalar::parse(s)?.as_gauss().ok_or_else(|| Error::Parse(format!("t must be a constant, got {s:?}")))
}

fn parse_pairs(items: &[String]) -> Result<BTreeMap<String, String>, Error> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (k, v) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {s:?}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// `gallery: <name> { k=v, ... }`
pub fn parse_gallery_line(text: &str) -> Result<Source, Error> {
    let rest = text.trim().strip_prefix("gallery:").ok_or_else(|| Error::Parse("expected `gallery: <name>`".into()))?.trim();
    let (name, params) = match rest.find('{') {
        Some(i) => {
            let body = rest[i + 1..].trim_end();
            let body = body.strip_suffix('}').ok_or_else(|| Error::Parse("unclosed `{` in gallery line".into()))?;
            let items: Vec<String> = body.split(',').map(str::to_string).collect();
            (rest[..i].trim(), parse_pairs(&items)?)
        }
        None => (rest, BTreeMap::new()),
    };
    Ok(Source { family: name.to_string(), params })
}

/// Builds a gallery entry, applying `t`, `depth` and `q` parameters.
pub fn build_source(src: &Source) -> Result<GalleryEntry, Error> {
    let mut p = Params::default();
    if let Some(t) = src.params.get("t") {
        p.t = Some(parse_t(t)?);
    }
    if let Some(d) = src.params.get("depth") {
        p.depth = d.parse().map_err(|_| Error::Parse(format!("depth must be a positive integer, got {d:?}")))?;
    }
    if let Some(q) = src.params.get("q") {
        p.q = match q.as_str() {
            "p" | "diagonal" => QRule::Diagonal,
            "qn" => QRule::Qn,
            other => return Err(Error::Parse(format!("unknown q rule {other:?}; expected p or qn"))),
        };
    }
    build(&src.family, &p)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounitSpec {
    variant: String,
    /// Values on the basis, in order.
    values: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    #[serde(default)]
    name: Option<String>,
    algebra: AlgebraFile,
    /// `[a, i, j, c]`: `Δ(e_a)` contains `c·e_i⊗e_j`.
    delta: Vec<(usize, usize, usize, String)>,
    /// Optional canonical-map tables keyed `T1`..`T4`, entries `[x, y, i, j, c]`.
    #[serde(default)]
    tables: BTreeMap<String, Vec<(usize, usize, usize, usize, String)>>,
    #[serde(default)]
    counit: Option<CounitSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GallerySpec {
    gallery: String,
    #[serde(default)]
    params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpecFile {
    Gallery(GallerySpec),
    Table(TableSpec),
}

fn scalar(s: &str, t: Option<&Gauss>) -> Result<Scalar, Error> {
    let v = Scalar::parse(s)?;
    match t {
        Some(x) => v.substitute(x),
        None => Ok(v),
    }
}

fn gate(name: &str, v: Verdict) -> Result<(), Error> {
    match v {
        Verdict::FailsWithWitness(w) => Err(Error::GateFailed { gate: name.into(), witness: w.text }),
        _ => Ok(()),
    }
}

fn table_entry(spec: TableSpec, t: Option<&Gauss>, origin: &str) -> Result<GalleryEntry, Error> {
    let n = spec.algebra.dimension;
    let consts = spec
        .algebra
        .structure_constants
        .iter()
        .map(|(i, j, k, s)| Ok((*i, *j, *k, scalar(s, t)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let name = spec.name.clone().or(spec.algebra.name.clone()).unwrap_or_else(|| format!("A(dim {n})"));
    let mut fa = FiniteAlgebra::new(name.clone(), n, &consts)?;
    if let Some(labels) = &spec.algebra.labels {
        fa = fa.with_labels(labels.clone())?;
    }
    gate("associativity", check_associativity(&fa, n)?)?;
    gate("non-degeneracy", check_nondegenerate(&fa, n)?)?;
    let alg: AlgebraRef = Arc::new(fa);
    let b = |k: usize| -> Result<Index, Error> {
        if k < n {
            Ok(FiniteAlgebra::basis(k, n))
        } else {
            Err(Error::Parse(format!("basis index {k} out of range for dimension {n}")))
        }
    };
    let mut delta: BTreeMap<Index, Element> = BTreeMap::new();
    for (a, i, j, c) in &spec.delta {
        delta.entry(b(*a)?).or_default().add_term(Index::pair(&b(*i)?, &b(*j)?), scalar(c, t)?);
    }
    let mut tables = BTreeMap::new();
    for (key, rows) in &spec.tables {
        let m = Map::ALL
            .into_iter()
            .find(|m| m.to_string() == *key)
            .ok_or_else(|| Error::Parse(format!("unknown table {key:?}; expected T1..T4")))?;
        for (x, y, i, j, c) in rows {
            tables
                .entry((m, b(*x)?, b(*y)?))
                .or_insert_with(Element::zero)
                .add_term(Index::pair(&b(*i)?, &b(*j)?), scalar(c, t)?);
        }
    }
    let counit = match spec.counit {
        Some(c) => {
            let variant = match c.variant.as_str() {
                "T1T2" => CounitVariant::T1T2,
                "T3T4" => CounitVariant::T3T4,
                other => return Err(Error::Parse(format!("unknown counit variant {other:?}; expected T1T2 or T3T4"))),
            };
            if c.values.len() != n {
                return Err(Error::Parse(format!("counit has {} values for dimension {n}", c.values.len())));
            }
            let mut values = Element::zero();
            for (k, s) in c.values.iter().enumerate() {
                values.add_term(b(k)?, scalar(s, t)?);
            }
            Some((Functional::table("ε", values, |_| 0), variant))
        }
        None => None,
    };
    let rule = TableRule { name: format!("Δ from {origin}"), algebra: alg, delta, tables };
    Ok(GalleryEntry {
        name,
        params: vec![("spec".into(), origin.into())],
        coproduct: Coproduct::new(rule),
        expected: Expected::default(),
        counit,
        idempotent: None,
        discrepancies: vec![],
    })
}

/// Reads a spec file into a gallery entry, merging `extra` parameters.
pub fn load_spec(path: &Path, t: Option<&str>, extra: &BTreeMap<String, String>) -> Result<GalleryEntry, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_spec_text(&text, &path.display().to_string(), t, extra)
}

pub fn load_spec_text(text: &str, origin: &str, t: Option<&str>, extra: &BTreeMap<String, String>) -> Result<GalleryEntry, Error> {
    let mut src = if text.trim_start().starts_with("gallery:") {
        parse_gallery_line(text)?
    } else {
        let spec: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: line {} column {}: {e}", e.line(), e.column())))?;
        match spec {
            SpecFile::Table(ts) => {
                let tv = t.map(parse_t).transpose()?;
                return table_entry(ts, tv.as_ref(), origin);
            }
            SpecFile::Gallery(g) => Source {
                family: g.gallery,
                params: g
                    .params
                    .into_iter()
                    .map(|(k, v)| (k, v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
                    .collect(),
            },
        }
    };
    src.params.extend(extra.clone());
    if let Some(t) = t {
        src.params.insert("t".into(), t.into());
    }
    build_source(&src)
}

/// The entry and configuration described by the arguments.
pub fn resolve(args: &Args) -> Result<(GalleryEntry, AnalysisConfig), Error> {
    let mut params = parse_pairs(&args.params)?;
    let depth_param = params.remove("depth");
    let seed_param = params.remove("seed");
    let mut depth = args.depth.unwrap_or(DEFAULT_DEPTH);
    if args.depth.is_none() {
        if let Some(d) = &depth_param {
            depth = d.parse().map_err(|_| Error::Parse(format!("depth must be a positive integer, got {d:?}")))?;
        }
    }
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let seed = match (args.seed, &seed_param) {
        (Some(s), _) => s,
        (None, Some(s)) => s.parse().map_err(|_| Error::Parse(format!("seed must be an unsigned integer, got {s:?}")))?,
        (None, None) => DEFAULT_SEED,
    };
    let sections = match &args.sections {
        Some(list) => list.iter().map(|s| s.parse::<Section>()).collect::<Result<_, _>>()?,
        None => Section::ALL.into_iter().collect(),
    };
    let entry = match (&args.family, &args.spec) {
        (Some(f), None) => {
            let mut src = Source { family: f.clone(), params };
            if let Some(t) = &args.t {
                src.params.insert("t".into(), t.clone());
            }
            build_source(&src)?
        }
        (None, Some(path)) => load_spec(path, args.t.as_deref(), &params)?,
        _ => return Err(Error::Parse("give exactly one of --family and --spec".into())),
    };
    Ok((entry, AnalysisConfig { depth, seed, sections }))
}

/// Runs the analysis and renders it in the requested format.
pub fn execute(args: &Args) -> Result<(AnalysisReport, String), Error> {
    let (entry, config) = resolve(args)?;
    let report = run(&entry, &config)?;
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Ok((report, text))
}

pub fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for f in FAMILIES {
            println!("{f}");
        }
        return ExitCode::from(EXIT_MET);
    }
    match execute(&args) {
        Ok((report, text)) => {
            print!("{text}");
            if report.all_met() {
                ExitCode::from(EXIT_MET)
            } else {
                for e in report.expectations.iter().filter(|e| !e.met()) {
                    eprintln!("expectation not met: {} expected {} computed {:?}", e.key, e.expected, e.computed);
                }
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_line() {
        let s = parse_gallery_line("gallery: sandwich:ex3_24 { t=2, depth=4 }").unwrap();
        assert_eq!(s.family, "sandwich:ex3_24");
        assert_eq!(s.params["t"], "2");
        assert_eq!(s.params["depth"], "4");
        assert_eq!(parse_gallery_line("gallery: matrix").unwrap().family, "matrix");
        assert!(parse_gallery_line("gallery: matrix { t=2").is_err());
    }

    #[test]
    fn table_spec_gates() {
        let bad = r#"{"algebra": {"dimension": 2, "structure_constants": [[0,0,1,"1"]]}, "delta": []}"#;
        let e = load_spec_text(bad, "inline", None, &BTreeMap::new()).err().unwrap();
        assert!(matches!(e, Error::GateFailed { .. }), "{e}");
        let ok = r#"{"algebra": {"dimension": 1, "structure_constants": [[0,0,0,"1"]]}, "delta": [[0,0,0,"1"]],
                     "counit": {"variant": "T1T2", "values": ["1"]}}"#;
        let g = load_spec_text(ok, "inline", None, &BTreeMap::new()).unwrap();
        assert!(g.counit.is_some());
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = load_spec_text("{\n  \"gallery\": 3\n}", "inline", None, &BTreeMap::new()).err().unwrap();
        assert!(e.to_string().contains("line"), "{e}");
    }
}
