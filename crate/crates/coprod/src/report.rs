//! The analysis pipeline behind the command line: runs the requested sections
//! on a gallery entry and assembles a deterministic JSON report.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map as JsonMap, Value};

use crate::algebra::{check_idempotent_algebra, check_nondegenerate, Algebra, Verdict};
use crate::coproduct::{
    check_coassoc_extension, check_coassoc_mixed, check_coassoc_single_t1, check_coassoc_t1t2, check_coassoc_t3t4, check_counit,
    check_fullness, check_homomorphism, check_involution, check_nondegenerate_coproduct, check_oracle_consistency,
    check_weak_nondegeneracy, regularity_report, solve_counit, CounitSolution, CounitVariant, Definition, Map, MapStatus, Mixed,
};
use crate::dual::{
    check_dual_algebra_laws, check_products_agree, check_strong_coassociativity, dual_annihilators, dual_multiplier_check,
    matrix_b_sample, Convention, DualElement, Duals, PairingActions, Space,
};
use crate::error::Error;
use crate::gallery::{Fact, GalleryEntry};

/// Version of the JSON layout described in `docs/report-schema.md`.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    Regularity,
    Coassociativity,
    Counit,
    Fullness,
    Nondegeneracy,
    Dual,
    Pairing,
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Regularity,
        Section::Coassociativity,
        Section::Counit,
        Section::Fullness,
        Section::Nondegeneracy,
        Section::Dual,
        Section::Pairing,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Section::Regularity => "regularity",
            Section::Coassociativity => "coassociativity",
            Section::Counit => "counit",
            Section::Fullness => "fullness",
            Section::Nondegeneracy => "nondegeneracy",
            Section::Dual => "dual",
            Section::Pairing => "pairing",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Section {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Section::ALL
            .into_iter()
            .find(|x| x.key() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown section {s:?}; expected one of {}", keys(&Section::ALL))))
    }
}

fn keys(s: &[Section]) -> String {
    s.iter().map(|x| x.key()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub depth: usize,
    pub seed: u64,
    pub sections: BTreeSet<Section>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { depth: DEFAULT_DEPTH, seed: DEFAULT_SEED, sections: Section::ALL.into_iter().collect() }
    }
}

/// One stated fact compared against the computed verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub key: String,
    pub expected: bool,
    /// `None` when the computation could not decide.
    pub computed: Option<bool>,
}

impl Expectation {
    pub fn met(&self) -> bool {
        self.computed == Some(self.expected)
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub json: Value,
    pub expectations: Vec<Expectation>,
}

impl AnalysisReport {
    pub fn all_met(&self) -> bool {
        self.expectations.iter().all(Expectation::met)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("report serialises") + "\n"
    }

    /// One line per leaf verdict, in key order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut body = self.json.clone();
        if let Value::Object(m) = &mut body {
            m.remove("expectations");
        }
        text_lines(&body, "", &mut out);
        for e in &self.expectations {
            let computed = e.computed.map(|c| c.to_string()).unwrap_or_else(|| "undecided".into());
            let mark = if e.met() { "met" } else { "NOT MET" };
            out.push_str(&format!("expectation {}: expected {}, computed {computed}, {mark}\n", e.key, e.expected));
        }
        if let Some(Value::Array(ds)) = self.json.pointer("/expectations/discrepancies") {
            for d in ds {
                out.push_str(&format!(
                    "discrepancy {}: displayed {}, computed {}\n",
                    scalar_text(&d["what"]),
                    scalar_text(&d["displayed"]),
                    scalar_text(&d["computed"])
                ));
            }
        }
        out
    }
}

fn text_lines(v: &Value, path: &str, out: &mut String) {
    let Value::Object(m) = v else {
        out.push_str(&format!("{path}: {}\n", scalar_text(v)));
        return;
    };
    if let Some(Value::String(status)) = m.get("status") {
        out.push_str(&format!("{path}: {status}"));
        if let Some(Value::Number(d)) = m.get("depth") {
            out.push_str(&format!(" (depth {d})"));
        }
        if let Some(Value::String(w)) = m.get("witness") {
            out.push_str(&format!(" | {w}"));
        }
        out.push('\n');
    }
    for (k, x) in m {
        if matches!(k.as_str(), "status" | "depth" | "witness") {
            continue;
        }
        let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
        match x {
            Value::Array(items) if items.iter().all(|v| !v.is_object()) => {
                let parts: Vec<String> = items.iter().map(scalar_text).collect();
                out.push_str(&format!("{p}: {}\n", parts.join(", ")));
            }
            Value::Array(items) => {
                for (i, it) in items.iter().enumerate() {
                    text_lines(it, &format!("{p}[{i}]"), out);
                }
            }
            _ => text_lines(x, &p, out),
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `{status, depth, witness}` for a verdict.
pub fn verdict_json(v: &Verdict, depth: usize) -> Value {
    let mut m = JsonMap::new();
    m.insert("status".into(), json!(v.status()));
    m.insert("depth".into(), json!(depth));
    m.insert("witness".into(), v.detail().map(Value::from).unwrap_or(Value::Null));
    Value::Object(m)
}

fn skipped(why: &str, depth: usize) -> Value {
    verdict_json(&Verdict::PreconditionNotMet(why.into()), depth)
}

fn not_requested(section: Section, depth: usize) -> Value {
    skipped(&format!("section {section} not requested"), depth)
}

fn status_json(alg: &dyn Algebra, s: &MapStatus, depth: usize) -> Value {
    let (status, witness) = match s {
        MapStatus::Regular => ("regular", None),
        MapStatus::NonRegular { x, y, family, verified } => {
            ("non-regular", Some(format!("at ({}, {}): {family}; {verified} shells confirmed", alg.label(x), alg.label(y))))
        }
        MapStatus::UnknownToDepth(w) => ("unknown-to-depth", Some(w.clone())),
    };
    json!({ "status": status, "depth": depth, "witness": witness })
}

fn with(mut v: Value, key: &str, x: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert(key.into(), x);
    }
    v
}

/// Check errors that only mean a hypothesis failed become skipped verdicts.
fn soft(r: Result<Verdict, Error>) -> Result<Verdict, Error> {
    match r {
        Err(Error::NotHomomorphism(w)) => Ok(Verdict::PreconditionNotMet(format!("Δ is not a homomorphism: {w}"))),
        Err(e @ (Error::PreconditionNotMet(_) | Error::SpanSolveFailed(_) | Error::NotFiniteDimensional)) => {
            Ok(Verdict::PreconditionNotMet(e.to_string()))
        }
        other => other,
    }
}

/// Tri-state reading of a verdict for expectation comparisons.
fn truth(v: &Verdict) -> Option<bool> {
    match v {
        Verdict::Holds | Verdict::VerifiedToDepth(_) => Some(true),
        Verdict::FailsWithWitness(_) => Some(false),
        Verdict::PreconditionNotMet(_) => None,
    }
}

struct Computed {
    facts: Vec<(Fact, Option<bool>)>,
    maps: Vec<(Map, bool)>,
}

impl Computed {
    fn put(&mut self, f: Fact, v: Option<bool>) {
        self.facts.push((f, v));
    }
}

/// Runs the requested sections in dependency order.
pub fn run(entry: &GalleryEntry, config: &AnalysisConfig) -> Result<AnalysisReport, Error> {
    if config.depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let depth = config.depth;
    let cp = &entry.coproduct;
    let want = |s: Section| config.sections.contains(&s);
    let mut out = JsonMap::new();
    let mut comp = Computed { facts: Vec::new(), maps: Vec::new() };

    out.insert("version".into(), json!(SCHEMA_VERSION));
    let params: JsonMap<String, Value> = entry.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    out.insert(
        "source".into(),
        json!({ "family": entry.name, "params": params, "algebra": cp.algebra().name(), "coproduct": cp.name() }),
    );
    out.insert("depth".into(), json!(depth));
    out.insert("seed".into(), json!(config.seed.to_string()));
    out.insert("sections".into(), json!(config.sections.iter().map(|s| s.key()).collect::<Vec<_>>()));

    let regularity = regularity_report(cp, depth)?;
    if want(Section::Regularity) {
        let mut maps = JsonMap::new();
        for m in Map::ALL {
            maps.insert(m.to_string(), status_json(&*cp.algebra(), regularity.status(m), depth));
            comp.maps.push((m, regularity.regular(m)));
        }
        maps.insert("consistency".into(), verdict_json(&soft(check_oracle_consistency(cp, depth))?, depth));
        out.insert("maps".into(), Value::Object(maps));
    } else {
        let maps: JsonMap<String, Value> =
            Map::ALL.iter().map(|m| (m.to_string(), not_requested(Section::Regularity, depth))).collect();
        out.insert("maps".into(), Value::Object(maps));
    }

    let homomorphism = if want(Section::Regularity) || want(Section::Coassociativity) {
        let v = soft(check_homomorphism(cp, depth))?;
        comp.put(Fact::Homomorphism, truth(&v));
        verdict_json(&v, depth)
    } else {
        not_requested(Section::Coassociativity, depth)
    };
    out.insert("homomorphism".into(), homomorphism);

    let mut coassoc = JsonMap::new();
    if want(Section::Coassociativity) {
        let defs: [(Definition, Verdict); 5] = [
            (Definition::T1T2, soft(check_coassoc_t1t2(cp, depth))?),
            (Definition::T3T4, soft(check_coassoc_t3t4(cp, depth))?),
            (Definition::T1T4, soft(check_coassoc_mixed(cp, Mixed::T1T4, depth))?),
            (Definition::T2T3, soft(check_coassoc_mixed(cp, Mixed::T2T3, depth))?),
            (Definition::SingleT1, soft(check_coassoc_single_t1(cp, depth))?),
        ];
        for (d, v) in defs {
            let mut j = verdict_json(&v, depth);
            if d == Definition::T2T3 {
                j = with(j, "author_disputed", json!(true));
            }
            coassoc.insert(d.key().into(), j);
            comp.put(Fact::Coassociative(d), truth(&v));
        }
        let ext_depth = depth.min(3);
        let ext = match &entry.idempotent {
            Some(e) => {
                let v = soft(check_coassoc_extension(cp, e, ext_depth))?;
                comp.put(Fact::CoassociativeExtension, truth(&v));
                verdict_json(&v, ext_depth)
            }
            None => skipped("no idempotent E with Δ(A)(A⊗A) = E(A⊗A) is known", ext_depth),
        };
        coassoc.insert("extension".into(), ext);
        let inv = soft(check_involution(cp, depth))?;
        comp.put(Fact::InvolutionCompatible, truth(&inv));
        out.insert("involution".into(), verdict_json(&inv, depth));
    } else {
        for d in Definition::ALL {
            coassoc.insert(d.key().into(), not_requested(Section::Coassociativity, depth));
        }
        coassoc.insert("extension".into(), not_requested(Section::Coassociativity, depth));
        out.insert("involution".into(), not_requested(Section::Coassociativity, depth));
    }
    out.insert("coassociativity".into(), Value::Object(coassoc));

    if want(Section::Counit) {
        let mut exists = false;
        let mut c = match &entry.counit {
            Some((eps, variant)) => {
                let r = check_counit(cp, eps, *variant, depth)?;
                exists |= r.laws.holds();
                comp.put(Fact::CounitHomomorphism, truth(&r.homomorphism));
                let j = verdict_json(&r.laws, depth);
                let j = with(j, "variant", json!(r.variant.key()));
                with(j, "homomorphism", verdict_json(&r.homomorphism, depth))
            }
            None => skipped("no counit is given for this family", depth),
        };
        let mut solved = JsonMap::new();
        for v in [CounitVariant::T1T2, CounitVariant::T3T4] {
            let laws = |l: &[Map]| l.iter().map(|m| m.to_string()).collect::<Vec<_>>();
            let j = match solve_counit(cp, v, depth)? {
                CounitSolution::Solution { nullity, laws: l, eps } => {
                    exists = true;
                    json!({ "status": "solution", "depth": depth, "witness": Value::Null, "nullity": nullity,
                            "laws": laws(&l), "support": eps.finite_support().map(|s| s.iter().map(|i| cp.algebra().label(i)).collect::<Vec<_>>()) })
                }
                CounitSolution::NoSolution { certificate, laws: l } => {
                    json!({ "status": "no-solution", "depth": depth, "witness": certificate, "laws": laws(&l) })
                }
            };
            solved.insert(v.key().into(), j);
        }
        comp.put(Fact::CounitExists, Some(exists));
        c = with(c, "solved", Value::Object(solved));
        out.insert("counit".into(), c);
    } else {
        out.insert("counit".into(), not_requested(Section::Counit, depth));
    }

    if want(Section::Fullness) {
        let r = check_fullness(cp, depth)?;
        comp.put(Fact::Full, Some(r.full()));
        let both = r.left.verdict.clone().and(r.right.verdict.clone());
        let leg = |l: &crate::coproduct::LegVerdict| with(verdict_json(&l.verdict, depth), "method", json!(l.method));
        let j = with(verdict_json(&both, depth), "left", leg(&r.left));
        out.insert("fullness".into(), with(j, "right", leg(&r.right)));
    } else {
        out.insert("fullness".into(), not_requested(Section::Fullness, depth));
    }

    if want(Section::Nondegeneracy) {
        let v = soft(check_nondegenerate_coproduct(cp, depth))?;
        comp.put(Fact::NonDegenerate, truth(&v));
        let weak = match &entry.idempotent {
            Some(e) => {
                let w = soft(check_weak_nondegeneracy(cp, e, depth))?;
                comp.put(Fact::WeaklyNonDegenerate, truth(&w));
                verdict_json(&w, depth)
            }
            None => skipped("no idempotent E is known", depth),
        };
        let alg = cp.algebra();
        let j = with(verdict_json(&v, depth), "weak", weak);
        let j = with(j, "algebra_product", verdict_json(&soft(check_nondegenerate(&*alg, depth))?, depth));
        out.insert("nondegeneracy".into(), with(j, "algebra_idempotent", verdict_json(&soft(check_idempotent_algebra(&*alg, depth))?, depth)));
    } else {
        out.insert("nondegeneracy".into(), not_requested(Section::Nondegeneracy, depth));
    }

    let needs_duals = want(Section::Dual) || want(Section::Pairing);
    let duals = if needs_duals { Some(Duals::new(cp, depth)?) } else { None };
    let sample = duals.as_ref().map(|d| {
        let mut s = d.sample(config.seed);
        s.extend(d.reduced_probes());
        if let Some((eps, _)) = &entry.counit {
            s.push(DualElement::new(eps.clone()));
        }
        s
    });

    match (&duals, &sample) {
        (Some(d), Some(sample)) if want(Section::Dual) => {
            out.insert("dual".into(), dual_section(d, entry, sample, config, &mut comp));
        }
        _ => {
            out.insert("dual".into(), not_requested(Section::Dual, depth));
        }
    }

    match (&duals, &sample) {
        (Some(d), Some(sample)) if want(Section::Pairing) => {
            let pa = PairingActions::new(d);
            let (l, r) = pa.check_unital(sample, Space::B);
            let b0 = pa.check_unital(sample, Space::B0);
            out.insert(
                "pairing".into(),
                json!({
                    "module_laws": verdict_json(&pa.check_module_laws(sample), depth),
                    "faithful": verdict_json(&pa.check_faithful(sample), depth),
                    "unital": {
                        "A_by_B": verdict_json(&l, depth),
                        "B_on_A": verdict_json(&r, depth),
                        "A_by_B0": verdict_json(&b0.0, depth),
                        "B0_on_A": verdict_json(&b0.1, depth),
                    },
                }),
            );
        }
        _ => {
            out.insert("pairing".into(), not_requested(Section::Pairing, depth));
        }
    }

    let expectations = compare(entry, &comp);
    out.insert(
        "expectations".into(),
        json!({
            "met": expectations.iter().all(Expectation::met),
            "items": expectations.iter().map(|e| json!({
                "key": e.key, "expected": e.expected, "computed": e.computed, "met": e.met(),
            })).collect::<Vec<_>>(),
            "discrepancies": entry.discrepancies.iter().map(|d| json!({
                "what": d.what, "displayed": d.displayed, "computed": d.computed,
            })).collect::<Vec<_>>(),
        }),
    );
    Ok(AnalysisReport { json: Value::Object(out), expectations })
}

fn dual_section(d: &Duals, entry: &GalleryEntry, sample: &[DualElement], config: &AnalysisConfig, comp: &mut Computed) -> Value {
    let depth = config.depth;
    let eps = entry.counit.as_ref().map(|c| &c.0);
    let mut spaces = JsonMap::new();
    for s in Space::ALL {
        let laws = check_dual_algebra_laws(d, s, eps, sample);
        spaces.insert(
            s.key().into(),
            json!({
                "members": laws.members,
                "sampled": laws.sampled,
                "convention": laws.convention.map(|c| match c { Convention::Left => "left", Convention::Right => "right" }),
                "associativity": verdict_json(&laws.associativity, depth),
                "closure": verdict_json(&laws.closure, depth),
                "module": verdict_json(&laws.module, depth),
                "nondegeneracy": verdict_json(&laws.nondegeneracy, depth),
                "unit": verdict_json(&laws.unit, depth),
            }),
        );
    }
    let mut degenerate = None;
    let mut nondeg = JsonMap::new();
    for (key, conv) in [("left", Convention::Left), ("right", Convention::Right)] {
        let a = dual_annihilators(d, conv);
        let v = a.nondegenerate();
        if let Some(t) = truth(&v) {
            degenerate = Some(degenerate.unwrap_or(false) || !t);
        }
        nondeg.insert(key.into(), verdict_json(&v, depth));
    }
    comp.put(Fact::DualProductDegenerate, degenerate);
    let multiplier = if entry.name == "matrix" {
        let m = dual_multiplier_check(d, &matrix_b_sample(config.seed, 50), eps);
        let j = with(verdict_json(&m.verdict(), depth), "b_multiplies_b0", verdict_json(&m.b_multiplies_b0, depth));
        let j = with(j, "bl_multiplies_b0r", verdict_json(&m.bl_multiplies_b0r, depth));
        let j = with(j, "extraction", verdict_json(&m.extraction, depth));
        with(j, "outside", verdict_json(&m.outside, depth))
    } else {
        skipped("the multiplier comparison is specific to the matrix family", depth)
    };
    json!({
        "seed": config.seed.to_string(),
        "sample_size": sample.len(),
        "spaces": spaces,
        "products_agree": verdict_json(&check_products_agree(d, sample), depth),
        "strong_coassociativity": {
            "T1T2": verdict_json(&check_strong_coassociativity(d, Definition::T1T2, sample), depth),
            "T3T4": verdict_json(&check_strong_coassociativity(d, Definition::T3T4, sample), depth),
        },
        "nondegeneracy": nondeg,
        "multiplier": multiplier,
    })
}

fn compare(entry: &GalleryEntry, comp: &Computed) -> Vec<Expectation> {
    let mut out = Vec::new();
    for (m, regular) in &comp.maps {
        if let Some(e) = entry.expected.maps.get(m) {
            out.push(Expectation { key: format!("maps.{m}"), expected: *e, computed: Some(*regular) });
        }
    }
    for (f, e) in &entry.expected.facts {
        if let Some((_, c)) = comp.facts.iter().find(|(g, _)| g == f) {
            out.push(Expectation { key: f.key(), expected: *e, computed: *c });
        }
    }
    out
}
