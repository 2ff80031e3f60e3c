//! Algebras given by structure oracles on a basis, verdicts, functionals, and
//! the basic gates: associativity, non-degeneracy and idempotency.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::index::{Element, Index};
use crate::linalg::{nullspace, var, SpanBasis};
use crate::scalar::Scalar;
use crate::sets::IndexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    Countable,
}

/// A basis together with a row- and column-finite product oracle.
pub trait Algebra: Send + Sync {
    fn name(&self) -> String;
    fn contains(&self, i: &Index) -> bool;
    fn product(&self, i: &Index, j: &Index) -> Element;
    /// The first `depth` basis labels of the canonical enumeration.
    fn enumerate(&self, depth: usize) -> Vec<Index>;
    fn dimension(&self) -> Dimension;
    fn size(&self, i: &Index) -> usize;
    fn label(&self, i: &Index) -> String;

    fn involution(&self, _i: &Index) -> Option<Element> {
        None
    }

    /// Finitely many labels that, together with `seeds`, suffice to witness
    /// local units and products among the seeds.
    fn neighbourhood(&self, seeds: &[Index]) -> Vec<Index> {
        seeds.to_vec()
    }

    /// All labels `x` with `e_c·e_x ≠ 0` (or `e_x·e_c ≠ 0` when `left` is
    /// false), when there are finitely many and the algebra knows them.
    fn partners(&self, _c: &Index, _left: bool) -> Option<Vec<Index>> {
        None
    }

    /// A basis label `u` with `e_i` in the support of `u·e_i`.
    fn left_unit_for(&self, i: &Index) -> Option<Index> {
        let pool = self.neighbourhood(std::slice::from_ref(i));
        pool.into_iter().find(|u| !self.product(u, i).coeff(i).is_zero())
    }

    /// A basis label `u` with `e_i` in the support of `e_i·u`.
    fn right_unit_for(&self, i: &Index) -> Option<Index> {
        let pool = self.neighbourhood(std::slice::from_ref(i));
        pool.into_iter().find(|u| !self.product(i, u).coeff(i).is_zero())
    }
}

pub type AlgebraRef = Arc<dyn Algebra>;

impl fmt::Debug for dyn Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.name())
    }
}

/// Renders an element with the algebra's labels.
pub fn show(alg: &dyn Algebra, e: &Element) -> String {
    e.render(&|i| alg.label(i))
}

/// Bilinear product without scheme checks.
pub fn mul(alg: &dyn Algebra, a: &Element, b: &Element) -> Element {
    let mut out = Element::zero();
    for (i, x) in a.terms() {
        for (j, y) in b.terms() {
            let p = alg.product(i, j);
            if !p.is_zero() {
                out.add_scaled(&p, &(x * y));
            }
        }
    }
    out
}

fn check_scheme(alg: &dyn Algebra, e: &Element) -> Result<(), Error> {
    match e.support().find(|i| !alg.contains(i)) {
        Some(i) => Err(Error::SchemeMismatch { index: i.to_string(), algebra: alg.name() }),
        None => Ok(()),
    }
}

/// `a·b` extended bilinearly from the structure oracle.
pub fn multiply(a: &Element, b: &Element, alg: &dyn Algebra) -> Result<Element, Error> {
    check_scheme(alg, a)?;
    check_scheme(alg, b)?;
    Ok(mul(alg, a, b))
}

/// The basis swept by a check: the whole basis in finite dimension, the first
/// `depth` labels otherwise.
pub fn sweep_basis(alg: &dyn Algebra, depth: usize) -> Vec<Index> {
    match alg.dimension() {
        Dimension::Finite(n) => alg.enumerate(n),
        Dimension::Countable => alg.enumerate(depth),
    }
}

pub fn is_finite(alg: &dyn Algebra) -> bool {
    matches!(alg.dimension(), Dimension::Finite(_))
}

/// Sweep labels plus their neighbourhood, deduplicated in first-seen order.
pub fn pool(alg: &dyn Algebra, seeds: &[Index]) -> Vec<Index> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in seeds.iter().cloned().chain(alg.neighbourhood(seeds)) {
        if seen.insert(i.clone()) {
            out.push(i);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub text: String,
    #[serde(skip)]
    pub element: Option<Element>,
}

impl Witness {
    pub fn text(t: impl Into<String>) -> Self {
        Witness { text: t.into(), element: None }
    }

    pub fn element(t: impl Into<String>, e: Element) -> Self {
        Witness { text: t.into(), element: Some(e) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Exact: the whole (finite) basis was swept.
    Holds,
    /// Bounded evidence on a truncation of a countable basis.
    VerifiedToDepth(usize),
    FailsWithWitness(Witness),
    PreconditionNotMet(String),
}

impl Verdict {
    pub fn pass(exact: bool, depth: usize) -> Verdict {
        if exact {
            Verdict::Holds
        } else {
            Verdict::VerifiedToDepth(depth)
        }
    }

    pub fn fail(text: impl Into<String>) -> Verdict {
        Verdict::FailsWithWitness(Witness::text(text))
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::VerifiedToDepth(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::FailsWithWitness(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::FailsWithWitness(w) => Some(w),
            _ => None,
        }
    }

    pub fn status(&self) -> String {
        match self {
            Verdict::Holds => "holds".into(),
            Verdict::VerifiedToDepth(_) => "verified-to-depth".into(),
            Verdict::FailsWithWitness(_) => "fails".into(),
            Verdict::PreconditionNotMet(_) => "skipped: precondition".into(),
        }
    }

    pub fn detail(&self) -> Option<String> {
        match self {
            Verdict::FailsWithWitness(w) => Some(w.text.clone()),
            Verdict::PreconditionNotMet(r) => Some(r.clone()),
            _ => None,
        }
    }

    /// Conjunction keeping the first failure.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Holds, o) => o,
            (v @ (Verdict::FailsWithWitness(_) | Verdict::PreconditionNotMet(_)), _) => v,
            (Verdict::VerifiedToDepth(d), Verdict::Holds) => Verdict::VerifiedToDepth(d),
            (Verdict::VerifiedToDepth(d), Verdict::VerifiedToDepth(e)) => Verdict::VerifiedToDepth(d.min(e)),
            (_, o) => o,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::VerifiedToDepth(d) => write!(f, "verified to depth {d}"),
            Verdict::FailsWithWitness(w) => write!(f, "fails: {}", w.text),
            Verdict::PreconditionNotMet(r) => write!(f, "skipped: precondition ({r})"),
        }
    }
}

fn require_depth(depth: usize) -> Result<(), Error> {
    if depth == 0 {
        Err(Error::InvalidDepth)
    } else {
        Ok(())
    }
}

/// `(e_i e_j) e_k = e_i (e_j e_k)` on all swept triples.
pub fn check_associativity(alg: &dyn Algebra, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let basis = sweep_basis(alg, depth);
    for i in &basis {
        for j in &basis {
            let ij = alg.product(i, j);
            for k in &basis {
                let left = mul(alg, &ij, &Element::basis(k.clone()));
                let right = mul(alg, &Element::basis(i.clone()), &alg.product(j, k));
                if left != right {
                    let (l, r) = (show(alg, &left), show(alg, &right));
                    return Ok(Verdict::fail(format!(
                        "({}·{})·{} = {l} but {}·({}·{}) = {r}",
                        alg.label(i), alg.label(j), alg.label(k), alg.label(i), alg.label(j), alg.label(k)
                    )));
                }
            }
        }
    }
    Ok(Verdict::pass(is_finite(alg), depth))
}

fn annihilator(alg: &dyn Algebra, unknowns: &[Index], partners: &[Index], left: bool) -> Option<Element> {
    let mut rows: BTreeMap<Index, Element> = BTreeMap::new();
    for (k, u) in unknowns.iter().enumerate() {
        for b in partners {
            let p = if left { alg.product(u, b) } else { alg.product(b, u) };
            for (out, c) in p.terms() {
                rows.entry(Index::pair(b, out)).or_default().add_term(var(k), c.clone());
            }
        }
    }
    let rows: Vec<Element> = rows.into_values().collect();
    let ns = nullspace(&rows, unknowns.len());
    ns.first().map(|x| {
        Element::from_terms(x.terms().map(|(v, c)| match v {
            Index::Int(k) => (unknowns[*k as usize].clone(), c.clone()),
            _ => unreachable!(),
        }))
    })
}

/// Exact in finite dimension: solves `a·b = 0 ∀b` and `b·a = 0 ∀b` by rank.
/// Countably: unknowns range over the truncation, partners over its neighbourhood.
pub fn check_nondegenerate(alg: &dyn Algebra, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let basis = sweep_basis(alg, depth);
    let partners = pool(alg, &basis);
    if let Some(a) = annihilator(alg, &basis, &partners, true) {
        let s = show(alg, &a);
        return Ok(Verdict::FailsWithWitness(Witness::element(format!("{s}·b = 0 for every basis b"), a)));
    }
    if let Some(a) = annihilator(alg, &basis, &partners, false) {
        let s = show(alg, &a);
        return Ok(Verdict::FailsWithWitness(Witness::element(format!("b·{s} = 0 for every basis b"), a)));
    }
    Ok(Verdict::pass(is_finite(alg), depth))
}

/// Every swept basis element lies in the span of products of pool elements.
pub fn check_idempotent_algebra(alg: &dyn Algebra, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let basis = sweep_basis(alg, depth);
    let gens = pool(alg, &basis);
    let mut span = SpanBasis::new();
    for i in &gens {
        for j in &gens {
            let p = alg.product(i, j);
            if !p.is_zero() {
                span.insert(&p);
            }
        }
    }
    for i in &basis {
        let e = Element::basis(i.clone());
        if !span.contains(&e) {
            return Ok(Verdict::FailsWithWitness(Witness::element(
                format!("{} is not a sum of products", alg.label(i)),
                e,
            )));
        }
    }
    Ok(Verdict::pass(is_finite(alg), depth))
}

/// Finite-dimensional algebra given by structure constants on `Finite(k, n)` labels.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pub name: String,
    pub n: usize,
    table: BTreeMap<(u32, u32), Element>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dimension: usize,
    /// Entries `[i, j, k, scalar]`: `e_i·e_j` contains `scalar·e_k`; labels are 0-based.
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Display names of the basis vectors, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteAlgebra {
    pub fn basis(k: usize, n: usize) -> Index {
        Index::Finite(k as u32, n as u32)
    }

    pub fn new(name: impl Into<String>, n: usize, constants: &[(usize, usize, usize, Scalar)]) -> Result<Self, Error> {
        let mut table: BTreeMap<(u32, u32), Element> = BTreeMap::new();
        for (i, j, k, c) in constants {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Parse(format!("structure constant index out of range in [{i}, {j}, {k}] for dimension {n}")));
            }
            table.entry((*i as u32, *j as u32)).or_default().add_term(Self::basis(*k, n), c.clone());
        }
        Ok(FiniteAlgebra { name: name.into(), n, table, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.n {
            return Err(Error::Parse(format!("{} labels given for dimension {}", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn from_file(f: &AlgebraFile) -> Result<Self, Error> {
        let consts = f
            .structure_constants
            .iter()
            .map(|(i, j, k, s)| Ok((*i, *j, *k, Scalar::parse(s)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        let alg = FiniteAlgebra::new(f.name.clone().unwrap_or_else(|| format!("A(dim {})", f.dimension)), f.dimension, &consts)?;
        match &f.labels {
            Some(l) => alg.with_labels(l.clone()),
            None => Ok(alg),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let f: AlgebraFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&f)
    }

    pub fn to_file(&self) -> AlgebraFile {
        let mut sc = Vec::new();
        for ((i, j), e) in &self.table {
            for (k, c) in e.terms() {
                if let Index::Finite(k, _) = k {
                    sc.push((*i as usize, *j as usize, *k as usize, c.to_string()));
                }
            }
        }
        AlgebraFile { dimension: self.n, structure_constants: sc, name: Some(self.name.clone()), labels: self.labels.clone() }
    }

    /// Copy of this algebra with one product redefined.
    pub fn with_product(&self, i: usize, j: usize, value: Element) -> Self {
        let mut out = self.clone();
        out.table.insert((i as u32, j as u32), value);
        out
    }

    /// Structure constants of an arbitrary finite algebra, relabelled `0..n`.
    pub fn from_algebra(alg: &dyn Algebra) -> Result<Self, Error> {
        let Dimension::Finite(n) = alg.dimension() else { return Err(Error::NotFiniteDimensional) };
        let basis = alg.enumerate(n);
        let pos: BTreeMap<&Index, usize> = basis.iter().enumerate().map(|(k, i)| (i, k)).collect();
        let mut consts = Vec::new();
        for (a, i) in basis.iter().enumerate() {
            for (b, j) in basis.iter().enumerate() {
                for (k, c) in alg.product(i, j).terms() {
                    consts.push((a, b, pos[k], c.clone()));
                }
            }
        }
        FiniteAlgebra::new(alg.name(), n, &consts)?.with_labels(basis.iter().map(|i| alg.label(i)).collect())
    }
}

impl Algebra for FiniteAlgebra {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn contains(&self, i: &Index) -> bool {
        matches!(i, Index::Finite(k, n) if (*k as usize) < self.n && *n as usize == self.n)
    }
    fn product(&self, i: &Index, j: &Index) -> Element {
        match (i, j) {
            (Index::Finite(a, _), Index::Finite(b, _)) => self.table.get(&(*a, *b)).cloned().unwrap_or_default(),
            _ => Element::zero(),
        }
    }
    fn enumerate(&self, depth: usize) -> Vec<Index> {
        (0..depth.min(self.n)).map(|k| Self::basis(k, self.n)).collect()
    }
    fn dimension(&self) -> Dimension {
        Dimension::Finite(self.n)
    }
    fn size(&self, _i: &Index) -> usize {
        0
    }
    fn label(&self, i: &Index) -> String {
        match i {
            Index::Finite(k, _) => match &self.labels {
                Some(l) => l[*k as usize].clone(),
                None => format!("e{k}"),
            },
            other => other.to_string(),
        }
    }
    fn neighbourhood(&self, _seeds: &[Index]) -> Vec<Index> {
        self.enumerate(self.n)
    }
    fn partners(&self, c: &Index, left: bool) -> Option<Vec<Index>> {
        let all = self.enumerate(self.n);
        Some(
            all.into_iter()
                .filter(|x| !(if left { self.product(c, x) } else { self.product(x, c) }).is_zero())
                .collect(),
        )
    }
}

/// Finitely supported functions on an index set with pointwise product.
#[derive(Clone, Debug)]
pub struct FunctionAlgebra {
    pub set: Arc<dyn IndexSet>,
    pub symbol: String,
}

impl FunctionAlgebra {
    pub fn new(set: Arc<dyn IndexSet>, symbol: &str) -> Self {
        FunctionAlgebra { set, symbol: symbol.into() }
    }
}

impl Algebra for FunctionAlgebra {
    fn name(&self) -> String {
        format!("K({})", self.set.name())
    }
    fn contains(&self, i: &Index) -> bool {
        self.set.contains(i)
    }
    fn product(&self, i: &Index, j: &Index) -> Element {
        if i == j {
            Element::basis(i.clone())
        } else {
            Element::zero()
        }
    }
    fn enumerate(&self, depth: usize) -> Vec<Index> {
        self.set.first(depth)
    }
    fn dimension(&self) -> Dimension {
        match self.set.cardinality() {
            Some(n) => Dimension::Finite(n),
            None => Dimension::Countable,
        }
    }
    fn size(&self, i: &Index) -> usize {
        self.set.size(i)
    }
    fn partners(&self, c: &Index, _left: bool) -> Option<Vec<Index>> {
        Some(vec![c.clone()])
    }
    fn label(&self, i: &Index) -> String {
        let l = self.set.label(i);
        if l.chars().count() == 1 || l.starts_with('[') {
            format!("{}{l}", self.symbol)
        } else {
            format!("{}({l})", self.symbol)
        }
    }
    fn involution(&self, i: &Index) -> Option<Element> {
        Some(Element::basis(i.clone()))
    }
    fn left_unit_for(&self, i: &Index) -> Option<Index> {
        Some(i.clone())
    }
    fn right_unit_for(&self, i: &Index) -> Option<Index> {
        Some(i.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Full,
    Upper,
    Diagonal,
}

impl Pattern {
    fn allows(self, p: i64, q: i64) -> bool {
        match self {
            Pattern::Full => true,
            Pattern::Upper => p <= q,
            Pattern::Diagonal => p == q,
        }
    }
}

/// Span of matrix units `e_pq` (indices from 1) following a pattern, either
/// infinite or bounded by `n`.
#[derive(Clone, Debug)]
pub struct MatrixUnits {
    pub pattern: Pattern,
    pub bound: Option<usize>,
    pub symbol: String,
}

impl MatrixUnits {
    pub fn infinite(pattern: Pattern) -> Self {
        MatrixUnits { pattern, bound: None, symbol: "e".into() }
    }

    pub fn finite(pattern: Pattern, n: usize) -> Self {
        MatrixUnits { pattern, bound: Some(n), symbol: "e".into() }
    }

    pub fn with_symbol(mut self, s: &str) -> Self {
        self.symbol = s.into();
        self
    }

    pub fn unit(p: i64, q: i64) -> Index {
        Index::IntPair(p, q)
    }
}

fn pq(i: &Index) -> (i64, i64) {
    match i {
        Index::IntPair(p, q) => (*p, *q),
        _ => panic!("expected a matrix unit label, got {i}"),
    }
}

impl Algebra for MatrixUnits {
    fn name(&self) -> String {
        let base = match self.pattern {
            Pattern::Full => "matrix units",
            Pattern::Upper => "upper-triangular matrix units",
            Pattern::Diagonal => "diagonal matrix units",
        };
        match self.bound {
            Some(n) => format!("{base} ({n}×{n})"),
            None => format!("{base} (infinite)"),
        }
    }
    fn contains(&self, i: &Index) -> bool {
        match i {
            Index::IntPair(p, q) => {
                *p >= 1 && *q >= 1 && self.pattern.allows(*p, *q)
                    && self.bound.map_or(true, |n| *p <= n as i64 && *q <= n as i64)
            }
            _ => false,
        }
    }
    fn product(&self, i: &Index, j: &Index) -> Element {
        let ((p, q), (r, s)) = (pq(i), pq(j));
        if q == r {
            Element::basis(Index::IntPair(p, s))
        } else {
            Element::zero()
        }
    }
    fn enumerate(&self, depth: usize) -> Vec<Index> {
        let pattern = self.pattern;
        let n = match self.bound {
            Some(b) => depth.min(match pattern {
                Pattern::Full => b * b,
                Pattern::Upper => b * (b + 1) / 2,
                Pattern::Diagonal => b,
            }),
            None => depth,
        };
        let bound = self.bound;
        crate::sets::shell_pairs(1, n, move |p, q| {
            pattern.allows(p, q) && bound.map_or(true, |b| p <= b as i64 && q <= b as i64)
        })
    }
    fn dimension(&self) -> Dimension {
        match self.bound {
            None => Dimension::Countable,
            Some(b) => Dimension::Finite(match self.pattern {
                Pattern::Full => b * b,
                Pattern::Upper => b * (b + 1) / 2,
                Pattern::Diagonal => b,
            }),
        }
    }
    fn size(&self, i: &Index) -> usize {
        let (p, q) = pq(i);
        p.max(q) as usize
    }
    fn label(&self, i: &Index) -> String {
        let (p, q) = pq(i);
        if self.pattern == Pattern::Diagonal {
            return format!("{}{p}", self.symbol);
        }
        if p < 10 && q < 10 {
            format!("{}{p}{q}", self.symbol)
        } else {
            format!("{}({p},{q})", self.symbol)
        }
    }
    fn involution(&self, i: &Index) -> Option<Element> {
        let (p, q) = pq(i);
        self.pattern.allows(q, p).then(|| Element::basis(Index::IntPair(q, p)))
    }
    fn neighbourhood(&self, seeds: &[Index]) -> Vec<Index> {
        let coords: BTreeSet<i64> = seeds.iter().flat_map(|i| { let (p, q) = pq(i); [p, q] }).collect();
        let mut out = Vec::new();
        for &p in &coords {
            for &q in &coords {
                let u = Index::IntPair(p, q);
                if self.contains(&u) {
                    out.push(u);
                }
            }
        }
        out
    }
    fn left_unit_for(&self, i: &Index) -> Option<Index> {
        let (p, _) = pq(i);
        Some(Index::IntPair(p, p))
    }
    fn right_unit_for(&self, i: &Index) -> Option<Index> {
        let (_, q) = pq(i);
        Some(Index::IntPair(q, q))
    }
}

/// `B⊗C` with `(b⊗c)(b'⊗c') = bb'⊗cc'`.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    pub left: AlgebraRef,
    pub right: AlgebraRef,
}

impl TensorAlgebra {
    pub fn new(left: AlgebraRef, right: AlgebraRef) -> Self {
        TensorAlgebra { left, right }
    }

    pub fn square(a: &AlgebraRef) -> Self {
        TensorAlgebra::new(a.clone(), a.clone())
    }

    /// The flip `x⊗y ↦ y⊗x` on an element over pair labels.
    pub fn flip(e: &Element) -> Element {
        Element::from_terms(e.terms().map(|(i, c)| {
            let (a, b) = i.split().expect("pair label");
            (Index::pair(b, a), c.clone())
        }))
    }
}

fn parts(i: &Index) -> (&Index, &Index) {
    i.split().unwrap_or_else(|| panic!("expected a pair label, got {i}"))
}

impl Algebra for TensorAlgebra {
    fn name(&self) -> String {
        format!("{} ⊗ {}", self.left.name(), self.right.name())
    }
    fn contains(&self, i: &Index) -> bool {
        i.split().is_some_and(|(a, b)| self.left.contains(a) && self.right.contains(b))
    }
    fn product(&self, i: &Index, j: &Index) -> Element {
        let ((a, b), (c, d)) = (parts(i), parts(j));
        let x = self.left.product(a, c);
        if x.is_zero() {
            return x;
        }
        Element::tensor(&x, &self.right.product(b, d))
    }
    fn enumerate(&self, depth: usize) -> Vec<Index> {
        let (l, r) = (self.left.enumerate(depth), self.right.enumerate(depth));
        let mut all: Vec<(usize, usize, usize)> = Vec::new();
        for x in 0..l.len() {
            for y in 0..r.len() {
                all.push((x.max(y), x, y));
            }
        }
        all.sort();
        all.into_iter().take(depth).map(|(_, x, y)| Index::pair(&l[x], &r[y])).collect()
    }
    fn dimension(&self) -> Dimension {
        match (self.left.dimension(), self.right.dimension()) {
            (Dimension::Finite(a), Dimension::Finite(b)) => Dimension::Finite(a * b),
            _ => Dimension::Countable,
        }
    }
    fn size(&self, i: &Index) -> usize {
        let (a, b) = parts(i);
        self.left.size(a).max(self.right.size(b))
    }
    fn label(&self, i: &Index) -> String {
        let (a, b) = parts(i);
        format!("{}⊗{}", self.left.label(a), self.right.label(b))
    }
    fn involution(&self, i: &Index) -> Option<Element> {
        let (a, b) = parts(i);
        Some(Element::tensor(&self.left.involution(a)?, &self.right.involution(b)?))
    }
    fn partners(&self, c: &Index, left: bool) -> Option<Vec<Index>> {
        let (a, b) = parts(c);
        let (l, r) = (self.left.partners(a, left)?, self.right.partners(b, left)?);
        Some(l.iter().flat_map(|x| r.iter().map(move |y| Index::pair(x, y))).collect())
    }
    fn neighbourhood(&self, seeds: &[Index]) -> Vec<Index> {
        let ls: Vec<Index> = seeds.iter().map(|i| parts(i).0.clone()).collect();
        let rs: Vec<Index> = seeds.iter().map(|i| parts(i).1.clone()).collect();
        let (ln, rn) = (pool(&*self.left, &ls), pool(&*self.right, &rs));
        let mut out = Vec::new();
        for a in &ln {
            for b in &rn {
                out.push(Index::pair(a, b));
            }
        }
        out
    }
    fn left_unit_for(&self, i: &Index) -> Option<Index> {
        let (a, b) = parts(i);
        Some(Index::pair(&self.left.left_unit_for(a)?, &self.right.left_unit_for(b)?))
    }
    fn right_unit_for(&self, i: &Index) -> Option<Index> {
        let (a, b) = parts(i);
        Some(Index::pair(&self.left.right_unit_for(a)?, &self.right.right_unit_for(b)?))
    }
}

/// Hint describing where a functional can be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportHint {
    FiniteSupport(Vec<Index>),
    RowFinite,
    ColumnFinite,
    Generic,
}

/// A linear functional given by its values on basis labels.
#[derive(Clone)]
pub struct Functional {
    rule: Arc<dyn Fn(&Index) -> Scalar + Send + Sync>,
    pub hint: SupportHint,
    /// How far (in label size) beyond its argument the functional can be nonzero
    /// along one leg; `None` when unbounded.
    pub reach: Option<usize>,
    pub label: String,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional({})", self.label)
    }
}

impl Functional {
    pub fn rule(
        label: impl Into<String>,
        hint: SupportHint,
        reach: Option<usize>,
        f: impl Fn(&Index) -> Scalar + Send + Sync + 'static,
    ) -> Self {
        Functional { rule: Arc::new(f), hint, reach, label: label.into() }
    }

    /// Finitely supported functional with the given values.
    pub fn table(label: impl Into<String>, values: Element, size: impl Fn(&Index) -> usize) -> Self {
        let support: Vec<Index> = values.support().cloned().collect();
        let reach = support.iter().map(size).max().unwrap_or(0);
        let v = values.clone();
        Functional::rule(label, SupportHint::FiniteSupport(support), Some(reach), move |i| v.coeff(i))
    }

    /// Coordinate functional `f_i`.
    pub fn coordinate(alg: &dyn Algebra, i: &Index) -> Self {
        Functional::table(format!("f[{}]", alg.label(i)), Element::basis(i.clone()), |j| alg.size(j))
    }

    pub fn zero() -> Self {
        Functional::rule("0", SupportHint::FiniteSupport(vec![]), Some(0), |_| Scalar::zero())
    }

    pub fn at(&self, i: &Index) -> Scalar {
        (self.rule)(i)
    }

    pub fn eval(&self, e: &Element) -> Scalar {
        e.terms().fold(Scalar::zero(), |acc, (i, c)| acc + c * &self.at(i))
    }

    pub fn finite_support(&self) -> Option<&[Index]> {
        match &self.hint {
            SupportHint::FiniteSupport(s) => Some(s),
            _ => None,
        }
    }

    /// `Σ c_k ω_k` for functionals over the same algebra.
    pub fn combine(label: impl Into<String>, parts: Vec<(Scalar, Functional)>) -> Self {
        let support = parts.iter().try_fold(Vec::new(), |mut acc, (_, f)| {
            acc.extend(f.finite_support()?.iter().cloned());
            Some(acc)
        });
        let reach = parts.iter().try_fold(0usize, |m, (_, f)| f.reach.map(|r| m.max(r)));
        let hint = match support {
            Some(mut s) => {
                s.sort();
                s.dedup();
                SupportHint::FiniteSupport(s)
            }
            None => SupportHint::Generic,
        };
        Functional::rule(label, hint, reach, move |i| {
            parts.iter().fold(Scalar::zero(), |acc, (c, f)| acc + c * &f.at(i))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Integers;

    fn m(p: i64, q: i64) -> Element {
        Element::basis(Index::IntPair(p, q))
    }

    #[test]
    fn matrix_products() {
        let c = MatrixUnits::infinite(Pattern::Full);
        assert_eq!(multiply(&m(1, 2), &m(2, 3), &c).unwrap(), m(1, 3));
        assert!(multiply(&m(1, 2), &m(1, 2), &c).unwrap().is_zero());
        let bad = Element::basis(Index::Int(1));
        assert!(matches!(multiply(&bad, &m(1, 1), &c), Err(Error::SchemeMismatch { .. })));
    }

    #[test]
    fn pointwise_products() {
        let k = FunctionAlgebra::new(Arc::new(Integers), "δ");
        let d = |n| Element::basis(Index::Int(n));
        assert_eq!(multiply(&d(3), &d(3), &k).unwrap(), d(3));
        assert!(multiply(&d(3), &d(4), &k).unwrap().is_zero());
    }

    fn span_e11_e12() -> FiniteAlgebra {
        let one = Scalar::one();
        FiniteAlgebra::new("span{e11,e12}", 2, &[(0, 0, 0, one.clone()), (0, 1, 1, one)]).unwrap()
    }

    #[test]
    fn nondegeneracy_gate() {
        let m2 = MatrixUnits::finite(Pattern::Full, 2);
        assert_eq!(check_nondegenerate(&m2, 1).unwrap(), Verdict::Holds);
        let bad = span_e11_e12();
        let v = check_nondegenerate(&bad, 2).unwrap();
        let w = v.witness().unwrap().element.clone().unwrap();
        assert_eq!(w, Element::basis(FiniteAlgebra::basis(1, 2)));
        let k = FunctionAlgebra::new(Arc::new(Integers), "δ");
        assert_eq!(check_nondegenerate(&k, 10).unwrap(), Verdict::VerifiedToDepth(10));
        let c = MatrixUnits::infinite(Pattern::Full);
        assert_eq!(check_nondegenerate(&c, 6).unwrap(), Verdict::VerifiedToDepth(6));
        assert_eq!(check_nondegenerate(&c, 0), Err(Error::InvalidDepth));
    }

    #[test]
    fn idempotency_gate() {
        let c = MatrixUnits::infinite(Pattern::Full);
        assert!(check_idempotent_algebra(&c, 5).unwrap().holds());
        let nil = FiniteAlgebra::new("x²=0", 1, &[]).unwrap();
        assert!(check_idempotent_algebra(&nil, 1).unwrap().fails());
    }

    #[test]
    fn associativity_gate() {
        let c = MatrixUnits::infinite(Pattern::Full);
        assert_eq!(check_associativity(&c, 6).unwrap(), Verdict::VerifiedToDepth(6));
        let m2 = FiniteAlgebra::from_algebra(&MatrixUnits::finite(Pattern::Full, 2)).unwrap();
        assert_eq!(check_associativity(&m2, 1).unwrap(), Verdict::Holds);
        let broken = m2.with_product(0, 1, Element::basis(FiniteAlgebra::basis(0, 4)));
        assert!(check_associativity(&broken, 1).unwrap().fails());
    }

    #[test]
    fn json_round_trip() {
        let a = FiniteAlgebra::from_algebra(&MatrixUnits::finite(Pattern::Upper, 2)).unwrap();
        let text = serde_json::to_string(&a.to_file()).unwrap();
        let b = FiniteAlgebra::from_json(&text).unwrap();
        for i in a.enumerate(3) {
            for j in a.enumerate(3) {
                assert_eq!(a.product(&i, &j), b.product(&i, &j));
            }
        }
        assert!(FiniteAlgebra::from_json("{\"dimension\": 2, \"structure_constants\": [[0,0,5,\"1\"]]}").is_err());
    }
}
