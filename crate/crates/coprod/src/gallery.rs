//! The example families, each wired up as a [`Coproduct`] together with the
//! regularity profile and facts the literature states for it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{mul, pool, Algebra, Dimension, AlgebraRef, FunctionAlgebra, Functional, MatrixUnits, Pattern, SupportHint, TensorAlgebra};
use crate::coproduct::{Coproduct, CoproductRule, CounitVariant, Definition, FormalTensor, Idempotent, Map};
use crate::error::Error;
use crate::index::{Element, Index};
use crate::scalar::{Gauss, Scalar};
use crate::sets::{FreeGroup2, IndexSet, IntPairs, Integers, Monoid, Naturals, Sym3};

pub const FAMILIES: [&str; 14] = [
    "group:Z",
    "group:S3",
    "group:F2",
    "monoid:N",
    "trivial-right-unit",
    "trivial-right-unit:unital",
    "tensor-split",
    "matrix",
    "sandwich:ex4_3",
    "sandwich:ex3_32",
    "sandwich:ex4_4",
    "sandwich:qn",
    "sandwich:ex3_24",
    "sandwich:ex3_25",
];

/// Statements about a family that the reports compare against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fact {
    Homomorphism,
    Coassociative(Definition),
    CoassociativeExtension,
    Full,
    NonDegenerate,
    WeaklyNonDegenerate,
    CounitExists,
    CounitHomomorphism,
    InvolutionCompatible,
    DualProductDegenerate,
}

impl Fact {
    pub fn key(&self) -> String {
        match self {
            Fact::Homomorphism => "homomorphism".into(),
            Fact::Coassociative(d) => format!("coassociativity.{}", d.key()),
            Fact::CoassociativeExtension => "coassociativity.extension".into(),
            Fact::Full => "fullness".into(),
            Fact::NonDegenerate => "nondegeneracy".into(),
            Fact::WeaklyNonDegenerate => "weak_nondegeneracy".into(),
            Fact::CounitExists => "counit.exists".into(),
            Fact::CounitHomomorphism => "counit.homomorphism".into(),
            Fact::InvolutionCompatible => "involution".into(),
            Fact::DualProductDegenerate => "dual.degenerate".into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Expected {
    /// `true` for regular, `false` for not regular; absent when nothing is stated.
    pub maps: BTreeMap<Map, bool>,
    pub facts: Vec<(Fact, bool)>,
}

impl Expected {
    fn maps(regular: &[Map], irregular: &[Map]) -> Self {
        let mut maps = BTreeMap::new();
        for m in regular {
            maps.insert(*m, true);
        }
        for m in irregular {
            maps.insert(*m, false);
        }
        Expected { maps, facts: Vec::new() }
    }

    fn with(mut self, f: Fact, v: bool) -> Self {
        self.facts.push((f, v));
        self
    }

    pub fn fact(&self, f: Fact) -> Option<bool> {
        self.facts.iter().find(|(g, _)| *g == f).map(|(_, v)| *v)
    }
}

/// A recorded difference between a displayed formula and direct computation.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub what: String,
    pub displayed: String,
    pub computed: String,
}

#[derive(Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub coproduct: Coproduct,
    pub expected: Expected,
    pub counit: Option<(Functional, CounitVariant)>,
    pub idempotent: Option<Idempotent>,
    pub discrepancies: Vec<Discrepancy>,
}

impl GalleryEntry {
    pub fn algebra(&self) -> AlgebraRef {
        self.coproduct.algebra()
    }
}

#[derive(Clone)]
pub enum QRule {
    /// `q_j = e_jj`
    Diagonal,
    /// `q_1 = e_11`, `q_n = e_n1 + e_nn`
    Qn,
    Custom(String, Arc<dyn Fn(i64) -> Element + Send + Sync>),
}

impl QRule {
    pub fn q(&self, j: i64) -> Element {
        let e = |p, q| Element::basis(Index::IntPair(p, q));
        match self {
            QRule::Diagonal => e(j, j),
            QRule::Qn if j == 1 => e(1, 1),
            QRule::Qn => e(j, 1).add(&e(j, j)),
            QRule::Custom(_, f) => f(j),
        }
    }

    pub fn name(&self) -> String {
        match self {
            QRule::Diagonal => "p".into(),
            QRule::Qn => "qn".into(),
            QRule::Custom(n, _) => n.clone(),
        }
    }
}

#[derive(Clone)]
pub struct Params {
    /// Value substituted for the formal parameter `t`; `None` keeps it formal.
    pub t: Option<Gauss>,
    /// How many `q` idempotents are verified at construction.
    pub depth: usize,
    pub q: QRule,
}

impl Default for Params {
    fn default() -> Self {
        Params { t: None, depth: 8, q: QRule::Diagonal }
    }
}

impl Params {
    fn t(&self) -> Scalar {
        match &self.t {
            Some(g) => Scalar::from_gauss(g.clone()),
            None => Scalar::t(),
        }
    }
}

pub fn build(name: &str, params: &Params) -> Result<GalleryEntry, Error> {
    match name {
        "group:Z" => Ok(group_function_algebra(name, Integers, "δ_x⊗δ_{p−x}, x ∈ ℤ")),
        "group:S3" => Ok(group_function_algebra(name, Sym3, "")),
        "group:F2" => Ok(group_function_algebra(name, FreeGroup2, "δ_x⊗δ_{x⁻¹p}, x ∈ F₂")),
        "monoid:N" => Ok(monoid_function_algebra()),
        "trivial-right-unit" => Ok(trivial_right_unit()),
        "trivial-right-unit:unital" => Ok(trivial_right_unit_unital()),
        "tensor-split" => Ok(tensor_split()),
        "matrix" => Ok(matrix_coproduct()),
        "sandwich:ex4_3" => sandwich(Variant::Ex4_3, params),
        "sandwich:ex3_32" => sandwich(Variant::Ex3_32, params),
        "sandwich:ex4_4" => sandwich(Variant::Ex4_4(params.q.clone()), params),
        "sandwich:qn" => sandwich(Variant::Qn, params),
        "sandwich:ex3_24" => sandwich(Variant::Ex3_24, params),
        "sandwich:ex3_25" => sandwich(Variant::Ex3_25, params),
        _ => Err(Error::UnknownFamily(name.into())),
    }
}

/// Idempotent basis labels of a given size; for the algebras used here their
/// sum over all sizes is the unit of the multiplier algebra.
pub fn unit_shell(alg: &dyn Algebra, k: usize) -> Vec<Index> {
    alg.enumerate((k + 2) * (k + 2) + 4)
        .into_iter()
        .filter(|i| alg.size(i) == k && alg.product(i, i) == Element::basis(i.clone()))
        .collect()
}

struct GroupRule<G: Monoid> {
    g: G,
    alg: AlgebraRef,
    invertible: bool,
    direct: bool,
    describe: String,
}

impl<G: Monoid + Clone + 'static> CoproductRule for GroupRule<G> {
    fn name(&self) -> String {
        format!("Δ(f)(p,q) = f(pq) on {}", self.alg.name())
    }
    fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        if let Some(fiber) = self.g.fiber(a) {
            let e = Element::from_terms(fiber.into_iter().map(|(x, y)| (Index::pair(&x, &y), Scalar::one())));
            return FormalTensor::finite(e);
        }
        let (g, p) = (self.g.clone(), a.clone());
        FormalTensor::new(None, move |k| {
            Element::from_terms(
                g.shell(k)
                    .into_iter()
                    .filter_map(|x| g.right_div(&x, &p).map(|y| (Index::pair(&x, &y), Scalar::one()))),
            )
        })
    }
    fn closed_form(&self, m: Map, x: &Index, y: &Index) -> Option<Element> {
        if !self.invertible {
            return None;
        }
        let e = match m {
            Map::T1 | Map::T3 => self.g.left_div(x, y).map(|u| Index::pair(&u, y)),
            Map::T2 | Map::T4 => self.g.right_div(x, y).map(|v| Index::pair(x, &v)),
        };
        Some(e.map(Element::basis).unwrap_or_default())
    }
    fn act(&self, a: &Index, l: &Index, _left: bool) -> Option<Element> {
        if !self.direct {
            return None;
        }
        let (x, y) = l.split().expect("pair label");
        Some(if self.g.mul(x, y) == *a { Element::basis(l.clone()) } else { Element::zero() })
    }
    fn leg(&self, a: &Index, x: &Index, first: bool) -> Option<Element> {
        let other = if first { self.g.right_div(x, a) } else { self.g.left_div(a, x) };
        Some(other.map(Element::basis).unwrap_or_default())
    }
    fn occurs_in(&self, x: &Index, y: &Index) -> Option<Vec<Index>> {
        Some(vec![self.g.mul(x, y)])
    }
    fn describe_delta(&self, _a: &Index) -> Option<String> {
        (!self.describe.is_empty()).then(|| self.describe.clone())
    }
    fn span_seeds(&self, legs: &[Index]) -> Vec<Index> {
        let mut seeds = pool(&*self.alg, legs);
        for x in legs {
            for y in legs {
                seeds.push(self.g.mul(x, y));
            }
        }
        seeds.sort();
        seeds.dedup();
        seeds
    }
}

fn evaluation_at_unit<G: Monoid>(g: &G, alg: &dyn Algebra) -> Functional {
    Functional::table("ε", Element::basis(g.unit()), |i| alg.size(i))
}

/// `K(G)` with `Δ(f)(p,q) = f(pq)`.
pub fn group_function_algebra<G: Monoid + Clone + 'static>(name: &str, g: G, describe: &str) -> GalleryEntry {
    let alg: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(g.clone()), "δ"));
    let eps = evaluation_at_unit(&g, &*alg);
    let direct = g.name() == "F₂";
    let cp = Coproduct::new(GroupRule { g, alg, invertible: true, direct, describe: describe.into() });
    let expected = Expected::maps(&Map::ALL, &[])
        .with(Fact::Homomorphism, true)
        .with(Fact::Coassociative(Definition::T1T2), true)
        .with(Fact::Full, true)
        .with(Fact::NonDegenerate, true)
        .with(Fact::CounitExists, true)
        .with(Fact::CounitHomomorphism, true);
    GalleryEntry {
        name: name.into(),
        params: vec![],
        coproduct: cp,
        expected,
        counit: Some((eps, CounitVariant::T1T2)),
        idempotent: Some(Idempotent::One),
        discrepancies: vec![],
    }
}

/// `K(ℕ)` with `Δ(δ_p) = Σ_{x+y=p} δ_x⊗δ_y`.
pub fn monoid_function_algebra() -> GalleryEntry {
    let g = Naturals { start: 0 };
    let alg: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(g.clone()), "δ"));
    let eps = evaluation_at_unit(&g, &*alg);
    let cp = Coproduct::new(GroupRule { g, alg, invertible: false, direct: false, describe: String::new() });
    let expected = Expected::maps(&Map::ALL, &[]).with(Fact::Homomorphism, true).with(Fact::CounitExists, true);
    GalleryEntry {
        name: "monoid:N".into(),
        params: vec![],
        coproduct: cp,
        expected,
        counit: Some((eps, CounitVariant::T1T2)),
        idempotent: None,
        discrepancies: vec![],
    }
}

struct RightUnit {
    alg: AlgebraRef,
}

impl CoproductRule for RightUnit {
    fn name(&self) -> String {
        format!("Δ(a) = a⊗1 on {}", self.alg.name())
    }
    fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        let (alg, a) = (self.alg.clone(), a.clone());
        let last = match alg.dimension() {
            Dimension::Finite(n) => alg.enumerate(n).iter().map(|i| alg.size(i)).max(),
            Dimension::Countable => None,
        };
        FormalTensor::new(last, move |k| {
            Element::from_terms(unit_shell(&*alg, k).into_iter().map(|u| (Index::pair(&a, &u), Scalar::one())))
        })
    }
    fn family(&self, m: Map, x: &Index, y: &Index) -> Option<String> {
        let prod = match m {
            Map::T2 => self.alg.product(x, y),
            Map::T4 => self.alg.product(y, x),
            _ => return None,
        };
        Some(format!("{}⊗1", crate::algebra::show(&*self.alg, &prod)))
    }
}

/// `Δ(a) = a⊗1` on `K(ℕ)`.
pub fn trivial_right_unit() -> GalleryEntry {
    let alg: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(Naturals { start: 0 }), "δ"));
    let expected = Expected::maps(&[Map::T1, Map::T3], &[Map::T2, Map::T4])
        .with(Fact::Coassociative(Definition::SingleT1), true)
        .with(Fact::NonDegenerate, true)
        .with(Fact::CounitExists, false);
    GalleryEntry {
        name: "trivial-right-unit".into(),
        params: vec![],
        coproduct: Coproduct::new(RightUnit { alg }),
        expected,
        counit: None,
        idempotent: Some(Idempotent::One),
        discrepancies: vec![],
    }
}

/// `Δ(a) = a⊗1` on the unital algebra `ℚ³`, where the dual product is
/// `(ω₁ω₂)(a) = ω₁(a)ω₂(1)`.
pub fn trivial_right_unit_unital() -> GalleryEntry {
    let alg: AlgebraRef = Arc::new(MatrixUnits::finite(Pattern::Diagonal, 3));
    let expected = Expected::maps(&Map::ALL, &[])
        .with(Fact::Homomorphism, true)
        .with(Fact::Coassociative(Definition::SingleT1), true)
        .with(Fact::CounitExists, false)
        .with(Fact::DualProductDegenerate, true);
    GalleryEntry {
        name: "trivial-right-unit:unital".into(),
        params: vec![],
        coproduct: Coproduct::new(RightUnit { alg }),
        expected,
        counit: None,
        idempotent: Some(Idempotent::One),
        discrepancies: vec![],
    }
}

struct Split {
    b: AlgebraRef,
    c: AlgebraRef,
    alg: AlgebraRef,
}

impl CoproductRule for Split {
    fn name(&self) -> String {
        "Δ(b⊗c) = b⊗1⊗1⊗c".into()
    }
    fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        let (b, c) = a.split().expect("pair label");
        let (b, c) = (b.clone(), c.clone());
        let (ba, ca) = (self.b.clone(), self.c.clone());
        FormalTensor::new(None, move |k| {
            let mut out = Element::zero();
            for x in 0..=k {
                for y in 0..=k {
                    if x.max(y) != k {
                        continue;
                    }
                    for u in unit_shell(&*ca, x) {
                        for v in unit_shell(&*ba, y) {
                            out.add_term(Index::pair(&Index::pair(&b, &u), &Index::pair(&v, &c)), Scalar::one());
                        }
                    }
                }
            }
            out
        })
    }
}

/// `A = K(ℕ)⊗K(ℕ)` with `Δ(b⊗c) = b⊗1⊗1⊗c`.
pub fn tensor_split() -> GalleryEntry {
    let b: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(Naturals { start: 0 }), "δ"));
    let c = b.clone();
    let alg: AlgebraRef = Arc::new(TensorAlgebra::new(b.clone(), c.clone()));
    let expected = Expected::maps(&[], &Map::ALL)
        .with(Fact::CoassociativeExtension, true)
        .with(Fact::NonDegenerate, true);
    GalleryEntry {
        name: "tensor-split".into(),
        params: vec![],
        coproduct: Coproduct::new(Split { b, c, alg }),
        expected,
        counit: None,
        idempotent: Some(Idempotent::One),
        discrepancies: vec![],
    }
}

struct MatrixRule {
    alg: AlgebraRef,
}

fn pq(i: &Index) -> (i64, i64) {
    match i {
        Index::IntPair(p, q) => (*p, *q),
        _ => panic!("expected a matrix unit, got {i}"),
    }
}

impl CoproductRule for MatrixRule {
    fn name(&self) -> String {
        "Δ(e_pq) = Σ_j e_pj⊗e_jq".into()
    }
    fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        let (p, q) = pq(a);
        FormalTensor::new(None, move |k| {
            if k == 0 {
                return Element::zero();
            }
            let j = k as i64;
            Element::basis(Index::pair(&Index::IntPair(p, j), &Index::IntPair(j, q)))
        })
    }
    fn leg(&self, a: &Index, x: &Index, first: bool) -> Option<Element> {
        let ((p, q), (r, s)) = (pq(a), pq(x));
        let e = match first {
            true if r == p => Element::basis(Index::IntPair(s, q)),
            false if s == q => Element::basis(Index::IntPair(p, r)),
            _ => Element::zero(),
        };
        Some(e)
    }
    fn occurs_in(&self, x: &Index, y: &Index) -> Option<Vec<Index>> {
        let ((p, j), (k, q)) = (pq(x), pq(y));
        Some(if j == k { vec![Index::IntPair(p, q)] } else { vec![] })
    }
    fn family(&self, m: Map, x: &Index, y: &Index) -> Option<String> {
        match m {
            Map::T1 => {
                let ((p, _), (_, s)) = (pq(x), pq(y));
                Some(format!("Σ_j e(p,j)⊗e(j,s) with p = {p}, s = {s}, j ≥ 1"))
            }
            Map::T2 => {
                let ((p, _), (_, q)) = (pq(x), pq(y));
                Some(format!("Σ_j e(p,j)⊗e(j,q) with p = {p}, q = {q}, j ≥ 1"))
            }
            _ => None,
        }
    }
    fn describe_delta(&self, a: &Index) -> Option<String> {
        let (p, q) = pq(a);
        Some(format!("Σ_j e({p},j)⊗e(j,{q}), j ≥ 1"))
    }
}

/// Infinite matrix units with `Δ(e_pq) = Σ_j e_pj⊗e_jq`.
pub fn matrix_coproduct() -> GalleryEntry {
    let alg: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
    let eps = Functional::rule("ε", SupportHint::Generic, Some(0), |i| {
        let (p, q) = pq(i);
        if p == q { Scalar::one() } else { Scalar::zero() }
    });
    let expected = Expected::maps(&[Map::T3, Map::T4], &[Map::T1, Map::T2])
        .with(Fact::Coassociative(Definition::T3T4), true)
        .with(Fact::CounitExists, true)
        .with(Fact::CounitHomomorphism, false);
    GalleryEntry {
        name: "matrix".into(),
        params: vec![],
        coproduct: Coproduct::new(MatrixRule { alg }),
        expected,
        counit: Some((eps, CounitVariant::T3T4)),
        idempotent: None,
        discrepancies: vec![],
    }
}

#[derive(Clone)]
pub enum Variant {
    Ex4_3,
    Ex3_32,
    Ex4_4(QRule),
    Qn,
    Ex3_24,
    Ex3_25,
}

/// `A = L⊗R`, `E ∈ M(R⊗L)` and `Δ(x⊗y) = x⊗E⊗y`.
struct SandwichRule {
    name: String,
    l: AlgebraRef,
    r: AlgebraRef,
    alg: AlgebraRef,
    e: FormalTensor,
}

impl CoproductRule for SandwichRule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        let (x, y) = a.split().expect("pair label");
        FormalTensor::sandwich(x, &self.e, y)
    }
}

impl SandwichRule {
    /// `1⊗E⊗1` as a formal element over `A⊗A`.
    fn one_e_one(&self) -> FormalTensor {
        let (l, r, e) = (self.l.clone(), self.r.clone(), self.e.clone());
        FormalTensor::new(None, move |k| {
            let mut out = Element::zero();
            for a in 0..=k {
                for j in 0..=k {
                    for b in 0..=k {
                        if a.max(j).max(b) != k {
                            continue;
                        }
                        let ej = e.shell(j);
                        if ej.is_zero() {
                            continue;
                        }
                        for u in unit_shell(&*l, a) {
                            for w in unit_shell(&*r, b) {
                                for (m, c) in ej.terms() {
                                    let (x, y) = m.split().expect("pair label");
                                    out.add_term(Index::pair(&Index::pair(&u, x), &Index::pair(y, &w)), c.clone());
                                }
                            }
                        }
                    }
                }
            }
            out
        })
    }
}

fn e_unit(p: i64, q: i64) -> Element {
    Element::basis(Index::IntPair(p, q))
}

/// Triangular rule `q_ij = e_ii + t e_ij` for `i < j`, `q_jj = e_jj`.
pub fn triangular_q(i: i64, j: i64, t: &Scalar) -> Element {
    if i == j {
        e_unit(j, j)
    } else {
        e_unit(i, i).add(&e_unit(i, j).scale(t))
    }
}

fn check_idempotent(r: &dyn Algebra, q: &Element, at: String) -> Result<(), Error> {
    if mul(r, q, q) == *q {
        Ok(())
    } else {
        Err(Error::NonIdempotentQ(at))
    }
}

pub fn sandwich(variant: Variant, params: &Params) -> Result<GalleryEntry, Error> {
    let full: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
    let nat0: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(Naturals { start: 0 }), "δ"));
    let nat1: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(Naturals { start: 1 }), "p"));
    let t = params.t();
    let mut discrepancies = Vec::new();
    let mut param_list = Vec::new();
    let (name, l, r, e, expected): (&str, AlgebraRef, AlgebraRef, FormalTensor, Expected) = match &variant {
        Variant::Ex4_3 => {
            let e = FormalTensor::new(None, |k| {
                if k == 0 {
                    return Element::zero();
                }
                let j = k as i64;
                Element::basis(Index::pair(&Index::IntPair(1, j), &Index::IntPair(j, 1)))
            });
            let ex = Expected::maps(&[Map::T3, Map::T4], &[Map::T1, Map::T2])
                .with(Fact::Coassociative(Definition::T3T4), true)
                .with(Fact::Full, false)
                .with(Fact::DualProductDegenerate, true);
            ("sandwich:ex4_3", full.clone(), full.clone(), e, ex)
        }
        Variant::Ex3_32 => {
            let e = FormalTensor::new(None, |k| {
                let x = Index::Int(k as i64);
                Element::basis(Index::pair(&x, &x))
            });
            let ex = Expected::maps(&Map::ALL, &[])
                .with(Fact::Homomorphism, true)
                .with(Fact::WeaklyNonDegenerate, true)
                .with(Fact::Coassociative(Definition::T1T2), true)
                .with(Fact::CoassociativeExtension, true);
            ("sandwich:ex3_32", nat0.clone(), nat0.clone(), e, ex)
        }
        Variant::Ex4_4(_) | Variant::Qn => {
            let q = q_of(&variant);
            for j in 1..=params.depth.max(1) as i64 {
                check_idempotent(&*full, &q.q(j), format!("q_{j} = {}", crate::algebra::show(&*full, &q.q(j))))?;
            }
            let qq = q.clone();
            let e = FormalTensor::new(None, move |k| {
                if k == 0 {
                    return Element::zero();
                }
                let j = k as i64;
                Element::from_terms(qq.q(j).terms().map(|(m, c)| (Index::pair(m, &Index::Int(j)), c.clone())))
            });
            if matches!(variant, Variant::Qn) {
                let ex = Expected::maps(&[Map::T1, Map::T2, Map::T3], &[Map::T4]).with(Fact::Homomorphism, true);
                discrepancies.push(qn_discrepancy(2, 3));
                ("sandwich:qn", nat1.clone(), full.clone(), e, ex)
            } else {
                param_list.push(("q".to_string(), q.name()));
                let ex = Expected::maps(&[Map::T1, Map::T3], &[])
                    .with(Fact::Homomorphism, true)
                    .with(Fact::Coassociative(Definition::SingleT1), true)
                    .with(Fact::WeaklyNonDegenerate, true);
                ("sandwich:ex4_4", nat1.clone(), full.clone(), e, ex)
            }
        }
        Variant::Ex3_24 | Variant::Ex3_25 => {
            let upper = matches!(variant, Variant::Ex3_24);
            let pairs: Arc<dyn IndexSet> = Arc::new(IntPairs { start: 1, upper_only: upper });
            let l: AlgebraRef = Arc::new(FunctionAlgebra::new(pairs, "p"));
            let r: AlgebraRef = if upper { Arc::new(MatrixUnits::infinite(Pattern::Upper)) } else { full.clone() };
            for j in 1..=params.depth.max(1) as i64 {
                for i in 1..=j {
                    let idx: Vec<(i64, i64)> = if upper || i == j { vec![(i, j)] } else { vec![(i, j), (j, i)] };
                    for (a, b) in idx {
                        let q = triangular_q(a, b, &t);
                        check_idempotent(&*r, &q, format!("q_({a},{b})"))?;
                    }
                }
            }
            let tt = t.clone();
            let e = FormalTensor::new(None, move |k| {
                let k = k as i64;
                let mut out = Element::zero();
                for i in 1..=k {
                    for j in 1..=k {
                        if i.max(j) != k || (upper && i > j) {
                            continue;
                        }
                        for (m, c) in triangular_q(i, j, &tt).terms() {
                            out.add_term(Index::pair(m, &Index::IntPair(i, j)), c.clone());
                        }
                    }
                }
                out
            });
            param_list.push(("t".into(), t.to_string()));
            let ex = Expected::maps(&[Map::T1, Map::T3], &[Map::T2, Map::T4])
                .with(Fact::Homomorphism, true)
                .with(Fact::Full, true);
            if upper {
                ("sandwich:ex3_24", l, r, e, ex)
            } else {
                ("sandwich:ex3_25", l, r, e, ex.with(Fact::InvolutionCompatible, true))
            }
        }
    };
    let alg: AlgebraRef = Arc::new(TensorAlgebra::new(l.clone(), r.clone()));
    let rule = SandwichRule { name: format!("Δ(x⊗y) = x⊗E⊗y ({name})"), l, r, alg, e };
    let idempotent = match variant {
        Variant::Ex4_3 => None,
        _ => Some(Idempotent::Formal(rule.one_e_one())),
    };
    Ok(GalleryEntry {
        name: name.into(),
        params: param_list,
        coproduct: Coproduct::new(rule),
        expected,
        counit: None,
        idempotent,
        discrepancies,
    })
}

fn q_of(v: &Variant) -> QRule {
    match v {
        Variant::Ex4_4(q) => q.clone(),
        _ => QRule::Qn,
    }
}

/// `(e_rs⊗1)E` for the `q_n` rule, by direct expansion over `j ≤ 8`, as an
/// element over labels `e⊗p`.
pub fn qn_right_expansion(r: i64, s: i64) -> Element {
    let c = MatrixUnits::infinite(Pattern::Full);
    let mut out = Element::zero();
    for j in 1..=8 {
        let prod = mul(&c, &e_unit(r, s), &QRule::Qn.q(j));
        out.add_scaled(&Element::tensor(&prod, &Element::basis(Index::Int(j))), &Scalar::one());
    }
    out
}

fn qn_discrepancy(r: i64, s: i64) -> Discrepancy {
    let p = FunctionAlgebra::new(Arc::new(Naturals { start: 1 }), "p");
    let c = MatrixUnits::infinite(Pattern::Full);
    let show = |e: &Element| {
        e.render(&|i| {
            let (a, b) = i.split().expect("pair label");
            format!("{}⊗{}", c.label(a), p.label(b))
        })
    };
    let displayed = Element::tensor(&e_unit(r, 1).add(&e_unit(s, s)), &Element::basis(Index::Int(s)));
    Discrepancy {
        what: format!("(e_rs⊗1)E for the q_n rule at r = {r}, s = {s}"),
        displayed: format!("{} (suspected typographical)", show(&displayed)),
        computed: show(&qn_right_expansion(r, s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coproduct::{map_status, OneSided};

    #[test]
    fn every_family_builds() {
        for f in FAMILIES {
            let e = build(f, &Params::default()).unwrap();
            assert_eq!(e.name, f);
        }
        assert!(matches!(build("group:Q8", &Params::default()), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn z_closed_form() {
        let e = build("group:Z", &Params::default()).unwrap();
        let t = e.coproduct.canonical_map(Map::T1, &Index::Int(5), &Index::Int(2), 6).unwrap();
        assert_eq!(t, OneSided::Finite(Element::basis(Index::pair(&Index::Int(3), &Index::Int(2)))));
        assert!(matches!(e.coproduct.delta_finite(&Index::Int(1), 6), OneSided::Infinite(_)));
    }

    #[test]
    fn natural_fibers() {
        let e = monoid_function_algebra();
        let d = e.coproduct.delta_finite(&Index::Int(2), 6);
        let want: Element = [(0, 2), (1, 1), (2, 0)]
            .iter()
            .map(|(x, y)| (Index::pair(&Index::Int(*x), &Index::Int(*y)), Scalar::one()))
            .collect();
        assert_eq!(d, OneSided::Finite(want));
    }

    #[test]
    fn qn_rule_regularity() {
        let e = build("sandwich:qn", &Params::default()).unwrap();
        assert!(map_status(&e.coproduct, Map::T2, 3).is_regular());
        assert!(!map_status(&e.coproduct, Map::T4, 3).is_regular());
        let d = &e.discrepancies[0];
        assert_ne!(d.displayed.replace(" (suspected typographical)", ""), d.computed);
    }

    #[test]
    fn non_idempotent_q_is_rejected() {
        let bad = QRule::Custom("2e".into(), Arc::new(|j| e_unit(j, j).scale(&Scalar::from_int(2))));
        let p = Params { q: bad, ..Params::default() };
        assert!(matches!(build("sandwich:ex4_4", &p), Err(Error::NonIdempotentQ(_))));
    }
}
