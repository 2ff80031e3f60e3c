//! Coproducts `Δ: A → M(A⊗A)`, the canonical maps `T₁…T₄` and every check
//! built on them.
//!
//! A family describes `Δ(a)` as a formal sum of shells, each a finite element
//! of `A⊗A`. Two-sided products `Δ(a)(c⊗d)` only see shells up to a window
//! determined by the sizes of the labels involved. One-sided products such as
//! `Δ(a)(1⊗b)` are summed over the window and then probed further: if the
//! probe shells all vanish the result is finite, if they keep producing terms
//! that survive a separating two-sided product the map is not regular.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{mul, pool, sweep_basis, Algebra, AlgebraRef, Functional, Verdict, Witness};
use crate::error::Error;
use crate::index::{Element, Index};
use crate::linalg::{solve, var, Solve, SpanBasis};
use crate::multiplier::Multiplier;
use crate::scalar::Scalar;

/// A possibly infinite sum `Σ_k shell(k)` of finite elements of `A⊗A`.
#[derive(Clone)]
pub struct FormalTensor {
    shells: Arc<dyn Fn(usize) -> Element + Send + Sync>,
    memo: Arc<Mutex<Vec<Element>>>,
    /// All shells after this one vanish.
    pub last: Option<usize>,
}

impl fmt::Debug for FormalTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalTensor(last = {:?})", self.last)
    }
}

impl FormalTensor {
    pub fn new(last: Option<usize>, shells: impl Fn(usize) -> Element + Send + Sync + 'static) -> Self {
        FormalTensor { shells: Arc::new(shells), memo: Default::default(), last }
    }

    pub fn finite(e: Element) -> Self {
        FormalTensor::new(Some(0), move |k| if k == 0 { e.clone() } else { Element::zero() })
    }

    pub fn shell(&self, k: usize) -> Element {
        if matches!(self.last, Some(l) if k > l) {
            return Element::zero();
        }
        if let Some(e) = self.memo.lock().expect("shell memo").get(k) {
            return e.clone();
        }
        let have = self.memo.lock().expect("shell memo").len();
        let fresh: Vec<Element> = (have..=k).map(|j| (self.shells)(j)).collect();
        let mut memo = self.memo.lock().expect("shell memo");
        if memo.len() == have {
            memo.extend(fresh);
        }
        memo[k].clone()
    }

    /// `x⊗F⊗y` on four legs grouped as `(x⊗F₁)⊗(F₂⊗y)`.
    pub fn sandwich(x: &Index, middle: &FormalTensor, y: &Index) -> Self {
        let (x, y, m) = (x.clone(), y.clone(), middle.clone());
        FormalTensor::new(middle.last, move |k| {
            Element::from_terms(m.shell(k).terms().map(|(l, c)| {
                let (u, v) = l.split().expect("pair label");
                (Index::pair(&Index::pair(&x, u), &Index::pair(v, &y)), c.clone())
            }))
        })
    }

    /// The same sum with both legs swapped.
    pub fn flipped(&self) -> Self {
        let me = self.clone();
        FormalTensor::new(self.last, move |k| crate::algebra::TensorAlgebra::flip(&me.shell(k)))
    }
}

/// The four canonical maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Map {
    /// `a⊗b ↦ Δ(a)(1⊗b)`
    T1,
    /// `c⊗a ↦ (c⊗1)Δ(a)`
    T2,
    /// `a⊗b ↦ (1⊗b)Δ(a)`
    T3,
    /// `c⊗a ↦ Δ(a)(c⊗1)`
    T4,
}

impl Map {
    pub const ALL: [Map; 4] = [Map::T1, Map::T2, Map::T3, Map::T4];

    /// Splits the argument order into `(argument of Δ, other factor)`.
    fn args<'a>(self, x: &'a Index, y: &'a Index) -> (&'a Index, &'a Index) {
        match self {
            Map::T1 | Map::T3 => (x, y),
            Map::T2 | Map::T4 => (y, x),
        }
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Map::T1 => "T1",
            Map::T2 => "T2",
            Map::T3 => "T3",
            Map::T4 => "T4",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfiniteWitness {
    pub family: String,
    /// Number of probed shells confirmed nonzero through a separating product.
    pub verified: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OneSided {
    Finite(Element),
    Infinite(InfiniteWitness),
    Unknown(String),
}

impl OneSided {
    pub fn finite(&self) -> Option<&Element> {
        match self {
            OneSided::Finite(e) => Some(e),
            _ => None,
        }
    }
}

/// What a family supplies: the algebra and `Δ` on basis labels.
pub trait CoproductRule: Send + Sync {
    fn name(&self) -> String;
    fn algebra(&self) -> AlgebraRef;
    fn delta(&self, a: &Index) -> FormalTensor;

    /// Extra shells added to every window.
    fn slack(&self) -> usize {
        2
    }

    /// Closed form of a canonical map on basis labels, when the family knows one.
    fn closed_form(&self, _m: Map, _x: &Index, _y: &Index) -> Option<Element> {
        None
    }

    /// Human-readable family for a non-finite one-sided product.
    fn family(&self, _m: Map, _x: &Index, _y: &Index) -> Option<String> {
        None
    }

    /// `Δ(a)·l` (or `l·Δ(a)` when `left` is false) for a pair label `l`, when
    /// the family can compute it without summing shells.
    fn act(&self, _a: &Index, _l: &Index, _left: bool) -> Option<Element> {
        None
    }

    /// The element `c_x` in `Δ(a) = Σ_x x⊗c_x` (or `Σ_x c_x⊗x` when `first`
    /// is false), when the family can read it off directly.
    fn leg(&self, _a: &Index, _x: &Index, _first: bool) -> Option<Element> {
        None
    }

    /// The labels `a` for which `x⊗y` occurs in `Δ(a)`, when known.
    fn occurs_in(&self, _x: &Index, _y: &Index) -> Option<Vec<Index>> {
        None
    }

    /// Description of `Δ(a)` when it is not a finite tensor.
    fn describe_delta(&self, _a: &Index) -> Option<String> {
        None
    }

    /// Candidate labels `c` for writing elements over the legs as sums of `Δ(c)(a⊗b)`.
    fn span_seeds(&self, legs: &[Index]) -> Vec<Index> {
        pool(&*self.algebra(), legs)
    }
}

type TKey = (Map, Index, Index, usize);

/// A coproduct with memoised shells and canonical maps.
#[derive(Clone)]
pub struct Coproduct {
    rule: Arc<dyn CoproductRule>,
    alg: AlgebraRef,
    shells: Arc<Mutex<HashMap<Index, (FormalTensor, Arc<Vec<Element>>)>>>,
    tcache: Arc<Mutex<HashMap<TKey, OneSided>>>,
}

impl fmt::Debug for Coproduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coproduct({})", self.name())
    }
}

/// Product in `A⊗A` on pair labels.
pub fn tmul(alg: &dyn Algebra, s: &Element, t: &Element) -> Element {
    let mut out = Element::zero();
    for (i, x) in s.terms() {
        let (i1, i2) = i.split().expect("pair label");
        for (j, y) in t.terms() {
            let (j1, j2) = j.split().expect("pair label");
            let l = alg.product(i1, j1);
            if l.is_zero() {
                continue;
            }
            let r = alg.product(i2, j2);
            if r.is_zero() {
                continue;
            }
            out.add_scaled(&Element::tensor(&l, &r), &(x * y));
        }
    }
    out
}

/// Applies a one-sided factor to one leg of every term.
fn one_sided_apply(alg: &dyn Algebra, m: Map, e: &Element, other: &Index) -> Element {
    let o = Element::basis(other.clone());
    let mut out = Element::zero();
    for (l, c) in e.terms() {
        let (u, v) = l.split().expect("pair label");
        let (u, v) = (Element::basis(u.clone()), Element::basis(v.clone()));
        let t = match m {
            Map::T1 => Element::tensor(&u, &mul(alg, &v, &o)),
            Map::T2 => Element::tensor(&mul(alg, &o, &u), &v),
            Map::T3 => Element::tensor(&u, &mul(alg, &o, &v)),
            Map::T4 => Element::tensor(&mul(alg, &u, &o), &v),
        };
        out.add_scaled(&t, c);
    }
    out
}

pub fn show2(alg: &dyn Algebra, e: &Element) -> String {
    e.render(&|i| {
        let (a, b) = i.split().expect("pair label");
        format!("{}⊗{}", alg.label(a), alg.label(b))
    })
}

pub fn show3(alg: &dyn Algebra, e: &Element) -> String {
    e.render(&|i| {
        let (a, b, c) = i.split3().expect("triple label");
        format!("{}⊗{}⊗{}", alg.label(a), alg.label(b), alg.label(c))
    })
}

/// `Σ_{x⊗y} f(x)⊗y` with `f(x) ∈ A⊗A`, labelled as triples.
fn expand_first(e: &Element, mut f: impl FnMut(&Index) -> Result<Element, Error>) -> Result<Element, Error> {
    let mut out = Element::zero();
    for (l, c) in e.terms() {
        let (x, y) = l.split().expect("pair label");
        let fx = f(x)?;
        out.add_scaled(&Element::tensor(&fx, &Element::basis(y.clone())), c);
    }
    Ok(out)
}

/// `Σ_{u⊗v} u⊗f(v)` with `f(v) ∈ A⊗A`, labelled as triples.
fn expand_second(e: &Element, mut f: impl FnMut(&Index) -> Result<Element, Error>) -> Result<Element, Error> {
    let mut out = Element::zero();
    for (l, c) in e.terms() {
        let (u, v) = l.split().expect("pair label");
        for (w, d) in f(v)?.terms() {
            let (w1, w2) = w.split().expect("pair label");
            out.add_term(Index::triple(u, w1, w2), c * d);
        }
    }
    Ok(out)
}

impl Coproduct {
    pub fn new(rule: impl CoproductRule + 'static) -> Self {
        Coproduct::from_arc(Arc::new(rule))
    }

    pub fn from_arc(rule: Arc<dyn CoproductRule>) -> Self {
        let alg = rule.algebra();
        Coproduct { rule, alg, shells: Default::default(), tcache: Default::default() }
    }

    pub fn name(&self) -> String {
        self.rule.name()
    }

    pub fn algebra(&self) -> AlgebraRef {
        self.alg.clone()
    }

    pub fn rule(&self) -> &Arc<dyn CoproductRule> {
        &self.rule
    }

    fn size(&self, i: &Index) -> usize {
        self.alg.size(i)
    }

    fn pair_size(&self, l: &Index) -> usize {
        let (a, b) = l.split().expect("pair label");
        self.size(a) + self.size(b)
    }

    /// Shells `0..=upto` of `Δ(a)`.
    pub fn shells(&self, a: &Index, upto: usize) -> Arc<Vec<Element>> {
        let ft = {
            let mut cache = self.shells.lock().expect("shell cache");
            let entry = cache.entry(a.clone()).or_insert_with(|| (self.rule.delta(a), Arc::new(Vec::new())));
            if entry.1.len() > upto {
                return entry.1.clone();
            }
            entry.0.clone()
        };
        let have = self.shells.lock().expect("shell cache")[a].1.clone();
        let mut v: Vec<Element> = (*have).clone();
        for k in v.len()..=upto {
            v.push(ft.shell(k));
        }
        let v = Arc::new(v);
        self.shells.lock().expect("shell cache").get_mut(a).expect("entry").1 = v.clone();
        v
    }

    pub fn last_shell(&self, a: &Index) -> Option<usize> {
        self.rule.delta(a).last
    }

    fn window(&self, a: &Index, extra: usize) -> usize {
        let k = self.size(a) + extra + self.rule.slack();
        match self.last_shell(a) {
            Some(l) => k.min(l),
            None => k,
        }
    }

    /// `Δ(a)·t` for `t ∈ A⊗A`.
    pub fn act_left(&self, a: &Index, t: &Element) -> Element {
        let mut out = Element::zero();
        for (l, c) in t.terms() {
            if let Some(e) = self.rule.act(a, l, true) {
                out.add_scaled(&e, c);
                continue;
            }
            let k = self.window(a, self.pair_size(l));
            let sh = self.shells(a, k);
            let b = Element::basis(l.clone());
            for s in sh.iter().take(k + 1) {
                out.add_scaled(&tmul(&*self.alg, s, &b), c);
            }
        }
        out
    }

    /// `t·Δ(a)` for `t ∈ A⊗A`.
    pub fn act_right(&self, t: &Element, a: &Index) -> Element {
        let mut out = Element::zero();
        for (l, c) in t.terms() {
            if let Some(e) = self.rule.act(a, l, false) {
                out.add_scaled(&e, c);
                continue;
            }
            let k = self.window(a, self.pair_size(l));
            let sh = self.shells(a, k);
            let b = Element::basis(l.clone());
            for s in sh.iter().take(k + 1) {
                out.add_scaled(&tmul(&*self.alg, &b, s), c);
            }
        }
        out
    }

    /// Whether `Δ(a)` itself lies in `A⊗A`, probing `probe` shells past the
    /// first nonzero one.
    pub fn delta_finite(&self, a: &Index, probe: usize) -> OneSided {
        if let Some(l) = self.last_shell(a) {
            let sh = self.shells(a, l);
            let mut sum = Element::zero();
            for s in sh.iter().take(l + 1) {
                sum.add_scaled(s, &Scalar::one());
            }
            return OneSided::Finite(sum);
        }
        let k = self.size(a) + self.rule.slack();
        let sh = self.shells(a, k + probe);
        let nonzero = sh.iter().take(k + probe + 1).skip(k + 1).filter(|s| !s.is_zero()).count();
        if nonzero == probe {
            let family = self.rule.describe_delta(a).unwrap_or_else(|| {
                format!("nonzero in every probed shell beyond {k}; shell {}: {}", k + 1, show2(&*self.alg, &sh[k + 1]))
            });
            OneSided::Infinite(InfiniteWitness { family, verified: nonzero })
        } else if nonzero == 0 {
            let mut sum = Element::zero();
            for s in sh.iter().take(k + 1) {
                sum.add_scaled(s, &Scalar::one());
            }
            OneSided::Finite(sum)
        } else {
            OneSided::Unknown(format!("{nonzero} of {probe} probed shells nonzero"))
        }
    }

    /// `Δ(x)·t` for an element `x ∈ A`.
    pub fn act_left_elem(&self, x: &Element, t: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in x.terms() {
            out.add_scaled(&self.act_left(i, t), c);
        }
        out
    }

    pub fn act_right_elem(&self, t: &Element, x: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in x.terms() {
            out.add_scaled(&self.act_right(t, i), c);
        }
        out
    }

    /// `Δ(a)` as a multiplier of `A⊗A`.
    pub fn delta_multiplier(&self, a: &Index) -> Multiplier {
        let (me, me2, a1, a2) = (self.clone(), self.clone(), a.clone(), a.clone());
        let t: AlgebraRef = Arc::new(crate::algebra::TensorAlgebra::square(&self.alg));
        Multiplier::new(t, format!("Δ({})", self.alg.label(a)), move |x| me.act_left(&a1, x), move |y| me2.act_right(y, &a2))
    }

    /// Separator-based action path used to confirm a nonzero probe term.
    fn separated(&self, m: Map, a: &Index, other: &Index, u: &Index, v: &Index) -> Element {
        let alg = &*self.alg;
        let pick = |f: &dyn Fn(&Index) -> Option<Index>, i: &Index| f(i).unwrap_or_else(|| i.clone());
        match m {
            Map::T1 | Map::T4 => {
                let s = Element::basis(Index::pair(&pick(&|i| alg.left_unit_for(i), u), &pick(&|i| alg.left_unit_for(i), v)));
                one_sided_apply(alg, m, &self.act_right(&s, a), other)
            }
            Map::T2 | Map::T3 => {
                let s = Element::basis(Index::pair(&pick(&|i| alg.right_unit_for(i), u), &pick(&|i| alg.right_unit_for(i), v)));
                one_sided_apply(alg, m, &self.act_left(a, &s), other)
            }
        }
    }

    /// Canonical map on basis labels in the argument order of the map, without
    /// the consistency cross-check.
    pub fn t(&self, m: Map, x: &Index, y: &Index, probe: usize) -> OneSided {
        let key = (m, x.clone(), y.clone(), probe);
        if let Some(r) = self.tcache.lock().expect("t cache").get(&key) {
            return r.clone();
        }
        let r = self.t_uncached(m, x, y, probe);
        self.tcache.lock().expect("t cache").insert(key, r.clone());
        r
    }

    fn t_uncached(&self, m: Map, x: &Index, y: &Index, probe: usize) -> OneSided {
        if let Some(e) = self.rule.closed_form(m, x, y) {
            return OneSided::Finite(e);
        }
        let alg = &*self.alg;
        let (a, other) = m.args(x, y);
        let k = self.size(a) + self.size(other) + self.rule.slack();
        let last = self.last_shell(a);
        let upto = match last {
            Some(l) if l <= k => l,
            _ => k + probe,
        };
        let sh = self.shells(a, upto);
        let mut sum = Element::zero();
        for s in sh.iter().take(k.min(upto) + 1) {
            sum.add_scaled(&one_sided_apply(alg, m, s, other), &Scalar::one());
        }
        if upto <= k {
            return OneSided::Finite(sum);
        }
        let mut nonzero = Vec::new();
        for (j, s) in sh.iter().enumerate().take(upto + 1).skip(k + 1) {
            let r = one_sided_apply(alg, m, s, other);
            if !r.is_zero() {
                nonzero.push((j, r));
            }
        }
        if nonzero.is_empty() {
            return OneSided::Finite(sum);
        }
        let mut seps = BTreeSet::new();
        for (_, r) in &nonzero {
            let (l, _) = r.terms().next().expect("nonzero");
            let (u, v) = l.split().expect("pair label");
            if !self.separated(m, a, other, u, v).is_zero() {
                seps.insert(l.clone());
            }
        }
        if nonzero.len() == probe && seps.len() >= probe {
            let family = self.rule.family(m, x, y).unwrap_or_else(|| {
                let (j, r) = &nonzero[0];
                format!("nonzero in every probed shell beyond {k}; shell {j}: {}", show2(alg, r))
            });
            OneSided::Infinite(InfiniteWitness { family, verified: seps.len() })
        } else {
            OneSided::Unknown(format!(
                "{} of {probe} probed shells nonzero, {} confirmed by separators",
                nonzero.len(),
                seps.len()
            ))
        }
    }

    /// Canonical map with the result cross-checked against two-sided products.
    pub fn canonical_map(&self, m: Map, x: &Index, y: &Index, probe: usize) -> Result<OneSided, Error> {
        let r = self.t(m, x, y, probe);
        if let OneSided::Finite(e) = &r {
            self.cross_check(m, x, y, e)?;
        }
        Ok(r)
    }

    fn cross_check(&self, m: Map, x: &Index, y: &Index, e: &Element) -> Result<(), Error> {
        let alg = &*self.alg;
        let (a, other) = m.args(x, y);
        let mut legs: Vec<Index> = vec![a.clone(), other.clone()];
        for l in e.support() {
            let (u, v) = l.split().expect("pair label");
            legs.push(u.clone());
            legs.push(v.clone());
        }
        let seps = pool(alg, &legs);
        for s in &seps {
            for t in &seps {
                let st = Element::basis(Index::pair(s, t));
                let (via_oracle, via_actions) = match m {
                    Map::T1 | Map::T4 => (tmul(alg, &st, e), one_sided_apply(alg, m, &self.act_right(&st, a), other)),
                    Map::T2 | Map::T3 => (tmul(alg, e, &st), one_sided_apply(alg, m, &self.act_left(a, &st), other)),
                };
                if via_oracle != via_actions {
                    return Err(Error::OracleInconsistent(format!(
                        "{m}({}⊗{}) against {}⊗{}: {} vs {}",
                        alg.label(x),
                        alg.label(y),
                        alg.label(s),
                        alg.label(t),
                        show2(alg, &via_oracle),
                        show2(alg, &via_actions)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bilinear extension of a canonical map to elements; fails on the first
    /// basis pair whose image is not finite.
    pub fn t_elem(&self, m: Map, x: &Element, y: &Element, probe: usize) -> Result<Element, Error> {
        let mut out = Element::zero();
        for (i, c) in x.terms() {
            for (j, d) in y.terms() {
                match self.t(m, i, j, probe) {
                    OneSided::Finite(e) => out.add_scaled(&e, &(c * d)),
                    _ => {
                        return Err(Error::GateFailed {
                            gate: format!("{m} regularity"),
                            witness: format!("{m}({}⊗{}) is not in A⊗A", self.alg.label(i), self.alg.label(j)),
                        })
                    }
                }
            }
        }
        Ok(out)
    }

    fn tb(&self, m: Map, x: &Index, y: &Index, probe: usize) -> Result<Element, Error> {
        self.t_elem(m, &Element::basis(x.clone()), &Element::basis(y.clone()), probe)
    }

    /// The co-opposite coproduct `σ∘Δ`, computed from flipped shells only.
    pub fn flip(&self) -> Coproduct {
        Coproduct::new(Flipped(self.rule.clone()))
    }
}

struct Flipped(Arc<dyn CoproductRule>);

impl CoproductRule for Flipped {
    fn name(&self) -> String {
        format!("{} (co-opposite)", self.0.name())
    }
    fn algebra(&self) -> AlgebraRef {
        self.0.algebra()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        self.0.delta(a).flipped()
    }
    fn slack(&self) -> usize {
        self.0.slack()
    }
    fn act(&self, a: &Index, l: &Index, left: bool) -> Option<Element> {
        let fl = crate::algebra::TensorAlgebra::flip(&Element::basis(l.clone()));
        let fl = fl.support().next().expect("one label").clone();
        self.0.act(a, &fl, left).map(|e| crate::algebra::TensorAlgebra::flip(&e))
    }
    fn span_seeds(&self, legs: &[Index]) -> Vec<Index> {
        self.0.span_seeds(legs)
    }
}

/// Shells probed past a window when deciding finiteness.
pub fn probe_for(depth: usize) -> usize {
    depth.max(3)
}

fn require_depth(depth: usize) -> Result<(), Error> {
    if depth == 0 {
        Err(Error::InvalidDepth)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapStatus {
    Regular,
    NonRegular { x: Index, y: Index, family: String, verified: usize },
    UnknownToDepth(String),
}

impl MapStatus {
    pub fn is_regular(&self) -> bool {
        matches!(self, MapStatus::Regular)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MapStatus::Regular => "regular",
            MapStatus::NonRegular { .. } => "non-regular",
            MapStatus::UnknownToDepth(_) => "unknown-to-depth",
        }
    }
}

/// Coassociativity notions built from the canonical maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Definition {
    /// Needs `T₁`, `T₂`.
    T1T2,
    /// Needs `T₃`, `T₄`.
    T3T4,
    /// Mixed form with `T₁`, `T₄`.
    T1T4,
    /// Mixed form with `T₂`, `T₃`; the formula carries a doubt from its author.
    T2T3,
    /// Single regular map `T₁` plus the homomorphism property.
    SingleT1,
}

impl Definition {
    pub const ALL: [Definition; 5] = [Definition::T1T2, Definition::T3T4, Definition::T1T4, Definition::T2T3, Definition::SingleT1];

    pub fn maps(self) -> &'static [Map] {
        match self {
            Definition::T1T2 => &[Map::T1, Map::T2],
            Definition::T3T4 => &[Map::T3, Map::T4],
            Definition::T1T4 => &[Map::T1, Map::T4],
            Definition::T2T3 => &[Map::T2, Map::T3],
            Definition::SingleT1 => &[Map::T1],
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Definition::T1T2 => "T1T2",
            Definition::T3T4 => "T3T4",
            Definition::T1T4 => "mixed_T1T4",
            Definition::T2T3 => "mixed_T2T3",
            Definition::SingleT1 => "single_T1",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub depth: usize,
    pub maps: BTreeMap<Map, MapStatus>,
}

impl RegularityReport {
    pub fn status(&self, m: Map) -> &MapStatus {
        &self.maps[&m]
    }

    pub fn regular(&self, m: Map) -> bool {
        self.maps[&m].is_regular()
    }

    /// Whether the maps needed by a definition are all regular; `SingleT1`
    /// additionally needs the homomorphism property, checked separately.
    pub fn formulable(&self, d: Definition) -> bool {
        d.maps().iter().all(|m| self.regular(*m))
    }
}

/// Classifies one canonical map over all swept pairs.
pub fn map_status(cp: &Coproduct, m: Map, depth: usize) -> MapStatus {
    let basis = sweep_basis(&*cp.alg, depth);
    let probe = probe_for(depth);
    let mut unknown = None;
    for x in &basis {
        for y in &basis {
            match cp.t(m, x, y, probe) {
                OneSided::Finite(_) => {}
                OneSided::Infinite(w) => {
                    return MapStatus::NonRegular { x: x.clone(), y: y.clone(), family: w.family, verified: w.verified }
                }
                OneSided::Unknown(r) => {
                    unknown.get_or_insert_with(|| format!("{m}({}⊗{}): {r}", cp.alg.label(x), cp.alg.label(y)));
                }
            }
        }
    }
    match unknown {
        Some(r) => MapStatus::UnknownToDepth(r),
        None => MapStatus::Regular,
    }
}

pub fn regularity_report(cp: &Coproduct, depth: usize) -> Result<RegularityReport, Error> {
    require_depth(depth)?;
    let maps = Map::ALL.iter().map(|m| (*m, map_status(cp, *m, depth))).collect();
    Ok(RegularityReport { depth, maps })
}

fn gate(cp: &Coproduct, maps: &[Map], depth: usize) -> Option<Verdict> {
    for m in maps {
        let s = map_status(cp, *m, depth);
        if !s.is_regular() {
            return Some(Verdict::PreconditionNotMet(format!("{m} is {}", s.name())));
        }
    }
    None
}

fn exact(cp: &Coproduct) -> bool {
    crate::algebra::is_finite(&*cp.alg)
}

/// `Σ_{x⊗y∈F(a⊗b)} G(c⊗x)⊗y = Σ_{u⊗v∈G(c⊗a)} u⊗F(v⊗b)` over swept triples.
fn triple_identity(cp: &Coproduct, f: Map, g: Map, depth: usize) -> Result<Verdict, Error> {
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let probe = probe_for(depth);
    for a in &basis {
        for b in &basis {
            let fab = cp.tb(f, a, b, probe)?;
            for c in &basis {
                let lhs = expand_first(&fab, |x| cp.tb(g, c, x, probe))?;
                let gca = cp.tb(g, c, a, probe)?;
                let rhs = expand_second(&gca, |v| cp.tb(f, v, b, probe))?;
                if lhs != rhs {
                    let (l, r) = (show3(alg, &lhs), show3(alg, &rhs));
                    return Ok(Verdict::FailsWithWitness(Witness::element(
                        format!("a = {}, b = {}, c = {}: {l} vs {r}", alg.label(a), alg.label(b), alg.label(c)),
                        lhs.sub(&rhs),
                    )));
                }
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// `(c⊗1⊗1)(Δ⊗ι)(Δ(a)(1⊗b)) = (ι⊗Δ)((c⊗1)Δ(a))(1⊗1⊗b)`.
pub fn check_coassoc_t1t2(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Some(v) = gate(cp, &[Map::T1, Map::T2], depth) {
        return Ok(v);
    }
    triple_identity(cp, Map::T1, Map::T2, depth)
}

/// `(Δ⊗ι)((1⊗b)Δ(a))(c⊗1⊗1) = (1⊗1⊗b)(ι⊗Δ)(Δ(a)(c⊗1))`.
pub fn check_coassoc_t3t4(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Some(v) = gate(cp, &[Map::T3, Map::T4], depth) {
        return Ok(v);
    }
    triple_identity(cp, Map::T3, Map::T4, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mixed {
    T1T4,
    /// Implemented as displayed although its author marked it as doubtful.
    T2T3,
}

pub fn check_coassoc_mixed(cp: &Coproduct, variant: Mixed, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let (f, g) = match variant {
        Mixed::T1T4 => (Map::T1, Map::T4),
        Mixed::T2T3 => (Map::T3, Map::T2),
    };
    if let Some(v) = gate(cp, &[f, g], depth) {
        return Ok(v);
    }
    triple_identity(cp, f, g, depth)
}

/// One regular map plus the homomorphism property:
/// `Σ_{x⊗y∈T₁(a⊗p)} x⊗T₁(y⊗q) = Σᵢ Σ_{u⊗v∈T₁(a⊗cᵢ)} T₁(u⊗bᵢ)⊗v`
/// where `T₁(p⊗q) = Σᵢ bᵢ⊗cᵢ`.
pub fn check_coassoc_single_t1(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Some(v) = gate(cp, &[Map::T1], depth) {
        return Ok(v);
    }
    if let Verdict::FailsWithWitness(w) = check_homomorphism(cp, depth)? {
        return Err(Error::NotHomomorphism(w.text));
    }
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let probe = probe_for(depth);
    for p in &basis {
        for q in &basis {
            let tpq = cp.tb(Map::T1, p, q, probe)?;
            for a in &basis {
                let tap = cp.tb(Map::T1, a, p, probe)?;
                let lhs = expand_second(&tap, |y| cp.tb(Map::T1, y, q, probe))?;
                let mut rhs = Element::zero();
                for (l, w) in tpq.terms() {
                    let (bi, ci) = l.split().expect("pair label");
                    let taci = cp.tb(Map::T1, a, ci, probe)?;
                    rhs.add_scaled(&expand_first(&taci, |u| cp.tb(Map::T1, u, bi, probe))?, w);
                }
                if lhs != rhs {
                    return Ok(Verdict::FailsWithWitness(Witness::element(
                        format!(
                            "a = {}, p = {}, q = {}: {} vs {}",
                            alg.label(a),
                            alg.label(p),
                            alg.label(q),
                            show3(alg, &lhs),
                            show3(alg, &rhs)
                        ),
                        lhs.sub(&rhs),
                    )));
                }
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// Labels of `A⊗A` swept at a depth: pairs of swept labels of `A`.
pub fn pair_basis(alg: &dyn Algebra, depth: usize) -> Vec<Index> {
    let b = sweep_basis(alg, depth);
    b.iter().flat_map(|x| b.iter().map(move |y| Index::pair(x, y))).collect()
}

/// `Δ(a)Δ(b) = Δ(ab)` on left and right actions against swept labels of `A⊗A`.
pub fn check_homomorphism(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let targets = pair_basis(alg, depth);
    for a in &basis {
        for b in &basis {
            let ab = alg.product(a, b);
            for t in &targets {
                let te = Element::basis(t.clone());
                let lhs = cp.act_left(a, &cp.act_left(b, &te));
                let rhs = cp.act_left_elem(&ab, &te);
                let lhs2 = cp.act_right(&cp.act_right(&te, a), b);
                let rhs2 = cp.act_right_elem(&te, &ab);
                if lhs != rhs || lhs2 != rhs2 {
                    let (l, r) = if lhs != rhs { (lhs, rhs) } else { (lhs2, rhs2) };
                    let (ls, rs) = (show2(alg, &l), show2(alg, &r));
                    return Ok(Verdict::fail(format!(
                        "Δ({})Δ({}) ≠ Δ({}) acting on {}: {ls} vs {rs}",
                        alg.label(a),
                        alg.label(b),
                        crate::algebra::show(alg, &ab),
                        show2(alg, &te)
                    )));
                }
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounitVariant {
    /// `(ε⊗ι)(Δ(a)(1⊗c)) = ac` and `(ι⊗ε)((c⊗1)Δ(a)) = ca`.
    T1T2,
    /// `(ε⊗ι)((1⊗c)Δ(a)) = ca` and `(ι⊗ε)(Δ(a)(c⊗1)) = ac`.
    T3T4,
}

impl CounitVariant {
    pub fn key(self) -> &'static str {
        match self {
            CounitVariant::T1T2 => "T1T2",
            CounitVariant::T3T4 => "T3T4",
        }
    }

    /// `(map, ε on first leg?, product order ac?)` for the two laws.
    fn laws(self) -> [(Map, bool, bool); 2] {
        match self {
            CounitVariant::T1T2 => [(Map::T1, true, true), (Map::T2, false, false)],
            CounitVariant::T3T4 => [(Map::T3, true, false), (Map::T4, false, true)],
        }
    }
}

/// `(ε⊗ι)` or `(ι⊗ε)` of an element of `A⊗A`.
pub fn slice_with(e: &Element, f: &Functional, first: bool) -> Element {
    let mut out = Element::zero();
    for (l, c) in e.terms() {
        let (u, v) = l.split().expect("pair label");
        let (on, keep) = if first { (u, v) } else { (v, u) };
        let w = f.at(on);
        if !w.is_zero() {
            out.add_term(keep.clone(), c * &w);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CounitReport {
    pub variant: CounitVariant,
    pub laws: Verdict,
    pub homomorphism: Verdict,
}

fn law_args(m: Map, a: &Index, c: &Index) -> (Index, Index) {
    match m {
        Map::T1 | Map::T3 => (a.clone(), c.clone()),
        Map::T2 | Map::T4 => (c.clone(), a.clone()),
    }
}

pub fn check_counit(cp: &Coproduct, eps: &Functional, variant: CounitVariant, depth: usize) -> Result<CounitReport, Error> {
    require_depth(depth)?;
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let homomorphism = counit_homomorphism(alg, eps, &basis, exact(cp), depth);
    let maps: Vec<Map> = variant.laws().iter().map(|l| l.0).collect();
    if let Some(v) = gate(cp, &maps, depth) {
        return Ok(CounitReport { variant, laws: v, homomorphism });
    }
    let probe = probe_for(depth);
    for (m, first, ac) in variant.laws() {
        for a in &basis {
            for c in &basis {
                let (x, y) = law_args(m, a, c);
                let lhs = slice_with(&cp.tb(m, &x, &y, probe)?, eps, first);
                let rhs = if ac { alg.product(a, c) } else { alg.product(c, a) };
                if lhs != rhs {
                    let laws = Verdict::fail(format!(
                        "{m} law at a = {}, c = {}: {} vs {}",
                        alg.label(a),
                        alg.label(c),
                        crate::algebra::show(alg, &lhs),
                        crate::algebra::show(alg, &rhs)
                    ));
                    return Ok(CounitReport { variant, laws, homomorphism });
                }
            }
        }
    }
    Ok(CounitReport { variant, laws: Verdict::pass(exact(cp), depth), homomorphism })
}

fn counit_homomorphism(alg: &dyn Algebra, eps: &Functional, basis: &[Index], exact: bool, depth: usize) -> Verdict {
    for a in basis {
        for b in basis {
            let lhs = eps.eval(&alg.product(a, b));
            let rhs = eps.at(a) * eps.at(b);
            if lhs != rhs {
                return Verdict::fail(format!(
                    "ε({}{}) = {lhs} ≠ {rhs} = ε({})ε({})",
                    alg.label(a),
                    alg.label(b),
                    alg.label(a),
                    alg.label(b)
                ));
            }
        }
    }
    Verdict::pass(exact, depth)
}

#[derive(Clone, Debug)]
pub enum CounitSolution {
    Solution {
        eps: Functional,
        /// Free parameters among the values that the laws constrain.
        nullity: usize,
        /// The laws used, e.g. `["T1"]` when only the left law is formulable.
        laws: Vec<Map>,
    },
    NoSolution {
        certificate: String,
        laws: Vec<Map>,
    },
}

/// Solves the counit laws of a variant as linear equations in the values of
/// `ε`; laws whose map is not regular are dropped, and the caller sees which
/// laws were used.
pub fn solve_counit(cp: &Coproduct, variant: CounitVariant, depth: usize) -> Result<CounitSolution, Error> {
    require_depth(depth)?;
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let probe = probe_for(depth);
    let laws: Vec<(Map, bool, bool)> =
        variant.laws().into_iter().filter(|(m, _, _)| map_status(cp, *m, depth).is_regular()).collect();
    let used: Vec<Map> = laws.iter().map(|l| l.0).collect();
    if laws.is_empty() {
        return Ok(CounitSolution::NoSolution { certificate: "no counit law is formulable".into(), laws: used });
    }
    let mut unknowns: Vec<Index> = Vec::new();
    let mut pos: BTreeMap<Index, usize> = BTreeMap::new();
    let mut eqs: BTreeMap<(Map, Index, Index, Index), (Element, Scalar)> = BTreeMap::new();
    for (m, first, ac) in &laws {
        for a in &basis {
            for c in &basis {
                let (x, y) = law_args(*m, a, c);
                let t = cp.tb(*m, &x, &y, probe)?;
                let rhs = if *ac { alg.product(a, c) } else { alg.product(c, a) };
                let mut rows: BTreeMap<Index, Element> = BTreeMap::new();
                for (l, coef) in t.terms() {
                    let (u, v) = l.split().expect("pair label");
                    let (on, keep) = if *first { (u, v) } else { (v, u) };
                    let k = *pos.entry(on.clone()).or_insert_with(|| {
                        unknowns.push(on.clone());
                        unknowns.len() - 1
                    });
                    rows.entry(keep.clone()).or_default().add_term(var(k), coef.clone());
                }
                let outs: BTreeSet<Index> = rows.keys().cloned().chain(rhs.support().cloned()).collect();
                for o in outs {
                    let row = rows.get(&o).cloned().unwrap_or_default();
                    eqs.insert((*m, a.clone(), c.clone(), o.clone()), (row, rhs.coeff(&o)));
                }
            }
        }
    }
    let keys: Vec<_> = eqs.keys().cloned().collect();
    let system: Vec<(Element, Scalar)> = eqs.into_values().collect();
    match solve(&system, unknowns.len()) {
        Solve::Solution { x, nullity } => {
            let values = Element::from_terms(x.terms().map(|(v, c)| {
                let Index::Int(k) = v else { unreachable!() };
                (unknowns[*k as usize].clone(), c.clone())
            }));
            let alg2 = cp.alg.clone();
            let eps = Functional::table("ε", values, move |i| alg2.size(i));
            Ok(CounitSolution::Solution { eps, nullity, laws: used })
        }
        Solve::Inconsistent { certificate } => {
            let parts: Vec<String> = certificate
                .iter()
                .take(6)
                .map(|(k, c)| {
                    let (m, a, cc, o) = &keys[*k];
                    format!("({c})·[{m} law at a = {}, c = {}, coefficient of {}]", alg.label(a), alg.label(cc), alg.label(o))
                })
                .collect();
            Ok(CounitSolution::NoSolution { certificate: format!("{} reads 0 = 1", parts.join(" + ")), laws: used })
        }
    }
}

/// Span of `(ι⊗f)` or `(f⊗ι)` slices of the given elements over coordinate functionals.
fn leg_span(outs: &[Element], first: bool) -> SpanBasis {
    let mut span = SpanBasis::new();
    for e in outs {
        let mut by_other: BTreeMap<Index, Element> = BTreeMap::new();
        for (l, c) in e.terms() {
            let (u, v) = l.split().expect("pair label");
            let (keep, on) = if first { (u, v) } else { (v, u) };
            by_other.entry(on.clone()).or_default().add_term(keep.clone(), c.clone());
        }
        for v in by_other.values() {
            span.insert(v);
        }
    }
    span
}

#[derive(Clone, Debug)]
pub struct LegVerdict {
    pub verdict: Verdict,
    /// Which products the leg was read from, e.g. `"T1"` or `"two-sided"`.
    pub method: String,
}

#[derive(Clone, Debug)]
pub struct FullnessReport {
    /// First tensor leg.
    pub left: LegVerdict,
    /// Second tensor leg.
    pub right: LegVerdict,
}

impl FullnessReport {
    pub fn full(&self) -> bool {
        self.left.verdict.holds() && self.right.verdict.holds()
    }
}

/// Generators are drawn from this many times the swept labels, so that a
/// basis vector near the edge of the sweep can be reached through partners
/// beyond it.
const FULLNESS_WINDOW: usize = 3;

/// Leg spans of `Δ`. The first leg is read from `T₁` or `T₃`, the second from
/// `T₂` or `T₄`. When neither map of a leg is regular the leg is read from
/// two-sided products `Δ(a)(c⊗d)` instead and the method says so.
pub fn check_fullness(cp: &Coproduct, depth: usize) -> Result<FullnessReport, Error> {
    require_depth(depth)?;
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let gens = pool(alg, &sweep_basis(alg, FULLNESS_WINDOW * depth));
    let probe = probe_for(depth);
    let mut legs = Vec::new();
    for (first, maps) in [(true, [Map::T1, Map::T3]), (false, [Map::T2, Map::T4])] {
        let usable = maps.iter().copied().find(|m| map_status(cp, *m, depth).is_regular());
        let mut outs = Vec::new();
        let method = match usable {
            Some(m) => {
                for a in &gens {
                    for c in &gens {
                        let (x, y) = law_args(m, a, c);
                        outs.push(cp.tb(m, &x, &y, probe)?);
                    }
                }
                m.to_string()
            }
            None => {
                for a in &basis {
                    for c in &gens {
                        for d in &gens {
                            let t = Element::basis(Index::pair(c, d));
                            outs.push(cp.act_left(a, &t));
                            outs.push(cp.act_right(&t, a));
                        }
                    }
                }
                "two-sided".to_string()
            }
        };
        let span = leg_span(&outs, first);
        let miss = basis.iter().find(|i| !span.contains(&Element::basis((*i).clone())));
        let verdict = match miss {
            Some(i) => Verdict::FailsWithWitness(Witness::element(
                format!("{} is not in the {} leg", alg.label(i), if first { "first" } else { "second" }),
                Element::basis(i.clone()),
            )),
            None => Verdict::pass(exact(cp), depth),
        };
        legs.push(LegVerdict { verdict, method });
    }
    let right = legs.pop().expect("two legs");
    let left = legs.pop().expect("two legs");
    Ok(FullnessReport { left, right })
}

/// The idempotent `E` with `Δ(A)(A⊗A) = E(A⊗A)`.
#[derive(Clone, Debug)]
pub enum Idempotent {
    One,
    Formal(FormalTensor),
}

impl Idempotent {
    pub fn act_left(&self, cp: &Coproduct, t: &Element) -> Element {
        match self {
            Idempotent::One => t.clone(),
            Idempotent::Formal(f) => formal_act(cp, f, t, true),
        }
    }

    pub fn act_right(&self, cp: &Coproduct, t: &Element) -> Element {
        match self {
            Idempotent::One => t.clone(),
            Idempotent::Formal(f) => formal_act(cp, f, t, false),
        }
    }

    pub fn multiplier(&self, cp: &Coproduct) -> Multiplier {
        let t: AlgebraRef = Arc::new(crate::algebra::TensorAlgebra::square(&cp.alg));
        let (e1, e2, c1, c2) = (self.clone(), self.clone(), cp.clone(), cp.clone());
        Multiplier::new(t, "E", move |x| e1.act_left(&c1, x), move |y| e2.act_right(&c2, y))
    }
}

fn formal_act(cp: &Coproduct, f: &FormalTensor, t: &Element, left: bool) -> Element {
    let alg = &*cp.alg;
    let mut out = Element::zero();
    for (l, c) in t.terms() {
        let mut k = cp.pair_size(l) + cp.rule.slack();
        if let Some(last) = f.last {
            k = k.min(last);
        }
        let b = Element::basis(l.clone());
        for j in 0..=k {
            let s = f.shell(j);
            let p = if left { tmul(alg, &s, &b) } else { tmul(alg, &b, &s) };
            out.add_scaled(&p, c);
        }
    }
    out
}

/// A generator `Δ(c)(a⊗b)` or `(a⊗b)Δ(c)`.
type Gen = (Index, Index, Index);

/// Local span solver for `Δ(A)(A⊗A)` (left) or `(A⊗A)Δ(A)` (right).
pub struct DeltaSpan<'a> {
    cp: &'a Coproduct,
    left: bool,
    cache: HashMap<Vec<Index>, (SpanBasis, Vec<Gen>)>,
}

impl<'a> DeltaSpan<'a> {
    pub fn new(cp: &'a Coproduct, left: bool) -> Self {
        DeltaSpan { cp, left, cache: HashMap::new() }
    }

    pub fn generator(&self, g: &Gen) -> Element {
        let (c, a, b) = g;
        let t = Element::basis(Index::pair(a, b));
        if self.left {
            self.cp.act_left(c, &t)
        } else {
            self.cp.act_right(&t, c)
        }
    }

    fn local(&mut self, firsts: Vec<Index>, seconds: Vec<Index>) -> &(SpanBasis, Vec<Gen>) {
        let key: Vec<Index> = firsts.iter().cloned().chain([Index::Int(i64::MIN)]).chain(seconds.iter().cloned()).collect();
        if !self.cache.contains_key(&key) {
            let alg = &*self.cp.alg;
            let legs: Vec<Index> = firsts.iter().chain(seconds.iter()).cloned().collect();
            let cs = self.cp.rule.span_seeds(&legs);
            let (pa, pb) = (pool(alg, &firsts), pool(alg, &seconds));
            let mut span = SpanBasis::new();
            let mut gens = Vec::new();
            for c in &cs {
                for a in &pa {
                    for b in &pb {
                        let g = (c.clone(), a.clone(), b.clone());
                        let v = self.generator(&g);
                        if !v.is_zero() {
                            span.insert(&v);
                            gens.push(g);
                        }
                    }
                }
            }
            self.cache.insert(key.clone(), (span, gens));
        }
        &self.cache[&key]
    }

    /// Writes `v ∈ A⊗A` as a combination of generators over its legs.
    pub fn express(&mut self, v: &Element) -> Option<Vec<(Scalar, Gen)>> {
        if v.is_zero() {
            return Some(Vec::new());
        }
        let mut firsts: Vec<Index> = v.support().map(|l| l.split().expect("pair label").0.clone()).collect();
        let mut seconds: Vec<Index> = v.support().map(|l| l.split().expect("pair label").1.clone()).collect();
        for legs in [&mut firsts, &mut seconds] {
            legs.sort();
            legs.dedup();
        }
        let (span, gens) = self.local(firsts, seconds);
        let combo = span.express(v)?;
        Some(combo.into_iter().map(|(k, c)| (c, gens[k].clone())).collect())
    }

    pub fn contains(&mut self, v: &Element) -> bool {
        self.express(v).is_some()
    }
}

/// `Δ(A)(A⊗A) = A⊗A = (A⊗A)Δ(A)` on swept labels of `A⊗A`.
pub fn check_nondegenerate_coproduct(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Verdict::FailsWithWitness(w) = check_homomorphism(cp, depth)? {
        return Err(Error::NotHomomorphism(w.text));
    }
    span_equality(cp, &Idempotent::One, depth)
}

fn span_equality(cp: &Coproduct, e: &Idempotent, depth: usize) -> Result<Verdict, Error> {
    let alg = &*cp.alg;
    for left in [true, false] {
        let mut span = DeltaSpan::new(cp, left);
        for t in pair_basis(alg, depth) {
            let te = Element::basis(t.clone());
            let target = if left { e.act_left(cp, &te) } else { e.act_right(cp, &te) };
            if !span.contains(&target) {
                let side = if left { "Δ(A)(A⊗A)" } else { "(A⊗A)Δ(A)" };
                return Ok(Verdict::FailsWithWitness(Witness::element(
                    format!("{} is not in {side}", show2(alg, &target)),
                    target,
                )));
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// `E² = E`, `EΔ(a) = Δ(a) = Δ(a)E`, and `Δ(A)(A⊗A) = E(A⊗A)` with its mirror.
pub fn check_weak_nondegeneracy(cp: &Coproduct, e: &Idempotent, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Verdict::FailsWithWitness(w) = check_homomorphism(cp, depth)? {
        return Err(Error::NotHomomorphism(w.text));
    }
    let alg = &*cp.alg;
    let targets = pair_basis(alg, depth);
    for t in &targets {
        let te = Element::basis(t.clone());
        let et = e.act_left(cp, &te);
        if e.act_left(cp, &et) != et {
            return Ok(Verdict::fail(format!("E·E ≠ E on {}", show2(alg, &te))));
        }
        let te2 = e.act_right(cp, &te);
        if e.act_right(cp, &te2) != te2 {
            return Ok(Verdict::fail(format!("E·E ≠ E on the right of {}", show2(alg, &te))));
        }
        for a in sweep_basis(alg, depth) {
            let d = cp.act_left(&a, &te);
            if e.act_left(cp, &d) != d {
                return Ok(Verdict::fail(format!("EΔ({}) ≠ Δ({}) on {}", alg.label(&a), alg.label(&a), show2(alg, &te))));
            }
            if cp.act_left(&a, &e.act_left(cp, &te)) != d {
                return Ok(Verdict::fail(format!("Δ({})E ≠ Δ({}) on {}", alg.label(&a), alg.label(&a), show2(alg, &te))));
            }
        }
    }
    span_equality(cp, e, depth)
}

/// Unit-law check of a candidate `E` against the multiplier `1⊗1`: whether it
/// acts as the identity on swept labels.
pub fn idempotent_is_one(cp: &Coproduct, e: &Idempotent, depth: usize) -> bool {
    pair_basis(&*cp.alg, depth).iter().all(|t| {
        let te = Element::basis(t.clone());
        e.act_left(cp, &te) == te && e.act_right(cp, &te) == te
    })
}

/// The extension `Δ₁` of `Δ` to a multiplier `m` of `A`, evaluated through
/// span solves in `Δ(A)(A⊗A)` (or `E(A⊗A)`).
pub struct Extension<'a> {
    cp: &'a Coproduct,
    m: Multiplier,
    e: Idempotent,
    left: DeltaSpan<'a>,
    right: DeltaSpan<'a>,
}

impl<'a> Extension<'a> {
    pub fn new(cp: &'a Coproduct, m: Multiplier, e: Idempotent) -> Self {
        Extension { cp, m, e, left: DeltaSpan::new(cp, true), right: DeltaSpan::new(cp, false) }
    }

    /// `Δ₁(m)·t`
    pub fn act_left(&mut self, t: &Element) -> Result<Element, Error> {
        let target = self.e.act_left(self.cp, t);
        let combo = self.left.express(&target).ok_or_else(|| {
            Error::SpanSolveFailed(format!("{} is not reached at this depth", show2(&*self.cp.alg, &target)))
        })?;
        let mut out = Element::zero();
        for (c, (g, a, b)) in combo {
            let mg = self.m.left(&Element::basis(g));
            out.add_scaled(&self.cp.act_left_elem(&mg, &Element::basis(Index::pair(&a, &b))), &c);
        }
        Ok(out)
    }

    /// `t·Δ₁(m)`
    pub fn act_right(&mut self, t: &Element) -> Result<Element, Error> {
        let target = self.e.act_right(self.cp, t);
        let combo = self.right.express(&target).ok_or_else(|| {
            Error::SpanSolveFailed(format!("{} is not reached at this depth", show2(&*self.cp.alg, &target)))
        })?;
        let mut out = Element::zero();
        for (c, (g, a, b)) in combo {
            let gm = self.m.right(&Element::basis(g));
            out.add_scaled(&self.cp.act_right_elem(&Element::basis(Index::pair(&a, &b)), &gm), &c);
        }
        Ok(out)
    }
}

pub fn extend_to_m<'a>(cp: &'a Coproduct, m: Multiplier, e: Option<Idempotent>) -> Extension<'a> {
    Extension::new(cp, m, e.unwrap_or(Idempotent::One))
}

/// Whether `Δ₁(m)` acts like `expected` on all swept labels of `A⊗A`.
pub fn extension_matches(ext: &mut Extension<'_>, expected: &Multiplier, depth: usize) -> Result<Verdict, Error> {
    let alg = ext.cp.alg.clone();
    for t in pair_basis(&*alg, depth) {
        let te = Element::basis(t.clone());
        let (l, r) = (ext.act_left(&te)?, ext.act_right(&te)?);
        let (el, er) = (expected.left(&te), expected.right(&te));
        if l != el || r != er {
            return Ok(Verdict::fail(format!(
                "Δ₁({}) differs from {} on {}: {} vs {}",
                ext.m.label,
                expected.label,
                show2(&*alg, &te),
                show2(&*alg, if l != el { &l } else { &r }),
                show2(&*alg, if l != el { &el } else { &er })
            )));
        }
    }
    Ok(Verdict::pass(crate::algebra::is_finite(&*alg), depth))
}

/// `(Δ⊗ι)Δ(e) = (ι⊗Δ)Δ(e)` compared through left and right actions on swept
/// simple tensors, with the extensions evaluated by span solves.
pub fn check_coassoc_extension(cp: &Coproduct, e: &Idempotent, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Verdict::FailsWithWitness(w) = check_homomorphism(cp, depth)? {
        return Ok(Verdict::PreconditionNotMet(format!("not a homomorphism: {}", w.text)));
    }
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let mut lspan = DeltaSpan::new(cp, true);
    let mut rspan = DeltaSpan::new(cp, false);
    let mut lsolved: HashMap<(Index, Index), Vec<(Scalar, Gen)>> = HashMap::new();
    let mut rsolved: HashMap<(Index, Index), Vec<(Scalar, Gen)>> = HashMap::new();
    let mut solve_for = |left: bool, x: &Index, y: &Index| -> Result<Vec<(Scalar, Gen)>, Error> {
        let (store, span) = if left { (&mut lsolved, &mut lspan) } else { (&mut rsolved, &mut rspan) };
        if let Some(v) = store.get(&(x.clone(), y.clone())) {
            return Ok(v.clone());
        }
        let te = Element::basis(Index::pair(x, y));
        let target = if left { e.act_left(cp, &te) } else { e.act_right(cp, &te) };
        let combo = span.express(&target).ok_or_else(|| {
            Error::SpanSolveFailed(format!("{} is not reached at depth {depth}", show2(alg, &target)))
        })?;
        store.insert((x.clone(), y.clone()), combo.clone());
        Ok(combo)
    };
    for a in &basis {
        for x in &basis {
            for y in &basis {
                let lxy = solve_for(true, x, y)?;
                let rxy = solve_for(false, x, y)?;
                for z in &basis {
                    let lyz = solve_for(true, y, z)?;
                    let ryz = solve_for(false, y, z)?;
                    let zb = Element::basis(z.clone());
                    let xb = Element::basis(x.clone());
                    // left actions
                    let mut lhs = Element::zero();
                    for (lam, (c, p, q)) in &lxy {
                        let d = cp.act_left(a, &Element::tensor(&Element::basis(c.clone()), &zb));
                        let pq = Element::basis(Index::pair(p, q));
                        lhs.add_scaled(&expand_first(&d, |w| Ok(cp.act_left(w, &pq)))?, lam);
                    }
                    let mut rhs = Element::zero();
                    for (mu, (c, p, q)) in &lyz {
                        let d = cp.act_left(a, &Element::tensor(&xb, &Element::basis(c.clone())));
                        let pq = Element::basis(Index::pair(p, q));
                        rhs.add_scaled(&expand_second(&d, |v| Ok(cp.act_left(v, &pq)))?, mu);
                    }
                    // right actions
                    let mut lhs2 = Element::zero();
                    for (lam, (c, p, q)) in &rxy {
                        let d = cp.act_right(&Element::tensor(&Element::basis(c.clone()), &zb), a);
                        let pq = Element::basis(Index::pair(p, q));
                        lhs2.add_scaled(&expand_first(&d, |w| Ok(cp.act_right(&pq, w)))?, lam);
                    }
                    let mut rhs2 = Element::zero();
                    for (mu, (c, p, q)) in &ryz {
                        let d = cp.act_right(&Element::tensor(&xb, &Element::basis(c.clone())), a);
                        let pq = Element::basis(Index::pair(p, q));
                        rhs2.add_scaled(&expand_second(&d, |v| Ok(cp.act_right(&pq, v)))?, mu);
                    }
                    if lhs != rhs || lhs2 != rhs2 {
                        let (side, l, r) = if lhs != rhs { ("left", lhs, rhs) } else { ("right", lhs2, rhs2) };
                        return Ok(Verdict::FailsWithWitness(Witness::element(
                            format!(
                                "{side} action of Δ({}) on {}⊗{}⊗{}: {} vs {}",
                                alg.label(a),
                                alg.label(x),
                                alg.label(y),
                                alg.label(z),
                                show3(alg, &l),
                                show3(alg, &r)
                            ),
                            l.sub(&r),
                        )));
                    }
                }
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// Whether the range of a canonical map, fed with pool inputs, contains every
/// swept label of `A⊗A`. A rank statement on the truncation.
pub fn check_surjective(cp: &Coproduct, m: Map, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    if let Some(v) = gate(cp, &[m], depth) {
        return Ok(v);
    }
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let gens = pool(alg, &basis);
    let probe = probe_for(depth);
    let mut span = SpanBasis::new();
    for x in &gens {
        for y in &gens {
            span.insert(&cp.tb(m, x, y, probe)?);
        }
    }
    for t in pair_basis(alg, depth) {
        let te = Element::basis(t);
        if !span.contains(&te) {
            return Ok(Verdict::fail(format!("{} is not in the range of {m}", show2(alg, &te))));
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// Swept-pair consistency of every finite canonical map with the two-sided actions.
pub fn check_oracle_consistency(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let basis = sweep_basis(&*cp.alg, depth);
    let probe = probe_for(depth);
    for m in Map::ALL {
        for x in &basis {
            for y in &basis {
                if let Err(Error::OracleInconsistent(w)) = cp.canonical_map(m, x, y, probe) {
                    return Ok(Verdict::fail(w));
                }
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

fn star(alg: &dyn Algebra, e: &Element) -> Option<Element> {
    let mut out = Element::zero();
    for (l, c) in e.terms() {
        let (u, v) = l.split().expect("pair label");
        let t = Element::tensor(&alg.involution(u)?, &alg.involution(v)?);
        out.add_scaled(&t, &c.conj());
    }
    Some(out)
}

/// `Δ(x*) = Δ(x)*` on actions: `Δ(x*)·t = (t*·Δ(x))*` for swept `x`, `t`.
pub fn check_involution(cp: &Coproduct, depth: usize) -> Result<Verdict, Error> {
    require_depth(depth)?;
    let alg = &*cp.alg;
    let basis = sweep_basis(alg, depth);
    let targets = pair_basis(alg, depth);
    for x in &basis {
        let Some(xs) = alg.involution(x) else {
            return Ok(Verdict::PreconditionNotMet(format!("no involution on {}", alg.name())));
        };
        let xs = Element::from_terms(xs.terms().map(|(i, c)| (i.clone(), c.conj())));
        for t in &targets {
            let te = Element::basis(t.clone());
            let Some(ts) = star(alg, &te) else {
                return Ok(Verdict::PreconditionNotMet(format!("{} has no adjoint in {}", show2(alg, &te), alg.name())));
            };
            let lhs = cp.act_left_elem(&xs, &te);
            let rhs = star(alg, &cp.act_right(&ts, x)).expect("involution");
            if lhs != rhs {
                return Ok(Verdict::fail(format!(
                    "Δ({}*)·{} = {} but (({})*·Δ({}))* = {}",
                    alg.label(x),
                    show2(alg, &te),
                    show2(alg, &lhs),
                    show2(alg, &te),
                    alg.label(x),
                    show2(alg, &rhs)
                )));
            }
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// Checks that `E` is self-adjoint on actions: `E·t = (t*·E)*`.
pub fn check_idempotent_selfadjoint(cp: &Coproduct, e: &Idempotent, depth: usize) -> Result<Verdict, Error> {
    let alg = &*cp.alg;
    for t in pair_basis(alg, depth) {
        let te = Element::basis(t);
        let Some(ts) = star(alg, &te) else {
            return Ok(Verdict::PreconditionNotMet(format!("no involution on {}", alg.name())));
        };
        let lhs = e.act_left(cp, &te);
        let rhs = star(alg, &e.act_right(cp, &ts)).expect("involution");
        if lhs != rhs {
            return Ok(Verdict::FailsWithWitness(Witness::element(
                format!("E·{} = {} but ({}*·E)* = {}", show2(alg, &te), show2(alg, &lhs), show2(alg, &te), show2(alg, &rhs)),
                lhs.sub(&rhs),
            )));
        }
    }
    Ok(Verdict::pass(exact(cp), depth))
}

/// A finite-dimensional coproduct given by a table of `Δ` on the basis.
pub struct TableRule {
    pub name: String,
    pub algebra: AlgebraRef,
    pub delta: BTreeMap<Index, Element>,
    pub tables: BTreeMap<(Map, Index, Index), Element>,
}

impl CoproductRule for TableRule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn algebra(&self) -> AlgebraRef {
        self.algebra.clone()
    }
    fn delta(&self, a: &Index) -> FormalTensor {
        FormalTensor::finite(self.delta.get(a).cloned().unwrap_or_default())
    }
    fn closed_form(&self, m: Map, x: &Index, y: &Index) -> Option<Element> {
        if self.tables.is_empty() {
            return None;
        }
        Some(self.tables.get(&(m, x.clone(), y.clone())).cloned().unwrap_or_default())
    }
    fn span_seeds(&self, _legs: &[Index]) -> Vec<Index> {
        self.algebra.enumerate(usize::MAX >> 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MatrixUnits, Pattern};

    /// `Δ(e_pq) = Σ_j e_pj⊗e_jq`, written out directly.
    struct Matrix;

    impl CoproductRule for Matrix {
        fn name(&self) -> String {
            "matrix".into()
        }
        fn algebra(&self) -> AlgebraRef {
            Arc::new(MatrixUnits::infinite(Pattern::Full))
        }
        fn delta(&self, a: &Index) -> FormalTensor {
            let Index::IntPair(p, q) = *a else { unreachable!() };
            FormalTensor::new(None, move |k| {
                if k == 0 {
                    return Element::zero();
                }
                let j = k as i64;
                Element::basis(Index::pair(&Index::IntPair(p, j), &Index::IntPair(j, q)))
            })
        }
    }

    fn e(p: i64, q: i64) -> Index {
        Index::IntPair(p, q)
    }

    #[test]
    fn matrix_canonical_maps() {
        let cp = Coproduct::new(Matrix);
        let t3 = cp.canonical_map(Map::T3, &e(1, 2), &e(3, 4), 6).unwrap();
        assert_eq!(t3, OneSided::Finite(Element::basis(Index::pair(&e(1, 4), &e(3, 2)))));
        let r = cp.canonical_map(Map::T1, &e(1, 2), &e(2, 3), 6).unwrap();
        assert!(matches!(r, OneSided::Infinite(_)), "{r:?}");
        assert_eq!(cp.canonical_map(Map::T1, &e(1, 2), &e(3, 3), 6).unwrap(), OneSided::Finite(Element::zero()));
    }

    #[test]
    fn matrix_regularity_profile() {
        let cp = Coproduct::new(Matrix);
        let r = regularity_report(&cp, 4).unwrap();
        assert!(r.regular(Map::T3) && r.regular(Map::T4));
        assert!(matches!(r.status(Map::T1), MapStatus::NonRegular { .. }));
        assert!(matches!(r.status(Map::T2), MapStatus::NonRegular { .. }));
        assert!(check_coassoc_t3t4(&cp, 4).unwrap().holds());
        assert!(matches!(check_coassoc_t1t2(&cp, 4).unwrap(), Verdict::PreconditionNotMet(_)));
    }

    #[test]
    fn flip_swaps_statuses() {
        let cp = Coproduct::new(Matrix);
        let f = cp.flip();
        let (r, rf) = (regularity_report(&cp, 4).unwrap(), regularity_report(&f, 4).unwrap());
        assert_eq!(r.regular(Map::T4), rf.regular(Map::T1));
        assert_eq!(r.regular(Map::T3), rf.regular(Map::T2));
        assert_eq!(r.regular(Map::T1), rf.regular(Map::T4));
    }
}
