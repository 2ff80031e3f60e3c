//! Dual spaces of a coproduct: reduced functionals `f(c·)`, `f(·c)`, the slice
//! spaces `B_ℓ`, `B_r`, their products and the pairing actions with `A`.
//!
//! A slice `(ω⊗ι)Δ(a)` is summed from the shells of `Δ(a)` over a window set by
//! the size of `a` and the reach of `ω`, then probed further in the same way as
//! the canonical maps: vanishing probe shells give an element of `A`, probe
//! shells that never vanish give an infinite witness.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{is_finite, mul, show, sweep_basis, AlgebraRef, Functional, SupportHint, Verdict, Witness};
use crate::coproduct::{probe_for, regularity_report, slice_with, Coproduct, Definition, InfiniteWitness, Map, OneSided, RegularityReport};
use crate::error::Error;
use crate::index::{Element, Index};
use crate::linalg::{nullspace, var};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `(ω⊗ι)Δ(a)`
    Left,
    /// `(ι⊗ω)Δ(a)`
    Right,
}

impl Side {
    fn slot(self) -> &'static str {
        match self {
            Side::Left => "ω⊗ι",
            Side::Right => "ι⊗ω",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    B0l,
    B0r,
    B0,
    Bl,
    Br,
    B,
}

impl Space {
    pub const ALL: [Space; 6] = [Space::B0l, Space::B0r, Space::B0, Space::Bl, Space::Br, Space::B];

    pub fn key(self) -> &'static str {
        match self {
            Space::B0l => "B0l",
            Space::B0r => "B0r",
            Space::B0 => "B0",
            Space::Bl => "Bl",
            Space::Br => "Br",
            Space::B => "B",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Space::B0l => "B⁰_ℓ",
            Space::B0r => "B⁰_r",
            Space::B0 => "B₀",
            Space::Bl => "B_ℓ",
            Space::Br => "B_r",
            Space::B => "B",
        };
        write!(f, "{s}")
    }
}

/// Which formula defines `ω₁ω₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Convention {
    /// `ω₂((ω₁⊗ι)Δ(a))`, needs `ω₁ ∈ B_ℓ`.
    Left,
    /// `ω₁((ι⊗ω₂)Δ(a))`, needs `ω₂ ∈ B_r`.
    Right,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// `Σ f_k(c_k·)` (left) or `Σ f_k(·c_k)` (right).
    Reduced { side: Side, pairs: Vec<(Functional, Element)> },
    /// Every swept slice on this side was found to lie in `A`.
    SliceFinite { side: Side, depth: usize },
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// A functional on `A` with whatever membership certificates are known.
#[derive(Clone, Debug)]
pub struct DualElement {
    id: u64,
    pub functional: Functional,
    pub certificates: Vec<Certificate>,
}

impl DualElement {
    pub fn new(functional: Functional) -> Self {
        DualElement { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), functional, certificates: Vec::new() }
    }

    pub fn coordinate(alg: &AlgebraRef, i: &Index) -> Self {
        DualElement::new(Functional::coordinate(&**alg, i))
    }

    /// `Σ f_k(c_k·)` or `Σ f_k(·c_k)`, carrying its own certificate.
    pub fn reduced(alg: &AlgebraRef, side: Side, pairs: Vec<(Functional, Element)>) -> Self {
        let label = pairs
            .iter()
            .map(|(f, c)| match side {
                Side::Left => format!("{}({}·)", f.label, show(&**alg, c)),
                Side::Right => format!("{}(·{})", f.label, show(&**alg, c)),
            })
            .collect::<Vec<_>>()
            .join(" + ");
        let reach = pairs.iter().try_fold(0usize, |m, (f, c)| {
            let cs = c.support().map(|i| alg.size(i)).max().unwrap_or(0);
            f.reach.map(|r| m.max(r).max(cs))
        });
        let support = pairs.iter().try_fold(BTreeSet::new(), |mut acc, (_, c)| {
            for i in c.support() {
                acc.extend(alg.partners(i, side == Side::Left)?);
            }
            Some(acc)
        });
        let hint = match support {
            Some(s) => SupportHint::FiniteSupport(s.into_iter().collect()),
            None => SupportHint::Generic,
        };
        let (a, ps) = (alg.clone(), pairs.clone());
        let f = Functional::rule(if label.is_empty() { "0".into() } else { label }, hint, reach, move |i| {
            let x = Element::basis(i.clone());
            ps.iter().fold(Scalar::zero(), |acc, (f, c)| {
                let p = match side {
                    Side::Left => mul(&*a, c, &x),
                    Side::Right => mul(&*a, &x, c),
                };
                acc + f.eval(&p)
            })
        });
        let mut d = DualElement::new(f);
        d.certificates.push(Certificate::Reduced { side, pairs });
        d
    }

    pub fn label(&self) -> &str {
        &self.functional.label
    }

    pub fn at(&self, i: &Index) -> Scalar {
        self.functional.at(i)
    }

    pub fn eval(&self, e: &Element) -> Scalar {
        self.functional.eval(e)
    }

    pub fn reduced_pairs(&self, side: Side) -> Option<&[(Functional, Element)]> {
        self.certificates.iter().find_map(|c| match c {
            Certificate::Reduced { side: s, pairs } if *s == side => Some(pairs.as_slice()),
            _ => None,
        })
    }
}

/// The functional equal to one on every basis label.
pub fn ones() -> Functional {
    Functional::rule("𝟙", SupportHint::Generic, None, |_| Scalar::one())
}

/// `(ω⊗ι)Δ(a)` or `(ι⊗ω)Δ(a)` from the shells of `Δ(a)`, without any
/// regularity gate.
pub fn slice_shells(cp: &Coproduct, side: Side, w: &Functional, a: &Index, probe: usize) -> OneSided {
    let alg = cp.algebra();
    if let Some(support) = w.finite_support() {
        let legs: Option<Vec<Element>> = support.iter().map(|x| cp.rule().leg(a, x, side == Side::Left)).collect();
        if let Some(legs) = legs {
            let mut sum = Element::zero();
            for (x, c) in support.iter().zip(&legs) {
                sum.add_scaled(c, &w.at(x));
            }
            return OneSided::Finite(sum);
        }
    }
    let k = alg.size(a) + w.reach.unwrap_or(0) + cp.rule().slack();
    let last = cp.last_shell(a);
    if let Some(l) = last.filter(|l| *l <= k + probe) {
        let sh = cp.shells(a, l);
        let mut sum = Element::zero();
        for s in sh.iter().take(l + 1) {
            sum.add_scaled(&slice_with(s, w, side == Side::Left), &Scalar::one());
        }
        return OneSided::Finite(sum);
    }
    let sh = cp.shells(a, k + probe);
    let mut sum = Element::zero();
    for s in sh.iter().take(k + 1) {
        sum.add_scaled(&slice_with(s, w, side == Side::Left), &Scalar::one());
    }
    let tail: Vec<(usize, Element)> = sh
        .iter()
        .enumerate()
        .take(k + probe + 1)
        .skip(k + 1)
        .map(|(j, s)| (j, slice_with(s, w, side == Side::Left)))
        .filter(|(_, e)| !e.is_zero())
        .collect();
    if tail.is_empty() {
        OneSided::Finite(sum)
    } else if tail.len() == probe {
        let (j, e) = &tail[0];
        OneSided::Infinite(InfiniteWitness {
            family: format!("nonzero in every probed shell beyond {k}; shell {j}: {}", show(&*alg, e)),
            verified: probe,
        })
    } else {
        OneSided::Unknown(format!("{} of {probe} probed shells nonzero", tail.len()))
    }
}

type SliceKey = (Side, u64, Index);

const SCAN_GROWTH: usize = 4;

struct Inner {
    cp: Coproduct,
    alg: AlgebraRef,
    depth: usize,
    probe: usize,
    regularity: RegularityReport,
    slices: Mutex<HashMap<SliceKey, OneSided>>,
    members: Mutex<HashMap<(Space, u64), Verdict>>,
}

/// The dual-space machinery for one coproduct at one depth.
#[derive(Clone)]
pub struct Duals {
    inner: Arc<Inner>,
}

impl fmt::Debug for Duals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Duals({}, depth {})", self.inner.cp.name(), self.inner.depth)
    }
}

impl Duals {
    pub fn new(cp: &Coproduct, depth: usize) -> Result<Self, Error> {
        let regularity = regularity_report(cp, depth)?;
        Ok(Duals {
            inner: Arc::new(Inner {
                cp: cp.clone(),
                alg: cp.algebra(),
                depth,
                probe: probe_for(depth),
                regularity,
                slices: Default::default(),
                members: Default::default(),
            }),
        })
    }

    pub fn coproduct(&self) -> &Coproduct {
        &self.inner.cp
    }

    pub fn algebra(&self) -> AlgebraRef {
        self.inner.alg.clone()
    }

    pub fn depth(&self) -> usize {
        self.inner.depth
    }

    pub fn regularity(&self) -> &RegularityReport {
        &self.inner.regularity
    }

    pub fn exact(&self) -> bool {
        is_finite(&*self.inner.alg)
    }

    fn pass(&self) -> Verdict {
        Verdict::pass(self.exact(), self.inner.depth)
    }

    /// Labels on which identities are checked.
    pub fn sweep(&self) -> Vec<Index> {
        sweep_basis(&*self.inner.alg, self.inner.depth)
    }

    /// A longer sweep used to validate certificates found on [`Self::sweep`].
    pub fn validation(&self) -> Vec<Index> {
        sweep_basis(&*self.inner.alg, 2 * self.inner.depth + 4)
    }

    /// The labels scanned for the support of a functional that does not
    /// declare one.
    pub fn wide(&self) -> Vec<Index> {
        sweep_basis(&*self.inner.alg, 4 * self.inner.depth + 8)
    }

    /// [`Self::wide`], extended until labels outgrow the reach of `w`.
    fn scan(&self, w: &Functional, n: usize) -> Vec<Index> {
        let alg = &*self.inner.alg;
        let base = sweep_basis(alg, n);
        let top = base.iter().map(|i| alg.size(i)).max().unwrap_or(0);
        let Some(reach) = w.reach.filter(|_| !is_finite(alg)) else { return base };
        let bound = top + reach;
        let mut m = n;
        loop {
            let labels = alg.enumerate(m);
            let last = labels.last().map(|i| alg.size(i)).unwrap_or(0);
            if last > bound || labels.len() < m || m >= SCAN_GROWTH * n {
                return labels.into_iter().filter(|i| alg.size(i) <= bound).collect();
            }
            m *= 2;
        }
    }

    /// The regular canonical map that makes slices on this side multipliers.
    pub fn slice_map(&self, side: Side) -> Option<Map> {
        let maps = match side {
            Side::Left => [Map::T1, Map::T3],
            Side::Right => [Map::T2, Map::T4],
        };
        maps.into_iter().find(|m| self.inner.regularity.regular(*m))
    }

    fn gate(&self, side: Side) -> Result<(), Error> {
        match self.slice_map(side) {
            Some(_) => Ok(()),
            None => Err(Error::PreconditionNotMet(match side {
                Side::Left => "left slices need T1 or T3 regular".into(),
                Side::Right => "right slices need T2 or T4 regular".into(),
            })),
        }
    }

    pub fn slice(&self, side: Side, w: &DualElement, a: &Index) -> Result<OneSided, Error> {
        self.gate(side)?;
        let key = (side, w.id, a.clone());
        if let Some(r) = self.inner.slices.lock().expect("slice cache").get(&key) {
            return Ok(r.clone());
        }
        let r = slice_shells(&self.inner.cp, side, &w.functional, a, self.inner.probe);
        self.inner.slices.lock().expect("slice cache").insert(key, r.clone());
        Ok(r)
    }

    /// A slice extended linearly to an element of `A`.
    pub fn slice_elem(&self, side: Side, w: &DualElement, x: &Element) -> Result<Element, Error> {
        let mut out = Element::zero();
        for (i, c) in x.terms() {
            match self.slice(side, w, i)? {
                OneSided::Finite(e) => out.add_scaled(&e, c),
                other => return Err(Error::SliceNotFinite(self.describe_slice(side, w, i, &other))),
            }
        }
        Ok(out)
    }

    fn describe_slice(&self, side: Side, w: &DualElement, a: &Index, r: &OneSided) -> String {
        let what = match r {
            OneSided::Finite(e) => show(&*self.inner.alg, e),
            OneSided::Infinite(iw) => iw.family.clone(),
            OneSided::Unknown(u) => format!("undecided ({u})"),
        };
        format!("({})Δ({}) with ω = {}: {what}", side.slot(), self.inner.alg.label(a), w.label())
    }

    /// Membership of `w` in a dual space.
    pub fn membership(&self, w: &DualElement, space: Space) -> Verdict {
        let key = (space, w.id);
        if let Some(v) = self.inner.members.lock().expect("membership cache").get(&key) {
            return v.clone();
        }
        let v = match space {
            Space::B0l => self.reduced_membership(w, Side::Left),
            Space::B0r => self.reduced_membership(w, Side::Right),
            Space::B0 => self.membership(w, Space::B0l).and(self.membership(w, Space::B0r)),
            Space::Bl => self.slice_membership(w, Side::Left),
            Space::Br => self.slice_membership(w, Side::Right),
            Space::B => self.membership(w, Space::Bl).and(self.membership(w, Space::Br)),
        };
        self.inner.members.lock().expect("membership cache").insert(key, v.clone());
        v
    }

    fn slice_membership(&self, w: &DualElement, side: Side) -> Verdict {
        if let Err(e) = self.gate(side) {
            return Verdict::PreconditionNotMet(e.to_string());
        }
        for a in self.sweep() {
            match self.slice(side, w, &a) {
                Ok(OneSided::Finite(_)) => {}
                Ok(r @ OneSided::Infinite(_)) => return Verdict::fail(self.describe_slice(side, w, &a, &r)),
                Ok(r @ OneSided::Unknown(_)) => return Verdict::PreconditionNotMet(self.describe_slice(side, w, &a, &r)),
                Err(e) => return Verdict::PreconditionNotMet(e.to_string()),
            }
        }
        self.pass()
    }

    fn reduced_membership(&self, w: &DualElement, side: Side) -> Verdict {
        let alg = &*self.inner.alg;
        let check = |pairs: &[(Functional, Element)]| -> Option<Index> {
            self.validation().into_iter().find(|x| {
                let xe = Element::basis(x.clone());
                let v = pairs.iter().fold(Scalar::zero(), |acc, (f, c)| {
                    let p = match side {
                        Side::Left => mul(alg, c, &xe),
                        Side::Right => mul(alg, &xe, c),
                    };
                    acc + f.eval(&p)
                });
                v != w.at(x)
            })
        };
        if let Some(pairs) = w.reduced_pairs(side) {
            return match check(pairs) {
                None => self.pass(),
                Some(x) => Verdict::fail(format!("certificate of {} disagrees at {}", w.label(), alg.label(&x))),
            };
        }
        match self.find_reduced(w, side) {
            Ok(_) => self.pass(),
            Err(wit) => Verdict::FailsWithWitness(wit),
        }
    }

    /// Looks for `ω = ω(u·)` (left) or `ω = ω(·u)` (right) with `u` a sum of
    /// local units for the support of `ω` seen on the scanned labels.
    pub fn find_reduced(&self, w: &DualElement, side: Side) -> Result<DualElement, Witness> {
        let alg = &*self.inner.alg;
        let support: Vec<Index> = match w.functional.finite_support() {
            Some(s) => s.to_vec(),
            None => self.scan(&w.functional, 4 * self.inner.depth + 8).into_iter().filter(|i| !w.at(i).is_zero()).collect(),
        };
        let mut units = BTreeSet::new();
        for s in &support {
            let u = match side {
                Side::Left => alg.left_unit_for(s),
                Side::Right => alg.right_unit_for(s),
            };
            match u {
                Some(u) => units.insert(u),
                None => return Err(Witness::text(format!("no local unit found for {}", alg.label(s)))),
            };
        }
        let u = Element::from_terms(units.into_iter().map(|i| (i, Scalar::one())));
        for x in self.scan(&w.functional, 8 * self.inner.depth + 16) {
            let xe = Element::basis(x.clone());
            let p = match side {
                Side::Left => mul(alg, &u, &xe),
                Side::Right => mul(alg, &xe, &u),
            };
            if w.eval(&p) != w.at(&x) {
                let form = match side {
                    Side::Left => "ω(u·)",
                    Side::Right => "ω(·u)",
                };
                return Err(Witness::text(format!(
                    "{} at {} is {} but {form} is {} with u = {} built from its support on the first {} labels",
                    w.label(),
                    alg.label(&x),
                    w.at(&x),
                    w.eval(&p),
                    show(alg, &u),
                    4 * self.inner.depth + 8
                )));
            }
        }
        Ok(DualElement::reduced(&self.inner.alg, side, vec![(w.functional.clone(), u)]))
    }

    /// `w` with `SliceFinite` certificates for the sides it passes.
    pub fn certified(&self, w: &DualElement) -> DualElement {
        let mut out = w.clone();
        for (side, space) in [(Side::Left, Space::Bl), (Side::Right, Space::Br)] {
            if self.membership(w, space).holds() {
                out.certificates.push(Certificate::SliceFinite { side, depth: self.inner.depth });
            }
        }
        out
    }

    fn slice_value(&self, side: Side, w: &DualElement, a: &Index) -> Element {
        match self.slice(side, w, a) {
            Ok(OneSided::Finite(e)) => e,
            Ok(other) => panic!("dual product evaluated off its domain: {}", self.describe_slice(side, w, a, &other)),
            Err(e) => panic!("dual product evaluated off its domain: {e}"),
        }
    }

    /// `ω₁ω₂` in the given convention.
    pub fn product(&self, w1: &DualElement, w2: &DualElement, conv: Convention) -> Result<DualElement, Error> {
        let (need, space) = match conv {
            Convention::Left => (w1, Space::Bl),
            Convention::Right => (w2, Space::Br),
        };
        let v = self.membership(need, space);
        if !v.holds() {
            return Err(Error::PreconditionNotMet(format!("{} ∉ {space}: {v}", need.label())));
        }
        let (me, a1, a2) = (self.clone(), w1.clone(), w2.clone());
        let memo: Mutex<HashMap<Index, Scalar>> = Default::default();
        let reach = match (w1.functional.reach, w2.functional.reach) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let label = format!("({}·{})", w1.label(), w2.label());
        let hint = match self.product_support(&w1.functional, &w2.functional) {
            Some(s) => SupportHint::FiniteSupport(s),
            None => SupportHint::Generic,
        };
        let f = Functional::rule(label, hint, reach, move |i| {
            if let Some(v) = memo.lock().expect("product memo").get(i) {
                return v.clone();
            }
            let v = match conv {
                Convention::Left => a2.eval(&me.slice_value(Side::Left, &a1, i)),
                Convention::Right => a1.eval(&me.slice_value(Side::Right, &a2, i)),
            };
            memo.lock().expect("product memo").insert(i.clone(), v.clone());
            v
        });
        Ok(DualElement::new(f))
    }

    fn product_support(&self, w1: &Functional, w2: &Functional) -> Option<Vec<Index>> {
        let (s1, s2) = (w1.finite_support()?, w2.finite_support()?);
        let mut out = BTreeSet::new();
        for x in s1 {
            for y in s2 {
                out.extend(self.inner.cp.rule().occurs_in(x, y)?);
            }
        }
        Some(out.into_iter().collect())
    }

    /// `ω₁ω₂` through `T₂` for `ω₁ = Σ f_k(c_k·)`:
    /// `a ↦ Σ ω₂((f_k⊗ι)((c_k⊗1)Δ(a)))`.
    pub fn reduced_product(&self, w1: &DualElement, w2: &DualElement) -> Result<DualElement, Error> {
        let pairs = w1
            .reduced_pairs(Side::Left)
            .ok_or_else(|| Error::PreconditionNotMet(format!("{} carries no f(c·) certificate", w1.label())))?
            .to_vec();
        let r = &self.inner.regularity;
        if !r.regular(Map::T2) || !(r.regular(Map::T1) || r.regular(Map::T3)) {
            return Err(Error::PreconditionNotMet("the reduced product needs T2 and one of T1, T3 regular".into()));
        }
        let (cp, w2c, probe) = (self.inner.cp.clone(), w2.clone(), self.inner.probe);
        let label = format!("({}·{})₀", w1.label(), w2.label());
        let f = Functional::rule(label, SupportHint::Generic, None, move |i| {
            let a = Element::basis(i.clone());
            pairs.iter().fold(Scalar::zero(), |acc, (f, c)| {
                let t = cp.t_elem(Map::T2, c, &a, probe).expect("T2 is regular");
                acc + w2c.eval(&slice_with(&t, f, true))
            })
        });
        Ok(DualElement::new(f))
    }

    /// Coordinate functionals on the sweep plus `depth` seeded random
    /// finite-support combinations of them.
    pub fn sample(&self, seed: u64) -> Vec<DualElement> {
        let alg = self.inner.alg.clone();
        let basis = self.sweep();
        let mut out: Vec<DualElement> = basis.iter().map(|i| DualElement::coordinate(&alg, i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..self.inner.depth {
            let n = rng.gen_range(1..=3usize);
            let mut values = Element::zero();
            for _ in 0..n {
                let i = basis[rng.gen_range(0..basis.len())].clone();
                let mut c = rng.gen_range(-3..=3i64);
                if c == 0 {
                    c = 1;
                }
                values.add_term(i, Scalar::from_int(c));
            }
            let a2 = alg.clone();
            out.push(DualElement::new(Functional::table(format!("ω{k}"), values, move |i| a2.size(i))));
        }
        out
    }

    /// `𝟙(c·)` and `𝟙(·c)` for the first two basis labels `c`: reduced
    /// functionals that are usually not finitely supported.
    pub fn reduced_probes(&self) -> Vec<DualElement> {
        let alg = self.inner.alg.clone();
        let mut out = Vec::new();
        for c in self.sweep().into_iter().take(2) {
            for side in [Side::Left, Side::Right] {
                out.push(DualElement::reduced(&alg, side, vec![(ones(), Element::basis(c.clone()))]));
            }
        }
        out
    }

    /// First label of the sweep where two functionals differ.
    pub fn differ(&self, x: &DualElement, y: &DualElement) -> Option<Index> {
        self.sweep().into_iter().find(|i| x.at(i) != y.at(i))
    }
}

fn members<'a>(d: &Duals, sample: &'a [DualElement], space: Space) -> Vec<&'a DualElement> {
    sample.iter().filter(|w| d.membership(w, space).holds()).collect()
}

/// `(ω₁⊗ι)Δ((ι⊗ω₂)Δ(a)) = (ι⊗ω₂)Δ((ω₁⊗ι)Δ(a))` for sampled `ω₁ ∈ B_ℓ`,
/// `ω₂ ∈ B_r` and swept `a`. The pair names the canonical maps required to be
/// regular; the identity itself is the same in both forms.
pub fn check_strong_coassociativity(d: &Duals, pair: Definition, sample: &[DualElement]) -> Verdict {
    if !matches!(pair, Definition::T1T2 | Definition::T3T4) {
        return Verdict::PreconditionNotMet(format!("{} has no strong form", pair.key()));
    }
    for m in pair.maps() {
        if !d.regularity().regular(*m) {
            return Verdict::PreconditionNotMet(format!("{m} is {}", d.regularity().status(*m).name()));
        }
    }
    let (lefts, rights) = (members(d, sample, Space::Bl), members(d, sample, Space::Br));
    if lefts.is_empty() || rights.is_empty() {
        return Verdict::PreconditionNotMet("no sampled functional in B_ℓ or B_r".into());
    }
    let alg = d.algebra();
    for a in d.sweep() {
        let ae = Element::basis(a.clone());
        for w1 in &lefts {
            for w2 in &rights {
                let sides = d
                    .slice_elem(Side::Right, w2, &ae)
                    .and_then(|r| d.slice_elem(Side::Left, w1, &r))
                    .and_then(|lhs| Ok((lhs, d.slice_elem(Side::Left, w1, &ae)?)))
                    .and_then(|(lhs, l)| Ok((lhs, d.slice_elem(Side::Right, w2, &l)?)));
                match sides {
                    Ok((lhs, rhs)) if lhs == rhs => {}
                    Ok((lhs, rhs)) => {
                        return Verdict::FailsWithWitness(Witness::element(
                            format!(
                                "a = {}, ω₁ = {}, ω₂ = {}: {} vs {}",
                                alg.label(&a),
                                w1.label(),
                                w2.label(),
                                show(&*alg, &lhs),
                                show(&*alg, &rhs)
                            ),
                            lhs.sub(&rhs),
                        ))
                    }
                    Err(e) => return Verdict::fail(e.to_string()),
                }
            }
        }
    }
    d.pass()
}

/// `ω₂((ω₁⊗ι)Δ(a)) = ω₁((ι⊗ω₂)Δ(a))` for sampled `ω₁ ∈ B_ℓ`, `ω₂ ∈ B_r`.
pub fn check_products_agree(d: &Duals, sample: &[DualElement]) -> Verdict {
    let (lefts, rights) = (members(d, sample, Space::Bl), members(d, sample, Space::Br));
    if lefts.is_empty() || rights.is_empty() {
        return Verdict::PreconditionNotMet("no sampled functional in B_ℓ or B_r".into());
    }
    let alg = d.algebra();
    for a in d.sweep() {
        let ae = Element::basis(a.clone());
        for w1 in &lefts {
            for w2 in &rights {
                let l = d.slice_elem(Side::Left, w1, &ae).map(|s| w2.eval(&s));
                let r = d.slice_elem(Side::Right, w2, &ae).map(|s| w1.eval(&s));
                match (l, r) {
                    (Ok(l), Ok(r)) if l == r => {}
                    (Ok(l), Ok(r)) => {
                        return Verdict::fail(format!(
                            "a = {}, ω₁ = {}, ω₂ = {}: left convention {l}, right convention {r}",
                            alg.label(&a),
                            w1.label(),
                            w2.label()
                        ))
                    }
                    (Err(e), _) | (_, Err(e)) => return Verdict::fail(e.to_string()),
                }
            }
        }
    }
    d.pass()
}

/// Annihilators of the dual product, searched among combinations of
/// coordinate functionals on the sweep.
#[derive(Clone, Debug)]
pub struct Annihilators {
    /// `ω₁` with `ω₁ω₂ = 0` for every `ω₂` (left convention) or `ω₂` with
    /// `ω₁ω₂ = 0` for every `ω₁` (right convention): its slices all vanish.
    pub sliced: Verdict,
    /// The functional on the other side, vanishing on every slice.
    pub evaluated: Verdict,
}

impl Annihilators {
    pub fn nondegenerate(&self) -> Verdict {
        self.sliced.clone().and(self.evaluated.clone())
    }
}

fn combination(alg: &AlgebraRef, labels: &[Index], x: &Element) -> String {
    let e = Element::from_terms(x.terms().map(|(v, c)| {
        let Index::Int(k) = v else { unreachable!("unknowns are integers") };
        (labels[*k as usize].clone(), c.clone())
    }));
    e.render(&|i| format!("f[{}]", alg.label(i)))
}

/// Searches for nonzero annihilators of the product in one convention.
pub fn dual_annihilators(d: &Duals, conv: Convention) -> Annihilators {
    let side = match conv {
        Convention::Left => Side::Left,
        Convention::Right => Side::Right,
    };
    if let Err(e) = d.gate(side) {
        let v = Verdict::PreconditionNotMet(e.to_string());
        return Annihilators { sliced: v.clone(), evaluated: v };
    }
    let alg = d.algebra();
    let labels = d.sweep();
    let tests = d.validation();
    let coords: Vec<DualElement> = labels.iter().map(|i| DualElement::coordinate(&alg, i)).collect();
    let mut slices: Vec<Option<Vec<Element>>> = Vec::new();
    for w in &coords {
        let s: Option<Vec<Element>> =
            tests.iter().map(|a| d.slice(side, w, a).ok().and_then(|r| r.finite().cloned())).collect();
        slices.push(s);
    }
    let n = labels.len();
    let mut rows: BTreeMap<(usize, Index), Element> = BTreeMap::new();
    for (i, s) in slices.iter().enumerate() {
        let Some(s) = s else { continue };
        for (t, e) in s.iter().enumerate() {
            for (v, c) in e.terms() {
                rows.entry((t, v.clone())).or_default().add_term(var(i), c.clone());
            }
        }
    }
    let mut excluded: Vec<Element> = Vec::new();
    for (i, s) in slices.iter().enumerate() {
        if s.is_none() {
            excluded.push(Element::basis(var(i)));
        }
    }
    let mut all: Vec<Element> = rows.into_values().collect();
    all.extend(excluded);
    let (mine, other) = match conv {
        Convention::Left => ("ω₁", "ω₂"),
        Convention::Right => ("ω₂", "ω₁"),
    };
    let sliced = match nullspace(&all, n).first() {
        Some(x) => Verdict::FailsWithWitness(Witness::text(format!(
            "{mine} = {} has every slice zero, so the product with any {other} vanishes",
            combination(&alg, &labels, x)
        ))),
        None => d.pass(),
    };
    let pos: BTreeMap<&Index, usize> = labels.iter().enumerate().map(|(k, i)| (i, k)).collect();
    let mut rows2: Vec<Element> = Vec::new();
    for s in slices.iter().flatten() {
        for e in s {
            let row = Element::from_terms(e.terms().filter_map(|(v, c)| pos.get(v).map(|k| (var(*k), c.clone()))));
            if !row.is_zero() {
                rows2.push(row);
            }
        }
    }
    let evaluated = match nullspace(&rows2, n).first() {
        Some(x) => Verdict::FailsWithWitness(Witness::text(format!(
            "{other} = {} vanishes on every slice, so the product with any {mine} vanishes",
            combination(&alg, &labels, x)
        ))),
        None => d.pass(),
    };
    Annihilators { sliced, evaluated }
}

/// Verdicts for one dual space.
#[derive(Clone, Debug)]
pub struct DualLaws {
    pub space: Space,
    pub convention: Option<Convention>,
    pub members: usize,
    pub sampled: usize,
    pub associativity: Verdict,
    pub closure: Verdict,
    pub module: Verdict,
    pub nondegeneracy: Verdict,
    pub unit: Verdict,
}

const LAW_SAMPLE: usize = 6;

fn convention_for(d: &Duals, space: Space, inside: &[&DualElement]) -> Result<Convention, String> {
    let all_in = |s: Space| inside.iter().all(|w| d.membership(w, s).holds());
    match space {
        Space::Bl => Ok(Convention::Left),
        Space::Br => Ok(Convention::Right),
        Space::B => {
            let owned: Vec<DualElement> = inside.iter().map(|w| (*w).clone()).collect();
            match check_products_agree(d, &owned) {
                v if v.holds() => Ok(Convention::Left),
                v => Err(format!("the two product conventions are not known to agree on B: {v}")),
            }
        }
        _ if all_in(Space::Bl) => Ok(Convention::Left),
        _ if all_in(Space::Br) => Ok(Convention::Right),
        _ => Err(format!("sampled members of {space} lie neither all in B_ℓ nor all in B_r")),
    }
}

fn same(d: &Duals, x: &DualElement, y: &DualElement) -> Option<String> {
    d.differ(x, y).map(|i| {
        let alg = d.algebra();
        format!("{} and {} differ at {}: {} vs {}", x.label(), y.label(), alg.label(&i), x.at(&i), y.at(&i))
    })
}

/// Associativity, closure, module structure, non-degeneracy and unit of the
/// product on the sampled members of a space.
pub fn check_dual_algebra_laws(d: &Duals, space: Space, counit: Option<&Functional>, sample: &[DualElement]) -> DualLaws {
    let inside = members(d, sample, space);
    let skip = |why: String| {
        let v = Verdict::PreconditionNotMet(why);
        DualLaws {
            space,
            convention: None,
            members: inside.len(),
            sampled: sample.len(),
            associativity: v.clone(),
            closure: v.clone(),
            module: v.clone(),
            nondegeneracy: v.clone(),
            unit: v,
        }
    };
    if inside.is_empty() {
        return skip(format!("no sampled functional lies in {space}"));
    }
    let conv = match convention_for(d, space, &inside) {
        Ok(c) => c,
        Err(why) => return skip(why),
    };
    let trio: Vec<&DualElement> = inside.iter().copied().take(LAW_SAMPLE).collect();
    let prod = |x: &DualElement, y: &DualElement| d.product(x, y, conv);

    let mut closure = d.pass();
    let mut products: HashMap<(usize, usize), DualElement> = HashMap::new();
    'c: for (i, x) in trio.iter().enumerate() {
        for (j, y) in trio.iter().enumerate() {
            match prod(x, y) {
                Ok(p) => {
                    let v = d.membership(&p, space);
                    if !v.holds() {
                        closure = Verdict::fail(format!("{} ∉ {space}: {v}", p.label()));
                        break 'c;
                    }
                    products.insert((i, j), p);
                }
                Err(e) => {
                    closure = Verdict::fail(e.to_string());
                    break 'c;
                }
            }
        }
    }

    let mut associativity = d.pass();
    if closure.holds() {
        'a: for (i, x) in trio.iter().enumerate() {
            for (j, _) in trio.iter().enumerate() {
                for (k, z) in trio.iter().enumerate() {
                    let lhs = prod(&products[&(i, j)], z);
                    let rhs = prod(x, &products[&(j, k)]);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => {
                            if let Some(w) = same(d, &l, &r) {
                                associativity = Verdict::fail(w);
                                break 'a;
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            associativity = Verdict::fail(e.to_string());
                            break 'a;
                        }
                    }
                }
            }
        }
    } else {
        associativity = Verdict::PreconditionNotMet("closure failed".into());
    }

    let any = DualElement::new(ones());
    let mut module = d.pass();
    'm: for x in &trio {
        for y in &trio {
            let r = match conv {
                Convention::Left => prod(x, y).and_then(|xy| prod(&xy, &any)).and_then(|l| Ok((l, prod(x, &prod(y, &any)?)?))),
                Convention::Right => prod(x, y).and_then(|xy| prod(&any, &xy)).and_then(|l| Ok((l, prod(&prod(&any, x)?, y)?))),
            };
            match r {
                Ok((l, r)) => {
                    if let Some(w) = same(d, &l, &r) {
                        module = Verdict::fail(w);
                        break 'm;
                    }
                }
                Err(e) => {
                    module = Verdict::fail(e.to_string());
                    break 'm;
                }
            }
        }
    }

    let nondegeneracy = dual_annihilators(d, conv).nondegenerate();

    let unit = match counit {
        None => Verdict::PreconditionNotMet("no counit".into()),
        Some(eps) => {
            let e = DualElement::new(eps.clone());
            let mut v = d.pass();
            for x in &inside {
                let r = prod(&e, x).and_then(|l| Ok((l, prod(x, &e)?)));
                match r {
                    Ok((l, r)) => {
                        if let Some(w) = same(d, &l, x).or_else(|| same(d, &r, x)) {
                            v = Verdict::fail(w);
                            break;
                        }
                    }
                    Err(err) => {
                        v = Verdict::fail(err.to_string());
                        break;
                    }
                }
            }
            v
        }
    };

    DualLaws {
        space,
        convention: Some(conv),
        members: inside.len(),
        sampled: sample.len(),
        associativity,
        closure,
        module,
        nondegeneracy,
        unit,
    }
}

/// Products of coordinate functionals `f_i·f_j`, read off as combinations of
/// coordinate functionals by evaluating on `on`.
pub fn coordinate_table(
    d: &Duals,
    conv: Convention,
    labels: &[Index],
    on: &[Index],
) -> Result<BTreeMap<(Index, Index), Element>, Error> {
    let alg = d.algebra();
    let coords: Vec<DualElement> = labels.iter().map(|i| DualElement::coordinate(&alg, i)).collect();
    let mut out = BTreeMap::new();
    for (i, x) in labels.iter().zip(&coords) {
        for (j, y) in labels.iter().zip(&coords) {
            let p = d.product(x, y, conv)?;
            out.insert((i.clone(), j.clone()), Element::from_terms(on.iter().map(|a| (a.clone(), p.at(a)))));
        }
    }
    Ok(out)
}

/// The four actions of `A` and its duals on each other.
#[derive(Clone, Debug)]
pub struct PairingActions {
    d: Duals,
}

impl PairingActions {
    pub fn new(d: &Duals) -> Self {
        PairingActions { d: d.clone() }
    }

    /// `b◁a = b(a·)`
    pub fn functional_by_element(&self, b: &Functional, a: &Element) -> DualElement {
        DualElement::reduced(&self.d.algebra(), Side::Left, vec![(b.clone(), a.clone())])
    }

    /// `a▷b = b(·a)`
    pub fn element_on_functional(&self, a: &Element, b: &Functional) -> DualElement {
        DualElement::reduced(&self.d.algebra(), Side::Right, vec![(b.clone(), a.clone())])
    }

    /// `ω▷a = (ι⊗ω)Δ(a)`
    pub fn dual_on_element(&self, w: &DualElement, a: &Element) -> Result<Element, Error> {
        self.d.slice_elem(Side::Right, w, a)
    }

    /// `a◁ω = (ω⊗ι)Δ(a)`
    pub fn element_by_dual(&self, a: &Element, w: &DualElement) -> Result<Element, Error> {
        self.d.slice_elem(Side::Left, w, a)
    }

    /// `(b◁a)◁a' = b◁(aa')`, `a▷(a'▷b) = (aa')▷b`, `a◁(ω₁ω₂) = (a◁ω₁)◁ω₂`
    /// and `(ω₁ω₂)▷a = ω₁▷(ω₂▷a)` on samples.
    pub fn check_module_laws(&self, sample: &[DualElement]) -> Verdict {
        let d = &self.d;
        let alg = d.algebra();
        let elems: Vec<Element> = d.sweep().into_iter().take(LAW_SAMPLE).map(Element::basis).collect();
        let funcs: Vec<&DualElement> = sample.iter().take(LAW_SAMPLE).collect();
        for b in &funcs {
            for a in &elems {
                for a2 in &elems {
                    let aa = mul(&*alg, a, a2);
                    let l = DualElement::reduced(&alg, Side::Left, vec![(self.functional_by_element(&b.functional, a).functional, a2.clone())]);
                    let r = self.functional_by_element(&b.functional, &aa);
                    if let Some(w) = same(d, &l, &r) {
                        return Verdict::fail(format!("(b◁a)◁a' vs b◁(aa'): {w}"));
                    }
                    let l = self.element_on_functional(a, &self.element_on_functional(a2, &b.functional).functional);
                    let r = self.element_on_functional(&aa, &b.functional);
                    if let Some(w) = same(d, &l, &r) {
                        return Verdict::fail(format!("a▷(a'▷b) vs (aa')▷b: {w}"));
                    }
                }
            }
        }
        for (side, conv, space) in [(Side::Left, Convention::Left, Space::Bl), (Side::Right, Convention::Right, Space::Br)] {
            if d.gate(side).is_err() {
                continue;
            }
            let inside: Vec<&DualElement> = funcs.iter().copied().filter(|w| d.membership(w, space).holds()).collect();
            for x in &inside {
                for y in &inside {
                    let Ok(xy) = d.product(x, y, conv) else { continue };
                    for a in &elems {
                        let r = match side {
                            Side::Left => self
                                .element_by_dual(a, &xy)
                                .and_then(|l| Ok((l, self.element_by_dual(&self.element_by_dual(a, x)?, y)?))),
                            Side::Right => self
                                .dual_on_element(&xy, a)
                                .and_then(|l| Ok((l, self.dual_on_element(x, &self.dual_on_element(y, a)?)?))),
                        };
                        match r {
                            Ok((l, r)) if l == r => {}
                            Ok((l, r)) => {
                                return Verdict::fail(format!(
                                    "{} action of {} at {}: {} vs {}",
                                    space,
                                    xy.label(),
                                    show(&*alg, a),
                                    show(&*alg, &l),
                                    show(&*alg, &r)
                                ))
                            }
                            Err(e) => return Verdict::fail(e.to_string()),
                        }
                    }
                }
            }
        }
        d.pass()
    }

    /// Every sampled nonzero functional acts nontrivially on some swept element.
    pub fn check_faithful(&self, sample: &[DualElement]) -> Verdict {
        let d = &self.d;
        for (side, space) in [(Side::Left, Space::Bl), (Side::Right, Space::Br)] {
            if d.gate(side).is_err() {
                continue;
            }
            for w in sample.iter().filter(|w| d.membership(w, space).holds()) {
                if d.validation().iter().all(|i| w.at(i).is_zero()) {
                    continue;
                }
                let acts = d.validation().iter().any(|a| {
                    d.slice_elem(side, w, &Element::basis(a.clone())).map(|e| !e.is_zero()).unwrap_or(true)
                });
                if !acts {
                    return Verdict::fail(format!("{} acts as zero through ({})Δ", w.label(), side.slot()));
                }
            }
        }
        d.pass()
    }

    /// `A◁X = A` (left slices) and `X▷A = A` (right slices) on swept basis
    /// elements, for `X` the sampled members of a space together with the
    /// members among the coordinate functionals of the validation window.
    pub fn check_unital(&self, sample: &[DualElement], space: Space) -> (Verdict, Verdict) {
        let d = &self.d;
        let alg = d.algebra();
        let mut pool: Vec<DualElement> = sample.to_vec();
        pool.extend(d.validation().iter().map(|i| DualElement::coordinate(&alg, i)));
        let members: Vec<&DualElement> = pool.iter().filter(|w| d.membership(w, space).holds()).collect();
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            if let Err(e) = d.gate(side) {
                out.push(Verdict::PreconditionNotMet(e.to_string()));
                continue;
            }
            let mut span = crate::linalg::SpanBasis::new();
            for w in members.iter().copied() {
                for a in d.validation() {
                    if let Ok(e) = d.slice_elem(side, w, &Element::basis(a)) {
                        span.insert(&e);
                    }
                }
            }
            let miss = d.sweep().into_iter().find(|i| !span.contains(&Element::basis(i.clone())));
            out.push(match miss {
                Some(i) => Verdict::fail(format!("{} is not reached by the {space} action", alg.label(&i))),
                None => d.pass(),
            });
        }
        let r = out.pop().expect("two sides");
        let l = out.pop().expect("two sides");
        (l, r)
    }
}

fn pq(i: &Index) -> Option<(i64, i64)> {
    match i {
        Index::IntPair(p, q) => Some((*p, *q)),
        _ => None,
    }
}

fn unit_pq(p: i64, q: i64) -> Index {
    Index::IntPair(p, q)
}

/// `ω(e_pq) = c_{q−p}` on the band `|q − p| ≤ w` of an infinite matrix.
pub fn band_functional(label: impl Into<String>, coeffs: Vec<Scalar>) -> Functional {
    let w = (coeffs.len() / 2) as i64;
    Functional::rule(label, SupportHint::Generic, Some(w as usize), move |i| {
        let (p, q) = pq(i).expect("matrix unit");
        let d = q - p;
        if d.abs() <= w {
            coeffs[(d + w) as usize].clone()
        } else {
            Scalar::zero()
        }
    })
}

/// `ω(e_rq) = 1` for every `q`: row `r` of ones.
pub fn row_functional(r: i64) -> Functional {
    Functional::rule(format!("row{r}"), SupportHint::Generic, None, move |i| {
        let (p, _) = pq(i).expect("matrix unit");
        if p == r { Scalar::one() } else { Scalar::zero() }
    })
}

/// `ω(e_pc) = 1` for every `p`: column `c` of ones.
pub fn column_functional(c: i64) -> Functional {
    Functional::rule(format!("col{c}"), SupportHint::Generic, None, move |i| {
        let (_, q) = pq(i).expect("matrix unit");
        if q == c { Scalar::one() } else { Scalar::zero() }
    })
}

/// Seeded elements of `B` for the matrix coproduct: random bands, some with
/// finite support.
pub fn matrix_b_sample(seed: u64, n: usize) -> Vec<DualElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            if k % 3 == 2 {
                let mut values = Element::zero();
                for _ in 0..rng.gen_range(1..=3) {
                    let (p, q) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
                    values.add_term(unit_pq(p, q), Scalar::from_int(rng.gen_range(1..=3i64)));
                }
                DualElement::new(Functional::table(format!("β{k}"), values, |i| {
                    let (p, q) = pq(i).expect("matrix unit");
                    p.max(q) as usize
                }))
            } else {
                let w = rng.gen_range(0..=2usize);
                let coeffs: Vec<Scalar> = (0..2 * w + 1).map(|_| Scalar::from_int(rng.gen_range(-2..=2i64))).collect();
                DualElement::new(band_functional(format!("β{k}"), coeffs))
            }
        })
        .collect()
}

/// Outcome of the multiplier-algebra comparison for the matrix duals.
#[derive(Clone, Debug)]
pub struct MultiplierCheck {
    /// Every sampled `ω ∈ B` multiplies `B₀` into `B₀` on both sides.
    pub b_multiplies_b0: Verdict,
    /// Every sampled `ω ∈ B_ℓ` multiplies the column-bounded reduced
    /// functionals `f(·c)` into themselves.
    pub bl_multiplies_b0r: Verdict,
    /// `f_pp·ω·f_qq = ω(e_pq) f_pq` for sampled `ω`.
    pub extraction: Verdict,
    /// Non-membership witnesses for functionals outside `B` and `B_ℓ`.
    pub outside: Verdict,
}

impl MultiplierCheck {
    pub fn verdict(&self) -> Verdict {
        self.b_multiplies_b0
            .clone()
            .and(self.bl_multiplies_b0r.clone())
            .and(self.extraction.clone())
            .and(self.outside.clone())
    }
}

fn closes(d: &Duals, w: &DualElement, gens: &[DualElement], space: Space) -> Option<String> {
    for g in gens {
        for (x, y) in [(w, g), (g, w)] {
            match d.product(x, y, Convention::Left) {
                Ok(p) => {
                    let v = d.membership(&p, space);
                    if !v.holds() {
                        return Some(format!("{} ∉ {space}: {v}", p.label()));
                    }
                }
                Err(e) => return Some(e.to_string()),
            }
        }
    }
    None
}

/// Multiplier algebras of the matrix duals: `M(B₀) = B`, and the multiplier
/// algebra of the column-bounded reduced functionals is `B_ℓ`.
pub fn dual_multiplier_check(d: &Duals, sample: &[DualElement], eps: Option<&Functional>) -> MultiplierCheck {
    let alg = d.algebra();
    let is_matrix = alg.name().starts_with("matrix units") && d.sweep().iter().all(|i| pq(i).is_some());
    if !is_matrix {
        let v = Verdict::PreconditionNotMet("needs the infinite matrix units".into());
        return MultiplierCheck { b_multiplies_b0: v.clone(), bl_multiplies_b0r: v.clone(), extraction: v.clone(), outside: v };
    }
    let n = (d.depth() as f64).sqrt().ceil() as i64 + 1;
    let coords: Vec<DualElement> =
        (1..=n).flat_map(|p| (1..=n).map(move |q| (p, q))).map(|(p, q)| DualElement::coordinate(&alg, &unit_pq(p, q))).collect();
    let mut pool: Vec<DualElement> = sample.to_vec();
    if let Some(e) = eps {
        pool.push(DualElement::new(e.clone()));
    }
    let in_b: Vec<&DualElement> = pool.iter().filter(|w| d.membership(w, Space::B).holds()).collect();
    let in_bl: Vec<&DualElement> = pool.iter().filter(|w| d.membership(w, Space::Bl).holds()).collect();

    let b_multiplies_b0 = in_b
        .iter()
        .find_map(|w| closes(d, w, &coords, Space::B0))
        .map(Verdict::fail)
        .unwrap_or_else(|| d.pass());

    let col = DualElement::reduced(&alg, Side::Right, vec![(ones(), Element::basis(unit_pq(1, 1)))]);
    let mut b0r_gens = coords.clone();
    b0r_gens.push(col.clone());
    let bl_multiplies_b0r = in_bl
        .iter()
        .find_map(|w| closes(d, w, &b0r_gens, Space::B0r))
        .map(Verdict::fail)
        .unwrap_or_else(|| d.pass());

    let mut extraction = d.pass();
    'x: for w in &in_b {
        for p in 1..=n {
            for q in 1..=n {
                let fpp = DualElement::coordinate(&alg, &unit_pq(p, p));
                let fqq = DualElement::coordinate(&alg, &unit_pq(q, q));
                let m = d.product(&fpp, w, Convention::Left).and_then(|x| d.product(&x, &fqq, Convention::Left));
                let want = Functional::table("ω(e_pq)f_pq", Element::term(unit_pq(p, q), w.at(&unit_pq(p, q))), |i| {
                    let (a, b) = pq(i).expect("matrix unit");
                    a.max(b) as usize
                });
                match m {
                    Ok(m) => {
                        if let Some(diff) = same(d, &m, &DualElement::new(want)) {
                            extraction = Verdict::fail(format!("f_{p}{p}·{}·f_{q}{q}: {diff}", w.label()));
                            break 'x;
                        }
                    }
                    Err(e) => {
                        extraction = Verdict::fail(e.to_string());
                        break 'x;
                    }
                }
            }
        }
    }

    let f11 = DualElement::coordinate(&alg, &unit_pq(1, 1));
    let row = DualElement::new(row_functional(1));
    let colf = DualElement::new(column_functional(1));
    let mut notes = Vec::new();
    let mut outside_ok = true;
    for (w, x, y, space) in [(&row, &f11, &row, Space::B0), (&row, &f11, &row, Space::B0r), (&colf, &colf, &f11, Space::B0)] {
        match d.product(x, y, Convention::Left) {
            Ok(p) => {
                let v = d.membership(&p, space);
                if v.fails() {
                    notes.push(format!("{}: {} ∉ {space}", w.label(), p.label()));
                } else {
                    outside_ok = false;
                    notes.push(format!("{}: {} unexpectedly in {space}", w.label(), p.label()));
                }
            }
            Err(e) => {
                outside_ok = false;
                notes.push(e.to_string());
            }
        }
    }
    let outside = if outside_ok { d.pass() } else { Verdict::fail(notes.join("; ")) };
    MultiplierCheck { b_multiplies_b0, bl_multiplies_b0r, extraction, outside }
}

/// Non-membership witnesses produced by [`dual_multiplier_check`] for the
/// row and column functionals, as text.
pub fn multiplier_witnesses(d: &Duals) -> Vec<String> {
    let alg = d.algebra();
    let f11 = DualElement::coordinate(&alg, &unit_pq(1, 1));
    let row = DualElement::new(row_functional(1));
    let colf = DualElement::new(column_functional(1));
    let mut out = Vec::new();
    for (x, y) in [(&f11, &row), (&colf, &f11)] {
        if let Ok(p) = d.product(x, y, Convention::Left) {
            if let Some(w) = d.membership(&p, Space::B0).witness() {
                out.push(format!("{}: {}", p.label(), w.text));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build, Params};

    fn e(p: i64, q: i64) -> Index {
        Index::IntPair(p, q)
    }

    #[test]
    fn matrix_slices() {
        let g = build("matrix", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 4).unwrap();
        let alg = d.algebra();
        let w = DualElement::new(band_functional("b", vec![Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)]));
        let s = d.slice(Side::Left, &w, &e(2, 3)).unwrap();
        let want = Element::from_terms([(e(1, 3), Scalar::from_int(2)), (e(2, 3), Scalar::from_int(3)), (e(3, 3), Scalar::from_int(5))]);
        assert_eq!(s, OneSided::Finite(want));
        let row = DualElement::new(row_functional(1));
        assert!(matches!(d.slice(Side::Left, &row, &e(1, 2)).unwrap(), OneSided::Infinite(_)));
        assert!(d.membership(&row, Space::Br).holds());
        assert!(d.membership(&row, Space::Bl).fails());
        let f = DualElement::coordinate(&alg, &e(1, 2));
        let zero = d.slice(Side::Left, &DualElement::new(Functional::zero()), &e(3, 1)).unwrap();
        assert_eq!(zero, OneSided::Finite(Element::zero()));
        assert!(d.membership(&f, Space::B0).holds());
    }

    #[test]
    fn matrix_unit_products() {
        let g = build("matrix", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 4).unwrap();
        let labels = [e(1, 2), e(2, 1), e(2, 3)];
        let on: Vec<Index> = (1..=4).flat_map(|p| (1..=4).map(move |q| e(p, q))).collect();
        let t = coordinate_table(&d, Convention::Left, &labels, &on).unwrap();
        assert_eq!(t[&(e(1, 2), e(2, 3))], Element::basis(e(1, 3)));
        assert_eq!(t[&(e(1, 2), e(2, 1))], Element::basis(e(1, 1)));
        assert!(t[&(e(2, 1), e(2, 3))].is_zero());
    }

    #[test]
    fn counit_is_in_b_not_b0() {
        let g = build("matrix", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 6).unwrap();
        let eps = DualElement::new(g.counit.clone().unwrap().0);
        assert!(d.membership(&eps, Space::B).holds());
        assert!(d.membership(&eps, Space::B0l).fails());
        assert!(d.membership(&eps, Space::B0r).fails());
    }

    #[test]
    fn group_slices_are_translates() {
        let g = build("group:Z", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 6).unwrap();
        let alg = d.algebra();
        let f2 = DualElement::coordinate(&alg, &Index::Int(2));
        let s = d.slice_elem(Side::Left, &f2, &Element::basis(Index::Int(5))).unwrap();
        assert_eq!(s, Element::basis(Index::Int(3)));
        let s = d.slice_elem(Side::Right, &f2, &Element::basis(Index::Int(5))).unwrap();
        assert_eq!(s, Element::basis(Index::Int(3)));
        let f3 = DualElement::coordinate(&alg, &Index::Int(3));
        let p = d.product(&f2, &f3, Convention::Left).unwrap();
        assert_eq!(p.functional.finite_support(), Some(&[Index::Int(5)][..]));
        assert_eq!(p.at(&Index::Int(5)), Scalar::one());
        assert!(d.membership(&p, Space::B0).holds());
    }

    #[test]
    fn sandwich_dual_is_degenerate() {
        let g = build("sandwich:ex4_3", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 4).unwrap();
        let a = dual_annihilators(&d, Convention::Right);
        assert!(a.nondegenerate().fails());
        let text = a.nondegenerate().witness().unwrap().text.clone();
        assert!(text.contains("f[e12⊗e11]"), "{text}");
    }

    #[test]
    fn unit_on_the_right_gives_the_scaled_product() {
        let g = build("trivial-right-unit:unital", &Params::default()).unwrap();
        let d = Duals::new(&g.coproduct, 6).unwrap();
        let sample = d.sample(11);
        let one = Element::from_terms(d.sweep().into_iter().map(|i| (i, Scalar::one())));
        for w1 in &sample {
            for w2 in &sample {
                let p = d.product(w1, w2, Convention::Left).unwrap();
                for a in d.sweep() {
                    assert_eq!(p.at(&a), w1.at(&a) * &w2.eval(&one));
                }
            }
        }
        let a = dual_annihilators(&d, Convention::Left);
        assert!(a.evaluated.fails());
        assert!(a.sliced.holds());
    }
}
