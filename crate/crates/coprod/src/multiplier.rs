//! Multipliers as pairs of action rules, and the exact multiplier algebra of a
//! finite-dimensional algebra.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    check_nondegenerate, mul, show, sweep_basis, AlgebraRef, Dimension, FiniteAlgebra, Verdict, Witness,
};
use crate::error::Error;
use crate::index::{Element, Index};
use crate::linalg::{nullspace, var, SpanBasis};
use crate::scalar::Scalar;

type Rule = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

/// A pair `(λ, ρ)` with `λ` acting on the left and `ρ` on the right.
#[derive(Clone)]
pub struct Multiplier {
    pub algebra: AlgebraRef,
    pub label: String,
    lambda: Rule,
    rho: Rule,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multiplier({} on {})", self.label, self.algebra.name())
    }
}

impl Multiplier {
    pub fn new(
        algebra: AlgebraRef,
        label: impl Into<String>,
        lambda: impl Fn(&Element) -> Element + Send + Sync + 'static,
        rho: impl Fn(&Element) -> Element + Send + Sync + 'static,
    ) -> Self {
        Multiplier { algebra, label: label.into(), lambda: Arc::new(lambda), rho: Arc::new(rho) }
    }

    /// `x·a`
    pub fn left(&self, a: &Element) -> Element {
        (self.lambda)(a)
    }

    /// `b·x`
    pub fn right(&self, b: &Element) -> Element {
        (self.rho)(b)
    }

    pub fn identity(algebra: AlgebraRef) -> Self {
        Multiplier::new(algebra, "1", |a| a.clone(), |b| b.clone())
    }

    pub fn zero(algebra: AlgebraRef) -> Self {
        Multiplier::new(algebra, "0", |_| Element::zero(), |_| Element::zero())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let (l, r, c1, c2) = (self.lambda.clone(), self.rho.clone(), c.clone(), c.clone());
        Multiplier::new(self.algebra.clone(), format!("({c})·{}", self.label), move |a| l(a).scale(&c1), move |b| r(b).scale(&c2))
    }

    pub fn add(&self, other: &Multiplier) -> Self {
        let (l1, r1, l2, r2) = (self.lambda.clone(), self.rho.clone(), other.lambda.clone(), other.rho.clone());
        Multiplier::new(
            self.algebra.clone(),
            format!("{} + {}", self.label, other.label),
            move |a| l1(a).add(&l2(a)),
            move |b| r1(b).add(&r2(b)),
        )
    }
}

/// `a ↦ (x ↦ a·x, y ↦ y·a)`.
pub fn embed(a: &Element, alg: &AlgebraRef) -> Multiplier {
    let (a1, a2) = (a.clone(), a.clone());
    let (g1, g2) = (alg.clone(), alg.clone());
    Multiplier::new(alg.clone(), show(&**alg, a), move |x| mul(&*g1, &a1, x), move |y| mul(&*g2, y, &a2))
}

fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || a.name() == b.name()
}

/// `m1·m2 = (λ₁∘λ₂, ρ₂∘ρ₁)`.
pub fn compose(m1: &Multiplier, m2: &Multiplier) -> Result<Multiplier, Error> {
    if !same_algebra(&m1.algebra, &m2.algebra) {
        return Err(Error::SchemeMismatch { index: m2.label.clone(), algebra: m1.algebra.name() });
    }
    let (l1, l2, r1, r2) = (m1.lambda.clone(), m2.lambda.clone(), m1.rho.clone(), m2.rho.clone());
    Ok(Multiplier::new(
        m1.algebra.clone(),
        format!("{}·{}", m1.label, m2.label),
        move |a| l1(&l2(a)),
        move |b| r2(&r1(b)),
    ))
}

/// First basis label where the two multipliers act differently, on either side.
pub fn compare_on(m1: &Multiplier, m2: &Multiplier, basis: &[Index]) -> Option<String> {
    let alg = &*m1.algebra;
    for i in basis {
        let e = Element::basis(i.clone());
        let (a, b) = (m1.left(&e), m2.left(&e));
        if a != b {
            return Some(format!("{}·{} = {} but {}·{} = {}", m1.label, alg.label(i), show(alg, &a), m2.label, alg.label(i), show(alg, &b)));
        }
        let (a, b) = (m1.right(&e), m2.right(&e));
        if a != b {
            return Some(format!("{}·{} = {} but {}·{} = {}", alg.label(i), m1.label, show(alg, &a), alg.label(i), m2.label, show(alg, &b)));
        }
    }
    None
}

/// Checks `b·λ(a) = ρ(b)·a`, `λ(ac) = λ(a)c` and `ρ(cb) = cρ(b)` on all swept basis pairs.
pub fn verify_multiplier(m: &Multiplier, depth: usize) -> Result<Verdict, Error> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let alg = &*m.algebra;
    let basis = sweep_basis(alg, depth);
    let l = |i: &Index| alg.label(i);
    for a in &basis {
        let ea = Element::basis(a.clone());
        let la = m.left(&ea);
        let ra = m.right(&ea);
        for b in &basis {
            let eb = Element::basis(b.clone());
            let lhs = mul(alg, &eb, &la);
            let rhs = mul(alg, &m.right(&eb), &ea);
            if lhs != rhs {
                return Ok(Verdict::FailsWithWitness(Witness::text(format!(
                    "b·λ(a) ≠ ρ(b)·a at a = {}, b = {}: {} vs {}",
                    l(a), l(b), show(alg, &lhs), show(alg, &rhs)
                ))));
            }
            let ab = alg.product(a, b);
            let lhs = m.left(&ab);
            let rhs = mul(alg, &la, &eb);
            if lhs != rhs {
                return Ok(Verdict::fail(format!("λ(ac) ≠ λ(a)c at a = {}, c = {}", l(a), l(b))));
            }
            let ba = alg.product(b, a);
            let lhs = m.right(&ba);
            let rhs = mul(alg, &eb, &ra);
            if lhs != rhs {
                return Ok(Verdict::fail(format!("ρ(cb) ≠ cρ(b) at c = {}, b = {}", l(b), l(a))));
            }
        }
    }
    Ok(Verdict::pass(crate::algebra::is_finite(alg), depth))
}

/// `M(A)` of a finite-dimensional non-degenerate algebra: a basis of the
/// solution space of `b·λ(a) = ρ(b)·a`, with its product as structure constants.
#[derive(Clone, Debug)]
pub struct FiniteMultiplierAlgebra {
    pub algebra: AlgebraRef,
    pub n: usize,
    /// Each basis multiplier as a vector over `2n²` unknowns: `λ` entries then `ρ` entries.
    pub basis: Vec<Element>,
    pub table: FiniteAlgebra,
    /// Coordinates of the identity multiplier.
    pub identity: Element,
}

fn lam(n: usize, out: usize, inp: usize) -> usize {
    out * n + inp
}

fn rho_var(n: usize, out: usize, inp: usize) -> usize {
    n * n + out * n + inp
}

impl FiniteMultiplierAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn labels(&self) -> Vec<Index> {
        self.algebra.enumerate(self.n)
    }

    /// The multiplier encoded by a vector over the `2n²` unknowns.
    pub fn multiplier(&self, v: &Element) -> Multiplier {
        let labels = self.labels();
        let n = self.n;
        let pos = move |i: &Index, labels: &[Index]| labels.iter().position(|x| x == i).expect("basis label");
        let (v1, v2, l1, l2) = (v.clone(), v.clone(), labels.clone(), labels);
        Multiplier::new(
            self.algebra.clone(),
            "m",
            move |a| {
                Element::from_terms(a.terms().flat_map(|(i, c)| {
                    let k = pos(i, &l1);
                    (0..n).map(|o| (l1[o].clone(), c * &v1.coeff(&var(lam(n, o, k))))).collect::<Vec<_>>()
                }))
            },
            move |b| {
                Element::from_terms(b.terms().flat_map(|(i, c)| {
                    let k = pos(i, &l2);
                    (0..n).map(|o| (l2[o].clone(), c * &v2.coeff(&var(rho_var(n, o, k))))).collect::<Vec<_>>()
                }))
            },
        )
    }

    /// Vector of a multiplier read off from its basis actions.
    pub fn vector_of(&self, m: &Multiplier) -> Element {
        let labels = self.labels();
        let n = self.n;
        let mut v = Element::zero();
        for (k, i) in labels.iter().enumerate() {
            let e = Element::basis(i.clone());
            let (l, r) = (m.left(&e), m.right(&e));
            for (o, j) in labels.iter().enumerate() {
                v.add_term(var(lam(n, o, k)), l.coeff(j));
                v.add_term(var(rho_var(n, o, k)), r.coeff(j));
            }
        }
        v
    }

    /// Coordinates of the image of `a` under the embedding.
    pub fn embed_vector(&self, a: &Element) -> Element {
        self.vector_of(&embed(a, &self.algebra))
    }

    /// Whether the image of the embedding spans all of `M(A)`.
    pub fn equals_embedding(&self) -> bool {
        let mut s = SpanBasis::new();
        for i in self.labels() {
            s.insert(&self.embed_vector(&Element::basis(i)));
        }
        s.rank() == self.dim() && self.basis.iter().all(|b| s.contains(b))
    }

    /// `embed(a)·m` and `m·embed(a)` lie in `embed(A)` for all basis `a`, `m`.
    pub fn check_ideal(&self) -> Verdict {
        let mut emb = SpanBasis::new();
        for i in self.labels() {
            emb.insert(&self.embed_vector(&Element::basis(i)));
        }
        for (k, b) in self.basis.iter().enumerate() {
            let m = self.multiplier(b);
            for i in self.labels() {
                let e = embed(&Element::basis(i.clone()), &self.algebra);
                for (side, prod) in [("a·m", compose(&e, &m)), ("m·a", compose(&m, &e))] {
                    let v = self.vector_of(&prod.expect("same algebra"));
                    if !emb.contains(&v) {
                        return Verdict::fail(format!("{side} leaves embed(A) at a = {}, m = basis {k}", self.algebra.label(&i)));
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// `m = 0` iff `embed(a)·m = 0` for all `a`, iff `m·embed(b) = 0` for all `b`,
    /// checked as injectivity of both maps by rank.
    pub fn check_density(&self) -> Verdict {
        for (side, left) in [("a·m", true), ("m·b", false)] {
            let mut rows = std::collections::BTreeMap::<Index, Element>::new();
            for (k, b) in self.basis.iter().enumerate() {
                let m = self.multiplier(b);
                for i in self.labels() {
                    let e = embed(&Element::basis(i.clone()), &self.algebra);
                    let prod = if left { compose(&e, &m) } else { compose(&m, &e) }.expect("same algebra");
                    for (j, c) in self.vector_of(&prod).terms() {
                        rows.entry(Index::pair(&i, j)).or_default().add_term(var(k), c.clone());
                    }
                }
            }
            let rows: Vec<Element> = rows.into_values().collect();
            if let Some(x) = nullspace(&rows, self.dim()).first() {
                return Verdict::fail(format!("nonzero multiplier with {side} = 0 for all basis elements: {x}"));
            }
        }
        Verdict::Holds
    }
}

pub fn finite_multiplier_algebra(alg: &AlgebraRef) -> Result<FiniteMultiplierAlgebra, Error> {
    let Dimension::Finite(n) = alg.dimension() else { return Err(Error::NotFiniteDimensional) };
    if let Verdict::FailsWithWitness(w) = check_nondegenerate(&**alg, n.max(1))? {
        return Err(Error::DegenerateProduct(w.text));
    }
    let labels = alg.enumerate(n);
    // b·λ(a) - ρ(b)·a = 0 per output label
    let mut rows = std::collections::BTreeMap::<Index, Element>::new();
    for (ka, a) in labels.iter().enumerate() {
        for (kb, b) in labels.iter().enumerate() {
            for (o, k) in labels.iter().enumerate() {
                for (out, c) in alg.product(b, k).terms() {
                    rows.entry(Index::triple(a, b, out)).or_default().add_term(var(lam(n, o, ka)), c.clone());
                }
                for (out, c) in alg.product(k, a).terms() {
                    rows.entry(Index::triple(a, b, out)).or_default().add_term(var(rho_var(n, o, kb)), -c);
                }
            }
        }
    }
    let rows: Vec<Element> = rows.into_values().collect();
    let basis = nullspace(&rows, 2 * n * n);
    let mut out = FiniteMultiplierAlgebra {
        algebra: alg.clone(),
        n,
        basis,
        table: FiniteAlgebra::new("M(A)", 0, &[])?,
        identity: Element::zero(),
    };
    let span = {
        let mut s = SpanBasis::new();
        for b in &out.basis {
            s.insert(b);
        }
        s
    };
    let express = |v: &Element| -> Result<Element, Error> {
        let combo = span.express(v).ok_or_else(|| Error::SpanSolveFailed("product left the solution space".into()))?;
        Ok(Element::from_terms(combo.into_iter().map(|(k, c)| (var(k), c))))
    };
    let d = out.basis.len();
    let mut consts = Vec::new();
    for i in 0..d {
        let mi = out.multiplier(&out.basis[i]);
        for j in 0..d {
            let mj = out.multiplier(&out.basis[j]);
            let v = out.vector_of(&compose(&mi, &mj)?);
            for (k, c) in express(&v)?.terms() {
                let Index::Int(k) = k else { unreachable!() };
                consts.push((i, j, *k as usize, c.clone()));
            }
        }
    }
    out.table = FiniteAlgebra::new(format!("M({})", alg.name()), d, &consts)?;
    let id = out.vector_of(&Multiplier::identity(alg.clone()));
    out.identity = express(&id)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FunctionAlgebra, MatrixUnits, Pattern};
    use crate::sets::Integers;

    fn m(p: i64, q: i64) -> Element {
        Element::basis(Index::IntPair(p, q))
    }

    #[test]
    fn embedding_acts_by_multiplication() {
        let c: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
        let e = embed(&m(1, 1), &c);
        assert_eq!(e.left(&m(1, 2)), m(1, 2));
        assert_eq!(e.right(&m(2, 1)), m(2, 1));
        let z = embed(&Element::zero(), &c);
        assert!(z.left(&m(1, 1)).is_zero());
        let k: AlgebraRef = Arc::new(FunctionAlgebra::new(Arc::new(Integers), "δ"));
        let d0 = embed(&Element::basis(Index::Int(0)), &k);
        assert_eq!(d0.left(&Element::basis(Index::Int(0))), Element::basis(Index::Int(0)));
        assert!(d0.left(&Element::basis(Index::Int(1))).is_zero());
    }

    #[test]
    fn broken_multiplier_is_caught() {
        let c: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
        assert!(verify_multiplier(&embed(&m(1, 2), &c), 6).unwrap().holds());
        let e = embed(&m(1, 1), &c);
        let broken = Multiplier::new(c.clone(), "broken", move |a| e.left(a), |_| Element::zero());
        assert!(verify_multiplier(&broken, 2).unwrap().fails());
    }

    #[test]
    fn composition_matches_product() {
        let c: AlgebraRef = Arc::new(MatrixUnits::infinite(Pattern::Full));
        let basis = c.enumerate(9);
        let prod = compose(&embed(&m(1, 2), &c), &embed(&m(2, 3), &c)).unwrap();
        assert_eq!(compare_on(&prod, &embed(&m(1, 3), &c), &basis), None);
        let id = compose(&Multiplier::identity(c.clone()), &embed(&m(2, 3), &c)).unwrap();
        assert_eq!(compare_on(&id, &embed(&m(2, 3), &c), &basis), None);
    }

    #[test]
    fn unital_algebras_are_their_own_multiplier_algebra() {
        for (alg, dim) in [
            (MatrixUnits::finite(Pattern::Full, 2), 4),
            (MatrixUnits::finite(Pattern::Diagonal, 3), 3),
            (MatrixUnits::finite(Pattern::Upper, 2), 3),
        ] {
            let a: AlgebraRef = Arc::new(alg);
            let ma = finite_multiplier_algebra(&a).unwrap();
            assert_eq!(ma.dim(), dim);
            assert!(ma.equals_embedding());
            assert_eq!(ma.check_ideal(), Verdict::Holds);
            assert_eq!(ma.check_density(), Verdict::Holds);
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let one = Scalar::one();
        let a: AlgebraRef =
            Arc::new(FiniteAlgebra::new("span{e11,e12}", 2, &[(0, 0, 0, one.clone()), (0, 1, 1, one)]).unwrap());
        assert!(matches!(finite_multiplier_algebra(&a), Err(Error::DegenerateProduct(_))));
    }
}
