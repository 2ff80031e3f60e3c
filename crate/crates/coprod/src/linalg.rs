//! Exact sparse linear algebra over [`Scalar`]: incremental echelon spans,
//! membership with certificates, nullspaces and linear solves.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::index::{Element, Index};
use crate::scalar::Scalar;

/// Combination of generator ids.
pub type Combo = BTreeMap<usize, Scalar>;

fn combo_add_scaled(into: &mut Combo, other: &Combo, c: &Scalar) {
    for (k, v) in other {
        let s = into.get(k).cloned().unwrap_or_default() + v * c;
        if s.is_zero() {
            into.remove(k);
        } else {
            into.insert(*k, s);
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: Element,
    combo: Combo,
}

/// Echelon basis of a growing span. Each row's pivot is its smallest label and
/// has coefficient one.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: BTreeMap<Index, Row>,
    generators: usize,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Index> {
        self.rows.keys()
    }

    fn reduce_tracked(&self, v: &Element) -> (Element, Combo) {
        let mut res = v.clone();
        let mut combo = Combo::new();
        let mut cursor: Option<Index> = None;
        loop {
            let lower = match &cursor {
                Some(c) => Bound::Excluded(c.clone()),
                None => Bound::Unbounded,
            };
            let hit = res
                .terms()
                .filter(|(i, _)| match &lower {
                    Bound::Excluded(c) => *i > c,
                    _ => true,
                })
                .find(|(i, _)| self.rows.contains_key(*i))
                .map(|(i, c)| (i.clone(), c.clone()));
            let Some((i, c)) = hit else { break };
            let row = &self.rows[&i];
            res.add_scaled(&row.vec, &-&c);
            combo_add_scaled(&mut combo, &row.combo, &c);
            cursor = Some(i);
        }
        (res, combo)
    }

    /// Residual of `v` after elimination; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &Element) -> Element {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a generator and returns its id. The generator may be dependent.
    pub fn insert(&mut self, v: &Element) -> usize {
        let id = self.generators;
        self.generators += 1;
        let (res, combo) = self.reduce_tracked(v);
        if let Some((p, c)) = res.terms().next().map(|(i, c)| (i.clone(), c.clone())) {
            let mut row_combo = Combo::new();
            combo_add_scaled(&mut row_combo, &combo, &Scalar::from_int(-1));
            row_combo.insert(id, Scalar::one());
            let inv = c.inv();
            let mut scaled = Combo::new();
            combo_add_scaled(&mut scaled, &row_combo, &inv);
            self.rows.insert(p, Row { vec: res.scale(&inv), combo: scaled });
        }
        id
    }

    /// Coefficients over generator ids whose combination equals `v`.
    pub fn express(&self, v: &Element) -> Option<Combo> {
        let (res, combo) = self.reduce_tracked(v);
        res.is_zero().then_some(combo)
    }

    /// Fully reduced rows keyed by pivot.
    pub fn reduced_rows(&self) -> BTreeMap<Index, Element> {
        let mut out: BTreeMap<Index, Element> = BTreeMap::new();
        for (p, row) in self.rows.iter().rev() {
            let mut v = row.vec.clone();
            let hits: Vec<(Index, Scalar)> = v
                .terms()
                .filter(|(i, _)| *i != p && out.contains_key(*i))
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect();
            for (i, c) in hits {
                v.add_scaled(&out[&i], &-&c);
            }
            out.insert(p.clone(), v);
        }
        out
    }
}

/// Unknown label used by the solvers.
pub fn var(k: usize) -> Index {
    Index::Int(k as i64)
}

fn rhs_label() -> Index {
    Index::IntPair(i64::MIN, i64::MIN)
}

/// Basis of `{x : row·x = 0 for every row}` over unknowns `0..n`.
pub fn nullspace(rows: &[Element], n: usize) -> Vec<Element> {
    let mut span = SpanBasis::new();
    for r in rows {
        span.insert(r);
    }
    let reduced = span.reduced_rows();
    let mut basis = Vec::new();
    for f in 0..n {
        let fv = var(f);
        if reduced.contains_key(&fv) {
            continue;
        }
        let mut x = Element::basis(fv.clone());
        for (p, row) in &reduced {
            let c = row.coeff(&fv);
            if !c.is_zero() {
                x.add_term(p.clone(), -c);
            }
        }
        basis.push(x);
    }
    basis
}

/// Outcome of an affine solve.
#[derive(Clone, Debug)]
pub enum Solve {
    /// A particular solution (free unknowns set to zero) and the nullity.
    Solution { x: Element, nullity: usize },
    /// Equation ids whose combination reads `0 = 1`.
    Inconsistent { certificate: Combo },
}

/// Solves `row_k · x = rhs_k` over unknowns `0..n`.
pub fn solve(rows: &[(Element, Scalar)], n: usize) -> Solve {
    let mut span = SpanBasis::new();
    for (r, b) in rows {
        let mut v = r.clone();
        v.add_term(rhs_label(), -b);
        span.insert(&v);
    }
    if let Some(row) = span.rows.get(&rhs_label()) {
        return Solve::Inconsistent { certificate: row.combo.clone() };
    }
    let reduced = span.reduced_rows();
    let mut x = Element::zero();
    for (p, row) in &reduced {
        let c = row.coeff(&rhs_label());
        x.add_term(p.clone(), -c);
    }
    Solve::Solution { x, nullity: n - reduced.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> Element {
        Element::from_terms(entries.iter().map(|(k, c)| (var(*k), Scalar::from_int(*c))))
    }

    #[test]
    fn rank_and_membership() {
        let mut s = SpanBasis::new();
        s.insert(&v(&[(0, 1), (1, 1)]));
        s.insert(&v(&[(1, 1), (2, 1)]));
        s.insert(&v(&[(0, 1), (2, -1)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&v(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!s.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn express_recovers_combination() {
        let gens = [v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(2, 5)])];
        let mut s = SpanBasis::new();
        for g in &gens {
            s.insert(g);
        }
        let target = v(&[(0, 3), (1, 1), (2, 7)]);
        let combo = s.express(&target).unwrap();
        let mut back = Element::zero();
        for (k, c) in &combo {
            back.add_scaled(&gens[*k], c);
        }
        assert_eq!(back, target);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let ns = nullspace(&[v(&[(0, 1), (1, 2), (2, 3)])], 3);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            let dot: Scalar = [(0, 1), (1, 2), (2, 3)]
                .iter()
                .fold(Scalar::zero(), |acc, (k, c)| acc + x.coeff(&var(*k)) * Scalar::from_int(*c));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let rows = vec![(v(&[(0, 1)]), Scalar::one()), (v(&[(0, 1)]), Scalar::zero())];
        match solve(&rows, 1) {
            Solve::Inconsistent { certificate } => assert_eq!(certificate.len(), 2),
            s => panic!("expected inconsistency, got {s:?}"),
        }
        let rows = vec![(v(&[(0, 1), (1, 1)]), Scalar::from_int(3))];
        match solve(&rows, 2) {
            Solve::Solution { x, nullity } => {
                assert_eq!(nullity, 1);
                assert_eq!(x.coeff(&var(0)) + x.coeff(&var(1)), Scalar::from_int(3));
            }
            s => panic!("{s:?}"),
        }
    }
}
