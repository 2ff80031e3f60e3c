//! Index sets with canonical enumerations, and the monoids and groups used
//! for function algebras.

use std::fmt::Debug;

use crate::index::Index;

/// A countable or finite set of basis labels with a fixed enumeration order.
pub trait IndexSet: Send + Sync + Debug {
    fn name(&self) -> String;
    fn contains(&self, i: &Index) -> bool;
    /// The first `n` labels of the canonical enumeration (all of them if fewer).
    fn first(&self, n: usize) -> Vec<Index>;
    fn cardinality(&self) -> Option<usize>;
    /// Coarse size used to bound local computations; grows along the enumeration.
    fn size(&self, i: &Index) -> usize;
    fn label(&self, i: &Index) -> String {
        i.to_string()
    }
}

/// A cancellative monoid on an index set. Division returns the unique
/// solution when it exists.
pub trait Monoid: IndexSet {
    fn mul(&self, a: &Index, b: &Index) -> Index;
    fn unit(&self) -> Index;
    /// `x` with `x·r = p`.
    fn left_div(&self, p: &Index, r: &Index) -> Option<Index>;
    /// `y` with `c·y = p`.
    fn right_div(&self, c: &Index, p: &Index) -> Option<Index>;
    /// All `(x, y)` with `x·y = p`, when finitely many.
    fn fiber(&self, p: &Index) -> Option<Vec<(Index, Index)>>;
    fn is_commutative(&self) -> bool;
    /// Labels of the given size, used to scan a fiber shell by shell.
    fn shell(&self, k: usize) -> Vec<Index>;
}

fn int(i: &Index) -> i64 {
    match i {
        Index::Int(n) => *n,
        _ => panic!("expected an integer label, got {i}"),
    }
}

/// `{start, start+1, ...}` under addition (only meaningful as a monoid for start 0).
#[derive(Debug, Clone)]
pub struct Naturals {
    pub start: i64,
}

impl IndexSet for Naturals {
    fn name(&self) -> String {
        if self.start == 0 { "ℕ".into() } else { format!("ℕ≥{}", self.start) }
    }
    fn contains(&self, i: &Index) -> bool {
        matches!(i, Index::Int(n) if *n >= self.start)
    }
    fn first(&self, n: usize) -> Vec<Index> {
        (0..n as i64).map(|k| Index::Int(self.start + k)).collect()
    }
    fn cardinality(&self) -> Option<usize> {
        None
    }
    fn size(&self, i: &Index) -> usize {
        (int(i) - self.start).max(0) as usize
    }
}

impl Monoid for Naturals {
    fn mul(&self, a: &Index, b: &Index) -> Index {
        Index::Int(int(a) + int(b))
    }
    fn unit(&self) -> Index {
        Index::Int(0)
    }
    fn left_div(&self, p: &Index, r: &Index) -> Option<Index> {
        let x = int(p) - int(r);
        (x >= 0).then_some(Index::Int(x))
    }
    fn right_div(&self, c: &Index, p: &Index) -> Option<Index> {
        self.left_div(p, c)
    }
    fn fiber(&self, p: &Index) -> Option<Vec<(Index, Index)>> {
        let p = int(p);
        Some((0..=p).map(|x| (Index::Int(x), Index::Int(p - x))).collect())
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn shell(&self, k: usize) -> Vec<Index> {
        vec![Index::Int(self.start + k as i64)]
    }
}

/// ℤ under addition, enumerated 0, 1, -1, 2, -2, ...
#[derive(Debug, Clone)]
pub struct Integers;

impl IndexSet for Integers {
    fn name(&self) -> String {
        "ℤ".into()
    }
    fn contains(&self, i: &Index) -> bool {
        matches!(i, Index::Int(_))
    }
    fn first(&self, n: usize) -> Vec<Index> {
        (0..n as i64)
            .map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) })
            .map(Index::Int)
            .collect()
    }
    fn cardinality(&self) -> Option<usize> {
        None
    }
    fn size(&self, i: &Index) -> usize {
        int(i).unsigned_abs() as usize
    }
}

impl Monoid for Integers {
    fn mul(&self, a: &Index, b: &Index) -> Index {
        Index::Int(int(a) + int(b))
    }
    fn unit(&self) -> Index {
        Index::Int(0)
    }
    fn left_div(&self, p: &Index, r: &Index) -> Option<Index> {
        Some(Index::Int(int(p) - int(r)))
    }
    fn right_div(&self, c: &Index, p: &Index) -> Option<Index> {
        Some(Index::Int(int(p) - int(c)))
    }
    fn fiber(&self, _p: &Index) -> Option<Vec<(Index, Index)>> {
        None
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn shell(&self, k: usize) -> Vec<Index> {
        if k == 0 {
            vec![Index::Int(0)]
        } else {
            vec![Index::Int(k as i64), Index::Int(-(k as i64))]
        }
    }
}

/// The free group on `a`, `b`; letters 1, -1, 2, -2 stand for a, a⁻¹, b, b⁻¹.
/// Enumerated in shortlex order.
#[derive(Debug, Clone)]
pub struct FreeGroup2;

const LETTERS: [i8; 4] = [1, -1, 2, -2];

fn word(i: &Index) -> &[i8] {
    match i {
        Index::Word(w) => w,
        _ => panic!("expected a word label, got {i}"),
    }
}

fn reduce_word(mut w: Vec<i8>) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(w.len());
    for l in w.drain(..) {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl FreeGroup2 {
    pub fn inverse(&self, a: &Index) -> Index {
        Index::Word(word(a).iter().rev().map(|l| -l).collect())
    }

    fn words_of_length(k: usize) -> Vec<Vec<i8>> {
        let mut layer: Vec<Vec<i8>> = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for w in &layer {
                for l in LETTERS {
                    if w.last() != Some(&-l) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
            layer = next;
        }
        layer
    }
}

impl IndexSet for FreeGroup2 {
    fn name(&self) -> String {
        "F₂".into()
    }
    fn contains(&self, i: &Index) -> bool {
        match i {
            Index::Word(w) => w.iter().all(|l| LETTERS.contains(l)) && reduce_word(w.clone()) == *w,
            _ => false,
        }
    }
    fn first(&self, n: usize) -> Vec<Index> {
        let mut out = Vec::new();
        let mut k = 0;
        while out.len() < n {
            for w in Self::words_of_length(k) {
                if out.len() == n {
                    break;
                }
                out.push(Index::Word(w));
            }
            k += 1;
        }
        out
    }
    fn cardinality(&self) -> Option<usize> {
        None
    }
    fn size(&self, i: &Index) -> usize {
        word(i).len()
    }
}

impl Monoid for FreeGroup2 {
    fn mul(&self, a: &Index, b: &Index) -> Index {
        let mut w = word(a).to_vec();
        w.extend_from_slice(word(b));
        Index::Word(reduce_word(w))
    }
    fn unit(&self) -> Index {
        Index::Word(vec![])
    }
    fn left_div(&self, p: &Index, r: &Index) -> Option<Index> {
        Some(self.mul(p, &self.inverse(r)))
    }
    fn right_div(&self, c: &Index, p: &Index) -> Option<Index> {
        Some(self.mul(&self.inverse(c), p))
    }
    fn fiber(&self, _p: &Index) -> Option<Vec<(Index, Index)>> {
        None
    }
    fn is_commutative(&self) -> bool {
        false
    }
    fn shell(&self, k: usize) -> Vec<Index> {
        Self::words_of_length(k).into_iter().map(Index::Word).collect()
    }
}

/// The symmetric group on three points; a label is the image array of a permutation.
/// Composition is `(σ·τ)(x) = σ(τ(x))`.
#[derive(Debug, Clone)]
pub struct Sym3;

impl Sym3 {
    pub fn elements() -> Vec<Index> {
        let perms: [[i8; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        perms.iter().map(|p| Index::Word(p.to_vec())).collect()
    }

    pub fn inverse(&self, a: &Index) -> Index {
        let p = word(a);
        let mut inv = vec![0i8; 3];
        for (x, &y) in p.iter().enumerate() {
            inv[y as usize] = x as i8;
        }
        Index::Word(inv)
    }
}

impl IndexSet for Sym3 {
    fn name(&self) -> String {
        "S₃".into()
    }
    fn contains(&self, i: &Index) -> bool {
        Sym3::elements().contains(i)
    }
    fn first(&self, n: usize) -> Vec<Index> {
        Sym3::elements().into_iter().take(n).collect()
    }
    fn cardinality(&self) -> Option<usize> {
        Some(6)
    }
    fn size(&self, _i: &Index) -> usize {
        0
    }
    fn label(&self, i: &Index) -> String {
        let p = word(i);
        format!("[{}{}{}]", p[0] + 1, p[1] + 1, p[2] + 1)
    }
}

impl Monoid for Sym3 {
    fn mul(&self, a: &Index, b: &Index) -> Index {
        let (s, t) = (word(a), word(b));
        Index::Word((0..3).map(|x| s[t[x] as usize]).collect())
    }
    fn unit(&self) -> Index {
        Index::Word(vec![0, 1, 2])
    }
    fn left_div(&self, p: &Index, r: &Index) -> Option<Index> {
        Some(self.mul(p, &self.inverse(r)))
    }
    fn right_div(&self, c: &Index, p: &Index) -> Option<Index> {
        Some(self.mul(&self.inverse(c), p))
    }
    fn fiber(&self, p: &Index) -> Option<Vec<(Index, Index)>> {
        Some(Sym3::elements().into_iter().map(|x| {
            let y = self.right_div(&x, p).unwrap();
            (x, y)
        }).collect())
    }
    fn is_commutative(&self) -> bool {
        false
    }
    fn shell(&self, k: usize) -> Vec<Index> {
        if k == 0 { Sym3::elements() } else { vec![] }
    }
}

/// Pairs `(i, j)` with `i ≤ j` (or all pairs), starting at `start`, ordered by
/// `max(i, j)` then lexicographically.
#[derive(Debug, Clone)]
pub struct IntPairs {
    pub start: i64,
    pub upper_only: bool,
}

impl IndexSet for IntPairs {
    fn name(&self) -> String {
        if self.upper_only { "{(i,j) : i ≤ j}".into() } else { "ℕ×ℕ".into() }
    }
    fn contains(&self, i: &Index) -> bool {
        matches!(i, Index::IntPair(p, q) if *p >= self.start && *q >= self.start && (!self.upper_only || p <= q))
    }
    fn first(&self, n: usize) -> Vec<Index> {
        shell_pairs(self.start, n, |p, q| !self.upper_only || p <= q)
    }
    fn cardinality(&self) -> Option<usize> {
        None
    }
    fn size(&self, i: &Index) -> usize {
        match i {
            Index::IntPair(p, q) => ((*p).max(*q) - self.start).max(0) as usize,
            _ => 0,
        }
    }
}

/// First `n` pairs over `start..` in shell order, filtered by `keep`.
pub fn shell_pairs(start: i64, n: usize, keep: impl Fn(i64, i64) -> bool) -> Vec<Index> {
    let mut out = Vec::new();
    let mut m = start;
    while out.len() < n {
        let mut shell: Vec<(i64, i64)> = Vec::new();
        for p in start..=m {
            for q in start..=m {
                if p.max(q) == m && keep(p, q) {
                    shell.push((p, q));
                }
            }
        }
        for (p, q) in shell {
            if out.len() == n {
                break;
            }
            out.push(Index::IntPair(p, q));
        }
        m += 1;
        if m - start > 4 * n as i64 + 4 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_enumeration_zigzags() {
        assert_eq!(
            Integers.first(6),
            [0, 1, -1, 2, -2, 3].iter().map(|&n| Index::Int(n)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn free_group_shortlex() {
        let f = FreeGroup2.first(6);
        assert_eq!(f[0], Index::Word(vec![]));
        assert_eq!(f[5], Index::Word(vec![1, 1]));
        assert_eq!(FreeGroup2.shell(2).len(), 12);
        let a = Index::Word(vec![1, 2]);
        assert_eq!(FreeGroup2.mul(&a, &FreeGroup2.inverse(&a)), FreeGroup2.unit());
    }

    #[test]
    fn sym3_is_a_group() {
        let s = Sym3;
        let els = Sym3::elements();
        for a in &els {
            assert_eq!(s.mul(a, &s.inverse(a)), s.unit());
            for b in &els {
                for c in &els {
                    assert_eq!(s.mul(&s.mul(a, b), c), s.mul(a, &s.mul(b, c)));
                }
            }
        }
        assert!(!s.is_commutative());
        assert_ne!(s.mul(&els[1], &els[2]), s.mul(&els[2], &els[1]));
    }

    #[test]
    fn shell_order_of_pairs() {
        let p = shell_pairs(1, 6, |_, _| true);
        let want = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)];
        assert_eq!(p, want.iter().map(|&(a, b)| Index::IntPair(a, b)).collect::<Vec<_>>());
    }
}
