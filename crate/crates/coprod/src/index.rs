//! Basis labels and finitely supported linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// A basis label. The derived order is the canonical storage order of elements;
/// enumeration order for truncation is defined per algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Int(i64),
    IntPair(i64, i64),
    /// Group element: reduced word for free groups, image array for permutations.
    Word(Vec<i8>),
    /// `Finite(k, n)`: the k-th basis vector of an n-dimensional algebra.
    Finite(u32, u32),
    Pair(Box<Index>, Box<Index>),
}

impl Index {
    pub fn pair(a: &Index, b: &Index) -> Index {
        Index::Pair(Box::new(a.clone()), Box::new(b.clone()))
    }

    pub fn triple(a: &Index, b: &Index, c: &Index) -> Index {
        Index::pair(&Index::pair(a, b), c)
    }

    pub fn split(&self) -> Option<(&Index, &Index)> {
        match self {
            Index::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Splits a triple built with [`Index::triple`].
    pub fn split3(&self) -> Option<(&Index, &Index, &Index)> {
        let (ab, c) = self.split()?;
        let (a, b) = ab.split()?;
        Some((a, b, c))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Int(n) => write!(f, "{n}"),
            Index::IntPair(p, q) => write!(f, "{p},{q}"),
            Index::Word(w) if w.is_empty() => write!(f, "1"),
            Index::Word(w) => {
                for l in w {
                    let c = match l {
                        1 => 'a',
                        -1 => 'A',
                        2 => 'b',
                        -2 => 'B',
                        k => char::from_digit(k.unsigned_abs() as u32, 10).unwrap_or('?'),
                    };
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Index::Finite(k, _) => write!(f, "{k}"),
            Index::Pair(a, b) => write!(f, "{a}⊗{b}"),
        }
    }
}

/// Finitely supported map from basis labels to scalars, zero entries never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(BTreeMap<Index, Scalar>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeMap::new())
    }

    pub fn basis(i: Index) -> Self {
        Element::term(i, Scalar::one())
    }

    pub fn term(i: Index, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(i, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Index, Scalar)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    /// Drops explicitly stored zeros. Elements built through this API are
    /// already canonical, so this is the identity on them.
    pub fn canonicalize(&self) -> Self {
        Element(self.0.iter().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i.clone(), c.clone())).collect())
    }

    pub fn add_term(&mut self, i: Index, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(i) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.0 {
            self.add_term(i.clone(), v * c);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, &Scalar::one());
        e
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, &Scalar::from_int(-1));
        e
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element(self.0.iter().map(|(i, v)| (i.clone(), v * c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: &Index) -> Scalar {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &Scalar)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Index> {
        self.0.keys()
    }

    /// Simple tensor `x⊗y` on pair labels.
    pub fn tensor(x: &Element, y: &Element) -> Element {
        let mut e = Element::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                e.add_term(Index::pair(i, j), a * b);
            }
        }
        e
    }

    /// Linear extension of a map on labels.
    pub fn map_linear(&self, mut f: impl FnMut(&Index) -> Element) -> Element {
        let mut e = Element::zero();
        for (i, c) in self.terms() {
            e.add_scaled(&f(i), c);
        }
        e
    }

    /// Renders with a caller-supplied label for each basis index.
    pub fn render(&self, label: &dyn Fn(&Index) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (i, c)) in self.terms().enumerate() {
            let l = label(i);
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.is_constant() => (true, rest.to_string()),
                _ => (false, cs),
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if body == "1" {
                out.push_str(&l);
            } else if c.is_constant() && !body.contains(['+', '-']) {
                out.push_str(&format!("{body}·{l}"));
            } else {
                out.push_str(&format!("({body})·{l}"));
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("e[{i}]")))
    }
}

impl FromIterator<(Index, Scalar)> for Element {
    fn from_iter<T: IntoIterator<Item = (Index, Scalar)>>(iter: T) -> Self {
        Element::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_entries() {
        let mut e = Element::basis(Index::Int(1));
        e.add_term(Index::Int(1), Scalar::from_int(-1));
        assert!(e.is_zero());
        assert_eq!(e, Element::zero());
    }

    #[test]
    fn tensor_is_bilinear_on_labels() {
        let x = Element::from_terms([(Index::Int(0), Scalar::from_int(2)), (Index::Int(1), Scalar::one())]);
        let y = Element::basis(Index::Int(3));
        let t = Element::tensor(&x, &y);
        assert_eq!(t.coeff(&Index::pair(&Index::Int(0), &Index::Int(3))), Scalar::from_int(2));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn render_signs() {
        let e = Element::from_terms([(Index::Int(0), Scalar::from_int(-1)), (Index::Int(2), Scalar::from_ratio(3, 2))]);
        assert_eq!(e.render(&|i| format!("δ{i}")), "-δ0 + 3/2·δ2");
    }
}
