//! Exact scalars in ℚ(i)(t): rational functions in one formal parameter `t`
//! with Gaussian-rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn i() -> Self {
        Gauss::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Gauss::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Gauss::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::new(&self.re * &o.re, BigRational::zero());
        }
        Gauss::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn neg(&self) -> Gauss {
        Gauss::new(-self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Gauss {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return Gauss::new(self.re.recip(), BigRational::zero());
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Gauss::new(&self.re / &n, -(&self.im / &n))
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", fmt_rat(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let abs = self.im.abs();
                if abs.is_one() {
                    write!(f, "({}{}i)", fmt_rat(&self.re), sign)
                } else {
                    write!(f, "({}{}{}*i)", fmt_rat(&self.re), sign, fmt_rat(&abs))
                }
            }
        }
    }
}

/// Polynomial in `t`, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<Gauss>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Gauss) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn t() -> Self {
        Poly(vec![Gauss::zero(), Gauss::one()])
    }

    pub fn coeffs(&self) -> &[Gauss] {
        &self.0
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Gauss::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree, with the zero polynomial at degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> Gauss {
        self.0.last().cloned().unwrap_or_else(Gauss::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Gauss::zero();
        let v = (0..n)
            .map(|k| self.0.get(k).unwrap_or(&z).add(o.0.get(k).unwrap_or(&z)))
            .collect();
        Poly(v).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(Gauss::neg).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gauss::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly(v).trimmed()
    }

    pub fn scale(&self, c: &Gauss) -> Poly {
        Poly(self.0.iter().map(|a| a.mul(c)).collect()).trimmed()
    }

    /// Euclidean division by a nonzero polynomial.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.clone();
        if r.0.len() < d.0.len() {
            return (Poly::zero(), r);
        }
        let inv_lead = d.lead().inv();
        let mut q = vec![Gauss::zero(); r.0.len() - d.0.len() + 1];
        while !r.is_zero() && r.0.len() >= d.0.len() {
            let shift = r.0.len() - d.0.len();
            let c = r.lead().mul(&inv_lead);
            for (k, dk) in d.0.iter().enumerate() {
                r.0[k + shift] = r.0[k + shift].sub(&c.mul(dk));
            }
            q[shift] = c;
            r = r.trimmed();
        }
        (Poly(q).trimmed(), r)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Gauss) -> Gauss {
        self.0
            .iter()
            .rev()
            .fold(Gauss::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn conj(&self) -> Poly {
        Poly(self.0.iter().map(Gauss::conj).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut body = c.to_string();
            let negative = body.starts_with('-');
            if negative {
                body.remove(0);
            }
            let mono = match k {
                0 => body,
                _ => {
                    let tp = if k == 1 { "t".to_string() } else { format!("t^{k}") };
                    if body == "1" {
                        tp
                    } else {
                        format!("{body}*{tp}")
                    }
                }
            };
            match (first, negative) {
                (true, true) => write!(f, "-{mono}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "-{mono}")?,
                (false, false) => write!(f, "+{mono}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// An element of ℚ(i)(t), kept as `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::constant(Gauss::one()) }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { num: Poly::constant(Gauss::from_int(n)), den: Poly::constant(Gauss::one()) }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_int(n) / Scalar::from_int(d)
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Scalar { num: Poly::constant(g), den: Poly::constant(Gauss::one()) }
    }

    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    /// The formal parameter `t`.
    pub fn t() -> Self {
        Scalar { num: Poly::t(), den: Poly::constant(Gauss::one()) }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::constant(Gauss::one()) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    fn from_parts(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "division by zero scalar");
        if num.is_zero() {
            return Scalar::zero();
        }
        if den.is_constant() {
            let inv = den.lead().inv();
            return Scalar { num: num.scale(&inv), den: Poly::constant(Gauss::one()) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let inv = den.lead().inv();
        Scalar { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `t`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_gauss(&self) -> Option<Gauss> {
        if self.is_constant() {
            Some(self.num.lead())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Scalar {
        Scalar::from_parts(self.den.clone(), self.num.clone())
    }

    /// Complex conjugation on coefficients; `t` is treated as real.
    pub fn conj(&self) -> Scalar {
        Scalar::from_parts(self.num.conj(), self.den.conj())
    }

    /// Substitutes a value for `t`. Fails when the denominator vanishes there.
    pub fn substitute(&self, x: &Gauss) -> Result<Scalar, Error> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Parse(format!("denominator of {self} vanishes at t={x}")));
        }
        Ok(Scalar::from_gauss(self.num.eval(x).mul(&d.inv())))
    }

    pub fn parse(s: &str) -> Result<Scalar, Error> {
        let mut p = Parser { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected '{}' in scalar {s:?}", p.chars[p.pos])));
        }
        Ok(v)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order, only used to make collections deterministic.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.add(&o.num), den: self.den.clone() };
        }
        if self.den == o.den {
            return Scalar::from_parts(self.num.add(&o.num), self.den.clone());
        }
        Scalar::from_parts(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: self.den.clone() };
        }
        Scalar::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        assert!(!o.is_zero(), "division by zero scalar");
        Scalar::from_parts(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<Scalar, Error> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let r = self.term()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Scalar, Error> {
        let mut v = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            if c == '*' {
                v = v * r;
            } else {
                if r.is_zero() {
                    return Err(self.err("division by zero"));
                }
                v = v / r;
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<Scalar, Error> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, Error> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let e: u32 = digits.parse().map_err(|_| self.err("expected exponent"))?;
        let mut v = Scalar::one();
        for _ in 0..e {
            v = v * &base;
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Scalar, Error> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some('t') => {
                self.pos += 1;
                Ok(Scalar::t())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Scalar::from_gauss(Gauss::new(BigRational::from_integer(n), BigRational::zero())))
            }
            _ => Err(self.err("expected number, i, t or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_forms() {
        assert_eq!(Scalar::parse("3/4").unwrap(), Scalar::from_ratio(3, 4));
        let z = Scalar::parse("1/2+3/5*i").unwrap();
        assert_eq!(z, Scalar::from_ratio(1, 2) + Scalar::from_ratio(3, 5) * Scalar::i());
        let p = Scalar::parse("1 - 2*t + t^2").unwrap();
        assert_eq!(p, (Scalar::one() - Scalar::t()) * (Scalar::one() - Scalar::t()));
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("2x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "-7/3", "(1/2-i)*t^2+t-4", "i", "(t+1)/(t-1)", "(2+3*i)"] {
            let v = Scalar::parse(s).unwrap();
            assert_eq!(Scalar::parse(&v.to_string()).unwrap(), v, "{s} -> {v}");
        }
    }

    #[test]
    fn rational_functions_reduce() {
        let t = Scalar::t();
        let one = Scalar::one();
        let x = (&t * &t - one.clone()) / (&t - &one);
        assert_eq!(x, t + one);
        assert!((Scalar::t() / Scalar::t()).is_one());
    }

    #[test]
    fn t_is_transcendental() {
        let q = Scalar::t() * Scalar::t() - Scalar::t();
        assert!(!q.is_zero());
        assert!(q.substitute(&Gauss::one()).unwrap().is_zero());
    }

    #[test]
    fn gaussian_inverse() {
        let z = Scalar::parse("1+i").unwrap();
        assert_eq!(&z * &z.inv(), Scalar::one());
        assert_eq!(z.conj(), Scalar::parse("1-i").unwrap());
    }
}
