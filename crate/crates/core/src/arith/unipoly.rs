use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x - a`.
    pub fn linear_root(a: Rat) -> Self {
        Self::new(vec![-a, Rat::one()])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &UniPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| &(&acc * g) + &UniPoly::constant(c.clone()))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = UniPoly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// `x^deg * self(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics in debug builds when the division leaves a remainder.
    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiply by the least positive rational making all coefficients
    /// coprime integers, keeping the sign of the leading coefficient positive.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let s = if ints.last().unwrap().is_negative() { -g } else { g };
        ints.iter().map(|c| c / &s).collect()
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Rat {
        let n = self.deg();
        if n == 0 {
            return Rat::one();
        }
        let r = super::resultant::resultant(self, &self.derivative());
        let s = if (n * (n - 1) / 2) % 2 == 1 { -Rat::one() } else { Rat::one() };
        s * r / self.lc()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(v: &[S]) -> Result<Self> {
        Ok(Self::new(
            v.iter().map(|s| parse_rat(s.as_ref())).collect::<Result<_>>()?,
        ))
    }
}

/// Product of the distinct irreducible factors, monic.
pub fn squarefree_part(f: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(UniPoly::one());
    }
    let g = f.gcd(&f.derivative());
    Ok(f.exact_div(&g).monic())
}

/// Yun's squarefree decomposition: pairs `(a_i, i)` with `f = lc * prod a_i^i`, each `a_i` monic.
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0);
    let mut c = fp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = b.exact_div(&a);
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_c = i == 0 || !a.is_one();
            if show_c {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_c { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_c { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        UniPoly::from_strings(&v).map_err(serde::de::Error::custom)
    }
}
