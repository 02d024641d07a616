//! Polynomials over prime fields, Frobenius cycle types and reduction of
//! relative polynomials at degree-one primes.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::integer::{ensure_prime, rat_mod_p};
use crate::arith::{NfPoly, Rat, UniPoly};
use crate::error::{Error, Result};
use crate::modp::fq::Fq;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, coeffs: &[u64]) -> Result<Self> {
        ensure_prime(p)?;
        let mut c: Vec<u64> = coeffs.iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(PolyModP { p, coeffs: c })
    }

    pub fn from_ints(p: u64, coeffs: &[i64]) -> Result<Self> {
        let c: Vec<u64> = coeffs.iter().map(|x| x.rem_euclid(p as i64) as u64).collect();
        Self::new(p, &c)
    }

    /// Reduction of a polynomial with `p`-integral rational coefficients.
    pub fn from_rat_poly(f: &UniPoly, p: u64) -> Result<Self> {
        ensure_prime(p)?;
        let c = f
            .coeffs()
            .iter()
            .map(|x| rat_mod_p(x, p).ok_or(Error::NonIntegral { p }))
            .collect::<Result<Vec<u64>>>()?;
        Self::new(p, &c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p) as u64
    }

    fn field(&self) -> Fq {
        Fq::prime(self.p)
    }

    fn to_fq(&self) -> Vec<Vec<u64>> {
        self.coeffs.iter().map(|&c| vec![c]).collect()
    }

    fn from_fq(p: u64, f: &[Vec<u64>]) -> Self {
        PolyModP { p, coeffs: f.iter().map(|e| e[0]).collect() }
    }

    pub fn is_squarefree(&self) -> bool {
        let k = self.field();
        let f = self.to_fq();
        k.poly_gcd(&f, &k.poly_deriv(&f)).len() <= 1
    }
}

/// Complete factorization into monic irreducibles with multiplicities, sorted
/// by (degree, coefficients).
pub fn factor_mod_p(f: &PolyModP) -> Result<Vec<(PolyModP, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.field();
    Ok(k.factor(&f.to_fq())
        .into_iter()
        .map(|(g, m)| (PolyModP::from_fq(f.p, &g), m))
        .collect())
}

/// All roots in `[0, p)`, ascending.
pub fn roots_mod_p(f: &PolyModP) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.field().roots(&f.to_fq()).into_iter().map(|e| e[0]).collect())
}

/// Degrees of the irreducible factors of a squarefree reduction, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType(pub Vec<usize>);

impl CycleType {
    pub fn order(&self) -> usize {
        self.0.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub cycle_type: CycleType,
    pub frobenius_order: usize,
}

/// Cycle type of Frobenius at an unramified prime `p` for monic `f`.
pub fn frobenius_data(f: &UniPoly, p: u64) -> Result<FrobeniusData> {
    let red = PolyModP::from_rat_poly(f, p)?;
    if red.degree() != Some(f.deg()) || !red.is_squarefree() {
        return Err(Error::RamifiedOrBad { p });
    }
    let mut degs: Vec<usize> = factor_mod_p(&red)?
        .iter()
        .map(|(g, _)| g.degree().unwrap())
        .collect();
    degs.sort();
    let ct = CycleType(degs);
    Ok(FrobeniusData { frobenius_order: ct.order(), cycle_type: ct })
}

/// Substitute `t = a` in a polynomial whose coefficients lie in `Q[t]/(m)` and
/// reduce modulo `p`; `a` must be a root of `m` modulo `p`.
pub fn reduce_relative(r: &NfPoly, m: &UniPoly, prime: (u64, u64)) -> Result<PolyModP> {
    let (p, a) = prime;
    let mm = PolyModP::from_rat_poly(m, p)?;
    if mm.eval(a % p) != 0 {
        return Err(Error::NotARoot { p, a });
    }
    let coeffs = r
        .iter()
        .map(|c| {
            let red = PolyModP::from_rat_poly(c, p)?;
            Ok(red.eval(a % p))
        })
        .collect::<Result<Vec<u64>>>()?;
    PolyModP::new(p, &coeffs)
}

/// `r` with rational coefficients seen as a relative polynomial.
pub fn constant_relative(r: &UniPoly) -> NfPoly {
    r.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect()
}

pub fn rat_poly_mod(f: &UniPoly, p: u64) -> Option<Vec<u64>> {
    f.coeffs().iter().map(|c: &Rat| rat_mod_p(c, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unipoly::rat;

    fn pm(p: u64, c: &[i64]) -> PolyModP {
        PolyModP::from_ints(p, c).unwrap()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            factor_mod_p(&pm(5, &[1, 0, 1])).unwrap(),
            vec![(pm(5, &[-3, 1]), 1), (pm(5, &[-2, 1]), 1)]
        );
        assert_eq!(factor_mod_p(&pm(3, &[1, 0, 1])).unwrap(), vec![(pm(3, &[1, 0, 1]), 1)]);
        assert_eq!(factor_mod_p(&pm(5, &[0, 0, 1])).unwrap(), vec![(pm(5, &[0, 1]), 2)]);
        assert_eq!(factor_mod_p(&pm(5, &[])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn frobenius_examples() {
        let f = UniPoly::from_ints(&[-1, -4, -1, 1]);
        let d = frobenius_data(&f, 7).unwrap();
        assert_eq!(d.cycle_type, CycleType(vec![3]));
        assert_eq!(d.frobenius_order, 3);
        let d = frobenius_data(&UniPoly::from_ints(&[1, 0, 1]), 13).unwrap();
        assert_eq!((d.cycle_type, d.frobenius_order), (CycleType(vec![1, 1]), 1));
        let d = frobenius_data(&UniPoly::from_ints(&[-1, 1]), 5).unwrap();
        assert_eq!((d.cycle_type, d.frobenius_order), (CycleType(vec![1]), 1));
        assert_eq!(
            frobenius_data(&UniPoly::from_ints(&[-10, 0, 1]), 5),
            Err(Error::RamifiedOrBad { p: 5 })
        );
        let half = UniPoly::new(vec![Rat::new(1.into(), 5.into()), rat(1)]);
        assert_eq!(frobenius_data(&half, 5), Err(Error::NonIntegral { p: 5 }));
    }

    #[test]
    fn roots_examples() {
        assert_eq!(roots_mod_p(&pm(7, &[9, 3, 1])).unwrap(), vec![5, 6]);
        assert_eq!(roots_mod_p(&pm(5, &[9, 3, 1])).unwrap(), Vec::<u64>::new());
        assert_eq!(roots_mod_p(&pm(5, &[0, 1])).unwrap(), vec![0]);
    }

    #[test]
    fn roots_match_exhaustive_evaluation() {
        for p in crate::arith::integer::primes_between(2, 100) {
            for s in 0..6i64 {
                let f = pm(p, &[s * 7 - 3, s - 1, 2 + s, 0, 1]);
                let brute: Vec<u64> = (0..p).filter(|&a| f.eval(a) == 0).collect();
                assert_eq!(roots_mod_p(&f).unwrap(), brute, "p={p}");
            }
        }
    }

    #[test]
    fn relative_reduction() {
        let m = UniPoly::from_ints(&[9, 3, 1]);
        // Z - t at (7, 6)
        let r = vec![UniPoly::from_ints(&[0, -1]), UniPoly::one()];
        assert_eq!(reduce_relative(&r, &m, (7, 6)).unwrap(), pm(7, &[-6, 1]));
        // Z^2 + t Z + 1 with m = T at (5, 0)
        let r = vec![UniPoly::one(), UniPoly::from_ints(&[0, 1]), UniPoly::one()];
        assert_eq!(
            reduce_relative(&r, &UniPoly::from_ints(&[0, 1]), (5, 0)).unwrap(),
            pm(5, &[1, 0, 1])
        );
        // Z^2 - (t + 1)/3 at (7, 6): (6 + 1)/3 = 0 mod 7
        let third = Rat::new(1.into(), 3.into());
        let r = vec![
            UniPoly::new(vec![-third.clone(), -third]),
            UniPoly::zero(),
            UniPoly::one(),
        ];
        assert_eq!(reduce_relative(&r, &m, (7, 6)).unwrap(), pm(7, &[0, 0, 1]));
        assert_eq!(reduce_relative(&r, &m, (7, 1)), Err(Error::NotARoot { p: 7, a: 1 }));
    }
}
