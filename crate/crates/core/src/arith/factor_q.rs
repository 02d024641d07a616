//! Factorization over Q: squarefree split, then a single large prime above the
//! Mignotte bound and subset recombination of the modular factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::integer::next_prime;
use super::{squarefree_decomposition, Rat, UniPoly};
use crate::error::{Error, Result};
use crate::modp::fq::{Fq, FqPoly};

/// Largest prime modulus the recombination step will use.
const MAX_PRIME: u64 = 1 << 61;

/// Monic irreducible factors of `f` over Q with multiplicities, sorted by
/// (degree, coefficients).
pub fn factor_q(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, k) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g)? {
            out.push((h, k));
        }
    }
    out.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs())
            .partial_cmp(&(b.0.deg(), b.0.coeffs()))
            .unwrap()
    });
    Ok(out)
}

pub fn is_irreducible_q(f: &UniPoly) -> Result<bool> {
    let fs = factor_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

fn l2_bound(c: &[BigInt]) -> BigInt {
    let s: BigInt = c.iter().map(|x| x * x).sum();
    s.sqrt() + 1
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |a, x| a.gcd(x))
}

/// Exact quotient `a / b` over Z when `b` divides `a`.
fn int_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (db, lb) = (b.len() - 1, b.last().unwrap());
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &c * bc;
        }
        q[i] = c;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

fn factor_squarefree(g: &UniPoly) -> Result<Vec<UniPoly>> {
    if g.deg() <= 1 {
        return Ok(vec![g.monic()]);
    }
    let mut c = g.primitive_integer();
    let n = c.len() - 1;
    let lc = c[n].abs();
    let bound = &lc * (BigInt::one() << n) * l2_bound(&c);
    let start = (&bound * BigInt::from(2)).to_u64().filter(|&b| b < MAX_PRIME).ok_or_else(|| {
        Error::BudgetExhausted("coefficients too large for single-prime factoring".into())
    })?;
    let mut p = next_prime(start);
    let modular = loop {
        if p > MAX_PRIME {
            return Err(Error::BudgetExhausted("no suitable prime".into()));
        }
        let fp = Fq::prime(p);
        let red: Vec<u64> = c
            .iter()
            .map(|x| x.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            .collect();
        if red[n] != 0 {
            let poly = fp.poly_from_u64(&red);
            let fs = fp.factor(&poly);
            if fs.iter().all(|(_, k)| *k == 1) {
                break fs.into_iter().map(|(h, _)| h).collect::<Vec<FqPoly>>();
            }
        }
        p = next_prime(p);
    };
    let pb = BigInt::from(p);
    let to_int = |h: &FqPoly| -> Vec<BigInt> { h.iter().map(|e| BigInt::from(e[0])).collect() };
    let mut remaining: Vec<Vec<BigInt>> = modular.iter().map(to_int).collect();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let r = remaining.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lcb = c.last().unwrap().clone();
            let mut prod = vec![lcb.clone()];
            for &i in &idx {
                prod = mul_mod(&prod, &remaining[i], &pb);
            }
            let cand: Vec<BigInt> = prod.iter().map(|x| symmetric(x, &pb)).collect();
            let cont = content(&cand);
            let cand: Vec<BigInt> = cand.iter().map(|x| x / &cont).collect();
            if let Some(q) = int_div(&c, &cand) {
                found.push(cand);
                c = q;
                let keep: Vec<Vec<BigInt>> = (0..r)
                    .filter(|i| !idx.contains(i))
                    .map(|i| remaining[i].clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
            // next combination
            let mut k = size;
            loop {
                if k == 0 {
                    size += 1;
                    continue 'outer;
                }
                k -= 1;
                if idx[k] < r - size + k {
                    idx[k] += 1;
                    for t in k + 1..size {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    found.push(c);
    Ok(found
        .iter()
        .map(|h| UniPoly::from_bigints(h).monic())
        .collect())
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] + x * y).mod_floor(m);
        }
    }
    r
}

/// Rational roots of `f` (distinct, ascending).
pub fn rational_roots(f: &UniPoly) -> Result<Vec<Rat>> {
    let mut r: Vec<Rat> = factor_q(f)?
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect();
    r.sort();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rational root test by the rational root theorem: an independent check
    /// of irreducibility for degrees 2 and 3.
    fn has_rational_root(g: &UniPoly) -> bool {
        let c = g.primitive_integer();
        let divs = |n: &BigInt| -> Vec<BigInt> {
            let n = n.abs().to_i64().unwrap();
            (1..=n).filter(|d| n % d == 0).map(BigInt::from).collect()
        };
        if c[0].is_zero() {
            return true;
        }
        for a in divs(&c[0]) {
            for b in divs(c.last().unwrap()) {
                for s in [1, -1] {
                    let x = Rat::new(&a * s, b.clone());
                    if g.eval(&x).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            factor_q(&p(&[-1, 0, 1])).unwrap(),
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]
        );
        assert_eq!(factor_q(&p(&[9, 3, 1])).unwrap(), vec![(p(&[9, 3, 1]), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        assert!(is_irreducible_q(&p(&[1, 0, 0, 0, 1])).unwrap());
        // (2x - 1)^2 (x^2 + x + 1)
        let f = &p(&[-1, 2]).pow(2) * &p(&[1, 1, 1]);
        let fs = factor_q(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0], (UniPoly::linear_root(Rat::new(1.into(), 2.into())), 2));
        assert_eq!(rational_roots(&f).unwrap(), vec![Rat::new(1.into(), 2.into())]);
    }

    #[test]
    fn swinnerton_dyer_quartic() {
        // minimal polynomial of sqrt 2 + sqrt 3
        assert!(is_irreducible_q(&p(&[1, 0, -10, 0, 1])).unwrap());
        let v4_21 = p(&[1, 0, -82, 0, 1]);
        assert!(is_irreducible_q(&v4_21).unwrap());
        // t0 = 25: sqrt 25 rational, splits into two quadratics
        let v4_25 = p(&[1, 0, -98, 0, 1]);
        assert_eq!(factor_q(&v4_25).unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn product_round_trips(a in prop::collection::vec(-5i64..6, 2..4),
                               b in prop::collection::vec(-5i64..6, 2..4)) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!a.is_zero() && !b.is_zero() && a.deg() >= 1 && b.deg() >= 1);
            let f = &a * &b;
            let fs = factor_q(&f).unwrap();
            let mut prod = UniPoly::constant(f.lc());
            for (g, k) in &fs {
                if g.deg() == 2 || g.deg() == 3 {
                    prop_assert!(!has_rational_root(g));
                }
                prod = &prod * &g.pow(*k);
            }
            prop_assert_eq!(prod, f);
        }
    }
}
