//! Integer and rational helpers: primality, valuations, CRT.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin. The witness set {2,3,5,7,11,13,17,19,23,29,31,37}
/// is exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        Some(s0.rem_euclid(m))
    } else {
        None
    }
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)` for nonzero rational `x`; zero maps to [`Error::InfiniteValuation`].
pub fn rational_valuation(x: &Rat, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    ensure_prime(p)?;
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Least non-negative solution of `x = r_i mod m_i` for pairwise coprime moduli.
pub fn crt_combine(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (mi, ri) in congruences {
        if !mi.is_positive() {
            return Err(Error::NonCoprimeModuli);
        }
        if !m.gcd(mi).is_one() {
            return Err(Error::NonCoprimeModuli);
        }
        // x + m*k = ri (mod mi)
        let inv = mod_inverse_big(&(&m % mi), mi).ok_or(Error::NonCoprimeModuli)?;
        let k = ((ri - &x) * inv).mod_floor(mi);
        x += &m * k;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok(x)
}

pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduce a p-integral rational modulo `modulus` (a power of `p`).
pub fn rat_mod(x: &Rat, modulus: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse_big(x.denom(), modulus)?;
    Some((x.numer() * inv).mod_floor(modulus))
}

pub fn rat_mod_p(x: &Rat, p: u64) -> Option<u64> {
    rat_mod(x, &BigInt::from(p)).map(|v| v.to_u64().unwrap())
}

/// Prime divisors of `|n|` up to `10^6` by trial division, plus the leftover
/// cofactor when it fits in 64 bits and is prime.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut n = n.abs();
    let mut d = 2u64;
    while d <= 1_000_000 {
        let db = BigInt::from(d);
        if &db * &db > n {
            break;
        }
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if let Some(v) = n.to_u64() {
            if is_prime(v) {
                out.push(v);
            }
        }
    }
    out
}

/// Legendre symbol of `a` modulo odd prime `p`: 0, 1 or -1.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}
