//! Arithmetic in `F_q = F_p[w]/(m(w))` and complete factorization of
//! polynomials over it (squarefree split, distinct degree, equal degree).

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::integer::{inv_mod, is_prime};

/// Default seed of the equal-degree splitting PRNG.
pub const DEFAULT_SEED: u64 = 0x6753_4c5f_7365_6564;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Override the equal-degree splitting seed (process wide).
pub fn set_seed(seed: u64) {
    SEED.store(seed, Ordering::Relaxed);
}

pub fn seed() -> u64 {
    SEED.load(Ordering::Relaxed)
}

/// An element of `F_q`: `d` coordinates in `[0, p)` on the power basis of `w`.
pub type Elem = Vec<u64>;
/// Dense ascending polynomial over `F_q`; no trailing zero coefficients.
pub type FqPoly = Vec<Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    /// Monic defining polynomial over `F_p`, ascending, length `d + 1`.
    modulus: Vec<u64>,
}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Self {
        debug_assert!(is_prime(p));
        Fq { p, modulus: vec![0, 1] }
    }

    /// `F_p[w]/(m)`, `m` monic irreducible over `F_p` (not checked here).
    pub fn extension(p: u64, modulus: Vec<u64>) -> Self {
        debug_assert_eq!(*modulus.last().unwrap(), 1);
        Fq { p, modulus }
    }

    /// The first monic irreducible polynomial of degree `d` over `F_p` in
    /// lexicographic order of the low coefficients.
    pub fn with_degree(p: u64, d: usize) -> Self {
        let fp = Fq::prime(p);
        if d == 1 {
            return fp;
        }
        let mut low = vec![0u64; d];
        loop {
            // increment low as a base-p counter
            for c in low.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
            let mut m = low.clone();
            m.push(1);
            let poly: FqPoly = m.iter().map(|&c| vec![c]).collect();
            if fp.is_irreducible(&poly) {
                return Fq::extension(p, m);
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^d`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    // ---- elements -------------------------------------------------------

    pub fn zero(&self) -> Elem {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> Elem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn from_i64(&self, c: i64) -> Elem {
        self.from_u64(c.rem_euclid(self.p as i64) as u64)
    }

    /// The generator `w` (for `d = 1` this is the root of `w`, i.e. 0).
    pub fn gen(&self) -> Elem {
        if self.degree() == 1 {
            return self.from_u64((self.p - self.modulus[0]) % self.p);
        }
        let mut e = self.zero();
        e[1] = 1;
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.degree();
        let p = self.p as u128;
        if d == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % p) as u64];
        }
        let mut t = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                t[i + j] = (t[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..d].iter().enumerate() {
                t[k - d + j] = (t[k - d + j] + (p - c) * m as u128) % p;
            }
            t[k] = 0;
        }
        t[..d].iter().map(|&x| x as u64).collect()
    }

    pub fn pow(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!self.is_zero(a), "inverse of zero in F_q");
        if self.degree() == 1 {
            return vec![inv_mod(a[0] as i128, self.p as i128).unwrap() as u64];
        }
        self.pow(a, &(self.order() - 2u32))
    }

    /// `a^(1/p)`, the inverse Frobenius.
    pub fn pth_root(&self, a: &Elem) -> Elem {
        let e = BigUint::from(self.p).pow(self.degree() as u32 - 1);
        self.pow(a, &e)
    }

    // ---- polynomials ----------------------------------------------------

    pub fn trim(&self, f: &mut FqPoly) {
        while f.last().is_some_and(|c| self.is_zero(c)) {
            f.pop();
        }
    }

    pub fn poly_from_u64(&self, c: &[u64]) -> FqPoly {
        let mut f: FqPoly = c.iter().map(|&x| self.from_u64(x)).collect();
        self.trim(&mut f);
        f
    }

    pub fn poly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut r: FqPoly = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(&mut r);
        r
    }

    pub fn poly_sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut r: FqPoly = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(&mut r);
        r
    }

    pub fn poly_scale(&self, a: &FqPoly, c: &Elem) -> FqPoly {
        let mut r: FqPoly = a.iter().map(|x| self.mul(x, c)).collect();
        self.trim(&mut r);
        r
    }

    pub fn poly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] = self.add(&r[i + j], &self.mul(x, y));
            }
        }
        self.trim(&mut r);
        r
    }

    pub fn poly_divrem(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let db = b.len() - 1;
        if a.len() <= db {
            return (vec![], a.clone());
        }
        let inv = self.inv(&b[db]);
        let mut r = a.clone();
        let mut q = vec![self.zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.mul(&r[i + db], &inv);
            if !self.is_zero(&c) {
                for (j, bc) in b.iter().enumerate() {
                    r[i + j] = self.sub(&r[i + j], &self.mul(&c, bc));
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        self.trim(&mut r);
        self.trim(&mut q);
        (q, r)
    }

    pub fn poly_rem(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.poly_divrem(a, b).1
    }

    pub fn poly_monic(&self, a: &FqPoly) -> FqPoly {
        match a.last() {
            None => vec![],
            Some(l) => self.poly_scale(a, &self.inv(l)),
        }
    }

    pub fn poly_gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    pub fn poly_deriv(&self, a: &FqPoly) -> FqPoly {
        let mut r: FqPoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(c, &self.from_u64(i as u64)))
            .collect();
        self.trim(&mut r);
        r
    }

    pub fn poly_eval(&self, a: &FqPoly, x: &Elem) -> Elem {
        a.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn poly_mulmod(&self, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> FqPoly {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_powmod(&self, a: &FqPoly, e: &BigUint, m: &FqPoly) -> FqPoly {
        let mut r = self.poly_rem(&vec![self.one()], m);
        let base = self.poly_rem(a, m);
        for i in (0..e.bits()).rev() {
            r = self.poly_mulmod(&r, &r, m);
            if e.bit(i) {
                r = self.poly_mulmod(&r, &base, m);
            }
        }
        r
    }

    fn x_poly(&self) -> FqPoly {
        vec![self.zero(), self.one()]
    }

    /// Irreducibility: no factor of degree `<= n/2`.
    pub fn is_irreducible(&self, f: &FqPoly) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        let f = self.poly_monic(f);
        let q = self.order();
        let x = self.x_poly();
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = self.poly_powmod(&xp, &q, &f);
            if self.poly_gcd(&f, &self.poly_sub(&xp, &x)).len() > 1 {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition: `(g, k)` with `f = lc * prod g^k`, each `g` monic squarefree.
    pub fn squarefree(&self, f: &FqPoly) -> Vec<(FqPoly, usize)> {
        let mut out = Vec::new();
        self.sqf_rec(&self.poly_monic(f), 1, &mut out);
        // merge equal multiplicities
        out.sort_by_key(|(_, k)| *k);
        let mut merged: Vec<(FqPoly, usize)> = Vec::new();
        for (g, k) in out {
            match merged.last_mut() {
                Some((h, kk)) if *kk == k => *h = self.poly_mul(h, &g),
                _ => merged.push((g, k)),
            }
        }
        merged
    }

    fn sqf_rec(&self, f: &FqPoly, mult: usize, out: &mut Vec<(FqPoly, usize)>) {
        if f.len() <= 1 {
            return;
        }
        let p = self.p as usize;
        let fp = self.poly_deriv(f);
        if fp.is_empty() {
            // f = g(x^p)
            let g: FqPoly = f.iter().step_by(p).map(|c| self.pth_root(c)).collect();
            self.sqf_rec(&g, mult * p, out);
            return;
        }
        let mut c = self.poly_gcd(f, &fp);
        let mut w = self.poly_divrem(f, &c).0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.poly_gcd(&w, &c);
            let z = self.poly_divrem(&w, &y).0;
            if z.len() > 1 {
                out.push((self.poly_monic(&z), i * mult));
            }
            i += 1;
            w = y;
            c = self.poly_divrem(&c, &w).0;
        }
        if c.len() > 1 {
            let g: FqPoly = c.iter().step_by(p).map(|x| self.pth_root(x)).collect();
            self.sqf_rec(&self.poly_monic(&g), mult * p, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn ddf(&self, f: &FqPoly) -> Vec<(FqPoly, usize)> {
        let q = self.order();
        let x = self.x_poly();
        let mut out = Vec::new();
        let mut h = f.clone();
        let mut xp = x.clone();
        let mut d = 1;
        while h.len() > 2 * d {
            xp = self.poly_powmod(&xp, &q, &h);
            let g = self.poly_gcd(&h, &self.poly_sub(&xp, &x));
            if g.len() > 1 {
                h = self.poly_divrem(&h, &g).0;
                xp = self.poly_rem(&xp, &h);
                out.push((g, d));
            }
            d += 1;
        }
        if h.len() > 1 {
            let deg = h.len() - 1;
            out.push((self.poly_monic(&h), deg));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles of degree `d`.
    pub fn edf(&self, f: &FqPoly, d: usize) -> Vec<FqPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.clone()];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ (n as u64) << 32 ^ self.p);
        let q = self.order();
        let odd = self.p != 2;
        let half = if odd { (q.pow(d as u32) - 1u32) / 2u32 } else { BigUint::zero() };
        let mut shift = 0u64;
        let shift_cap = self.p.min(64);
        loop {
            // deterministic linear shifts first, then seeded random polynomials
            let a: FqPoly = if odd && shift < shift_cap {
                shift += 1;
                vec![self.from_u64(shift - 1), self.one()]
            } else {
                let mut a: FqPoly = (0..n)
                    .map(|_| (0..self.degree()).map(|_| rng.gen_range(0..self.p)).collect())
                    .collect();
                self.trim(&mut a);
                a
            };
            if a.len() <= 1 {
                continue;
            }
            let b = if odd {
                let t = self.poly_powmod(&a, &half, f);
                self.poly_sub(&t, &vec![self.one()])
            } else {
                // trace map sum a^(2^i), i < d * deg(F_q)
                let mut t = self.poly_rem(&a, f);
                let mut acc = t.clone();
                for _ in 1..d * self.degree() {
                    t = self.poly_mulmod(&t, &t, f);
                    acc = self.poly_add(&acc, &t);
                }
                acc
            };
            let g = self.poly_gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.poly_divrem(f, &g).0;
                let mut out = self.edf(&g, d);
                out.extend(self.edf(&self.poly_monic(&h), d));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicity,
    /// sorted by (degree, coefficient list).
    pub fn factor(&self, f: &FqPoly) -> Vec<(FqPoly, usize)> {
        let mut out = Vec::new();
        for (g, k) in self.squarefree(f) {
            for (h, d) in self.ddf(&g) {
                for irr in self.edf(&h, d) {
                    out.push((irr, k));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    /// All roots in `F_q` of a nonzero polynomial, without multiplicity.
    pub fn roots(&self, f: &FqPoly) -> Vec<Elem> {
        let mut out: Vec<Elem> = self
            .factor(f)
            .into_iter()
            .filter(|(g, _)| g.len() == 2)
            .map(|(g, _)| self.neg(&g[0]))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Fq, c: &[u64]) -> FqPoly {
        f.poly_from_u64(c)
    }

    /// Every monic divisor of degree < deg f, by exhaustive enumeration.
    fn brute_factor(p: u64, c: &[u64]) -> Vec<(Vec<u64>, usize)> {
        let fp = Fq::prime(p);
        let mut f = fp.poly_monic(&poly(&fp, c));
        let mut out = Vec::new();
        let mut deg = 1;
        while f.len() > 1 {
            let mut found = false;
            let total = p.pow(deg as u32);
            for idx in 0..total {
                let mut low = Vec::new();
                let mut t = idx;
                for _ in 0..deg {
                    low.push(t % p);
                    t /= p;
                }
                low.push(1);
                let g = poly(&fp, &low);
                let (q, r) = fp.poly_divrem(&f, &g);
                if r.is_empty() {
                    let mut k = 0;
                    while fp.poly_divrem(&f, &g).1.is_empty() {
                        f = fp.poly_divrem(&f, &g).0;
                        k += 1;
                    }
                    let _ = q;
                    out.push((low, k));
                    found = true;
                }
            }
            if !found {
                deg += 1;
            }
            if deg > 8 {
                break;
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    #[test]
    fn spec_examples() {
        let f5 = Fq::prime(5);
        assert_eq!(
            f5.factor(&poly(&f5, &[1, 0, 1])),
            vec![(poly(&f5, &[2, 1]), 1), (poly(&f5, &[3, 1]), 1)]
        );
        let f3 = Fq::prime(3);
        assert_eq!(f3.factor(&poly(&f3, &[1, 0, 1])), vec![(poly(&f3, &[1, 0, 1]), 1)]);
        assert_eq!(f5.factor(&poly(&f5, &[0, 0, 1])), vec![(poly(&f5, &[0, 1]), 2)]);
    }

    #[test]
    fn agrees_with_enumeration() {
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            for seed in 0..40u64 {
                let mut r = ChaCha8Rng::seed_from_u64(seed * 131 + p);
                let deg = r.gen_range(1..=4);
                let mut c: Vec<u64> = (0..deg).map(|_| r.gen_range(0..p)).collect();
                c.push(1);
                let fp = Fq::prime(p);
                let got: Vec<(Vec<u64>, usize)> = fp
                    .factor(&poly(&fp, &c))
                    .into_iter()
                    .map(|(g, k)| (g.iter().map(|e| e[0]).collect(), k))
                    .collect();
                assert_eq!(got, brute_factor(p, &c), "p={p} f={c:?}");
            }
        }
    }

    #[test]
    fn inseparable_in_characteristic_p() {
        // x^5 - 1 = (x - 1)^5 over F_5
        let f5 = Fq::prime(5);
        assert_eq!(f5.factor(&poly(&f5, &[4, 0, 0, 0, 0, 1])), vec![(poly(&f5, &[4, 1]), 5)]);
    }

    #[test]
    fn extension_field_roots() {
        // F_9 = F_3[w]/(w^2 + 1); x^2 + 1 has roots w and -w
        let f9 = Fq::extension(3, vec![1, 0, 1]);
        assert_eq!(f9.degree(), 2);
        let roots = f9.roots(&f9.poly_from_u64(&[1, 0, 1]));
        assert_eq!(roots, vec![vec![0, 1], vec![0, 2]]);
        let w = f9.gen();
        assert!(f9.is_one(&f9.mul(&w, &f9.inv(&w))));
    }

    #[test]
    fn irreducible_search() {
        let f = Fq::with_degree(7, 3);
        assert_eq!(f.degree(), 3);
        let fp = Fq::prime(7);
        let m: FqPoly = f.modulus().iter().map(|&c| vec![c]).collect();
        assert!(fp.is_irreducible(&m));
        assert_eq!(fp.factor(&m).len(), 1);
    }
}
