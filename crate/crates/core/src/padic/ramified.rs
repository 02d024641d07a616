//! Root clusters over the tamely ramified ring `Z_q[pi]/(pi^E - p)`: roots
//! are expanded in Teichmuller digits `sum [c_j] pi^j` until they separate,
//! and `(e, f)` of each root is read off from the Galois orbit of its digits.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use super::galois_ring::{GaloisRing, GrElem};
use crate::geometry::puiseux::lower_hull;
use crate::modp::fq::{Elem, Fq};

pub(crate) type PiElem = Vec<GrElem>;

pub(crate) struct PiRing {
    pub gr: GaloisRing,
    /// `pi^e = p`.
    pub e: usize,
}

impl PiRing {
    fn p(&self) -> u64 {
        self.gr.residue_field().p()
    }

    pub fn zero(&self) -> PiElem {
        vec![self.gr.zero(); self.e]
    }

    pub fn embed(&self, a: &GrElem) -> PiElem {
        let mut out = self.zero();
        out[0] = a.clone();
        out
    }

    pub fn add(&self, a: &PiElem, b: &PiElem) -> PiElem {
        a.iter().zip(b).map(|(x, y)| self.gr.add(x, y)).collect()
    }

    pub fn mul(&self, a: &PiElem, b: &PiElem) -> PiElem {
        let p = BigInt::from(self.p());
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.gr.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.gr.is_zero(y) {
                    continue;
                }
                let mut t = self.gr.mul(x, y);
                let mut k = i + j;
                if k >= self.e {
                    k -= self.e;
                    t = self.gr.scale(&t, &p);
                }
                out[k] = self.gr.add(&out[k], &t);
            }
        }
        out
    }

    /// Valuation in units of `v(pi) = 1/e`; `None` for zero at this precision.
    pub fn valuation(&self, a: &PiElem) -> Option<usize> {
        a.iter()
            .enumerate()
            .filter_map(|(i, c)| self.gr.valuation(c).map(|v| self.e * v as usize + i))
            .min()
    }

    /// `a / pi^k` for `a` of valuation at least `k`.
    pub fn div_pi(&self, a: &PiElem, k: usize) -> PiElem {
        let mut out = self.zero();
        for (i, c) in a.iter().enumerate() {
            if self.gr.is_zero(c) {
                continue;
            }
            let j = i as i64 - k as i64;
            let m = if j < 0 { (-j + self.e as i64 - 1) / self.e as i64 } else { 0 };
            let idx = (j + m * self.e as i64) as usize;
            out[idx] = self.gr.div_p_pow(c, m as u32);
        }
        out
    }

    /// Residue of an element of valuation zero.
    pub fn reduce(&self, a: &PiElem) -> Elem {
        self.gr.reduce(&a[0])
    }

    /// `[c] pi^h`.
    pub fn digit(&self, c: &Elem, h: usize) -> PiElem {
        let t = self.gr.teichmuller(c);
        let mut out = self.zero();
        let ph = BigInt::from(self.p()).pow((h / self.e) as u32);
        out[h % self.e] = self.gr.scale(&t, &ph);
        out
    }

    pub fn taylor_shift(&self, g: &[PiElem], c: &PiElem) -> Vec<PiElem> {
        let mut r: Vec<PiElem> = Vec::new();
        for coef in g.iter().rev() {
            let mut next = vec![self.zero(); r.len() + 1];
            for (i, x) in r.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], x);
                next[i] = self.add(&next[i], &self.mul(x, c));
            }
            next[0] = self.add(&next[0], coef);
            r = next;
        }
        r
    }
}

pub(crate) enum Stop {
    Precision,
    /// Residual polynomials need a residue field extension of this degree.
    Extend(usize),
    Wild(String),
}

type Digits = Vec<(usize, Elem)>;

/// Expands the `k` roots of `g` near zero; each separated root is pushed as
/// its digit sequence.
fn expand(
    ring: &PiRing,
    g: &[PiElem],
    k: usize,
    digits: &Digits,
    out: &mut Vec<Digits>,
) -> Result<(), Stop> {
    let fq = ring.gr.residue_field();
    let vals: Vec<Option<usize>> = (0..=k).map(|j| ring.valuation(&g[j])).collect();
    if vals[0].is_none() || vals[k].is_none() {
        return Err(Stop::Precision);
    }
    let pts: Vec<(usize, usize)> = vals
        .iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|v| (j, v)))
        .collect();
    for ((j0, v0), (j1, v1)) in lower_hull(&pts) {
        let (dj, dv) = (j1 - j0, v0 - v1);
        if dv % dj != 0 {
            return Err(Stop::Wild(format!("slope {dv}/{dj} is not tame")));
        }
        let h = dv / dj;
        let mut res: Vec<Elem> = (0..=dj)
            .map(|t| {
                let c = &g[j0 + t];
                let need = v0 - t * h;
                match ring.valuation(c) {
                    Some(v) if v == need => ring.reduce(&ring.div_pi(c, need)),
                    _ => fq.zero(),
                }
            })
            .collect();
        fq.trim(&mut res);
        let factors = fq.factor(&res);
        let ext = factors.iter().map(|(psi, _)| psi.len() - 1).fold(1, |a, d| a.lcm(&d));
        if ext > 1 {
            return Err(Stop::Extend(ext));
        }
        for (psi, s) in factors {
            let zeta = fq.neg(&psi[0]);
            let mut next = digits.clone();
            next.push((h, zeta.clone()));
            if s == 1 {
                out.push(next);
            } else {
                let shifted = ring.taylor_shift(g, &ring.digit(&zeta, h));
                expand(ring, &shifted, s, &next, out)?;
            }
        }
    }
    Ok(())
}

fn multiplicative_order(p: u64, m: usize) -> usize {
    let m = m as u64;
    if m == 1 {
        return 1;
    }
    let (mut x, mut k) = (p % m, 1);
    while x != 1 {
        x = x * p % m;
        k += 1;
    }
    k
}

fn element_from_index(fq: &Fq, mut i: u64) -> Elem {
    let p = fq.p();
    let mut e = fq.zero();
    for c in e.iter_mut() {
        *c = i % p;
        i /= p;
    }
    e
}

/// A primitive `e`-th root of unity in `fq`, with `e | q - 1`.
fn primitive_root_of_unity(fq: &Fq, e: usize) -> Elem {
    let q1 = fq.order() - 1u32;
    let cofactor: BigUint = &q1 / BigUint::from(e);
    let primes: Vec<usize> = (2..=e).filter(|&l| e.is_multiple_of(l) && (2..l).all(|d| l % d != 0)).collect();
    (2u64..)
        .map(|i| fq.pow(&element_from_index(fq, i), &cofactor))
        .find(|w| {
            !fq.is_zero(w)
                && primes.iter().all(|&l| !fq.is_one(&fq.pow(w, &BigUint::from(e / l))))
        })
        .unwrap()
}

/// `(e, f)` of `Q_p(alpha)` for a root with the given digits.
fn orbit_type(fq: &Fq, big_e: usize, omega: &Elem, digits: &Digits) -> (usize, usize) {
    let g = digits.iter().filter(|(h, _)| *h > 0).fold(big_e, |a, (h, _)| a.gcd(h));
    let e = big_e / g;
    let p = BigUint::from(fq.p());
    let mut orbit = BTreeSet::new();
    for a in 0..big_e {
        let mut tuple: Vec<Elem> = digits
            .iter()
            .map(|(h, c)| {
                let w = fq.pow(omega, &BigUint::from((a * h) % big_e));
                fq.mul(c, &w)
            })
            .collect();
        for _ in 0..fq.degree() {
            orbit.insert(tuple.clone());
            tuple = tuple.iter().map(|c| fq.pow(c, &p)).collect();
        }
    }
    (e, orbit.len() / e)
}

/// `(e, f)` for each of the `k` roots of `f` in the residue cluster of the
/// first root of `phi`.
pub(crate) fn cluster_types(
    f: &[BigInt],
    phi: &[u64],
    k: usize,
    p: u64,
    prec: u32,
) -> Result<Vec<(usize, usize)>, Stop> {
    let lcm = (1..=k).fold(1usize, |a, i| a.lcm(&i));
    let mut big_e = lcm;
    while big_e % p as usize == 0 {
        big_e /= p as usize;
    }
    let deg_phi = phi.len() - 1;
    let mut d = deg_phi.lcm(&multiplicative_order(p, big_e));
    loop {
        if d > 720 {
            return Err(Stop::Wild("residue field extension too large".into()));
        }
        let fq = Fq::with_degree(p, d);
        let phi_q: Vec<Elem> = phi.iter().map(|&c| fq.from_u64(c)).collect();
        let theta_bar = fq.roots(&phi_q).into_iter().next().ok_or_else(|| {
            Stop::Wild("residue root not found".into())
        })?;
        let omega = primitive_root_of_unity(&fq, big_e);
        let gr = GaloisRing::new(fq.clone(), prec);
        let ring = PiRing { gr, e: big_e };
        let coeffs: Vec<PiElem> = f.iter().map(|c| ring.embed(&ring.gr.constant(c))).collect();
        let g = ring.taylor_shift(&coeffs, &ring.digit(&theta_bar, 0));
        let mut roots = Vec::new();
        match expand(&ring, &g, k, &vec![(0, theta_bar)], &mut roots) {
            Ok(()) => {
                return Ok(roots.iter().map(|r| orbit_type(&fq, big_e, &omega, r)).collect())
            }
            Err(Stop::Extend(m)) => d *= m,
            Err(other) => return Err(other),
        }
    }
}
