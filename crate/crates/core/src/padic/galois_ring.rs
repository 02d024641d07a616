//! Galois rings `GR(p^N, D) = (Z/p^N)[w]/(M(w))`, the truncated rings of
//! integers of unramified extensions of `Q_p`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::integer::int_valuation;
use crate::modp::fq::{Elem, Fq};

pub type GrElem = Vec<BigInt>;

#[derive(Clone, Debug)]
pub struct GaloisRing {
    p: u64,
    precision: u32,
    pn: BigInt,
    fq: Fq,
    modulus: Vec<BigInt>,
}

impl GaloisRing {
    /// The ring whose residue field is `fq`, modulo `p^precision`.
    pub fn new(fq: Fq, precision: u32) -> Self {
        let p = fq.p();
        let modulus = fq.modulus().iter().map(|&c| BigInt::from(c)).collect();
        GaloisRing {
            p,
            precision,
            pn: BigInt::from(p).pow(precision),
            fq,
            modulus,
        }
    }

    pub fn residue_field(&self) -> &Fq {
        &self.fq
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.fq.degree()
    }

    pub fn zero(&self) -> GrElem {
        vec![BigInt::zero(); self.degree()]
    }

    pub fn one(&self) -> GrElem {
        self.constant(&BigInt::one())
    }

    pub fn constant(&self, c: &BigInt) -> GrElem {
        let mut e = self.zero();
        e[0] = c.mod_floor(&self.pn);
        e
    }

    pub fn is_zero(&self, a: &GrElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(&self.pn)).collect()
    }

    pub fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&self.pn)).collect()
    }

    pub fn scale(&self, a: &GrElem, c: &BigInt) -> GrElem {
        a.iter().map(|x| (x * c).mod_floor(&self.pn)).collect()
    }

    pub fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let d = self.degree();
        if d == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(&self.pn)];
        }
        let mut t = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                t[i + j] += x * y;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut t[k]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus[..d].iter().enumerate() {
                t[k - d + j] -= &c * m;
            }
        }
        t.truncate(d);
        t.iter().map(|x| x.mod_floor(&self.pn)).collect()
    }

    pub fn pow(&self, a: &GrElem, e: &BigUint) -> GrElem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    /// `v_p(a)`, or `None` when `a = 0` at this precision.
    pub fn valuation(&self, a: &GrElem) -> Option<u32> {
        a.iter()
            .filter(|c| !c.is_zero())
            .map(|c| int_valuation(c, self.p))
            .min()
    }

    /// `a / p^k` for `a` divisible by `p^k` (precision drops accordingly).
    pub fn div_p_pow(&self, a: &GrElem, k: u32) -> GrElem {
        let pk = BigInt::from(self.p).pow(k);
        a.iter().map(|c| c / &pk).collect()
    }

    pub fn reduce(&self, a: &GrElem) -> Elem {
        let p = BigInt::from(self.p);
        a.iter()
            .map(|c| {
                let r: BigInt = c.mod_floor(&p);
                u64::try_from(r).unwrap()
            })
            .collect()
    }

    pub fn lift(&self, a: &Elem) -> GrElem {
        a.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Inverse of a unit by Newton iteration from the residue field inverse.
    pub fn inv_unit(&self, u: &GrElem) -> GrElem {
        let mut y = self.lift(&self.fq.inv(&self.reduce(u)));
        let two = self.constant(&BigInt::from(2));
        let mut correct = 1u32;
        while correct < self.precision {
            y = self.mul(&y, &self.sub(&two, &self.mul(u, &y)));
            correct *= 2;
        }
        y
    }

    /// The Teichmuller lift: the unique `(q-1)`-th root of unity (or zero)
    /// reducing to `a`, by Newton iteration on `X^q - X`.
    pub fn teichmuller(&self, a: &Elem) -> GrElem {
        if self.fq.is_zero(a) {
            return self.zero();
        }
        let q = self.fq.order();
        let qm1 = &q - 1u32;
        let qb = BigInt::from(q.clone());
        let mut x = self.lift(a);
        let mut correct = 1u32;
        while correct < self.precision {
            let xq1 = self.pow(&x, &qm1);
            let xq = self.mul(&xq1, &x);
            let num = self.sub(&xq, &x);
            let den = self.sub(&self.scale(&xq1, &qb), &self.one());
            x = self.sub(&x, &self.mul(&num, &self.inv_unit(&den)));
            correct *= 2;
        }
        x
    }

    /// `g(Z + c)` for a dense polynomial over the ring.
    pub fn taylor_shift(&self, g: &[GrElem], c: &GrElem) -> Vec<GrElem> {
        let mut r: Vec<GrElem> = Vec::new();
        for coef in g.iter().rev() {
            // r = r * (Z + c) + coef
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_is_root_of_unity() {
        let fq = Fq::with_degree(7, 2);
        let gr = GaloisRing::new(fq.clone(), 12);
        let a = fq.gen();
        let t = gr.teichmuller(&a);
        assert_eq!(gr.reduce(&t), a);
        let q1 = fq.order() - 1u32;
        assert_eq!(gr.pow(&t, &q1), gr.one());
    }

    #[test]
    fn unit_inverse_and_valuation() {
        let gr = GaloisRing::new(Fq::prime(5), 8);
        let u = gr.constant(&BigInt::from(7));
        assert_eq!(gr.mul(&u, &gr.inv_unit(&u)), gr.one());
        assert_eq!(gr.valuation(&gr.constant(&BigInt::from(50))), Some(2));
        assert_eq!(gr.valuation(&gr.zero()), None);
        assert_eq!(gr.div_p_pow(&gr.constant(&BigInt::from(50)), 2), gr.constant(&BigInt::from(2)));
    }

    #[test]
    fn shift_matches_direct_evaluation() {
        let gr = GaloisRing::new(Fq::prime(3), 6);
        let g: Vec<GrElem> = [1i64, 2, 0, 1].iter().map(|&c| gr.constant(&c.into())).collect();
        let s = gr.taylor_shift(&g, &gr.constant(&BigInt::from(2)));
        // (Z + 2)^3 + 2(Z + 2) + 1 = Z^3 + 6Z^2 + 14Z + 13
        let want: Vec<GrElem> = [13i64, 14, 6, 1].iter().map(|&c| gr.constant(&c.into())).collect();
        assert_eq!(s, want);
    }
}
