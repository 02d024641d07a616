//! Subresultant PRS over an integral domain with exact division.

use num_traits::{One, Zero};

use super::{Rat, UniPoly};

/// Coefficient domain for [`subresultant`]: an integral domain whose
/// `exact_div` is only ever called on exact quotients.
pub trait Domain: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, o: &Self) -> Self;
}

impl Domain for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Domain for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Self {
        UniPoly::exact_div(self, o)
    }
}

fn trim<C: Domain>(v: &mut Vec<C>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn pow<C: Domain>(x: &C, k: usize) -> C {
    let mut r = C::one();
    for _ in 0..k {
        r = r.mul(x);
    }
    r
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem<C: Domain>(a: &[C], b: &[C]) -> Vec<C> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: Vec<C> = a.to_vec();
    let mut steps = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let lr = r[k].clone();
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (j, bc) in b.iter().enumerate() {
            let i = k - db + j;
            r[i] = r[i].sub(&lr.mul(bc));
        }
        r.pop();
        trim(&mut r);
        steps -= 1;
    }
    let f = pow(&lb, steps);
    r.iter().map(|c| c.mul(&f)).collect()
}

/// Resultant of two dense ascending coefficient vectors (trailing zeros allowed).
pub fn subresultant<C: Domain>(a: &[C], b: &[C]) -> C {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return C::zero();
    }
    let mut s = C::one();
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = s.neg();
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        return s.mul(&pow(&b[0], a.len() - 1));
    }
    let mut g = C::one();
    let mut h = C::one();
    loop {
        let da = a.len() - 1;
        let dbb = b.len() - 1;
        let delta = da - dbb;
        if da % 2 == 1 && dbb % 2 == 1 {
            s = s.neg();
        }
        let r = prem(&a, &b);
        a = b;
        let div = g.mul(&pow(&h, delta));
        b = r.iter().map(|c| c.exact_div(&div)).collect();
        trim(&mut b);
        if b.is_empty() {
            return C::zero();
        }
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            pow(&g, delta).exact_div(&pow(&h, delta - 1))
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let num = pow(&b[0], da);
            let res = if da == 0 { num } else { num.exact_div(&pow(&h, da - 1)) };
            return s.mul(&res);
        }
    }
}

/// `Res(f, g)` over Q.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Rat {
    subresultant(f.coeffs(), g.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unipoly::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    /// Sylvester-matrix determinant by fraction elimination: an independent route.
    fn sylvester_det(f: &UniPoly, g: &UniPoly) -> Rat {
        let (m, n) = (f.deg(), g.deg());
        let size = m + n;
        let mut mat = vec![vec![rat(0); size]; size];
        for i in 0..n {
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut det = rat(1);
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !Zero::is_zero(&mat[r][col])) else {
                return rat(0);
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let pv = mat[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let fct = &mat[r][col] / &pv;
                for c in col..size {
                    let t = &fct * &mat[col][c];
                    mat[r][c] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn spec_examples() {
        // Res(Y - a, Y - b) = a - b
        assert_eq!(resultant(&p(&[-3, 1]), &p(&[-7, 1])), rat(-4));
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), rat(1));
        let f = p(&[1, 2, 0, 5]);
        assert_eq!(resultant(&f, &f), rat(0));
    }

    #[test]
    fn bivariate_discriminant_of_sqrt_t() {
        // Res_Y(Y^2 - T, 2Y) = -4T
        let a = vec![p(&[0, -1]), UniPoly::zero(), UniPoly::one()];
        let b = vec![UniPoly::zero(), p(&[2])];
        assert_eq!(subresultant(&a, &b), p(&[0, -4]));
    }

    proptest! {
        #[test]
        fn matches_sylvester(f in prop::collection::vec(-6i64..6, 2..6),
                             g in prop::collection::vec(-6i64..6, 2..6)) {
            let (f, g) = (p(&f), p(&g));
            prop_assume!(f.deg() >= 1 && g.deg() >= 1);
            prop_assert_eq!(resultant(&f, &g), sylvester_det(&f, &g));
        }

        #[test]
        fn zero_iff_common_factor(a in prop::collection::vec(-3i64..4, 2..4),
                                  b in prop::collection::vec(-3i64..4, 2..4),
                                  c in prop::collection::vec(-3i64..4, 1..3)) {
            let (a, b, c) = (p(&a), p(&b), p(&c));
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let f = &a * &c;
            let g = &b * &c;
            prop_assume!(f.deg() >= 1 && g.deg() >= 1);
            let common = f.gcd(&g).deg() >= 1;
            prop_assert_eq!(Zero::is_zero(&resultant(&f, &g)), common);
        }
    }
}
