//! Number fields `Q[z]/(mu)` given by a monic irreducible `mu`, polynomials
//! over them, Trager factorization and primitive-element adjunction.

use num_traits::{One, Zero};

use super::factor_q::{factor_q, is_irreducible_q};
use super::resultant::subresultant;
use super::unipoly::rat;
use super::{Rat, UniPoly};
use crate::error::{Error, Result};

/// Element of a number field: a polynomial in the generator, reduced mod `mu`.
pub type NfElem = UniPoly;
/// Dense ascending polynomial with number-field coefficients.
pub type NfPoly = Vec<NfElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    mu: UniPoly,
}

/// Image of the old generator after an adjunction, plus the adjoined root.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub image_of_gen: NfElem,
    pub root: NfElem,
}

impl Embedding {
    pub fn apply(&self, target: &NumberField, x: &NfElem) -> NfElem {
        target.reduce(&x.compose(&self.image_of_gen))
    }

    pub fn apply_poly(&self, target: &NumberField, f: &NfPoly) -> NfPoly {
        f.iter().map(|c| self.apply(target, c)).collect()
    }

    /// Composition: first `self` (K -> L), then `next` (L -> M).
    pub fn then(&self, next: &Embedding, target: &NumberField) -> Embedding {
        Embedding {
            image_of_gen: next.apply(target, &self.image_of_gen),
            root: next.apply(target, &self.root),
        }
    }
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField { mu: UniPoly::x() }
    }

    pub fn new(mu: &UniPoly) -> Result<Self> {
        let mu = mu.monic();
        if mu.deg() == 0 || !is_irreducible_q(&mu)? {
            return Err(Error::InvalidCover(format!("{mu} is not irreducible over Q")));
        }
        Ok(NumberField { mu })
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.mu
    }

    pub fn degree(&self) -> usize {
        self.mu.deg()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn reduce(&self, x: &UniPoly) -> NfElem {
        x.rem(&self.mu)
    }

    pub fn from_rat(&self, c: Rat) -> NfElem {
        UniPoly::constant(c)
    }

    pub fn gen(&self) -> NfElem {
        self.reduce(&UniPoly::x())
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a + b
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a - b
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.reduce(&(a * b))
    }

    pub fn inv(&self, a: &NfElem) -> Result<NfElem> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // extended Euclid: s*a + t*mu = 1
        let (mut r0, mut r1) = (self.mu.clone(), a.clone());
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        Ok(self.reduce(&s0.scale(&(Rat::one() / r0.lc()))))
    }

    pub fn pow(&self, a: &NfElem, k: i64) -> Result<NfElem> {
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut r = UniPoly::one();
        for _ in 0..k.unsigned_abs() {
            r = self.mul(&r, &base);
        }
        Ok(r)
    }

    // ---- polynomials over the field -------------------------------------

    pub fn ptrim(f: &mut NfPoly) {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
    }

    pub fn padd(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        let n = a.len().max(b.len());
        let z = UniPoly::zero();
        let mut r: NfPoly = (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect();
        Self::ptrim(&mut r);
        r
    }

    pub fn psub(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        let n = a.len().max(b.len());
        let z = UniPoly::zero();
        let mut r: NfPoly = (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect();
        Self::ptrim(&mut r);
        r
    }

    pub fn pmul(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![UniPoly::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
        let mut r: NfPoly = r.iter().map(|c| self.reduce(c)).collect();
        Self::ptrim(&mut r);
        r
    }

    pub fn pscale(&self, a: &NfPoly, c: &NfElem) -> NfPoly {
        let mut r: NfPoly = a.iter().map(|x| self.mul(x, c)).collect();
        Self::ptrim(&mut r);
        r
    }

    pub fn pdivrem(&self, a: &NfPoly, b: &NfPoly) -> Result<(NfPoly, NfPoly)> {
        if b.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let db = b.len() - 1;
        if a.len() <= db {
            return Ok((vec![], a.clone()));
        }
        let inv = self.inv(&b[db])?;
        let mut r = a.clone();
        let mut q = vec![UniPoly::zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.mul(&r[i + db], &inv);
            if !c.is_zero() {
                for (j, bc) in b.iter().enumerate() {
                    r[i + j] = &r[i + j] - &self.mul(&c, bc);
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        Self::ptrim(&mut r);
        Self::ptrim(&mut q);
        Ok((q, r))
    }

    pub fn pmonic(&self, a: &NfPoly) -> Result<NfPoly> {
        match a.last() {
            None => Ok(vec![]),
            Some(l) => Ok(self.pscale(a, &self.inv(l)?)),
        }
    }

    pub fn pgcd(&self, a: &NfPoly, b: &NfPoly) -> Result<NfPoly> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.pdivrem(&a, &b)?.1;
            a = b;
            b = r;
        }
        self.pmonic(&a)
    }

    pub fn pderiv(&self, a: &NfPoly) -> NfPoly {
        let mut r: NfPoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&rat(i as i64)))
            .collect();
        Self::ptrim(&mut r);
        r
    }

    pub fn peval(&self, a: &NfPoly, x: &NfElem) -> NfElem {
        a.iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| &self.mul(&acc, x) + c)
    }

    /// `a(X + c)`.
    pub fn pshift(&self, a: &NfPoly, c: &NfElem) -> NfPoly {
        let lin = vec![c.clone(), UniPoly::one()];
        let mut r: NfPoly = vec![];
        for coef in a.iter().rev() {
            r = self.padd(&self.pmul(&r, &lin), &vec![coef.clone()]);
        }
        r
    }

    /// A rational polynomial viewed over the field.
    pub fn lift(&self, f: &UniPoly) -> NfPoly {
        f.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect()
    }

    /// `Res_z(mu(z), g(X, z))`, a polynomial over Q in `X`.
    pub fn norm(&self, g: &NfPoly) -> UniPoly {
        if self.is_rational() {
            return UniPoly::new(g.iter().map(|c| c.coeff(0)).collect());
        }
        let d = self.degree();
        let rows: Vec<UniPoly> = (0..d)
            .map(|j| UniPoly::new(g.iter().map(|c| c.coeff(j)).collect()))
            .collect();
        let mu_rows: Vec<UniPoly> = self
            .mu
            .coeffs()
            .iter()
            .map(|c| UniPoly::constant(c.clone()))
            .collect();
        subresultant(&mu_rows, &rows)
    }

    /// Minimal polynomial over Q of an element.
    pub fn element_minpoly(&self, a: &NfElem) -> UniPoly {
        let charpoly = self.norm(&vec![-a, UniPoly::one()]);
        super::squarefree_part(&charpoly).unwrap()
    }

    fn trager_shifts() -> impl Iterator<Item = i64> {
        (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
    }

    /// Monic irreducible factors over the field with multiplicities, sorted
    /// by degree then by coefficient list.
    pub fn factor(&self, f: &NfPoly) -> Result<Vec<(NfPoly, usize)>> {
        if f.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.pmonic(f)?;
        let mut out = Vec::new();
        for (g, k) in self.squarefree(&f)? {
            for h in self.factor_squarefree(&g)? {
                out.push((h, k));
            }
        }
        out.sort_by(|a, b| {
            let key = |p: &NfPoly| {
                (
                    p.len(),
                    p.iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>(),
                )
            };
            key(&a.0).cmp(&key(&b.0))
        });
        Ok(out)
    }

    fn squarefree(&self, f: &NfPoly) -> Result<Vec<(NfPoly, usize)>> {
        let mut out = Vec::new();
        let fp = self.pderiv(f);
        let mut c = self.pgcd(f, &fp)?;
        let mut w = self.pdivrem(f, &c)?.0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.pgcd(&w, &c)?;
            let z = self.pdivrem(&w, &y)?.0;
            if z.len() > 1 {
                out.push((self.pmonic(&z)?, i));
            }
            i += 1;
            w = y;
            c = self.pdivrem(&c, &w)?.0;
        }
        Ok(out)
    }

    fn factor_squarefree(&self, g: &NfPoly) -> Result<Vec<NfPoly>> {
        if g.len() <= 2 {
            return Ok(vec![self.pmonic(g)?]);
        }
        if self.is_rational() {
            let q = UniPoly::new(g.iter().map(|c| c.coeff(0)).collect());
            return Ok(factor_q(&q)?.into_iter().map(|(h, _)| self.lift(&h)).collect());
        }
        let z = self.gen();
        for s in Self::trager_shifts().take(64) {
            let sz = z.scale(&rat(s));
            let gs = self.pshift(g, &-&sz);
            let n = self.norm(&gs);
            if n.gcd(&n.derivative()).deg() > 0 {
                continue;
            }
            let mut out = Vec::new();
            for (h, _) in factor_q(&n)? {
                let d = self.pgcd(&gs, &self.lift(&h))?;
                if d.len() > 1 {
                    out.push(self.pmonic(&self.pshift(&d, &sz))?);
                }
            }
            return Ok(out);
        }
        Err(Error::BudgetExhausted("no squarefree norm found".into()))
    }

    /// Roots in the field.
    pub fn roots(&self, f: &NfPoly) -> Result<Vec<NfElem>> {
        Ok(self
            .factor(f)?
            .into_iter()
            .filter(|(g, _)| g.len() == 2)
            .map(|(g, _)| -&g[0])
            .collect())
    }

    /// Adjoin a root of the irreducible `psi`. Returns the new field and the
    /// embedding of `self` into it; for linear `psi` the field is unchanged.
    pub fn adjoin(&self, psi: &NfPoly) -> Result<(NumberField, Embedding)> {
        let psi = self.pmonic(psi)?;
        if psi.len() == 2 {
            return Ok((
                self.clone(),
                Embedding { image_of_gen: self.gen(), root: -&psi[0] },
            ));
        }
        if self.is_rational() {
            let mu = UniPoly::new(psi.iter().map(|c| c.coeff(0)).collect());
            let field = NumberField { mu };
            return Ok((
                field.clone(),
                Embedding { image_of_gen: self.gen(), root: field.gen() },
            ));
        }
        let z = self.gen();
        for s in Self::trager_shifts().take(64) {
            let sz = z.scale(&rat(s));
            let mu = self.norm(&self.pshift(&psi, &-&sz)).monic();
            if mu.gcd(&mu.derivative()).deg() > 0 {
                continue;
            }
            let field = NumberField { mu };
            let zp = field.gen();
            // z is the common root of mu_K(Z) and psi(z' - s Z) over the new field
            let lin: NfPoly = vec![zp.clone(), UniPoly::constant(rat(-s))];
            let mut acc: NfPoly = vec![];
            let mut pw: NfPoly = vec![UniPoly::one()];
            for c in &psi {
                let cz: NfPoly = c.coeffs().iter().map(|x| UniPoly::constant(x.clone())).collect();
                acc = field.padd(&acc, &field.pmul(&cz, &pw));
                pw = field.pmul(&pw, &lin);
            }
            let g = field.pgcd(&field.lift(&self.mu), &acc)?;
            if g.len() != 2 {
                continue;
            }
            let image = -&g[0];
            let root = &zp - &image.scale(&rat(s));
            let root = field.reduce(&root);
            return Ok((field, Embedding { image_of_gen: image, root }));
        }
        Err(Error::BudgetExhausted("no primitive element found".into()))
    }

    /// The monic minimal polynomial over `self` of the generator of `big`,
    /// where `emb` embeds `self` into `big`.
    pub fn relative_minpoly(&self, big: &NumberField, emb: &Embedding) -> Result<NfPoly> {
        if big.degree() == self.degree() {
            return Ok(vec![-&self.gen_in(big, emb)?, UniPoly::one()]);
        }
        for (g, _) in self.factor(&self.lift(big.minpoly()))? {
            let image = emb.apply_poly(big, &g);
            if big.peval(&image, &big.gen()).is_zero() {
                return Ok(g);
            }
        }
        Err(Error::InvalidCover("relative minimal polynomial not found".into()))
    }

    /// When `big` has the same degree, the element of `self` mapping to the
    /// generator of `big`.
    fn gen_in(&self, big: &NumberField, emb: &Embedding) -> Result<NfElem> {
        // solve sum c_i emb(z^i) = z' by linear algebra over Q
        let d = self.degree();
        let cols: Vec<NfElem> = (0..d)
            .map(|i| emb.apply(big, &UniPoly::monomial(Rat::one(), i)))
            .collect();
        let target = big.gen();
        let mut m: Vec<Vec<Rat>> = (0..d)
            .map(|r| {
                let mut row: Vec<Rat> = cols.iter().map(|c| c.coeff(r)).collect();
                row.push(target.coeff(r));
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| Error::InvalidCover("singular embedding".into()))?;
            m.swap(piv, col);
            let pv = m[col][col].clone();
            for c in col..=d {
                m[col][c] = &m[col][c] / &pv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let t = &f * &m[col][c];
                        m[r][c] -= t;
                    }
                }
            }
        }
        Ok(UniPoly::new(m.iter().map(|row| row[d].clone()).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn konst(c: i64) -> NfElem {
        UniPoly::constant(rat(c))
    }

    #[test]
    fn gaussian_field_arithmetic() {
        let k = NumberField::new(&p(&[1, 0, 1])).unwrap();
        let i = k.gen();
        assert_eq!(k.mul(&i, &i), konst(-1));
        let a = &konst(1) + &i;
        assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), konst(1));
        assert_eq!(k.element_minpoly(&a), p(&[2, -2, 1]));
    }

    #[test]
    fn trager_splits_over_quadratic_field() {
        // Z^2 + 1 splits over Q(i)
        let k = NumberField::new(&p(&[1, 0, 1])).unwrap();
        let fs = k.factor(&k.lift(&p(&[1, 0, 1]))).unwrap();
        assert_eq!(fs.len(), 2);
        // Z^2 + Z + 1 splits over Q(sqrt -3) = Q[t]/(t^2 + 3t + 9)
        let k3 = NumberField::new(&p(&[9, 3, 1])).unwrap();
        let fs = k3.factor(&k3.lift(&p(&[1, 1, 1]))).unwrap();
        assert_eq!(fs.len(), 2);
        for (g, _) in &fs {
            assert_eq!(g.len(), 2);
        }
        // Z^2 - 2 stays irreducible over Q(i)
        assert_eq!(k.factor(&k.lift(&p(&[-2, 0, 1]))).unwrap().len(), 1);
    }

    #[test]
    fn adjoin_tower() {
        let k = NumberField::new(&p(&[1, 0, 1])).unwrap();
        let psi = k.lift(&p(&[-2, 0, 1]));
        let (l, emb) = k.adjoin(&psi).unwrap();
        assert_eq!(l.degree(), 4);
        let i = emb.apply(&l, &k.gen());
        assert_eq!(l.mul(&i, &i), konst(-1));
        assert_eq!(l.mul(&emb.root, &emb.root), konst(2));
        let rel = k.relative_minpoly(&l, &emb).unwrap();
        assert_eq!(rel.len(), 3);
        // from Q, adjoining keeps psi as the defining polynomial
        let q = NumberField::rationals();
        let (l2, e2) = q.adjoin(&q.lift(&p(&[1, 0, 1]))).unwrap();
        assert_eq!(l2.minpoly(), &p(&[1, 0, 1]));
        assert_eq!(e2.root, l2.gen());
    }
}
