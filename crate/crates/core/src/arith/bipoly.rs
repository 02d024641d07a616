use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::resultant::subresultant;
use super::{Rat, UniPoly};
use crate::error::{Error, Result};

/// `P(T, Y) = sum_j rows[j](T) * Y^j` with integer coefficients, monic in `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    rows: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<UniPoly>) -> Result<Self> {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        if rows.len() < 2 {
            return Err(Error::InvalidCover("P must have positive degree in Y".into()));
        }
        if rows.last().unwrap() != &UniPoly::one() {
            return Err(Error::InvalidCover("P must be monic in Y".into()));
        }
        if !rows.iter().all(|r| r.is_integral()) {
            return Err(Error::InvalidCover("P must have integer coefficients".into()));
        }
        Ok(BiPoly { rows })
    }

    /// Rows given as integer coefficient lists in `T`, outer index = `Y`-degree.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| UniPoly::from_ints(r)).collect())
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn deg_y(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn deg_t(&self) -> usize {
        self.rows.iter().map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn derivative_y(&self) -> Vec<UniPoly> {
        self.rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, r)| r.scale(&Rat::from_integer((j as i64).into())))
            .collect()
    }

    /// `P(t0, Y)`.
    pub fn specialize(&self, t0: &Rat) -> UniPoly {
        UniPoly::new(self.rows.iter().map(|r| r.eval(t0)).collect())
    }

    /// `P(g(S), Y)` for a polynomial substitution in `T`.
    pub fn substitute_t(&self, g: &UniPoly) -> Vec<UniPoly> {
        self.rows.iter().map(|r| r.compose(g)).collect()
    }

    /// Chart at infinity: the smallest `k` with `(n - j) k >= deg_T rows[j]` for
    /// all `j < n`, and `U^{nk} P(1/U, W U^{-k})`, which is monic in `W`.
    pub fn infinity_chart(&self) -> (usize, Vec<UniPoly>) {
        let n = self.deg_y();
        let k = (0..n)
            .filter(|&j| !self.rows[j].is_zero())
            .map(|j| self.rows[j].deg().div_ceil(n - j))
            .max()
            .unwrap_or(0);
        let rows = (0..=n)
            .map(|j| {
                let r = &self.rows[j];
                if r.is_zero() {
                    return UniPoly::zero();
                }
                // rows[j](1/U) U^{(n-j)k} = U^{(n-j)k - deg} rev(rows[j])
                let shift = (n - j) * k - r.deg();
                &r.reversed() * &UniPoly::monomial(Rat::one(), shift)
            })
            .collect();
        (k, rows)
    }
}

/// `disc_Y(P) = (-1)^{n(n-1)/2} Res_Y(P, dP/dY)` for monic `P`.
pub fn disc_y(p: &BiPoly) -> UniPoly {
    let n = p.deg_y();
    let r = subresultant(p.rows(), &p.derivative_y());
    if (n * (n - 1) / 2) % 2 == 1 {
        -&r
    } else {
        r
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = self.rows.iter().map(|r| r.to_strings()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        let rows = v
            .iter()
            .map(|r| UniPoly::from_strings(r))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        BiPoly::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Evaluate `rows` (a polynomial in `Y` with `T`-polynomial coefficients) at `T = t`.
pub fn eval_rows(rows: &[UniPoly], t: &Rat) -> UniPoly {
    UniPoly::new(rows.iter().map(|r| r.eval(t)).collect())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unipoly::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn discriminants() {
        let c2 = BiPoly::from_ints(&[&[0, -1], &[], &[1]]).unwrap();
        assert_eq!(disc_y(&c2), p(&[0, 4]));
        let c3 = BiPoly::from_ints(&[&[-1], &[-3, -1], &[0, -1], &[1]]).unwrap();
        assert_eq!(disc_y(&c3), p(&[9, 3, 1]).pow(2));
        let triv = BiPoly::from_ints(&[&[-1], &[], &[1]]).unwrap();
        assert_eq!(disc_y(&triv), p(&[4]));
    }

    #[test]
    fn disc_commutes_with_specialization() {
        let v4 = BiPoly::from_ints(&[&[1], &[], &[2, -4], &[], &[1]]).unwrap();
        let d = disc_y(&v4);
        for t in -5..=5 {
            let t = rat(t);
            assert_eq!(d.eval(&t), v4.specialize(&t).discriminant());
        }
    }

    #[test]
    fn infinity_chart_of_sqrt_t() {
        let c2 = BiPoly::from_ints(&[&[0, -1], &[], &[1]]).unwrap();
        let (k, rows) = c2.infinity_chart();
        assert_eq!(k, 1);
        assert_eq!(rows, vec![p(&[0, -1]), UniPoly::zero(), p(&[1])]);
    }

    #[test]
    fn rejects_non_monic() {
        assert!(BiPoly::from_ints(&[&[1], &[0, 2]]).is_err());
    }
}
