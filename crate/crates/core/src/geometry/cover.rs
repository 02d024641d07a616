//! Covers `P(T, Y) = 0` of the projective line: branch points, ramification
//! indices, residue fields and a conservative set of bad primes.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::puiseux::{expand, local_rows};
use crate::arith::integer::prime_divisors;
use crate::arith::{
    disc_y, factor_q, is_irreducible_q, resultant, squarefree_part, BiPoly, NfPoly, NumberField,
    Rat, UniPoly,
};
use crate::error::{Error, Result};

/// On-disk cover description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub name: String,
    pub group_order: usize,
    #[serde(rename = "P")]
    pub p: BiPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_locus_factors: Option<Vec<UniPoly>>,
    pub assert_regular_galois: bool,
}

/// A closed point of the line: an irreducible `m(T)` or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Finite(UniPoly),
    Infinity,
}

impl Location {
    /// The polynomial whose root is the point in its chart (`T` at infinity,
    /// in the coordinate `1/T`).
    pub fn chart_poly(&self) -> UniPoly {
        match self {
            Location::Finite(m) => m.clone(),
            Location::Infinity => UniPoly::x(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Location::Finite(m) => m.deg(),
            Location::Infinity => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Location::Infinity)
    }

    /// The rational value of a degree-one finite point.
    pub fn rational_value(&self) -> Option<Rat> {
        match self {
            Location::Finite(m) if m.deg() == 1 => Some(-m.coeff(0) / m.coeff(1)),
            _ => None,
        }
    }

    pub fn base_field(&self) -> Result<NumberField> {
        NumberField::new(&self.chart_poly())
    }

    pub fn label(&self) -> String {
        match self {
            Location::Finite(m) => m.to_string(),
            Location::Infinity => "infinity".into(),
        }
    }
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Location::Finite(m) => m.serialize(s),
            Location::Infinity => s.serialize_str("infinity"),
        }
    }
}

/// Output of [`puiseux_at`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBranchData {
    pub e: usize,
    /// `r(Z)` over `Q[t]/(m)`; `Z` when the residue field is `k(t_i)` itself.
    pub residue: NfPoly,
    /// Absolute defining polynomial of the residue field.
    pub residue_field: UniPoly,
    pub places: usize,
    /// `S = gamma x^e` when the residue field is Q.
    pub gamma: Option<Rat>,
    pub trace: Vec<UniPoly>,
    pub steps: usize,
}

/// Rows of `P` in the local chart of `loc` with the base field of `loc`.
fn chart(p: &BiPoly, loc: &Location) -> Result<(NumberField, Vec<NfPoly>)> {
    let k = loc.base_field()?;
    let rows = match loc {
        Location::Finite(_) => p.rows().to_vec(),
        Location::Infinity => p.infinity_chart().1,
    };
    let biv = local_rows(&k, &rows);
    Ok((k, biv))
}

/// Order of vanishing of the discriminant at `loc` plus `2n`.
pub fn default_prec(p: &BiPoly, loc: &Location) -> usize {
    let n = p.deg_y();
    let v = match loc {
        Location::Finite(m) => {
            let mut d = disc_y(p);
            let mut v = 0;
            while !d.is_zero() && d.rem(m).is_zero() {
                d = d.exact_div(m);
                v += 1;
            }
            v
        }
        Location::Infinity => {
            let (_, rows) = p.infinity_chart();
            let d = crate::arith::resultant::subresultant(
                &rows,
                &rows
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, r)| r.scale(&Rat::from_integer((j as i64).into())))
                    .collect::<Vec<_>>(),
            );
            d.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0)
        }
    };
    2 * n + v
}

/// Exact Newton-Puiseux expansion at `loc` with at most `prec` Newton steps.
pub fn puiseux_at(p: &BiPoly, loc: &Location, prec: usize) -> Result<LocalBranchData> {
    let (k, biv) = chart(p, loc)?;
    let ex = expand(&k, &biv, prec.max(1))?;
    let first = &ex.places[0];
    if ex.places.iter().any(|pl| pl.e != first.e) {
        return Err(Error::NonUniformRamification);
    }
    let fdeg = first.field.degree() / k.degree();
    if ex.places.iter().any(|pl| pl.field.degree() != first.field.degree()) {
        return Err(Error::NonUniformRamification);
    }
    let residue = if fdeg == 1 {
        vec![UniPoly::zero(), UniPoly::one()]
    } else {
        k.relative_minpoly(&first.field, &first.emb)?
    };
    let gamma = (first.field.degree() == 1).then(|| first.gamma.coeff(0));
    Ok(LocalBranchData {
        e: first.e,
        residue,
        residue_field: first.field.minpoly().clone(),
        places: ex.places.len(),
        gamma,
        trace: ex.trace,
        steps: ex.steps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    pub location: Location,
    pub e: usize,
    pub residue: NfPoly,
    pub residue_field: UniPoly,
    pub d_order: usize,
    pub places: usize,
    pub gamma: Option<Rat>,
    pub trace: Vec<UniPoly>,
}

impl BranchPoint {
    fn from_data(location: Location, d: LocalBranchData) -> Self {
        let f = d.residue.len() - 1;
        BranchPoint {
            location,
            e: d.e,
            d_order: d.e * f,
            residue: d.residue,
            residue_field: d.residue_field,
            places: d.places,
            gamma: d.gamma,
            trace: d.trace,
        }
    }

    /// `[residue : k(t_i)]`.
    pub fn residue_degree(&self) -> usize {
        self.residue.len() - 1
    }
}

fn nfpoly_strings(r: &NfPoly) -> Vec<Vec<String>> {
    r.iter().map(|c| c.to_strings()).collect()
}

impl Serialize for BranchPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BranchPoint", 7)?;
        st.serialize_field("location", &self.location)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("residue", &nfpoly_strings(&self.residue))?;
        st.serialize_field("residue_degree", &self.residue_degree())?;
        st.serialize_field("residue_field", &self.residue_field)?;
        st.serialize_field("d_order", &self.d_order)?;
        st.serialize_field("places", &self.places)?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub name: String,
    pub n: usize,
    pub p: BiPoly,
    pub disc: UniPoly,
    /// Irreducible factors of the squarefree part of the discriminant.
    pub locus: Vec<UniPoly>,
    pub branch_points: Vec<BranchPoint>,
    pub bad_primes: BTreeSet<u64>,
    pub assert_regular_galois: bool,
}

const C2: &str = include_str!("../../../../covers/c2_sqrt_t.json");
const V4: &str = include_str!("../../../../covers/v4_sqrt_t_sqrt_t_minus_1.json");
const C3: &str = include_str!("../../../../covers/c3_shanks.json");

/// Names of the covers shipped with the library.
pub const BUNDLED: [&str; 3] = ["c2_sqrt_t", "v4_sqrt_t_sqrt_t_minus_1", "c3_shanks"];

impl Cover {
    pub fn bundled(name: &str) -> Result<Cover> {
        let text = match name {
            "c2_sqrt_t" => C2,
            "v4_sqrt_t_sqrt_t_minus_1" => V4,
            "c3_shanks" => C3,
            _ => return Err(Error::InvalidCover(format!("no bundled cover named {name}"))),
        };
        Cover::from_json(text)
    }

    pub fn from_json(text: &str) -> Result<Cover> {
        let file: CoverFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Cover::build(file)
    }

    pub fn build(file: CoverFile) -> Result<Cover> {
        let p = file.p;
        let n = p.deg_y();
        if n != file.group_order {
            return Err(Error::InvalidCover(format!(
                "deg_Y P = {n} but group_order = {}",
                file.group_order
            )));
        }
        let disc = disc_y(&p);
        if disc.is_zero() {
            return Err(Error::NotSeparable);
        }
        let sqf = squarefree_part(&disc)?;
        let locus = match file.branch_locus_factors {
            Some(fs) => validate_locus(&fs, &sqf)?,
            None => factor_q(&sqf)?.into_iter().map(|(m, _)| m).collect(),
        };
        let mut branch_points = Vec::new();
        let mut locations: Vec<Location> =
            locus.iter().map(|m| Location::Finite(m.clone())).collect();
        locations.push(Location::Infinity);
        for loc in locations {
            let d = puiseux_at(&p, &loc, default_prec(&p, &loc))?;
            if d.e >= 2 {
                branch_points.push(BranchPoint::from_data(loc, d));
            }
        }
        if n > 1 && branch_points.is_empty() {
            return Err(Error::InvalidCover("no branch points".into()));
        }
        let bad_primes = conservative_bad_primes(n, &disc, &sqf, &locus, &branch_points);
        Ok(Cover {
            name: file.name,
            n,
            p,
            disc,
            locus,
            branch_points,
            bad_primes,
            assert_regular_galois: file.assert_regular_galois,
        })
    }

    pub fn is_bad(&self, p: u64) -> bool {
        self.bad_primes.contains(&p)
    }

    /// `sum_i deg(m_i) (n - n / e_i)`.
    pub fn riemann_hurwitz_sum(&self) -> usize {
        self.branch_points
            .iter()
            .map(|bp| bp.location.degree() * (self.n - self.n / bp.e))
            .sum()
    }

    /// `P(t0, Y)`.
    pub fn specialize(&self, t0: &Rat) -> UniPoly {
        self.p.specialize(t0)
    }
}

fn validate_locus(fs: &[UniPoly], sqf: &UniPoly) -> Result<Vec<UniPoly>> {
    let mut prod = UniPoly::one();
    let mut out = Vec::new();
    for f in fs {
        let m = f.monic();
        if !is_irreducible_q(&m)? {
            return Err(Error::InvalidCover(format!("branch locus factor {m} is reducible")));
        }
        prod = &prod * &m;
        out.push(m);
    }
    if &prod != sqf {
        return Err(Error::InvalidCover(
            "branch locus factors do not multiply to the squarefree discriminant".into(),
        ));
    }
    Ok(out)
}

fn rat_primes(x: &Rat, out: &mut BTreeSet<u64>) {
    if x.is_zero() {
        return;
    }
    out.extend(prime_divisors(x.numer()));
    out.extend(prime_divisors(x.denom()));
}

fn denominator_primes(f: &UniPoly, out: &mut BTreeSet<u64>) {
    for c in f.coeffs() {
        out.extend(prime_divisors(c.denom()));
    }
}

/// Over-approximation of the primes where the branch data has bad reduction.
pub fn conservative_bad_primes(
    n: usize,
    disc: &UniPoly,
    sqf: &UniPoly,
    locus: &[UniPoly],
    branch_points: &[BranchPoint],
) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = crate::arith::integer::primes_between(2, n as u64)
        .into_iter()
        .collect();
    rat_primes(&disc.lc(), &mut out);
    if let Some(t) = disc.coeffs().iter().find(|c| !c.is_zero()) {
        rat_primes(t, &mut out);
    }
    for m in locus {
        denominator_primes(m, &mut out);
        rat_primes(&m.coeff(0), &mut out);
        if m.deg() >= 2 {
            rat_primes(&m.discriminant(), &mut out);
        }
    }
    if sqf.deg() >= 1 {
        let prim = UniPoly::from_bigints(&sqf.primitive_integer());
        rat_primes(&prim.lc(), &mut out);
        if prim.deg() >= 2 {
            rat_primes(&prim.discriminant(), &mut out);
        }
    }
    for (i, a) in locus.iter().enumerate() {
        for b in &locus[i + 1..] {
            rat_primes(&resultant(a, b), &mut out);
        }
    }
    for bp in branch_points {
        for t in &bp.trace {
            denominator_primes(t, &mut out);
        }
        for c in &bp.residue {
            denominator_primes(c, &mut out);
        }
        if bp.residue_field.deg() >= 2 {
            rat_primes(&bp.residue_field.discriminant(), &mut out);
        }
    }
    out
}

/// The `e`-th cyclotomic polynomial.
pub fn cyclotomic(e: usize) -> UniPoly {
    let mut f = &UniPoly::monomial(Rat::from_integer(1.into()), e) - &UniPoly::one();
    for d in 1..e {
        if e.is_multiple_of(d) {
            f = f.exact_div(&cyclotomic(d));
        }
    }
    f
}

/// Whether the residue field of `bp` contains the `e_i`-th roots of unity.
pub fn roots_of_unity_check(bp: &BranchPoint) -> Result<bool> {
    let field = NumberField::new(&bp.residue_field)?;
    let phi = field.lift(&cyclotomic(bp.e));
    Ok(field.factor(&phi)?.iter().all(|(g, _)| g.len() == 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn summary(c: &Cover) -> Vec<(String, usize, usize)> {
        c.branch_points
            .iter()
            .map(|bp| (bp.location.label(), bp.e, bp.residue_degree()))
            .collect()
    }

    #[test]
    fn bundled_branch_data() {
        let c2 = Cover::bundled("c2_sqrt_t").unwrap();
        assert_eq!(
            summary(&c2),
            vec![("x".into(), 2, 1), ("infinity".into(), 2, 1)]
        );
        let c3 = Cover::bundled("c3_shanks").unwrap();
        assert_eq!(summary(&c3), vec![("x^2 + 3*x + 9".into(), 3, 1)]);
        let v4 = Cover::bundled("v4_sqrt_t_sqrt_t_minus_1").unwrap();
        assert_eq!(
            summary(&v4),
            vec![("x".into(), 2, 2), ("x - 1".into(), 2, 1), ("infinity".into(), 2, 1)]
        );
        assert_eq!(v4.branch_points[0].residue_field, p(&[1, 0, 1]));
    }

    #[test]
    fn bad_prime_sets() {
        let set = |name: &str| -> Vec<u64> {
            Cover::bundled(name).unwrap().bad_primes.into_iter().collect()
        };
        assert_eq!(set("c2_sqrt_t"), vec![2]);
        assert_eq!(set("c3_shanks"), vec![2, 3]);
        assert_eq!(set("v4_sqrt_t_sqrt_t_minus_1"), vec![2, 3]);
    }

    #[test]
    fn riemann_hurwitz() {
        for (name, n) in [("c2_sqrt_t", 2), ("v4_sqrt_t_sqrt_t_minus_1", 4), ("c3_shanks", 3)] {
            let c = Cover::bundled(name).unwrap();
            assert_eq!(c.riemann_hurwitz_sum(), 2 * n - 2, "{name}");
        }
    }

    #[test]
    fn roots_of_unity() {
        for name in BUNDLED {
            let c = Cover::bundled(name).unwrap();
            for bp in &c.branch_points {
                assert!(roots_of_unity_check(bp).unwrap(), "{name} {}", bp.location.label());
            }
        }
        assert_eq!(cyclotomic(3), p(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
    }

    #[test]
    fn supplied_locus_is_validated() {
        let bad = r#"{"name":"x","group_order":4,"P":[["1"],[],["2","-4"],[],["1"]],
            "branch_locus_factors":[["0","1"]],"assert_regular_galois":true}"#;
        assert!(matches!(Cover::from_json(bad), Err(Error::InvalidCover(_))));
        let junk = r#"{"name":"x","group_order":2,"P":[["0","-1"],[],["1"]],"extra":1,
            "assert_regular_galois":true}"#;
        assert!(matches!(Cover::from_json(junk), Err(Error::Parse(_))));
    }

    #[test]
    fn precision_doubling_is_stable() {
        for name in BUNDLED {
            let c = Cover::bundled(name).unwrap();
            for bp in &c.branch_points {
                let prec = default_prec(&c.p, &bp.location);
                let a = puiseux_at(&c.p, &bp.location, prec).unwrap();
                let b = puiseux_at(&c.p, &bp.location, 2 * prec).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}
