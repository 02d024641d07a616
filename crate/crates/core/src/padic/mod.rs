//! Local splitting of rational polynomials over `Q_p` at odd primes: residue
//! factorization, Newton polygons and residual polynomials over unramified
//! extensions, for the tame case.

pub mod galois_ring;
mod ramified;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use self::galois_ring::{GaloisRing, GrElem};
use crate::arith::integer::{ensure_prime, legendre, rat_mod, rational_valuation};
use crate::arith::{factor_q, Rat, UniPoly};
use crate::error::{Error, Result};
use crate::geometry::puiseux::lower_hull;
use crate::modp::fq::{Elem, Fq};
use crate::modp::{factor_mod_p, PolyModP};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalFactor {
    pub e: usize,
    pub f: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSplittingType {
    pub p: u64,
    pub factors: Vec<LocalFactor>,
    pub certified: bool,
}

impl LocalSplittingType {
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|t| t.e * t.f * t.count).sum()
    }

    pub fn is_unramified(&self) -> bool {
        self.factors.iter().all(|t| t.e == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPrecisionCtx {
    pub p: u64,
    pub precision: u32,
    pub margin: u32,
}

impl PadicPrecisionCtx {
    /// `N = max(50, 2 v_p(disc) + 10)`.
    pub fn for_poly(f: &UniPoly, p: u64) -> Result<Self> {
        let d = f.discriminant();
        if d.is_zero() {
            return Err(Error::NotSeparable);
        }
        let v = rational_valuation(&d, p)?.max(0) as u32;
        Ok(PadicPrecisionCtx { p, precision: (2 * v + 10).max(50), margin: 10 })
    }
}

enum Failure {
    Precision,
    /// The cluster needs ramified digits.
    Irregular,
    Hard(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Hard(e)
    }
}

/// `(e, f)` with multiplicities of the irreducible factors of monic `f` over
/// `Q_p`; one automatic precision doubling before giving up.
pub fn local_splitting_type(
    f: &UniPoly,
    p: u64,
    ctx: &PadicPrecisionCtx,
) -> Result<LocalSplittingType> {
    splitting_type_with(f, p, ctx, false)
}

fn splitting_type_with(
    f: &UniPoly,
    p: u64,
    ctx: &PadicPrecisionCtx,
    force_ramified: bool,
) -> Result<LocalSplittingType> {
    ensure_prime(p)?;
    if p == 2 {
        return Err(Error::WildOrIrregular { p, reason: "p = 2 is excluded".into() });
    }
    if f.is_zero() || f.lc() != Rat::one() {
        return Err(Error::Hypothesis("polynomial must be monic".into()));
    }
    let f = &integralize(f, p)?;
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::NotSeparable);
    }
    let need = 2 * rational_valuation(&disc, p)?.max(0) as u32 + 1;
    let red = PolyModP::from_rat_poly(f, p)?;
    let mut prec = ctx.precision;
    for attempt in 0..2 {
        match split(f, &red, p, prec, force_ramified) {
            Ok(factors) => {
                return Ok(LocalSplittingType { p, factors, certified: prec >= need })
            }
            Err(Failure::Hard(e)) => return Err(e),
            Err(Failure::Precision) if attempt == 0 => prec *= 2,
            Err(_) => {}
        }
    }
    // a root sitting exactly on a cluster centre lies in a proper factor over Q
    let parts = factor_q(f)?;
    if parts.len() == 1 {
        return Err(Error::WildOrIrregular { p, reason: "precision budget exhausted".into() });
    }
    let mut factors: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut certified = true;
    for (g, _) in parts {
        let sub_ctx = PadicPrecisionCtx::for_poly(&g, p)?;
        let t = splitting_type_with(&g, p, &sub_ctx, force_ramified)?;
        certified &= t.certified;
        for x in t.factors {
            *factors.entry((x.e, x.f)).or_default() += x.count;
        }
    }
    let factors = factors.into_iter().map(|((e, f), count)| LocalFactor { e, f, count }).collect();
    Ok(LocalSplittingType { p, factors, certified })
}

/// `p^{kn} f(Y / p^k)` for the least `k` making the monic `f` p-integral.
fn integralize(f: &UniPoly, p: u64) -> Result<UniPoly> {
    let n = f.deg() as i64;
    let mut k = 0i64;
    for (i, c) in f.coeffs().iter().enumerate().take(n as usize) {
        if !c.is_zero() {
            let v = rational_valuation(c, p)?;
            k = k.max((-v + (n - i as i64) - 1).div_euclid(n - i as i64));
        }
    }
    if k == 0 {
        return Ok(f.clone());
    }
    let pk = Rat::from_integer(BigInt::from(p).pow(k as u32));
    let mut scale = Rat::one();
    let mut out = vec![Rat::zero(); f.coeffs().len()];
    for i in (0..=n as usize).rev() {
        out[i] = &f.coeffs()[i] * &scale;
        scale = &scale * &pk;
    }
    Ok(UniPoly::new(out))
}

/// [`local_splitting_type`] with the default precision.
pub fn oracle(f: &UniPoly, p: u64) -> Result<LocalSplittingType> {
    local_splitting_type(f, p, &PadicPrecisionCtx::for_poly(f, p)?)
}

fn split(
    f: &UniPoly,
    red: &PolyModP,
    p: u64,
    prec: u32,
    force_ramified: bool,
) -> std::result::Result<Vec<LocalFactor>, Failure> {
    let hard = |reason: &str| Failure::Hard(Error::WildOrIrregular { p, reason: reason.into() });
    let pn = BigInt::from(p).pow(prec);
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| rat_mod(c, &pn).unwrap()).collect();
    // roots of each (e, f) type
    let mut roots: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (phi, k) in factor_mod_p(red)? {
        let d = phi.degree().unwrap();
        if k == 1 {
            *roots.entry((1, d)).or_default() += d;
            continue;
        }
        let fast = if force_ramified {
            Err(Failure::Irregular)
        } else {
            unramified_cluster(&ints, phi.coeffs(), k, p, prec)
        };
        match fast {
            Ok(terminals) => {
                for (e, fd) in terminals {
                    *roots.entry((e, fd)).or_default() += e * d;
                }
            }
            Err(Failure::Irregular) => {
                let types = ramified::cluster_types(&ints, phi.coeffs(), k, p, prec).map_err(
                    |stop| match stop {
                        ramified::Stop::Precision => Failure::Precision,
                        ramified::Stop::Wild(r) => hard(&r),
                        ramified::Stop::Extend(_) => hard("residue field extension"),
                    },
                )?;
                for t in types {
                    *roots.entry(t).or_default() += d;
                }
            }
            Err(other) => return Err(other),
        }
    }
    let mut factors = Vec::new();
    for ((e, fd), r) in roots {
        if r % (e * fd) != 0 {
            return Err(hard("inconsistent Galois orbit"));
        }
        factors.push(LocalFactor { e, f: fd, count: r / (e * fd) });
    }
    let total: usize = factors.iter().map(|t| t.e * t.f * t.count).sum();
    if total != f.deg() {
        return Err(hard("degree not conserved"));
    }
    Ok(factors)
}

/// Terminal `(e, f)` of the cluster at the first root of `phi`, each standing
/// for `e` roots.
fn unramified_cluster(
    f: &[BigInt],
    phi: &[u64],
    k: usize,
    p: u64,
    prec: u32,
) -> std::result::Result<Vec<(usize, usize)>, Failure> {
    let d = phi.len() - 1;
    let big_d = d * (1..=k).fold(1, |a, i| a.lcm(&i));
    let fq = Fq::with_degree(p, big_d);
    let phi_q: Vec<Elem> = phi.iter().map(|&c| fq.from_u64(c)).collect();
    let theta_bar = fq.roots(&phi_q).into_iter().next().ok_or_else(|| {
        Failure::Hard(Error::WildOrIrregular { p, reason: "residue root not found".into() })
    })?;
    let gr = GaloisRing::new(fq.clone(), prec);
    let coeffs: Vec<GrElem> = f.iter().map(|c| gr.constant(c)).collect();
    let theta = gr.teichmuller(&theta_bar);
    let g = gr.taylor_shift(&coeffs, &theta);
    let mut terminals = Vec::new();
    cluster(&gr, &g, k, d, &mut terminals)?;
    Ok(terminals)
}

/// Degree over `F_p` of an element of `F_q`.
fn prime_field_degree(fq: &Fq, x: &Elem) -> usize {
    let p = num_bigint::BigUint::from(fq.p());
    let mut y = x.clone();
    for t in 1..=fq.degree() {
        y = fq.pow(&y, &p);
        if &y == x {
            return t;
        }
    }
    fq.degree()
}

/// Factors of `g` near `Z = 0` (a cluster of `k` roots), pushed as
/// `(e, lcm of residue degrees along the path)`.
fn cluster(
    gr: &GaloisRing,
    g: &[GrElem],
    k: usize,
    path: usize,
    out: &mut Vec<(usize, usize)>,
) -> std::result::Result<(), Failure> {
    let fq = gr.residue_field();
    let p = fq.p();
    let vals: Vec<Option<u32>> = (0..=k).map(|j| gr.valuation(&g[j])).collect();
    if vals[0].is_none() || vals[k].is_none() {
        return Err(Failure::Precision);
    }
    let pts: Vec<(usize, usize)> = vals
        .iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|v| (j, v as usize)))
        .collect();
    for ((j0, v0), (j1, v1)) in lower_hull(&pts) {
        let (dj, dv) = (j1 - j0, v0 - v1);
        let gg = dj.gcd(&dv);
        let (e, h) = (dj / gg, dv / gg);
        if (e as u64).is_multiple_of(p) {
            return Err(Failure::Hard(Error::WildOrIrregular {
                p,
                reason: format!("p divides the ramification index {e}"),
            }));
        }
        let mut res: Vec<Elem> = (0..=gg)
            .map(|t| {
                let c = &g[j0 + t * e];
                let need = (v0 - t * h) as u32;
                match gr.valuation(c) {
                    Some(v) if v == need => gr.reduce(&gr.div_p_pow(c, need)),
                    _ => fq.zero(),
                }
            })
            .collect();
        fq.trim(&mut res);
        for (psi, s) in fq.factor(&res) {
            if psi.len() != 2 {
                return Err(Failure::Irregular);
            }
            let zeta = fq.neg(&psi[0]);
            let deg = path.lcm(&prime_field_degree(fq, &zeta));
            if s == 1 {
                out.push((e, deg));
            } else if e == 1 {
                let delta = gr.scale(&gr.teichmuller(&zeta), &BigInt::from(p).pow(h as u32));
                let shifted = gr.taylor_shift(g, &delta);
                cluster(gr, &shifted, s, deg, out)?;
            } else {
                return Err(Failure::Irregular);
            }
        }
    }
    Ok(())
}

/// Common `(e, f, g)` of a Galois polynomial at `p`.
pub fn galois_local_invariants(f: &UniPoly, p: u64) -> Result<(usize, usize, usize)> {
    let t = oracle(f, p)?;
    let first = &t.factors[0];
    if t.factors.len() != 1 {
        return Err(Error::NonUniform { p });
    }
    Ok((first.e, first.f, first.count))
}

/// Square class of a nonzero rational in `Q_p^x / (Q_p^x)^2`, `p` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "up")]
    UP,
}

impl fmt::Display for QuadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadClass::One => "1",
            QuadClass::U => "u",
            QuadClass::P => "p",
            QuadClass::UP => "up",
        })
    }
}

impl std::str::FromStr for QuadClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(QuadClass::One),
            "u" => Ok(QuadClass::U),
            "p" => Ok(QuadClass::P),
            "up" => Ok(QuadClass::UP),
            _ => Err(Error::Parse(format!("unknown square class {s}"))),
        }
    }
}

pub fn quadratic_local_class(d: &Rat, p: u64) -> Result<QuadClass> {
    ensure_prime(p)?;
    if p == 2 {
        return Err(Error::WildOrIrregular { p, reason: "p = 2 is excluded".into() });
    }
    let v = rational_valuation(d, p)?;
    let unit: BigInt = {
        let pb = BigInt::from(p);
        let mut n = d.numer().clone();
        let mut m = d.denom().clone();
        while (&n % &pb).is_zero() {
            n /= &pb;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
        }
        n * m
    };
    let square = legendre(&unit, p) == 1;
    Ok(match (v.rem_euclid(2) == 0, square) {
        (true, true) => QuadClass::One,
        (true, false) => QuadClass::U,
        (false, true) => QuadClass::P,
        (false, false) => QuadClass::UP,
    })
}
