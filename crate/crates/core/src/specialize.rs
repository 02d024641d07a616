//! Specializations `P(t0, Y)` of a cover: meeting with branch points modulo
//! `p`, predicted inertia and decomposition, and comparison with the p-adic
//! oracle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::integer::{crt_combine, ensure_prime, is_prime, legendre, rat_mod, rational_valuation};
use crate::arith::{factor_q, rat_serde, BiPoly, Rat, UniPoly};
use crate::error::{Error, Result};
use crate::geometry::{BranchPoint, Cover, Location};
use crate::modp::{factor_mod_p, reduce_relative, CycleType};
use crate::padic::{oracle, quadratic_local_class, LocalSplittingType, QuadClass};

/// A point of the projective line over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(Rat),
    Infinity,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(t) => write!(f, "{t}"),
            ProjPoint::Infinity => f.write_str("infinity"),
        }
    }
}

fn val(x: &Rat, p: u64) -> Result<i64> {
    rational_valuation(x, p)
}

/// `m(1/T) T^d / m(0)`, the chart polynomial of `1/t_i`.
fn reversed_monic(m: &UniPoly) -> UniPoly {
    m.reversed().monic()
}

/// `I_p(t0, t_i)`: `v_p(m(t0))` when `t0` is p-integral, `v_p(m_rev(1/t0))`
/// otherwise; for `t_i = infinity`, `m = 1` and `m_rev = T`.
pub fn intersection_multiplicity(t0: &ProjPoint, bp: &BranchPoint, p: u64) -> Result<u32> {
    ensure_prime(p)?;
    let at_branch = || Error::Hypothesis(format!("t0 = {t0} is the branch point {}", bp.location.label()));
    if let Location::Finite(m) = &bp.location {
        let a0 = m.coeff(0);
        if !a0.is_zero() && val(&a0, p)? != 0 {
            return Err(Error::Hypothesis(format!(
                "constant coefficient of {m} is not a unit at {p}"
            )));
        }
    }
    match (t0, &bp.location) {
        (ProjPoint::Infinity, Location::Infinity) => Err(at_branch()),
        (ProjPoint::Infinity, Location::Finite(_)) => Ok(0),
        (ProjPoint::Finite(t), loc) => {
            let v = if t.is_zero() { i64::MAX } else { val(t, p)? };
            match loc {
                Location::Infinity => Ok(if v < 0 { (-v) as u32 } else { 0 }),
                Location::Finite(m) if v >= 0 => {
                    let y = m.eval(t);
                    if y.is_zero() {
                        return Err(at_branch());
                    }
                    Ok(val(&y, p)?.max(0) as u32)
                }
                Location::Finite(m) => {
                    if m.coeff(0).is_zero() {
                        return Ok(0);
                    }
                    let y = reversed_monic(m).eval(&t.recip());
                    Ok(val(&y, p)?.max(0) as u32)
                }
            }
        }
    }
}

/// The branch point met by `t0` modulo `p`, with the degree-one prime
/// `(p, a)` of its field of definition and the multiplicity `a_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeetingDatum {
    pub branch: usize,
    pub location: Location,
    pub p: u64,
    pub a: u64,
    pub a_p: u32,
}

pub fn meeting_prime(t0: &Rat, cover: &Cover, p: u64) -> Result<Option<MeetingDatum>> {
    let point = ProjPoint::Finite(t0.clone());
    let mut found: Option<MeetingDatum> = None;
    for (i, bp) in cover.branch_points.iter().enumerate() {
        let a_p = intersection_multiplicity(&point, bp, p)?;
        if a_p == 0 {
            continue;
        }
        let a = match &bp.location {
            Location::Infinity => 0,
            Location::Finite(m) => {
                let a = rat_mod(t0, &BigInt::from(p)).ok_or_else(|| {
                    Error::Hypothesis("meeting in the 1/T chart at a finite branch point".into())
                })?;
                let a = u64::try_from(a).unwrap();
                let r = rat_mod(&m.eval(&Rat::from_integer(a.into())), &BigInt::from(p));
                debug_assert_eq!(r, Some(BigInt::zero()));
                a
            }
        };
        if found.is_some() {
            return Err(Error::AmbiguousMeeting { p });
        }
        found = Some(MeetingDatum { branch: i, location: bp.location.clone(), p, a, a_p });
    }
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaPrediction {
    pub order: usize,
    /// `a_p mod e_i`, or 0 without a meeting.
    pub power_class: usize,
}

pub fn predict_inertia(cover: &Cover, t0: &Rat, p: u64) -> Result<InertiaPrediction> {
    Ok(match meeting_prime(t0, cover, p)? {
        None => InertiaPrediction { order: 1, power_class: 0 },
        Some(m) => {
            let e = cover.branch_points[m.branch].e;
            let a_p = m.a_p as usize;
            InertiaPrediction { order: e / a_p.gcd(&e), power_class: a_p % e }
        }
    })
}

/// Residue degree at `(p, a)` of the residue field of `bp` over its field of
/// definition.
pub fn frobenius_order_at_branch(bp: &BranchPoint, prime: (u64, u64)) -> Result<usize> {
    let (p, _) = prime;
    let r = reduce_relative(&bp.residue, &bp.location.chart_poly(), prime)?;
    if r.degree() != Some(bp.residue_degree()) || !r.is_squarefree() {
        return Err(Error::RamifiedOrBad { p });
    }
    let degrees: Vec<usize> = factor_mod_p(&r)?
        .into_iter()
        .map(|(g, _)| g.degree().unwrap())
        .collect();
    Ok(CycleType(degrees).order())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum DecompositionPrediction {
    #[serde(rename = "unramified-cyclic")]
    UnramifiedCyclic,
    #[serde(rename = "exact")]
    Exact { e_pred: usize, f_pred: usize, d_pred: usize },
    #[serde(rename = "divisibility")]
    Divisibility { e_pred: usize, f_lower: usize },
}

impl DecompositionPrediction {
    pub fn e_pred(&self) -> usize {
        match self {
            DecompositionPrediction::UnramifiedCyclic => 1,
            DecompositionPrediction::Exact { e_pred, .. }
            | DecompositionPrediction::Divisibility { e_pred, .. } => *e_pred,
        }
    }

    /// Whether an oracle `(e, f)` satisfies the prediction, and how.
    pub fn verdict(&self, e: usize, f: usize) -> Verdict {
        match *self {
            DecompositionPrediction::UnramifiedCyclic if e == 1 => Verdict::Match,
            DecompositionPrediction::Exact { e_pred, f_pred, .. } if (e, f) == (e_pred, f_pred) => {
                Verdict::Match
            }
            DecompositionPrediction::Divisibility { e_pred, f_lower }
                if e == e_pred && f.is_multiple_of(f_lower) =>
            {
                Verdict::PartialMatch
            }
            _ => Verdict::Mismatch,
        }
    }
}

fn prediction_from(cover: &Cover, meeting: Option<&MeetingDatum>) -> Result<DecompositionPrediction> {
    let Some(m) = meeting else {
        return Ok(DecompositionPrediction::UnramifiedCyclic);
    };
    let bp = &cover.branch_points[m.branch];
    let g = (m.a_p as usize).gcd(&bp.e);
    let f = frobenius_order_at_branch(bp, (m.p, m.a))?;
    Ok(if g == 1 {
        DecompositionPrediction::Exact { e_pred: bp.e, f_pred: f, d_pred: bp.e * f }
    } else {
        DecompositionPrediction::Divisibility { e_pred: bp.e / g, f_lower: f }
    })
}

pub fn predict_decomposition(cover: &Cover, t0: &Rat, p: u64) -> Result<DecompositionPrediction> {
    prediction_from(cover, meeting_prime(t0, cover, p)?.as_ref())
}

/// `P(t0, Y)`, rejected when inseparable.
pub fn specialize_poly(p: &BiPoly, t0: &Rat) -> Result<UniPoly> {
    let f = p.specialize(t0);
    if f.discriminant().is_zero() {
        return Err(Error::InseparableSpecialization);
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Match,
    PartialMatch,
    Mismatch,
    SkippedBadPrime,
    OracleFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OracleOutcome {
    Local(LocalSplittingType),
    Failure { failure: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializationReport {
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    pub p: u64,
    pub meeting: Option<MeetingDatum>,
    pub prediction: Option<DecompositionPrediction>,
    pub oracle: Option<OracleOutcome>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SpecializationReport {
    /// Oracle `(e, f)` when the local type is uniform.
    pub fn oracle_ef(&self) -> Option<(usize, usize)> {
        match &self.oracle {
            Some(OracleOutcome::Local(t)) if t.factors.len() == 1 => {
                Some((t.factors[0].e, t.factors[0].f))
            }
            _ => None,
        }
    }
}

pub fn verify_specialization(cover: &Cover, t0: &Rat, p: u64) -> SpecializationReport {
    let mut report = SpecializationReport {
        t0: t0.clone(),
        p,
        meeting: None,
        prediction: None,
        oracle: None,
        verdict: Verdict::OracleFailure,
        note: None,
    };
    if !is_prime(p) {
        report.note = Some(Error::NotPrime(p).to_string());
        return report;
    }
    if p == 2 || cover.is_bad(p) {
        report.verdict = Verdict::SkippedBadPrime;
        return report;
    }
    let f = match specialize_poly(&cover.p, t0) {
        Ok(f) => f,
        Err(e) => {
            report.note = Some(e.to_string());
            return report;
        }
    };
    let prediction = meeting_prime(t0, cover, p).and_then(|m| {
        let pred = prediction_from(cover, m.as_ref())?;
        Ok((m, pred))
    });
    match prediction {
        Ok((m, pred)) => {
            report.meeting = m;
            report.prediction = Some(pred);
        }
        Err(e) => {
            report.verdict = Verdict::Mismatch;
            report.note = Some(e.to_string());
            return report;
        }
    }
    match oracle(&f, p) {
        Ok(t) => {
            report.oracle = Some(OracleOutcome::Local(t));
            match report.oracle_ef() {
                Some((e, ff)) => report.verdict = report.prediction.as_ref().unwrap().verdict(e, ff),
                None => report.note = Some(Error::NonUniform { p }.to_string()),
            }
        }
        Err(e) => report.oracle = Some(OracleOutcome::Failure { failure: e.to_string() }),
    }
    report
}

/// Reports for all `(t0, p)` with separable specialization, sorted by
/// `(p, t0)`; `jobs` worker threads.
pub fn sweep(cover: &Cover, t0s: &[Rat], primes: &[u64], jobs: usize) -> Vec<SpecializationReport> {
    let points: Vec<&Rat> = t0s
        .iter()
        .filter(|t| specialize_poly(&cover.p, t).is_ok())
        .collect();
    let pairs: Vec<(u64, &Rat)> = primes
        .iter()
        .flat_map(|&p| points.iter().map(move |&t| (p, t)))
        .collect();
    let run = || -> Vec<SpecializationReport> {
        pairs.par_iter().map(|&(p, t)| verify_specialization(cover, t, p)).collect()
    };
    let mut out = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    out.sort_by(|a, b| (a.p, &a.t0).cmp(&(b.p, &b.t0)));
    out
}

/// One congruence `t0 = t_p mod p^N` (in the `1/T` chart when `t_p` is not
/// p-integral).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxConstraint {
    pub p: u64,
    #[serde(with = "rat_serde")]
    pub target: Rat,
    pub n: u32,
}

/// Least non-negative solution of the congruences (of `1/t0` in the `1/T`
/// chart).
pub fn approximate_specialization_point(constraints: &[ApproxConstraint]) -> Result<Rat> {
    if constraints.is_empty() {
        return Ok(Rat::zero());
    }
    let mut integral = Vec::new();
    for c in constraints {
        ensure_prime(c.p)?;
        if c.n == 0 {
            return Err(Error::Hypothesis("precision exponent must be positive".into()));
        }
        integral.push(c.target.is_zero() || val(&c.target, c.p)? >= 0);
    }
    let finite = integral[0];
    if integral.iter().any(|&b| b != finite) {
        return Err(Error::ChartMixing);
    }
    let mut primes: Vec<u64> = constraints.iter().map(|c| c.p).collect();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() != constraints.len() {
        return Err(Error::NonCoprimeModuli);
    }
    let mut congruences = Vec::new();
    let mut modulus = BigInt::one();
    for c in constraints {
        let m = BigInt::from(c.p).pow(c.n);
        let target = if finite { c.target.clone() } else { c.target.recip() };
        let r = rat_mod(&target, &m).ok_or(Error::NonIntegral { p: c.p })?;
        modulus *= &m;
        congruences.push((m, r));
    }
    let s = crt_combine(&congruences)?;
    Ok(if finite {
        Rat::from_integer(s)
    } else if s.is_zero() {
        Rat::new(BigInt::one(), modulus)
    } else {
        Rat::new(BigInt::one(), s)
    })
}

/// `Res_Z(Z^2 - d, f(Y - kZ))`, whose roots are `alpha +- k sqrt(d)`.
fn shifted_norm(f: &UniPoly, d: &Rat, k: i64) -> UniPoly {
    let kk = Rat::from_integer(k.into());
    let y = UniPoly::x();
    let (mut a, mut b) = (UniPoly::zero(), UniPoly::zero());
    for c in f.coeffs().iter().rev() {
        // (a + s b)(Y - k s) + c with s^2 = d
        let na = &(&a * &y) - &b.scale(&(&kk * d));
        let nb = &(&b * &y) - &a.scale(&kk);
        a = &na + &UniPoly::constant(c.clone());
        b = nb;
    }
    &(&a * &a) - &(&b * &b).scale(d)
}

/// Whether `Q_p(sqrt(d))` lies in the splitting field of `f` over `Q_p`,
/// given that field has degree `local_degree`.
pub fn contains_square_root(f: &UniPoly, d: &Rat, p: u64, local_degree: usize) -> Result<bool> {
    let mut last = Error::BudgetExhausted("no separable shifted norm".into());
    'shift: for k in 1..=8 {
        let g = shifted_norm(f, d, k);
        if g.discriminant().is_zero() {
            continue;
        }
        let mut contained = true;
        for (h, _) in factor_q(&g)? {
            match oracle(&h, p) {
                Ok(t) => contained &= t.factors.iter().all(|x| x.e * x.f <= local_degree),
                Err(e) => {
                    last = e;
                    continue 'shift;
                }
            }
        }
        return Ok(contained);
    }
    Err(last)
}

/// The least quadratic non-residue modulo an odd prime.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(&BigInt::from(u), p) == -1).unwrap_or(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationStep {
    pub beta: u64,
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    pub oracle: OracleOutcome,
    pub class: Option<QuadClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub branch: usize,
    pub p: u64,
    pub target: QuadClass,
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    /// `p` or `u p` with `u` the least non-residue.
    #[serde(with = "rat_serde")]
    pub representative: Rat,
    pub transcript: Vec<RealizationStep>,
}

/// Searches `t0 = t_i + beta p` (`1/(beta p)` at infinity) until the
/// completion of the specialization at `p` is `Q_p(sqrt(d))` with `d` in the
/// target class.
pub fn realize_local_class(
    cover: &Cover,
    branch: usize,
    p: u64,
    target: QuadClass,
    budget: u64,
) -> Result<Realization> {
    ensure_prime(p)?;
    let bp = cover
        .branch_points
        .get(branch)
        .ok_or_else(|| Error::Hypothesis(format!("no branch point {branch}")))?;
    if bp.e != 2 || !bp.location.is_rational() {
        return Err(Error::Hypothesis("branch point must be rational with e = 2".into()));
    }
    if p == 2 || cover.is_bad(p) {
        return Err(Error::Hypothesis(format!("{p} is a bad prime")));
    }
    let u = least_non_residue(p);
    let pr = Rat::from_integer(p.into());
    let reps = [(QuadClass::P, pr.clone()), (QuadClass::UP, &pr * Rat::from_integer(u.into()))];
    let representative = match target {
        QuadClass::P => reps[0].1.clone(),
        QuadClass::UP => reps[1].1.clone(),
        _ => return Err(Error::Hypothesis("target must be a ramified class".into())),
    };
    let mut transcript = Vec::new();
    for beta in (1..=budget).filter(|b| b % p != 0) {
        let step = &pr * Rat::from_integer(beta.into());
        let t0 = match bp.location.rational_value() {
            Some(ti) => ti + step,
            None => step.recip(),
        };
        let Ok(f) = specialize_poly(&cover.p, &t0) else { continue };
        let outcome = match oracle(&f, p) {
            Ok(t) => OracleOutcome::Local(t),
            Err(e) => OracleOutcome::Failure { failure: e.to_string() },
        };
        let mut class = None;
        if let OracleOutcome::Local(t) = &outcome {
            if t.factors.len() == 1 && (t.factors[0].e, t.factors[0].f) == (2, 1) {
                for (c, d) in &reps {
                    if contains_square_root(&f, d, p, 2)? {
                        class = Some(*c);
                    }
                }
            }
        }
        let hit = class == Some(target);
        transcript.push(RealizationStep { beta, t0: t0.clone(), oracle: outcome, class });
        if hit {
            debug_assert_eq!(quadratic_local_class(&representative, p)?, target);
            return Ok(Realization { branch, p, target, t0, representative, transcript });
        }
    }
    Err(Error::BudgetExhausted(format!("no t0 realizes class {target} at {p}")))
}

/// Rational `t0` in an inclusive integer range.
pub fn integer_points(lo: i64, hi: i64) -> Vec<Rat> {
    (lo..=hi).map(|t| Rat::from_integer(t.into())).collect()
}

/// Whether `t0` satisfies the constraint it was built from.
pub fn satisfies(t0: &Rat, c: &ApproxConstraint) -> Result<bool> {
    let (a, b) = if c.target.is_zero() || val(&c.target, c.p)? >= 0 {
        (t0.clone(), c.target.clone())
    } else {
        (t0.recip(), c.target.recip())
    };
    let diff = a - b;
    Ok(diff.is_zero() || val(&diff, c.p)? >= c.n as i64)
}
