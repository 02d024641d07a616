//! Certificate-producing searches built on the local predictions: primes with
//! prescribed Frobenius order at a branch point, Sylow adequacy certificates,
//! and obstructions to non-cyclic local behaviour.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::integer::{is_prime, primes_between, rat_mod, rational_valuation};
use crate::arith::{is_irreducible_q, rat_serde, Rat, UniPoly};
use crate::error::{Error, Result};
use crate::geometry::{BranchPoint, Cover, Location};
use crate::modp::{frobenius_data, reduce_relative, roots_mod_p, PolyModP};
use crate::padic::galois_local_invariants;
use crate::specialize::{frobenius_order_at_branch, meeting_prime, specialize_poly};

fn odd_primes(bound: u64) -> Vec<u64> {
    primes_between(3, bound)
}

/// Roots mod `p` of the chart polynomial of `bp`, when it has full degree
/// and is squarefree there.
fn branch_roots(bp: &BranchPoint, p: u64) -> Option<Vec<u64>> {
    let m = bp.location.chart_poly();
    let red = PolyModP::from_rat_poly(&m, p).ok()?;
    if red.degree() != Some(m.deg()) || !red.is_squarefree() {
        return None;
    }
    roots_mod_p(&red).ok()
}

/// Odd good primes `p <= bound` with a root `a` of `m_{t_i}` at which the
/// residue field of the branch point has Frobenius order `d`; the least such
/// root per prime.
pub fn find_frobenius_primes(
    cover: &Cover,
    branch: usize,
    d: usize,
    bound: u64,
) -> Result<Vec<(u64, u64)>> {
    let bp = cover
        .branch_points
        .get(branch)
        .ok_or_else(|| Error::Hypothesis(format!("no branch point {branch}")))?;
    if d == 0 || d > cover.n / bp.e {
        return Err(Error::Hypothesis(format!("order {d} exceeds n / e = {}", cover.n / bp.e)));
    }
    let mut out = Vec::new();
    for p in odd_primes(bound).into_iter().filter(|&p| !cover.is_bad(p)) {
        let Some(roots) = branch_roots(bp, p) else { continue };
        if let Some(a) = roots
            .into_iter()
            .find(|&a| frobenius_order_at_branch(bp, (p, a)).ok() == Some(d))
        {
            out.push((p, a));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalWitness {
    pub q: u64,
    pub e: usize,
    pub f: usize,
    pub g: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SylowWitness {
    pub ell: u64,
    /// `v_ell(n)`.
    pub valuation: u32,
    pub primes: [LocalWitness; 2],
}

/// Two primes per prime divisor `ell` of `n` whose decomposition groups have
/// order divisible by the full power of `ell` in `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdequacyCertificate {
    pub polynomial: UniPoly,
    pub group_order: usize,
    pub sylow: Vec<SylowWitness>,
}

fn ell_valuation(x: usize, ell: u64) -> u32 {
    let (mut x, mut v) = (x as u64, 0);
    while x > 0 && x % ell == 0 {
        x /= ell;
        v += 1;
    }
    v
}

fn prime_factors(n: usize) -> Vec<u64> {
    primes_between(2, n as u64).into_iter().filter(|&l| (n as u64).is_multiple_of(l)).collect()
}

impl AdequacyCertificate {
    /// Re-runs every cited oracle call and checks the Sylow conditions.
    pub fn verify(&self) -> Result<bool> {
        let n = self.group_order;
        if self.polynomial.deg() != n {
            return Ok(false);
        }
        let ells = prime_factors(n);
        if self.sylow.iter().map(|s| s.ell).collect::<Vec<_>>() != ells {
            return Ok(false);
        }
        for s in &self.sylow {
            if s.valuation != ell_valuation(n, s.ell) || s.primes[0].q == s.primes[1].q {
                return Ok(false);
            }
            for w in &s.primes {
                if w.q == 2 || !is_prime(w.q) {
                    return Ok(false);
                }
                if galois_local_invariants(&self.polynomial, w.q)? != (w.e, w.f, w.g) {
                    return Ok(false);
                }
                if ell_valuation(w.e * w.f, s.ell) < s.valuation {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Scans odd primes up to `bound`, ramified primes first; `Err` lists the
/// prime divisors of `n` lacking two witnesses.
pub fn adequacy_certificate_for_field(
    f: &UniPoly,
    n: usize,
    bound: u64,
) -> std::result::Result<AdequacyCertificate, Vec<u64>> {
    let ells = prime_factors(n);
    let disc = f.discriminant();
    let divides_disc = |q: u64| {
        !disc.is_zero() && rational_valuation(&disc, q).map(|v| v > 0).unwrap_or(true)
    };
    let (ramified, unramified): (Vec<u64>, Vec<u64>) =
        odd_primes(bound).into_iter().partition(|&q| divides_disc(q));
    let mut found: Vec<Vec<LocalWitness>> = vec![Vec::new(); ells.len()];
    for q in ramified.into_iter().chain(unramified) {
        if (n as u64).is_multiple_of(q) && divides_disc(q) {
            continue;
        }
        let Ok((e, ff, g)) = galois_local_invariants(f, q) else { continue };
        for (k, &ell) in ells.iter().enumerate() {
            if found[k].len() < 2 && ell_valuation(e * ff, ell) >= ell_valuation(n, ell) {
                found[k].push(LocalWitness { q, e, f: ff, g });
            }
        }
        if found.iter().all(|w| w.len() == 2) {
            break;
        }
    }
    let deficient: Vec<u64> = ells
        .iter()
        .zip(&found)
        .filter(|(_, w)| w.len() < 2)
        .map(|(&l, _)| l)
        .collect();
    if !deficient.is_empty() || n < 2 {
        return Err(deficient);
    }
    let sylow = ells
        .iter()
        .zip(found)
        .map(|(&ell, w)| SylowWitness {
            ell,
            valuation: ell_valuation(n, ell),
            primes: [w[0].clone(), w[1].clone()],
        })
        .collect();
    Ok(AdequacyCertificate { polynomial: f.clone(), group_order: n, sylow })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdequateSpecialization {
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    pub certificate: AdequacyCertificate,
    pub note: String,
}

const SEARCH_NOTE: &str = "certified per specialization by the two-primes Sylow criterion; the cover-level hypothesis on the branch data is not checked";

/// Integer `t0 in [lo, hi]` whose specialization is irreducible of degree `n`
/// (hence has the full group) and carries an adequacy certificate.
pub fn adequate_specialization_search(
    cover: &Cover,
    lo: i64,
    hi: i64,
    bound: u64,
) -> Vec<AdequateSpecialization> {
    let mut out: Vec<AdequateSpecialization> = (lo..=hi)
        .into_par_iter()
        .filter_map(|t| {
            let t0 = Rat::from_integer(t.into());
            let f = specialize_poly(&cover.p, &t0).ok()?;
            if !is_irreducible_q(&f).ok()? {
                return None;
            }
            let certificate = adequacy_certificate_for_field(&f, cover.n, bound).ok()?;
            Some(AdequateSpecialization { t0, certificate, note: SEARCH_NOTE.into() })
        })
        .collect();
    out.sort_by(|a, b| a.t0.cmp(&b.t0));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub cover: String,
    pub branch: usize,
    pub location: Location,
    /// Roots of `m_{t_i}` mod `p`.
    pub roots: Vec<u64>,
    /// Roots of the reduced residue polynomial at each root above.
    pub residue_roots: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub cover: String,
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    pub meeting_branch: Option<usize>,
    pub e: Option<usize>,
    pub f: Option<usize>,
    /// Unramified, or `e f` divides the met `e_i`.
    pub cyclic_compatible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionPrime {
    pub p: u64,
    pub p_mod_q: u64,
    pub witnesses: Vec<SplitWitness>,
    pub transcript: Vec<TranscriptEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HypothesisStatus {
    HypothesisAssumed,
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub status: HypothesisStatus,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub covers: Vec<String>,
    pub q: u64,
    pub bound: u64,
    pub hypothesis: HypothesisCheck,
    /// How cyclicity of the sampled decomposition groups is judged.
    pub surrogate: String,
    pub primes: Vec<ObstructionPrime>,
}

impl ObstructionCertificate {
    pub fn prime_list(&self) -> Vec<u64> {
        self.primes.iter().map(|p| p.p).collect()
    }
}

/// Total splitness of the residue data of `bp` at `p`.
fn split_witness(cover: &Cover, i: usize, p: u64) -> Option<SplitWitness> {
    let bp = &cover.branch_points[i];
    let roots = branch_roots(bp, p)?;
    if roots.len() != bp.location.degree() {
        return None;
    }
    let m = bp.location.chart_poly();
    let mut residue_roots = Vec::new();
    for &a in &roots {
        let r = reduce_relative(&bp.residue, &m, (p, a)).ok()?;
        if r.degree() != Some(bp.residue_degree()) || !r.is_squarefree() {
            return None;
        }
        let rr = roots_mod_p(&r).ok()?;
        if rr.len() != bp.residue_degree() {
            return None;
        }
        residue_roots.push(rr);
    }
    Some(SplitWitness { cover: cover.name.clone(), branch: i, location: bp.location.clone(), roots, residue_roots })
}

/// Integer points in `[-10, 10]` and points meeting each rational branch point.
fn sample_points(cover: &Cover, p: u64) -> Vec<Rat> {
    let mut pts: Vec<Rat> = (-10i64..=10).map(|t| Rat::from_integer(t.into())).collect();
    let pr = Rat::from_integer(p.into());
    for bp in &cover.branch_points {
        for beta in 1..=2i64 {
            let step = &pr * Rat::from_integer(beta.into());
            match (&bp.location, bp.location.rational_value()) {
                (Location::Infinity, _) => pts.push(step.recip()),
                (_, Some(ti)) => pts.push(ti + step),
                _ => {}
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts.retain(|t| specialize_poly(&cover.p, t).is_ok());
    pts
}

fn transcript_entry(cover: &Cover, t0: &Rat, p: u64) -> TranscriptEntry {
    let mut entry = TranscriptEntry {
        cover: cover.name.clone(),
        t0: t0.clone(),
        meeting_branch: None,
        e: None,
        f: None,
        cyclic_compatible: false,
        failure: None,
    };
    let meeting = match meeting_prime(t0, cover, p) {
        Ok(m) => m,
        Err(err) => {
            entry.failure = Some(err.to_string());
            return entry;
        }
    };
    entry.meeting_branch = meeting.as_ref().map(|m| m.branch);
    let f = cover.specialize(t0);
    match galois_local_invariants(&f, p) {
        Ok((e, ff, _)) => {
            entry.e = Some(e);
            entry.f = Some(ff);
            entry.cyclic_compatible = e == 1
                || meeting
                    .map(|m| cover.branch_points[m.branch].e.is_multiple_of(e * ff))
                    .unwrap_or(false);
        }
        Err(err) => entry.failure = Some(err.to_string()),
    }
    entry
}

/// Whether some sampled unramified Frobenius has order `n`, which makes the
/// group cyclic.
fn has_element_of_full_order(cover: &Cover) -> bool {
    let primes: Vec<u64> = odd_primes(200).into_iter().filter(|&p| !cover.is_bad(p)).take(15).collect();
    (2i64..=12).any(|t| {
        let f = cover.specialize(&Rat::from_integer(t.into()));
        primes.iter().any(|&p| frobenius_data(&f, p).map(|d| d.frobenius_order == cover.n).unwrap_or(false))
    })
}

fn hypothesis_check(covers: &[Cover], q: u64) -> HypothesisCheck {
    for c in covers {
        if !(c.n as u64).is_multiple_of(q * q) {
            return HypothesisCheck {
                status: HypothesisStatus::HypothesisNotMet,
                note: format!("{}: q^2 does not divide |G| = {}, so G has no non-cyclic abelian subgroup of exponent q", c.name, c.n),
            };
        }
        if has_element_of_full_order(c) {
            return HypothesisCheck {
                status: HypothesisStatus::HypothesisNotMet,
                note: format!("{}: a Frobenius of order |G| = {} was found, so G is cyclic", c.name, c.n),
            };
        }
    }
    HypothesisCheck {
        status: HypothesisStatus::HypothesisAssumed,
        note: "heuristic: q^2 divides |G| and no sampled Frobenius has order |G|; a (Z/q)^2 subgroup is assumed, not proven".into(),
    }
}

/// Odd primes `p <= bound`, good for every cover, `p = 1 mod q`, at which
/// every branch point and residue field of every cover is totally split.
pub fn grunwald_obstruction(covers: &[Cover], q: u64, bound: u64) -> Result<ObstructionCertificate> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut primes = Vec::new();
    for p in odd_primes(bound) {
        if p % q != 1 % q || covers.iter().any(|c| c.is_bad(p)) {
            continue;
        }
        let mut witnesses = Vec::new();
        let mut split = true;
        'covers: for c in covers {
            for i in 0..c.branch_points.len() {
                match split_witness(c, i, p) {
                    Some(w) => witnesses.push(w),
                    None => {
                        split = false;
                        break 'covers;
                    }
                }
            }
        }
        if !split {
            continue;
        }
        let transcript = covers
            .iter()
            .flat_map(|c| sample_points(c, p).into_iter().map(move |t| (c, t)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(c, t)| transcript_entry(c, t, p))
            .collect();
        primes.push(ObstructionPrime { p, p_mod_q: p % q, witnesses, transcript });
    }
    Ok(ObstructionCertificate {
        covers: covers.iter().map(|c| c.name.clone()).collect(),
        q,
        bound,
        hypothesis: hypothesis_check(covers, q),
        surrogate: "decomposition group judged cyclic when unramified or when e*f divides the e_i of the met branch point; exact for V4, an order-level surrogate otherwise".into(),
        primes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametricStatement {
    pub p: u64,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametricReport {
    pub certificate: ObstructionCertificate,
    pub statements: Vec<ParametricStatement>,
    pub assumption: String,
}

pub fn parametric_obstruction_report(covers: &[Cover], q: u64, bound: u64) -> Result<ParametricReport> {
    let certificate = grunwald_obstruction(covers, q, bound)?;
    let statements = certificate
        .primes
        .iter()
        .map(|op| ParametricStatement {
            p: op.p,
            statement: format!(
                "no specialization of the given covers has completion at {} with non-cyclic Galois group; hence any G-extension of Q whose decomposition group at {} is (Z/{q})^2 is realized by none of them",
                op.p, op.p
            ),
        })
        .collect();
    Ok(ParametricReport {
        certificate,
        statements,
        assumption: "existence of G-extensions of Q with decomposition group (Z/q)^2 at the listed primes is assumed, not verified".into(),
    })
}

/// Residue of `t0` modulo `p` when p-integral.
pub fn reduce_point(t0: &Rat, p: u64) -> Option<u64> {
    rat_mod(t0, &BigInt::from(p)).map(|r| u64::try_from(r).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unipoly::rat;

    fn cover(name: &str) -> Cover {
        Cover::bundled(name).unwrap()
    }

    #[test]
    fn frobenius_primes() {
        let v4 = cover("v4_sqrt_t_sqrt_t_minus_1");
        assert_eq!(find_frobenius_primes(&v4, 0, 2, 20).unwrap(), vec![(7, 0), (11, 0), (19, 0)]);
        assert_eq!(find_frobenius_primes(&v4, 0, 1, 20).unwrap(), vec![(5, 0), (13, 0), (17, 0)]);
        let c3 = cover("c3_shanks");
        let ps: Vec<u64> = find_frobenius_primes(&c3, 0, 1, 20).unwrap().iter().map(|x| x.0).collect();
        assert_eq!(ps, vec![7, 13, 19]);
        for (p, a) in find_frobenius_primes(&c3, 0, 1, 20).unwrap() {
            assert_eq!((a * a + 3 * a + 9) % p, 0);
        }
        assert!(find_frobenius_primes(&v4, 0, 3, 20).is_err());
    }

    fn pair(c: &AdequacyCertificate, k: usize) -> (u64, u64) {
        (c.sylow[k].primes[0].q, c.sylow[k].primes[1].q)
    }

    #[test]
    fn frobenius_densities() {
        let v4 = cover("v4_sqrt_t_sqrt_t_minus_1");
        let split = find_frobenius_primes(&v4, 0, 1, 10_000).unwrap().len() as f64;
        let inert = find_frobenius_primes(&v4, 0, 2, 10_000).unwrap().len() as f64;
        assert!(split > 500.0 && inert > 500.0);
        if (split - inert).abs() > 0.1 * split.max(inert) {
            eprintln!("warning: d = 1 and d = 2 counts differ by more than 10%: {split} vs {inert}");
        }
    }

    #[test]
    fn adequacy() {
        let f = UniPoly::from_ints(&[1, 0, -82, 0, 1]);
        let c = adequacy_certificate_for_field(&f, 4, 50).unwrap();
        assert_eq!(pair(&c, 0), (3, 7));
        assert!(c.sylow[0].primes.iter().all(|w| (w.e, w.f) == (2, 2)));
        assert!(c.verify().unwrap());
        let c = adequacy_certificate_for_field(&UniPoly::from_ints(&[-3, 0, 1]), 2, 10).unwrap();
        assert_eq!(pair(&c, 0), (3, 5));
        assert_eq!(adequacy_certificate_for_field(&UniPoly::from_ints(&[1, 0, 1]), 2, 3), Err(vec![2]));
        let c = adequacy_certificate_for_field(&UniPoly::from_ints(&[-1, -16, -13, 1]), 3, 100).unwrap();
        assert_eq!(pair(&c, 0), (7, 31));
    }

    #[test]
    fn tampered_certificate_fails() {
        let f = UniPoly::from_ints(&[1, 0, -82, 0, 1]);
        let mut c = adequacy_certificate_for_field(&f, 4, 50).unwrap();
        c.sylow[0].primes[1].q = 11;
        assert!(!c.verify().unwrap());
    }

    #[test]
    fn specialization_search() {
        let v4 = cover("v4_sqrt_t_sqrt_t_minus_1");
        let found = adequate_specialization_search(&v4, 2, 30, 50);
        let hit = found.iter().find(|a| a.t0 == rat(21)).unwrap();
        assert_eq!(pair(&hit.certificate, 0), (3, 7));
        let c3 = cover("c3_shanks");
        let found = adequate_specialization_search(&c3, 2, 30, 100);
        let hit = found.iter().find(|a| a.t0 == rat(13)).unwrap();
        assert_eq!(pair(&hit.certificate, 0), (7, 31));
        let found = adequate_specialization_search(&cover("c2_sqrt_t"), 3, 3, 10);
        assert_eq!(pair(&found[0].certificate, 0), (3, 5));
    }

    #[test]
    fn obstructions() {
        let v4 = cover("v4_sqrt_t_sqrt_t_minus_1");
        let c2 = cover("c2_sqrt_t");
        let c3 = cover("c3_shanks");
        let cert = grunwald_obstruction(std::slice::from_ref(&v4), 2, 20).unwrap();
        assert_eq!(cert.prime_list(), vec![5, 13, 17]);
        assert_eq!(cert.hypothesis.status, HypothesisStatus::HypothesisAssumed);
        assert!(cert.primes.iter().all(|p| p.transcript.iter().all(|t| t.cyclic_compatible)));
        let both = grunwald_obstruction(&[v4.clone(), c2.clone()], 2, 20).unwrap();
        assert_eq!(both.prime_list(), vec![5, 13, 17]);
        let only_c2 = grunwald_obstruction(std::slice::from_ref(&c2), 2, 20).unwrap();
        assert_eq!(only_c2.prime_list(), vec![3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(only_c2.hypothesis.status, HypothesisStatus::HypothesisNotMet);
        let cubic = grunwald_obstruction(std::slice::from_ref(&c3), 3, 100).unwrap();
        assert!(cubic.prime_list().iter().all(|p| p % 3 == 1));
        assert_eq!(cubic.prime_list().len(), primes_between(3, 100).iter().filter(|p| *p % 3 == 1).count());
        assert_eq!(cubic.hypothesis.status, HypothesisStatus::HypothesisNotMet);
    }

    #[test]
    fn parametric_report() {
        let v4 = cover("v4_sqrt_t_sqrt_t_minus_1");
        let r = parametric_obstruction_report(&[v4], 2, 20).unwrap();
        assert_eq!(r.statements.iter().map(|s| s.p).collect::<Vec<_>>(), vec![5, 13, 17]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["certificate"]["hypothesis"]["status"], "HYPOTHESIS_ASSUMED");
    }
}
