//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;

use gsl_core::arith::integer::{legendre, primes_between};
use gsl_core::geometry::{default_prec, puiseux_at, roots_of_unity_check, BUNDLED};
use gsl_core::specialize::{contains_square_root, integer_points};
use gsl_core::*;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn covers() -> Vec<Cover> {
    BUNDLED.iter().map(|n| Cover::bundled(n).unwrap()).collect()
}

fn first_failures(v: &[String]) -> String {
    let shown: Vec<&str> = v.iter().take(5).map(|s| s.as_str()).collect();
    format!("{} failures, e.g. {}", v.len(), shown.join("; "))
}

fn verdict(ok: usize, fails: Vec<String>, what: &str) -> Outcome {
    if fails.is_empty() {
        Ok(format!("{ok} {what}"))
    } else {
        Err(first_failures(&fails))
    }
}

fn criterion_1() -> Outcome {
    let c2 = Cover::bundled("c2_sqrt_t").unwrap();
    let mut fails = Vec::new();
    let mut checked = 0;
    for p in primes_between(3, 100) {
        let alphas: Vec<u64> = if p - 2 <= 12 {
            (2..p).collect()
        } else {
            let step = (p - 2) / 12;
            (0..12).map(|i| 2 + i * step).collect()
        };
        for alpha in alphas {
            checked += 1;
            let t0 = rat((alpha * p * p) as i64);
            let want = if legendre(&BigInt::from(alpha), p) == 1 { (1, 1) } else { (1, 2) };
            match galois_local_invariants(&c2.specialize(&t0), p) {
                Ok((e, f, _)) if (e, f) == want => {}
                other => fails.push(format!("p={p} alpha={alpha}: oracle {other:?}")),
            }
            match predict_decomposition(&c2, &t0, p) {
                Ok(DecompositionPrediction::Divisibility { e_pred: 1, .. }) => {}
                other => fails.push(format!("p={p} alpha={alpha}: prediction {other:?}")),
            }
        }
    }
    verdict(checked, fails, "points Y^2 - alpha p^2")
}

struct Grid {
    /// `(cover name, n, e_i of the met branch point or 1, report)`.
    reports: Vec<(String, usize, usize, SpecializationReport)>,
}

fn grid() -> Grid {
    let mut reports = Vec::new();
    for c in covers() {
        let primes: Vec<u64> = primes_between(3, 200).into_iter().filter(|&p| !c.is_bad(p)).collect();
        let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        for r in sweep(&c, &integer_points(-100, 100), &primes, jobs) {
            let e_i = r.meeting.as_ref().map(|m| c.branch_points[m.branch].e).unwrap_or(1);
            reports.push((c.name.clone(), c.n, e_i, r));
        }
    }
    Grid { reports }
}

fn label(name: &str, r: &SpecializationReport) -> String {
    format!("{name} t0={} p={}: {:?} {:?}", r.t0, r.p, r.oracle, r.note)
}

fn criterion_2(g: &Grid) -> Outcome {
    let (mut meeting, mut non_meeting, mut fails) = (0, 0, Vec::new());
    for (name, _, e_i, r) in &g.reports {
        let ef = r.oracle_ef();
        match (&r.meeting, ef) {
            (Some(m), Some((e, _))) => {
                meeting += 1;
                if e_i / (m.a_p as usize).gcd(e_i) != e {
                    fails.push(label(name, r));
                }
            }
            (None, Some((e, _))) if r.note.is_none() => {
                non_meeting += 1;
                if e != 1 {
                    fails.push(label(name, r));
                }
            }
            _ => fails.push(label(name, r)),
        }
    }
    verdict(meeting + non_meeting, fails, &format!("reports ({meeting} meeting, {non_meeting} non-meeting)"))
}

fn criterion_3(g: &Grid) -> Outcome {
    let (mut exact, mut divisibility, mut fails) = (0, 0, Vec::new());
    for (name, _, _, r) in &g.reports {
        let (Some(pred), Some((e, f))) = (&r.prediction, r.oracle_ef()) else { continue };
        match *pred {
            DecompositionPrediction::Exact { e_pred, f_pred, .. } => {
                exact += 1;
                if (e, f) != (e_pred, f_pred) {
                    fails.push(label(name, r));
                }
            }
            DecompositionPrediction::Divisibility { f_lower, .. } => {
                divisibility += 1;
                if f % f_lower != 0 {
                    fails.push(label(name, r));
                }
            }
            DecompositionPrediction::UnramifiedCyclic => {}
        }
    }
    if exact == 0 || divisibility == 0 {
        fails.push("a mode was never exercised".into());
    }
    verdict(exact + divisibility, fails, &format!("meeting reports ({exact} exact, {divisibility} divisibility)"))
}

fn criterion_4() -> Outcome {
    let v4 = Cover::bundled("v4_sqrt_t_sqrt_t_minus_1").unwrap();
    let cert = match grunwald_obstruction(std::slice::from_ref(&v4), 2, 100) {
        Ok(c) => c,
        Err(e) => return Err(e.to_string()),
    };
    let primes = cert.prime_list();
    let mut fails = Vec::new();
    let mut checked = 0;
    for &p in &primes {
        for t in -100..=100 {
            let t0 = rat(t);
            let Ok(f) = gsl_core::specialize::specialize_poly(&v4.p, &t0) else { continue };
            checked += 1;
            match galois_local_invariants(&f, p) {
                Ok((e, ff, _)) if e * ff != 4 => {}
                other => fails.push(format!("p={p} t0={t}: {other:?}")),
            }
        }
    }
    if primes.contains(&7) {
        fails.push("7 listed as obstruction prime".into());
    }
    match galois_local_invariants(&v4.specialize(&rat(7)), 7) {
        Ok((e, f, _)) if e * f == 4 => {}
        other => fails.push(format!("non-vacuity at p=7 t0=7: {other:?}")),
    }
    verdict(checked, fails, &format!("points at obstruction primes {primes:?}; p=7, t0=7 has e*f=4"))
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let cases = [("v4_sqrt_t_sqrt_t_minus_1", 21, (3, 7), (2, 2)), ("c3_shanks", 13, (7, 31), (3, 1))];
    for (name, t, qs, ef) in cases {
        let c = Cover::bundled(name).unwrap();
        match adequacy_certificate_for_field(&c.specialize(&rat(t)), c.n, 100) {
            Ok(cert) => {
                let w = &cert.sylow[0].primes;
                if cert.sylow.len() != 1 || (w[0].q, w[1].q) != qs {
                    fails.push(format!("{name}: primes {:?}", (w[0].q, w[1].q)));
                }
                if w.iter().any(|x| (x.e, x.f) != ef) {
                    fails.push(format!("{name}: local types {w:?}"));
                }
                if cert.verify() != Ok(true) {
                    fails.push(format!("{name}: certificate does not re-verify"));
                }
            }
            Err(ells) => fails.push(format!("{name}: deficient {ells:?}")),
        }
    }
    verdict(2, fails, "certificates (3,7) and (7,31) re-verified")
}

fn criterion_6(g: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let primes = primes_between(3, 50);
    let mut fails = Vec::new();
    let mut pairs = 0;
    while pairs < 1000 {
        let deg = rng.gen_range(1..=4usize);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-30..=30)).collect();
        c.push(1);
        let f = UniPoly::from_ints(&c);
        let p = primes[rng.gen_range(0..primes.len())];
        let Ok(fd) = frobenius_data(&f, p) else { continue };
        pairs += 1;
        match oracle(&f, p) {
            Ok(t) => {
                let mut degs: Vec<usize> = t
                    .factors
                    .iter()
                    .flat_map(|x| std::iter::repeat_n(x.e * x.f, x.count))
                    .collect();
                degs.sort();
                if degs != fd.cycle_type.0 || !t.is_unramified() {
                    fails.push(format!("{c:?} at {p}: {t:?} vs {:?}", fd.cycle_type));
                }
            }
            Err(e) => fails.push(format!("{c:?} at {p}: {e}")),
        }
    }
    let mut uniform = 0;
    for (name, n, _, r) in &g.reports {
        if (*n as u64).is_multiple_of(r.p) {
            continue;
        }
        if let Some(note) = &r.note {
            fails.push(format!("{name} t0={} p={}: {note}", r.t0, r.p));
        } else {
            uniform += 1;
        }
    }
    verdict(pairs, fails, &format!("random pairs agree; {uniform} cover specializations uniform"))
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for c in covers() {
        if c.riemann_hurwitz_sum() != 2 * c.n - 2 {
            fails.push(format!("{}: Riemann-Hurwitz sum {}", c.name, c.riemann_hurwitz_sum()));
        }
        for bp in &c.branch_points {
            checked += 1;
            if roots_of_unity_check(bp) != Ok(true) {
                fails.push(format!("{} at {}: roots of unity", c.name, bp.location.label()));
            }
            let prec = default_prec(&c.p, &bp.location);
            let (a, b) = (puiseux_at(&c.p, &bp.location, prec), puiseux_at(&c.p, &bp.location, 2 * prec));
            match (a, b) {
                (Ok(a), Ok(b)) if (a.e, &a.residue, &a.residue_field) == (b.e, &b.residue, &b.residue_field) => {}
                other => fails.push(format!("{} at {}: unstable {other:?}", c.name, bp.location.label())),
            }
        }
    }
    verdict(checked, fails, "branch points; Riemann-Hurwitz holds for all covers")
}

fn criterion_8() -> Outcome {
    let c2 = Cover::bundled("c2_sqrt_t").unwrap();
    let mut fails = Vec::new();
    let mut found = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let mut classes = BTreeSet::new();
        for target in [QuadClass::P, QuadClass::UP] {
            match realize_local_class(&c2, 0, p, target, 200) {
                Ok(r) => {
                    let f = c2.specialize(&r.t0);
                    let ef = galois_local_invariants(&f, p);
                    let rep = quadratic_local_class(&r.representative, p);
                    let contained = contains_square_root(&f, &r.representative, p, 2);
                    if ef != Ok((2, 1, 1)) || rep != Ok(target) || contained != Ok(true) {
                        fails.push(format!("p={p} {target}: t0={} {ef:?} {rep:?} {contained:?}", r.t0));
                    }
                    classes.insert(quadratic_local_class(&r.t0, p).map_err(|e| e.to_string()));
                    found.push(format!("{p}:{target}->{}", r.t0));
                }
                Err(e) => fails.push(format!("p={p} {target}: {e}")),
            }
        }
        if classes.len() != 2 {
            fails.push(format!("p={p}: realized fields are isomorphic {classes:?}"));
        }
    }
    verdict(8, fails, &format!("classes realized [{}]", found.join(", ")))
}

fn main() -> ExitCode {
    let start = std::time::Instant::now();
    let g = grid();
    let results: Vec<(&str, Outcome)> = vec![
        ("quadratic residue reproduction", criterion_1()),
        ("inertia sweep", criterion_2(&g)),
        ("decomposition sweep", criterion_3(&g)),
        ("obstruction soundness", criterion_4()),
        ("adequacy certificates", criterion_5()),
        ("oracle cross-validation", criterion_6(&g)),
        ("geometry invariants", criterion_7()),
        ("quadratic realization", criterion_8()),
    ];
    let mut ok = true;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {} ({name}): PASS ({msg})", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {} ({name}): FAIL ({msg})", i + 1);
            }
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
