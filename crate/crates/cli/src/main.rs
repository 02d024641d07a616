//! `gsl`: JSON reports on specializations of Galois covers.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use gsl_core::arith::integer::{is_prime, primes_between};
use gsl_core::arith::unipoly::parse_rat;
use gsl_core::geometry::roots_of_unity_check;
use gsl_core::modp::fq::set_seed;
use gsl_core::specialize::{integer_points, specialize_poly, OracleOutcome};
use gsl_core::*;

#[derive(Parser)]
#[command(name = "gsl", version, about = "Local behaviour of specializations of Galois covers")]
struct Cli {
    /// Worker threads for sweeps and searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Print a human-readable summary on standard error.
    #[arg(long, global = true)]
    summary: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    /// Specialization point, an integer or fraction.
    #[arg(long, allow_hyphen_values = true)]
    t0: String,
    #[arg(long)]
    p: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Branch points, residue fields, bad primes and the Galois probe.
    Analyze {
        cover: PathBuf,
        #[arg(long, default_value_t = 10)]
        prime_budget: usize,
    },
    /// One report per (t0, p) as JSON lines.
    Verify {
        cover: PathBuf,
        /// Inclusive integer range `LO:HI`.
        #[arg(long, allow_hyphen_values = true, default_value = "-20:20")]
        t0_range: String,
        #[arg(long, default_value_t = 50)]
        prime_max: u64,
        /// Restrict to these primes (repeatable).
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// Meeting datum and predicted inertia and decomposition.
    Predict {
        cover: PathBuf,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Local splitting type of the specialization.
    Oracle {
        cover: PathBuf,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Two-primes Sylow certificate for a specialization, or a search.
    Adequacy {
        cover: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "t0_range")]
        t0: Option<String>,
        /// Search integer points `LO:HI` instead of a single `t0`.
        #[arg(long, allow_hyphen_values = true)]
        t0_range: Option<String>,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Primes where no specialization has non-cyclic local Galois group.
    Obstruct {
        #[arg(required = true)]
        covers: Vec<PathBuf>,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        bound: u64,
        /// Emit the parametric-set report instead of the bare certificate.
        #[arg(long)]
        parametric: bool,
    },
    /// Primes with prescribed Frobenius order at a branch point.
    FrobeniusPrimes {
        cover: PathBuf,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        bound: u64,
    },
    /// A t0 whose completion at p is the given ramified quadratic class.
    Realize {
        cover: PathBuf,
        #[arg(long)]
        p: u64,
        /// `p` or `up`.
        #[arg(long)]
        class: QuadClass,
        /// Branch point index; defaults to the first rational one with e = 2.
        #[arg(long)]
        branch: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
    },
}

struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Exit { code: 1, message: message.into() }
    }

    fn math(message: impl Into<String>) -> Self {
        Exit { code: 2, message: message.into() }
    }
}

type Run = std::result::Result<(), Exit>;

fn load(path: &PathBuf) -> std::result::Result<Cover, Exit> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
    Cover::from_json(&text).map_err(|e| match e {
        Error::Parse(_) | Error::InvalidCover(_) => Exit::usage(format!("{}: {e}", path.display())),
        other => Exit::math(format!("{}: {other}", path.display())),
    })
}

fn rational(s: &str) -> std::result::Result<Rat, Exit> {
    parse_rat(s).map_err(|e| Exit::usage(format!("t0 {s:?}: {e}")))
}

fn range(s: &str) -> std::result::Result<(i64, i64), Exit> {
    let bad = || Exit::usage(format!("range {s:?} must be LO:HI with LO <= HI"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn prime(p: u64) -> Run {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Exit::usage(format!("{p} is not prime")))
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn analyze(cover: &Cover, prime_budget: usize, summary: bool) -> Run {
    let probe = probabilistic_galois_check(cover, prime_budget);
    let roots_of_unity: Vec<bool> = cover
        .branch_points
        .iter()
        .map(|bp| roots_of_unity_check(bp).unwrap_or(false))
        .collect();
    let rh = cover.riemann_hurwitz_sum();
    emit(&json!({
        "name": cover.name,
        "n": cover.n,
        "discriminant": cover.disc,
        "branch_points": cover.branch_points,
        "bad_primes": cover.bad_primes,
        "riemann_hurwitz": { "sum": rh, "expected": 2 * cover.n - 2 },
        "roots_of_unity": roots_of_unity,
        "galois_probe": probe,
    }));
    if summary {
        for bp in &cover.branch_points {
            eprintln!("{}: e = {}, residue degree {}", bp.location.label(), bp.e, bp.residue_degree());
        }
        eprintln!("bad primes {:?}; probe {}", cover.bad_primes, if probe.passed { "passed" } else { "FAILED" });
    }
    if !probe.passed {
        return Err(Exit::math("Galois probe failed"));
    }
    if rh != 2 * cover.n - 2 {
        return Err(Exit::math(format!("Riemann-Hurwitz sum {rh} differs from 2n - 2")));
    }
    if roots_of_unity.contains(&false) {
        return Err(Exit::math("a residue field lacks the e_i-th roots of unity"));
    }
    Ok(())
}

fn verify(cover: &Cover, t0_range: &str, prime_max: u64, only: &[u64], jobs: usize, summary: bool) -> Run {
    let (lo, hi) = range(t0_range)?;
    let primes = if only.is_empty() {
        primes_between(3, prime_max)
    } else {
        for &p in only {
            prime(p)?;
        }
        let mut v = only.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let reports = sweep(cover, &integer_points(lo, hi), &primes, jobs);
    let mut counts: BTreeMap<Verdict, usize> = BTreeMap::new();
    for r in &reports {
        emit(r);
        *counts.entry(r.verdict).or_default() += 1;
    }
    if summary {
        let parts: Vec<String> = counts.iter().map(|(v, n)| format!("{}: {n}", json!(v).as_str().unwrap())).collect();
        eprintln!("{} reports; {}", reports.len(), parts.join(", "));
    }
    if counts.contains_key(&Verdict::Mismatch) {
        return Err(Exit::math("MISMATCH reported"));
    }
    if counts.contains_key(&Verdict::OracleFailure) {
        return Err(Exit { code: 3, message: "oracle failure at a non-bad prime".into() });
    }
    Ok(())
}

fn predict(cover: &Cover, point: &PointArgs) -> Run {
    let t0 = rational(&point.t0)?;
    prime(point.p)?;
    let meeting = meeting_prime(&t0, cover, point.p).map_err(|e| Exit::math(e.to_string()))?;
    let inertia = predict_inertia(cover, &t0, point.p).map_err(|e| Exit::math(e.to_string()))?;
    let prediction = predict_decomposition(cover, &t0, point.p).map_err(|e| Exit::math(e.to_string()))?;
    emit(&json!({
        "t0": t0.to_string(),
        "p": point.p,
        "bad_prime": cover.is_bad(point.p),
        "meeting": meeting,
        "inertia": inertia,
        "prediction": prediction,
    }));
    Ok(())
}

fn run_oracle(cover: &Cover, point: &PointArgs) -> Run {
    let t0 = rational(&point.t0)?;
    prime(point.p)?;
    let f = specialize_poly(&cover.p, &t0).map_err(|e| Exit::math(e.to_string()))?;
    let outcome = match oracle(&f, point.p) {
        Ok(t) => OracleOutcome::Local(t),
        Err(e) => OracleOutcome::Failure { failure: e.to_string() },
    };
    emit(&json!({ "t0": t0.to_string(), "p": point.p, "polynomial": f, "oracle": outcome }));
    match outcome {
        OracleOutcome::Failure { failure } if !cover.is_bad(point.p) => {
            Err(Exit { code: 3, message: failure })
        }
        OracleOutcome::Failure { failure } => Err(Exit::math(failure)),
        OracleOutcome::Local(_) => Ok(()),
    }
}

fn adequacy(cover: &Cover, t0: Option<&str>, t0_range: Option<&str>, bound: u64) -> Run {
    if let Some(r) = t0_range {
        let (lo, hi) = range(r)?;
        let found = adequate_specialization_search(cover, lo, hi, bound);
        for a in &found {
            emit(a);
        }
        return if found.is_empty() { Err(Exit::math("no adequate specialization found")) } else { Ok(()) };
    }
    let t0 = rational(t0.ok_or_else(|| Exit::usage("one of --t0 or --t0-range is required"))?)?;
    let f = specialize_poly(&cover.p, &t0).map_err(|e| Exit::math(e.to_string()))?;
    match adequacy_certificate_for_field(&f, cover.n, bound) {
        Ok(cert) => {
            emit(&cert);
            Ok(())
        }
        Err(ells) => {
            emit(&json!({ "t0": t0.to_string(), "deficient": ells }));
            Err(Exit::math(format!("no two witnesses for primes {ells:?}")))
        }
    }
}

fn realize(cover: &Cover, p: u64, class: QuadClass, branch: Option<usize>, budget: u64) -> Run {
    let branch = match branch {
        Some(b) => b,
        None => cover
            .branch_points
            .iter()
            .position(|bp| bp.e == 2 && bp.location.is_rational())
            .ok_or_else(|| Exit::math("no rational branch point with e = 2"))?,
    };
    let r = realize_local_class(cover, branch, p, class, budget).map_err(|e| Exit::math(e.to_string()))?;
    emit(&r);
    Ok(())
}

fn run(cli: Cli) -> Run {
    let jobs = cli.jobs as usize;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    match &cli.command {
        Command::Analyze { cover, prime_budget } => analyze(&load(cover)?, *prime_budget, cli.summary),
        Command::Verify { cover, t0_range, prime_max, primes } => {
            verify(&load(cover)?, t0_range, *prime_max, primes, jobs, cli.summary)
        }
        Command::Predict { cover, point } => predict(&load(cover)?, point),
        Command::Oracle { cover, point } => run_oracle(&load(cover)?, point),
        Command::Adequacy { cover, t0, t0_range, bound } => {
            adequacy(&load(cover)?, t0.as_deref(), t0_range.as_deref(), *bound)
        }
        Command::Obstruct { covers, q, bound, parametric } => {
            let covers = covers.iter().map(load).collect::<std::result::Result<Vec<_>, _>>()?;
            prime(*q)?;
            if *parametric {
                let r = parametric_obstruction_report(&covers, *q, *bound).map_err(|e| Exit::math(e.to_string()))?;
                emit(&r);
            } else {
                let c = grunwald_obstruction(&covers, *q, *bound).map_err(|e| Exit::math(e.to_string()))?;
                if cli.summary {
                    eprintln!("obstruction primes {:?}; {:?}", c.prime_list(), c.hypothesis.status);
                }
                emit(&c);
            }
            Ok(())
        }
        Command::FrobeniusPrimes { cover, branch, d, bound } => {
            let found = find_frobenius_primes(&load(cover)?, *branch, *d, *bound)
                .map_err(|e| Exit::math(e.to_string()))?;
            emit(&found.iter().map(|&(p, a)| json!({ "p": p, "a": a })).collect::<Vec<_>>());
            Ok(())
        }
        Command::Realize { cover, p, class, branch, budget } => realize(&load(cover)?, *p, *class, *branch, *budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(s) = std::env::var("GSL_SEED") {
        match s.parse() {
            Ok(seed) => set_seed(seed),
            Err(_) => {
                eprintln!("GSL_SEED must be an unsigned integer");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
