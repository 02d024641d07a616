use thiserror::Error;

/// Errors raised by the library. Report-valued operations (verification
/// sweeps, probes) fold these into their reports instead of returning them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("valuation of zero is +infinity")]
    InfiniteValuation,
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("coefficient is not integral at {p}")]
    NonIntegral { p: u64 },
    #[error("{p} divides the discriminant; use the p-adic oracle")]
    RamifiedOrBad { p: u64 },
    #[error("{a} is not a root of the base polynomial modulo {p}")]
    NotARoot { p: u64, a: u64 },
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("wild or irregular at {p}: {reason}")]
    WildOrIrregular { p: u64, reason: String },
    #[error("local factors at {p} have different (e, f)")]
    NonUniform { p: u64 },
    #[error("place cycles have different ramification indices")]
    NonUniformRamification,
    #[error("residue field did not stabilize within precision {prec}")]
    UnstableResidueField { prec: usize },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("two distinct meeting roots modulo {p}; bad-prime set too small")]
    AmbiguousMeeting { p: u64 },
    #[error("specialization is inseparable")]
    InseparableSpecialization,
    #[error("charts mixed in approximation constraints")]
    ChartMixing,
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
