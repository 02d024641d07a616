//! Specialization of Galois covers of the projective line: exact arithmetic,
//! finite-field and p-adic factorization, branch data and local predictions.

mod error;

pub mod arith;
pub mod geometry;
pub mod modp;
pub mod padic;
pub mod specialize;
pub mod applications;

pub use error::{Error, Result};

pub use applications::{
    adequacy_certificate_for_field, adequate_specialization_search, find_frobenius_primes,
    grunwald_obstruction, parametric_obstruction_report, AdequacyCertificate,
    ObstructionCertificate, ParametricReport,
};
pub use arith::{BiPoly, Rat, UniPoly};
pub use geometry::{probabilistic_galois_check, BranchPoint, Cover, GaloisProbe, Location};
pub use modp::{frobenius_data, CycleType, FrobeniusData};
pub use padic::{
    galois_local_invariants, local_splitting_type, oracle, quadratic_local_class, LocalFactor,
    LocalSplittingType, QuadClass,
};
pub use specialize::{
    approximate_specialization_point, intersection_multiplicity, meeting_prime,
    predict_decomposition, predict_inertia, realize_local_class, sweep, verify_specialization,
    ApproxConstraint, DecompositionPrediction, MeetingDatum, ProjPoint, Realization,
    SpecializationReport, Verdict,
};
