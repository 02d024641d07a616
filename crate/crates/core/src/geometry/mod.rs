//! Branch points, ramification and residue fields of a cover of the line.

pub mod cover;
pub mod probe;
pub mod puiseux;

pub use cover::{
    conservative_bad_primes, cyclotomic, default_prec, puiseux_at, roots_of_unity_check,
    BranchPoint, Cover, CoverFile, LocalBranchData, Location, BUNDLED,
};
pub use probe::{probabilistic_galois_check, GaloisProbe, ProbeWitness};
