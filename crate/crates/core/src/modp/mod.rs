//! Factorization over finite fields.

pub mod fq;
pub mod poly_mod_p;

pub use fq::{Fq, FqPoly};
pub use poly_mod_p::{
    factor_mod_p, frobenius_data, reduce_relative, roots_mod_p, CycleType, FrobeniusData,
    PolyModP,
};
