//! Sampling test for the Galois property: a specialization of a Galois cover
//! has uniform cycle type at every unramified prime.

use serde::Serialize;

use super::cover::Cover;
use crate::arith::integer::is_prime;
use crate::arith::{rat_serde, Rat};
use crate::modp::frobenius_data;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeWitness {
    #[serde(with = "rat_serde")]
    pub t0: Rat,
    pub p: u64,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisProbe {
    pub passed: bool,
    /// Unramified `(t0, p)` pairs examined.
    pub samples: usize,
    pub witness: Option<ProbeWitness>,
}

const T0_SAMPLES: [i64; 12] = [2, 3, -2, 5, 6, -3, 7, 10, -5, 11, 13, -7];

/// Checks uniformity of Frobenius cycle types at the first `prime_budget` odd
/// good primes over a fixed set of integer specialization points.
pub fn probabilistic_galois_check(cover: &Cover, prime_budget: usize) -> GaloisProbe {
    let primes: Vec<u64> = (3..)
        .filter(|&p| is_prime(p) && !cover.is_bad(p))
        .take(prime_budget)
        .collect();
    let mut samples = 0;
    for &t in &T0_SAMPLES {
        let t0 = Rat::from_integer(t.into());
        let f = cover.specialize(&t0);
        if f.discriminant() == Rat::from_integer(0.into()) {
            continue;
        }
        for &p in &primes {
            let Ok(data) = frobenius_data(&f, p) else { continue };
            samples += 1;
            if !data.cycle_type.is_uniform() {
                return GaloisProbe {
                    passed: false,
                    samples,
                    witness: Some(ProbeWitness { t0, p, cycle_type: data.cycle_type.0 }),
                };
            }
        }
    }
    GaloisProbe { passed: true, samples, witness: None }
}
