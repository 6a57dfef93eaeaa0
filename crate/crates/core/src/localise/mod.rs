//! Graded localisation of graded-commutative rings, homogeneous primes,
//! and local-to-global comparison of realisability obstructions.

mod fractions;
mod local_global;
mod primes;

pub use fractions::{LocalisationSummary, LocalisedAlgebra};
pub use local_global::{local_global_check, local_verdict, LocalGlobalReport, LocalVerdict};
pub use primes::{probe_prime, supported_primes, GradedPrime, PrimeProbe};
