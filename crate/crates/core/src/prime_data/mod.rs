//! Prime sieving, Chebyshev sums in progressions with their remainder
//! terms, and the generalized divisor function.

mod arith;
mod divisor;
mod progression;
mod sieve;

pub use arith::{euler_phi, factorize, is_prime, mobius, squarefree_primes};
pub use divisor::{divisor_fn, lemma2_sums, DivisorFunctionValue, Lemma2Sums, LEMMA2_MAX_X};
pub use progression::{bv_sum, remainder_max, remainder_sup, theta_progression, ProgressionRemainder, RemainderMode};
pub use sieve::{build_prime_table, theta, PrimeTable, SEGMENT_SIZE};
