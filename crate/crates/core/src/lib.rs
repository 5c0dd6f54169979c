//! Computational tools around bounded gaps between primes: admissible
//! tuples and their singular series, truncated divisor-sum weights and
//! their moments, and the threshold calculus deciding when a tuple must
//! contain two or more primes.
//!
//! ```
//! use primetuples::tuples::{is_admissible, HTuple};
//!
//! let h: HTuple = "0,4,6,10,12,16".parse().unwrap();
//! assert!(is_admissible(&h).admissible);
//! ```

pub mod error;
pub mod numerics;
pub mod prime_data;
pub mod reproduce;
pub mod sieve_weights;
pub mod singular_series;
pub mod thresholds;
pub mod tuples;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/primes.md")]
    mod primes {}
    #[doc = include_str!("../../../book/src/tuples.md")]
    mod tuples {}
    #[doc = include_str!("../../../book/src/singular_series.md")]
    mod singular_series {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/gaps.md")]
    mod gaps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
