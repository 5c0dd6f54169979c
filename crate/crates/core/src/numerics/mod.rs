//! Numerical kernel: exact rational combinatorics, compensated summation,
//! Bessel functions, Gauss–Legendre quadrature, bisection and a Jacobi
//! eigen solver.

mod bessel;
mod eigen;
mod quadrature;
mod rational;
mod roots;
mod sum;

pub use bessel::{bessel_j, bessel_j_recurrence, normalized_bessel, MAX_ORDER as BESSEL_MAX_ORDER, SERIES_MAX_ARG};
pub use eigen::{jacobi_eigen, max_eigenvalue, SymMatrix, MAX_DIM as EIGEN_MAX_DIM};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use rational::{
    binomial, binomial_f64, factorial, identity_812, identity_812_sides, rational_from_decimal, rational_from_f64,
    rational_to_f64, rising_factorial, Rational,
};
pub use roots::bisect;
pub use sum::{compensated_sum, CompensatedSum};

/// `ln n!` by direct summation.
pub fn ln_factorial(n: u64) -> f64 {
    compensated_sum((2..=n).map(|i| (i as f64).ln()))
}

/// `n!` as an `f64` (infinite beyond 170).
pub fn factorial_f64(n: u64) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}
