//! The quadratic-form method: with a polynomial weight of degree `L` the
//! main term is `b^T M b` for
//!
//! `M_ij = C(i+j, i) / (k+i+j)! * (k (i+j+2)(i+j+1) / ((i+1)(j+1)(k+i+j+1)) - 2/theta)`,
//!
//! so two primes follow once `M` has a positive eigenvalue.
//!
//! The factor `B_ij = C(i+j, i)/(k+i+j)!` underflows `f64` for large `k`.
//! Sign questions are therefore answered on the congruent matrix
//! `S = D^{-1/2} M D^{-1/2}` with `D = diag(B_ii)`, which has the same
//! inertia and entries of moderate size.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{ThresholdOutcome, ThresholdRow};
use crate::error::Result;
use crate::numerics::{
    self, bisect, factorial, ln_factorial, rational_to_f64, Rational, SymMatrix, EIGEN_MAX_DIM,
};

/// Largest degree `L` tried by the table search.
pub const MATRIX_L_CAP: u64 = 12;

/// Eigenvalues of the normalized matrix above this count as positive; the
/// Jacobi noise floor at the table sizes is around `1e-13`.
pub const POSITIVE_EIGENVALUE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    pub l: u64,
    pub k: u64,
    pub theta: f64,
    pub entries: Vec<Vec<f64>>,
}

impl WeightMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_sym(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim(), |i, j| self.entries[i][j])
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    BigInt::from(numerics::binomial(n, k))
}

/// `k (s+2)(s+1) / ((i+1)(j+1)(k+s+1)) - 2/theta` with `s = i + j`.
fn bracket(k: u64, i: u64, j: u64, theta: &Rational) -> Rational {
    let s = i + j;
    let first = Rational::new(BigInt::from(k * (s + 2) * (s + 1)), BigInt::from((i + 1) * (j + 1) * (k + s + 1)));
    first - Rational::from_integer(BigInt::from(2)) / theta
}

/// Exact entries of `M` for `0 <= i, j <= L`.
pub fn weight_matrix_exact(k: u64, l: u64, theta: &Rational) -> Vec<Vec<Rational>> {
    let n = l as usize + 1;
    let mut rows = vec![vec![Rational::one(); n]; n];
    for i in 0..n {
        for j in i..n {
            let b = Rational::new(binom((i + j) as u64, i as u64), BigInt::from(factorial((k + (i + j) as u64) as u32)));
            let v = b * bracket(k, i as u64, j as u64, theta);
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    rows
}

/// `M` with each exact entry rounded to `f64`; tiny for large `k`.
pub fn weight_matrix(k: u64, l: u64, theta: &Rational) -> WeightMatrix {
    let entries = weight_matrix_exact(k, l, theta)
        .iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect();
    WeightMatrix { l, k, theta: rational_to_f64(theta), entries }
}

fn ln_b(k: u64, i: u64, j: u64) -> f64 {
    ln_factorial(i + j) - ln_factorial(i) - ln_factorial(j) - ln_factorial(k + i + j)
}

fn bracket_f64(k: u64, i: u64, j: u64, theta: f64) -> f64 {
    let (k, i, j) = (k as f64, i as f64, j as f64);
    let s = i + j;
    k * (s + 2.0) * (s + 1.0) / ((i + 1.0) * (j + 1.0) * (k + s + 1.0)) - 2.0 / theta
}

/// `S_ij = B_ij / sqrt(B_ii B_jj) * bracket_ij`, congruent to `M`.
pub fn normalized_matrix(k: u64, l: u64, theta: f64) -> SymMatrix {
    let n = l as usize + 1;
    SymMatrix::from_fn(n, |i, j| {
        let (i, j) = (i as u64, j as u64);
        let scale = (ln_b(k, i, j) - 0.5 * (ln_b(k, i, i) + ln_b(k, j, j))).exp();
        scale * bracket_f64(k, i, j, theta)
    })
}

pub fn max_eigenvalue(m: &WeightMatrix) -> Result<f64> {
    numerics::max_eigenvalue(&m.as_sym())
}

fn normalized_lambda(k: u64, l: u64, theta: f64) -> f64 {
    numerics::max_eigenvalue(&normalized_matrix(k, l, theta)).expect("dimension within Jacobi limits")
}

/// Outcome of a threshold search on `(1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum ThresholdSearch {
    Found(f64),
    /// No positive eigenvalue even at `theta = 1`.
    Unsat,
    /// Positive already at `theta = 1/2`.
    BelowRange,
}

/// Infimum of `theta` in `(1/2, 1]` with `lambda_max(M(k, L, theta)) > 0`, to `1e-8`.
pub fn theta_threshold_matrix(k: u64, l: u64) -> Result<ThresholdSearch> {
    if l as usize + 1 > EIGEN_MAX_DIM {
        return Err(crate::error::Error::InvalidArgument(format!("L = {l} exceeds the eigen solver size")));
    }
    let f = |t: f64| normalized_lambda(k, l, t);
    if f(1.0) <= 0.0 {
        return Ok(ThresholdSearch::Unsat);
    }
    if f(0.5) > 0.0 {
        return Ok(ThresholdSearch::BelowRange);
    }
    Ok(ThresholdSearch::Found(bisect(f, 0.5, 1.0, 1e-10)?))
}

/// `4 (8 - sqrt 19) / 15`, the root in `(1/2, 1)` of `15 t^2 - 64 t + 48`.
pub fn k6_closed_form() -> f64 {
    4.0 * (8.0 - 19f64.sqrt()) / 15.0
}

fn positive(k: u64, l: u64, theta: f64) -> bool {
    normalized_lambda(k, l, theta) > POSITIVE_EIGENVALUE
}

/// Smallest `k` (from 2 up to `k_cap`) with a positive eigenvalue for some
/// `L <= MATRIX_L_CAP`, and the smallest such `L`.
pub fn smallest_matrix_k(theta: f64, k_cap: u64) -> Option<(u64, u64)> {
    // The largest eigenvalue grows with L (interlacing), so test the cap first.
    let k = (2..=k_cap).find(|&k| positive(k, MATRIX_L_CAP, theta))?;
    let l = (0..=MATRIX_L_CAP).find(|&l| positive(k, l, theta))?;
    Some((k, l))
}

/// The matrix-method table for each `theta`.
pub fn matrix_table(thetas: &[Rational]) -> Vec<ThresholdOutcome> {
    thetas
        .iter()
        .map(|t| {
            let theta = rational_to_f64(t);
            match smallest_matrix_k(theta, 2000) {
                Some((k, l)) => ThresholdOutcome::Row(ThresholdRow { theta, k, ell_or_l: l, h_k: None }),
                None => ThresholdOutcome::Unsat { theta },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational_from_decimal;

    #[test]
    fn corner_entry() {
        let m = weight_matrix_exact(6, 0, &Rational::one());
        assert_eq!(m[0][0], Rational::new(BigInt::from(-1), BigInt::from(2520)));
    }

    #[test]
    fn symmetric() {
        let m = weight_matrix(9, 4, &rational_from_decimal("0.83").unwrap());
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m.entries[i][j], m.entries[j][i]);
            }
        }
    }

    #[test]
    fn normalized_shares_sign_with_raw() {
        for (k, l, t) in [(6, 1, 0.97), (6, 1, 0.98), (7, 1, 0.95), (10, 2, 0.85), (12, 3, 0.7)] {
            let raw = max_eigenvalue(&weight_matrix(k, l, &crate::numerics::rational_from_f64(t).unwrap())).unwrap();
            let norm = normalized_lambda(k, l, t);
            assert_eq!(raw > 0.0, norm > 0.0, "k={k} L={l} theta={t}");
        }
    }

    #[test]
    fn k6_threshold() {
        match theta_threshold_matrix(6, 1).unwrap() {
            ThresholdSearch::Found(t) => assert!((t - k6_closed_form()).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        assert_eq!(theta_threshold_matrix(1, 0).unwrap(), ThresholdSearch::Unsat);
        let r = k6_closed_form();
        assert!((15.0 * r * r - 64.0 * r + 48.0).abs() < 1e-12);
    }

    #[test]
    fn small_rows() {
        assert_eq!(smallest_matrix_k(1.0, 100), Some((6, 1)));
        assert_eq!(smallest_matrix_k(0.9, 100), Some((8, 2)));
    }
}
