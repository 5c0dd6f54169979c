//! Decision formulas for when a tuple must contain two (or more) primes:
//! the simple inequality in `(k, l, theta)`, the eigenvalue method, the
//! variational Bessel bound, bounds on normalized gaps `E_r`, and the
//! polynomial behind the `(sqrt r - sqrt(2 theta))^2` result.

mod bessel;
mod condition;
mod gaps;
mod matrix;
mod polynomial;

use serde::{Deserialize, Serialize};

use crate::tuples::{narrowest_admissible, SearchBudget};

pub use bessel::{bessel_q, bessel_q_prime, bessel_ratio, bessel_table, bessel_threshold, smallest_bessel_k};
pub use condition::{condition_34, condition_34_f64, table_34, TABLE_K_CAP};
pub use gaps::{er_bounds, ErBounds};
pub use matrix::{
    k6_closed_form, matrix_table, max_eigenvalue, normalized_matrix, smallest_matrix_k, theta_threshold_matrix,
    weight_matrix, weight_matrix_exact, ThresholdSearch, WeightMatrix, MATRIX_L_CAP, POSITIVE_EIGENVALUE,
};
pub use polynomial::{min_lambda, thm3_polynomial, z0, z0_residual, MinLambda, Thm3Params, THM3_MAX_K};

/// One row of a threshold table: for level `theta`, the smallest tuple size
/// `k`, the parameter (`l` or the degree `L`) achieving it, and the narrowest
/// admissible diameter `h(k)` when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub theta: f64,
    pub k: u64,
    #[serde(rename = "ell_or_L")]
    pub ell_or_l: u64,
    pub h_k: Option<u64>,
}

/// A table line: a row, or no solution within the search cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThresholdOutcome {
    Row(ThresholdRow),
    Unsat { theta: f64 },
}

impl ThresholdOutcome {
    pub fn row(&self) -> Option<&ThresholdRow> {
        match self {
            ThresholdOutcome::Row(r) => Some(r),
            ThresholdOutcome::Unsat { .. } => None,
        }
    }
}

/// Fills `h_k` by exhaustive search for rows with `k <= max_k`.
pub fn fill_narrowest(rows: &mut [ThresholdOutcome], max_k: u64) {
    for line in rows.iter_mut() {
        if let ThresholdOutcome::Row(row) = line {
            if row.k <= max_k && row.h_k.is_none() {
                if let Ok(found) = narrowest_admissible(row.k as usize, SearchBudget::default()) {
                    if found.proven_minimal {
                        row.h_k = Some(found.diameter);
                    }
                }
            }
        }
    }
}
