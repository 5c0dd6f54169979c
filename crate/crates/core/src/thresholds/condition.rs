use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ThresholdOutcome, ThresholdRow};
use crate::numerics::{rational_to_f64, Rational};

/// Largest `k` tried by [`table_34`].
pub const TABLE_K_CAP: u64 = 10_000;

/// `(k / (k + 2l + 1)) ((2l + 1) / (l + 1)) theta > 1`, exactly.
pub fn condition_34(k: u64, ell: u64, theta: &Rational) -> bool {
    let lhs = BigInt::from(k) * BigInt::from(2 * ell + 1) * theta.numer();
    let rhs = BigInt::from(k + 2 * ell + 1) * BigInt::from(ell + 1) * theta.denom();
    lhs > rhs
}

/// The same inequality in floating point; unreliable on the boundary.
pub fn condition_34_f64(k: u64, ell: u64, theta: f64) -> bool {
    let (k, l) = (k as f64, ell as f64);
    k / (k + 2.0 * l + 1.0) * (2.0 * l + 1.0) / (l + 1.0) * theta > 1.0
}

fn search(theta: &Rational) -> Option<(u64, u64)> {
    if theta <= &Rational::zero() {
        return None;
    }
    // Integer fast path when numerator and denominator are small.
    let small = theta.numer().to_u64().zip(theta.denom().to_u64());
    for k in 1..=TABLE_K_CAP {
        for ell in 0..=k {
            let ok = match small {
                Some((a, b)) => {
                    (k as u128) * (2 * ell as u128 + 1) * a as u128 > (k + 2 * ell + 1) as u128 * (ell as u128 + 1) * b as u128
                }
                None => condition_34(k, ell, theta),
            };
            if ok {
                return Some((k, ell));
            }
        }
    }
    None
}

/// For each `theta`, the smallest `k` for which some `l <= k` satisfies
/// [`condition_34`], and the smallest such `l`.
pub fn table_34(thetas: &[Rational]) -> Vec<ThresholdOutcome> {
    thetas
        .iter()
        .map(|theta| {
            let t = rational_to_f64(theta);
            match search(theta) {
                Some((k, ell)) => ThresholdOutcome::Row(ThresholdRow { theta: t, k, ell_or_l: ell, h_k: None }),
                None => ThresholdOutcome::Unsat { theta: t },
            }
        })
        .collect()
}
