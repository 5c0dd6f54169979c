//! The polynomial deciding when an interval of length `lambda log 3N`
//! contains `nu + 1` primes:
//!
//! `P(x) = sum_{r=0}^k C(k,r)^2 x^r / ((r+1)...(r+2l)) * (1 + x (4(1 - phi/2) k / (r+2l+1) - nu/Theta))`
//!
//! with `phi = 1/(l+1)` and `x = Theta / lambda`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bisect, ln_factorial, CompensatedSum};

/// Largest `k` accepted; `C(k, r)^2` leaves the `f64` range not far beyond.
pub const THM3_MAX_K: u64 = 300;

const GRID_START: f64 = 1e-4;
const GRID_END: f64 = 1e4;
const GRID_RATIO: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm3Params {
    pub k: u64,
    pub ell: u64,
    pub nu: u64,
    pub theta0: f64,
    /// `log R / log 3N`.
    pub big_theta: f64,
    pub phi: f64,
    /// `(2l + 1)/(l + 1) = 2 - phi`.
    pub a: f64,
}

impl Thm3Params {
    /// Parameters with `Theta = theta0 (1 - phi) / 2`.
    pub fn new(k: u64, ell: u64, nu: u64, theta0: f64) -> Result<Self> {
        let phi = 1.0 / (ell as f64 + 1.0);
        Self::with_theta(k, ell, nu, theta0, theta0 * (1.0 - phi) / 2.0)
    }

    pub fn with_theta(k: u64, ell: u64, nu: u64, theta0: f64, big_theta: f64) -> Result<Self> {
        if k == 0 || nu == 0 {
            return Err(Error::InvalidArgument("need k >= 1 and nu >= 1".into()));
        }
        if !(0.5..=1.0).contains(&theta0) {
            return Err(Error::InvalidArgument(format!("theta0 = {theta0} outside [1/2, 1]")));
        }
        if !(big_theta > 0.0) {
            return Err(Error::InvalidArgument(format!("Theta = {big_theta} must be positive")));
        }
        if k > THM3_MAX_K {
            return Err(Error::ResourceLimit(format!("k = {k} above {THM3_MAX_K}")));
        }
        let phi = 1.0 / (ell as f64 + 1.0);
        Ok(Self { k, ell, nu, theta0, big_theta, phi, a: 2.0 - phi })
    }

    /// `(k+1)^2 = phi^{-2}` when `k` was chosen as `(l+1)^2`.
    pub fn squared_choice(ell: u64, nu: u64, theta0: f64) -> Result<Self> {
        Self::new((ell + 1) * (ell + 1), ell, nu, theta0)
    }
}

/// Terms of `P(x)` as `(sign, log |term|)`.
fn log_terms(p: &Thm3Params, x: f64) -> Vec<(f64, f64)> {
    let (k, l) = (p.k, p.ell);
    let slope = |r: u64| 4.0 * (1.0 - p.phi / 2.0) * k as f64 / (r + 2 * l + 1) as f64 - p.nu as f64 / p.big_theta;
    let ln_k = ln_factorial(k);
    (0..=k)
        .filter_map(|r| {
            let lin = 1.0 + x * slope(r);
            if lin == 0.0 {
                return None;
            }
            let ln_binom = ln_k - ln_factorial(r) - ln_factorial(k - r);
            // (r+1)...(r+2l) = (r+2l)!/r!
            let ln_rise = ln_factorial(r + 2 * l) - ln_factorial(r);
            Some((lin.signum(), 2.0 * ln_binom + r as f64 * x.ln() - ln_rise + lin.abs().ln()))
        })
        .collect()
}

/// `P(x) e^{-scale}` and `scale`, so that large `k` or `x` do not overflow.
fn scaled(p: &Thm3Params, x: f64) -> (f64, f64) {
    let terms = log_terms(p, x);
    let scale = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let sum: CompensatedSum = terms.iter().map(|(s, l)| s * (l - scale).exp()).collect();
    (sum.value(), scale)
}

/// `P_{k,l,nu}(x)` for `x > 0`; may be infinite when the true value leaves
/// the `f64` range.
pub fn thm3_polynomial(p: &Thm3Params, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("x = {x} must be positive")));
    }
    let (v, scale) = scaled(p, x);
    Ok(v * scale.exp())
}

fn sign(p: &Thm3Params, x: f64) -> f64 {
    scaled(p, x).0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinLambda {
    /// `lambda = Theta / x_crit` at the first sign change `x_crit` of `P`.
    Found { lambda: f64, x_crit: f64 },
    /// `P` stays positive over the scanned grid.
    Unsat,
}

/// Interval-length multiplier `lambda` from the first zero of `P`.
pub fn min_lambda(k: u64, ell: u64, nu: u64, theta0: f64) -> Result<MinLambda> {
    if nu == 2 && theta0 == 1.0 {
        return Err(Error::InvalidArgument(
            "nu = 2, theta0 = 1 gives z0 = 0; that case follows from E_r <= max(r - 2 theta, 0)".into(),
        ));
    }
    let p = Thm3Params::new(k, ell, nu, theta0)?;
    let mut lo = GRID_START;
    if sign(&p, lo) <= 0.0 {
        return Err(Error::NumericFailure(format!("P is not positive at x = {GRID_START}")));
    }
    while lo < GRID_END {
        let hi = lo * GRID_RATIO;
        if sign(&p, hi) <= 0.0 {
            let x = bisect(|x| sign(&p, x), lo, hi, 1e-8 * hi)?;
            return Ok(MinLambda::Found { lambda: p.big_theta / x, x_crit: x });
        }
        lo = hi;
    }
    Ok(MinLambda::Unsat)
}

/// `z0 = sqrt(2 nu / theta0) - 2`.
pub fn z0(nu: u64, theta0: f64) -> f64 {
    (2.0 * nu as f64 / theta0).sqrt() - 2.0
}

/// `1 + (4 (z0 + 1) - 2 nu / theta0) / z0^2`, which vanishes identically.
pub fn z0_residual(nu: u64, theta0: f64) -> f64 {
    let z = z0(nu, theta0);
    1.0 + (4.0 * (z + 1.0) - 2.0 * nu as f64 / theta0) / (z * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_at_zero() {
        let p = Thm3Params::new(9, 2, 2, 0.5).unwrap();
        let v = thm3_polynomial(&p, 1e-12).unwrap();
        assert!((v - 1.0 / 24.0).abs() < 1e-9);
    }

    #[test]
    fn sign_change_for_l4() {
        let p = Thm3Params::squared_choice(4, 2, 0.5).unwrap();
        assert!(thm3_polynomial(&p, 1e-3).unwrap() > 0.0);
        assert!(thm3_polynomial(&p, 10.0).unwrap() < 0.0);
    }

    #[test]
    fn matches_direct_sum() {
        let p = Thm3Params::new(16, 3, 3, 0.75).unwrap();
        let x = 0.37;
        let mut direct = 0.0;
        for r in 0..=16u64 {
            let c = crate::numerics::binomial_f64(16, r);
            let rise: f64 = (1..=6).map(|j| (r + j) as f64).product();
            let lin = 1.0 + x * (4.0 * (1.0 - p.phi / 2.0) * 16.0 / (r + 7) as f64 - 3.0 / p.big_theta);
            direct += c * c * x.powi(r as i32) / rise * lin;
        }
        let v = thm3_polynomial(&p, x).unwrap();
        assert!((v - direct).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn lambda_decreases() {
        let lam: Vec<f64> = [1u64, 2, 4]
            .iter()
            .map(|&l| match min_lambda((l + 1) * (l + 1), l, 2, 0.5).unwrap() {
                MinLambda::Found { lambda, .. } => lambda,
                MinLambda::Unsat => panic!("unsat"),
            })
            .collect();
        assert!(lam[0] > lam[1] && lam[1] > lam[2], "{lam:?}");
        assert!((lam[0] - 1.542).abs() < 5e-3);
    }

    #[test]
    fn z0_identity() {
        for nu in 2..=10 {
            for t in [0.5, 0.75, 1.0] {
                if nu == 2 && t == 1.0 {
                    continue;
                }
                assert!(z0_residual(nu, t).abs() < 1e-12);
            }
        }
        assert!(min_lambda(4, 1, 2, 1.0).is_err());
    }
}
