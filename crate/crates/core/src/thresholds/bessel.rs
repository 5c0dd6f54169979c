//! Variational threshold from the optimal smooth weight.
//!
//! With `n = k - 2` and `W_n(t) = n! t^{-n/2} J_n(2 sqrt t)`,
//! `q(y) = J_n(2 sqrt b) - y^{1-k/2} J_n(2 sqrt(b y))` is a constant multiple
//! of `W_n(b) - W_n(b y)`, and `q'(y)` the same multiple of
//! `b W_{n+1}(b y) / (n + 1)`. The multiple cancels from
//! `ratio(b) = int y^{k-2} q^2 / int y^{k-1} q'^2`, and the threshold is
//! `2 b / (k (k - 1))` at the first root of `1/b = ratio(b)`.

use super::{ThresholdOutcome, ThresholdRow};
use crate::error::{Error, Result};
use crate::numerics::{bessel_j_recurrence, bisect, gauss_legendre, normalized_bessel, rational_to_f64, Rational};

const NODES: usize = 64;
/// Scan starts at threshold 1/4, well below the limit 1/2 as `k` grows.
const SCAN_START_THETA: f64 = 0.25;
/// `g` dips below zero over a `beta` window only about 2% wide at `k` near 200.
const SCAN_STEP: f64 = 1.005;
const SCAN_MAX: f64 = 1e8;

/// `q(y)` exactly as written, via Bessel values (moderate `k` only).
pub fn bessel_q(k: u32, beta: f64, y: f64) -> Result<f64> {
    let n = k - 2;
    let a = bessel_j_recurrence(n, 2.0 * beta.sqrt())?;
    let b = bessel_j_recurrence(n, 2.0 * (beta * y).sqrt())?;
    Ok(a - y.powf(1.0 - k as f64 / 2.0) * b)
}

/// `q'(y) = beta^{(k-2)/2} / (k-2)! * beta W_{k-1}(beta y) / (k-1)`.
pub fn bessel_q_prime(k: u32, beta: f64, y: f64) -> f64 {
    let n = k - 2;
    let ln_c = 0.5 * n as f64 * beta.ln() - crate::numerics::ln_factorial(n as u64);
    ln_c.exp() * beta * normalized_bessel(n + 1, beta * y) / (n + 1) as f64
}

fn panels(k: u32) -> usize {
    k as usize / 8 + 1
}

/// `int_0^1 y^{k-2} q^2 / int_0^1 y^{k-1} q'^2`.
pub fn bessel_ratio(k: u32, beta: f64) -> Result<f64> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 3")));
    }
    let rule = gauss_legendre(NODES)?;
    let n = k - 2;
    let w_top = normalized_bessel(n, beta);
    let p = panels(k);
    let num = rule.integrate_composite(p, |y| {
        let q = w_top - normalized_bessel(n, beta * y);
        y.powi(k as i32 - 2) * q * q
    });
    let den = rule.integrate_composite(p, |y| {
        let qp = beta * normalized_bessel(n + 1, beta * y) / (n + 1) as f64;
        y.powi(k as i32 - 1) * qp * qp
    });
    let ratio = num / den;
    if !ratio.is_finite() || den <= 0.0 {
        return Err(Error::NumericFailure(format!("quadrature failed for k = {k}, beta = {beta}")));
    }
    Ok(ratio)
}

/// Level `theta` above which the optimal weight gives `rho > 1` for `k`-tuples.
pub fn bessel_threshold(k: u32) -> Result<f64> {
    if k < 3 || k > crate::numerics::BESSEL_MAX_ORDER * 4 {
        return Err(Error::InvalidArgument(format!("k = {k} outside [3, 256]")));
    }
    let g = |b: f64| -> Result<f64> { Ok(1.0 / b - bessel_ratio(k, b)?) };
    let mut lo = SCAN_START_THETA * (k as f64 * (k as f64 - 1.0)) / 2.0;
    if g(lo)? <= 0.0 {
        return Err(Error::NumericFailure(format!("no positive start for the root scan at k = {k}")));
    }
    loop {
        let hi = lo * SCAN_STEP;
        if hi > SCAN_MAX {
            return Err(Error::NumericFailure(format!("no root of the variational equation for k = {k}")));
        }
        if g(hi)? <= 0.0 {
            let beta = bisect(|b| g(b).unwrap_or(f64::NAN), lo, hi, 1e-12 * hi)?;
            return Ok(2.0 * beta / (k as f64 * (k as f64 - 1.0)));
        }
        lo = hi;
    }
}

/// Smallest `k >= 3` with `bessel_threshold(k) < theta`, by bisection on
/// `k` (thresholds decrease with `k`).
pub fn smallest_bessel_k(theta: f64, k_cap: u32) -> Result<Option<u32>> {
    if bessel_threshold(k_cap)? >= theta {
        return Ok(None);
    }
    let (mut lo, mut hi) = (2u32, k_cap);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bessel_threshold(mid)? < theta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// For each `theta`, the smallest `k` the variational bound admits.
pub fn bessel_table(thetas: &[Rational]) -> Result<Vec<ThresholdOutcome>> {
    thetas
        .iter()
        .map(|t| {
            let theta = rational_to_f64(t);
            Ok(match smallest_bessel_k(theta, 256)? {
                Some(k) => ThresholdOutcome::Row(ThresholdRow { theta, k: k as u64, ell_or_l: 0, h_k: None }),
                None => ThresholdOutcome::Unsat { theta },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k6_value() {
        let t = bessel_threshold(6).unwrap();
        assert!((t - 0.95971).abs() < 1e-3, "{t}");
        assert!(t < super::super::k6_closed_form());
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        let (k, beta) = (6u32, 14.4);
        for y in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let h = 1e-5;
            let fd = (bessel_q(k, beta, y + h).unwrap() - bessel_q(k, beta, y - h).unwrap()) / (2.0 * h);
            let an = bessel_q_prime(k, beta, y);
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1e-3), "y={y}: {fd} vs {an}");
        }
    }

    #[test]
    fn decreasing_in_k() {
        let t: Vec<f64> = (3..12).map(|k| bessel_threshold(k).unwrap()).collect();
        assert!(t.windows(2).all(|w| w[1] < w[0]), "{t:?}");
    }
}
