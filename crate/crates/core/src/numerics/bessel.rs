//! Bessel functions of the first kind for non-negative integer order.
//!
//! Two independent evaluation routes are provided: the defining power
//! series ([`bessel_j`]) and Miller's backward recurrence
//! ([`bessel_j_recurrence`]). [`normalized_bessel`] combines them into the
//! entire function `n! t^{-n/2} J_n(2 sqrt t)` used by the variational
//! threshold.

use crate::error::{Error, Result};

/// Largest argument accepted by the power series. Cancellation costs about
/// `e^x` ulps, so beyond `x ~ 20` prefer [`bessel_j_recurrence`].
pub const SERIES_MAX_ARG: f64 = 50.0;
pub const MAX_ORDER: u32 = 64;

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `J_order(x)` by its power series
/// `sum_m (-1)^m (x/2)^(2m+order) / (m! (m+order)!)`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("Bessel order {order} above {MAX_ORDER}")));
    }
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("Bessel argument {x} must be non-negative")));
    }
    if x > SERIES_MAX_ARG {
        return Err(Error::NumericFailure(format!(
            "power series for J_{order} is unstable at x = {x} > {SERIES_MAX_ARG}"
        )));
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let lead = (order as f64 * half.ln() - ln_factorial(order)).exp();
    Ok(lead * series_0f1(order, half * half))
}

/// `sum_m (-t)^m n! / (m! (m+n)!)`, i.e. `0F1(; n+1; -t)`.
fn series_0f1(n: u32, t: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut m = 0u32;
    loop {
        term *= -t / ((m + 1) as f64 * (m + n + 1) as f64);
        sum += term;
        m += 1;
        if term.abs() < 1e-18 * sum.abs() || term == 0.0 {
            break;
        }
        if m > 10_000 {
            break;
        }
    }
    sum
}

/// `J_order(x)` by Miller's backward recurrence normalized with
/// `J_0 + 2 sum J_2m = 1`. Stable for every `x > 0` and any order.
pub fn bessel_j_recurrence(order: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("Bessel argument {x} must be finite and non-negative")));
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let (sign, ln_abs) = recurrence_log(order, x);
    Ok(sign * ln_abs.exp())
}

/// Sign and log-magnitude of `J_order(x)`, `x > 0`, by backward recurrence.
/// Rescalings applied after the wanted order was passed are counted so tiny
/// values do not underflow.
fn recurrence_log(order: u32, x: f64) -> (f64, f64) {
    const SCALE: f64 = 1e-250;
    let ln_scale = SCALE.ln();
    let n = order as f64;
    let top = n.max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()) as u64;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0f64;
    let mut value = 0.0f64;
    let mut value_rescales = 0i32;
    let mut m = start;
    while m > 0 {
        let jm = m as f64 * two_over_x * j - jp;
        jp = j;
        j = jm;
        m -= 1;
        if j.abs() > 1e250 {
            j *= SCALE;
            jp *= SCALE;
            norm *= SCALE;
            if m < order as u64 {
                value_rescales += 1;
            } else {
                value *= SCALE;
            }
        }
        if m == order as u64 {
            value = j;
        }
        if m > 0 && m % 2 == 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    if order == 0 {
        value = j;
    }
    if value == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let sign = (value / norm).signum();
    (sign, value.abs().ln() + value_rescales as f64 * ln_scale - norm.abs().ln())
}

/// `n! t^{-n/2} J_n(2 sqrt t)`, equal to 1 at `t = 0`.
///
/// Uses the series while its terms decrease monotonically (`t <= n + 1`,
/// or any `t <= 16`), otherwise the recurrence with the prefactor applied
/// in log space.
pub fn normalized_bessel(n: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t <= (n as f64 + 1.0).max(16.0) {
        return series_0f1(n, t);
    }
    let (sign, ln_j) = recurrence_log(n, 2.0 * t.sqrt());
    if sign == 0.0 {
        return 0.0;
    }
    sign * (ln_factorial(n) - 0.5 * n as f64 * t.ln() + ln_j).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bisect;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for n in 1..6 {
            assert_eq!(bessel_j(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_zero_of_j0() {
        // Locate the root with bisection on the series itself.
        let root = bisect(|x| bessel_j(0, x).unwrap(), 2.0, 3.0, 1e-14).unwrap();
        assert!((root - 2.404825557695773).abs() < 1e-10);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn recurrence_relation() {
        for n in 1..=10u32 {
            for &x in &[0.5, 1.0, 2.0, 5.0] {
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn series_and_miller_agree() {
        for n in [0u32, 1, 4, 10, 30] {
            for x in [0.3, 1.0, 7.5, 15.0, 20.0] {
                let a = bessel_j(n, x).unwrap();
                let b = bessel_j_recurrence(n, x).unwrap();
                assert!((a - b).abs() < 1e-8, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_large_argument() {
        assert!(matches!(bessel_j(2, 60.0), Err(Error::NumericFailure(_))));
        assert!(bessel_j(65, 1.0).is_err());
        assert!(bessel_j_recurrence(2, 60.0).is_ok());
    }

    #[test]
    fn known_large_argument_value() {
        // J_0(100) = 0.019985850304223122...
        let v = bessel_j_recurrence(0, 100.0).unwrap();
        assert!((v - 0.019_985_850_304_223_122).abs() < 1e-13);
    }

    #[test]
    fn normalized_is_continuous_across_branch() {
        for n in [4u32, 40, 191] {
            let t0 = (n as f64 + 1.0).max(16.0);
            let below = normalized_bessel(n, t0);
            let above = normalized_bessel(n, t0 * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-9 * (1.0 + below.abs()), "n={n}: {below} {above}");
        }
    }

    #[test]
    fn high_order_matches_series_beyond_switch() {
        // Both routes are valid here; the recurrence value is far below the
        // normalization and must not underflow.
        for (n, t) in [(191u32, 200.0), (191, 400.0), (63, 90.0)] {
            let series = series_0f1(n, t);
            let rec = normalized_bessel(n, t);
            assert!((series - rec).abs() < 1e-9 * series.abs().max(1e-3), "n={n} t={t}: {series} {rec}");
        }
    }
}
