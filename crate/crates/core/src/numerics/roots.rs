use crate::error::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket { lo: a, hi: b });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        assert!((bisect(|x| x - 1.0, 0.0, 2.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_threshold_root() {
        let r = bisect(|t| 15.0 * t * t - 64.0 * t + 48.0, 0.9, 1.0, 1e-13).unwrap();
        assert!(r > 0.97096 && r < 0.97097);
        assert!((r - 4.0 * (8.0 - 19f64.sqrt()) / 15.0).abs() < 1e-12);
    }

    #[test]
    fn cube_root_of_two() {
        let r = bisect(|x| x * x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r * r * r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn evaluation_count_is_logarithmic() {
        let mut calls = 0u32;
        bisect(|x| { calls += 1; x - 0.3 }, 0.0, 1.0, 1e-6).unwrap();
        // ceil(log2(1e6)) = 20 interior evaluations plus the two endpoints.
        assert!(calls <= 22, "{calls}");
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-6), Err(Error::Bracket { .. })));
    }
}
