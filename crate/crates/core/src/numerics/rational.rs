//! Exact integer and rational combinatorics.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator after each operation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Rational = num_rational::BigRational;

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// Binomial coefficient as an `f64`. Exact up to 2^53, rounded beyond.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc.round()
}

/// Rising factorial `d (d+1) ... (d+i-1)`; the empty product is 1.
pub fn rising_factorial(d: u32, i: u32) -> BigUint {
    (0..i).fold(BigUint::one(), |acc, j| acc * (d + j))
}

/// Both sides of the alternating factorial identity
///
/// ```text
/// (1/u!) sum_{i=0}^{u} C(u,i) (-1)^i d(d+1)...(d+i-1) / (v+d+i)!  =  C(u+v,u) / (u+v+d)!
/// ```
///
/// evaluated in exact rational arithmetic.
pub fn identity_812_sides(u: u32, v: u32, d: u32) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    for i in 0..=u {
        let num = BigInt::from(binomial(u as u64, i as u64) * rising_factorial(d, i));
        let den = BigInt::from(factorial(v + d + i));
        let term = Rational::new(num, den);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let lhs = sum / Rational::from_integer(BigInt::from(factorial(u)));
    let rhs = Rational::new(
        BigInt::from(binomial((u + v) as u64, u as u64)),
        BigInt::from(factorial(u + v + d)),
    );
    (lhs, rhs)
}

/// True when the identity holds exactly at `(u, v, d)`.
pub fn identity_812(u: u32, v: u32, d: u32) -> bool {
    let (lhs, rhs) = identity_812_sides(u, v, d);
    lhs == rhs
}

/// Parses a decimal literal such as `"0.95"`, `"1"` or `"-2.5e-3"` into an exact rational.
pub fn rational_from_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| crate::Error::InvalidArgument(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return invalid(format!("not a decimal number: {s:?}"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = all_digits.parse().unwrap_or_else(|_| BigInt::zero());
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| crate::Error::InvalidArgument(format!("non-finite value {x}")))
}

/// Nearest `f64` to a rational, robust to numerators and denominators beyond the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both to ~64 significant bits before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer().abs() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let mag = n / d * 2f64.powi((shift_n - shift_d) as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(7, 3), big(35));
        assert_eq!(binomial(3, 7), big(0));
        assert_eq!(binomial_f64(7, 3), 35.0);
    }

    #[test]
    fn binomial_matches_factorial_ratio() {
        let direct = factorial(60) / (factorial(30) * factorial(30));
        assert_eq!(binomial(60, 30), direct);
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn identity_small_cases() {
        let (lhs, rhs) = identity_812_sides(0, 0, 0);
        assert_eq!(lhs, Rational::one());
        assert_eq!(rhs, Rational::one());
        let (lhs, rhs) = identity_812_sides(1, 0, 1);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(lhs, half);
        assert_eq!(rhs, half);
    }

    #[test]
    fn identity_detects_perturbation() {
        let (lhs, rhs) = identity_812_sides(3, 2, 4);
        assert_eq!(lhs, rhs);
        assert_ne!(lhs + Rational::new(BigInt::from(1), BigInt::from(10u64.pow(18))), rhs);
    }

    #[test]
    fn decimal_parsing_is_exact() {
        let r = rational_from_decimal("0.95").unwrap();
        assert_eq!(r, Rational::new(BigInt::from(19), BigInt::from(20)));
        assert_eq!(rational_from_decimal("1").unwrap(), Rational::one());
        assert_eq!(
            rational_from_decimal("2.5e-1").unwrap(),
            Rational::new(BigInt::from(1), BigInt::from(4))
        );
        assert!(rational_from_decimal("abc").is_err());
        assert!(rational_from_decimal(".").is_err());
    }

    #[test]
    fn huge_rational_to_float() {
        let r = Rational::new(BigInt::from(factorial(400)), BigInt::from(factorial(399)));
        assert!((rational_to_f64(&r) - 400.0).abs() < 1e-9);
        let tiny = Rational::new(BigInt::from(1), BigInt::from(factorial(100)));
        let expect = (-(1..=100).map(|i| (i as f64).ln()).sum::<f64>()).exp();
        assert!((rational_to_f64(&tiny) / expect - 1.0).abs() < 1e-12);
    }
}
