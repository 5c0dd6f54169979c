//! Generalized divisor function `d_m(q) = m^omega(q)` on squarefree `q`
//! and its summatory bounds.

use serde::{Deserialize, Serialize};

use super::arith::squarefree_primes;
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

/// Largest `x` accepted by [`lemma2_sums`].
pub const LEMMA2_MAX_X: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorFunctionValue {
    pub q: u64,
    pub m: f64,
    pub omega: u32,
    pub value: f64,
}

pub fn divisor_fn(q: u64, m: f64) -> Result<DivisorFunctionValue> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let primes = squarefree_primes(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not squarefree")))?;
    let omega = primes.len() as u32;
    Ok(DivisorFunctionValue { q, m, omega, value: m.powi(omega as i32) })
}

/// Direct sums over squarefree `q <= x` together with their upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Sums {
    pub x: u64,
    pub m: f64,
    /// `sum d_m(q) / q`
    pub d_prime: f64,
    /// `sum d_m(q)`
    pub d_star: f64,
    /// `(ceil(m) + log x)^ceil(m)`
    pub bound_prime: f64,
    /// `x (ceil(m) + log x)^ceil(m)`
    pub bound_star: f64,
}

impl Lemma2Sums {
    pub fn holds(&self) -> bool {
        self.d_prime <= self.bound_prime && self.d_star <= self.bound_star
    }
}

/// Sieves `omega` and squarefreeness on `1..=x` and accumulates both sums.
pub fn lemma2_sums(x: u64, m: f64) -> Result<Lemma2Sums> {
    if x == 0 || !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("need x >= 1 and m > 0, got x={x}, m={m}")));
    }
    if x > LEMMA2_MAX_X {
        return Err(Error::ResourceLimit(format!("x = {x} exceeds enumeration budget {LEMMA2_MAX_X}")));
    }
    let n = x as usize;
    let mut omega = vec![0u8; n + 1];
    let mut squarefree = vec![true; n + 1];
    for p in 2..=n {
        if omega[p] == 0 {
            let mut j = p;
            while j <= n {
                omega[j] += 1;
                j += p;
            }
            if let Some(sq) = p.checked_mul(p) {
                let mut j = sq;
                while j <= n {
                    squarefree[j] = false;
                    j += sq;
                }
            }
        }
    }
    let powers: Vec<f64> = (0..16).map(|w| m.powi(w)).collect();
    let mut d_prime = CompensatedSum::new();
    let mut d_star = CompensatedSum::new();
    for q in 1..=n {
        if squarefree[q] {
            let v = powers[omega[q] as usize];
            d_prime.add(v / q as f64);
            d_star.add(v);
        }
    }
    let c = m.ceil();
    let bound_prime = (c + (x as f64).ln()).powf(c);
    Ok(Lemma2Sums {
        x,
        m,
        d_prime: d_prime.value(),
        d_star: d_star.value(),
        bound_prime,
        bound_star: x as f64 * bound_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_examples() {
        assert_eq!(divisor_fn(1, 7.3).unwrap().value, 1.0);
        assert_eq!(divisor_fn(6, 3.0).unwrap().value, 9.0);
        let v = divisor_fn(30, 2.5).unwrap();
        assert_eq!(v.omega, 3);
        assert!((v.value - 15.625).abs() < 1e-12);
        assert!(matches!(divisor_fn(12, 2.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn multiplicative_in_m() {
        for q in [1u64, 2, 30, 210, 2310] {
            let a = divisor_fn(q, 1.7).unwrap().value * divisor_fn(q, 2.9).unwrap().value;
            let b = divisor_fn(q, 1.7 * 2.9).unwrap().value;
            assert!((a - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn small_sums() {
        let s = lemma2_sums(1, 4.0).unwrap();
        assert_eq!((s.d_prime, s.d_star), (1.0, 1.0));
        let s = lemma2_sums(3, 1.0).unwrap();
        assert!((s.d_prime - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(s.d_star, 3.0);
        let s = lemma2_sums(100, 2.0).unwrap();
        assert!(s.holds());
        assert!(s.d_prime <= (2.0 + 100f64.ln()).powi(2));
    }

    #[test]
    fn sums_match_direct_enumeration() {
        let x = 500u64;
        let m = 3.5;
        let mut dp = 0.0;
        for q in 1..=x {
            if let Ok(v) = divisor_fn(q, m) {
                dp += v.value / q as f64;
            }
        }
        assert!((lemma2_sums(x, m).unwrap().d_prime - dp).abs() < 1e-10);
    }

    #[test]
    fn budget_and_argument_errors() {
        assert!(matches!(lemma2_sums(LEMMA2_MAX_X + 1, 1.0), Err(Error::ResourceLimit(_))));
        assert!(lemma2_sums(0, 1.0).is_err());
        assert!(lemma2_sums(10, 0.0).is_err());
    }
}
