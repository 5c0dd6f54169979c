//! Chebyshev sums in arithmetic progressions and their remainder terms.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arith::euler_phi;
use super::PrimeTable;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, CompensatedSum};

/// `theta(x; q, a)` split into its main term `[gcd(a,q)=1] x/phi(q)` and the remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressionRemainder {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    pub theta_value: f64,
    pub main_term: f64,
    pub remainder: f64,
}

/// Which remainder statistic to aggregate over moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemainderMode {
    /// `E'(x,q)`: worst class at the endpoint.
    Max,
    /// `E*(x,q)`: worst class over all `y <= x`.
    Sup,
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus q must be at least 1".into()));
    }
    Ok(())
}

pub fn theta_progression(x: u64, q: u64, a: u64, table: &PrimeTable) -> Result<ProgressionRemainder> {
    check_modulus(q)?;
    table.check_range("x", x)?;
    let a = a % q;
    let theta_value = compensated_sum(table.primes_up_to(x).iter().filter(|&&p| p % q == a).map(|&p| (p as f64).ln()));
    let main_term = if a.gcd(&q) == 1 { x as f64 / euler_phi(q) as f64 } else { 0.0 };
    Ok(ProgressionRemainder { x, q, a, theta_value, main_term, remainder: theta_value - main_term })
}

/// Residues coprime to `q` (for `q = 1` the single class 0).
fn coprime_classes(q: u64) -> Vec<u64> {
    (0..q).filter(|a| a.gcd(&q) == 1).collect()
}

/// `E'(x,q) = max over coprime a of |E(x;q,a)|`.
pub fn remainder_max(x: u64, q: u64, table: &PrimeTable) -> Result<f64> {
    check_modulus(q)?;
    table.check_range("x", x)?;
    let mut sums = vec![CompensatedSum::new(); q as usize];
    for &p in table.primes_up_to(x) {
        sums[(p % q) as usize].add((p as f64).ln());
    }
    let main = x as f64 / euler_phi(q) as f64;
    Ok(coprime_classes(q).into_iter().map(|a| (sums[a as usize].value() - main).abs()).fold(0.0, f64::max))
}

/// `E*(x,q) = max over integers y <= x of E'(y,q)`.
///
/// Between consecutive primes the class sums are constant and the main term
/// is linear in `y`, so it suffices to evaluate at `0, 1`, at every prime
/// `p <= x`, at every `p - 1`, and at `x`.
pub fn remainder_sup(x: u64, q: u64, table: &PrimeTable) -> Result<f64> {
    check_modulus(q)?;
    table.check_range("x", x)?;
    let phi = euler_phi(q) as f64;
    let classes = coprime_classes(q);
    let mut slot = vec![usize::MAX; q as usize];
    for (i, &a) in classes.iter().enumerate() {
        slot[a as usize] = i;
    }
    let mut sums = vec![CompensatedSum::new(); classes.len()];
    let mut vals = vec![0.0f64; classes.len()];
    let mut max_val = 0.0f64;
    let mut min_val = 0.0f64;
    let mut min_count = classes.len();

    let eval = |y: u64, max_val: f64, min_val: f64| {
        let m = y as f64 / phi;
        (max_val - m).abs().max((m - min_val).abs())
    };
    let mut best = eval(0, max_val, min_val).max(if x >= 1 { eval(1, max_val, min_val) } else { 0.0 });
    for &p in table.primes_up_to(x) {
        best = best.max(eval(p - 1, max_val, min_val));
        let s = slot[(p % q) as usize];
        if s != usize::MAX {
            let old = vals[s];
            sums[s].add((p as f64).ln());
            vals[s] = sums[s].value();
            max_val = max_val.max(vals[s]);
            if old == min_val {
                min_count -= 1;
                if min_count == 0 {
                    min_val = vals.iter().copied().fold(f64::INFINITY, f64::min);
                    min_count = vals.iter().filter(|&&v| v == min_val).count();
                }
            }
        }
        best = best.max(eval(p, max_val, min_val));
    }
    Ok(best.max(eval(x, max_val, min_val)))
}

/// `sum_{q <= Q} E'(N,q)` or `E*(N,q)`, evaluated in parallel over `q` and
/// reduced in increasing `q`.
pub fn bv_sum(n: u64, big_q: u64, table: &PrimeTable, mode: RemainderMode) -> Result<f64> {
    table.check_range("N", n)?;
    if big_q > n.max(1) {
        return Err(Error::InvalidArgument(format!("Q = {big_q} exceeds N = {n}")));
    }
    let terms: Vec<f64> = (1..=big_q)
        .into_par_iter()
        .map(|q| match mode {
            RemainderMode::Max => remainder_max(n, q, table),
            RemainderMode::Sup => remainder_sup(n, q, table),
        })
        .collect::<Result<_>>()?;
    Ok(compensated_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_data::build_prime_table;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[test]
    fn theta_progression_examples() {
        let t = build_prime_table(100).unwrap();
        let r = theta_progression(10, 3, 1, &t).unwrap();
        assert!((r.theta_value - ln(7.0)).abs() < 1e-15);
        assert!((r.main_term - 5.0).abs() < 1e-15);
        let r = theta_progression(10, 2, 0, &t).unwrap();
        assert!((r.theta_value - ln(2.0)).abs() < 1e-15);
        assert_eq!(r.main_term, 0.0);
        let r = theta_progression(10, 1, 0, &t).unwrap();
        assert!((r.theta_value - ln(210.0)).abs() < 1e-14);
        assert_eq!(r.remainder, r.theta_value - r.main_term);
        assert!(theta_progression(101, 1, 0, &t).is_err());
        assert!(theta_progression(10, 0, 0, &t).is_err());
    }

    #[test]
    fn remainder_max_examples() {
        let t = build_prime_table(100).unwrap();
        let e1 = remainder_max(10, 1, &t).unwrap();
        assert!((e1 - (ln(210.0) - 10.0).abs()).abs() < 1e-14);
        let e3 = remainder_max(10, 3, &t).unwrap();
        let expect = (ln(7.0) - 5.0).abs().max((ln(10.0) - 5.0).abs());
        assert!((e3 - expect).abs() < 1e-14);
        assert_eq!(remainder_max(0, 7, &t).unwrap(), 0.0);
    }

    /// Direct scan of every integer y in [0, x].
    fn sup_by_scan(x: u64, q: u64, t: &PrimeTable) -> f64 {
        (0..=x).map(|y| remainder_max(y, q, t).unwrap()).fold(0.0, f64::max)
    }

    #[test]
    fn sup_matches_direct_scan() {
        let t = build_prime_table(400).unwrap();
        for q in [1u64, 2, 3, 4, 7, 10, 12, 13, 30] {
            for x in [0u64, 1, 2, 10, 57, 211, 400] {
                let fast = remainder_sup(x, q, &t).unwrap();
                let slow = sup_by_scan(x, q, &t);
                assert!((fast - slow).abs() < 1e-12, "x={x} q={q}: {fast} vs {slow}");
                assert!(fast >= remainder_max(x, q, &t).unwrap());
            }
        }
        // q prime and larger than x.
        assert!((remainder_sup(10, 13, &t).unwrap() - sup_by_scan(10, 13, &t)).abs() < 1e-12);
    }

    #[test]
    fn classes_partition_theta() {
        let t = build_prime_table(2000).unwrap();
        let total = theta_progression(2000, 1, 0, &t).unwrap().theta_value;
        for q in [2u64, 6, 17, 30] {
            let s: f64 = (0..q).map(|a| theta_progression(2000, q, a, &t).unwrap().theta_value).sum();
            assert!((s - total).abs() < 1e-9);
        }
    }

    #[test]
    fn bv_sum_properties() {
        let t = build_prime_table(10_000).unwrap();
        let single = bv_sum(10_000, 1, &t, RemainderMode::Max).unwrap();
        let theta_n = theta_progression(10_000, 1, 0, &t).unwrap().theta_value;
        assert!((single - (theta_n - 10_000.0).abs()).abs() < 1e-9);
        let mut prev = 0.0;
        for qq in [1u64, 5, 20, 50, 100] {
            let v = bv_sum(10_000, qq, &t, RemainderMode::Max).unwrap();
            assert!(v >= prev);
            assert!(bv_sum(10_000, qq, &t, RemainderMode::Sup).unwrap() >= v);
            prev = v;
        }
        assert!(bv_sum(10, 11, &t, RemainderMode::Max).is_err());
    }
}
