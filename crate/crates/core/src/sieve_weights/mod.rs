//! Truncated divisor-sum weights and their moments.
//!
//! `Lambda_R(n; H, l) = (1/(k+l)!) sum_{d | P_H(n), d <= R} mu(d) log(R/d)^{k+l}`
//! with `P_H(n) = (n+h_1)...(n+h_k)`. The product is never formed: the
//! distinct primes of each `n + h_i` are merged instead.

mod moments;
mod roots;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{factorial_f64, CompensatedSum};
use crate::prime_data::{factorize, squarefree_primes};
use crate::tuples::HTuple;

pub use moments::{
    first_moment, pair_correlation, prop2_case, rho_statistic, weighted_correlation, CaseId, MomentKind,
    MomentParams, MomentPath, MomentReport, Prop2Case, RhoReport, WeightSelector,
};
pub use roots::{divisor_residue_count, residue_roots};

/// Largest `n` accepted by [`generalized_von_mangoldt`] (trial division).
pub const MAX_FACTOR: u64 = 1 << 50;

/// Sieve parameters attached to a tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub tuple: HTuple,
    pub ell: u32,
    #[serde(rename = "R")]
    pub r: f64,
}

impl WeightParams {
    pub fn new(tuple: HTuple, ell: u32, r: f64) -> Result<Self> {
        if ell as usize > tuple.k() {
            return Err(Error::InvalidArgument(format!("ell = {ell} exceeds k = {}", tuple.k())));
        }
        if !(r >= 2.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("R = {r} must be at least 2")));
        }
        Ok(Self { tuple, ell, r })
    }

    /// The exponent `k + l`.
    pub fn power(&self) -> u32 {
        self.tuple.k() as u32 + self.ell
    }
}

/// `sum_{d | m, d <= r} mu(d) log(r/d)^power` over the squarefree `d` built
/// from the distinct primes `primes`.
pub(crate) fn truncated_divisor_sum(primes: &[u64], r: f64, power: u32) -> f64 {
    let ln_r = r.ln();
    let mut acc = CompensatedSum::new();
    // Depth-first over squarefree products in increasing prime order.
    fn walk(primes: &[u64], start: usize, d: f64, sign: f64, ln_r: f64, r: f64, power: u32, acc: &mut CompensatedSum) {
        acc.add(sign * (ln_r - d.ln()).powi(power as i32));
        for i in start..primes.len() {
            let next = d * primes[i] as f64;
            if next > r {
                // Primes are sorted, so later ones overshoot too.
                break;
            }
            walk(primes, i + 1, next, -sign, ln_r, r, power, acc);
        }
    }
    walk(primes, 0, 1.0, 1.0, ln_r, r, power, &mut acc);
    acc.value()
}

fn distinct_primes(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// `Lambda_R(n) = sum_{d | n, d <= R} mu(d) log(R/d)`.
pub fn lambda_r(n: u64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(truncated_divisor_sum(&distinct_primes(n), r, 1))
}

/// `Lambda_k(n) = sum_{d | n} mu(d) log(n/d)^k`; vanishes when `n` has
/// more than `k` distinct prime factors.
pub fn generalized_von_mangoldt(n: u64, k: u32) -> Result<f64> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 1".into()));
    }
    if n > MAX_FACTOR {
        return Err(Error::ResourceLimit(format!("{n} too large to factor by trial division")));
    }
    let primes = distinct_primes(n);
    let ln_n = (n as f64).ln();
    let mut acc = CompensatedSum::new();
    for mask in 0u32..(1 << primes.len()) {
        let mut ln_d = 0.0;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                ln_d += (p as f64).ln();
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * (ln_n - ln_d).powi(k as i32));
    }
    Ok(acc.value())
}

/// Distinct primes dividing `P_H(n)`, ascending.
fn tuple_primes(h: &HTuple, n: u64) -> Vec<u64> {
    let mut ps: Vec<u64> = h.shifts().iter().flat_map(|&s| distinct_primes(n + s)).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// `Lambda_R(n; H, l)`.
pub fn lambda_r_weight(n: u64, params: &WeightParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let power = params.power();
    Ok(truncated_divisor_sum(&tuple_primes(&params.tuple, n), params.r, power) / factorial_f64(power as u64))
}

/// Smallest-prime-factor table for fast repeated factorization.
#[derive(Debug, Clone)]
pub(crate) struct Factorizer {
    spf: Vec<u32>,
}

impl Factorizer {
    pub(crate) const MAX: u64 = 400_000_000;

    pub(crate) fn new(limit: u64) -> Result<Self> {
        if limit > Self::MAX {
            return Err(Error::ResourceLimit(format!("factor table up to {limit} exceeds {}", Self::MAX)));
        }
        let n = limit as usize + 1;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Ok(Self { spf })
    }

    /// Appends the distinct primes of `m` to `out`.
    pub(crate) fn push_primes(&self, mut m: u64, out: &mut Vec<u64>) {
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
    }

    /// Distinct primes of `P_H(n)`, ascending, written into `buf`.
    pub(crate) fn tuple_primes(&self, h: &HTuple, n: u64, buf: &mut Vec<u64>) {
        buf.clear();
        for &s in h.shifts() {
            self.push_primes(n + s, buf);
        }
        buf.sort_unstable();
        buf.dedup();
    }
}

/// `mu(d)` and the prime list of every squarefree `d <= limit`.
pub(crate) fn squarefree_upto(limit: u64) -> Vec<(u64, i8, Vec<u64>)> {
    (1..=limit)
        .filter_map(|d| {
            squarefree_primes(d).map(|ps| {
                let mu = if ps.len() % 2 == 0 { 1 } else { -1 };
                (d, mu, ps)
            })
        })
        .collect()
}
