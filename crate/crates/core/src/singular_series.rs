//! Truncated Euler products for the singular series
//! `S(H) = prod_p (1 - 1/p)^{-k} (1 - nu_p(H)/p)` and averages over tuples.
//!
//! The product is taken over primes `p <= P` in log space. For `P` at least
//! `max(2 * diameter, 2 k^2)` every omitted prime has `nu_p = k`, each
//! omitted log-factor is at most `2k^2/p^2` in absolute value, and their sum
//! is bounded by `2k^2 / (P log P)`, which is reported as `tail_bound`.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::prime_data::build_prime_table;
use crate::tuples::{enumerate_tuples, residue_count, HTuple};

/// Constant `c` in the per-prime tail estimate `|log factor| <= c k^2 / p^2`.
pub const TAIL_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesValue {
    pub value: f64,
    pub truncation_prime: u64,
    /// Bound on `|log(S / value)|` from the omitted primes; 0 when the value vanishes.
    pub tail_bound: f64,
    pub tuple: HTuple,
    pub admissible: bool,
}

/// Smallest truncation point accepted for `h`.
pub fn min_truncation(h: &HTuple) -> u64 {
    let k = h.k() as u64;
    (2 * h.diameter()).max(2 * k * k).max(2)
}

fn check_truncation(h: &HTuple, p: u64) -> Result<()> {
    let need = min_truncation(h);
    if p < need {
        return Err(Error::InvalidArgument(format!(
            "truncation {p} below max(2*diameter, 2k^2) = {need} for tuple {h}"
        )));
    }
    Ok(())
}

fn tail_bound(k: usize, p: u64) -> f64 {
    let p = p as f64;
    TAIL_CONSTANT * (k * k) as f64 / (p * p.ln())
}

/// `log S(H)` over the given primes, or `None` when a factor vanishes.
fn log_product(h: &HTuple, primes: &[u64]) -> Option<f64> {
    let k = h.k() as u64;
    let spread = h.diameter().max(k);
    let mut acc = CompensatedSum::new();
    for &p in primes {
        let nu = if p > spread { k } else { residue_count(h, p) };
        if nu == p {
            return None;
        }
        let inv = 1.0 / p as f64;
        acc.add((-(nu as f64) * inv).ln_1p() - k as f64 * (-inv).ln_1p());
    }
    Some(acc.value())
}

fn assemble(h: &HTuple, trunc: u64, log: Option<f64>) -> SingularSeriesValue {
    match log {
        Some(l) => SingularSeriesValue {
            value: l.exp(),
            truncation_prime: trunc,
            tail_bound: tail_bound(h.k(), trunc),
            tuple: h.clone(),
            admissible: true,
        },
        None => SingularSeriesValue {
            value: 0.0,
            truncation_prime: trunc,
            tail_bound: 0.0,
            tuple: h.clone(),
            admissible: false,
        },
    }
}

/// `S(H)` truncated at the primes `p <= trunc`.
pub fn singular_series(h: &HTuple, trunc: u64) -> Result<SingularSeriesValue> {
    SingularSeriesEvaluator::new(trunc)?.evaluate(h)
}

/// `S(H ∪ {h0})`; equal to `S(H)` when `h0` is already a shift.
pub fn singular_series_augmented(h: &HTuple, h0: u64, trunc: u64) -> Result<SingularSeriesValue> {
    singular_series(&h.with(h0), trunc)
}

/// Reusable evaluator holding the primes up to a fixed truncation point and
/// memoizing values by translation class.
#[derive(Debug)]
pub struct SingularSeriesEvaluator {
    trunc: u64,
    primes: Vec<u64>,
    cache: Mutex<HashMap<HTuple, Option<f64>>>,
}

impl SingularSeriesEvaluator {
    pub fn new(trunc: u64) -> Result<Self> {
        let table = build_prime_table(trunc.max(2))?;
        Ok(Self { trunc, primes: table.primes().to_vec(), cache: Mutex::new(HashMap::new()) })
    }

    pub fn truncation(&self) -> u64 {
        self.trunc
    }

    pub fn evaluate(&self, h: &HTuple) -> Result<SingularSeriesValue> {
        check_truncation(h, self.trunc)?;
        let key = h.normalized();
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(assemble(h, self.trunc, *hit));
        }
        let log = log_product(&key, &self.primes);
        self.cache.lock().expect("cache poisoned").insert(key, log);
        Ok(assemble(h, self.trunc, log))
    }

    pub fn value(&self, h: &HTuple) -> Result<f64> {
        Ok(self.evaluate(h)?.value)
    }

    /// The constant of a prime-weighted correlation written per prime as
    /// `prod_p (1 - (nu_p(H1^0) + nu_p(H2^0) - nubar_p - 1)/(p - 1)) (1 - 1/p)^{-a}`,
    /// where `nubar_p` counts classes shared by `H1^0` and `H2^0`, and
    /// `a = k1 + k2 - r` lowered by one for each of `H1`, `H2` containing `h0`
    /// (raised back by one when `h0` is in both). It equals `S(H1 ∪ H2 ∪ {h0})`.
    pub fn correlation_constant(&self, h1: &HTuple, h2: &HTuple, h0: u64) -> Result<f64> {
        let h1z = h1.with(h0);
        let h2z = h2.with(h0);
        let union = h1z.union(&h2z);
        check_truncation(&union, self.trunc)?;
        let r = h1.intersection_size(h2) as i64;
        let (in1, in2) = (h1.contains(h0) as i64, h2.contains(h0) as i64);
        let a = h1.k() as i64 + h2.k() as i64 - r - in1 - in2 + in1 * in2;
        let mut acc = CompensatedSum::new();
        for &p in &self.primes {
            let n1 = residue_count(&h1z, p);
            let n2 = residue_count(&h2z, p);
            let shared = n1 + n2 - residue_count(&union, p);
            let num = (n1 + n2 - shared) as f64 - 1.0;
            let factor = 1.0 - num / (p as f64 - 1.0);
            if factor <= 0.0 {
                return Ok(0.0);
            }
            acc.add(factor.ln() - a as f64 * (-1.0 / p as f64).ln_1p());
        }
        Ok(acc.value().exp())
    }
}

/// How tuples are counted in an average of singular series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// All ordered `k`-tuples of distinct shifts, normalized by `h^k`.
    Ordered,
    /// Each set once, normalized by `h^k / k!`.
    Unordered,
}

/// Average of `S(H)` over `k`-sets of shifts in `[1, h]`; tends to 1.
pub fn gallagher_ratio(k: usize, h: u64, convention: Convention, trunc: u64) -> Result<f64> {
    let eval = SingularSeriesEvaluator::new(trunc)?;
    let ordered = convention == Convention::Ordered;
    let mut sum = CompensatedSum::new();
    for (tuple, mult) in enumerate_tuples(k, h, ordered)? {
        sum.add(mult as f64 * eval.value(&tuple)?);
    }
    let k_fact: f64 = (1..=k).map(|i| i as f64).product();
    let norm = match convention {
        Convention::Ordered => (h as f64).powi(k as i32),
        Convention::Unordered => (h as f64).powi(k as i32) / k_fact,
    };
    Ok(sum.value() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> HTuple {
        s.parse().unwrap()
    }

    #[test]
    fn singleton_is_exactly_one() {
        let v = singular_series(&t("0"), 1000).unwrap();
        assert_eq!(v.value, 1.0);
        assert!(v.admissible);
    }

    #[test]
    fn inadmissible_vanishes() {
        let v = singular_series(&t("0,1"), 100).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(!v.admissible);
        assert_eq!(singular_series_augmented(&t("0,4"), 2, 100).unwrap().value, 0.0);
    }

    #[test]
    fn twin_constant() {
        // 2 prod_{p>2} (1 - 1/(p-1)^2) = 1.3203236316...
        let v = singular_series(&t("0,2"), 1_000_000).unwrap();
        assert!((v.value - 1.320_323_631_6).abs() < 1e-5, "{}", v.value);
    }

    #[test]
    fn precondition_enforced() {
        assert!(singular_series(&t("0,4,6,10,12,16"), 71).is_err());
        assert!(singular_series(&t("0,4,6,10,12,16"), 72).is_ok());
    }

    #[test]
    fn augmented_absorbs_members() {
        let a = singular_series_augmented(&t("0,2"), 2, 1000).unwrap().value;
        let b = singular_series(&t("0,2"), 1000).unwrap().value;
        assert_eq!(a, b);
        let c = singular_series_augmented(&t("0"), 2, 1000).unwrap().value;
        assert_eq!(c, b);
    }

    #[test]
    fn correlation_constant_matches_augmented_series() {
        let eval = SingularSeriesEvaluator::new(5000).unwrap();
        let cases = [("0,2", "0,6", 8), ("0,2", "0,6", 2), ("0,2", "0,2", 0), ("0", "0", 0), ("0,6", "2", 12)];
        for (a, b, h0) in cases {
            let (a, b) = (t(a), t(b));
            let lhs = eval.correlation_constant(&a, &b, h0).unwrap();
            let rhs = eval.value(&a.union(&b).with(h0)).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0), "{a} {b} {h0}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn gallagher_conventions() {
        assert_eq!(gallagher_ratio(1, 7, Convention::Ordered, 100).unwrap(), 1.0);
        let o = gallagher_ratio(2, 60, Convention::Ordered, 1000).unwrap();
        let u = gallagher_ratio(2, 60, Convention::Unordered, 1000).unwrap();
        assert!((o - u).abs() < 1e-12);
    }
}
