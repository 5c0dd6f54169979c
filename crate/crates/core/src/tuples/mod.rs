//! Tuples of shifts, their residue-class counts and admissibility.

mod enumerate;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prime_data::{is_prime, squarefree_primes};

pub use enumerate::{enumerate_tuples, TupleEnumeration, MAX_ENUMERATION};
pub use search::{narrowest_admissible, NarrowestResult, SearchBudget};

/// A set of distinct non-negative shifts `h_1 < ... < h_k`.
///
/// Serializes as the comma-separated list, e.g. `"0,4,6,10,12,16"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HTuple {
    shifts: Vec<u64>,
}

impl HTuple {
    /// Sorts the shifts; rejects an empty list or repeated shifts.
    pub fn new(mut shifts: Vec<u64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidArgument("a tuple needs at least one shift".into()));
        }
        shifts.sort_unstable();
        if shifts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated shift in {shifts:?}")));
        }
        Ok(Self { shifts })
    }

    pub fn shifts(&self) -> &[u64] {
        &self.shifts
    }

    pub fn k(&self) -> usize {
        self.shifts.len()
    }

    pub fn min(&self) -> u64 {
        self.shifts[0]
    }

    pub fn max(&self) -> u64 {
        *self.shifts.last().expect("non-empty")
    }

    pub fn diameter(&self) -> u64 {
        self.max() - self.min()
    }

    pub fn contains(&self, h: u64) -> bool {
        self.shifts.binary_search(&h).is_ok()
    }

    /// Translate so the smallest shift is 0.
    pub fn normalized(&self) -> Self {
        let m = self.min();
        Self { shifts: self.shifts.iter().map(|h| h - m).collect() }
    }

    pub fn translated(&self, c: u64) -> Self {
        Self { shifts: self.shifts.iter().map(|h| h + c).collect() }
    }

    pub fn union(&self, other: &HTuple) -> HTuple {
        let mut s: Vec<u64> = self.shifts.iter().chain(&other.shifts).copied().collect();
        s.sort_unstable();
        s.dedup();
        HTuple { shifts: s }
    }

    /// `self ∪ {h0}`.
    pub fn with(&self, h0: u64) -> HTuple {
        self.union(&HTuple { shifts: vec![h0] })
    }

    pub fn intersection_size(&self, other: &HTuple) -> usize {
        self.shifts.iter().filter(|h| other.contains(**h)).count()
    }
}

impl fmt::Display for HTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.shifts.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for HTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let shifts = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad shift {part:?} in tuple {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        HTuple::new(shifts)
    }
}

impl Serialize for HTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of distinct residues of the shifts modulo `m` (no primality check).
pub(crate) fn residue_count(h: &HTuple, m: u64) -> u64 {
    if m as usize <= 4096 {
        let mut seen = vec![false; m as usize];
        let mut count = 0;
        for &x in h.shifts() {
            let r = (x % m) as usize;
            if !seen[r] {
                seen[r] = true;
                count += 1;
            }
        }
        count
    } else {
        let mut r: Vec<u64> = h.shifts().iter().map(|x| x % m).collect();
        r.sort_unstable();
        r.dedup();
        r.len() as u64
    }
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// `nu_p(H)`: residue classes mod the prime `p` occupied by `H`.
pub fn nu_p(h: &HTuple, p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(residue_count(h, p))
}

/// `nu_d(H)` extended multiplicatively to squarefree `d`.
pub fn nu_d(h: &HTuple, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let primes = squarefree_primes(d).ok_or_else(|| Error::InvalidArgument(format!("{d} is not squarefree")))?;
    Ok(primes.iter().map(|&p| residue_count(h, p)).product())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// First prime whose classes are all occupied.
    pub witness_prime: Option<u64>,
    /// `nu_p(H)` for every prime `p <= k`.
    pub nu_values: BTreeMap<u64, u64>,
}

/// Admissibility needs checking only at primes `p <= k`: a larger prime
/// always has a free class.
pub fn is_admissible(h: &HTuple) -> AdmissibilityReport {
    let k = h.k() as u64;
    let mut nu_values = BTreeMap::new();
    let mut witness_prime = None;
    for p in (2..=k).filter(|&p| is_prime(p)) {
        let nu = residue_count(h, p);
        nu_values.insert(p, nu);
        if nu == p && witness_prime.is_none() {
            witness_prime = Some(p);
        }
    }
    AdmissibilityReport { admissible: witness_prime.is_none(), witness_prime, nu_values }
}

/// `Delta = prod_{i<j} (h_j - h_i)`, exact.
pub fn delta_product(h: &HTuple) -> Result<BigUint> {
    if h.k() < 2 {
        return Err(Error::InvalidArgument("Delta is an empty product for k = 1".into()));
    }
    let s = h.shifts();
    let mut acc = BigUint::one();
    for j in 1..s.len() {
        for i in 0..j {
            acc *= s[j] - s[i];
        }
    }
    Ok(acc)
}

/// `U = C k^2 log(2h)` with `h` the largest shift (taken as at least 1).
pub fn u_bound(h: &HTuple, c: f64) -> f64 {
    let k = h.k() as f64;
    c * k * k * (2.0 * h.max().max(1) as f64).ln()
}

/// `nu_p(H1) + nu_p(H2) - nu_p(H1 ∪ H2)`: classes mod `p` hit by both tuples.
pub fn nu_bar_p(h1: &HTuple, h2: &HTuple, p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(residue_count(h1, p) + residue_count(h2, p) - residue_count(&h1.union(h2), p))
}

/// `nu_p(G ∪ {h0}) - 1`.
pub fn nu_star_p(g: &HTuple, h0: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(residue_count(&g.with(h0), p) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> HTuple {
        s.parse().unwrap()
    }

    #[test]
    fn construction_and_display() {
        let h = t("16, 0,4,6,10,12");
        assert_eq!(h.shifts(), &[0, 4, 6, 10, 12, 16]);
        assert_eq!(h.to_string(), "0,4,6,10,12,16");
        assert_eq!(h.diameter(), 16);
        assert!("0,2,2".parse::<HTuple>().is_err());
        assert!("".parse::<HTuple>().is_err());
        assert!("0,-1".parse::<HTuple>().is_err());
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, "\"0,4,6,10,12,16\"");
        assert_eq!(serde_json::from_str::<HTuple>(&json).unwrap(), h);
    }

    #[test]
    fn nu_p_examples() {
        assert_eq!(nu_p(&t("0,2"), 2).unwrap(), 1);
        assert_eq!(nu_p(&t("0,2,4"), 3).unwrap(), 3);
        assert_eq!(nu_p(&t("0,4,6,10,12,16"), 5).unwrap(), 4);
        assert!(nu_p(&t("0,2"), 4).is_err());
    }

    #[test]
    fn nu_d_examples() {
        assert_eq!(nu_d(&t("0,2"), 1).unwrap(), 1);
        assert_eq!(nu_d(&t("0,2"), 15).unwrap(), 4);
        assert_eq!(nu_d(&t("0,4,6,10,12,16"), 17).unwrap(), 6);
        assert!(nu_d(&t("0,2"), 12).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let r = is_admissible(&t("0,4,6,10,12,16"));
        assert!(r.admissible);
        assert_eq!(r.nu_values.get(&5), Some(&4));
        let r = is_admissible(&t("0,1"));
        assert_eq!((r.admissible, r.witness_prime), (false, Some(2)));
        let r = is_admissible(&t("0,2,4"));
        assert_eq!((r.admissible, r.witness_prime), (false, Some(3)));
        assert!(is_admissible(&t("7")).admissible);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_product(&t("0,2")).unwrap(), BigUint::from(2u32));
        assert_eq!(delta_product(&t("0,2,6")).unwrap(), BigUint::from(48u32));
        assert_eq!(delta_product(&t("0,1,2")).unwrap(), BigUint::from(2u32));
        assert!(delta_product(&t("5")).is_err());
    }

    #[test]
    fn u_bound_examples() {
        assert!((u_bound(&t("0,2"), 1.0) - 4.0 * 4f64.ln()).abs() < 1e-12);
        let h = t("0,4,6,10,12,16");
        let log_delta = delta_product(&h).unwrap().to_string().parse::<f64>().unwrap().ln();
        assert!(log_delta <= u_bound(&h, 1.0));
        assert!(u_bound(&t("3"), 2.0) > 0.0);
    }

    #[test]
    fn nu_bar_and_nu_star_examples() {
        let a = t("0,4,6");
        assert_eq!(nu_bar_p(&a, &a, 5).unwrap(), nu_p(&a, 5).unwrap());
        assert_eq!(nu_bar_p(&t("0"), &t("1"), 2).unwrap(), 0);
        assert_eq!(nu_bar_p(&t("0,2"), &t("2,4"), 3).unwrap(), 1);
        assert_eq!(nu_star_p(&t("0"), 0, 5).unwrap(), 0);
        assert_eq!(nu_star_p(&t("0"), 1, 5).unwrap(), 1);
        assert_eq!(nu_star_p(&t("0,4"), 2, 2).unwrap(), 0);
    }
}
