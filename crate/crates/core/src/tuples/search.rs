//! Exhaustive search for the narrowest admissible `k`-tuple.
//!
//! Diameters are tried in increasing order. For a fixed diameter `D` the
//! tuple contains `0` and `D`, and the interior shifts are chosen in
//! increasing order by depth-first search. For every prime `p <= k` the
//! search keeps a count of occupied residue classes and abandons a branch
//! as soon as one prime has all of its classes covered, or when fewer
//! usable candidates remain than shifts still to place. Exhausting every
//! diameter below the first success proves minimality.

use serde::{Deserialize, Serialize};

use super::{is_admissible, HTuple};
use crate::error::{Error, Result};
use crate::prime_data::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_nodes: 2_000_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NarrowestResult {
    pub tuple: HTuple,
    pub diameter: u64,
    /// False when the budget ran out; the diameter is then only an upper bound.
    pub proven_minimal: bool,
    pub nodes: u64,
}

pub const MAX_SEARCH_K: usize = 64;

struct Occupancy {
    primes: Vec<u64>,
    counts: Vec<Vec<u32>>,
    occupied: Vec<u64>,
}

impl Occupancy {
    fn new(k: usize) -> Self {
        let primes: Vec<u64> = (2..=k as u64).filter(|&p| is_prime(p)).collect();
        let counts = primes.iter().map(|&p| vec![0u32; p as usize]).collect();
        let occupied = vec![0; primes.len()];
        Self { primes, counts, occupied }
    }

    /// Whether adding `h` keeps a free class at every prime.
    fn allows(&self, h: u64) -> bool {
        self.primes.iter().enumerate().all(|(i, &p)| {
            let r = (h % p) as usize;
            self.counts[i][r] > 0 || self.occupied[i] + 1 < p
        })
    }

    fn push(&mut self, h: u64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (h % p) as usize;
            if self.counts[i][r] == 0 {
                self.occupied[i] += 1;
            }
            self.counts[i][r] += 1;
        }
    }

    fn pop(&mut self, h: u64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (h % p) as usize;
            self.counts[i][r] -= 1;
            if self.counts[i][r] == 0 {
                self.occupied[i] -= 1;
            }
        }
    }
}

struct Dfs {
    diameter: u64,
    occ: Occupancy,
    chosen: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

impl Dfs {
    fn run(&mut self, last: u64, remaining: usize) -> Outcome {
        if remaining == 0 {
            return Outcome::Found;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Outcome::OutOfBudget;
        }
        let usable = (last + 1..self.diameter).filter(|&c| self.occ.allows(c)).count();
        if usable < remaining {
            return Outcome::Exhausted;
        }
        for c in last + 1..self.diameter {
            if self.diameter - c < remaining as u64 {
                break;
            }
            if !self.occ.allows(c) {
                continue;
            }
            self.occ.push(c);
            self.chosen.push(c);
            match self.run(c, remaining - 1) {
                Outcome::Exhausted => {}
                other => return other,
            }
            self.chosen.pop();
            self.occ.pop(c);
        }
        Outcome::Exhausted
    }
}

/// Admissible `k`-tuple built from the `k` consecutive primes after `k`;
/// every such prime misses class 0 modulo each prime `<= k`.
fn prime_run_tuple(k: usize) -> HTuple {
    let run: Vec<u64> = (k as u64 + 1..).filter(|&n| is_prime(n)).take(k).collect();
    HTuple::new(run).expect("distinct primes").normalized()
}

/// Narrowest admissible `k`-tuple with smallest shift 0.
pub fn narrowest_admissible(k: usize, budget: SearchBudget) -> Result<NarrowestResult> {
    if k == 0 || k > MAX_SEARCH_K {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {MAX_SEARCH_K}]")));
    }
    if k == 1 {
        return Ok(NarrowestResult { tuple: HTuple::new(vec![0])?, diameter: 0, proven_minimal: true, nodes: 0 });
    }
    let fallback = prime_run_tuple(k);
    debug_assert!(is_admissible(&fallback).admissible);
    let mut nodes = 0u64;
    for diameter in (k as u64 - 1)..fallback.diameter() {
        let mut occ = Occupancy::new(k);
        if !occ.allows(0) {
            continue;
        }
        occ.push(0);
        if !occ.allows(diameter) {
            continue;
        }
        occ.push(diameter);
        let mut dfs = Dfs { diameter, occ, chosen: vec![0], nodes: 0, max_nodes: budget.max_nodes - nodes };
        let outcome = dfs.run(0, k - 2);
        nodes += dfs.nodes;
        match outcome {
            Outcome::Found => {
                let mut shifts = dfs.chosen;
                shifts.push(diameter);
                let tuple = HTuple::new(shifts)?;
                return Ok(NarrowestResult { tuple, diameter, proven_minimal: true, nodes });
            }
            Outcome::Exhausted => {}
            Outcome::OutOfBudget => {
                return Ok(NarrowestResult {
                    diameter: fallback.diameter(),
                    tuple: fallback,
                    proven_minimal: false,
                    nodes: budget.max_nodes,
                });
            }
        }
    }
    Ok(NarrowestResult { diameter: fallback.diameter(), tuple: fallback, proven_minimal: true, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k() {
        let r = narrowest_admissible(2, SearchBudget::default()).unwrap();
        assert_eq!(r.tuple.shifts(), &[0, 2]);
        let known = [(1, 0), (2, 2), (3, 6), (4, 8), (5, 12), (6, 16), (7, 20)];
        for (k, d) in known {
            let r = narrowest_admissible(k, SearchBudget::default()).unwrap();
            assert_eq!(r.diameter, d, "k = {k}");
            assert!(r.proven_minimal);
            assert!(is_admissible(&r.tuple).admissible);
            assert_eq!(r.tuple.k(), k);
        }
    }

    #[test]
    fn budget_exhaustion_reports_upper_bound() {
        let r = narrowest_admissible(8, SearchBudget { max_nodes: 10 }).unwrap();
        assert!(!r.proven_minimal);
        assert!(r.diameter >= 26);
        assert!(is_admissible(&r.tuple).admissible);
    }

    #[test]
    fn rejects_k_zero() {
        assert!(narrowest_admissible(0, SearchBudget::default()).is_err());
    }
}
