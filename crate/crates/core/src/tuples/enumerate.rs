use super::HTuple;
use crate::error::{Error, Result};
use crate::numerics::binomial_f64;

/// Largest number of unordered tuples [`enumerate_tuples`] will produce.
pub const MAX_ENUMERATION: f64 = 5e7;

/// Every `k`-subset of `{1, ..., h}` in lexicographic order, each paired
/// with its multiplicity: `k!` under the ordered (all permutations)
/// convention, 1 under the unordered one.
#[derive(Debug, Clone)]
pub struct TupleEnumeration {
    h: u64,
    current: Option<Vec<u64>>,
    multiplicity: u64,
}

pub fn enumerate_tuples(k: usize, h: u64, ordered: bool) -> Result<TupleEnumeration> {
    if k == 0 || k as u64 > h {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= h, got k={k}, h={h}")));
    }
    let count = binomial_f64(h, k as u64);
    if count > MAX_ENUMERATION {
        return Err(Error::ResourceLimit(format!("C({h},{k}) = {count:e} tuples exceeds {MAX_ENUMERATION:e}")));
    }
    let multiplicity = if ordered { (1..=k as u64).product() } else { 1 };
    Ok(TupleEnumeration { h, current: Some((1..=k as u64).collect()), multiplicity })
}

impl TupleEnumeration {
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }
}

impl Iterator for TupleEnumeration {
    type Item = (HTuple, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.current.take()?;
        let out = HTuple { shifts: cur.clone() };
        // Advance to the next combination.
        let k = cur.len();
        let mut next = cur;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.h - (k - 1 - i) as u64 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some((out, self.multiplicity))
    }
}
