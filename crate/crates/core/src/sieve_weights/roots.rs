use crate::error::{Error, Result};
use crate::prime_data::squarefree_primes;
use crate::tuples::HTuple;

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// Residues `b mod d` with `d | P_H(b)`, given the primes of squarefree `d`.
pub(crate) fn roots_for_primes(h: &HTuple, primes: &[u64]) -> Vec<u64> {
    let mut roots = vec![0u64];
    let mut modulus = 1u64;
    for &p in primes {
        let mut local: Vec<u64> = h.shifts().iter().map(|&s| (p - s % p) % p).collect();
        local.sort_unstable();
        local.dedup();
        // z = x + m * ((y - x) * m^{-1} mod p)
        let inv = mod_pow(modulus % p, p - 2, p);
        let mut next = Vec::with_capacity(roots.len() * local.len());
        for &x in &roots {
            for &y in &local {
                let diff = (y + p - x % p) % p;
                let t = (diff as u128 * inv as u128 % p as u128) as u64;
                next.push(x + modulus * t);
            }
        }
        modulus *= p;
        roots = next;
    }
    roots.sort_unstable();
    roots
}

/// All residues `b mod d` with `d | P_H(b)`; `d` must be squarefree.
pub fn residue_roots(h: &HTuple, d: u64) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let primes = squarefree_primes(d).ok_or_else(|| Error::InvalidArgument(format!("{d} is not squarefree")))?;
    Ok(roots_for_primes(h, &primes))
}

/// `#{1 <= n <= N : n ≡ b (mod d)}`.
pub(crate) fn class_count(b: u64, d: u64, n_max: u64) -> u64 {
    let first = if b == 0 { d } else { b };
    if first > n_max {
        0
    } else {
        (n_max - first) / d + 1
    }
}

/// `#{1 <= n <= N : d | P_H(n)}` for squarefree `d`.
pub fn divisor_residue_count(h: &HTuple, d: u64, n_max: u64) -> Result<u64> {
    Ok(residue_roots(h, d)?.iter().map(|&b| class_count(b, d, n_max)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuples::nu_d;

    fn direct(h: &HTuple, d: u64, n_max: u64) -> u64 {
        (1..=n_max)
            .filter(|&n| h.shifts().iter().fold(1u64, |acc, &s| acc * ((n + s) % d) % d) == 0)
            .count() as u64
    }

    #[test]
    fn examples() {
        let h: HTuple = "0,2".parse().unwrap();
        assert_eq!(divisor_residue_count(&h, 1, 17).unwrap(), 17);
        assert_eq!(divisor_residue_count(&h, 3, 9).unwrap(), 6);
        assert!(divisor_residue_count(&h, 4, 9).is_err());
    }

    #[test]
    fn roots_match_direct_scan() {
        for s in ["0,2", "0,4,6", "1,3,7,9", "0,4,6,10,12,16"] {
            let h: HTuple = s.parse().unwrap();
            for d in [1u64, 2, 3, 5, 6, 7, 10, 15, 30, 77, 105, 210] {
                let roots = residue_roots(&h, d).unwrap();
                assert_eq!(roots.len() as u64, nu_d(&h, d).unwrap());
                assert_eq!(divisor_residue_count(&h, d, 1000).unwrap(), direct(&h, d, 1000), "{s} d={d}");
            }
        }
    }
}
