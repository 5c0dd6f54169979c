use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Numbers per sieve segment.
pub const SEGMENT_SIZE: u64 = 1 << 20;

const CACHE_MAGIC: &[u8; 4] = b"GPYP";
const CACHE_VERSION: u32 = 1;

/// Primality bitmap and ascending prime list for `0..=limit`.
///
/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
}

/// Sieves all primes up to `limit` (at least 2).
pub fn build_prime_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::new(limit)
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!("prime table limit {limit} below 2")));
        }
        if limit > 1 << 40 {
            return Err(Error::ResourceLimit(format!("prime table limit {limit} too large")));
        }
        let root = (limit as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root);
        let segments = limit / SEGMENT_SIZE + 1;
        let words: Vec<Vec<u64>> = (0..segments)
            .into_par_iter()
            .map(|s| {
                let lo = s * SEGMENT_SIZE;
                let hi = (lo + SEGMENT_SIZE).min(limit + 1);
                sieve_segment(lo, hi, &base)
            })
            .collect();
        let bits: Vec<u64> = words.into_iter().flatten().collect();
        let mut table = PrimeTable { limit, bits, primes: Vec::new() };
        table.primes = table.collect_primes();
        Ok(table)
    }

    fn collect_primes(&self) -> Vec<u64> {
        let mut primes = Vec::new();
        for (w, &word) in self.bits.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as u64;
                let n = w as u64 * 64 + b;
                if n > self.limit {
                    break;
                }
                primes.push(n);
                x &= x - 1;
            }
        }
        primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `n`; false beyond the limit.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x`.
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }

    /// `pi(x)` for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes_up_to(x).len()
    }

    pub(crate) fn check_range(&self, what: &'static str, value: u64) -> Result<()> {
        if value > self.limit {
            Err(Error::OutOfRange { what, value, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Writes the table as `"GPYP" | version: u32 | limit: u64 | bitset`,
    /// little-endian, bit `i` of the bitset set iff `i` is prime.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        let nbytes = (self.limit / 8 + 1) as usize;
        let mut bytes = Vec::with_capacity(nbytes);
        for word in &self.bits {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        bytes.truncate(nbytes);
        // Clear bits past the limit in the final byte.
        let tail = (self.limit % 8 + 1) as u32;
        if tail < 8 {
            *bytes.last_mut().expect("non-empty") &= (1u8 << tail) - 1;
        }
        w.write_all(&bytes)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut header = [0u8; 16];
        r.read_exact(&mut header).map_err(|_| Error::CacheFormat("truncated header".into()))?;
        if &header[..4] != CACHE_MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        let version = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
        if version != CACHE_VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {version}")));
        }
        let limit = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes"));
        if limit < 2 {
            return Err(Error::CacheFormat(format!("limit {limit} below 2")));
        }
        let nbytes = (limit / 8 + 1) as usize;
        let mut bytes = Vec::with_capacity(nbytes);
        r.read_to_end(&mut bytes)?;
        if bytes.len() != nbytes {
            return Err(Error::CacheFormat(format!("expected {nbytes} bitset bytes, found {}", bytes.len())));
        }
        let mut bits = vec![0u64; (limit / 64 + 1) as usize];
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            bits[i] = u64::from_le_bytes(buf);
        }
        let mut table = PrimeTable { limit, bits, primes: Vec::new() };
        table.primes = table.collect_primes();
        Ok(table)
    }

    /// Reads the cache at `path` if it covers `limit`, otherwise sieves and
    /// (re)writes it.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<Self> {
        if let Ok(t) = Self::read_cache(path) {
            if t.limit >= limit {
                return Ok(t);
            }
        }
        let t = Self::new(limit)?;
        t.write_cache(path)?;
        Ok(t)
    }
}

/// Sieves `[lo, hi)`; `lo` is a multiple of 64. Returns the packed words.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = hi - lo;
    let mut words = vec![u64::MAX; len.div_ceil(64) as usize];
    let clear = |words: &mut [u64], i: u64| words[(i / 64) as usize] &= !(1u64 << (i % 64));
    for n in lo..lo.max(2).min(hi) {
        clear(&mut words, n - lo);
    }
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        while m < hi {
            clear(&mut words, m - lo);
            m += p;
        }
    }
    // Mask the unused tail bits.
    let rem = len % 64;
    if rem != 0 {
        *words.last_mut().expect("non-empty") &= (1u64 << rem) - 1;
    }
    words
}

/// `theta(n) = log n` for prime `n`, else 0.
pub fn theta(n: u64, table: &PrimeTable) -> Result<f64> {
    table.check_range("n", n)?;
    Ok(if table.is_prime(n) { (n as f64).ln() } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn tiny_tables() {
        assert_eq!(build_prime_table(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(build_prime_table(2).unwrap().primes(), &[2]);
        assert!(matches!(build_prime_table(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = build_prime_table(10_000).unwrap();
        for n in 0..=10_000 {
            assert_eq!(t.is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn segment_boundaries() {
        let limit = 3 * SEGMENT_SIZE + 17;
        let t = build_prime_table(limit).unwrap();
        for n in [SEGMENT_SIZE - 1, SEGMENT_SIZE, SEGMENT_SIZE + 1, 2 * SEGMENT_SIZE + 1, limit] {
            assert_eq!(t.is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(!t.is_prime(limit + 1));
    }

    #[test]
    fn theta_values() {
        let t = build_prime_table(100).unwrap();
        assert!((theta(7, &t).unwrap() - 1.945_910_149_055_313).abs() < 1e-12);
        assert_eq!(theta(8, &t).unwrap(), 0.0);
        assert_eq!(theta(1, &t).unwrap(), 0.0);
        assert!(matches!(theta(101, &t), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn cache_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.bin");
        for limit in [2u64, 63, 64, 100, 1001] {
            let t = build_prime_table(limit).unwrap();
            t.write_cache(&path).unwrap();
            let bytes = std::fs::read(&path).unwrap();
            assert_eq!(&bytes[..4], b"GPYP");
            assert_eq!(bytes.len() as u64, 16 + limit / 8 + 1);
            assert_eq!(PrimeTable::read_cache(&path).unwrap(), t);
        }
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(PrimeTable::read_cache(&path), Err(Error::CacheFormat(_))));
    }

    #[test]
    fn load_or_build_extends_short_cache() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.bin");
        build_prime_table(50).unwrap().write_cache(&path).unwrap();
        let t = PrimeTable::load_or_build(&path, 500).unwrap();
        assert_eq!(t.limit(), 500);
        assert_eq!(PrimeTable::read_cache(&path).unwrap().limit(), 500);
    }
}
