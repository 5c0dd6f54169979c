use primetuples::numerics::identity_812_sides;
use primetuples::prime_data::{build_prime_table, bv_sum, RemainderMode};
use primetuples::singular_series::singular_series;
use primetuples::tuples::{is_admissible, narrowest_admissible, HTuple, SearchBudget};

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[test]
fn prime_table_matches_trial_division() {
    let table = build_prime_table(10_000).unwrap();
    for n in 0..=10_000 {
        assert_eq!(table.is_prime(n), trial_division(n), "n = {n}");
    }
}

#[test]
fn prime_count_to_one_million() {
    let table = build_prime_table(1_000_000).unwrap();
    assert_eq!(table.count_up_to(1_000_000), 78_498);
    assert_eq!(table.count_up_to(100), 25);
}

/// Smallest diameter over every subset of `[0, D]` containing 0 and `D`.
fn brute_narrowest(k: usize) -> u64 {
    for d in (k as u64 - 1).. {
        let inner = d as u32 - 1;
        for mask in 0u64..(1 << inner) {
            if mask.count_ones() as usize != k - 2 {
                continue;
            }
            let mut shifts = vec![0, d];
            shifts.extend((0..inner).filter(|i| mask >> i & 1 == 1).map(|i| i as u64 + 1));
            if is_admissible(&HTuple::new(shifts).unwrap()).admissible {
                return d;
            }
        }
    }
    unreachable!()
}

#[test]
fn narrowest_search_matches_brute_force() {
    for k in 2..=7 {
        let fast = narrowest_admissible(k, SearchBudget::default()).unwrap();
        assert!(fast.proven_minimal);
        assert_eq!(fast.diameter, brute_narrowest(k), "k = {k}");
    }
}

#[test]
fn remainder_sum_baseline() {
    let table = build_prime_table(10_000).unwrap();
    let max = bv_sum(10_000, 100, &table, RemainderMode::Max).unwrap();
    let sup = bv_sum(10_000, 100, &table, RemainderMode::Sup).unwrap();
    assert!((max - BV_MAX_BASELINE).abs() < 1e-9 * BV_MAX_BASELINE, "{max}");
    assert!((sup - BV_SUP_BASELINE).abs() < 1e-9 * BV_SUP_BASELINE, "{sup}");
}

// Frozen values of the sums at N = 10^4, Q = 100; they guard against regressions.
const BV_MAX_BASELINE: f64 = 4961.627765731255;
const BV_SUP_BASELINE: f64 = 6665.166214662868;

#[test]
fn twin_series_truncation_error_within_tail_bound() {
    let h = HTuple::new(vec![0, 2]).unwrap();
    let coarse = singular_series(&h, 100_000).unwrap();
    let fine = singular_series(&h, 10_000_000).unwrap();
    let drift = (fine.value / coarse.value).ln().abs();
    assert!(drift <= coarse.tail_bound, "{drift} > {}", coarse.tail_bound);
    // 2 * twin prime constant
    assert!((fine.value - 1.320_323_631_693_739).abs() < 1e-6);
}

#[test]
fn binomial_identity_simplest_case() {
    let (lhs, rhs) = identity_812_sides(1, 0, 1);
    assert_eq!(lhs, rhs);
}
