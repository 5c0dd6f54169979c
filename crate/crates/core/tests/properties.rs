use std::sync::OnceLock;

use num_traits::ToPrimitive;
use proptest::prelude::*;
use primetuples::numerics::{jacobi_eigen, max_eigenvalue, SymMatrix};
use primetuples::prime_data::{
    bv_sum, build_prime_table, divisor_fn, squarefree_primes, theta_progression, PrimeTable, RemainderMode,
};
use primetuples::sieve_weights::divisor_residue_count;
use primetuples::singular_series::singular_series;
use primetuples::tuples::{delta_product, is_admissible, nu_d, u_bound, HTuple};

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| build_prime_table(20_000).unwrap())
}

fn tuple_strategy(max_k: usize, max_shift: u64) -> impl Strategy<Value = HTuple> {
    prop::collection::btree_set(0..=max_shift, 1..=max_k).prop_map(|s| HTuple::new(s.into_iter().collect()).unwrap())
}

fn squarefree_strategy(max: u64) -> impl Strategy<Value = u64> {
    (1..=max).prop_filter("squarefree", |&d| squarefree_primes(d).is_some())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_count_tracks_density(h in tuple_strategy(5, 40), d in squarefree_strategy(3000), n in 1u64..50_000) {
        let nu = nu_d(&h, d).unwrap();
        let count = divisor_residue_count(&h, d, n).unwrap() as f64;
        let expected = nu as f64 * n as f64 / d as f64;
        prop_assert!((count - expected).abs() <= nu as f64 + 1e-9);
    }

    #[test]
    fn singular_series_is_translation_invariant(h in tuple_strategy(4, 30), c in 0u64..1000) {
        let a = singular_series(&h, 20_000).unwrap();
        let b = singular_series(&h.translated(c), 20_000).unwrap();
        prop_assert_eq!(a.admissible, b.admissible);
        prop_assert!((a.value - b.value).abs() <= 1e-12 * a.value.abs().max(1e-300));
    }

    #[test]
    fn inadmissible_tuples_have_zero_series(h in tuple_strategy(6, 12)) {
        let v = singular_series(&h, 1000).unwrap();
        prop_assert_eq!(v.value == 0.0, !is_admissible(&h).admissible);
    }

    #[test]
    fn eigenvalues_sum_to_trace(entries in prop::collection::vec(-5.0f64..5.0, 1..=36)) {
        let dim = (entries.len() as f64).sqrt() as usize;
        let m = SymMatrix::from_fn(dim, |i, j| entries[i.min(j) * dim + i.max(j)]);
        let eig = jacobi_eigen(&m).unwrap();
        let sum: f64 = eig.iter().sum();
        prop_assert!((sum - m.trace()).abs() <= 1e-10 * (1.0 + m.frobenius()));
        let sq: f64 = eig.iter().map(|x| x * x).sum();
        prop_assert!((sq.sqrt() - m.frobenius()).abs() <= 1e-9 * (1.0 + m.frobenius()));
    }

    #[test]
    fn largest_eigenvalue_of_negation(entries in prop::collection::vec(-5.0f64..5.0, 1..=25)) {
        let dim = (entries.len() as f64).sqrt() as usize;
        let m = SymMatrix::from_fn(dim, |i, j| entries[i.min(j) * dim + i.max(j)]);
        let smallest = jacobi_eigen(&m).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        let neg = max_eigenvalue(&m.negated()).unwrap();
        prop_assert!((neg + smallest).abs() <= 1e-10 * (1.0 + m.frobenius()));
    }

    #[test]
    fn progression_sums_add_up(x in 2u64..20_000, q in 1u64..40) {
        let t = table();
        let total: f64 = (0..q).map(|a| theta_progression(x, q, a, t).unwrap().theta_value).sum();
        let direct: f64 = t.primes_up_to(x).iter().map(|&p| (p as f64).ln()).sum();
        prop_assert!((total - direct).abs() <= 1e-9 * direct.max(1.0));
    }

    #[test]
    fn log_delta_is_bounded_by_u(h in tuple_strategy(8, 500)) {
        prop_assume!(h.k() >= 2);
        let delta = delta_product(&h).unwrap();
        let log_delta = delta.to_f64().map(f64::ln).unwrap_or_else(|| delta.bits() as f64 * std::f64::consts::LN_2);
        prop_assert!(log_delta <= u_bound(&h, 1.0) + 1e-9);
    }

    #[test]
    fn divisor_function_is_multiplicative(a in squarefree_strategy(2000), b in squarefree_strategy(2000), m in 0.5f64..6.0) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let ab = divisor_fn(a * b, m).unwrap().value;
        let prod = divisor_fn(a, m).unwrap().value * divisor_fn(b, m).unwrap().value;
        prop_assert!((ab - prod).abs() <= 1e-12 * ab);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn remainder_sums_grow_with_q(n in 2_000u64..20_000, q1 in 1u64..60, extra in 1u64..40) {
        let t = table();
        let q2 = q1 + extra;
        for mode in [RemainderMode::Max, RemainderMode::Sup] {
            prop_assert!(bv_sum(n, q2, t, mode).unwrap() >= bv_sum(n, q1, t, mode).unwrap());
        }
        let sup = bv_sum(n, q1, t, RemainderMode::Sup).unwrap();
        let max = bv_sum(n, q1, t, RemainderMode::Max).unwrap();
        prop_assert!(sup >= max - 1e-9);
    }
}
