use std::path::PathBuf;
use std::time::Instant;

use primetuples::numerics::{rational_from_decimal, rational_to_f64, Rational};
use primetuples::prime_data::{build_prime_table, bv_sum, PrimeTable, RemainderMode};
use primetuples::reproduce::reproduce_tables;
use primetuples::sieve_weights::{
    first_moment, pair_correlation, rho_statistic, weighted_correlation, MomentPath, MomentReport, WeightSelector,
};
use primetuples::singular_series::{
    gallagher_ratio, min_truncation, singular_series, singular_series_augmented, Convention, TAIL_CONSTANT,
};
use primetuples::thresholds::{
    bessel_table, bessel_threshold, er_bounds, fill_narrowest, k6_closed_form, matrix_table, min_lambda,
    normalized_matrix, table_34, theta_threshold_matrix, thm3_polynomial, z0, z0_residual, Thm3Params,
};
use primetuples::tuples::{is_admissible, narrowest_admissible, HTuple, SearchBudget};
use primetuples::Error;
use serde_json::{json, Value};

use crate::config::{
    Command, ConventionArg, ExperimentConfig, ModeArg, PathArg, ThresholdCommand, TupleCommand, WeightArg,
    DEFAULT_THETAS,
};
use crate::report::{RunReport, Status};

/// Rows of threshold tables get `h(k)` from the exhaustive search up to this size.
const NARROWEST_FILL_MAX_K: u64 = 12;

const TREND_NOTE: &str =
    "main terms are asymptotic; at this scale ratios approach 1 slowly and only trends are meaningful";

struct Outcome {
    results: Value,
    warnings: Vec<String>,
    status: Status,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome { results, warnings: Vec::new(), status: Status::Ok }
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::ResourceLimit(_) => Status::Resource,
        _ => Status::Error,
    }
}

/// Runs the configured command. Library errors become a report with a
/// non-ok status rather than an `Err`.
pub fn run(config: &ExperimentConfig) -> RunReport {
    let start = Instant::now();
    let outcome = dispatch(config);
    let wall = start.elapsed().as_secs_f64();
    let (results, warnings, status, error) = match outcome {
        Ok(o) => (o.results, o.warnings, o.status, None),
        Err(e) => (Value::Null, Vec::new(), status_of(&e), Some(e.to_string())),
    };
    RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        status,
        config: config.clone(),
        results,
        warnings,
        error,
        wall_time_secs: (!config.no_wall_time).then_some(wall),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn tuple(s: &str) -> primetuples::Result<HTuple> {
    s.parse()
}

fn thetas(list: &[String]) -> primetuples::Result<Vec<Rational>> {
    list.iter().map(|s| rational_from_decimal(s.trim())).collect()
}

fn default_thetas() -> Vec<String> {
    DEFAULT_THETAS.split(',').map(String::from).collect()
}

fn cache_path(config: &ExperimentConfig) -> Option<PathBuf> {
    config.cache.as_ref().map(|p| if p.is_dir() { p.join("primes.gpyp") } else { p.clone() })
}

fn prime_table(config: &ExperimentConfig, limit: u64) -> primetuples::Result<PrimeTable> {
    match cache_path(config) {
        Some(path) => PrimeTable::load_or_build(&path, limit.max(2)),
        None => build_prime_table(limit.max(2)),
    }
}

fn moment_path(p: PathArg) -> MomentPath {
    match p {
        PathArg::PerN => MomentPath::PerN,
        PathArg::PerD => MomentPath::PerD,
        PathArg::Both => MomentPath::Both,
    }
}

fn moment_outcome(report: MomentReport) -> Outcome {
    let mut warnings = report.warnings.clone();
    warnings.push(TREND_NOTE.into());
    Outcome { results: to_value(&report), warnings, status: Status::Ok }
}

fn dispatch(config: &ExperimentConfig) -> primetuples::Result<Outcome> {
    match &config.command {
        Command::Tuple { action } => run_tuple(action),
        Command::SingularSeries { tuple: t, trunc, h0 } => {
            let h = tuple(t)?;
            let target = match h0 {
                Some(x) => h.with(*x),
                None => h.clone(),
            };
            let trunc = trunc.unwrap_or_else(|| min_truncation(&target).max(1_000_000));
            let v = match h0 {
                Some(x) => singular_series_augmented(&h, *x, trunc)?,
                None => singular_series(&h, trunc)?,
            };
            let mut results = to_value(&v);
            results["tail_model"] = json!(format!("sum over p > P of {TAIL_CONSTANT} k^2 / p^2 <= {TAIL_CONSTANT} k^2 / (P log P)"));
            Ok(Outcome::ok(results))
        }
        Command::Gallagher { k, h, convention, trunc } => {
            let conv = match convention {
                ConventionArg::Ordered => Convention::Ordered,
                ConventionArg::Unordered => Convention::Unordered,
            };
            let ratio = gallagher_ratio(*k, *h, conv, *trunc)?;
            Ok(Outcome::ok(json!({ "k": k, "h": h, "convention": conv, "truncation": trunc, "ratio": ratio })))
        }
        Command::Moment { tuple: t, n, r, path } => {
            let rep = first_moment(&tuple(t)?, r.resolve(*n), *n, moment_path(*path))?;
            Ok(moment_outcome(rep))
        }
        Command::Correlate { h1, h2, ell1, ell2, n, r, path } => {
            let rep = pair_correlation(&tuple(h1)?, &tuple(h2)?, *ell1, *ell2, r.resolve(*n), *n, moment_path(*path))?;
            Ok(moment_outcome(rep))
        }
        Command::Weighted { h1, h2, ell1, ell2, h0, n, r, path } => {
            let table = prime_table(config, n + h0)?;
            let rep = weighted_correlation(
                &tuple(h1)?,
                &tuple(h2)?,
                *ell1,
                *ell2,
                *h0,
                r.resolve(*n),
                *n,
                &table,
                moment_path(*path),
            )?;
            Ok(moment_outcome(rep))
        }
        Command::Rho { tuple: t, weight, ell, coeffs, n, r } => {
            let h = tuple(t)?;
            let selector = match weight {
                WeightArg::Ell => WeightSelector::Ell { ell: *ell },
                WeightArg::Product => WeightSelector::Product,
                WeightArg::Polynomial => {
                    if coeffs.is_empty() {
                        return Err(Error::InvalidArgument("--weight polynomial needs --coeffs".into()));
                    }
                    WeightSelector::Polynomial { coeffs: coeffs.clone() }
                }
                WeightArg::Constant => WeightSelector::Constant,
            };
            let table = prime_table(config, 2 * n + HTuple::max(&h))?;
            let rep = rho_statistic(&h, &selector, r.resolve(*n), *n, &table)?;
            Ok(Outcome::ok(to_value(&rep)))
        }
        Command::Thresholds { action } => run_thresholds(action),
        Command::BvScan { n, q, mode } => {
            let table = prime_table(config, *n)?;
            let mut rows = Vec::new();
            for &big_q in q {
                let mut row = serde_json::Map::new();
                row.insert("Q".into(), json!(big_q));
                if matches!(mode, ModeArg::Max | ModeArg::Both) {
                    let s = bv_sum(*n, big_q, &table, RemainderMode::Max)?;
                    row.insert("sum_E_max".into(), json!(s));
                    row.insert("sum_E_max_over_N".into(), json!(s / *n as f64));
                }
                if matches!(mode, ModeArg::Sup | ModeArg::Both) {
                    let s = bv_sum(*n, big_q, &table, RemainderMode::Sup)?;
                    row.insert("sum_E_sup".into(), json!(s));
                    row.insert("sum_E_sup_over_N".into(), json!(s / *n as f64));
                }
                rows.push(Value::Object(row));
            }
            Ok(Outcome::ok(json!({ "N": n, "rows": rows })))
        }
        Command::Reproduce => {
            let rep = reproduce_tables()?;
            let status = if rep.all_pass { Status::Ok } else { Status::Mismatch };
            let warnings = rep
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
                .collect();
            Ok(Outcome { results: to_value(&rep), warnings, status })
        }
    }
}

fn run_tuple(action: &TupleCommand) -> primetuples::Result<Outcome> {
    match action {
        TupleCommand::Check { tuple: t } => {
            let h = tuple(t)?;
            let rep = is_admissible(&h);
            let mut results = to_value(&rep);
            results["tuple"] = json!(h);
            results["k"] = json!(h.k());
            results["diameter"] = json!(h.diameter());
            Ok(Outcome::ok(results))
        }
        TupleCommand::Narrowest { k, max_nodes } => {
            let budget = max_nodes.map_or_else(SearchBudget::default, |m| SearchBudget { max_nodes: m });
            let rep = narrowest_admissible(*k, budget)?;
            let mut out = Outcome::ok(to_value(&rep));
            if !rep.proven_minimal {
                out.status = Status::Resource;
                out.warnings.push(format!("node budget exhausted; diameter {} is only an upper bound", rep.diameter));
            }
            Ok(out)
        }
    }
}

fn run_thresholds(action: &ThresholdCommand) -> primetuples::Result<Outcome> {
    match action {
        ThresholdCommand::Table34 { theta } => {
            let mut rows = table_34(&thetas(theta)?);
            fill_narrowest(&mut rows, NARROWEST_FILL_MAX_K);
            Ok(Outcome::ok(json!({ "table": rows })))
        }
        ThresholdCommand::Matrix { k, l, theta } => match (k, l) {
            (Some(k), Some(l)) => {
                let mut results = json!({ "k": k, "L": l, "threshold": theta_threshold_matrix(*k, *l)? });
                if (*k, *l) == (6, 1) {
                    results["closed_form"] = json!(k6_closed_form());
                }
                let mut evals = Vec::new();
                for t in thetas(theta)? {
                    let tf = rational_to_f64(&t);
                    let lam = primetuples::numerics::max_eigenvalue(&normalized_matrix(*k, *l, tf))?;
                    evals.push(json!({ "theta": tf, "normalized_lambda_max": lam, "positive": lam > 0.0 }));
                }
                if !evals.is_empty() {
                    results["eigenvalues"] = Value::Array(evals);
                }
                Ok(Outcome::ok(results))
            }
            _ => {
                let list = if theta.is_empty() { default_thetas() } else { theta.clone() };
                let mut rows = matrix_table(&thetas(&list)?);
                fill_narrowest(&mut rows, NARROWEST_FILL_MAX_K);
                Ok(Outcome::ok(json!({ "table": rows })))
            }
        },
        ThresholdCommand::Bessel { k, theta } => match k {
            Some(k) => Ok(Outcome::ok(json!({ "k": k, "threshold": bessel_threshold(*k)? }))),
            None => {
                let list = if theta.is_empty() { default_thetas() } else { theta.clone() };
                let mut rows = bessel_table(&thetas(&list)?)?;
                fill_narrowest(&mut rows, NARROWEST_FILL_MAX_K);
                Ok(Outcome::ok(json!({ "table": rows })))
            }
        },
        ThresholdCommand::Er { r, theta } => Ok(Outcome::ok(to_value(&er_bounds(*r, *theta)?))),
        ThresholdCommand::Thm3 { nu, theta0, ell, k, x } => {
            let k = k.unwrap_or((ell + 1) * (ell + 1));
            let params = Thm3Params::new(k, *ell, *nu, *theta0)?;
            let mut results = json!({
                "params": params,
                "min_lambda": min_lambda(k, *ell, *nu, *theta0)?,
                "limit": ((*nu as f64).sqrt() - (2.0 * theta0).sqrt()).powi(2),
            });
            if *nu != 2 || *theta0 != 1.0 {
                results["z0"] = json!(z0(*nu, *theta0));
                results["z0_residual"] = json!(z0_residual(*nu, *theta0));
            }
            if let Some(x) = x {
                results["polynomial_at_x"] = json!({ "x": x, "value": thm3_polynomial(&params, *x)? });
            }
            Ok(Outcome::ok(results))
        }
    }
}
