//! Moment and correlation sums of the truncated weights, each computed by a
//! direct per-`n` evaluation and by a divisor-side path, together with the
//! predicted main terms.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::{class_count, roots_for_primes};
use super::{squarefree_upto, truncated_divisor_sum, Factorizer};
use crate::error::{Error, Result};
use crate::numerics::{binomial_f64, factorial_f64, CompensatedSum};
use crate::prime_data::PrimeTable;
use crate::singular_series::{min_truncation, SingularSeriesEvaluator};
use crate::tuples::{residue_count, HTuple};

/// Largest `R` accepted by the divisor-side paths.
pub const MAX_R: f64 = 1e7;

const CHUNK: u64 = 1 << 14;
const SERIES_TRUNCATION: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentPath {
    PerN,
    PerD,
    Both,
}

impl MomentPath {
    fn per_n(self) -> bool {
        matches!(self, MomentPath::PerN | MomentPath::Both)
    }

    fn per_d(self) -> bool {
        matches!(self, MomentPath::PerD | MomentPath::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    FirstMoment,
    PairCorrelation,
    WeightedCorrelation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentParams {
    pub kind: MomentKind,
    pub h1: HTuple,
    pub h2: Option<HTuple>,
    pub ell1: u32,
    pub ell2: u32,
    pub h0: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    NotInH,
    InH1Only,
    InH2Only,
    InBoth,
}

/// Which membership case `h0` falls in, with the matching main-term factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop2Case {
    pub case_id: CaseId,
    #[serde(rename = "C_R")]
    pub c_r: f64,
}

/// Result of a moment experiment. `ratio` divides the per-`n` sum (or the
/// divisor-side sum when only that was computed) by `predicted_main`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R")]
    pub r: f64,
    pub params: MomentParams,
    pub brute_force: Option<f64>,
    pub fast_path: Option<f64>,
    pub predicted_main: f64,
    pub ratio: Option<f64>,
    pub case: Option<Prop2Case>,
    /// Auxiliary quantities, e.g. the singular series used.
    pub details: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl MomentReport {
    /// Relative gap between the two paths, when both ran.
    pub fn path_discrepancy(&self) -> Option<f64> {
        match (self.brute_force, self.fast_path) {
            (Some(a), Some(b)) => Some((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)),
            _ => None,
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 2.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("R = {r} must be at least 2")));
    }
    if r > MAX_R {
        return Err(Error::ResourceLimit(format!("R = {r} exceeds {MAX_R}")));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    Ok(())
}

/// Sum of `f(n)` over `lo..=hi`, chunked in parallel and reduced in order.
fn sum_range<F>(lo: u64, hi: u64, f: F) -> f64
where
    F: Fn(u64, &mut Vec<u64>) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let chunks = (hi - lo) / CHUNK + 1;
    let partial: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK - 1).min(hi);
            let mut buf = Vec::new();
            let mut acc = CompensatedSum::new();
            for n in a..=b {
                acc.add(f(n, &mut buf));
            }
            acc
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partial {
        total.merge(p);
    }
    total.value()
}

/// Values of `Lambda_R(n; H, l)` for `n` in `1..=n_max`, built by adding
/// each divisor's contribution along its residue classes.
fn weight_array(h: &HTuple, ell: u32, r: f64, n_max: u64) -> Vec<f64> {
    let power = h.k() as u32 + ell;
    let norm = factorial_f64(power as u64);
    let ln_r = r.ln();
    let terms: Vec<(u64, f64, Vec<u64>)> = squarefree_upto(r.floor() as u64)
        .into_iter()
        .map(|(d, mu, ps)| {
            let coef = mu as f64 * (ln_r - (d as f64).ln()).powi(power as i32) / norm;
            (d, coef, roots_for_primes(h, &ps))
        })
        .collect();
    let mut out = vec![0.0f64; n_max as usize];
    out.par_chunks_mut(CHUNK as usize).enumerate().for_each(|(c, block)| {
        let lo = 1 + c as u64 * CHUNK;
        let hi = lo + block.len() as u64 - 1;
        for (d, coef, roots) in &terms {
            for &b in roots {
                // First n >= lo with n ≡ b (mod d).
                let mut n = lo + (b + d - lo % d) % d;
                while n <= hi {
                    block[(n - lo) as usize] += coef;
                    n += d;
                }
            }
        }
    });
    out
}

fn series_value(eval: &SingularSeriesEvaluator, h: &HTuple) -> Result<f64> {
    eval.value(h)
}

fn evaluator_for(h: &HTuple) -> Result<SingularSeriesEvaluator> {
    SingularSeriesEvaluator::new(min_truncation(h).max(SERIES_TRUNCATION))
}

fn finish_ratio(report: &mut MomentReport) {
    let observed = report.brute_force.or(report.fast_path);
    report.ratio = match observed {
        Some(v) if report.predicted_main != 0.0 => Some(v / report.predicted_main),
        _ => None,
    };
    if report.predicted_main == 0.0 {
        report.warnings.push("prediction-degenerate: singular series vanishes (inadmissible tuple)".into());
    }
}

/// `sum_{n <= N} Lambda_R(n; H)` (the `l = 0` weight), against `S(H) N`.
pub fn first_moment(h: &HTuple, r: f64, n: u64, path: MomentPath) -> Result<MomentReport> {
    check_r(r)?;
    check_n(n)?;
    let k = h.k() as u32;
    let norm = factorial_f64(k as u64);
    let mut report = MomentReport {
        n,
        r,
        params: MomentParams { kind: MomentKind::FirstMoment, h1: h.clone(), h2: None, ell1: 0, ell2: 0, h0: None },
        brute_force: None,
        fast_path: None,
        predicted_main: 0.0,
        ratio: None,
        case: None,
        details: BTreeMap::new(),
        warnings: Vec::new(),
    };
    if path.per_n() {
        let fac = Factorizer::new(n + h.max())?;
        report.brute_force = Some(sum_range(1, n, |m, buf| {
            fac.tuple_primes(h, m, buf);
            truncated_divisor_sum(buf, r, k) / norm
        }));
    }
    let ln_r = r.ln();
    let divisors = squarefree_upto(r.floor() as u64);
    if path.per_d() {
        let mut acc = CompensatedSum::new();
        for (d, mu, ps) in &divisors {
            let count: u64 = roots_for_primes(h, ps).iter().map(|&b| class_count(b, *d, n)).sum();
            acc.add(*mu as f64 * (ln_r - (*d as f64).ln()).powi(k as i32) * count as f64);
        }
        report.fast_path = Some(acc.value() / norm);
    }
    // N T_R: the count replaced by its density nu_d N / d.
    let mut t_r = CompensatedSum::new();
    for (d, mu, ps) in &divisors {
        let nu: u64 = ps.iter().map(|&p| residue_count(h, p)).product();
        t_r.add(*mu as f64 * nu as f64 / *d as f64 * (ln_r - (*d as f64).ln()).powi(k as i32));
    }
    report.details.insert("density_main_term".into(), n as f64 * t_r.value() / norm);
    let eval = evaluator_for(h)?;
    let s = series_value(&eval, h)?;
    report.details.insert("singular_series".into(), s);
    report.predicted_main = s * n as f64;
    let err = r * (2.0 * ln_r).powi(2 * k as i32);
    if err >= n as f64 {
        report.warnings.push(format!("R (2 log R)^(2k) = {err:.3e} is not small against N = {n}"));
    }
    finish_ratio(&mut report);
    Ok(report)
}

fn pair_prediction(h1: &HTuple, h2: &HTuple, ell1: u32, ell2: u32, r: f64) -> (u32, f64) {
    let overlap = h1.intersection_size(h2) as u32;
    let e = overlap + ell1 + ell2;
    let factor = binomial_f64((ell1 + ell2) as u64, ell1 as u64) * r.ln().powi(e as i32) / factorial_f64(e as u64);
    (overlap, factor)
}

fn check_ells(h1: &HTuple, h2: &HTuple, ell1: u32, ell2: u32) -> Result<()> {
    if ell1 as usize > h1.k() || ell2 as usize > h2.k() {
        return Err(Error::InvalidArgument("each ell must not exceed the size of its tuple".into()));
    }
    Ok(())
}

fn soft_range_warning(report: &mut MomentReport, exponent: f64, log_power: f64, label: &str) {
    let n = report.n as f64;
    let cap = n.powf(exponent) * n.ln().powf(-log_power);
    if report.r > cap {
        report.warnings.push(format!(
            "R = {:.4} exceeds N^{exponent} (log N)^-{log_power} = {cap:.4e}; outside the {label} range",
            report.r
        ));
    }
}

/// `sum_{n <= N} Lambda_R(n; H1, l1) Lambda_R(n; H2, l2)`.
pub fn pair_correlation(
    h1: &HTuple,
    h2: &HTuple,
    ell1: u32,
    ell2: u32,
    r: f64,
    n: u64,
    path: MomentPath,
) -> Result<MomentReport> {
    check_r(r)?;
    check_n(n)?;
    check_ells(h1, h2, ell1, ell2)?;
    let (p1, p2) = (h1.k() as u32 + ell1, h2.k() as u32 + ell2);
    let norm = factorial_f64(p1 as u64) * factorial_f64(p2 as u64);
    let mut report = MomentReport {
        n,
        r,
        params: MomentParams {
            kind: MomentKind::PairCorrelation,
            h1: h1.clone(),
            h2: Some(h2.clone()),
            ell1,
            ell2,
            h0: None,
        },
        brute_force: None,
        fast_path: None,
        predicted_main: 0.0,
        ratio: None,
        case: None,
        details: BTreeMap::new(),
        warnings: Vec::new(),
    };
    if path.per_n() {
        let fac = Factorizer::new(n + h1.max().max(h2.max()))?;
        report.brute_force = Some(sum_range(1, n, |m, buf| {
            fac.tuple_primes(h1, m, buf);
            let a = truncated_divisor_sum(buf, r, p1);
            fac.tuple_primes(h2, m, buf);
            a * truncated_divisor_sum(buf, r, p2) / norm
        }));
    }
    if path.per_d() {
        let w1 = weight_array(h1, ell1, r, n);
        let w2 = if h1 == h2 && ell1 == ell2 { w1.clone() } else { weight_array(h2, ell2, r, n) };
        report.fast_path = Some(w1.iter().zip(&w2).map(|(a, b)| a * b).collect::<CompensatedSum>().value());
    }
    let union = h1.union(h2);
    let eval = evaluator_for(&union)?;
    let s = series_value(&eval, &union)?;
    let (overlap, factor) = pair_prediction(h1, h2, ell1, ell2, r);
    report.details.insert("singular_series".into(), s);
    report.details.insert("r".into(), overlap as f64);
    report.predicted_main = factor * s * n as f64;
    let m = (h1.k() + h2.k()) as f64 + (ell1 + ell2) as f64;
    soft_range_warning(&mut report, 0.5, 4.0 * m, "pair-correlation");
    finish_ratio(&mut report);
    Ok(report)
}

/// Membership case of `h0` and the factor `C_R` multiplying the main term.
pub fn prop2_case(h1: &HTuple, h2: &HTuple, ell1: u32, ell2: u32, h0: u64, r: f64) -> Prop2Case {
    let overlap = h1.intersection_size(h2) as f64;
    let (l1, l2) = (ell1 as f64, ell2 as f64);
    let ln_r = r.ln();
    let denom = overlap + l1 + l2 + 1.0;
    match (h1.contains(h0), h2.contains(h0)) {
        (false, false) => Prop2Case { case_id: CaseId::NotInH, c_r: 1.0 },
        (true, false) => Prop2Case { case_id: CaseId::InH1Only, c_r: (l1 + l2 + 1.0) * ln_r / ((l1 + 1.0) * denom) },
        (false, true) => Prop2Case { case_id: CaseId::InH2Only, c_r: (l1 + l2 + 1.0) * ln_r / ((l2 + 1.0) * denom) },
        (true, true) => Prop2Case {
            case_id: CaseId::InBoth,
            c_r: (l1 + l2 + 2.0) * (l1 + l2 + 1.0) * ln_r / ((l1 + 1.0) * (l2 + 1.0) * denom),
        },
    }
}

fn theta_at(table: &PrimeTable, m: u64) -> f64 {
    if table.is_prime(m) {
        (m as f64).ln()
    } else {
        0.0
    }
}

/// `sum_{n <= N} Lambda_R(n; H1, l1) Lambda_R(n; H2, l2) theta(n + h0)`.
#[allow(clippy::too_many_arguments)]
pub fn weighted_correlation(
    h1: &HTuple,
    h2: &HTuple,
    ell1: u32,
    ell2: u32,
    h0: u64,
    r: f64,
    n: u64,
    table: &PrimeTable,
    path: MomentPath,
) -> Result<MomentReport> {
    check_r(r)?;
    check_n(n)?;
    check_ells(h1, h2, ell1, ell2)?;
    table.check_range("N + h0", n + h0)?;
    let (p1, p2) = (h1.k() as u32 + ell1, h2.k() as u32 + ell2);
    let norm = factorial_f64(p1 as u64) * factorial_f64(p2 as u64);
    let case = prop2_case(h1, h2, ell1, ell2, h0, r);
    let mut report = MomentReport {
        n,
        r,
        params: MomentParams {
            kind: MomentKind::WeightedCorrelation,
            h1: h1.clone(),
            h2: Some(h2.clone()),
            ell1,
            ell2,
            h0: Some(h0),
        },
        brute_force: None,
        fast_path: None,
        predicted_main: 0.0,
        ratio: None,
        case: Some(case),
        details: BTreeMap::new(),
        warnings: Vec::new(),
    };
    if path.per_n() {
        let fac = Factorizer::new(n + h1.max().max(h2.max()))?;
        report.brute_force = Some(sum_range(1, n, |m, buf| {
            let th = theta_at(table, m + h0);
            if th == 0.0 {
                return 0.0;
            }
            fac.tuple_primes(h1, m, buf);
            let a = truncated_divisor_sum(buf, r, p1);
            fac.tuple_primes(h2, m, buf);
            a * truncated_divisor_sum(buf, r, p2) * th / norm
        }));
    }
    if path.per_d() {
        let w1 = weight_array(h1, ell1, r, n);
        let w2 = if h1 == h2 && ell1 == ell2 { w1.clone() } else { weight_array(h2, ell2, r, n) };
        let mut acc = CompensatedSum::new();
        for (i, (a, b)) in w1.iter().zip(&w2).enumerate() {
            let th = theta_at(table, i as u64 + 1 + h0);
            if th != 0.0 {
                acc.add(a * b * th);
            }
        }
        report.fast_path = Some(acc.value());
    }
    let augmented = h1.union(h2).with(h0);
    let eval = evaluator_for(&augmented)?;
    let s = series_value(&eval, &augmented)?;
    let (overlap, factor) = pair_prediction(h1, h2, ell1, ell2, r);
    report.details.insert("singular_series".into(), s);
    report.details.insert("r".into(), overlap as f64);
    report.details.insert("C_R".into(), case.c_r);
    report.predicted_main = case.c_r * factor * s * n as f64;
    soft_range_warning(&mut report, 0.25, 0.0, "prime-weighted correlation");
    finish_ratio(&mut report);
    Ok(report)
}

/// The weight `f_R(n; H)` inside the detector ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WeightSelector {
    /// `Lambda_R(n; H, l)`.
    Ell { ell: u32 },
    /// `prod_i Lambda_R(n + h_i)`.
    Product,
    /// `sum_l b_l (log R)^-l Lambda_R(n; H, l)` with `coeffs[l] = b_l`.
    Polynomial { coeffs: Vec<f64> },
    /// `f = 1`.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R")]
    pub r: f64,
    pub tuple: HTuple,
    pub weight: WeightSelector,
    pub q1: f64,
    pub q2: f64,
    pub rho: f64,
    /// Large-`N` value of `rho` for the weight at this `R`, when known.
    pub predicted: Option<f64>,
    /// `rho > r` for a positive integer `r` certifies some `n` in `(N, 2N]`
    /// with at least `r + 1` prime components; 0 when `rho <= 1`.
    pub certified_primes: u64,
}

/// `rho = Q2 / (Q1 log 3N)` over `n` in `(N, 2N]`.
pub fn rho_statistic(h: &HTuple, weight: &WeightSelector, r: f64, n: u64, table: &PrimeTable) -> Result<RhoReport> {
    check_r(r)?;
    check_n(n)?;
    table.check_range("2N + max shift", 2 * n + h.max())?;
    let k = h.k() as u32;
    let ln_r = r.ln();
    if let WeightSelector::Ell { ell } = weight {
        if *ell > k {
            return Err(Error::InvalidArgument(format!("ell = {ell} exceeds k = {k}")));
        }
    }
    let fac = Factorizer::new(2 * n + h.max())?;
    let f = |m: u64, buf: &mut Vec<u64>| -> f64 {
        match weight {
            WeightSelector::Constant => 1.0,
            WeightSelector::Ell { ell } => {
                fac.tuple_primes(h, m, buf);
                truncated_divisor_sum(buf, r, k + ell) / factorial_f64((k + ell) as u64)
            }
            WeightSelector::Product => h
                .shifts()
                .iter()
                .map(|&s| {
                    buf.clear();
                    fac.push_primes(m + s, buf);
                    truncated_divisor_sum(buf, r, 1)
                })
                .product(),
            WeightSelector::Polynomial { coeffs } => {
                fac.tuple_primes(h, m, buf);
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(l, b)| {
                        let p = k + l as u32;
                        b / ln_r.powi(l as i32) * truncated_divisor_sum(buf, r, p) / factorial_f64(p as u64)
                    })
                    .sum()
            }
        }
    };
    let q1 = sum_range(n + 1, 2 * n, |m, buf| f(m, buf).powi(2));
    let q2 = sum_range(n + 1, 2 * n, |m, buf| {
        let th: f64 = h.shifts().iter().map(|&s| theta_at(table, m + s)).sum();
        if th == 0.0 {
            0.0
        } else {
            th * f(m, buf).powi(2)
        }
    });
    if q1 == 0.0 {
        return Err(Error::DegenerateWeight(format!("Q1 vanishes for weight {weight:?}")));
    }
    let log3n = (3.0 * n as f64).ln();
    let rho = q2 / (q1 * log3n);
    let kf = k as f64;
    let predicted = match weight {
        WeightSelector::Ell { ell } => {
            let l = *ell as f64;
            Some(2.0 * kf * (2.0 * l + 1.0) / ((kf + 2.0 * l + 1.0) * (l + 1.0)) * ln_r / log3n)
        }
        WeightSelector::Product => Some(kf * ln_r / log3n),
        _ => None,
    };
    Ok(RhoReport {
        n,
        r,
        tuple: h.clone(),
        weight: weight.clone(),
        q1,
        q2,
        rho,
        predicted,
        certified_primes: if rho > 1.0 { rho.ceil() as u64 } else { 0 },
    })
}
