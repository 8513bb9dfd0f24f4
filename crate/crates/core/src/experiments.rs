//! Parameter scans: growth of the quotient along bump families, its
//! boundedness for admissible tuples, and the pointwise-decay and weighted
//! tail ratios.

use std::io::Write;

use num::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactparams::{
    derive, fmt_rational, int, multibump_exponents, serde_rational, theorem_verdicts, to_f64,
    ParamError, ParamTuple, Rational, TheoremVerdict, Thm13Verdict, Thm14Verdict, Thm15Verdict,
};
use crate::functionals::{
    coulomb_energy, quotient_with, sobolev_seminorm, weighted_lq, FunctionalError,
    FunctionalReport, Region,
};
use crate::profiles::{expand_multibump, MultiBumpSpec, ProfileError, RadialProfile};
use crate::quadrature::QuadConfig;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("InsufficientPoints: need at least {need}, got {got}")]
    InsufficientPoints { need: usize, got: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("NotApplicable: {0}")]
    NotApplicable(String),
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanKind {
    SingleBumpR,
    MultiBumpM,
    StraussRatio,
    RuizRatio,
    Boundedness,
}

/// Fixed quantities of a scan; unused fields are ignored by a given kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanBase {
    pub lambda: f64,
    /// Bump width for single-bump families.
    #[serde(rename = "S")]
    pub width: f64,
    /// Base `R` of the multi-bump family; `None` picks 10 or 1/10.
    pub multibump_base: Option<f64>,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(rename = "R0")]
    pub r0: f64,
}

impl Default for ScanBase {
    fn default() -> Self {
        Self { lambda: 1.0, width: 1.0, multibump_base: None, eps: Rational::new(1.into(), 10.into()), r0: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub kind: ScanKind,
    pub params: ParamTuple,
    pub grid: Vec<f64>,
    #[serde(default)]
    pub base: ScanBase,
    #[serde(default)]
    pub quad: QuadConfig,
}

impl ScanSpec {
    pub fn new(kind: ScanKind, params: ParamTuple, grid: Vec<f64>) -> Self {
        Self { kind, params, grid, base: ScanBase::default(), quad: QuadConfig::default() }
    }

    fn validate_grid(&self) -> Result<(), ExperimentError> {
        if self.grid.len() < 4 {
            return Err(ExperimentError::InvalidGrid(format!(
                "need at least 4 grid values, got {}",
                self.grid.len()
            )));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ExperimentError::InvalidGrid("grid must be strictly increasing".into()));
        }
        if self.grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(ExperimentError::InvalidGrid("grid values must be positive".into()));
        }
        Ok(())
    }
}

/// `10^(k/2)` for `k = 2 lo ..= 2 hi`: half-decade steps from `10^lo` to `10^hi`.
pub fn half_decades(lo: i32, hi: i32) -> Vec<f64> {
    (2 * lo..=2 * hi).map(|k| 10f64.powf(k as f64 / 2.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub points: usize,
}

/// Least squares of `ln y` against `ln x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit, ExperimentError> {
    if points.len() < 2 {
        return Err(ExperimentError::InsufficientPoints { need: 2, got: points.len() });
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(ExperimentError::InvalidGrid("x must be strictly increasing".into()));
    }
    if let Some(bad) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && y.is_finite())) {
        return Err(ExperimentError::InvalidGrid(format!(
            "log-log fit needs positive finite values, got ({}, {})",
            bad.0, bad.1
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit { slope, intercept, max_residual, points: logs.len() })
}

/// Fit on the last half of the points (the asymptotic end of a scan).
pub fn fit_last_half(points: &[(f64, f64)]) -> Result<SlopeFit, ExperimentError> {
    fit_slope(&points[points.len() / 2..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredictionKind {
    SingleBumpR,
    MultiBumpM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedExponent {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// Which power count produced the value.
    pub provenance: String,
    /// The power carries an extra logarithmic factor (`alpha = 1`).
    pub log_correction: bool,
}

/// Exact growth exponent of the quotient along a bump family, for tuples
/// where the radial inequality fails.
pub fn predict_exponent(
    params: &ParamTuple,
    kind: PredictionKind,
) -> Result<PredictedExponent, ExperimentError> {
    let derived = derive(params)?;
    let verdict = theorem_verdicts(params)?;
    let d = params.dim();
    let one = Rational::one();
    let b1g = &derived.beta1 * &params.gamma;
    let b2g = &derived.beta2 * &params.gamma;
    let gamma = &params.gamma;
    match kind {
        PredictionKind::SingleBumpR => {
            if params.alpha > one {
                if verdict.thm14 != Thm14Verdict::FailsStrict {
                    return Err(not_applicable("single-bump growth needs the strict radial failure"));
                }
                let index = (&d - &one) * &b1g + (&d + &params.alpha - int(2)) * &b2g;
                Ok(PredictedExponent {
                    value: ((&d - &one) - index) / gamma,
                    provenance: "single bump (1, R, 1), 1 < alpha < d".into(),
                    log_correction: false,
                })
            } else {
                if verdict.thm15 != Thm15Verdict::Fails {
                    return Err(not_applicable("single-bump growth needs beta1 gamma + beta2 gamma < 1"));
                }
                Ok(PredictedExponent {
                    value: (&d - &one) * (&one - &b1g - &b2g) / gamma,
                    provenance: "single bump (1, R, 1), 0 < alpha <= 1".into(),
                    log_correction: params.alpha == one,
                })
            }
        }
        PredictionKind::MultiBumpM => {
            if verdict.thm14 == Thm14Verdict::NotApplicable {
                return Err(not_applicable("multi-bump growth needs a radial failure with 1 < alpha < d"));
            }
            Ok(PredictedExponent {
                value: (&one - &b1g - &b2g) / gamma,
                provenance: "multi-bump sum over m bumps".into(),
                log_correction: false,
            })
        }
    }
}

fn not_applicable(msg: &str) -> ExperimentError {
    ExperimentError::NotApplicable(msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientRow {
    pub scan_var: f64,
    pub report: FunctionalReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub scan_var: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScanRows {
    Quotient { rows: Vec<QuotientRow> },
    Ratio { rows: Vec<RatioRow> },
    Ruiz { plus: Vec<RatioRow>, minus: Vec<RatioRow> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub name: String,
    pub fit: Option<SlopeFit>,
    pub error: Option<String>,
}

impl NamedFit {
    fn new(name: &str, fit: Result<SlopeFit, ExperimentError>) -> Self {
        match fit {
            Ok(f) => Self { name: name.into(), fit: Some(f), error: None },
            Err(e) => Self { name: name.into(), fit: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub params: ParamTuple,
    pub verdicts: Option<TheoremVerdict>,
    pub grid: Vec<f64>,
    pub rows: ScanRows,
    pub fits: Vec<NamedFit>,
    pub predicted: Option<PredictedExponent>,
    pub checks: Vec<ScanCheck>,
    pub passed: bool,
    pub converged: bool,
}

impl ScanResult {
    pub fn fit(&self, name: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.name == name).and_then(|f| f.fit.as_ref())
    }

    pub fn check(&self, name: &str) -> Option<&ScanCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn quotients(&self) -> Vec<f64> {
        match &self.rows {
            ScanRows::Quotient { rows } => rows.iter().map(|r| r.report.quotient).collect(),
            _ => Vec::new(),
        }
    }
}

/// Runs the scan selected by `spec.kind`.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult, ExperimentError> {
    match spec.kind {
        ScanKind::SingleBumpR | ScanKind::MultiBumpM => blowup_scan(spec),
        ScanKind::Boundedness => boundedness_scan(spec),
        ScanKind::StraussRatio => strauss_ratio_scan(spec),
        ScanKind::RuizRatio => ruiz_ratio_scan(spec),
    }
}

fn single_bump(spec: &ScanSpec, r: f64) -> Result<RadialProfile, ExperimentError> {
    Ok(RadialProfile::single(spec.base.lambda, r, spec.base.width)?)
}

fn quotient_rows(
    spec: &ScanSpec,
    profiles: &[RadialProfile],
) -> Result<Vec<QuotientRow>, ExperimentError> {
    let derived = derive(&spec.params)?;
    let reports: Vec<Result<FunctionalReport, FunctionalError>> = profiles
        .par_iter()
        .map(|g| quotient_with(g, &spec.params, &derived, &spec.quad))
        .collect();
    spec.grid
        .iter()
        .zip(reports)
        .map(|(&x, rep)| Ok(QuotientRow { scan_var: x, report: rep? }))
        .collect()
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0])
}

fn points(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    grid.iter().copied().zip(values.iter().copied()).collect()
}

/// Quotient along a family where the inequality fails; the fitted slope on
/// the last half of the grid is compared with the exact prediction.
pub fn blowup_scan(spec: &ScanSpec) -> Result<ScanResult, ExperimentError> {
    spec.validate_grid()?;
    let verdicts = theorem_verdicts(&spec.params)?;
    let (profiles, predicted) = match spec.kind {
        ScanKind::SingleBumpR => {
            let predicted = predict_exponent(&spec.params, PredictionKind::SingleBumpR)?;
            let profiles = spec.grid.iter().map(|&r| single_bump(spec, r)).collect::<Result<Vec<_>, _>>()?;
            (profiles, predicted)
        }
        ScanKind::MultiBumpM => {
            let predicted = predict_exponent(&spec.params, PredictionKind::MultiBumpM)?;
            let xi = multibump_exponents(&spec.params)?;
            let (xi1, xi2) = (to_f64(&xi.xi1), to_f64(&xi.xi2));
            let base = spec.base.multibump_base.unwrap_or(if xi1 < 1.0 { 10.0 } else { 0.1 });
            if spec.grid.iter().any(|m| m.fract() != 0.0) {
                return Err(ExperimentError::InvalidGrid("bump counts must be integers".into()));
            }
            // Disjointness at the largest m covers every smaller m.
            let largest = *spec.grid.last().expect("validated grid") as usize;
            expand_multibump(&MultiBumpSpec { m: largest, base, xi1, xi2 })?;
            let profiles = spec
                .grid
                .iter()
                .map(|&m| {
                    let g = expand_multibump(&MultiBumpSpec { m: m as usize, base, xi1, xi2 })?;
                    Ok(g.scale_amplitude(spec.base.lambda)?)
                })
                .collect::<Result<Vec<_>, ExperimentError>>()?;
            (profiles, predicted)
        }
        other => {
            return Err(ExperimentError::InvalidGrid(format!("{other:?} is not a blow-up scan")))
        }
    };
    let rows = quotient_rows(spec, &profiles)?;
    let q: Vec<f64> = rows.iter().map(|r| r.report.quotient).collect();
    let pts = points(&spec.grid, &q);
    let fit = fit_last_half(&pts);
    let converged = rows.iter().all(|r| r.report.converged());
    let target = to_f64(&predicted.value);

    let mut checks = Vec::new();
    match spec.kind {
        ScanKind::SingleBumpR => {
            let upper = &q[q.len() / 2..];
            checks.push(ScanCheck {
                name: "increasing_upper_half".into(),
                passed: strictly_increasing(upper),
                detail: format!("Q on the last {} grid points", upper.len()),
            });
            let (passed, detail) = match (&fit, predicted.log_correction) {
                (Ok(f), false) => (
                    (f.slope - target).abs() <= 0.25 * target.abs(),
                    format!("slope {:.6} vs predicted {} = {:.6} (+-25%)", f.slope, fmt_rational(&predicted.value), target),
                ),
                (Ok(f), true) => (f.slope > 0.0, format!("slope {:.6} > 0 (log-corrected power)", f.slope)),
                (Err(e), _) => (false, e.to_string()),
            };
            checks.push(ScanCheck { name: "slope_matches_prediction".into(), passed, detail });
        }
        _ => {
            checks.push(ScanCheck {
                name: "increasing_in_m".into(),
                passed: strictly_increasing(&q),
                detail: format!("Q over m = {:?}", spec.grid),
            });
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(ScanResult {
        kind: spec.kind,
        params: spec.params.clone(),
        verdicts: Some(verdicts),
        grid: spec.grid.clone(),
        rows: ScanRows::Quotient { rows },
        fits: vec![NamedFit::new("quotient", fit)],
        predicted: Some(predicted),
        checks,
        passed,
        converged,
    })
}

pub const BOUNDED_SLOPE_TOL: f64 = 0.005;
pub const BOUNDED_SPREAD_TOL: f64 = 1.5;
pub const RATIO_SLOPE_TOL: f64 = 0.01;

/// Quotient over single bumps for a tuple where the inequality holds.
pub fn boundedness_scan(spec: &ScanSpec) -> Result<ScanResult, ExperimentError> {
    spec.validate_grid()?;
    let verdicts = theorem_verdicts(&spec.params)?;
    if !matches!(verdicts.thm13, Thm13Verdict::HoldsStrict | Thm13Verdict::HoldsEquality) {
        return Err(not_applicable("boundedness scan needs a tuple where the radial inequality holds"));
    }
    let profiles = spec.grid.iter().map(|&r| single_bump(spec, r)).collect::<Result<Vec<_>, _>>()?;
    let rows = quotient_rows(spec, &profiles)?;
    let q: Vec<f64> = rows.iter().map(|r| r.report.quotient).collect();
    let fit = fit_last_half(&points(&spec.grid, &q));
    let max = q.iter().copied().fold(f64::MIN, f64::max);
    let min = q.iter().copied().fold(f64::MAX, f64::min);
    let spread = max / min;
    let checks = vec![
        match &fit {
            Ok(f) => ScanCheck {
                name: "flat_slope".into(),
                passed: f.slope.abs() <= BOUNDED_SLOPE_TOL,
                detail: format!("|slope| = {:.6} vs {}", f.slope.abs(), BOUNDED_SLOPE_TOL),
            },
            Err(e) => ScanCheck { name: "flat_slope".into(), passed: false, detail: e.to_string() },
        },
        ScanCheck {
            name: "bounded_spread".into(),
            passed: spread <= BOUNDED_SPREAD_TOL,
            detail: format!("max/min = {spread:.6} vs {BOUNDED_SPREAD_TOL}"),
        },
    ];
    let converged = rows.iter().all(|r| r.report.converged());
    Ok(ScanResult {
        kind: spec.kind,
        params: spec.params.clone(),
        verdicts: Some(verdicts),
        grid: spec.grid.clone(),
        rows: ScanRows::Quotient { rows },
        fits: vec![NamedFit::new("quotient", fit)],
        predicted: None,
        passed: checks.iter().all(|c| c.passed),
        checks,
        converged,
    })
}

/// Radii sampled for the pointwise supremum: 512 per bump plus the center.
pub const STRAUSS_SAMPLES: usize = 512;

/// `sup_r r^((d-sp)/p) |g(r)|` over the sample radii.
pub fn weighted_sup(profile: &RadialProfile, d: u32, s: f64, p: f64) -> f64 {
    let k = (d as f64 - s * p) / p;
    let mut best: f64 = 0.0;
    for b in profile.bumps() {
        let ts = (0..STRAUSS_SAMPLES)
            .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / STRAUSS_SAMPLES as f64)
            .chain(std::iter::once(0.0));
        for t in ts {
            let r = b.radius(t);
            best = best.max(r.powf(k) * b.value_at_local(t));
        }
    }
    best
}

fn ratio_fit_check(name: &str, rows: &[RatioRow], grid: &[f64]) -> (NamedFit, ScanCheck) {
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let fit = fit_slope(&points(grid, &ratios));
    let check = match &fit {
        Ok(f) => ScanCheck {
            name: format!("{name}_flat_slope"),
            passed: f.slope.abs() <= RATIO_SLOPE_TOL,
            detail: format!("|slope| = {:.6} vs {}", f.slope.abs(), RATIO_SLOPE_TOL),
        },
        Err(e) => ScanCheck { name: format!("{name}_flat_slope"), passed: false, detail: e.to_string() },
    };
    (NamedFit::new(name, fit), check)
}

/// Pointwise decay ratio `sup r^((d-sp)/p) |g| / |g|_{W^{s,p}}` over single bumps.
pub fn strauss_ratio_scan(spec: &ScanSpec) -> Result<ScanResult, ExperimentError> {
    spec.validate_grid()?;
    let f = spec.params.as_f64();
    let sp = spec.params.sp();
    if !(sp > Rational::one() && sp < spec.params.dim()) {
        return Err(ExperimentError::PreconditionViolated(format!(
            "needs 1 < sp < d, got sp = {}",
            fmt_rational(&sp)
        )));
    }
    let rows: Vec<Result<RatioRow, ExperimentError>> = spec
        .grid
        .par_iter()
        .map(|&r| {
            let g = single_bump(spec, r)?;
            let num = weighted_sup(&g, f.d, f.s, f.p);
            let den = sobolev_seminorm(&g, f.s, f.p, f.d, &spec.quad)?;
            Ok(RatioRow { scan_var: r, numerator: num, denominator: den.value, ratio: num / den.value, converged: den.converged })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (fit, check) = ratio_fit_check("strauss", &rows, &spec.grid);
    let converged = rows.iter().all(|r| r.converged);
    Ok(ScanResult {
        kind: spec.kind,
        params: spec.params.clone(),
        verdicts: theorem_verdicts(&spec.params).ok(),
        grid: spec.grid.clone(),
        rows: ScanRows::Ratio { rows },
        fits: vec![fit],
        predicted: None,
        passed: check.passed,
        checks: vec![check],
        converged,
    })
}

/// Weighted tail and core ratios against the square root of the energy:
/// `int_{r > R0} |g|^q r^(-(d-alpha)/2 - eps)` and `int_{r < R0} |g|^q r^(-(d-alpha)/2 + eps)`.
pub fn ruiz_ratio_scan(spec: &ScanSpec) -> Result<ScanResult, ExperimentError> {
    spec.validate_grid()?;
    if !spec.base.eps.is_positive() || !(spec.base.r0 > 0.0) {
        return Err(ExperimentError::PreconditionViolated("needs eps > 0 and R0 > 0".into()));
    }
    let f = spec.params.as_f64();
    let eps = to_f64(&spec.base.eps);
    let w0 = (f.d as f64 - f.alpha) / 2.0;
    let rows: Vec<Result<(RatioRow, RatioRow), ExperimentError>> = spec
        .grid
        .par_iter()
        .map(|&r| {
            let g = single_bump(spec, r)?;
            let energy = coulomb_energy(&g, f.q, f.alpha, f.d, &spec.quad)?;
            let den = energy.value.sqrt();
            let plus = weighted_lq(&g, f.q, w0 + eps, Region::OutsideR, spec.base.r0, f.d, &spec.quad);
            let minus = weighted_lq(&g, f.q, w0 - eps, Region::InsideR, spec.base.r0, f.d, &spec.quad);
            let row = |n: &crate::quadrature::QuadResult| RatioRow {
                scan_var: r,
                numerator: n.value,
                denominator: den,
                ratio: n.value / den,
                converged: n.converged && energy.converged,
            };
            Ok((row(&plus), row(&minus)))
        })
        .collect();
    let (plus, minus): (Vec<RatioRow>, Vec<RatioRow>) =
        rows.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().unzip();
    let (fit_plus, check_plus) = ratio_fit_check("ruiz_plus", &plus, &spec.grid);
    let (fit_minus, check_minus) = ratio_fit_check("ruiz_minus", &minus, &spec.grid);
    let converged = plus.iter().chain(&minus).all(|r| r.converged);
    let checks = vec![check_plus, check_minus];
    Ok(ScanResult {
        kind: spec.kind,
        params: spec.params.clone(),
        verdicts: theorem_verdicts(&spec.params).ok(),
        grid: spec.grid.clone(),
        rows: ScanRows::Ruiz { plus, minus },
        fits: vec![fit_plus, fit_minus],
        predicted: None,
        passed: checks.iter().all(|c| c.passed),
        checks,
        converged,
    })
}

/// Floats in outputs carry 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with one row per grid point. Quotient scans use the columns
/// `scan_var, lgamma, seminorm, coulomb, quotient, converged`; ratio scans
/// `scan_var, numerator, denominator, ratio, converged`; the two-sided
/// weighted scan writes both ratios side by side.
pub fn write_csv<W: Write>(result: &ScanResult, out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    match &result.rows {
        ScanRows::Quotient { rows } => {
            w.write_record(["scan_var", "lgamma", "seminorm", "coulomb", "quotient", "converged"])?;
            for r in rows {
                let rep = &r.report;
                w.write_record([
                    fmt_float(r.scan_var),
                    fmt_float(rep.lgamma_norm),
                    fmt_float(rep.seminorm),
                    fmt_float(rep.coulomb_energy),
                    fmt_float(rep.quotient),
                    rep.converged().to_string(),
                ])?;
            }
        }
        ScanRows::Ratio { rows } => {
            w.write_record(["scan_var", "numerator", "denominator", "ratio", "converged"])?;
            for r in rows {
                w.write_record([
                    fmt_float(r.scan_var),
                    fmt_float(r.numerator),
                    fmt_float(r.denominator),
                    fmt_float(r.ratio),
                    r.converged.to_string(),
                ])?;
            }
        }
        ScanRows::Ruiz { plus, minus } => {
            w.write_record([
                "scan_var",
                "plus_numerator",
                "minus_numerator",
                "denominator",
                "ratio_plus",
                "ratio_minus",
                "converged",
            ])?;
            for (p, m) in plus.iter().zip(minus) {
                w.write_record([
                    fmt_float(p.scan_var),
                    fmt_float(p.numerator),
                    fmt_float(m.numerator),
                    fmt_float(p.denominator),
                    fmt_float(p.ratio),
                    fmt_float(m.ratio),
                    (p.converged && m.converged).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// JSON summary: fits, prediction, verdicts and checks, without the rows.
pub fn summary_json(result: &ScanResult) -> serde_json::Value {
    let fits: Vec<serde_json::Value> = result
        .fits
        .iter()
        .map(|f| {
            serde_json::json!({
                "name": f.name,
                "slope": f.fit.map(|x| fmt_float(x.slope)),
                "intercept": f.fit.map(|x| fmt_float(x.intercept)),
                "max_residual": f.fit.map(|x| fmt_float(x.max_residual)),
                "points": f.fit.map(|x| x.points),
                "error": f.error,
            })
        })
        .collect();
    serde_json::json!({
        "kind": result.kind,
        "params": result.params,
        "verdicts": result.verdicts,
        "grid": result.grid.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>(),
        "fits": fits,
        "predicted": result.predicted.as_ref().map(|p| serde_json::json!({
            "value": fmt_rational(&p.value),
            "approx": fmt_float(to_f64(&p.value)),
            "provenance": p.provenance,
            "log_correction": p.log_correction,
        })),
        "checks": result.checks,
        "passed": result.passed,
        "converged": result.converged,
    })
}
