//! Command-line front end. Parameters come from a preset, a JSON config
//! file, or flags, in increasing order of precedence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactparams::{
    classify, derive, epsilon_window, fmt_rational, identity_suite, int, multibump_exponents,
    parse_rational, random_admissible_tuple, rat, theorem_verdicts, to_f64, IdentityStatus,
    ParamError, ParamTuple, Preset, RangeClass, Rational,
};
use crate::experiments::{
    fmt_float, half_decades, run_scan, summary_json, write_csv, ExperimentError, ScanKind,
    ScanSpec,
};
use crate::functionals::{quotient_with, FunctionalError, FunctionalReport};
use crate::profiles::{expand_multibump, BumpSpec, MultiBumpSpec, ProfileError, RadialProfile};
use crate::quadrature::{QuadConfig, QuadResult};

/// Worker threads for the global pool; `0` or unset means one per core.
pub const THREADS_ENV: &str = "GNRAD_THREADS";

pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const INADMISSIBLE: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
    pub const BAD_PROFILE: i32 = 4;
    pub const SCAN_FAILED: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {source}")]
    Config { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

fn param_exit_code(e: &ParamError) -> i32 {
    match e {
        ParamError::InadmissibleBetas { .. } | ParamError::DegenerateD => exit::INADMISSIBLE,
        _ => exit::PARSE,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => exit::PARSE,
            CliError::Params(e) => param_exit_code(e),
            CliError::Profile(_) => exit::BAD_PROFILE,
            CliError::Functional(FunctionalError::TrivialProfile) => exit::BAD_PROFILE,
            CliError::Functional(FunctionalError::Params(e)) => param_exit_code(e),
            CliError::Functional(_) => exit::PARSE,
            CliError::Experiment(e) => match e {
                ExperimentError::Params(e) => param_exit_code(e),
                ExperimentError::NotApplicable(_) | ExperimentError::PreconditionViolated(_) => {
                    exit::INADMISSIBLE
                }
                ExperimentError::Profile(_) | ExperimentError::Functional(FunctionalError::TrivialProfile) => {
                    exit::BAD_PROFILE
                }
                _ => exit::PARSE,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gnrad", version, about = "Radial Gagliardo-Nirenberg parameter algebra and quotient scans")]
#[command(after_help = "Exit codes: 0 ok, 1 parse error, 2 inadmissible tuple or verdict mismatch, \
3 quadrature not converged, 4 trivial or overlapping profile, 5 scan check failed.\n\
Set GNRAD_THREADS to fix the number of worker threads (0 = one per core).")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact derived parameters, range class and theorem verdicts.
    Classify(ClassifyArgs),
    /// Exact identity suite for one tuple or for seeded random tuples.
    Identities(IdentitiesArgs),
    /// Lgamma norm, seminorm, Coulomb energy and quotient of one profile.
    Eval(EvalArgs),
    /// Scaling scan with CSV rows and a JSON summary.
    Scan(ScanArgs),
}

/// Tuple selection. Needs all six of d, s, p, q, alpha, gamma, from
/// `--preset`, the config file or the individual flags.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// JSON config file; flags override its entries.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// lions, case1, case2, thm15, rangeb or rangec.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub gauss_order: Option<usize>,
    #[arg(long)]
    pub panels_per_bump: Option<usize>,
    #[arg(long)]
    pub diagonal_refinement_levels: Option<usize>,
    #[arg(long)]
    pub target_rel_tol: Option<f64>,
    #[arg(long)]
    pub far_pair_cutoff: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Shift for the eps-family checks; default half the window.
    #[arg(long)]
    pub eps: Option<String>,
    /// Check N seeded random admissible tuples instead of one tuple.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Profile JSON file (`{"bumps": [{"lambda", "R", "S"}, ...]}`) or a
    /// built-in name: `single` (bump 1, 10, 1) or `multibump` (four bumps
    /// at base 10 with the tuple's exponents).
    #[arg(long, value_name = "FILE|NAME")]
    pub profile: Option<String>,
    /// Single bump `lambda,R,S`.
    #[arg(long, value_name = "LAMBDA,R,S", conflicts_with = "profile")]
    pub bump: Option<String>,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Also write the report to this file.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    SingleBump,
    MultiBump,
    Strauss,
    Ruiz,
    Bounded,
}

impl From<KindArg> for ScanKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::SingleBump => ScanKind::SingleBumpR,
            KindArg::MultiBump => ScanKind::MultiBumpM,
            KindArg::Strauss => ScanKind::StraussRatio,
            KindArg::Ruiz => ScanKind::RuizRatio,
            KindArg::Bounded => ScanKind::Boundedness,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Scan kind; defaults follow the preset (case1, thm15: single-bump;
    /// case2: multi-bump; lions, rangeb, rangec: bounded).
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Comma-separated grid values (R, or m for multi-bump scans).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Half-decade grid `10^lo ..= 10^hi`, as `lo,hi`.
    #[arg(long, value_name = "LO,HI", conflicts_with = "grid")]
    pub half_decades: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Bump width of single-bump families.
    #[arg(long)]
    pub width: Option<f64>,
    /// Base R of the multi-bump family.
    #[arg(long)]
    pub base: Option<f64>,
    /// Shift of the weighted-ratio exponents.
    #[arg(long)]
    pub eps: Option<String>,
    /// Splitting radius of the weighted ratios.
    #[arg(long)]
    pub r0: Option<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Also write the summary to this file.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Classify,
    Identities,
    Eval,
    Scan,
}

/// Tuple entries as exact rational strings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFields {
    pub d: Option<String>,
    pub s: Option<String>,
    pub p: Option<String>,
    pub q: Option<String>,
    pub alpha: Option<String>,
    pub gamma: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanFields {
    pub kind: Option<KindArg>,
    pub grid: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    #[serde(rename = "S")]
    pub width: Option<f64>,
    pub base: Option<f64>,
    pub eps: Option<String>,
    #[serde(rename = "R0")]
    pub r0: Option<f64>,
}

/// Contents of a `--config` file. Every entry is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// When present it must name the subcommand being run.
    pub command: Option<CommandName>,
    pub preset: Option<String>,
    #[serde(default)]
    pub params: ParamFields,
    pub eps: Option<String>,
    pub random: Option<usize>,
    pub seed: Option<u64>,
    /// Profile JSON path or built-in profile name.
    pub profile: Option<String>,
    pub bump: Option<BumpSpec>,
    #[serde(default)]
    pub scan: ScanFields,
    pub quad: Option<QuadConfig>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Config { path: path.into(), source })
    }
}

fn load_config(args: &ParamArgs, command: CommandName) -> Result<RunConfig, CliError> {
    let Some(path) = &args.config else {
        return Ok(RunConfig::default());
    };
    let cfg = RunConfig::load(path)?;
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::Usage(format!("config is for {c:?}, not {command:?}")));
        }
    }
    Ok(cfg)
}

fn preset(name: &str) -> Result<Preset, CliError> {
    Preset::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        CliError::Usage(format!("unknown preset {name:?}; expected one of {}", names.join(", ")))
    })
}

fn resolve_preset(args: &ParamArgs, cfg: &RunConfig) -> Result<Option<Preset>, CliError> {
    args.preset.as_deref().or(cfg.preset.as_deref()).map(preset).transpose()
}

/// Preset, then config entries, then flags.
pub fn resolve_params(args: &ParamArgs, cfg: &RunConfig) -> Result<ParamTuple, CliError> {
    let base = resolve_preset(args, cfg)?.map(|p| {
        let t = p.params();
        [t.d.to_string(), fmt_rational(&t.s), fmt_rational(&t.p), fmt_rational(&t.q), fmt_rational(&t.alpha), fmt_rational(&t.gamma)]
    });
    let file = &cfg.params;
    let layers = [
        (&args.d, &file.d),
        (&args.s, &file.s),
        (&args.p, &file.p),
        (&args.q, &file.q),
        (&args.alpha, &file.alpha),
        (&args.gamma, &file.gamma),
    ];
    let names = ["d", "s", "p", "q", "alpha", "gamma"];
    let mut values = Vec::with_capacity(6);
    for (i, (flag, from_file)) in layers.into_iter().enumerate() {
        let v = flag
            .clone()
            .or_else(|| from_file.clone())
            .or_else(|| base.as_ref().map(|b| b[i].clone()))
            .ok_or_else(|| CliError::Usage(format!("missing parameter {}; give --{} or --preset", names[i], names[i])))?;
        values.push(v);
    }
    Ok(ParamTuple::parse(&values[0], &values[1], &values[2], &values[3], &values[4], &values[5])?)
}

fn resolve_quad(args: &QuadArgs, cfg: &RunConfig) -> Result<QuadConfig, CliError> {
    let mut q = cfg.quad.unwrap_or_default();
    if let Some(v) = args.gauss_order {
        q.gauss_order = v;
    }
    if let Some(v) = args.panels_per_bump {
        q.panels_per_bump = v;
    }
    if let Some(v) = args.diagonal_refinement_levels {
        q.diagonal_refinement_levels = v;
    }
    if let Some(v) = args.target_rel_tol {
        q.target_rel_tol = v;
    }
    if let Some(v) = args.far_pair_cutoff {
        q.far_pair_cutoff = v;
    }
    q.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(q)
}

/// Result of one command: exit code plus standard-output text.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Identities(a) => cmd_identities(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<Report, CliError> {
    let cfg = load_config(&args.params, CommandName::Classify)?;
    let params = resolve_params(&args.params, &cfg)?;
    let derived = derive(&params)?;
    let range = classify(&params)?;
    let verdicts = theorem_verdicts(&params).ok();
    let out = json!({
        "params": params,
        "D": fmt_rational(&derived.discriminant),
        "beta1": fmt_rational(&derived.beta1),
        "beta2": fmt_rational(&derived.beta2),
        "gamma_rad": fmt_rational(&derived.gamma_rad),
        "gamma_cs": fmt_rational(&derived.gamma_cs),
        "beta_sum_gamma": fmt_rational(&derived.beta_sum_gamma(&params)),
        "radial_index": fmt_rational(&derived.radial_index(&params)),
        "range": range,
        "verdicts": verdicts,
    });
    let code = if range == RangeClass::Inadmissible { exit::INADMISSIBLE } else { exit::OK };
    Ok(Report { code, stdout: pretty(&out) })
}

fn default_eps(params: &ParamTuple) -> Rational {
    epsilon_window(params).map(|(_, bound)| bound / int(2)).unwrap_or_else(|_| rat(1, 100))
}

pub fn cmd_identities(args: &IdentitiesArgs) -> Result<Report, CliError> {
    let cfg = load_config(&args.params, CommandName::Identities)?;
    let eps = args.eps.as_deref().or(cfg.eps.as_deref()).map(parse_rational).transpose()?;
    if let Some(n) = args.random.or(cfg.random) {
        let seed = args.seed.or(cfg.seed).unwrap_or(0);
        let tuples = random_admissible_tuple(seed, n);
        let mut counts: std::collections::BTreeMap<String, [usize; 3]> = Default::default();
        let mut failures = Vec::new();
        for t in &tuples {
            let eps = eps.clone().unwrap_or_else(|| default_eps(t));
            let report = identity_suite(t, &eps);
            for c in &report.checks {
                let slot = counts.entry(c.name.clone()).or_default();
                match &c.status {
                    IdentityStatus::Pass => slot[0] += 1,
                    IdentityStatus::Fail { .. } => {
                        slot[1] += 1;
                        failures.push(json!({ "params": t, "eps": fmt_rational(&eps), "check": c }));
                    }
                    IdentityStatus::Skipped { .. } => slot[2] += 1,
                }
            }
        }
        let per_identity: serde_json::Map<String, Value> = counts
            .into_iter()
            .map(|(k, [pass, fail, skipped])| (k, json!({ "pass": pass, "fail": fail, "skipped": skipped })))
            .collect();
        let all_pass = failures.is_empty();
        let out = json!({
            "seed": seed,
            "tuples": tuples.len(),
            "all_pass": all_pass,
            "identities": per_identity,
            "failures": failures,
        });
        return Ok(Report { code: if all_pass { exit::OK } else { exit::INADMISSIBLE }, stdout: pretty(&out) });
    }
    let params = resolve_params(&args.params, &cfg)?;
    let eps = eps.unwrap_or_else(|| default_eps(&params));
    let report = identity_suite(&params, &eps);
    let mut out = serde_json::to_value(&report).expect("reports serialize");
    out["all_pass"] = json!(report.all_pass());
    Ok(Report { code: if report.all_pass() { exit::OK } else { exit::INADMISSIBLE }, stdout: pretty(&out) })
}

fn parse_bump(text: &str) -> Result<BumpSpec, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--bump expects LAMBDA,R,S, got {text:?}")))?;
    match parts[..] {
        [lambda, center, width] => Ok(BumpSpec::new(lambda, center, width)),
        _ => Err(CliError::Usage(format!("--bump expects three numbers, got {text:?}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    bumps: Vec<BumpSpec>,
}

/// Built-in profile name or JSON file path.
pub fn load_profile(source: &str, params: &ParamTuple) -> Result<RadialProfile, CliError> {
    match source {
        "single" => Ok(RadialProfile::single(1.0, 10.0, 1.0)?),
        "multibump" => {
            let xi = multibump_exponents(params)?;
            Ok(expand_multibump(&MultiBumpSpec { m: 4, base: 10.0, xi1: to_f64(&xi.xi1), xi2: to_f64(&xi.xi2) })?)
        }
        path => {
            let path = Path::new(path);
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
            let file: ProfileFile =
                serde_json::from_str(&text).map_err(|source| CliError::Config { path: path.into(), source })?;
            // Validation after parsing so that bad bumps map to their own exit code.
            Ok(RadialProfile::new(file.bumps)?)
        }
    }
}

fn quad_json(q: &QuadResult) -> Value {
    json!({
        "value": fmt_float(q.value),
        "est_rel_error": fmt_float(q.est_rel_error),
        "converged": q.converged,
    })
}

pub fn report_json(report: &FunctionalReport) -> Value {
    let d = &report.quad_diagnostics;
    json!({
        "lgamma_norm": fmt_float(report.lgamma_norm),
        "seminorm": fmt_float(report.seminorm),
        "coulomb_energy": fmt_float(report.coulomb_energy),
        "quotient": fmt_float(report.quotient),
        "converged": report.converged(),
        "quad_diagnostics": {
            "lgamma": quad_json(&d.lgamma),
            "seminorm": quad_json(&d.seminorm),
            "coulomb": quad_json(&d.coulomb),
        },
    })
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Report, CliError> {
    let cfg = load_config(&args.params, CommandName::Eval)?;
    let params = resolve_params(&args.params, &cfg)?;
    let derived = derive(&params)?;
    if !derived.betas_positive() {
        return Err(ParamError::InadmissibleBetas {
            beta1: fmt_rational(&derived.beta1),
            beta2: fmt_rational(&derived.beta2),
        }
        .into());
    }
    let quad = resolve_quad(&args.quad, &cfg)?;
    let profile = match (&args.bump, &args.profile) {
        (Some(b), _) => RadialProfile::new(vec![parse_bump(b)?])?,
        (None, Some(src)) => load_profile(src, &params)?,
        (None, None) => match (&cfg.bump, &cfg.profile) {
            (Some(b), _) => RadialProfile::new(vec![*b])?,
            (None, Some(src)) => load_profile(src, &params)?,
            (None, None) => load_profile("single", &params)?,
        },
    };
    let report = quotient_with(&profile, &params, &derived, &quad)?;
    let out = json!({
        "params": params,
        "profile": profile,
        "quad": quad,
        "report": report_json(&report),
    });
    let text = pretty(&out);
    if let Some(path) = args.json.as_ref().or(cfg.json.as_ref()) {
        write_file(path, text.as_bytes())?;
    }
    let code = if report.converged() { exit::OK } else { exit::NOT_CONVERGED };
    Ok(Report { code, stdout: text })
}

fn default_kind(preset: Option<Preset>) -> Option<ScanKind> {
    match preset? {
        Preset::Case1 | Preset::Thm15 => Some(ScanKind::SingleBumpR),
        Preset::Case2 => Some(ScanKind::MultiBumpM),
        Preset::Lions | Preset::RangeB | Preset::RangeC => Some(ScanKind::Boundedness),
    }
}

fn default_grid(kind: ScanKind) -> Vec<f64> {
    match kind {
        ScanKind::SingleBumpR | ScanKind::Boundedness => half_decades(2, 5),
        ScanKind::MultiBumpM => (2..=10).map(f64::from).collect(),
        ScanKind::StraussRatio | ScanKind::RuizRatio => half_decades(1, 4),
    }
}

fn parse_half_decades(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--half-decades expects LO,HI, got {text:?}"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
    Ok(half_decades(lo, hi))
}

/// Builds the scan spec from preset, config file and flags.
pub fn resolve_scan(args: &ScanArgs, cfg: &RunConfig) -> Result<ScanSpec, CliError> {
    let params = resolve_params(&args.params, cfg)?;
    let kind = args
        .kind
        .or(cfg.scan.kind)
        .map(ScanKind::from)
        .or_else(|| default_kind(resolve_preset(&args.params, cfg).ok().flatten()))
        .ok_or_else(|| CliError::Usage("missing --kind".into()))?;
    let grid = match (&args.grid, &args.half_decades) {
        (Some(g), _) => g.clone(),
        (None, Some(h)) => parse_half_decades(h)?,
        (None, None) => cfg.scan.grid.clone().unwrap_or_else(|| default_grid(kind)),
    };
    let mut spec = ScanSpec::new(kind, params, grid);
    let f = &cfg.scan;
    if let Some(v) = args.lambda.or(f.lambda) {
        spec.base.lambda = v;
    }
    if let Some(v) = args.width.or(f.width) {
        spec.base.width = v;
    }
    if let Some(v) = args.base.or(f.base) {
        spec.base.multibump_base = Some(v);
    }
    if let Some(v) = args.eps.as_deref().or(f.eps.as_deref()) {
        spec.base.eps = parse_rational(v)?;
    }
    if let Some(v) = args.r0.or(f.r0) {
        spec.base.r0 = v;
    }
    spec.quad = resolve_quad(&args.quad, cfg)?;
    Ok(spec)
}

pub fn cmd_scan(args: &ScanArgs) -> Result<Report, CliError> {
    let cfg = load_config(&args.params, CommandName::Scan)?;
    let spec = resolve_scan(args, &cfg)?;
    let result = run_scan(&spec)?;
    if let Some(path) = args.csv.as_ref().or(cfg.csv.as_ref()) {
        let mut bytes = Vec::new();
        write_csv(&result, &mut bytes)?;
        write_file(path, &bytes)?;
    }
    let text = pretty(&summary_json(&result));
    if let Some(path) = args.json.as_ref().or(cfg.json.as_ref()) {
        write_file(path, text.as_bytes())?;
    }
    let code = if !result.converged {
        exit::NOT_CONVERGED
    } else if !result.passed {
        exit::SCAN_FAILED
    } else {
        exit::OK
    };
    Ok(Report { code, stdout: text })
}

/// Configures the global worker pool from `GNRAD_THREADS`.
pub fn init_threads() -> Result<(), CliError> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

/// Entry point for the binary: runs the command, prints, returns the exit code.
pub fn main_with(cli: &Cli) -> i32 {
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.stdout.as_bytes()).is_err() {
                return exit::PARSE;
            }
            report.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
