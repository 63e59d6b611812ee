//! Configuration files, CSV output and the three commands of the `quflux`
//! binary.
//!
//! A run configuration is a TOML document:
//!
//! ```toml
//! [model]
//! preset = "info-hb"          # a preset or scenario name, or omit and give
//! # modes = ["fermion", "fermion"]      # an inline model instead
//! # terms = [[1.0, "b2+ b1"], ["lambda", "b1+ b2"], [[0.0, 1.0], "b1"]]
//!
//! [model.params]
//! lambda1 = 1.0
//! lambda2 = 2.0
//! lambda3 = 30.0
//!
//! [run]
//! initial = "101"
//! strategy = "normalized"     # unnormalized | heisenberg | normalized
//! t_max = 10.0
//! steps = 401
//!
//! [output]
//! csv = "cycle.csv"
//! ```
//!
//! Term coefficients are a number, a `[re, im]` pair, or the name of an
//! entry in `model.params`.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::catalog::{self, closed_form_strategy, oracle_cases, Params};
use crate::error::{FluxError, Result};
use crate::evolution::{
    maximize_mean, number_observables, run, run_matrix, spectral_bounds, uniform_grid, EvolutionRequest,
    Strategy, TimeSeries, DEFAULT_STEPS, DEFAULT_T_MAX,
};
use crate::hamiltonian::{is_self_adjoint, nilpotency_index, HamiltonianSpec, HamiltonianTerm};
use crate::ladder::{basis_vector, ModeKind, ModeSystem, OccupationState};
use crate::linalg::{matvec, C64};

/// Significant digits printed in CSV output.
pub const CSV_DIGITS: usize = 12;
/// Oracle agreement threshold used by `verify`.
pub const VERIFY_TOL: f64 = 1e-10;
/// Spectral excursions above this count as violations.
pub const BOUND_TOL: f64 = 1e-10;
/// Strategies agreeing within this are reported as equivalent.
pub const AGREEMENT_TOL: f64 = 1e-10;
/// A series moving less than this is frozen.
pub const FROZEN_TOL: f64 = 1e-12;

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const ENGINE: i32 = 2;
    pub const IO: i32 = 3;
}

/// Exit status for an error coming out of a command.
pub fn exit_code(err: &FluxError) -> i32 {
    match err {
        FluxError::Io(_) => exit::IO,
        _ => exit::ENGINE,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: RawModel,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    preset: Option<String>,
    modes: Option<Vec<String>>,
    terms: Option<Vec<(RawCoefficient, String)>>,
    #[serde(default)]
    params: Params,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Real(f64),
    Complex([f64; 2]),
    Param(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    initial: Option<String>,
    strategy: Option<String>,
    t_max: Option<f64>,
    steps: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum ModelSource {
    /// A catalog preset, possibly reached through a scenario name.
    Preset { preset: String, scenario: Option<String> },
    Inline { modes: Vec<ModeKind>, terms: Vec<HamiltonianTerm> },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: ModelSource,
    pub parameters: Params,
    pub initial: OccupationState,
    pub strategy: Strategy,
    pub t_max: f64,
    pub steps: usize,
    pub output: Option<PathBuf>,
    hamiltonian: HamiltonianSpec,
}

impl RunConfig {
    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    /// Short model name for reports.
    pub fn model_name(&self) -> String {
        match &self.model {
            ModelSource::Preset { preset, scenario: Some(s) } => format!("{s} ({preset})"),
            ModelSource::Preset { preset, .. } => preset.clone(),
            ModelSource::Inline { .. } => "inline".into(),
        }
    }

    pub fn request(&self) -> Result<EvolutionRequest> {
        EvolutionRequest::new(self.hamiltonian.clone(), self.initial.clone(), self.strategy)
            .with_grid(self.t_max, self.steps)
    }

    /// Same configuration with the Hamiltonian replaced by `H + H†`.
    pub fn hermitized(&self) -> Self {
        let mut cfg = self.clone();
        cfg.hamiltonian = self.hamiltonian.hermitized();
        cfg
    }
}

fn config_err(field: &str, constraint: impl std::fmt::Display) -> FluxError {
    FluxError::Config(format!("{field}: {constraint}"))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| FluxError::Config(e.message().to_string()))?;
    let RawModel { preset, modes, terms, params: mut parameters } = raw.model;

    let (model, hamiltonian, default_initial) = match (preset, modes, terms) {
        (Some(name), None, None) => {
            let (preset_name, scenario, initial) = match catalog::scenario(&name) {
                Some(s) => {
                    for &(k, v) in s.params {
                        parameters.entry(k.to_string()).or_insert(v);
                    }
                    (s.preset.to_string(), Some(name.clone()), Some(s.initial()))
                }
                None => (name.clone(), None, None),
            };
            let p = catalog::preset(&preset_name, &parameters).map_err(|e| config_err("model.preset", e))?;
            for w in &p.warnings {
                eprintln!("warning: {w}");
            }
            parameters = p.parameters.clone();
            let initial = initial.unwrap_or(p.default_initial.clone());
            (ModelSource::Preset { preset: preset_name, scenario }, p.hamiltonian, Some(initial))
        }
        (None, Some(modes), Some(terms)) => {
            let modes = modes
                .iter()
                .map(|m| m.parse::<ModeKind>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| config_err("model.modes", e))?;
            let system = ModeSystem::new(modes.clone()).map_err(|e| config_err("model.modes", e))?;
            let terms = terms
                .into_iter()
                .enumerate()
                .map(|(k, (coeff, factors))| {
                    let field = format!("model.terms[{k}]");
                    let c = match coeff {
                        RawCoefficient::Real(x) => C64::new(x, 0.0),
                        RawCoefficient::Complex([re, im]) => C64::new(re, im),
                        RawCoefficient::Param(name) => {
                            let v = parameters
                                .get(&name)
                                .ok_or_else(|| config_err(&field, format!("unknown parameter {name:?}")))?;
                            C64::new(*v, 0.0)
                        }
                    };
                    HamiltonianTerm::parse(c, &factors).map_err(|e| config_err(&field, e))
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = HamiltonianSpec::new(system, terms.clone()).map_err(|e| config_err("model.terms", e))?;
            for w in spec.warnings() {
                eprintln!("warning: {w}");
            }
            (ModelSource::Inline { modes, terms }, spec, None)
        }
        (Some(_), _, _) => {
            return Err(config_err("model", "give either model.preset or model.modes with model.terms, not both"))
        }
        _ => return Err(config_err("model", "needs model.preset, or both model.modes and model.terms")),
    };

    let initial = match raw.run.initial {
        Some(s) => s.parse::<OccupationState>().map_err(|e| config_err("run.initial", e))?,
        None => default_initial.ok_or_else(|| config_err("run.initial", "required for inline models"))?,
    };
    hamiltonian.system().validate(&initial).map_err(|e| config_err("run.initial", e))?;

    let strategy = match raw.run.strategy {
        Some(s) => s.parse().map_err(|e| config_err("run.strategy", e))?,
        None => Strategy::Normalized,
    };
    let t_max = raw.run.t_max.unwrap_or(DEFAULT_T_MAX);
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(config_err("run.t_max", format!("must be positive, got {t_max}")));
    }
    let steps = raw.run.steps.unwrap_or(DEFAULT_STEPS as i64);
    if steps < 2 {
        return Err(config_err("run.steps", format!("must be at least 2, got {steps}")));
    }

    Ok(RunConfig {
        model,
        parameters,
        initial,
        strategy,
        t_max,
        steps: steps as usize,
        output: raw.output.csv,
        hamiltonian,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&std::fs::read_to_string(path).map_err(|e| with_path(e, path))?)
}

fn with_path(e: io::Error, path: &Path) -> FluxError {
    FluxError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// `x` with `digits` significant digits, in plain notation for moderate
/// exponents and scientific notation otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Header `t,<labels...>,norm`, then one row per time point.
pub fn write_csv<W: Write>(ts: &TimeSeries, mut out: W) -> io::Result<()> {
    let mut header = String::from("t");
    for label in &ts.labels {
        header.push(',');
        header.push_str(label);
    }
    header.push_str(",norm");
    writeln!(out, "{header}")?;
    for i in 0..ts.len() {
        let mut line = format_sig(ts.times[i], CSV_DIGITS);
        for series in &ts.values {
            line.push(',');
            line.push_str(&format_sig(series[i], CSV_DIGITS));
        }
        line.push(',');
        line.push_str(&format_sig(ts.norms[i], CSV_DIGITS));
        writeln!(out, "{line}")?;
    }
    out.flush()
}

/// Parsed CSV: header labels and numeric rows.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| FluxError::Argument("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| FluxError::Argument(format!("bad CSV value {v:?}"))))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

pub fn simulate(cfg: &RunConfig) -> Result<TimeSeries> {
    run(&cfg.request()?)
}

/// Runs a simulation and writes CSV to `out_override`, else the configured
/// output path, else `stdout`.
pub fn command_simulate<W: Write>(cfg: &RunConfig, out_override: Option<&Path>, stdout: W) -> Result<TimeSeries> {
    let ts = simulate(cfg)?;
    match out_override.or(cfg.output.as_deref()) {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| with_path(e, path))?;
            write_csv(&ts, io::BufWriter::new(file)).map_err(|e| with_path(e, path))?;
        }
        None => write_csv(&ts, stdout)?,
    }
    Ok(ts)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Finding {
    /// Some mean left the spectral range of its observable.
    Unbounded { observable: String, max_violation: f64 },
    /// Nothing moves although the Hamiltonian acts on the initial state.
    Frozen,
    /// Means with a non-negligible imaginary part (real part reported).
    ComplexMeans { max_imag: f64 },
}

impl Finding {
    fn key(&self) -> &'static str {
        match self {
            Finding::Unbounded { .. } => "unbounded",
            Finding::Frozen => "frozen",
            Finding::ComplexMeans { .. } => "complex_means",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StrategyDiagnostics {
    pub strategy: Strategy,
    pub series: TimeSeries,
    pub max_bound_violation: f64,
    pub findings: Vec<Finding>,
}

impl StrategyDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has(&self, key: &str) -> bool {
        self.findings.iter().any(|f| f.key() == key)
    }
}

#[derive(Clone, Debug)]
pub struct Peak {
    pub observable: String,
    pub value: f64,
    pub time: f64,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub model: String,
    pub initial: OccupationState,
    pub self_adjoint: bool,
    pub nilpotency_index: Option<usize>,
    pub acts_on_initial: bool,
    pub strategies: Vec<StrategyDiagnostics>,
    /// `(a, b, max |a − b|)` over every observable and time point.
    pub pairwise: Vec<(Strategy, Strategy, f64)>,
    /// Refined maxima of the normalized means.
    pub peaks: Vec<Peak>,
}

impl ComparisonReport {
    pub fn strategy(&self, s: Strategy) -> &StrategyDiagnostics {
        self.strategies.iter().find(|d| d.strategy == s).expect("all strategies are run")
    }

    pub fn max_pairwise_deviation(&self) -> f64 {
        self.pairwise.iter().map(|p| p.2).fold(0.0, f64::max)
    }

    pub fn peak(&self, observable: &str) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.observable == observable)
    }

    /// Line-oriented `key=value; ...` text.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let nil = self.nilpotency_index.map_or("none".to_string(), |k| k.to_string());
        let _ = writeln!(
            s,
            "model={}; initial={}; self_adjoint={}; nilpotency_index={}; acts_on_initial={}",
            self.model, self.initial, self.self_adjoint, nil, self.acts_on_initial
        );
        for d in &self.strategies {
            if d.findings.is_empty() {
                let _ = writeln!(s, "strategy={}; finding=clean", d.strategy);
            }
            for f in &d.findings {
                match f {
                    Finding::Unbounded { observable, max_violation } => {
                        let _ = writeln!(
                            s,
                            "strategy={}; finding=unbounded; observable={}; max_violation={}",
                            d.strategy,
                            observable,
                            format_sig(*max_violation, 6)
                        );
                    }
                    Finding::Frozen => {
                        let _ = writeln!(s, "strategy={}; finding=frozen", d.strategy);
                    }
                    Finding::ComplexMeans { max_imag } => {
                        let _ = writeln!(
                            s,
                            "strategy={}; finding=complex_means; max_imag={}",
                            d.strategy,
                            format_sig(*max_imag, 6)
                        );
                    }
                }
            }
        }
        for (a, b, dev) in &self.pairwise {
            let _ = writeln!(s, "pair={a}/{b}; max_deviation={}", format_sig(*dev, 6));
        }
        if self.self_adjoint {
            let agree = self.max_pairwise_deviation() <= AGREEMENT_TOL;
            let _ = writeln!(s, "check=self_adjoint_agreement; status={}", if agree { "ok" } else { "FAIL" });
        }
        for p in &self.peaks {
            let _ = writeln!(
                s,
                "strategy=normalized; observable={}; peak={}; t_peak={}",
                p.observable,
                format_sig(p.value, CSV_DIGITS),
                format_sig(p.time, 8)
            );
        }
        s
    }
}

fn series_range(series: &[f64]) -> f64 {
    let first = series[0];
    series.iter().map(|v| (v - first).abs()).fold(0.0, f64::max)
}

/// Runs all three strategies from the same initial state on one grid.
pub fn compare(cfg: &RunConfig) -> Result<ComparisonReport> {
    let spec = &cfg.hamiltonian;
    let h = spec.compile()?;
    let psi0 = basis_vector(spec.system(), &cfg.initial)?;
    let observables = number_observables(spec)?;
    let times = uniform_grid(cfg.t_max, cfg.steps)?;
    let acts_on_initial = matvec(&h, &psi0)?.norm() > FROZEN_TOL;

    let mut strategies = Vec::new();
    for strategy in Strategy::ALL {
        let series = run_matrix(strategy, &h, &psi0, &observables, &times)?;
        let mut findings = Vec::new();
        let mut max_bound_violation = 0.0f64;
        let mut worst: Option<(String, f64)> = None;
        for (obs, values) in observables.iter().zip(&series.values) {
            let (lo, hi) = spectral_bounds(&obs.matrix);
            let v = values.iter().map(|&x| (lo - x).max(x - hi).max(0.0)).fold(0.0, f64::max);
            max_bound_violation = max_bound_violation.max(v);
            if v > BOUND_TOL && worst.as_ref().is_none_or(|w| v > w.1) {
                worst = Some((obs.label.clone(), v));
            }
        }
        if let Some((observable, max_violation)) = worst {
            findings.push(Finding::Unbounded { observable, max_violation });
        }
        let moving = series.values.iter().map(|v| series_range(v)).fold(0.0, f64::max);
        if acts_on_initial && moving <= FROZEN_TOL {
            findings.push(Finding::Frozen);
        }
        let max_imag = series.max_imag.iter().copied().fold(0.0, f64::max);
        if max_imag > crate::evolution::IMAG_TOL {
            findings.push(Finding::ComplexMeans { max_imag });
        }
        strategies.push(StrategyDiagnostics { strategy, series, max_bound_violation, findings });
    }

    let mut pairwise = Vec::new();
    for i in 0..strategies.len() {
        for j in i + 1..strategies.len() {
            let dev = strategies[i]
                .series
                .values
                .iter()
                .zip(&strategies[j].series.values)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            pairwise.push((strategies[i].strategy, strategies[j].strategy, dev));
        }
    }

    let mut peaks = Vec::new();
    for obs in &observables {
        let (time, value) = maximize_mean(Strategy::Normalized, &h, &psi0, &obs.matrix, 0.0, cfg.t_max, cfg.steps)?;
        peaks.push(Peak { observable: obs.label.clone(), value, time });
    }

    Ok(ComparisonReport {
        model: cfg.model_name(),
        initial: cfg.initial.clone(),
        self_adjoint: is_self_adjoint(&h, 1e-12)?,
        nilpotency_index: nilpotency_index(&h),
        acts_on_initial,
        strategies,
        pairwise,
        peaks,
    })
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Keep only cases whose model name starts with this.
    pub filter: Option<String>,
    /// Negative control: flip the sign of every oracle value.
    pub inject_fault: bool,
    pub t_max: f64,
    pub steps: usize,
}

impl VerifyOptions {
    pub fn new() -> Self {
        Self { filter: None, inject_fault: false, t_max: DEFAULT_T_MAX, steps: DEFAULT_STEPS }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub label: String,
    pub max_deviation: f64,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        self.max_deviation <= VERIFY_TOL
    }
}

#[derive(Clone, Debug)]
pub struct VerifySummary {
    pub rows: Vec<VerifyRow>,
}

impl VerifySummary {
    pub fn failures(&self) -> Vec<&VerifyRow> {
        self.rows.iter().filter(|r| !r.passed()).collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures().is_empty() {
            exit::OK
        } else {
            exit::VERIFY_FAILED
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "pair={}; max_deviation={}; status={}",
                r.label,
                format_sig(r.max_deviation, 4),
                if r.passed() { "ok" } else { "FAIL" }
            );
        }
        let failures = self.failures();
        let _ = writeln!(s, "{} pairs; {} failed; tolerance={:e}", self.rows.len(), failures.len(), VERIFY_TOL);
        for f in failures {
            let _ = writeln!(s, "failed: {}", f.label);
        }
        s
    }
}

/// Runs the engine against every closed form in the catalog.
pub fn verify(options: &VerifyOptions) -> Result<VerifySummary> {
    let times = uniform_grid(options.t_max, options.steps)?;
    let mut rows = Vec::new();
    for case in oracle_cases() {
        if let Some(f) = &options.filter {
            if !case.model.starts_with(f.as_str()) {
                continue;
            }
        }
        let p = catalog::preset(case.model, &case.params())?;
        let initial: OccupationState = case.initial.parse()?;
        let req = EvolutionRequest::new(p.hamiltonian, initial.clone(), case.strategy).with_times(times.clone());
        let ts = run(&req)?;
        let mut max_deviation = 0.0f64;
        for (i, &t) in times.iter().enumerate() {
            let mut expected = closed_form_strategy(case.model, &initial, &case.params(), case.strategy, t)?;
            if options.inject_fault {
                expected.iter_mut().for_each(|v| *v = -*v);
            }
            for (got, want) in ts.row(i).iter().zip(&expected) {
                max_deviation = max_deviation.max((got - want).abs());
            }
        }
        rows.push(VerifyRow { label: case.label(), max_deviation });
    }
    Ok(VerifySummary { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model1_preset_config() {
        let cfg = parse_config(
            r#"
            [model]
            preset = "model1"
            [model.params]
            lambda = 1.0
            [run]
            initial = "10"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.strategy, Strategy::Normalized);
        assert_eq!(cfg.t_max, 10.0);
        assert_eq!(cfg.steps, 401);
        assert_eq!(cfg.initial.to_string(), "10");
        assert_eq!(cfg.parameters["lambda"], 1.0);
        assert!(cfg.output.is_none());
    }

    #[test]
    fn occupation_beyond_levels_is_rejected() {
        let err = parse_config("[model]\npreset = \"model1\"\n[run]\ninitial = \"20\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("run.initial") && msg.contains("below"), "{msg}");
        let err = parse_config("[model]\npreset = \"model1\"\n[run]\ninitial = \"100\"\n").unwrap_err();
        assert!(err.to_string().contains("run.initial"));
    }

    #[test]
    fn scenario_name_config() {
        let cfg = parse_config(
            r#"
            [model]
            preset = "info-hb"
            params = { lambda1 = 1, lambda2 = 2, lambda3 = 30 }
            [run]
            initial = "101"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.parameters["lambda3"], 30.0);
        let by_name = parse_config("[model]\npreset = \"cycle-1-2-30\"\n").unwrap();
        assert_eq!(by_name.parameters, cfg.parameters);
        assert_eq!(by_name.initial, cfg.initial);
        assert_eq!(by_name.hamiltonian().compile().unwrap(), cfg.hamiltonian().compile().unwrap());
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_config("[model]\npreset = \"model1\"\n[run]\nt_mx = 3\n").unwrap_err();
        assert!(err.to_string().contains("t_mx"), "{err}");
        let err = parse_config("[model]\npreset = \"model1\"\ncolour = 1\n").unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err = parse_config("[model]\npreset = \"model1\"\n[model.params]\nnu = 1\n").unwrap_err();
        assert!(err.to_string().contains("nu"), "{err}");
    }

    #[test]
    fn run_invariants() {
        let base = "[model]\npreset = \"model1\"\n[run]\n";
        assert!(parse_config(&format!("{base}steps = 1\n")).unwrap_err().to_string().contains("run.steps"));
        assert!(parse_config(&format!("{base}t_max = 0\n")).unwrap_err().to_string().contains("run.t_max"));
        assert!(parse_config(&format!("{base}strategy = \"magic\"\n")).unwrap_err().to_string().contains("run.strategy"));
        assert!(parse_config("[run]\nsteps = 3\n").is_err());
    }

    #[test]
    fn inline_model_config() {
        let cfg = parse_config(
            r#"
            [model]
            modes = ["fermion", "fermion"]
            terms = [["lambda", "a2+ a1"], [[0.0, 0.5], "a1+ a2"]]
            params = { lambda = 2.0 }
            [run]
            initial = "10"
            strategy = "unnormalized"
            t_max = 2
            steps = 5
            [output]
            csv = "out.csv"
            "#,
        )
        .unwrap();
        let h = cfg.hamiltonian().compile().unwrap();
        assert_eq!(h[(2, 1)], C64::new(2.0, 0.0));
        assert_eq!(h[(1, 2)], C64::new(0.0, 0.5));
        assert_eq!(cfg.output.as_deref(), Some(Path::new("out.csv")));
        assert_eq!(cfg.strategy, Strategy::Unnormalized);

        let missing = "[model]\nmodes = [\"fermion\"]\nterms = [[\"g\", \"b1\"]]\n[run]\ninitial = \"0\"\n";
        assert!(parse_config(missing).unwrap_err().to_string().contains("model.terms[0]"));
        let both = "[model]\npreset = \"model1\"\nmodes = [\"fermion\"]\nterms = []\n";
        assert!(parse_config(both).is_err());
        let no_initial = "[model]\nmodes = [\"fermion\"]\nterms = [[1, \"b1+ b1\"]]\n";
        assert!(parse_config(no_initial).unwrap_err().to_string().contains("run.initial"));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(-123456.789, 12), "-123456.789");
        assert_eq!(format_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_sig(6.02214076e23, 12), "6.02214076e23");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(format_sig(0.000123, 12), "0.000123");
    }

    #[test]
    fn verify_with_empty_filter_has_no_pairs() {
        let mut opts = VerifyOptions::new();
        opts.filter = Some("nothing-matches".into());
        let summary = verify(&opts).unwrap();
        assert!(summary.rows.is_empty());
        assert_eq!(summary.exit_code(), exit::OK);
        assert!(summary.render().contains("0 pairs"));
    }

    #[test]
    fn exit_codes_for_errors() {
        assert_eq!(exit_code(&FluxError::Io(io::Error::other("disk"))), exit::IO);
        assert_eq!(exit_code(&FluxError::Validation("x".into())), exit::ENGINE);
    }
}
