//! Named model presets and their closed-form mean-value curves.
//!
//! | preset      | modes            | Hamiltonian                                  |
//! |-------------|------------------|----------------------------------------------|
//! | `model1`    | 2 fermions       | `λ a2† a1`                                   |
//! | `model2`    | 2 three-level    | `λ A2† A1`                                   |
//! | `model3-h1` | 3 fermions       | `λ b1† b2 + μ b1† b3`                        |
//! | `model3-h2` | 3 fermions       | `λ b1† b2 + μ b2† b3`                        |
//! | `info-ha`   | 3 fermions       | `b2† b1 + b3† b2 + b1† b3`                   |
//! | `info-hb`   | 3 fermions       | `λ1 b2† b1 + λ2 b3† b2 + λ3 b1† b3`          |
//!
//! Closed forms are for the normalized strategy unless stated otherwise.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{FluxError, Result};
use crate::evolution::{run, EvolutionRequest, Strategy};
use crate::hamiltonian::{HamiltonianSpec, HamiltonianTerm, LadderFactor};
use crate::ladder::{ModeSystem, OccupationState};
use crate::linalg::C64;

pub type Params = BTreeMap<String, f64>;

pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

pub const PRESET_NAMES: [&str; 6] = ["model1", "model2", "model3-h1", "model3-h2", "info-ha", "info-hb"];

#[derive(Clone, Debug)]
pub struct ModelPreset {
    pub name: String,
    pub system: ModeSystem,
    pub hamiltonian: HamiltonianSpec,
    pub parameters: Params,
    pub default_initial: OccupationState,
    /// Non-fatal remarks such as non-positive parameters.
    pub warnings: Vec<String>,
}

fn parameter_defaults(name: &str) -> Option<&'static [(&'static str, f64)]> {
    Some(match name {
        "model1" | "model2" => &[("lambda", 1.0)],
        "model3-h1" | "model3-h2" => &[("lambda", 1.0), ("mu", 1.0)],
        "info-ha" => &[],
        "info-hb" => &[("lambda1", 1.0), ("lambda2", 2.0), ("lambda3", 3.0)],
        _ => return None,
    })
}

fn resolve_params(name: &str, given: &Params) -> Result<(Params, Vec<String>)> {
    let defaults =
        parameter_defaults(name).ok_or_else(|| FluxError::Argument(format!("unknown preset {name:?}")))?;
    let mut resolved: Params = defaults.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    for (key, &value) in given {
        if !resolved.contains_key(key) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(FluxError::Argument(format!(
                "preset {name} has no parameter {key:?} (known: {})",
                if known.is_empty() { "none".to_string() } else { known.join(", ") }
            )));
        }
        if !value.is_finite() {
            return Err(FluxError::Argument(format!("parameter {key} = {value} is not finite")));
        }
        resolved.insert(key.clone(), value);
    }
    let warnings = resolved
        .iter()
        .filter(|(_, &v)| v <= 0.0)
        .map(|(k, v)| format!("parameter {k} = {v} is not positive"))
        .collect();
    Ok((resolved, warnings))
}

fn monomial(coefficient: f64, factors: &[LadderFactor]) -> HamiltonianTerm {
    HamiltonianTerm::new(C64::new(coefficient, 0.0), factors.to_vec()).expect("non-empty factor list")
}

fn hop(coefficient: f64, to: usize, from: usize) -> HamiltonianTerm {
    monomial(coefficient, &[LadderFactor::create(to), LadderFactor::annihilate(from)])
}

pub fn preset(name: &str, given: &Params) -> Result<ModelPreset> {
    let (p, warnings) = resolve_params(name, given)?;
    let g = |k: &str| p[k];
    let (system, terms, initial) = match name {
        "model1" => (ModeSystem::fermions(2)?, vec![hop(g("lambda"), 2, 1)], "10"),
        "model2" => (ModeSystem::bosons(2, 3)?, vec![hop(g("lambda"), 2, 1)], "11"),
        "model3-h1" => (
            ModeSystem::fermions(3)?,
            vec![hop(g("lambda"), 1, 2), hop(g("mu"), 1, 3)],
            "011",
        ),
        "model3-h2" => (
            ModeSystem::fermions(3)?,
            vec![hop(g("lambda"), 1, 2), hop(g("mu"), 2, 3)],
            "001",
        ),
        "info-ha" => (ModeSystem::fermions(3)?, vec![hop(1.0, 2, 1), hop(1.0, 3, 2), hop(1.0, 1, 3)], "100"),
        "info-hb" => (
            ModeSystem::fermions(3)?,
            vec![hop(g("lambda1"), 2, 1), hop(g("lambda2"), 3, 2), hop(g("lambda3"), 1, 3)],
            "101",
        ),
        _ => unreachable!("resolve_params rejects unknown names"),
    };
    let hamiltonian = HamiltonianSpec::new(system.clone(), terms)?;
    Ok(ModelPreset {
        name: name.to_string(),
        system,
        hamiltonian,
        parameters: p,
        default_initial: initial.parse()?,
        warnings,
    })
}

/// A preset with fixed parameters and initial state, reproducible by name.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub preset: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub initial: &'static str,
    pub description: &'static str,
}

pub const SCENARIOS: [Scenario; 4] = [
    Scenario {
        name: "homogenize",
        preset: "info-ha",
        params: &[],
        initial: "100",
        description: "isotropic cycle from one informed agent; homogenizes to 1/3",
    },
    Scenario {
        name: "cycle-1-2-3",
        preset: "info-hb",
        params: &[("lambda1", 1.0), ("lambda2", 2.0), ("lambda3", 3.0)],
        initial: "101",
        description: "anisotropic cycle, mildly different rates",
    },
    Scenario {
        name: "cycle-1-2-30",
        preset: "info-hb",
        params: &[("lambda1", 1.0), ("lambda2", 2.0), ("lambda3", 30.0)],
        initial: "101",
        description: "anisotropic cycle; agents 2 and 3 swap their ordering",
    },
    Scenario {
        name: "cycle-1-28-30",
        preset: "info-hb",
        params: &[("lambda1", 1.0), ("lambda2", 28.0), ("lambda3", 30.0)],
        initial: "101",
        description: "anisotropic cycle, two fast channels",
    },
];

pub fn scenario(name: &str) -> Option<Scenario> {
    SCENARIOS.iter().copied().find(|s| s.name == name)
}

impl Scenario {
    pub fn preset(&self) -> Result<ModelPreset> {
        preset(self.preset, &params(self.params))
    }

    pub fn initial(&self) -> OccupationState {
        self.initial.parse().expect("scenario fixtures use valid occupation strings")
    }
}

/// `(stay, next, after-next)` occupation of the isotropic cycle started
/// with a single quantum, normalized. The Hamiltonian restricted to the
/// one-quantum sector is the cyclic shift, diagonalized by the cube roots of
/// unity.
fn cycle_single_quantum(t: f64) -> [f64; 3] {
    let a = 3f64.sqrt() * t / 2.0;
    let b = 1.5 * t;
    // Numerator and denominator both divided by e^{2a}.
    let e1 = (-a).exp();
    let e2 = e1 * e1;
    let den = 3.0 * (e2 + 1.0 + e2 * e2);
    let mut out = [0.0; 3];
    for (r, slot) in out.iter_mut().enumerate() {
        let phase = 2.0 * PI * r as f64 / 3.0;
        let num = e2 + 1.0 + e2 * e2
            + 2.0 * e1 * (b - phase).cos()
            + 2.0 * e1 * e2 * (b - 2.0 * phase).cos()
            + 2.0 * e2 * phase.cos();
        *slot = num / den;
    }
    out
}

/// Squared norm of the evolved state for the isotropic cycle from a
/// single quantum: `(1 + 2 cosh(√3 t)) / 3`.
pub fn cycle_norm_sqr(t: f64) -> f64 {
    (1.0 + 2.0 * (3f64.sqrt() * t).cosh()) / 3.0
}

fn unsupported(name: &str, initial: &OccupationState) -> FluxError {
    FluxError::Unsupported(format!("no closed form for {name} from {initial}"))
}

fn constant(initial: &OccupationState) -> Vec<f64> {
    initial.occupations().iter().map(|&n| n as f64).collect()
}

/// Normalized-strategy means `(n_1, ..., n_M)` at time `t`.
pub fn closed_form(name: &str, initial: &OccupationState, given: &Params, t: f64) -> Result<Vec<f64>> {
    let (p, _) = resolve_params(name, given)?;
    let label = initial.to_string();
    let l = p.get("lambda").copied().unwrap_or(0.0);
    let m = p.get("mu").copied().unwrap_or(0.0);
    Ok(match (name, label.as_str()) {
        ("model1", "10") => {
            let x = (l * t).powi(2);
            vec![1.0 / (1.0 + x), x / (1.0 + x)]
        }
        ("model1", "00" | "01" | "11") => constant(initial),
        ("model2", "11") => {
            let x = l * l * t * t;
            vec![1.0 / (1.0 + 2.0 * x), (1.0 + 4.0 * x) / (1.0 + 2.0 * x)]
        }
        ("model2", "21") => {
            let x = l * l * t * t;
            vec![(2.0 + 4.0 * x) / (1.0 + 4.0 * x), (1.0 + 8.0 * x) / (1.0 + 4.0 * x)]
        }
        ("model2", "00") => constant(initial),
        ("model3-h1", "011") => {
            let s = (m * m + l * l) * t * t;
            let d = 1.0 + s;
            vec![s / d, (1.0 + m * m * t * t) / d, (1.0 + l * l * t * t) / d]
        }
        ("model3-h1", "010") | ("model3-h2", "010") => {
            let x = (l * t).powi(2);
            vec![x / (1.0 + x), 1.0 / (1.0 + x), 0.0]
        }
        ("model3-h1", "000" | "110" | "101" | "100" | "111") => constant(initial),
        ("model3-h2", "001") => {
            let q = l * l * m * m * t.powi(4) / 4.0;
            let d = 1.0 + m * m * t * t + q;
            vec![q / d, m * m * t * t / d, 1.0 / d]
        }
        ("model3-h2", "000" | "100" | "110" | "111") => constant(initial),
        ("info-ha", "100") => cycle_single_quantum(t).to_vec(),
        ("info-ha", "010") => {
            let [s0, s1, s2] = cycle_single_quantum(t);
            vec![s2, s0, s1]
        }
        ("info-ha", "001") => {
            let [s0, s1, s2] = cycle_single_quantum(t);
            vec![s1, s2, s0]
        }
        ("info-ha", "000" | "111") => constant(initial),
        _ => return Err(unsupported(name, initial)),
    })
}

/// Closed forms for any strategy. Only the two-fermion flux model has
/// closed forms for the unnormalized and Heisenberg strategies.
pub fn closed_form_strategy(
    name: &str,
    initial: &OccupationState,
    given: &Params,
    strategy: Strategy,
    t: f64,
) -> Result<Vec<f64>> {
    if strategy == Strategy::Normalized {
        return closed_form(name, initial, given, t);
    }
    if name != "model1" {
        return Err(unsupported(name, initial));
    }
    let (p, _) = resolve_params(name, given)?;
    let l = p["lambda"];
    match (initial.to_string().as_str(), strategy) {
        ("10", Strategy::Unnormalized) => Ok(vec![1.0, (l * t).powi(2)]),
        ("10", Strategy::HeisenbergNaive) => Ok(vec![1.0, 0.0]),
        ("00" | "01" | "11", _) => Ok(constant(initial)),
        _ => Err(unsupported(name, initial)),
    }
}

/// Settings for the numerical plateau estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct PlateauConfig {
    /// Largest allowed `|n_j(T) − n_j(window·T)|`.
    pub tolerance: f64,
    pub window: f64,
    /// Horizons `T` tried in order until a plateau shows up.
    pub horizons: Vec<f64>,
}

impl Default for PlateauConfig {
    fn default() -> Self {
        Self { tolerance: 1e-6, window: 0.9, horizons: vec![10.0, 20.0, 40.0, 80.0] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AsymptoteMethod {
    ClosedFormLimit,
    Plateau { t_max: f64, drift: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoteReport {
    pub values: Vec<f64>,
    pub converged: bool,
    pub method: AsymptoteMethod,
}

fn closed_form_limit(name: &str, initial: &OccupationState, p: &Params) -> Option<Vec<f64>> {
    if p.values().any(|&v| v <= 0.0) {
        return None;
    }
    let label = initial.to_string();
    let l = p.get("lambda").copied().unwrap_or(0.0);
    let m = p.get("mu").copied().unwrap_or(0.0);
    Some(match (name, label.as_str()) {
        ("model1", "10") => vec![0.0, 1.0],
        ("model2", "11") => vec![0.0, 2.0],
        ("model2", "21") => vec![1.0, 2.0],
        ("model3-h1", "011") => vec![1.0, m * m / (m * m + l * l), l * l / (m * m + l * l)],
        ("model3-h1" | "model3-h2", "010") | ("model3-h2", "001") => vec![1.0, 0.0, 0.0],
        ("info-ha", "100" | "010" | "001") => vec![1.0 / 3.0; 3],
        _ => {
            // Pairs whose closed form is constant.
            let t_probe = 1.0;
            let c = closed_form(name, initial, p, t_probe).ok()?;
            if c == constant(initial) {
                c
            } else {
                return None;
            }
        }
    })
}

pub fn asymptote(name: &str, initial: &OccupationState, given: &Params) -> Result<AsymptoteReport> {
    asymptote_with(name, initial, given, &PlateauConfig::default())
}

/// Long-time means: the exact limit when a closed form is known, otherwise
/// a plateau estimate from the engine. A missing plateau is reported with
/// `converged = false`, not as an error.
pub fn asymptote_with(
    name: &str,
    initial: &OccupationState,
    given: &Params,
    config: &PlateauConfig,
) -> Result<AsymptoteReport> {
    let model = preset(name, given)?;
    model.system.validate(initial)?;
    if let Some(values) = closed_form_limit(name, initial, &model.parameters) {
        return Ok(AsymptoteReport { values, converged: true, method: AsymptoteMethod::ClosedFormLimit });
    }
    plateau(&model, initial, config)
}

pub fn plateau(model: &ModelPreset, initial: &OccupationState, config: &PlateauConfig) -> Result<AsymptoteReport> {
    if config.horizons.is_empty() || !(config.window > 0.0 && config.window < 1.0) {
        return Err(FluxError::Argument("plateau needs horizons and a window in (0, 1)".into()));
    }
    let mut last = None;
    for &t_max in &config.horizons {
        let req = EvolutionRequest::new(model.hamiltonian.clone(), initial.clone(), Strategy::Normalized)
            .with_times(vec![config.window * t_max, t_max]);
        let ts = run(&req)?;
        let end = ts.row(1);
        let drift = ts.row(0).iter().zip(&end).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let report = AsymptoteReport {
            values: end,
            converged: drift < config.tolerance,
            method: AsymptoteMethod::Plateau { t_max, drift },
        };
        if report.converged {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one horizon"))
}

/// One closed-form curve that the engine must reproduce.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub model: &'static str,
    pub initial: &'static str,
    pub strategy: Strategy,
    pub params: Vec<(&'static str, f64)>,
}

impl OracleCase {
    fn new(model: &'static str, initial: &'static str, strategy: Strategy, params: &[(&'static str, f64)]) -> Self {
        Self { model, initial, strategy, params: params.to_vec() }
    }

    pub fn label(&self) -> String {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let base = format!("{}/{}/{}", self.model, self.initial, self.strategy);
        if ps.is_empty() {
            base
        } else {
            format!("{base}[{}]", ps.join(","))
        }
    }

    pub fn params(&self) -> Params {
        params(&self.params)
    }
}

/// Every `(model, initial, strategy, parameters)` combination with a
/// closed form.
pub fn oracle_cases() -> Vec<OracleCase> {
    use Strategy::*;
    let mut cases = Vec::new();
    for lambda in [0.5, 1.0, 2.0] {
        let p = [("lambda", lambda)];
        for strategy in Strategy::ALL {
            cases.push(OracleCase::new("model1", "10", strategy, &p));
        }
        cases.push(OracleCase::new("model2", "11", Normalized, &p));
        cases.push(OracleCase::new("model2", "21", Normalized, &p));
    }
    for init in ["00", "01", "11"] {
        cases.push(OracleCase::new("model1", init, Normalized, &[("lambda", 1.0)]));
    }
    cases.push(OracleCase::new("model2", "00", Normalized, &[("lambda", 1.0)]));
    for (l, m) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.7)] {
        let p = [("lambda", l), ("mu", m)];
        for init in ["011", "010", "000", "110", "101"] {
            cases.push(OracleCase::new("model3-h1", init, Normalized, &p));
        }
        for init in ["010", "001", "000", "100", "110", "111"] {
            cases.push(OracleCase::new("model3-h2", init, Normalized, &p));
        }
    }
    for init in ["100", "010", "001", "000", "111"] {
        cases.push(OracleCase::new("info-ha", init, Normalized, &[]));
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::nilpotency_index;

    #[test]
    fn model1_preset_matrix() {
        let p = preset("model1", &params(&[("lambda", 1.0)])).unwrap();
        let h = p.hamiltonian.compile().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (2, 1) { 1.0 } else { 0.0 };
                assert_eq!(h[(i, j)], C64::new(expected, 0.0));
            }
        }
        assert_eq!(p.default_initial.to_string(), "10");
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn model2_preset_matrix() {
        let h = preset("model2", &params(&[("lambda", 1.0)])).unwrap().hamiltonian.compile().unwrap();
        let r2 = 2f64.sqrt();
        let expected = [(3, 1, 1.0), (4, 2, r2), (6, 4, r2), (7, 5, 2.0)];
        for i in 0..9 {
            for j in 0..9 {
                let e = expected.iter().find(|&&(r, c, _)| (r, c) == (i, j)).map_or(0.0, |x| x.2);
                assert!((h[(i, j)] - C64::new(e, 0.0)).norm() < 1e-15, "({i},{j})");
            }
        }
        assert_eq!(nilpotency_index(&h), Some(3));
    }

    #[test]
    fn info_ha_is_the_cyclic_hamiltonian() {
        let p = preset("info-ha", &Params::new()).unwrap();
        assert_eq!(p.hamiltonian.to_string(), "1 b2+ b1 + 1 b3+ b2 + 1 b1+ b3");
        assert_eq!(p.system.mode_count(), 3);
        assert!(p.system.modes().iter().all(|m| m.is_fermionic()));
    }

    #[test]
    fn zero_parameters_give_zero_hamiltonian_with_warnings() {
        let p = preset("model3-h1", &params(&[("lambda", 0.0), ("mu", 0.0)])).unwrap();
        assert_eq!(p.hamiltonian.compile().unwrap().max_abs(), 0.0);
        assert_eq!(p.warnings.len(), 2);
    }

    #[test]
    fn preset_errors() {
        assert!(matches!(preset("model4", &Params::new()), Err(FluxError::Argument(_))));
        assert!(matches!(preset("model1", &params(&[("mu", 1.0)])), Err(FluxError::Argument(_))));
        assert!(preset("info-ha", &params(&[("lambda", 1.0)])).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let one = params(&[("lambda", 1.0), ("mu", 1.0)]);
        let v = closed_form("model1", &"10".parse().unwrap(), &params(&[("lambda", 1.0)]), 1.0).unwrap();
        assert_eq!(v, vec![0.5, 0.5]);
        let v = closed_form("model3-h2", &"001".parse().unwrap(), &one, 2.0).unwrap();
        for (a, b) in v.iter().zip([4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = closed_form("info-ha", &"100".parse().unwrap(), &Params::new(), 0.0).unwrap();
        for (a, b) in v.iter().zip([1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            closed_form("info-hb", &"101".parse().unwrap(), &Params::new(), 1.0),
            Err(FluxError::Unsupported(_))
        ));
    }

    #[test]
    fn cycle_closed_form_first_mode_matches_cosh_cos_expression() {
        for t in [0.0, 0.4, 1.0, 2.5, 7.0] {
            let s3 = 3f64.sqrt();
            let direct = (3.0 + 4.0 * (s3 * t / 2.0).cosh() * (1.5 * t).cos() + 2.0 * (s3 * t).cosh())
                / (3.0 * (1.0 + 2.0 * (s3 * t).cosh()));
            let [s0, s1, s2] = cycle_single_quantum(t);
            assert!((s0 - direct).abs() < 1e-14, "t = {t}");
            assert!((s0 + s1 + s2 - 1.0).abs() < 1e-14);
        }
        // Stays finite far beyond where cosh overflows.
        let far = cycle_single_quantum(1000.0);
        assert!(far.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn closed_form_limits() {
        let (l, m) = (0.5, 2.0);
        let r = asymptote("model3-h1", &"011".parse().unwrap(), &params(&[("lambda", l), ("mu", m)])).unwrap();
        assert_eq!(r.method, AsymptoteMethod::ClosedFormLimit);
        assert_eq!(r.values, vec![1.0, m * m / (m * m + l * l), l * l / (m * m + l * l)]);
        let r = asymptote("info-ha", &"100".parse().unwrap(), &Params::new()).unwrap();
        assert_eq!(r.values, vec![1.0 / 3.0; 3]);
        let r = asymptote("model3-h2", &"111".parse().unwrap(), &Params::new()).unwrap();
        assert_eq!(r.values, vec![1.0; 3]);
    }

    #[test]
    fn plateau_estimate_for_two_quanta() {
        let r = asymptote("info-ha", &"110".parse().unwrap(), &Params::new()).unwrap();
        assert!(r.converged);
        assert!(matches!(r.method, AsymptoteMethod::Plateau { .. }));
        for v in &r.values {
            assert!((v - 2.0 / 3.0).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn missing_plateau_is_reported_not_raised() {
        let config = PlateauConfig { tolerance: 1e-6, window: 0.9, horizons: vec![2.0] };
        let r = asymptote_with("info-ha", &"110".parse().unwrap(), &Params::new(), &config).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn scenarios_resolve() {
        for s in SCENARIOS {
            let p = s.preset().unwrap();
            p.system.validate(&s.initial()).unwrap();
        }
        assert_eq!(scenario("cycle-1-2-30").unwrap().params[2], ("lambda3", 30.0));
        assert!(scenario("no-such-scenario").is_none());
    }

    #[test]
    fn every_oracle_case_has_a_closed_form() {
        for case in oracle_cases() {
            let init: OccupationState = case.initial.parse().unwrap();
            closed_form_strategy(case.model, &init, &case.params(), case.strategy, 1.0)
                .unwrap_or_else(|e| panic!("{}: {e}", case.label()));
        }
    }
}
