//! Experiment configuration: a TOML file, `key=value` overrides, flags.

use std::path::{Path, PathBuf};

use coco_core::denoiser::SolverConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("{0}")]
    Syntax(String),
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
}

fn field(name: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: name.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    DenoiseOnce,
    MseVsSigma,
    MseElementwise,
    Tightness,
    Optimize,
    WarmstartBench,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::DenoiseOnce => "denoise-once",
            ExperimentKind::MseVsSigma => "mse-vs-sigma",
            ExperimentKind::MseElementwise => "mse-elementwise",
            ExperimentKind::Tightness => "tightness",
            ExperimentKind::Optimize => "optimize",
            ExperimentKind::WarmstartBench => "warmstart-bench",
        }
    }
}

/// Solver settings as they appear under `[solver]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub warm_start: bool,
}

impl SolverParams {
    fn from_core(c: SolverConfig<f64>) -> Self {
        Self { max_iterations: c.max_iterations, tolerance: c.tolerance, warm_start: c.warm_start }
    }

    pub fn to_core(self) -> SolverConfig<f64> {
        SolverConfig::plug_in()
            .with_max_iterations(self.max_iterations)
            .with_tolerance(self.tolerance)
            .with_warm_start(self.warm_start)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.max_iterations == 0 {
            return Err(field("solver.max_iterations", "must be at least 1"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(field("solver.tolerance", "must be a non-negative number"));
        }
        Ok(())
    }

    fn oracle_grade() -> Self {
        Self::from_core(SolverConfig::oracle_grade())
    }
}

/// One denoising of `k` noisy gradients at random points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenoiseOnce {
    pub d: usize,
    pub k: usize,
    pub sigma: f64,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub half_width: f64,
    pub lipschitz_factor: f64,
    pub coincident: bool,
    pub solver: SolverParams,
}

impl Default for DenoiseOnce {
    fn default() -> Self {
        Self {
            d: 3,
            k: 4,
            sigma: 1.0,
            eig_lo: 1.0 / 3.0,
            eig_hi: 1.0,
            half_width: 5.0,
            lipschitz_factor: 1.0,
            coincident: false,
            solver: SolverParams::oracle_grade(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MseVsSigma {
    pub d: usize,
    pub ks: Vec<usize>,
    pub sigma2: Vec<f64>,
    pub replications: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub half_width: f64,
    pub lipschitz_factor: f64,
    pub solver: SolverParams,
}

impl Default for MseVsSigma {
    fn default() -> Self {
        Self {
            d: 3,
            ks: vec![1, 2, 4, 8, 10],
            sigma2: vec![1.0, 4.0, 16.0, 64.0, 256.0],
            replications: 1000,
            eig_lo: 1.0 / 3.0,
            eig_hi: 1.0,
            half_width: 5.0,
            lipschitz_factor: 1.0,
            solver: SolverParams { max_iterations: 20_000, ..SolverParams::oracle_grade() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MseElementwise {
    pub d: usize,
    pub k: usize,
    pub sigma: f64,
    pub replications: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub half_width: f64,
    pub lipschitz_factor: f64,
    pub coincident: bool,
    pub solver: SolverParams,
}

impl Default for MseElementwise {
    fn default() -> Self {
        Self {
            d: 1,
            k: 2,
            sigma: 10.0,
            replications: 10_000,
            eig_lo: 1.0 / 3.0,
            eig_hi: 1.0,
            half_width: 5.0,
            lipschitz_factor: 1.0,
            coincident: false,
            solver: SolverParams::oracle_grade(),
        }
    }
}

/// Constraint tightness on `f(x) = x²/2` over a `(Δx, ΔL)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tightness {
    pub dx_max: f64,
    pub dx_points: usize,
    pub delta_l: Vec<f64>,
    pub sigma: f64,
    pub replications: usize,
}

impl Default for Tightness {
    fn default() -> Self {
        Self { dx_max: 200.0, dx_points: 21, delta_l: vec![-0.5, 0.0, 1.0], sigma: 10.0, replications: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Quadratic,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
    Strsaga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    Fixed,
    /// `γ_k = gamma / k`.
    Decreasing,
}

/// Optimizer trajectories with and without denoising.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Optimize {
    pub problem: ProblemKind,
    pub d: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub optimizer: OptimizerKind,
    pub schedule: Schedule,
    pub gamma: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub budget: usize,
    pub replications: usize,
    /// Every coordinate of the starting point.
    pub x0: f64,
    /// Window lengths; the plain optimizer is always included.
    pub windows: Vec<usize>,
    pub full_history: bool,
    /// Adds SGD with Polyak-Ruppert averaging.
    pub pr_average: bool,
    pub solver: SolverParams,
}

impl Default for Optimize {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Quadratic,
            d: 10,
            eig_lo: 1.0 / 3.0,
            eig_hi: 1.0,
            sigma: 10.0,
            dataset: None,
            lambda: None,
            optimizer: OptimizerKind::Sgd,
            schedule: Schedule::Fixed,
            gamma: 0.5,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            budget: 60,
            replications: 100,
            x0: 3.0,
            windows: vec![2, 4, 8],
            full_history: false,
            pr_average: false,
            solver: SolverParams::from_core(SolverConfig::plug_in()),
        }
    }
}

/// Cold versus warm-started solves along an SGD trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WarmstartBench {
    pub d: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub k: usize,
    pub steps: usize,
    pub burn_in: usize,
    pub replications: usize,
    pub x0: f64,
    pub solver: SolverParams,
}

impl Default for WarmstartBench {
    fn default() -> Self {
        Self {
            d: 10,
            eig_lo: 1.0 / 3.0,
            eig_hi: 1.0,
            sigma: 0.1,
            gamma: 0.05,
            k: 8,
            steps: 60,
            burn_in: 10,
            replications: 16,
            x0: 3.0,
            solver: SolverParams::oracle_grade(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Params {
    DenoiseOnce(DenoiseOnce),
    MseVsSigma(MseVsSigma),
    MseElementwise(MseElementwise),
    Tightness(Tightness),
    Optimize(Optimize),
    WarmstartBench(WarmstartBench),
}

impl Params {
    pub fn defaults(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::DenoiseOnce => Params::DenoiseOnce(DenoiseOnce::default()),
            ExperimentKind::MseVsSigma => Params::MseVsSigma(MseVsSigma::default()),
            ExperimentKind::MseElementwise => Params::MseElementwise(MseElementwise::default()),
            ExperimentKind::Tightness => Params::Tightness(Tightness::default()),
            ExperimentKind::Optimize => Params::Optimize(Optimize::default()),
            ExperimentKind::WarmstartBench => Params::WarmstartBench(WarmstartBench::default()),
        }
    }

    pub fn kind(&self) -> ExperimentKind {
        match self {
            Params::DenoiseOnce(_) => ExperimentKind::DenoiseOnce,
            Params::MseVsSigma(_) => ExperimentKind::MseVsSigma,
            Params::MseElementwise(_) => ExperimentKind::MseElementwise,
            Params::Tightness(_) => ExperimentKind::Tightness,
            Params::Optimize(_) => ExperimentKind::Optimize,
            Params::WarmstartBench(_) => ExperimentKind::WarmstartBench,
        }
    }
}

/// Everything that determines the output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub params: Params,
}

/// Keys handled by the runner rather than the experiment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Invocation {
    pub out: Option<PathBuf>,
    pub svg: bool,
}

fn parse_table(text: &str) -> Result<toml::Table, ConfigError> {
    text.parse::<toml::Table>().map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))
}

fn merge(into: &mut toml::Table, from: toml::Table) {
    for (k, v) in from {
        match (into.get_mut(&k), v) {
            (Some(toml::Value::Table(a)), toml::Value::Table(b)) => merge(a, b),
            (_, v) => {
                into.insert(k, v);
            }
        }
    }
}

/// Applies `key=value` overrides. Values are TOML literals; anything that
/// does not parse as one is taken as a string.
pub fn apply_overrides(table: &mut toml::Table, overrides: &[String]) -> Result<(), ConfigError> {
    for o in overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax(format!("override `{o}` is not of the form key=value")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax(format!("override `{o}` has an empty key")));
        }
        let parsed = parse_table(&format!("{key} = {value}")).or_else(|_| {
            let quoted = toml::Value::String(value.to_string());
            parse_table(&format!("{key} = {quoted}"))
        })?;
        merge(table, parsed);
    }
    Ok(())
}

fn take_seed(table: &mut toml::Table) -> Result<Option<u64>, ConfigError> {
    match table.remove("seed") {
        None => Ok(None),
        Some(toml::Value::Integer(i)) if i >= 0 => Ok(Some(i as u64)),
        Some(v) => Err(field("seed", format!("must be a non-negative integer, got {v}"))),
    }
}

/// Builds the configuration of `kind` from a parsed table. A `kind` key in
/// the table must agree with `kind`.
pub fn from_table(kind: ExperimentKind, mut table: toml::Table) -> Result<(ExperimentConfig, Invocation), ConfigError> {
    let mut inv = Invocation::default();
    match table.remove("out") {
        None => {}
        Some(toml::Value::String(s)) => inv.out = Some(PathBuf::from(s)),
        Some(v) => return Err(field("out", format!("must be a path string, got {v}"))),
    }
    match table.remove("svg") {
        None => {}
        Some(toml::Value::Boolean(b)) => inv.svg = b,
        Some(v) => return Err(field("svg", format!("must be true or false, got {v}"))),
    }
    let seed = take_seed(&mut table)?.unwrap_or(0);
    match table.get("kind") {
        None => {
            table.insert("kind".into(), toml::Value::String(kind.name().into()));
        }
        Some(toml::Value::String(s)) if s == kind.name() => {}
        Some(v) => {
            return Err(field("kind", format!("config is for {v} but `{}` was requested", kind.name())));
        }
    }
    // Layer the file over the kind's defaults so partial nested tables work.
    let mut full = match toml::Value::try_from(Params::defaults(kind)).expect("defaults serialize") {
        toml::Value::Table(t) => t,
        _ => unreachable!("parameters serialize to a table"),
    };
    merge(&mut full, table);
    let params = Params::deserialize(toml::Value::Table(full))
        .map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))?;
    let cfg = ExperimentConfig { seed, params };
    cfg.validate()?;
    Ok((cfg, inv))
}

/// Reads `path` (if any), applies overrides, and builds the configuration.
pub fn load(
    kind: ExperimentKind,
    path: Option<&Path>,
    overrides: &[String],
) -> Result<(ExperimentConfig, Invocation), ConfigError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError::Read { path: p.display().to_string(), reason: e.to_string() })?;
            parse_table(&text)?
        }
        None => toml::Table::new(),
    };
    apply_overrides(&mut table, overrides)?;
    from_table(kind, table)
}

fn positive(name: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), ConfigError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be non-negative, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<(), ConfigError> {
    if v >= min {
        Ok(())
    } else {
        Err(field(name, format!("must be at least {min}, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be finite, got {v}")))
    }
}

fn eigen_range(lo: f64, hi: f64) -> Result<(), ConfigError> {
    positive("eig_lo", lo)?;
    positive("eig_hi", hi)?;
    if lo > hi {
        return Err(field("eig_lo", format!("must not exceed eig_hi ({lo} > {hi})")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn kind(&self) -> ExperimentKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.seed > i64::MAX as u64 {
            return Err(field("seed", format!("must not exceed {}", i64::MAX)));
        }
        match &self.params {
            Params::DenoiseOnce(p) => {
                at_least("d", p.d, 1)?;
                at_least("k", p.k, 1)?;
                non_negative("sigma", p.sigma)?;
                eigen_range(p.eig_lo, p.eig_hi)?;
                non_negative("half_width", p.half_width)?;
                positive("lipschitz_factor", p.lipschitz_factor)?;
                p.solver.validate()
            }
            Params::MseVsSigma(p) => {
                at_least("d", p.d, 1)?;
                if p.ks.is_empty() {
                    return Err(field("ks", "needs at least one window size"));
                }
                for &k in &p.ks {
                    at_least("ks", k, 1)?;
                }
                if p.sigma2.is_empty() {
                    return Err(field("sigma2", "needs at least one noise level"));
                }
                for &s in &p.sigma2 {
                    non_negative("sigma2", s)?;
                }
                if p.sigma2.iter().all(|&s| s == 0.0) {
                    return Err(field("sigma2", "needs a positive noise level to fit a slope"));
                }
                at_least("replications", p.replications, 2)?;
                eigen_range(p.eig_lo, p.eig_hi)?;
                non_negative("half_width", p.half_width)?;
                positive("lipschitz_factor", p.lipschitz_factor)?;
                p.solver.validate()
            }
            Params::MseElementwise(p) => {
                at_least("d", p.d, 1)?;
                at_least("k", p.k, 1)?;
                non_negative("sigma", p.sigma)?;
                at_least("replications", p.replications, 2)?;
                eigen_range(p.eig_lo, p.eig_hi)?;
                non_negative("half_width", p.half_width)?;
                positive("lipschitz_factor", p.lipschitz_factor)?;
                p.solver.validate()
            }
            Params::Tightness(p) => {
                non_negative("dx_max", p.dx_max)?;
                at_least("dx_points", p.dx_points, 1)?;
                if p.delta_l.is_empty() {
                    return Err(field("delta_l", "needs at least one value"));
                }
                for &dl in &p.delta_l {
                    finite("delta_l", dl)?;
                    if 1.0 + dl <= 0.0 {
                        return Err(field("delta_l", format!("1 + delta_l must be positive, got {dl}")));
                    }
                }
                positive("sigma", p.sigma)?;
                at_least("replications", p.replications, 2)
            }
            Params::Optimize(p) => {
                match p.problem {
                    ProblemKind::Quadratic => {
                        at_least("d", p.d, 1)?;
                        eigen_range(p.eig_lo, p.eig_hi)?;
                        non_negative("sigma", p.sigma)?;
                        if p.dataset.is_some() {
                            return Err(field("dataset", "only used with problem = \"logistic\""));
                        }
                        if p.optimizer == OptimizerKind::Strsaga {
                            return Err(field("optimizer", "strsaga needs problem = \"logistic\""));
                        }
                    }
                    ProblemKind::Logistic => {
                        if p.dataset.is_none() {
                            return Err(field("dataset", "required with problem = \"logistic\""));
                        }
                        match p.lambda {
                            None => return Err(field("lambda", "required with problem = \"logistic\"")),
                            Some(l) => positive("lambda", l)?,
                        }
                    }
                }
                positive("gamma", p.gamma)?;
                if p.optimizer == OptimizerKind::Adam {
                    for (name, b) in [("beta1", p.beta1), ("beta2", p.beta2)] {
                        if !(0.0..1.0).contains(&b) {
                            return Err(field(name, format!("must lie in [0, 1), got {b}")));
                        }
                    }
                    positive("eps", p.eps)?;
                }
                if p.schedule == Schedule::Decreasing && p.optimizer != OptimizerKind::Sgd {
                    return Err(field("schedule", "a decreasing schedule is only available for sgd"));
                }
                if p.pr_average && p.optimizer != OptimizerKind::Sgd {
                    return Err(field("pr_average", "only available with optimizer = \"sgd\""));
                }
                at_least("budget", p.budget, 1)?;
                at_least("replications", p.replications, 2)?;
                finite("x0", p.x0)?;
                for &k in &p.windows {
                    at_least("windows", k, 1)?;
                }
                p.solver.validate()
            }
            Params::WarmstartBench(p) => {
                at_least("d", p.d, 1)?;
                eigen_range(p.eig_lo, p.eig_hi)?;
                non_negative("sigma", p.sigma)?;
                positive("gamma", p.gamma)?;
                at_least("k", p.k, 2)?;
                at_least("steps", p.steps, 1)?;
                if p.burn_in >= p.steps {
                    return Err(field("burn_in", format!("must be below steps ({})", p.steps)));
                }
                at_least("replications", p.replications, 2)?;
                finite("x0", p.x0)?;
                p.solver.validate()
            }
        }
    }

    /// Canonical TOML text; parses back to an equal configuration.
    pub fn to_toml(&self) -> String {
        let mut table = match toml::Value::try_from(&self.params).expect("parameters serialize") {
            toml::Value::Table(t) => t,
            _ => unreachable!("parameters serialize to a table"),
        };
        let body = std::mem::take(&mut table);
        table.insert("seed".into(), toml::Value::Integer(self.seed as i64));
        table.extend(body);
        toml::to_string(&table).expect("table serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table = parse_table(text)?;
        let kind = match table.get("kind") {
            Some(v) => ExperimentKind::deserialize(v.clone()).map_err(|e| field("kind", e.to_string()))?,
            None => return Err(field("kind", "missing")),
        };
        let (cfg, inv) = from_table(kind, table)?;
        if inv != Invocation::default() {
            return Err(ConfigError::Syntax("canonical config must not carry `out` or `svg`".into()));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(kind: ExperimentKind, text: &str, ov: &[&str]) -> Result<ExperimentConfig, ConfigError> {
        let mut t = parse_table(text)?;
        apply_overrides(&mut t, &ov.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
        from_table(kind, t).map(|(c, _)| c)
    }

    #[test]
    fn defaults_fill_missing_keys() {
        let c = load_str(ExperimentKind::Tightness, "sigma = 2.0\n", &[]).unwrap();
        let Params::Tightness(p) = c.params else { panic!() };
        assert_eq!(p.sigma, 2.0);
        assert_eq!(p.dx_points, 21);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = load_str(ExperimentKind::Tightness, "sigmaa = 2.0\n", &[]).unwrap_err();
        assert!(e.to_string().contains("sigmaa"), "{e}");
        let e = load_str(ExperimentKind::Optimize, "[solver]\nfoo = 1\n", &[]).unwrap_err();
        assert!(e.to_string().contains("foo"), "{e}");
    }

    #[test]
    fn overrides_win_and_nest() {
        let text = "gamma = 0.1\n[solver]\ntolerance = 1e-6\n";
        let c = load_str(ExperimentKind::Optimize, text, &["gamma=0.3", "solver.max_iterations=7", "optimizer=adam"])
            .unwrap();
        let Params::Optimize(p) = c.params else { panic!() };
        assert_eq!(p.gamma, 0.3);
        assert_eq!(p.solver.max_iterations, 7);
        assert_eq!(p.solver.tolerance, 1e-6);
        assert_eq!(p.optimizer, OptimizerKind::Adam);
    }

    #[test]
    fn field_level_messages() {
        let e = load_str(ExperimentKind::Optimize, "gamma = -1.0\n", &[]).unwrap_err();
        assert_eq!(e, field("gamma", "must be positive, got -1"));
        let e = load_str(ExperimentKind::Optimize, "problem = \"logistic\"\ndataset = \"a.txt\"\n", &[]).unwrap_err();
        assert_eq!(e, field("lambda", "required with problem = \"logistic\""));
        let e = load_str(ExperimentKind::Tightness, "kind = \"optimize\"\n", &[]).unwrap_err();
        assert!(matches!(e, ConfigError::Field { ref field, .. } if field == "kind"));
    }

    #[test]
    fn canonical_text_round_trips() {
        for kind in [
            ExperimentKind::DenoiseOnce,
            ExperimentKind::MseVsSigma,
            ExperimentKind::MseElementwise,
            ExperimentKind::Tightness,
            ExperimentKind::Optimize,
            ExperimentKind::WarmstartBench,
        ] {
            let c = load_str(kind, "seed = 12345\n", &[]).unwrap();
            let text = c.to_toml();
            assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c, "{text}");
        }
        let c = load_str(
            ExperimentKind::Optimize,
            "problem = \"logistic\"\ndataset = \"data/x.svm\"\nlambda = 0.01\noptimizer = \"strsaga\"\n",
            &[],
        )
        .unwrap();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
    }
}
