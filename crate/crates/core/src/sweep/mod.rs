//! Configuration-driven runs, parameter sweeps and their CSV output.
//!
//! Every run writes plain files into an output directory: one
//! `period_index,t,value` CSV per observable and a flat `manifest.txt`
//! recording every resolved number that enters the equations.

mod config;
mod stats;

pub use config::{ConfigError, RawConfig, RunConfig, KNOWN_KEYS};
pub use stats::{pearson, spearman, StatsError};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::entanglement::{saturated_value, EntanglementError};
use crate::lindblad::{convergence_probe, EngineError, Evolution, LindbladEngine, Observable};
use crate::metrics::{self, LifetimeParams, MetricsError};
use crate::model::{self, ModelConfig};
use crate::semiclassical::{self, Component, FixedPointMomentum, SemiclassicalError, SemiclassicalParams, SemiclassicalRun};
use crate::series::StroboscopicSeries;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Periods run by the optional step-size check before a simulation.
pub const CONVERGENCE_CHECK_PERIODS: u64 = 10;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical guardrail: {0}")]
    Guardrail(String),
    #[error(transparent)]
    Engine(EngineError),
    #[error(transparent)]
    Semiclassical(SemiclassicalError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

impl RunError {
    /// 2 for configuration problems, 3 for tripped guardrails, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Semiclassical(SemiclassicalError::InvalidParameter { .. })
            | RunError::Semiclassical(SemiclassicalError::StepMisaligned { .. })
            | RunError::Semiclassical(SemiclassicalError::SubcriticalCoupling { .. }) => 2,
            RunError::Engine(EngineError::StepMisaligned { .. }) | RunError::Engine(EngineError::Model(_)) => 2,
            RunError::Guardrail(_) => 3,
            _ => 1,
        }
    }
}

impl From<EngineError> for RunError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::PositivityLost { .. } => RunError::Guardrail(e.to_string()),
            other => RunError::Engine(other),
        }
    }
}

impl From<SemiclassicalError> for RunError {
    fn from(e: SemiclassicalError) -> Self {
        RunError::Semiclassical(e)
    }
}

fn io_err(path: &Path, e: impl fmt::Display) -> RunError {
    RunError::Io { path: path.display().to_string(), reason: e.to_string() }
}

/// Parameter varied across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Epsilon,
    Eta,
    /// Mean-field anharmonicity, mapped onto the quantum model through
    /// `η = −12α/N`.
    Alpha,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Eta => "eta",
            SweepAxis::Alpha => "alpha",
        }
    }

    pub fn apply(self, base: &ModelConfig, value: f64) -> ModelConfig {
        match self {
            SweepAxis::Epsilon => base.clone().with_epsilon(value),
            SweepAxis::Eta => base.clone().with_eta(value),
            SweepAxis::Alpha => base.clone().with_eta(semiclassical::eta_from_alpha(value, base.n_qubits)),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "epsilon" => Ok(SweepAxis::Epsilon),
            "eta" => Ok(SweepAxis::Eta),
            "alpha" => Ok(SweepAxis::Alpha),
            other => Err(format!("unknown sweep axis `{other}` (epsilon|eta|alpha)")),
        }
    }
}

// ---------------------------------------------------------------------------
// files

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn create_dir(dir: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

pub fn write_series_csv(series: &StroboscopicSeries, path: &Path) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let mut put = |rec: [String; 3]| w.write_record(&rec).map_err(|e| io_err(path, e));
    put(["period_index".into(), "t".into(), "value".into()])?;
    for ((n, v), t) in series.iter().zip(series.times()) {
        put([n.to_string(), fmt_real(t), fmt_real(v)])?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a `period_index,t,value` CSV back into a series.
pub fn parse_series_csv(text: &str, name: &str, period: f64) -> Result<StroboscopicSeries, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut s = StroboscopicSeries::new(name, period, crate::series::SeriesSource::External);
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let n: u64 = rec.get(0).ok_or("missing period_index")?.parse().map_err(|e| format!("{e}"))?;
        let v: f64 = rec.get(2).ok_or("missing value")?.parse().map_err(|e| format!("{e}"))?;
        s.push(n, v).map_err(|e| e.to_string())?;
    }
    Ok(s)
}

pub fn read_series_csv(path: &Path, period: f64) -> Result<StroboscopicSeries, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
    parse_series_csv(&text, name, period).map_err(|e| io_err(path, e))
}

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn real(&mut self, key: &str, value: f64) {
        self.push(key, fmt_real(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        Self { entries }
    }

    pub fn write(&self, path: &Path) -> Result<(), RunError> {
        std::fs::write(path, self.render()).map_err(|e| io_err(path, e))
    }
}

fn common_manifest(mode: &str, cfg: &RunConfig) -> Manifest {
    let mut m = Manifest::default();
    m.push("code_version", CODE_VERSION);
    m.push("mode", mode);
    m.real("omega_t", cfg.omega_t);
    m.real("period", cfg.period());
    m.real("epsilon", cfg.epsilon);
    m.real("lambda0", cfg.lambda0);
    m.real("kappa", cfg.kappa);
    m.push("drive", cfg.drive);
    m.push("periods", cfg.periods);
    m.real("dt", cfg.resolved_dt());
    m.push("steps_per_period", (cfg.period() / cfg.resolved_dt()).round());
    m.push("lifetime_ti_periods", cfg.lifetime_ti);
    m.push("lifetime_delta_periods", cfg.lifetime_delta);
    m.real("lifetime_ti", cfg.lifetime_params().t_i);
    m.real("lifetime_delta", cfg.lifetime_params().delta_t);
    m
}

fn model_manifest(m: &mut Manifest, model: &ModelConfig) {
    m.push("n_qubits", model.n_qubits);
    m.push("field_levels", model.field_levels);
    m.real("omega", model.omega());
    m.real("omega0", model.omega0());
    m.real("eta", model.eta);
    m.real("alpha", model.alpha());
    m.push("representation", model.representation);
    m.real("critical_coupling", model.critical_coupling());
}

/// Manifest of a quantum run.
pub fn quantum_manifest(cfg: &RunConfig, model: &ModelConfig) -> Manifest {
    let mut m = common_manifest("quantum", cfg);
    model_manifest(&mut m, model);
    m
}

/// Manifest of a mean-field run. Quantities without a mean-field meaning
/// are recorded as `n/a`.
pub fn semiclassical_manifest(cfg: &RunConfig, p: &SemiclassicalParams) -> Manifest {
    let mut m = common_manifest("semiclassical", cfg);
    match cfg.n_qubits {
        Some(n) => m.push("n_qubits", n),
        None => m.push("n_qubits", "n/a"),
    }
    m.push("field_levels", "n/a");
    m.real("omega", p.omega);
    m.real("omega0", p.omega0);
    match cfg.n_qubits.filter(|&n| n > 0) {
        Some(n) => m.real("eta", semiclassical::eta_from_alpha(p.alpha, n)),
        None => m.push("eta", "n/a"),
    }
    m.real("alpha", p.alpha);
    m.push("use_corrected_p", cfg.use_corrected_p);
    m.real("critical_coupling", model::critical_coupling(p.omega, p.omega0, p.kappa));
    m
}

// ---------------------------------------------------------------------------
// single runs

#[derive(Debug, Clone)]
pub struct SingleReport {
    pub evolution: Evolution,
    pub lifetime: Option<f64>,
    pub doubling_score: f64,
    pub files: Vec<PathBuf>,
}

/// Quantum run: one CSV per default observable plus `manifest.txt`.
pub fn run_single(cfg: &RunConfig, out: &Path) -> Result<SingleReport, RunError> {
    let model_cfg = cfg.model_config()?;
    let ops = model::build_operators(&model_cfg);
    let dt = cfg.resolved_dt();
    let engine = LindbladEngine::new(&model_cfg, &ops, dt)?;
    if cfg.convergence_check {
        let report = convergence_probe(&model_cfg, &ops, CONVERGENCE_CHECK_PERIODS.min(cfg.periods), dt)?;
        if !report.pass {
            return Err(RunError::Guardrail(format!(
                "halving dt moved stroboscopic j_x by {:e} (> {:e})",
                report.max_deviation, report.tolerance
            )));
        }
    }
    let state = model::initial_state(&ops).map_err(EngineError::from)?;
    let evolution = engine.evolve(&state, cfg.periods)?;

    create_dir(out)?;
    let mut files = vec![];
    for (obs, series) in &evolution.series {
        let path = out.join(format!("{}.csv", obs.name()));
        write_series_csv(series, &path)?;
        files.push(path);
    }
    let mut manifest = quantum_manifest(cfg, &model_cfg);
    let h = &evolution.health;
    manifest.real("health_max_trace_drift", h.max_trace_drift);
    manifest.real("health_max_hermiticity_error", h.max_hermiticity_error);
    manifest.real("health_min_eigenvalue", h.min_eigenvalue);
    let path = out.join("manifest.txt");
    manifest.write(&path)?;
    files.push(path);

    let jx = &evolution.series[&Observable::Jx];
    let lp = cfg.lifetime_params();
    let lifetime = jx.at(0).and_then(|j0| metrics::lifetime(jx, &lp, j0).ok());
    let doubling_score = metrics::period_doubling_score(jx);
    Ok(SingleReport { evolution, lifetime, doubling_score, files })
}

#[derive(Debug, Clone)]
pub struct SemiclassicalReport {
    pub run: SemiclassicalRun,
    pub doubling_score: f64,
    /// Largest component of `rhs` at the starting point, drive held at `λ₀`.
    pub fixed_point_residual: f64,
    pub literal_p_residual: f64,
    pub files: Vec<PathBuf>,
}

/// Residual `max |rhs|` over the `j` and `x` components.
pub fn rhs_residual(p: &SemiclassicalParams, s: &semiclassical::SemiclassicalState) -> f64 {
    semiclassical::rhs_at(p, s, p.lambda0)[..4].iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Mean-field run from the fixed point: `jx.csv … p.csv`, `manifest.txt`
/// and `report.txt`.
pub fn run_semiclassical(cfg: &RunConfig, out: &Path) -> Result<SemiclassicalReport, RunError> {
    let p = cfg.semiclassical_params()?;
    let corrected = semiclassical::fixed_point(&p, FixedPointMomentum::Corrected)?;
    let literal = semiclassical::fixed_point(&p, FixedPointMomentum::Literal)?;
    let s0 = if cfg.use_corrected_p { corrected } else { literal };
    let run = semiclassical::evolve_sc(&p, &s0, cfg.periods, cfg.resolved_dt())?;
    let doubling_score = metrics::period_doubling_score(&run.series(Component::Jx));

    create_dir(out)?;
    let mut files = vec![];
    for c in Component::ALL {
        let path = out.join(format!("{}.csv", c.name()));
        write_series_csv(&run.series(c), &path)?;
        files.push(path);
    }
    let manifest = semiclassical_manifest(cfg, &p);
    let path = out.join("manifest.txt");
    manifest.write(&path)?;
    files.push(path);

    let fixed_point_residual = rhs_residual(&p, &s0);
    let literal_p_residual = rhs_residual(&p, &literal);
    let mut report = Manifest::default();
    report.real("doubling_score", doubling_score);
    report.push("period_doubled", metrics::is_period_doubled(doubling_score));
    report.real("max_spin_norm_drift", run.max_spin_norm_drift);
    report.real("fixed_point_residual_corrected", rhs_residual(&p, &corrected));
    report.real("fixed_point_residual_literal", literal_p_residual);
    let path = out.join("report.txt");
    report.write(&path)?;
    files.push(path);
    Ok(SemiclassicalReport { run, doubling_score, fixed_point_residual, literal_p_residual, files })
}

// ---------------------------------------------------------------------------
// sweeps

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: ModelConfig,
    pub lifetime_params: LifetimeParams,
    pub periods: u64,
    pub dt: f64,
    /// Points with `|value| < exclusion` are left out of the headline
    /// correlation.
    pub exclusion: f64,
    pub threshold_fraction: f64,
    pub outputs: PathBuf,
}

impl SweepSpec {
    pub fn from_config(cfg: &RunConfig, outputs: &Path) -> Result<Self, ConfigError> {
        let base = cfg.model_config()?;
        let (axis, values) = cfg.sweep_grid()?;
        Ok(Self {
            axis,
            values,
            base,
            lifetime_params: cfg.lifetime_params(),
            periods: cfg.periods,
            dt: cfg.resolved_dt(),
            exclusion: cfg.resolved_exclusion(axis),
            threshold_fraction: cfg.threshold_fraction,
            outputs: outputs.to_path_buf(),
        })
    }

    /// Periods needed to cover both the lifetime and saturation windows.
    pub fn horizon(&self) -> Result<u64, MetricsError> {
        Ok(self.periods.max(self.lifetime_params.end_period()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param_value: f64,
    pub lifetime: f64,
    /// `L_t·|j_x(0)|·Δ_T/T`
    pub lifetime_scaled: f64,
    pub lifetime_threshold: f64,
    /// Mean log-negativity over the lifetime window, in ebits.
    pub ent_saturated: f64,
    pub ent_spread: f64,
    pub doubling_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedPoint {
    pub param_value: f64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub exclusion: f64,
    pub n_all: usize,
    pub n_excluded: usize,
    pub pearson_all: Option<f64>,
    /// Headline value, near-resonance points removed.
    pub pearson_excluded: Option<f64>,
    /// Rank agreement between `L_t` and the threshold lifetime.
    pub spearman_lifetime_threshold: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<FailedPoint>,
    pub correlation: CorrelationReport,
}

/// Evolves one grid point and reduces it to a table row.
pub fn evaluate_point(spec: &SweepSpec, value: f64) -> Result<SweepRow, RunError> {
    let cfg = spec.axis.apply(&spec.base, value);
    cfg.validate().map_err(EngineError::from)?;
    let ops = model::build_operators(&cfg);
    let engine = LindbladEngine::new(&cfg, &ops, spec.dt)?;
    let state = model::initial_state(&ops).map_err(EngineError::from)?;
    let evo = engine.evolve_with(&state, spec.horizon()?, &[Observable::Jx, Observable::LogNegativity])?;
    let jx = &evo.series[&Observable::Jx];
    let ln = &evo.series[&Observable::LogNegativity];
    let jx0 = jx.at(0).unwrap_or(0.0);
    let lt = metrics::lifetime(jx, &spec.lifetime_params, jx0)?;
    let (start, len) = spec.lifetime_params.window_periods()?;
    let sat = saturated_value(ln, start, len)?;
    Ok(SweepRow {
        param_value: value,
        lifetime: lt,
        lifetime_scaled: metrics::scaled_lifetime(lt, jx0, &spec.lifetime_params),
        lifetime_threshold: metrics::lifetime_threshold(jx, spec.threshold_fraction)?,
        ent_saturated: sat.mean,
        ent_spread: sat.spread,
        doubling_score: metrics::period_doubling_score(jx),
    })
}

/// Pearson and rank correlations over a finished table.
pub fn correlation_report(rows: &[SweepRow], exclusion: f64) -> CorrelationReport {
    let cols = |rows: &[&SweepRow]| -> (Vec<f64>, Vec<f64>) {
        (rows.iter().map(|r| r.lifetime).collect(), rows.iter().map(|r| r.ent_saturated).collect())
    };
    let all: Vec<&SweepRow> = rows.iter().collect();
    let kept: Vec<&SweepRow> = rows.iter().filter(|r| r.param_value.abs() >= exclusion).collect();
    let (lx, ex) = cols(&all);
    let (lk, ek) = cols(&kept);
    let thresholds: Vec<f64> = rows.iter().map(|r| r.lifetime_threshold).collect();
    CorrelationReport {
        exclusion,
        n_all: all.len(),
        n_excluded: kept.len(),
        pearson_all: pearson(&lx, &ex).ok(),
        pearson_excluded: pearson(&lk, &ek).ok(),
        spearman_lifetime_threshold: spearman(&lx, &thresholds).ok(),
    }
}

pub const TABLE_HEADER: [&str; 8] =
    ["axis", "param_value", "L_t", "L_t_scaled", "L_threshold", "ent_saturated", "ent_spread", "doubling_score"];

pub fn write_table(axis: SweepAxis, rows: &[SweepRow], path: &Path) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(TABLE_HEADER).map_err(|e| io_err(path, e))?;
    for r in rows {
        let fields = [
            r.param_value,
            r.lifetime,
            r.lifetime_scaled,
            r.lifetime_threshold,
            r.ent_saturated,
            r.ent_spread,
            r.doubling_score,
        ];
        let mut rec = vec![axis.to_string()];
        rec.extend(fields.iter().map(|&x| fmt_real(x)));
        w.write_record(&rec).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<(SweepAxis, Vec<SweepRow>), RunError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let mut axis = None;
    let mut rows = vec![];
    for rec in r.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let a: SweepAxis = rec.get(0).unwrap_or("").parse().map_err(|e: String| io_err(path, e))?;
        if axis.is_some_and(|x| x != a) {
            return Err(io_err(path, "mixed axes in one table"));
        }
        axis = Some(a);
        let f = |i: usize| -> Result<f64, RunError> {
            rec.get(i).unwrap_or("").parse::<f64>().map_err(|e| io_err(path, format!("column {i}: {e}")))
        };
        rows.push(SweepRow {
            param_value: f(1)?,
            lifetime: f(2)?,
            lifetime_scaled: f(3)?,
            lifetime_threshold: f(4)?,
            ent_saturated: f(5)?,
            ent_spread: f(6)?,
            doubling_score: f(7)?,
        });
    }
    let axis = axis.ok_or_else(|| io_err(path, "empty table"))?;
    Ok((axis, rows))
}

fn correlation_manifest(c: &CorrelationReport) -> Manifest {
    let mut m = Manifest::default();
    let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_else(|| "undefined".into());
    m.real("exclusion", c.exclusion);
    m.push("n_all", c.n_all);
    m.push("n_excluded", c.n_excluded);
    m.push("pearson_all", opt(c.pearson_all));
    m.push("pearson_excluded", opt(c.pearson_excluded));
    m.push("spearman_lifetime_threshold", opt(c.spearman_lifetime_threshold));
    m
}

/// Evaluates every grid point in parallel; rows come back in grid order.
/// Writes `table.csv`, `correlation.txt`, `manifest.txt` and, when some
/// points fail, `failures.csv`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, RunError> {
    spec.horizon()?;
    let results: Vec<Result<SweepRow, RunError>> = spec.values.par_iter().map(|&v| evaluate_point(spec, v)).collect();
    let mut rows = vec![];
    let mut failures = vec![];
    for (&v, r) in spec.values.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(FailedPoint { param_value: v, error: e.to_string() }),
        }
    }
    let correlation = correlation_report(&rows, spec.exclusion);

    let out = &spec.outputs;
    create_dir(out)?;
    write_table(spec.axis, &rows, &out.join("table.csv"))?;
    correlation_manifest(&correlation).write(&out.join("correlation.txt"))?;
    if !failures.is_empty() {
        let path = out.join("failures.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        w.write_record(["param_value", "error"]).map_err(|e| io_err(&path, e))?;
        for f in &failures {
            w.write_record([fmt_real(f.param_value), f.error.clone()]).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
    }
    let mut m = Manifest::default();
    m.push("code_version", CODE_VERSION);
    m.push("mode", "sweep");
    m.push("sweep_axis", spec.axis);
    m.push("sweep_values", spec.values.iter().map(|&v| fmt_real(v)).collect::<Vec<_>>().join(","));
    m.real("period", spec.base.period());
    m.real("omega_t", spec.base.omega_t);
    m.real("epsilon", spec.base.epsilon);
    m.real("lambda0", spec.base.lambda0);
    m.real("kappa", spec.base.kappa);
    m.push("drive", spec.base.drive);
    m.push("periods", spec.horizon()?);
    m.real("dt", spec.dt);
    m.real("lifetime_ti", spec.lifetime_params.t_i);
    m.real("lifetime_delta", spec.lifetime_params.delta_t);
    m.real("threshold_fraction", spec.threshold_fraction);
    m.real("exclusion", spec.exclusion);
    model_manifest(&mut m, &spec.base);
    m.write(&out.join("manifest.txt"))?;
    Ok(SweepOutcome { axis: spec.axis, rows, failures, correlation })
}

/// Correlation report for a saved table, using the axis default exclusion
/// unless one is given.
pub fn correlate_table(path: &Path, exclusion: Option<f64>) -> Result<CorrelationReport, RunError> {
    let (axis, rows) = read_table(path)?;
    let exclusion = exclusion.unwrap_or(RunConfig::default().resolved_exclusion(axis));
    Ok(correlation_report(&rows, exclusion))
}

pub fn render_correlation(c: &CorrelationReport) -> String {
    correlation_manifest(c).render()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: f64, lt: f64, ent: f64) -> SweepRow {
        SweepRow {
            param_value: v,
            lifetime: lt,
            lifetime_scaled: lt,
            lifetime_threshold: lt,
            ent_saturated: ent,
            ent_spread: 0.0,
            doubling_score: 1.0,
        }
    }

    #[test]
    fn linear_table_has_unit_correlation() {
        let rows: Vec<SweepRow> = (0..6).map(|k| row(0.02 * k as f64, 1.0 + k as f64, 0.5 + 0.1 * k as f64)).collect();
        let c = correlation_report(&rows, 0.01);
        assert_eq!((c.n_all, c.n_excluded), (6, 5));
        assert!((c.pearson_all.unwrap() - 1.0).abs() < 1e-14);
        assert!((c.pearson_excluded.unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn series_csv_round_trip_is_exact() {
        let values = vec![0.1, -1.0 / 3.0, std::f64::consts::PI * 1e-17, 12345.678901234567, -0.0];
        let s = StroboscopicSeries::from_values("jx", 2.0 * std::f64::consts::PI, values);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("jx.csv");
        write_series_csv(&s, &path).unwrap();
        let back = read_series_csv(&path, s.period).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.values()[4].to_bits(), (-0.0f64).to_bits());
    }

    #[test]
    fn table_round_trip() {
        let rows = vec![row(0.0, 1.5, 0.2), row(0.05, 1.0 / 7.0, 0.1), row(0.1, 0.1, 0.05)];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.csv");
        write_table(SweepAxis::Epsilon, &rows, &path).unwrap();
        let (axis, back) = read_table(&path).unwrap();
        assert_eq!(axis, SweepAxis::Epsilon);
        assert_eq!(back, rows);
        let c = correlate_table(&path, None).unwrap();
        assert_eq!(c.n_excluded, 2);
        assert!(c.pearson_excluded.is_none());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(RunError::from(ConfigError::MissingKey { key: "n_qubits" }).exit_code(), 2);
        assert_eq!(RunError::from(EngineError::PositivityLost { period: 3, min_eigenvalue: -1.0 }).exit_code(), 3);
        assert_eq!(RunError::Io { path: "x".into(), reason: "y".into() }.exit_code(), 1);
    }

    #[test]
    fn alpha_axis_maps_onto_eta() {
        let base = ModelConfig::new(4);
        let cfg = SweepAxis::Alpha.apply(&base, 0.002);
        assert!((cfg.eta + 0.006).abs() < 1e-15);
        assert!((cfg.alpha() - 0.002).abs() < 1e-15);
    }

    #[test]
    fn fmt_real_round_trips() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
