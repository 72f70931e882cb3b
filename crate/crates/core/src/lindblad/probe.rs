//! Self-refinement checks on step size and Fock truncation.

use super::{EngineError, LindbladEngine, Observable};
use crate::model::{self, ModelConfig, ModelOperators};

/// Stroboscopic `j_x` deviation allowed between a run and its refinement.
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConvergenceReport {
    fn new(max_deviation: f64) -> Self {
        Self { max_deviation, tolerance: CONVERGENCE_TOL, pass: max_deviation <= CONVERGENCE_TOL }
    }
}

fn jx_series(engine: &LindbladEngine, ops: &ModelOperators, periods: u64) -> Result<Vec<f64>, EngineError> {
    let state = model::initial_state(ops)?;
    let evo = engine.evolve_with(&state, periods, &[Observable::Jx])?;
    Ok(evo.series[&Observable::Jx].values().to_vec())
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs at `dt` and `dt/2` and compares stroboscopic `j_x`.
pub fn convergence_probe(
    cfg: &ModelConfig,
    ops: &ModelOperators,
    periods: u64,
    dt: f64,
) -> Result<ConvergenceReport, EngineError> {
    let coarse = LindbladEngine::new(cfg, ops, dt)?;
    let fine = LindbladEngine::new(cfg, ops, 0.5 * coarse.dt())?;
    let (a, b) = rayon::join(|| jx_series(&coarse, ops, periods), || jx_series(&fine, ops, periods));
    Ok(ConvergenceReport::new(max_dev(&a?, &b?)))
}

/// Runs at `cfg.field_levels` and at `refined_levels` and compares
/// stroboscopic `j_x`.
pub fn truncation_probe(
    cfg: &ModelConfig,
    refined_levels: usize,
    periods: u64,
    dt: f64,
) -> Result<ConvergenceReport, EngineError> {
    let refined_cfg = cfg.clone().with_field_levels(refined_levels);
    let run = |c: &ModelConfig| -> Result<Vec<f64>, EngineError> {
        let ops = model::build_operators(c);
        jx_series(&LindbladEngine::new(c, &ops, dt)?, &ops, periods)
    };
    let (a, b) = rayon::join(|| run(cfg), || run(&refined_cfg));
    Ok(ConvergenceReport::new(max_dev(&a?, &b?)))
}
