//! Fixed-step RK4 integration of the driven, damped master equation
//!
//! ```text
//! dρ/dt = -i[H(λ(t)), ρ] + κ (a ρ a† − ½{a†a, ρ})
//! ```
//!
//! The engine rewrites the right-hand side with the non-Hermitian generator
//! `G = −iH − (κ/2) a†a` as `Gρ + (Gρ)† + κ a ρ a†` and applies `G` and `a`
//! as sparse row lists extracted from the dense model operators.
//! [`lindblad_rhs`] keeps the literal dense form for cross-checks.

mod probe;

pub use probe::{convergence_probe, truncation_probe, ConvergenceReport};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::entanglement::{self, BipartiteSplit, EntanglementError};
use crate::linalg::{self, anticommutator, commutator, expectation, ComplexMatrix, LinalgError, ZERO};
use crate::model::{self, ModelConfig, ModelError, ModelOperators};
use crate::series::{SeriesSource, StroboscopicSeries};

/// Steps per drive period used when no step size is given.
pub const DEFAULT_STEPS_PER_PERIOD: u64 = 500;

/// Minimum eigenvalue below which evolution is aborted.
pub const POSITIVITY_ABORT: f64 = -1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("step {dt} does not divide the half period {half_period}")]
    StepMisaligned { dt: f64, half_period: f64 },
    #[error("density matrix lost positivity at period {period}: min eigenvalue {min_eigenvalue:e}")]
    PositivityLost { period: u64, min_eigenvalue: f64 },
    #[error("state dimension {state} does not match model dimension {model}")]
    DimensionMismatch { state: usize, model: usize },
    #[error("horizon must be at least one period")]
    EmptyHorizon,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A density matrix at time `t` on a `qubit_dim × field_dim` space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    pub rho: ComplexMatrix,
    pub t: f64,
    pub qubit_dim: usize,
    pub field_dim: usize,
}

impl DensityState {
    pub fn new(rho: ComplexMatrix, t: f64, qubit_dim: usize, field_dim: usize) -> Self {
        assert_eq!(rho.dim(), qubit_dim * field_dim, "density matrix does not match the split");
        Self { rho, t, qubit_dim, field_dim }
    }

    pub fn split(&self) -> BipartiteSplit {
        BipartiteSplit::new(self.qubit_dim, self.field_dim)
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        purity(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(linalg::hermitian_eigenvalues(&self.rho)?.first().copied().unwrap_or(0.0))
    }

    pub fn log_negativity(&self) -> Result<f64, EntanglementError> {
        entanglement::log_negativity(&self.rho, self.split())
    }
}

fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Stroboscopically sampled observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    /// `⟨J_x⟩/N`
    Jx,
    Jy,
    Jz,
    /// `⟨a†a⟩`
    PhotonNumber,
    Purity,
    /// Qubit–field logarithmic negativity in ebits.
    LogNegativity,
    /// `⟨P⟩`
    Parity,
}

impl Observable {
    pub const DEFAULT: [Observable; 6] = [
        Observable::Jx,
        Observable::Jy,
        Observable::Jz,
        Observable::PhotonNumber,
        Observable::Purity,
        Observable::LogNegativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Jx => "jx",
            Observable::Jy => "jy",
            Observable::Jz => "jz",
            Observable::PhotonNumber => "photon_number",
            Observable::Purity => "purity",
            Observable::LogNegativity => "logneg",
            Observable::Parity => "parity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Observable::Jx,
            Observable::Jy,
            Observable::Jz,
            Observable::PhotonNumber,
            Observable::Purity,
            Observable::LogNegativity,
            Observable::Parity,
        ]
        .into_iter()
        .find(|o| o.name() == name)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Worst-case numerical health over the stroboscopic samples of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Health {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub max_purity: f64,
}

impl Default for Health {
    fn default() -> Self {
        Self { max_trace_drift: 0.0, max_hermiticity_error: 0.0, min_eigenvalue: f64::INFINITY, max_purity: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub final_state: DensityState,
    pub series: BTreeMap<Observable, StroboscopicSeries>,
    pub health: Health,
}

impl Evolution {
    pub fn series(&self, obs: Observable) -> Option<&StroboscopicSeries> {
        self.series.get(&obs)
    }
}

/// Sparse matrix as per-row `(column, value)` lists.
#[derive(Debug, Clone)]
struct SparseRows {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseRows {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let rows = (0..m.dim())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(j, &z)| (j, z)).collect())
            .collect();
        Self { rows }
    }

    /// `out = self · dense`
    fn mul_dense(&self, dense: &[C64], n: usize, out: &mut [C64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let out_row = &mut out[i * n..(i + 1) * n];
            out_row.fill(ZERO);
            for &(k, g) in row {
                let src = &dense[k * n..(k + 1) * n];
                for (o, &r) in out_row.iter_mut().zip(src) {
                    *o += g * r;
                }
            }
        }
    }
}

/// Reused buffers for one RK4 trajectory.
struct Workspace {
    k: Vec<C64>,
    stage: Vec<C64>,
    deriv: Vec<C64>,
    scratch_g: Vec<C64>,
    scratch_a: Vec<C64>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        let z = vec![ZERO; dim * dim];
        Self { k: z.clone(), stage: z.clone(), deriv: z.clone(), scratch_g: z.clone(), scratch_a: z }
    }
}

/// A compiled master equation for one model configuration and step size.
///
/// Immutable after construction; one engine can drive any number of
/// trajectories from many threads.
#[derive(Debug, Clone)]
pub struct LindbladEngine {
    cfg: ModelConfig,
    ops: ModelOperators,
    parity: ComplexMatrix,
    h0: ComplexMatrix,
    coupling: ComplexMatrix,
    generator_on: SparseRows,
    generator_off: SparseRows,
    jump: SparseRows,
    dt: f64,
    steps_per_half: u64,
}

impl LindbladEngine {
    /// Compiles the generator; `dt` must divide `T/2`.
    pub fn new(cfg: &ModelConfig, ops: &ModelOperators, dt: f64) -> Result<Self, EngineError> {
        cfg.validate()?;
        let half = 0.5 * cfg.period();
        let steps = (half / dt).round();
        if !(dt > 0.0) || steps < 1.0 || (steps * dt - half).abs() > 1e-9 * half {
            return Err(EngineError::StepMisaligned { dt, half_period: half });
        }
        let steps_per_half = steps as u64;
        let (h0, coupling) = model::hamiltonian_parts(cfg, ops);
        let generator = |lambda: f64| {
            let mut h = h0.clone();
            h.add_scaled(C64::new(lambda, 0.0), &coupling);
            let mut g = h.scale(C64::new(0.0, -1.0));
            g.add_scaled(C64::new(-0.5 * cfg.kappa, 0.0), &ops.number);
            SparseRows::from_dense(&g)
        };
        Ok(Self {
            cfg: cfg.clone(),
            ops: ops.clone(),
            parity: model::parity_operator(ops),
            generator_on: generator(cfg.lambda0),
            generator_off: generator(0.0),
            h0,
            coupling,
            jump: SparseRows::from_dense(&ops.a),
            dt: half / steps,
            steps_per_half,
        })
    }

    /// Engine with `steps_per_period` steps per drive period (must be even).
    pub fn with_steps_per_period(cfg: &ModelConfig, ops: &ModelOperators, steps_per_period: u64) -> Result<Self, EngineError> {
        Self::new(cfg, ops, cfg.period() / steps_per_period as f64)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn operators(&self) -> &ModelOperators {
        &self.ops
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_per_period(&self) -> u64 {
        2 * self.steps_per_half
    }

    /// Time of step boundary `step`.
    pub fn time_of(&self, step: u64) -> f64 {
        step as f64 * self.dt
    }

    /// Coupling applied during step `step → step + 1`.
    ///
    /// Steps never straddle a switching time, so the drive is read at the
    /// step midpoint and held for all four RK4 stages.
    pub fn lambda_for_step(&self, step: u64) -> f64 {
        model::drive_lambda(&self.cfg, (step as f64 + 0.5) * self.dt)
    }

    pub fn hamiltonian(&self, lambda: f64) -> ComplexMatrix {
        let mut h = self.h0.clone();
        h.add_scaled(C64::new(lambda, 0.0), &self.coupling);
        h
    }

    fn generator(&self, lambda: f64) -> std::borrow::Cow<'_, SparseRows> {
        use std::borrow::Cow;
        if lambda == self.cfg.lambda0 {
            Cow::Borrowed(&self.generator_on)
        } else if lambda == 0.0 {
            Cow::Borrowed(&self.generator_off)
        } else {
            let mut g = self.hamiltonian(lambda).scale(C64::new(0.0, -1.0));
            g.add_scaled(C64::new(-0.5 * self.cfg.kappa, 0.0), &self.ops.number);
            Cow::Owned(SparseRows::from_dense(&g))
        }
    }

    fn rhs_into(&self, generator: &SparseRows, rho: &[C64], out: &mut [C64], ws_g: &mut [C64], ws_a: &mut [C64]) {
        let n = self.ops.joint_dim();
        generator.mul_dense(rho, n, ws_g);
        let kappa = self.cfg.kappa;
        if kappa != 0.0 {
            self.jump.mul_dense(rho, n, ws_a);
        }
        // Only the upper triangle is computed and then mirrored, so the
        // result is Hermitian to the last bit and rounding cannot seed an
        // anti-Hermitian part in ρ.
        for i in 0..n {
            for j in i..n {
                let mut v = ws_g[i * n + j] + ws_g[j * n + i].conj();
                if kappa != 0.0 {
                    // (a ρ a†)_{ij} = Σ_l (aρ)_{il} conj(a_{jl})
                    let mut jump = ZERO;
                    for &(l, a) in &self.jump.rows[j] {
                        jump += ws_a[i * n + l] * a.conj();
                    }
                    v += kappa * jump;
                }
                if i == j {
                    v.im = 0.0;
                }
                out[i * n + j] = v;
                out[j * n + i] = v.conj();
            }
        }
    }

    /// Right-hand side at coupling `lambda`, via the sparse kernel.
    pub fn rhs(&self, rho: &ComplexMatrix, lambda: f64) -> ComplexMatrix {
        let n = self.ops.joint_dim();
        let mut out = vec![ZERO; n * n];
        let mut g = vec![ZERO; n * n];
        let mut a = vec![ZERO; n * n];
        self.rhs_into(&self.generator(lambda), rho.as_slice(), &mut out, &mut g, &mut a);
        ComplexMatrix::from_vec(n, out).expect("square")
    }

    fn rk4_step(&self, rho: &mut [C64], lambda: f64, ws: &mut Workspace) {
        let generator = self.generator(lambda);
        let dt = self.dt;
        let Workspace { k, stage, deriv, scratch_g, scratch_a } = ws;

        self.rhs_into(&generator, rho, deriv, scratch_g, scratch_a);
        for ((kk, st), (&r, &d)) in k.iter_mut().zip(stage.iter_mut()).zip(rho.iter().zip(deriv.iter())) {
            *kk = d;
            *st = r + 0.5 * dt * d;
        }
        self.rhs_into(&generator, stage, deriv, scratch_g, scratch_a);
        for ((kk, st), (&r, &d)) in k.iter_mut().zip(stage.iter_mut()).zip(rho.iter().zip(deriv.iter())) {
            *kk += 2.0 * d;
            *st = r + 0.5 * dt * d;
        }
        self.rhs_into(&generator, stage, deriv, scratch_g, scratch_a);
        for ((kk, st), (&r, &d)) in k.iter_mut().zip(stage.iter_mut()).zip(rho.iter().zip(deriv.iter())) {
            *kk += 2.0 * d;
            *st = r + dt * d;
        }
        self.rhs_into(&generator, stage, deriv, scratch_g, scratch_a);
        for ((r, &kk), &d) in rho.iter_mut().zip(k.iter()).zip(deriv.iter()) {
            *r += dt / 6.0 * (kk + d);
        }
    }

    fn check_state(&self, state: &DensityState) -> Result<u64, EngineError> {
        let n = self.ops.joint_dim();
        if state.rho.dim() != n {
            return Err(EngineError::DimensionMismatch { state: state.rho.dim(), model: n });
        }
        let start = (state.t / self.dt).round();
        if (start * self.dt - state.t).abs() > 1e-9 * self.dt.max(state.t) {
            return Err(EngineError::StepMisaligned { dt: self.dt, half_period: 0.5 * self.cfg.period() });
        }
        Ok(start as u64)
    }

    /// Advances `state` by `n_steps`, calling `observer(step, t, ρ)` at the
    /// start and after every step.
    pub fn run_steps(
        &self,
        state: &DensityState,
        n_steps: u64,
        mut observer: impl FnMut(u64, f64, &ComplexMatrix),
    ) -> Result<DensityState, EngineError> {
        let start = self.check_state(state)?;
        let n = self.ops.joint_dim();
        let mut rho = state.rho.clone();
        let mut ws = Workspace::new(n);
        observer(start, self.time_of(start), &rho);
        for step in start..start + n_steps {
            self.rk4_step(rho.as_mut_slice(), self.lambda_for_step(step), &mut ws);
            observer(step + 1, self.time_of(step + 1), &rho);
        }
        let end = start + n_steps;
        Ok(DensityState::new(rho, self.time_of(end), state.qubit_dim, state.field_dim))
    }

    fn observe(&self, obs: Observable, state: &DensityState) -> Result<f64, EngineError> {
        let per_spin = |op: &ComplexMatrix| {
            if self.ops.n_qubits == 0 {
                0.0
            } else {
                expectation(op, &state.rho).re / self.ops.n_qubits as f64
            }
        };
        Ok(match obs {
            Observable::Jx => per_spin(&self.ops.jx),
            Observable::Jy => per_spin(&self.ops.jy),
            Observable::Jz => per_spin(&self.ops.jz),
            Observable::PhotonNumber => expectation(&self.ops.number, &state.rho).re,
            Observable::Purity => state.purity(),
            Observable::LogNegativity => state.log_negativity()?,
            Observable::Parity => expectation(&self.parity, &state.rho).re,
        })
    }

    /// Integrates `horizon_periods` periods from `state`, sampling
    /// `observables` and the health diagnostics at every `t = nT`.
    pub fn evolve_with(
        &self,
        state: &DensityState,
        horizon_periods: u64,
        observables: &[Observable],
    ) -> Result<Evolution, EngineError> {
        if horizon_periods == 0 {
            return Err(EngineError::EmptyHorizon);
        }
        let start = self.check_state(state)?;
        let spp = self.steps_per_period();
        let period = self.cfg.period();
        let mut series: BTreeMap<Observable, StroboscopicSeries> = observables
            .iter()
            .map(|&o| (o, StroboscopicSeries::new(o.name(), period, SeriesSource::Quantum(self.cfg.clone()))))
            .collect();
        let mut health = Health::default();
        let first_period = start.div_ceil(spp);

        let mut current = state.clone();
        // Align to the first period boundary.
        let lead = first_period * spp - start;
        if lead > 0 {
            current = self.run_steps(&current, lead, |_, _, _| {})?;
        }
        let last_period = first_period + horizon_periods;
        for n in first_period..=last_period {
            if n > first_period {
                current = self.run_steps(&current, spp, |_, _, _| {})?;
            }
            self.record_health(&current, n, &mut health)?;
            for (&obs, s) in series.iter_mut() {
                let v = self.observe(obs, &current)?;
                s.push(n, v).expect("periods increase");
            }
        }
        Ok(Evolution { final_state: current, series, health })
    }

    pub fn evolve(&self, state: &DensityState, horizon_periods: u64) -> Result<Evolution, EngineError> {
        self.evolve_with(state, horizon_periods, &Observable::DEFAULT)
    }

    fn record_health(&self, state: &DensityState, period: u64, health: &mut Health) -> Result<(), EngineError> {
        health.max_trace_drift = health.max_trace_drift.max((state.rho.trace() - C64::new(1.0, 0.0)).norm());
        health.max_hermiticity_error = health.max_hermiticity_error.max(state.rho.hermiticity_error());
        health.max_purity = health.max_purity.max(state.purity());
        let min_eig = state.min_eigenvalue()?;
        health.min_eigenvalue = health.min_eigenvalue.min(min_eig);
        if min_eig < POSITIVITY_ABORT {
            return Err(EngineError::PositivityLost { period, min_eigenvalue: min_eig });
        }
        Ok(())
    }
}

/// Literal dense right-hand side
/// `−i[H(λ(t)), ρ] + κ(aρa† − ½{a†a, ρ})` with `λ(t)` from the drive.
pub fn lindblad_rhs(cfg: &ModelConfig, ops: &ModelOperators, rho: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let h = model::hamiltonian(cfg, ops, model::drive_lambda(cfg, t));
    let mut out = commutator(&h, rho).expect("dims").scale(C64::new(0.0, -1.0));
    let jump = &(&ops.a * rho) * &ops.a_dag;
    let anti = anticommutator(&ops.number, rho).expect("dims");
    out.add_scaled(C64::new(cfg.kappa, 0.0), &jump);
    out.add_scaled(C64::new(-0.5 * cfg.kappa, 0.0), &anti);
    out
}

/// Default step `T/500`.
pub fn default_dt(cfg: &ModelConfig) -> f64 {
    cfg.period() / DEFAULT_STEPS_PER_PERIOD as f64
}

/// Integrates from `state` for `horizon_periods` with step `dt`.
pub fn evolve(
    cfg: &ModelConfig,
    ops: &ModelOperators,
    state: &DensityState,
    horizon_periods: u64,
    dt: f64,
) -> Result<Evolution, EngineError> {
    LindbladEngine::new(cfg, ops, dt)?.evolve(state, horizon_periods)
}

/// Builds operators and the `|⇒⟩⊗|0⟩` state and integrates.
pub fn simulate(cfg: &ModelConfig, horizon_periods: u64, dt: f64) -> Result<Evolution, EngineError> {
    let ops = model::build_operators(cfg);
    let engine = LindbladEngine::new(cfg, &ops, dt)?;
    let state = model::initial_state(&ops)?;
    engine.evolve(&state, horizon_periods)
}
