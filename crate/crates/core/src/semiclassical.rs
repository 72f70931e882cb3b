//! Mean-field dynamics in the thermodynamic limit.
//!
//! Variables are the magnetization per spin `j_μ = ⟨J_μ⟩/N` and the scaled
//! quadratures `x = ⟨a + a†⟩/√(2Nω)`, `p = i⟨a† − a⟩/√(2N/ω)`. Operator
//! products are factorized into products of means. The quartic field term
//! enters with strength `α`, related to the quantum anharmonicity by
//! `η = −12α/N`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{critical_coupling, DriveMode};
use crate::series::{SeriesSource, StroboscopicSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemiclassicalError {
    #[error("coupling {lambda} is below the critical value {critical}; no symmetry-broken fixed point")]
    SubcriticalCoupling { lambda: f64, critical: f64 },
    #[error("step {dt} does not divide the half period {half_period}")]
    StepMisaligned { dt: f64, half_period: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalParams {
    pub omega: f64,
    pub omega0: f64,
    /// Drive amplitude `λ₀`; switched by `drive`.
    pub lambda0: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub omega_t: f64,
    pub drive: DriveMode,
}

impl SemiclassicalParams {
    /// `ω = (1−ε)ω_T`, `ω₀ = (1+ε)ω_T` with `ω_T = 1`, `λ₀ = 1`, `κ = 0.05`
    /// and the switched drive.
    pub fn from_detuning(epsilon: f64, alpha: f64) -> Self {
        Self {
            omega: 1.0 - epsilon,
            omega0: 1.0 + epsilon,
            lambda0: 1.0,
            kappa: 0.05,
            alpha,
            omega_t: 1.0,
            drive: DriveMode::Switched,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    pub fn with_drive(mut self, drive: DriveMode) -> Self {
        self.drive = drive;
        self
    }

    /// Rebuilds `ω, ω₀` for detuning `epsilon` at drive frequency `omega_t`.
    pub fn with_detuning(mut self, epsilon: f64, omega_t: f64) -> Self {
        self.omega_t = omega_t;
        self.omega = (1.0 - epsilon) * omega_t;
        self.omega0 = (1.0 + epsilon) * omega_t;
        self
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_t
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        self.drive.lambda_at(self.lambda0, self.period(), t)
    }

    pub fn validate(&self) -> Result<(), SemiclassicalError> {
        let check = |name: &'static str, ok: bool, reason: &str| {
            if ok { Ok(()) } else { Err(SemiclassicalError::InvalidParameter { name, reason: reason.into() }) }
        };
        check("omega", self.omega > 0.0 && self.omega.is_finite(), "must be positive")?;
        check("omega0", self.omega0 > 0.0 && self.omega0.is_finite(), "must be positive")?;
        check("omega_t", self.omega_t > 0.0 && self.omega_t.is_finite(), "must be positive")?;
        check("kappa", self.kappa >= 0.0 && self.kappa.is_finite(), "must be >= 0")?;
        check("lambda0", self.lambda0 >= 0.0 && self.lambda0.is_finite(), "must be >= 0")?;
        check("alpha", self.alpha >= 0.0 && self.alpha.is_finite(), "must be >= 0")?;
        Ok(())
    }

    /// `2λ√(2ω)`, the spin–field coupling of the mean-field equations.
    fn coupling(&self, lambda: f64) -> f64 {
        2.0 * lambda * (2.0 * self.omega).sqrt()
    }
}

/// `α = −η N / 12`
pub fn alpha_from_eta(eta: f64, n_qubits: usize) -> f64 {
    // `+ 0.0` turns a negative zero into a positive one.
    -eta * n_qubits as f64 / 12.0 + 0.0
}

/// `η = −12 α / N`
pub fn eta_from_alpha(alpha: f64, n_qubits: usize) -> f64 {
    -12.0 * alpha / n_qubits as f64 + 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalState {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub x: f64,
    pub p: f64,
    pub t: f64,
}

impl SemiclassicalState {
    pub fn from_array(v: [f64; 5], t: f64) -> Self {
        Self { jx: v[0], jy: v[1], jz: v[2], x: v[3], p: v[4], t }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.jx, self.jy, self.jz, self.x, self.p]
    }

    /// `j_x² + j_y² + j_z²`
    pub fn spin_norm(&self) -> f64 {
        self.jx * self.jx + self.jy * self.jy + self.jz * self.jz
    }
}

/// Time derivative `(ẋ_jx, ẋ_jy, ẋ_jz, ẋ, ṗ)` at coupling `lambda`.
pub fn rhs_at(params: &SemiclassicalParams, s: &SemiclassicalState, lambda: f64) -> [f64; 5] {
    let g = params.coupling(lambda);
    let (w, w0, k, a) = (params.omega, params.omega0, params.kappa, params.alpha);
    [
        -w0 * s.jy,
        w0 * s.jx - g * s.x * s.jz,
        g * s.x * s.jy,
        s.p - 0.5 * k * s.x,
        -w * w * s.x - 0.5 * k * s.p - g * s.jx + 16.0 * a * w * w * s.x.powi(3),
    ]
}

/// Time derivative with `λ` taken from the drive at time `t`.
pub fn rhs(params: &SemiclassicalParams, s: &SemiclassicalState, t: f64) -> [f64; 5] {
    rhs_at(params, s, params.lambda_at(t))
}

/// Initial momentum of the symmetry-broken fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointMomentum {
    /// `p = (κ/2)·x₀`, which makes `ẋ` vanish.
    Corrected,
    /// `p = κ/2` as commonly printed.
    Literal,
}

/// The symmetry-broken stable point for coupling `λ₀`:
///
/// ```text
/// x₀  = −√(2ω(1 − r²)) / (ω² + κ²/4),   r = ω₀(ω² + κ²/4) / (4λ²ω)
/// j_x = (16αω²x₀³ − ω²x₀ − κ²x₀/4) / (2λ√(2ω))
/// j_z = ω₀ (16αω²x₀³ − ω²x₀ − κ²x₀/4) / (8λ²ω x₀)
/// j_y = 0
/// ```
pub fn fixed_point(params: &SemiclassicalParams, momentum: FixedPointMomentum) -> Result<SemiclassicalState, SemiclassicalError> {
    params.validate()?;
    let (w, w0, k, a, l) = (params.omega, params.omega0, params.kappa, params.alpha, params.lambda0);
    let damped = w * w + 0.25 * k * k;
    let r = w0 * damped / (4.0 * l * l * w);
    let radicand = 2.0 * w * (1.0 - r * r);
    if !(l > 0.0) || radicand < 0.0 {
        return Err(SemiclassicalError::SubcriticalCoupling { lambda: l, critical: critical_coupling(w, w0, k) });
    }
    let x0 = -radicand.sqrt() / damped;
    let force = 16.0 * a * w * w * x0.powi(3) - w * w * x0 - 0.25 * k * k * x0;
    let jx = force / (2.0 * l * (2.0 * w).sqrt());
    let jz = if x0 == 0.0 { -0.5 } else { w0 * force / (8.0 * l * l * w * x0) };
    let p = match momentum {
        FixedPointMomentum::Corrected => 0.5 * k * x0,
        FixedPointMomentum::Literal => 0.5 * k,
    };
    Ok(SemiclassicalState { jx, jy: 0.0, jz, x: x0, p, t: 0.0 })
}

/// Stroboscopic samples of a mean-field trajectory.
#[derive(Debug, Clone)]
pub struct SemiclassicalRun {
    pub params: SemiclassicalParams,
    /// `samples[n]` is the state at `t = nT`.
    pub samples: Vec<SemiclassicalState>,
    /// Largest `|norm(t) − norm(0)|` of `j_x² + j_y² + j_z²` over all steps.
    pub max_spin_norm_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Jx,
    Jy,
    Jz,
    X,
    P,
}

impl Component {
    pub const ALL: [Component; 5] = [Component::Jx, Component::Jy, Component::Jz, Component::X, Component::P];

    pub fn name(self) -> &'static str {
        match self {
            Component::Jx => "jx",
            Component::Jy => "jy",
            Component::Jz => "jz",
            Component::X => "x",
            Component::P => "p",
        }
    }

    fn of(self, s: &SemiclassicalState) -> f64 {
        match self {
            Component::Jx => s.jx,
            Component::Jy => s.jy,
            Component::Jz => s.jz,
            Component::X => s.x,
            Component::P => s.p,
        }
    }
}

impl SemiclassicalRun {
    pub fn series(&self, component: Component) -> StroboscopicSeries {
        let mut s = StroboscopicSeries::new(component.name(), self.params.period(), SeriesSource::Semiclassical(self.params));
        for (n, st) in self.samples.iter().enumerate() {
            s.push(n as u64, component.of(st)).expect("ordered");
        }
        s
    }
}

fn add_scaled(base: &[f64; 5], k: &[f64; 5], h: f64) -> [f64; 5] {
    std::array::from_fn(|i| base[i] + h * k[i])
}

/// Steps per half period for `dt`, or an alignment error.
fn steps_per_half(params: &SemiclassicalParams, dt: f64) -> Result<u64, SemiclassicalError> {
    let half = 0.5 * params.period();
    let steps = (half / dt).round();
    if !(dt > 0.0) || steps < 1.0 || (steps * dt - half).abs() > 1e-9 * half {
        return Err(SemiclassicalError::StepMisaligned { dt, half_period: half });
    }
    Ok(steps as u64)
}

/// RK4 integration from `s0` over `horizon_periods` with step `dt`
/// (dividing `T/2`). The drive is constant within each step.
pub fn evolve_sc(
    params: &SemiclassicalParams,
    s0: &SemiclassicalState,
    horizon_periods: u64,
    dt: f64,
) -> Result<SemiclassicalRun, SemiclassicalError> {
    params.validate()?;
    let half_steps = steps_per_half(params, dt)?;
    let h = 0.5 * params.period() / half_steps as f64;
    let spp = 2 * half_steps;
    let norm0 = s0.spin_norm();
    let mut y = s0.to_array();
    let mut samples = Vec::with_capacity(horizon_periods as usize + 1);
    samples.push(SemiclassicalState { t: 0.0, ..*s0 });
    let mut drift: f64 = 0.0;
    let state = |v: [f64; 5]| SemiclassicalState::from_array(v, 0.0);
    for step in 0..horizon_periods * spp {
        let lambda = params.lambda_at((step as f64 + 0.5) * h);
        let k1 = rhs_at(params, &state(y), lambda);
        let k2 = rhs_at(params, &state(add_scaled(&y, &k1, 0.5 * h)), lambda);
        let k3 = rhs_at(params, &state(add_scaled(&y, &k2, 0.5 * h)), lambda);
        let k4 = rhs_at(params, &state(add_scaled(&y, &k3, h)), lambda);
        for i in 0..5 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let current = state(y);
        drift = drift.max((current.spin_norm() - norm0).abs());
        if (step + 1) % spp == 0 {
            let t = (step + 1) as f64 * h;
            samples.push(SemiclassicalState::from_array(y, t));
        }
    }
    Ok(SemiclassicalRun { params: *params, samples, max_spin_norm_drift: drift })
}

/// Doubling score of `j_x` from the corrected fixed point.
pub fn doubling_score_from_fixed_point(
    params: &SemiclassicalParams,
    horizon_periods: u64,
    dt: f64,
) -> Result<(f64, SemiclassicalRun), SemiclassicalError> {
    let s0 = fixed_point(params, FixedPointMomentum::Corrected)?;
    let run = evolve_sc(params, &s0, horizon_periods, dt)?;
    let score = crate::metrics::period_doubling_score(&run.series(Component::Jx));
    Ok((score, run))
}
