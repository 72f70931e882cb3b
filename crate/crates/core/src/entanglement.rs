//! Qubit–field entanglement: partial transpose, negativity and logarithmic
//! negativity.
//!
//! Composite indices are A-major, `index = i·dim_B + k`, matching the
//! qubit-major ordering of [`crate::model`]. Subsystem A is the qubit
//! ensemble and B the field.

use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::series::StroboscopicSeries;

/// Trace tolerance required before a negativity is reported.
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntanglementError {
    #[error("split {dim_a}x{dim_b} does not match a matrix of dimension {dim}")]
    DimensionMismatch { dim_a: usize, dim_b: usize, dim: usize },
    #[error("density matrix trace {trace} deviates from 1 by more than {TRACE_TOL:e}")]
    NotNormalized { trace: f64 },
    #[error("window [{start}, {end}] not covered by series ending at {last:?}")]
    WindowOutOfRange { start: u64, end: u64, last: Option<u64> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteSplit {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteSplit {
    pub fn new(dim_a: usize, dim_b: usize) -> Self {
        Self { dim_a, dim_b }
    }

    fn check(&self, m: &ComplexMatrix) -> Result<(), EntanglementError> {
        if self.dim_a * self.dim_b != m.dim() {
            return Err(EntanglementError::DimensionMismatch { dim_a: self.dim_a, dim_b: self.dim_b, dim: m.dim() });
        }
        Ok(())
    }
}

/// `ρ^{T_A}`: entry `((i,k),(j,l))` is `ρ((j,k),(i,l))`.
pub fn partial_transpose_a(rho: &ComplexMatrix, split: BipartiteSplit) -> Result<ComplexMatrix, EntanglementError> {
    split.check(rho)?;
    let db = split.dim_b;
    Ok(ComplexMatrix::from_fn(rho.dim(), |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        rho[(j * db + k, i * db + l)]
    }))
}

/// Both forms of the negativity, computed from one spectrum of `ρ^{T_A}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityParts {
    /// `(‖ρ^{T_A}‖₁ − 1)/2`
    pub from_trace_norm: f64,
    /// `Σ |λ|` over negative eigenvalues of `ρ^{T_A}`.
    pub from_negative_eigenvalues: f64,
}

pub fn negativity_parts(rho: &ComplexMatrix, split: BipartiteSplit) -> Result<NegativityParts, EntanglementError> {
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(EntanglementError::NotNormalized { trace });
    }
    let pt = partial_transpose_a(rho, split)?;
    let spectrum = linalg::hermitian_eigenvalues(&pt)?;
    let trace_norm: f64 = spectrum.iter().map(|l| l.abs()).sum();
    let negative: f64 = spectrum.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    Ok(NegativityParts { from_trace_norm: (0.5 * (trace_norm - 1.0)).max(0.0), from_negative_eigenvalues: negative })
}

/// `N(ρ) = (‖ρ^{T_A}‖₁ − 1)/2`.
pub fn negativity(rho: &ComplexMatrix, split: BipartiteSplit) -> Result<f64, EntanglementError> {
    let parts = negativity_parts(rho, split)?;
    debug_assert!(
        (parts.from_trace_norm - parts.from_negative_eigenvalues).abs() <= 1e-10 + (rho.trace().re - 1.0).abs(),
        "negativity forms disagree: {parts:?}"
    );
    Ok(parts.from_trace_norm)
}

/// `log₂(2N + 1)`, in ebits.
pub fn log_negativity_of(negativity: f64) -> f64 {
    (2.0 * negativity + 1.0).log2()
}

pub fn log_negativity(rho: &ComplexMatrix, split: BipartiteSplit) -> Result<f64, EntanglementError> {
    Ok(log_negativity_of(negativity(rho, split)?))
}

/// Mean and max-minus-min of a series over a window of periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturation {
    pub mean: f64,
    pub spread: f64,
}

impl Saturation {
    /// `spread / mean`; infinite when the mean vanishes.
    pub fn relative_spread(&self) -> f64 {
        if self.mean == 0.0 { f64::INFINITY } else { self.spread / self.mean.abs() }
    }
}

/// Window start of the saturated-entanglement average, in periods.
pub const SATURATION_WINDOW_START: u64 = 20;
/// Window length of the saturated-entanglement average, in periods.
pub const SATURATION_WINDOW_LEN: u64 = 80;

/// Saturated value over the closed window `[start·T, (start+len)·T]`.
pub fn saturated_value(
    series: &StroboscopicSeries,
    window_start: u64,
    window_len: u64,
) -> Result<Saturation, EntanglementError> {
    let end = window_start + window_len;
    let covered = series.at(window_start).is_some() && series.last_index().is_some_and(|l| l >= end);
    if !covered {
        return Err(EntanglementError::WindowOutOfRange { start: window_start, end, last: series.last_index() });
    }
    let samples: Vec<f64> = series.window(window_start, end + 1).map(|(_, v)| v).collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Saturation { mean, spread: max - min })
}
