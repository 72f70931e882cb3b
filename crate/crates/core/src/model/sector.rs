//! The permutation-symmetric (Dicke) sector and its equivalence with the full
//! tensor-product model.

use num_complex::Complex64 as C64;

use super::{ModelConfig, Representation};
use crate::lindblad::{EngineError, Observable};
use crate::linalg::{kron, ComplexMatrix};

/// Dicke states `|N/2, N/2 − k⟩`, `k = 0..=N`, as real amplitude vectors over
/// the `2^N` computational states: the normalized uniform superposition of
/// all bit strings with `k` ones.
pub fn dicke_embedding(n_qubits: usize) -> Vec<Vec<f64>> {
    let dim = 1usize << n_qubits;
    (0..=n_qubits)
        .map(|k| {
            let members: Vec<usize> = (0..dim).filter(|b| b.count_ones() as usize == k).collect();
            let amp = 1.0 / (members.len() as f64).sqrt();
            let mut v = vec![0.0; dim];
            for b in members {
                v[b] = amp;
            }
            v
        })
        .collect()
}

/// Projector onto the symmetric qubit sector, tensored with the field
/// identity, in the full representation.
pub fn symmetric_sector_projector(n_qubits: usize, field_levels: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let mut p = ComplexMatrix::zeros(dim);
    for v in dicke_embedding(n_qubits) {
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += C64::new(v[i] * v[j], 0.0);
            }
        }
    }
    kron(&p, &ComplexMatrix::identity(field_levels))
}

/// Result of running both qubit representations side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorReport {
    pub max_jx_deviation: f64,
    pub max_logneg_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Largest allowed deviation between representations.
pub const SECTOR_TOL: f64 = 1e-7;

/// Evolves `cfg` in both representations for `periods` periods and compares
/// stroboscopic `j_x` and log-negativity.
///
/// Dicke states have real computational-basis amplitudes, so the partial
/// transpose on the qubits commutes with the sector embedding and the two
/// log-negativities must coincide.
pub fn sector_equivalence_check(cfg: &ModelConfig, periods: u64, dt: f64) -> Result<SectorReport, EngineError> {
    let run = |rep: Representation| {
        let c = cfg.clone().with_representation(rep);
        crate::lindblad::simulate(&c, periods, dt)
    };
    let (full, sym) = rayon::join(|| run(Representation::FullTensor), || run(Representation::SymmetricSector));
    let (full, sym) = (full?, sym?);
    let dev = |obs: Observable| {
        full.series[&obs]
            .values()
            .iter()
            .zip(sym.series[&obs].values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let max_jx_deviation = dev(Observable::Jx);
    let max_logneg_deviation = dev(Observable::LogNegativity);
    Ok(SectorReport {
        max_jx_deviation,
        max_logneg_deviation,
        tolerance: SECTOR_TOL,
        pass: max_jx_deviation <= SECTOR_TOL && max_logneg_deviation <= SECTOR_TOL,
    })
}
