//! Operators and parameters of the transmon-modulated open Dicke model.
//!
//! The joint Hilbert space is ordered qubit-major: composite index
//! `q * field_dim + n`, where `q` labels the qubit basis (computational basis
//! or Dicke basis) and `n` the field Fock level. In both qubit
//! representations `J_z` is diagonal and the first qubit basis state is the
//! fully polarized `m = +N/2` state.

mod sector;

pub use sector::{dicke_embedding, sector_equivalence_check, symmetric_sector_projector, SectorReport};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::lindblad::DensityState;
use crate::linalg::{self, kron, ComplexMatrix, LinalgError, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("top J_x eigenvalue is degenerate (gap {gap:e})")]
    DegenerateTopEigenvalue { gap: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How the qubit ensemble is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// All `2^N` computational basis states.
    FullTensor,
    /// The `N + 1` permutation-symmetric Dicke states.
    SymmetricSector,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::FullTensor => "full",
            Representation::SymmetricSector => "symmetric",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Representation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "full" | "full_tensor" | "FullTensor" => Ok(Representation::FullTensor),
            "symmetric" | "symmetric_sector" | "SymmetricSector" => Ok(Representation::SymmetricSector),
            other => Err(format!("unknown representation `{other}` (expected full|symmetric)")),
        }
    }
}

/// Time dependence of the coupling `λ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DriveMode {
    /// `λ = λ₀` on the first half of every period and `0` on the second.
    Switched,
    /// `λ = λ₀` at all times.
    Constant,
}

impl DriveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DriveMode::Switched => "switched",
            DriveMode::Constant => "constant",
        }
    }

    /// Coupling at time `t` for drive amplitude `lambda0` and period `period`.
    pub fn lambda_at(self, lambda0: f64, period: f64, t: f64) -> f64 {
        match self {
            DriveMode::Constant => lambda0,
            DriveMode::Switched => {
                if t.rem_euclid(period) < 0.5 * period {
                    lambda0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for DriveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DriveMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "switched" => Ok(DriveMode::Switched),
            "constant" => Ok(DriveMode::Constant),
            other => Err(format!("unknown drive mode `{other}` (expected switched|constant)")),
        }
    }
}

/// Physical parameters of one model instance. Frequencies are in units of
/// the drive frequency unless `omega_t` is changed from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub n_qubits: usize,
    /// Fock-space truncation `M`.
    pub field_levels: usize,
    pub lambda0: f64,
    pub kappa: f64,
    pub epsilon: f64,
    /// Anharmonicity; `0` for a photon, negative for a transmon.
    pub eta: f64,
    pub omega_t: f64,
    pub representation: Representation,
    pub drive: DriveMode,
}

impl ModelConfig {
    /// Defaults: `M = 16`, `λ₀ = 1`, `κ = 0.05`, resonant photon field,
    /// `ω_T = 1`, symmetric sector, switched drive.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            field_levels: 16,
            lambda0: 1.0,
            kappa: 0.05,
            epsilon: 0.0,
            eta: 0.0,
            omega_t: 1.0,
            representation: Representation::SymmetricSector,
            drive: DriveMode::Switched,
        }
    }

    pub fn with_field_levels(mut self, m: usize) -> Self {
        self.field_levels = m;
        self
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_omega_t(mut self, omega_t: f64) -> Self {
        self.omega_t = omega_t;
        self
    }

    pub fn with_representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }

    pub fn with_drive(mut self, drive: DriveMode) -> Self {
        self.drive = drive;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter { name, reason: format!("{v} is not finite") })
            }
        };
        finite("lambda0", self.lambda0)?;
        finite("kappa", self.kappa)?;
        finite("epsilon", self.epsilon)?;
        finite("eta", self.eta)?;
        finite("omega_t", self.omega_t)?;
        if self.field_levels < 2 {
            return Err(ModelError::InvalidParameter {
                name: "field_levels",
                reason: format!("{} < 2", self.field_levels),
            });
        }
        if self.omega_t <= 0.0 {
            return Err(ModelError::InvalidParameter { name: "omega_t", reason: "must be > 0".into() });
        }
        if self.lambda0 < 0.0 {
            return Err(ModelError::InvalidParameter { name: "lambda0", reason: "must be >= 0".into() });
        }
        if self.kappa < 0.0 {
            return Err(ModelError::InvalidParameter { name: "kappa", reason: "must be >= 0".into() });
        }
        if self.eta > 0.0 {
            return Err(ModelError::InvalidParameter { name: "eta", reason: "must be <= 0".into() });
        }
        if self.representation == Representation::FullTensor && self.n_qubits > 12 {
            return Err(ModelError::InvalidParameter {
                name: "n_qubits",
                reason: "full tensor representation limited to 12 qubits".into(),
            });
        }
        Ok(())
    }

    /// Drive period `T = 2π/ω_T`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_t
    }

    /// Field frequency `ω = (1 - ε) ω_T`.
    pub fn omega(&self) -> f64 {
        (1.0 - self.epsilon) * self.omega_t
    }

    /// Qubit frequency `ω₀ = (1 + ε) ω_T`.
    pub fn omega0(&self) -> f64 {
        (1.0 + self.epsilon) * self.omega_t
    }

    /// Quartic-term strength of the mean-field Hamiltonian, `α = -η N / 12`.
    pub fn alpha(&self) -> f64 {
        crate::semiclassical::alpha_from_eta(self.eta, self.n_qubits)
    }

    pub fn qubit_dim(&self) -> usize {
        match self.representation {
            Representation::FullTensor => 1 << self.n_qubits,
            Representation::SymmetricSector => self.n_qubits + 1,
        }
    }

    pub fn field_dim(&self) -> usize {
        self.field_levels
    }

    pub fn joint_dim(&self) -> usize {
        self.qubit_dim() * self.field_dim()
    }

    pub fn critical_coupling(&self) -> f64 {
        critical_coupling(self.omega(), self.omega0(), self.kappa)
    }
}

/// All operators on the joint space, plus the collective spin on the qubit
/// factor alone.
#[derive(Debug, Clone)]
pub struct ModelOperators {
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    /// `a†a`
    pub number: ComplexMatrix,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
    /// `[J_x, J_y, J_z]` on the qubit factor only.
    pub qubit_spin: [ComplexMatrix; 3],
    pub n_qubits: usize,
    pub qubit_dim: usize,
    pub field_dim: usize,
}

impl ModelOperators {
    pub fn joint_dim(&self) -> usize {
        self.qubit_dim * self.field_dim
    }
}

/// Truncated annihilation operator: `a[n-1, n] = √n`.
pub fn annihilation(levels: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(levels);
    for n in 1..levels {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Spin-`N/2` matrices in the Dicke basis `m = N/2, N/2 - 1, …, -N/2`.
pub fn collective_spin_symmetric(n_qubits: usize) -> [ComplexMatrix; 3] {
    let dim = n_qubits + 1;
    let j = n_qubits as f64 / 2.0;
    let m_of = |k: usize| j - k as f64;
    let mut jplus = ComplexMatrix::zeros(dim);
    for k in 1..dim {
        let m = m_of(k);
        jplus[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.dagger();
    let jx = (&jplus + &jminus).scale_real(0.5);
    let jy = (&jplus - &jminus).scale(C64::new(0.0, -0.5));
    let jz = ComplexMatrix::diag_real(&(0..dim).map(m_of).collect::<Vec<_>>());
    [jx, jy, jz]
}

/// `J_μ = ½ Σ_j σ_j^μ` on `2^N` computational states; qubit 0 is the most
/// significant factor.
pub fn collective_spin_full(n_qubits: usize) -> [ComplexMatrix; 3] {
    let dim = 1usize << n_qubits;
    let paulis = [linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()];
    let mut out = [ComplexMatrix::zeros(dim), ComplexMatrix::zeros(dim), ComplexMatrix::zeros(dim)];
    for (mu, sigma) in paulis.iter().enumerate() {
        for site in 0..n_qubits {
            let left = ComplexMatrix::identity(1 << site);
            let right = ComplexMatrix::identity(1 << (n_qubits - site - 1));
            let term = kron(&kron(&left, sigma), &right);
            out[mu].add_scaled(C64::new(0.5, 0.0), &term);
        }
    }
    out
}

pub fn build_operators(cfg: &ModelConfig) -> ModelOperators {
    let qubit_spin = match cfg.representation {
        Representation::FullTensor => collective_spin_full(cfg.n_qubits),
        Representation::SymmetricSector => collective_spin_symmetric(cfg.n_qubits),
    };
    let qubit_dim = qubit_spin[0].dim();
    let field_dim = cfg.field_levels;
    let iq = ComplexMatrix::identity(qubit_dim);
    let ifield = ComplexMatrix::identity(field_dim);
    let a_field = annihilation(field_dim);
    let a = kron(&iq, &a_field);
    let a_dag = a.dagger();
    let number = kron(&iq, &(&a_field.dagger() * &a_field));
    let [jx, jy, jz] = qubit_spin.clone().map(|j| kron(&j, &ifield));
    ModelOperators { a, a_dag, number, jx, jy, jz, qubit_spin, n_qubits: cfg.n_qubits, qubit_dim, field_dim }
}

/// `H_f = (ω + η/2) a†a + (η/2)(a†a)²` on the field factor alone.
pub fn field_hamiltonian(cfg: &ModelConfig) -> ComplexMatrix {
    let omega = cfg.omega();
    let eta = cfg.eta;
    let levels: Vec<f64> = (0..cfg.field_levels)
        .map(|n| {
            let n = n as f64;
            (omega + 0.5 * eta) * n + 0.5 * eta * n * n
        })
        .collect();
    ComplexMatrix::diag_real(&levels)
}

/// Transmon ladder `E_n = n ω̃ + n(n-1)/2 η` with `ω̃ = ω + η`.
pub fn transmon_level(omega: f64, eta: f64, n: usize) -> f64 {
    let n = n as f64;
    n * (omega + eta) + 0.5 * n * (n - 1.0) * eta
}

/// The λ-independent part `H_f + ω₀ J_z` and the coupling operator
/// `(2/√N)(a + a†) J_x`, so that `H(λ) = h0 + λ·coupling`.
pub fn hamiltonian_parts(cfg: &ModelConfig, ops: &ModelOperators) -> (ComplexMatrix, ComplexMatrix) {
    let hf = kron(&ComplexMatrix::identity(ops.qubit_dim), &field_hamiltonian(cfg));
    let mut h0 = hf;
    h0.add_scaled(C64::new(cfg.omega0(), 0.0), &ops.jz);
    let coupling = if cfg.n_qubits == 0 {
        ComplexMatrix::zeros(ops.joint_dim())
    } else {
        let quad = &ops.a + &ops.a_dag;
        (&quad * &ops.jx).scale_real(2.0 / (cfg.n_qubits as f64).sqrt())
    };
    (h0, coupling)
}

/// `H(λ) = H_f(ω, η) + ω₀ J_z + (2λ/√N)(a + a†) J_x`.
pub fn hamiltonian(cfg: &ModelConfig, ops: &ModelOperators, lambda_now: f64) -> ComplexMatrix {
    let (mut h, coupling) = hamiltonian_parts(cfg, ops);
    h.add_scaled(C64::new(lambda_now, 0.0), &coupling);
    h
}

pub fn drive_lambda(cfg: &ModelConfig, t: f64) -> f64 {
    cfg.drive.lambda_at(cfg.lambda0, cfg.period(), t)
}

/// `P = exp[-iπ(a†a + J_z + N/2)]`.
///
/// The `N/2` shift turns the exponent into the integer excitation count, so
/// `P` is real diagonal with entries `±1` and `P² = I` exactly. It differs
/// from `exp[-iπ(a†a + J_z)]` by the global phase `e^{-iπN/2}`.
pub fn parity_operator(ops: &ModelOperators) -> ComplexMatrix {
    let mut generator = &ops.number + &ops.jz;
    let shift = ops.n_qubits as f64 / 2.0;
    for i in 0..generator.dim() {
        generator[(i, i)] += shift;
    }
    if generator.is_diagonal() {
        let entries: Vec<C64> = generator
            .diagonal()
            .iter()
            .map(|g| {
                let k = g.re.round();
                if (g.re - k).abs() < 1e-9 && g.im.abs() < 1e-12 {
                    if (k as i64).rem_euclid(2) == 0 { ONE } else { -ONE }
                } else {
                    C64::from_polar(1.0, -PI * g.re)
                }
            })
            .collect();
        ComplexMatrix::diag(&entries)
    } else {
        linalg::unitary_propagator(&generator, PI).expect("parity generator is Hermitian")
    }
}

/// Superradiant critical coupling of the open Dicke model,
/// `λ_c = ½ √(ω₀ (ω² + κ²/4) / ω)`.
pub fn critical_coupling(omega: f64, omega0: f64, kappa: f64) -> f64 {
    0.5 * (omega0 * (omega * omega + 0.25 * kappa * kappa) / omega).sqrt()
}

/// `|⇒⟩` on the qubit factor: the top `J_x` eigenvector, phase chosen so the
/// largest-modulus amplitude is real and positive.
pub fn polarized_x_state(ops: &ModelOperators) -> Result<Vec<C64>, ModelError> {
    let jx = &ops.qubit_spin[0];
    let eig = jx.hermitian_eigen()?;
    let d = eig.values.len();
    if d >= 2 {
        let gap = eig.values[d - 1] - eig.values[d - 2];
        if gap < 1e-8 {
            return Err(ModelError::DegenerateTopEigenvalue { gap });
        }
    }
    let mut v = eig.eigenvector(d - 1);
    let max_mod = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // First index attaining the maximum, with slack for ties.
    let pivot = v.iter().position(|z| z.norm() >= max_mod * (1.0 - 1e-12)).unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    Ok(v)
}

/// `|⇒⟩ ⊗ |0⟩` as a density matrix at `t = 0`.
pub fn initial_state(ops: &ModelOperators) -> Result<DensityState, ModelError> {
    fock_state(ops, 0)
}

/// `|⇒⟩ ⊗ |n⟩` as a density matrix at `t = 0`.
pub fn fock_state(ops: &ModelOperators, n: usize) -> Result<DensityState, ModelError> {
    let qubits = polarized_x_state(ops)?;
    let mut fock = vec![ZERO; ops.field_dim];
    fock[n] = ONE;
    let joint: Vec<C64> = qubits.iter().flat_map(|&q| fock.iter().map(move |&f| q * f)).collect();
    Ok(DensityState::new(ComplexMatrix::outer(&joint), 0.0, ops.qubit_dim, ops.field_dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, expectation, hermitian_eigen, I};

    fn spin_algebra_holds(spin: &[ComplexMatrix; 3]) {
        let [jx, jy, jz] = spin;
        let pairs = [(jx, jy, jz), (jy, jz, jx), (jz, jx, jy)];
        for (a, b, c) in pairs {
            let comm = commutator(a, b).unwrap();
            assert!(comm.max_abs_diff(&c.scale(I)) < 1e-12);
        }
    }

    #[test]
    fn spin_commutators_both_representations() {
        for n in 0..=4 {
            spin_algebra_holds(&collective_spin_symmetric(n));
            spin_algebra_holds(&collective_spin_full(n));
            for rep in [Representation::FullTensor, Representation::SymmetricSector] {
                let ops = build_operators(&ModelConfig::new(n).with_field_levels(3).with_representation(rep));
                spin_algebra_holds(&[ops.jx.clone(), ops.jy.clone(), ops.jz.clone()]);
            }
        }
    }

    #[test]
    fn casimir_on_symmetric_sector() {
        for n in 0..=5 {
            let [jx, jy, jz] = collective_spin_symmetric(n);
            let c = &(&(&jx * &jx) + &(&jy * &jy)) + &(&jz * &jz);
            let j = n as f64 / 2.0;
            assert!(c.max_abs_diff(&ComplexMatrix::identity(n + 1).scale_real(j * (j + 1.0))) < 1e-12);
        }
    }

    #[test]
    fn single_qubit_jz() {
        let cfg = ModelConfig::new(1).with_field_levels(4);
        let ops = build_operators(&cfg);
        let expected = kron(&linalg::pauli_z().scale_real(0.5), &ComplexMatrix::identity(4));
        assert_eq!(ops.jz, expected);
    }

    #[test]
    fn two_qubit_full_jx_spectrum() {
        let cfg = ModelConfig::new(2).with_field_levels(2).with_representation(Representation::FullTensor);
        let ops = build_operators(&cfg);
        assert_eq!(ops.joint_dim(), 8);
        let vals = hermitian_eigen(&ops.jx).unwrap().values;
        let expected = [-1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_operator_action() {
        let a = annihilation(3);
        let ket2 = vec![ZERO, ZERO, ONE];
        let out = a.apply(&ket2);
        assert!((out[1] - C64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(out[0].norm() == 0.0 && out[2].norm() == 0.0);
    }

    #[test]
    fn adag_is_dagger_and_truncated_ccr() {
        let ops = build_operators(&ModelConfig::new(2).with_field_levels(6));
        assert_eq!(ops.a_dag, ops.a.dagger());
        let ccr = commutator(&ops.a, &ops.a_dag).unwrap();
        for q in 0..ops.qubit_dim {
            for n in 0..ops.field_dim - 1 {
                let i = q * ops.field_dim + n;
                assert!((ccr[(i, i)] - ONE).norm() < 1e-12);
            }
            let top = q * ops.field_dim + ops.field_dim - 1;
            assert!((ccr[(top, top)] - ONE).norm() > 1.0);
        }
    }

    #[test]
    fn field_spectrum_follows_transmon_ladder() {
        let cfg = ModelConfig::new(0).with_eta(-0.01).with_field_levels(16);
        let hf = field_hamiltonian(&cfg);
        for n in 0..16 {
            assert!((hf[(n, n)].re - transmon_level(cfg.omega(), cfg.eta, n)).abs() < 1e-12);
        }
        assert!((hf[(2, 2)].re - 1.97).abs() < 1e-12);
        let harmonic = field_hamiltonian(&ModelConfig::new(0).with_field_levels(5));
        for n in 0..5 {
            assert_eq!(harmonic[(n, n)].re, n as f64);
        }
    }

    #[test]
    fn decoupled_hamiltonian_is_diagonal() {
        let cfg = ModelConfig::new(2).with_field_levels(4).with_epsilon(0.02);
        let ops = build_operators(&cfg);
        let h = hamiltonian(&cfg, &ops, 0.0);
        assert!(h.is_diagonal());
        let m_values = [1.0, 0.0, -1.0];
        for (q, m) in m_values.iter().enumerate() {
            for n in 0..4 {
                let i = q * 4 + n;
                let expected = 0.98 * n as f64 + 1.02 * m;
                assert!((h[(i, i)].re - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_limit_reproduces_dicke_hamiltonian() {
        let cfg = ModelConfig::new(3).with_field_levels(5).with_epsilon(0.03);
        let ops = build_operators(&cfg);
        let lambda = 0.7;
        let mut dicke = ops.number.scale_real(cfg.omega());
        dicke.add_scaled(C64::new(cfg.omega0(), 0.0), &ops.jz);
        let coupling = &(&ops.a_dag + &ops.a) * &ops.jx;
        dicke.add_scaled(C64::new(2.0 * lambda / 3f64.sqrt(), 0.0), &coupling);
        assert!(hamiltonian(&cfg, &ops, lambda).max_abs_diff(&dicke) < 1e-14);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let cfg = ModelConfig::new(3).with_eta(-0.01).with_epsilon(0.05).with_representation(Representation::FullTensor);
        let ops = build_operators(&cfg);
        assert!(hamiltonian(&cfg, &ops, 1.0).hermiticity_error() < 1e-12);
    }

    #[test]
    fn parity_commutes_with_hamiltonian() {
        for rep in [Representation::FullTensor, Representation::SymmetricSector] {
            for eta in [0.0, -0.01] {
                let cfg = ModelConfig::new(2).with_field_levels(8).with_eta(eta).with_representation(rep);
                let ops = build_operators(&cfg);
                let p = parity_operator(&ops);
                for lambda in [0.0, 0.3, 1.0, 2.5] {
                    let h = hamiltonian(&cfg, &ops, lambda);
                    assert!(commutator(&h, &p).unwrap().max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parity_properties() {
        let ops = build_operators(&ModelConfig::new(0).with_field_levels(4));
        assert_eq!(parity_operator(&ops), ComplexMatrix::diag_real(&[1.0, -1.0, 1.0, -1.0]));
        for n in 1..=3 {
            let ops = build_operators(&ModelConfig::new(n).with_field_levels(5));
            let p = parity_operator(&ops);
            assert_eq!(&p * &p, ComplexMatrix::identity(ops.joint_dim()));
            assert!(p.diagonal().iter().all(|z| *z == ONE || *z == -ONE));
            let flipped = &(&p * &ops.jx) * &p.dagger();
            assert!(flipped.max_abs_diff(&ops.jx.scale_real(-1.0)) < 1e-12);
        }
    }

    #[test]
    fn free_half_period_propagator_is_parity() {
        for n in 1..=3 {
            let cfg = ModelConfig::new(n).with_field_levels(6).with_lambda0(0.0).with_kappa(0.0);
            let ops = build_operators(&cfg);
            let h = hamiltonian(&cfg, &ops, 0.0);
            let u = linalg::unitary_propagator(&h, cfg.period() / 2.0).unwrap();
            let p = parity_operator(&ops);
            let phase = u[(0, 0)] / p[(0, 0)];
            assert!((phase.norm() - 1.0).abs() < 1e-12);
            assert!(u.max_abs_diff(&p.scale(phase)) < 1e-10);
        }
    }

    #[test]
    fn critical_coupling_values() {
        assert!((critical_coupling(1.0, 1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((critical_coupling(1.0, 1.0, 0.05) - 0.500_156_2).abs() < 1e-6);
        assert!(ModelConfig::new(2).critical_coupling() < 1.0);
    }

    #[test]
    fn drive_schedule() {
        let cfg = ModelConfig::new(2);
        let t = cfg.period();
        assert_eq!(drive_lambda(&cfg, 0.0), 1.0);
        assert_eq!(drive_lambda(&cfg, 0.25 * t), 1.0);
        assert_eq!(drive_lambda(&cfg, 0.5 * t), 0.0);
        assert_eq!(drive_lambda(&cfg, 0.75 * t), 0.0);
        assert_eq!(drive_lambda(&cfg, 1.25 * t), 1.0);
        for k in 0..200 {
            let s = 0.013 * k as f64;
            assert_eq!(drive_lambda(&cfg, s), drive_lambda(&cfg, s + t));
        }
        let constant = cfg.clone().with_drive(DriveMode::Constant);
        assert_eq!(drive_lambda(&constant, 0.75 * t), 1.0);
    }

    #[test]
    fn initial_state_properties() {
        let ops = build_operators(&ModelConfig::new(1).with_field_levels(3));
        let v = polarized_x_state(&ops).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - C64::new(s, 0.0)).norm() < 1e-12 && (v[1] - C64::new(s, 0.0)).norm() < 1e-12);
        for rep in [Representation::FullTensor, Representation::SymmetricSector] {
            for n in 1..=4 {
                let cfg = ModelConfig::new(n).with_field_levels(4).with_representation(rep);
                let ops = build_operators(&cfg);
                let st = initial_state(&ops).unwrap();
                assert!((st.rho.trace() - ONE).norm() < 1e-12);
                assert!((expectation(&st.rho, &st.rho).re - 1.0).abs() < 1e-12);
                assert!((expectation(&ops.jx, &st.rho).re / n as f64 - 0.5).abs() < 1e-12);
                assert!(expectation(&ops.number, &st.rho).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(ModelConfig::new(2).with_field_levels(1).validate().is_err());
        assert!(ModelConfig::new(2).with_eta(0.1).validate().is_err());
        assert!(ModelConfig::new(2).with_kappa(-1.0).validate().is_err());
        assert!(ModelConfig::new(2).with_omega_t(0.0).validate().is_err());
        assert!(ModelConfig::new(2).with_epsilon(f64::NAN).validate().is_err());
        assert!(ModelConfig::new(0).validate().is_ok());
    }
}
