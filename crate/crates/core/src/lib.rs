//! Floquet-driven open Dicke model with an anharmonic (transmon) field.
//!
//! The crate simulates `N` qubits coupled to one lossy bosonic mode whose
//! coupling is switched on and off every half drive period, and measures the
//! resulting period-doubled ("2DTC") response:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, Hermitian
//!   eigendecomposition, trace norm.
//! - [`model`]: spin and field operators, the Hamiltonian, drive schedule,
//!   parity operator, critical coupling, initial states.
//! - [`lindblad`]: RK4 integration of the master equation with stroboscopic
//!   sampling and numerical health monitoring.
//! - [`entanglement`]: partial transpose, negativity, logarithmic negativity.
//! - [`metrics`]: time-crystal lifetime and period-doubling score.
//! - [`semiclassical`]: the mean-field equations of motion in the
//!   thermodynamic limit.
//! - [`sweep`]: configuration files, parameter sweeps, CSV output and the
//!   lifetime–entanglement correlation.

pub mod entanglement;
pub mod lindblad;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod semiclassical;
pub mod series;
pub mod sweep;

pub use lindblad::{DensityState, Evolution, LindbladEngine, Observable};
pub use linalg::ComplexMatrix;
pub use model::{ModelConfig, ModelOperators, Representation};
pub use series::StroboscopicSeries;
