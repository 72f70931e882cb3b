//! Truncated transmon field: numerical spectrum against the closed-form
//! levels, and the critical coupling for a few detunings.

use dicke_dtc::linalg::hermitian_eigenvalues;
use dicke_dtc::model::{field_hamiltonian, transmon_level, ModelConfig};

fn main() {
    let cfg = ModelConfig::new(0).with_field_levels(12).with_eta(-0.01);
    let numeric = hermitian_eigenvalues(&field_hamiltonian(&cfg)).expect("Hermitian field Hamiltonian");
    let mut exact: Vec<f64> = (0..cfg.field_levels).map(|n| transmon_level(cfg.omega(), cfg.eta, n)).collect();
    exact.sort_by(f64::total_cmp);

    println!("{:>3} {:>14} {:>14} {:>10}", "n", "numeric", "closed form", "|diff|");
    for (n, (a, b)) in numeric.iter().zip(&exact).enumerate() {
        println!("{n:>3} {a:>14.10} {b:>14.10} {:>10.1e}", (a - b).abs());
    }

    println!("\nepsilon  omega   omega0  lambda_c");
    for eps in [0.0, 0.02, 0.05, 0.1] {
        let c = ModelConfig::new(2).with_epsilon(eps);
        println!("{eps:<8} {:<7.3} {:<7.3} {:.6}", c.omega(), c.omega0(), c.critical_coupling());
    }
}
