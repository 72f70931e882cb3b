//! The parity operator squares to one and commutes with the Hamiltonian at
//! any coupling, including with a nonzero anharmonicity.

use dicke_dtc::linalg::{commutator, ComplexMatrix};
use dicke_dtc::model::{build_operators, hamiltonian, parity_operator, ModelConfig, Representation};

fn main() {
    for rep in [Representation::SymmetricSector, Representation::FullTensor] {
        let cfg = ModelConfig::new(3).with_field_levels(8).with_eta(-0.01).with_representation(rep);
        let ops = build_operators(&cfg);
        let p = parity_operator(&ops);
        let square = (&p * &p).max_abs_diff(&ComplexMatrix::identity(p.dim()));
        println!("{} (dim {}): |P^2 - 1| = {square:.1e}", rep.as_str(), p.dim());
        for lambda in [0.0, 0.5, 1.0] {
            let h = hamiltonian(&cfg, &ops, lambda);
            let c = commutator(&h, &p).expect("square matrices").max_abs();
            println!("  lambda = {lambda}: max |[H, P]| = {c:.1e}");
        }
    }
}
