//! Negativity of textbook states: product, Bell, Werner mixtures.

use dicke_dtc::entanglement::{log_negativity, negativity, BipartiteSplit};
use dicke_dtc::linalg::ComplexMatrix;
use num_complex::Complex64 as C64;

fn main() {
    let split = BipartiteSplit::new(2, 2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ComplexMatrix::outer(&[C64::new(s, 0.0), C64::default(), C64::default(), C64::new(s, 0.0)]);
    let product = ComplexMatrix::outer(&[C64::new(1.0, 0.0), C64::default(), C64::default(), C64::default()]);
    println!("product: N = {:.4}", negativity(&product, split).unwrap());
    println!("Bell:    N = {:.4}, E_N = {:.4} ebit", negativity(&bell, split).unwrap(), log_negativity(&bell, split).unwrap());

    // Werner state p|Bell><Bell| + (1-p) I/4 is entangled for p > 1/3.
    println!("\n   p   negativity");
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let mut w = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
        w.add_scaled(C64::new(p, 0.0), &bell);
        println!("{p:.3}   {:.5}", negativity(&w, split).unwrap());
    }
}
