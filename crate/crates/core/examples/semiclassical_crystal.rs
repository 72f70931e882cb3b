//! Mean-field limit: start at the superradiant fixed point and check for a
//! period-doubled j_x across detuning and anharmonicity.

use dicke_dtc::semiclassical::{doubling_score_from_fixed_point, fixed_point, FixedPointMomentum, SemiclassicalParams};
use dicke_dtc::sweep::rhs_residual;

fn main() {
    let p = SemiclassicalParams::from_detuning(0.0, 0.0);
    let dt = p.period() / 500.0;
    for m in [FixedPointMomentum::Corrected, FixedPointMomentum::Literal] {
        let s = fixed_point(&p, m).unwrap();
        println!("{m:?}: jx={:.5} jz={:.5} x={:.5} p={:.5} residual={:.1e}", s.jx, s.jz, s.x, s.p, rhs_residual(&p, &s));
    }

    println!("\nepsilon  alpha    score  spin-norm drift");
    for eps in [0.0, 0.05, 0.1] {
        for alpha in [0.0, 0.0025, 0.005, 0.01] {
            let params = SemiclassicalParams::from_detuning(eps, alpha);
            match doubling_score_from_fixed_point(&params, 200, dt) {
                Ok((score, run)) => println!("{eps:<8} {alpha:<8} {score:.3}  {:.1e}", run.max_spin_norm_drift),
                Err(e) => println!("{eps:<8} {alpha:<8} error: {e}"),
            }
        }
    }
}
