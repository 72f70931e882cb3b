//! Sweep the detuning, tabulate lifetime and saturated entanglement, and
//! correlate the two.

use dicke_dtc::lindblad::default_dt;
use dicke_dtc::metrics::LifetimeParams;
use dicke_dtc::model::ModelConfig;
use dicke_dtc::sweep::{render_correlation, run_sweep, SweepAxis, SweepSpec};

fn main() {
    let base = ModelConfig::new(2).with_field_levels(10);
    let spec = SweepSpec {
        axis: SweepAxis::Epsilon,
        values: vec![0.0, 0.02, 0.04, 0.06, 0.08, 0.1],
        lifetime_params: LifetimeParams::from_periods(10, 30, base.period()),
        periods: 40,
        dt: default_dt(&base),
        exclusion: 0.01,
        threshold_fraction: 0.1,
        outputs: std::env::temp_dir().join("dicke_dtc_detuning_sweep"),
        base,
    };
    let outcome = run_sweep(&spec).expect("sweep completes");
    println!("{:>8} {:>10} {:>10} {:>8}", "epsilon", "L_t", "E_N sat", "score");
    for r in &outcome.rows {
        println!("{:>8} {:>10.5} {:>10.5} {:>8.3}", r.param_value, r.lifetime, r.ent_saturated, r.doubling_score);
    }
    print!("\n{}", render_correlation(&outcome.correlation));
    println!("outputs in {}", spec.outputs.display());
}
