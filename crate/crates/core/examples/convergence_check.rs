//! Step-size and Fock-truncation self-checks on stroboscopic j_x.

use dicke_dtc::lindblad::{convergence_probe, truncation_probe};
use dicke_dtc::model::{build_operators, ModelConfig};

fn main() {
    let cfg = ModelConfig::new(2).with_field_levels(12);
    let ops = build_operators(&cfg);
    let t = cfg.period();
    for spp in [100.0, 250.0, 500.0, 1000.0] {
        match convergence_probe(&cfg, &ops, 30, t / spp) {
            Ok(r) => println!("dt = T/{spp}: |dj_x| vs dt/2 = {:.2e} (pass {})", r.max_deviation, r.pass),
            Err(e) => println!("dt = T/{spp}: {e}"),
        }
    }
    for (m, refined) in [(8, 12), (12, 16), (16, 20)] {
        let r = truncation_probe(&cfg.clone().with_field_levels(m), refined, 30, t / 500.0).unwrap();
        println!("M = {m} vs {refined}: |dj_x| = {:.2e} (pass {})", r.max_deviation, r.pass);
    }
}
