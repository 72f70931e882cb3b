//! The permutation-symmetric sector reproduces the full 2^N tensor model.

use dicke_dtc::lindblad::default_dt;
use dicke_dtc::model::{sector_equivalence_check, ModelConfig};

fn main() {
    for n in [1, 2, 3] {
        let cfg = ModelConfig::new(n).with_field_levels(10);
        let r = sector_equivalence_check(&cfg, 20, default_dt(&cfg)).expect("both runs stable");
        println!(
            "N = {n}: max |dj_x| = {:.1e}, max |dE_N| = {:.1e}, pass = {}",
            r.max_jx_deviation, r.max_logneg_deviation, r.pass
        );
    }
}
