//! Drive a single run from a configuration file, as the CLI does, and list
//! what it writes.

use dicke_dtc::sweep::{run_single, Manifest, RunConfig};

const CONFIG: &str = "\
# two qubits, short horizon
n_qubits = 2
field_levels = 10
periods = 40
lifetime_ti = 10
lifetime_delta = 20
";

fn main() {
    let cfg = RunConfig::parse(CONFIG).expect("valid config");
    let out = std::env::temp_dir().join("dicke_dtc_config_run");
    let report = run_single(&cfg, &out).expect("run succeeds");
    println!("doubling score {:.3}, lifetime {:?}", report.doubling_score, report.lifetime);
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    let manifest = Manifest::parse(&std::fs::read_to_string(out.join("manifest.txt")).unwrap());
    for key in ["omega", "omega0", "dt", "alpha", "health_min_eigenvalue"] {
        println!("{key} = {}", manifest.get(key).unwrap_or("-"));
    }
}
