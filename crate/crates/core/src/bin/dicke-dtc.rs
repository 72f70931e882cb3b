use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke_dtc::model::Representation;
use dicke_dtc::sweep::{self, RunConfig, RunError, SweepSpec};

#[derive(Parser)]
#[command(name = "dicke-dtc", version, about = "Driven open Dicke model: simulations, sweeps and DTC diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Overrides {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    periods: Option<u64>,
    #[arg(long)]
    representation: Option<Representation>,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum run: one CSV per observable plus manifest.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Mean-field run from the fixed point.
    Semiclassical {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Parameter sweep with lifetime/entanglement table.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Correlation report for a saved sweep table.
    Correlate {
        table: PathBuf,
        /// Near-resonance half-width to exclude.
        #[arg(long)]
        exclusion: Option<f64>,
    },
}

fn load(path: &PathBuf, o: &Overrides) -> Result<RunConfig, RunError> {
    let mut cfg = RunConfig::read(path)?;
    if o.dt.is_some() {
        cfg.dt = o.dt;
    }
    if let Some(p) = o.periods {
        cfg.periods = p;
    }
    if let Some(r) = o.representation {
        cfg.representation = r;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Simulate { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let r = sweep::run_single(&cfg, &overrides.out)?;
            println!("doubling_score={}", r.doubling_score);
            if let Some(lt) = r.lifetime {
                println!("lifetime={lt}");
            }
            println!("min_eigenvalue={:e}", r.evolution.health.min_eigenvalue);
        }
        Command::Semiclassical { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let r = sweep::run_semiclassical(&cfg, &overrides.out)?;
            println!("doubling_score={}", r.doubling_score);
            println!("max_spin_norm_drift={:e}", r.run.max_spin_norm_drift);
            println!("fixed_point_residual={:e}", r.fixed_point_residual);
        }
        Command::Sweep { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let spec = SweepSpec::from_config(&cfg, &overrides.out)?;
            let outcome = sweep::run_sweep(&spec)?;
            for f in &outcome.failures {
                eprintln!("point {} failed: {}", f.param_value, f.error);
            }
            print!("{}", sweep::render_correlation(&outcome.correlation));
        }
        Command::Correlate { table, exclusion } => {
            print!("{}", sweep::render_correlation(&sweep::correlate_table(&table, exclusion)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
