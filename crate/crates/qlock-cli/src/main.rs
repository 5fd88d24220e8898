//! `qlock`: experiment configs in, JSON/CSV reports out.
//!
//! One subcommand per experiment family; every subcommand accepts
//! `--config PATH`, `--seed U64` (overrides the config seed), `--threads N`
//! (the `QLOCK_THREADS` env var sets the default), `--out DIR`, and
//! `--check` (run the module invariant suite instead of an experiment).
//!
//! Exit codes: 0 success, 2 config error, 3 invariant failure,
//! 4 capability (size) error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qlock_core::config::ExperimentConfig;
use qlock_core::report::TimingSidecar;
use qlock_core::{Error, Result};

#[derive(Parser)]
#[command(name = "qlock", version, about = "Quantum data locking experiments")]
struct Cli {
    /// Worker threads (default: QLOCK_THREADS env var, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Locking scheme end-to-end: decode, adversary suite, ratios.
    LockSim(RunArgs),
    /// Coherent-state bound sweeps and Wehrl closed forms.
    BosonicBounds(RunArgs),
    /// PPM enigma-machine simulation (single-photon or weak-coherent).
    PpmSim(RunArgs),
    /// Entanglement-breaking verdict and zero-capacity certificates.
    EbCheck(RunArgs),
    /// Degraded wiretap private information and additivity check.
    Wiretap(RunArgs),
    /// Accessible-information optimizer vs the brute-force oracle.
    Accinfo(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML). Required unless --check is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the JSON report, CSV sweeps, and timing sidecar.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the module invariant suite and exit nonzero on failure.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let (kind, args) = match &cli.cmd {
        Cmd::LockSim(a) => ("lock-sim", a),
        Cmd::BosonicBounds(a) => ("bosonic-bounds", a),
        Cmd::PpmSim(a) => ("ppm-sim", a),
        Cmd::EbCheck(a) => ("eb-check", a),
        Cmd::Wiretap(a) => ("wiretap", a),
        Cmd::Accinfo(a) => ("accinfo", a),
    };
    match run(kind, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let from_env = std::env::var("QLOCK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = flag.or(from_env) {
        // A second initialization in-process is harmless; ignore it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(kind: &'static str, args: &RunArgs) -> Result<u8> {
    if args.check {
        let outcomes = commands::check_suite(kind)?;
        let mut ok = true;
        for o in &outcomes {
            println!(
                "CHECK {kind}/{}: {} ({})",
                o.name,
                if o.passed { "PASS" } else { "FAIL" },
                o.detail
            );
            ok &= o.passed;
        }
        return Ok(if ok { 0 } else { 3 });
    }
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required (or use --check)".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if cfg.kind() != kind {
        return Err(Error::Config(format!(
            "config is for {:?} but the subcommand is {kind:?}",
            cfg.kind()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }

    let started = Instant::now();
    let (report, extra_files) = commands::dispatch(&cfg)?;
    let json = report.to_json()?;
    println!("{json}");

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{kind}.json")), &json)?;
        for (name, content) in &extra_files {
            std::fs::write(dir.join(name), content)?;
        }
        let sidecar = TimingSidecar {
            experiment: kind.into(),
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        };
        std::fs::write(
            dir.join(format!("{kind}.timing.json")),
            serde_json::to_string_pretty(&sidecar)
                .map_err(|e| Error::Config(e.to_string()))?,
        )?;
    }
    Ok(if report.all_invariants_pass() { 0 } else { 3 })
}
