use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zxroute::bench::{self, BenchError, ExperimentConfig, Mode, StudyOutput};

#[derive(Parser)]
#[command(name = "zxroute", version, about = "Alternating ZX extraction and routing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random Clifford+T study.
    RunRandom(Common),
    /// Study over OpenQASM 2.0 files.
    RunQasm {
        #[command(flatten)]
        common: Common,
        /// QASM files (added to any listed in the config).
        files: Vec<PathBuf>,
    },
    /// Oracle checks: extraction, routing legality and equivalence, single-branch degeneration.
    Verify(Common),
    /// Grid sweep over β, window and lookahead depth.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated β values.
        #[arg(long)]
        betas: Option<String>,
        /// Comma-separated window sizes, `inf` for unbounded.
        #[arg(long)]
        windows: Option<String>,
        /// Comma-separated lookahead depths.
        #[arg(long)]
        depths: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Experiment config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset used when no config is given: desk, deep-bias, deep-window.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Circuits processed in parallel.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall-clock time per run.
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, BenchError> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => ExperimentConfig::preset(name)?,
            (None, None) => ExperimentConfig::desk(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(jobs) = self.jobs {
            cfg.jobs = jobs;
        }
        cfg.timing |= self.timing;
        Ok(cfg)
    }
}

fn grid_override(cfg: &mut ExperimentConfig, key: &str, value: &Option<String>) -> Result<(), BenchError> {
    let Some(v) = value else { return Ok(()) };
    let text = format!("{key} = {v}");
    let parsed = ExperimentConfig::parse(&text, std::path::Path::new("."))?;
    match key {
        "betas" => cfg.betas = parsed.betas,
        "windows" => cfg.windows = parsed.windows,
        _ => cfg.depths = parsed.depths,
    }
    Ok(())
}

fn report(out: &StudyOutput, dir: &std::path::Path) -> Result<(), BenchError> {
    bench::write_outputs(dir, out)?;
    for f in &out.failures {
        eprintln!("skipped {}: {}", f.circuit_id, f.reason);
    }
    for s in &out.summary {
        let base = s.delta_base.map_or_else(|| "-".to_string(), |d| format!("{d:.4}"));
        println!(
            "{} s={} l={}: base Δ={} biased Δ={:.4} (β={})",
            s.circuit_id, s.s, s.l, base, s.delta_biased, s.best_beta
        );
    }
    println!("{} rows written to {}", out.rows.len(), dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::RunRandom(common) => {
            let mut cfg = common.config()?;
            cfg.mode = Mode::Random;
            report(&bench::run_random_study(&cfg)?, &common.out)?;
        }
        Command::RunQasm { common, files } => {
            let mut cfg = common.config()?;
            cfg.mode = Mode::Qasm;
            cfg.files.extend(files);
            if cfg.files.is_empty() {
                return Err(BenchError::Config("no QASM files given".into()));
            }
            report(&bench::run_qasm_study(&cfg)?, &common.out)?;
        }
        Command::Verify(common) => {
            let cfg = common.config()?;
            let r = bench::verify_corpus(&cfg)?;
            for w in &r.warnings {
                log::warn!("{w}");
            }
            for f in &r.failures {
                println!("FAIL {} (seed {:?}) {}: {}", f.circuit_id, f.seed, f.check, f.detail);
            }
            println!("{} circuits, {} checks, {} failures", r.circuits, r.checks, r.failures.len());
            return Ok(r.passed());
        }
        Command::Sweep {
            common,
            betas,
            windows,
            depths,
        } => {
            let mut cfg = common.config()?;
            grid_override(&mut cfg, "betas", &betas)?;
            grid_override(&mut cfg, "windows", &windows)?;
            grid_override(&mut cfg, "depths", &depths)?;
            report(&bench::run_study(&cfg)?, &common.out)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
