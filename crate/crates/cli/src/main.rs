use clap::{Parser, Subcommand};
use opsamp_core::experiments::{run, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "opsamp", version, about = "Operator identification experiments on a periodic grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (default: out/<experiment>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parallel trials.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { config, out, seed, threads } = cli.command;
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let mut cfg = match ExperimentConfig::from_path(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(1);
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.name()));
    let report = run(&cfg);
    if let Err(e) = report.write(&dir) {
        eprintln!("error: writing {}: {e}", dir.display());
        return ExitCode::from(1);
    }
    for v in &report.verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    println!("report: {}", dir.join("report.json").display());
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
