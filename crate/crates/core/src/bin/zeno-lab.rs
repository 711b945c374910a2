use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zeno_lab::cli::{self, RunError, RunReport};

/// Quantum Zeno numerical lab.
#[derive(Parser)]
#[command(name = "zeno-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (default: output.dir, then $ZENO_LAB_OUT, then ./zeno-lab-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for parallel sweeps.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a built-in preset, optionally with `path=value` overrides.
    Preset {
        name: String,
        overrides: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List built-in presets.
    ListPresets {
        #[arg(long)]
        json: bool,
    },
}

fn report(result: Result<RunReport, RunError>) -> ExitCode {
    match result {
        Ok(r) => {
            for c in &r.outcome.summary.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {} = {:e} ({:?} {:e})", c.name, c.value, c.relation, c.bound);
            }
            println!("{} -> {}", r.outcome.summary.experiment, r.dir.display());
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match args.command {
        Command::Run { config, out, jobs } => report(cli::run_config_file(&config, out.as_deref(), jobs)),
        Command::Preset { name, overrides, out, jobs } => {
            report(cli::run_preset(&name, &overrides, out.as_deref(), jobs))
        }
        Command::ListPresets { json } => {
            if json {
                println!("{}", cli::list_presets_json());
            } else {
                print!("{}", cli::list_presets());
            }
            ExitCode::SUCCESS
        }
    }
}
