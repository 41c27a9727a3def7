use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hooleyff::catalog;
use hooleyff::config::ExperimentConfig;
use hooleyff::exec::{with_jobs, Exec};
use hooleyff::runner::{run, RunOptions};

#[derive(Parser)]
#[command(name = "hooleyff", version, about = "Short-interval trace-function sums over F_q[u]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML or JSON config.
    Run {
        config: PathBuf,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory (default: the config's `out`, else ./hooleyff-out).
        #[arg(long, env = "HOOLEYFF_OUT")]
        out: Option<PathBuf>,
        /// Replace the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write a gnuplot script for the main table.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Print the built-in trace-function families and example specs.
    ListCatalog {
        /// Only entries whose name or family contains this text.
        #[arg(default_value = "")]
        filter: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCatalog { filter } => {
            for e in catalog::filtered(&filter) {
                println!("{e}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, jobs, out, seed, gnuplot } => {
            let result = ExperimentConfig::load(&config).and_then(|cfg| {
                let exec = jobs.map_or(Exec::Parallel, Exec::from_jobs);
                let opts = RunOptions { seed, exec };
                let output = with_jobs(jobs.unwrap_or(0), || run(&cfg, &opts))?;
                let dir = out.or(cfg.out.clone()).unwrap_or_else(|| PathBuf::from("hooleyff-out"));
                let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("run").to_string();
                let written = output.write(&dir, &stem, gnuplot)?;
                Ok((output, dir, written.len()))
            });
            match result {
                Ok((output, dir, files)) => {
                    for w in &output.report.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!("{} -> {} files in {}", output.summary_line(), files, dir.display());
                    if output.report.all_passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
