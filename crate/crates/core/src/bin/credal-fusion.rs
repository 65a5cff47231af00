use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use credal_fusion::model::{self, RunOptions};

#[derive(Parser)]
#[command(
    name = "credal-fusion",
    version,
    about = "Credal sets, likelihood evidence and Choquet conditioning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every query of a model file and print the result tables.
    Run {
        #[arg(long)]
        model: PathBuf,
        /// Seed for verify queries that do not set their own.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        decimals: usize,
        /// Aligned tables with headers instead of tab-separated rows.
        #[arg(long)]
        pretty: bool,
    },
    /// Parse and validate a model file without running it.
    Check {
        #[arg(long)]
        model: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { model } => {
            let text = match read(&model) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match model::parse_model(&text) {
                Ok(m) => {
                    println!(
                        "ok: {} outcomes, {} priors, {} evidence sets, {} queries",
                        m.frame.len(),
                        m.priors.len(),
                        m.evidence.len(),
                        m.queries.len()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    ExitCode::from(e.exit_status() as u8)
                }
            }
        }
        Command::Run {
            model,
            seed,
            decimals,
            pretty,
        } => {
            let text = match read(&model) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let parsed = match model::parse_model(&text) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    return ExitCode::from(e.exit_status() as u8);
                }
            };
            let options = RunOptions {
                seed,
                decimals,
                pretty,
            };
            match model::run(&parsed, &options) {
                Ok(report) => {
                    print!("{}", report.render(&options));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    ExitCode::from(e.exit_status() as u8)
                }
            }
        }
    }
}
