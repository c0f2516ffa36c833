//! Command-line front end; see [`gsfl::harness`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gsfl::harness::{self, Mode, OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "gsfl",
    about = "Group-signature federated learning: simulation, cost model, attack suite"
)]
struct Cli {
    /// simulate | costs | attacks
    #[arg(long, default_value = "simulate")]
    mode: Mode,
    /// Clients in the network.
    #[arg(long, default_value_t = 20)]
    m: u64,
    /// Clients selected per iteration.
    #[arg(long, default_value_t = 10)]
    n: u64,
    /// Iterations.
    #[arg(long, default_value_t = 5)]
    t: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Model dimension.
    #[arg(long, default_value_t = 5)]
    d: usize,
    /// Samples per client.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Learning rate.
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// csv | json | jsonl
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        m: cli.m,
        n: cli.n,
        t: cli.t,
        seed: cli.seed,
        d: cli.d,
        samples_per_client: cli.samples,
        eta: cli.eta,
        mode: cli.mode,
        out: cli.out,
        format: cli.format,
    };
    match harness::run(&config) {
        Ok(report) => {
            println!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            if !report.failures.is_empty() {
                eprintln!("{}", serde_json::json!({ "failures": report.failures }));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
