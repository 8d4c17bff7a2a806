use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qas_cli::{
    cmd_evaluate, cmd_export, cmd_finetune, cmd_oracle, cmd_sample, cmd_search, configure_threads, CliResult,
    ExportFormat,
};

/// Ansatz search for variational quantum circuits.
#[derive(Debug, Parser)]
#[command(name = "qas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Qasm2,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a circuit; writes reward_trace.csv, search_report.json and best_circuit.json.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Overrides every seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: `output_dir` from the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fine-tune the parameters of a searched circuit; writes loss_trace.csv and finetuned_circuit.json.
    Finetune {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        /// Output directory (default: next to the circuit file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample measurement outcomes; writes histogram.json.
    Sample {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of most frequent bitstrings to report.
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force reference values for a configured task; writes oracle.json.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute loss and reward from a circuit file.
    Evaluate {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Write the circuit as OpenQASM 2.0 or a plain gate listing.
    Export {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Qasm2)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Search { config, seed, out } => {
            let s = cmd_search(&config, seed, out.as_deref())?;
            let r = &s.report;
            match (r.best_reward, r.best_iteration) {
                (Some(reward), Some(it)) => {
                    println!("best reward {reward} at iteration {it}, layout {}", r.best_layout)
                }
                _ => println!("no iterations run"),
            }
            println!("iterations {}, stopped early: {}", r.reward_trace.len(), r.stopped_early);
            println!("artifacts in {}", s.out_dir.display());
        }
        Command::Finetune { circuit, steps, lr, out } => {
            let s = cmd_finetune(&circuit, steps, lr, out.as_deref())?;
            let (first, last) = (s.trace[0], s.trace[s.trace.len() - 1]);
            println!("loss {first} -> {last} over {} steps", s.trace.len() - 1);
            println!("wrote {}", s.circuit.display());
        }
        Command::Sample { circuit, shots, seed, top, out } => {
            let h = cmd_sample(&circuit, shots, seed, top, out.as_deref())?;
            for bin in &h.top {
                match bin.cut_value {
                    Some(cut) => println!("{} {} (cut {cut})", bin.bitstring, bin.count),
                    None => println!("{} {}", bin.bitstring, bin.count),
                }
            }
        }
        Command::Oracle { config, out } => {
            let report = cmd_oracle(&config, out.as_deref())?;
            println!("{}", serde_json::to_string(&report).map_err(qas_core::Error::from)?);
        }
        Command::Evaluate { circuit } => {
            let e = cmd_evaluate(&circuit)?;
            println!("{}", serde_json::to_string(&e).map_err(qas_core::Error::from)?);
        }
        Command::Export { circuit, format, out } => {
            let format = match format {
                Format::Qasm2 => ExportFormat::Qasm2,
                Format::Text => ExportFormat::Text,
            };
            let (path, _) = cmd_export(&circuit, format, out.as_deref())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qas: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
