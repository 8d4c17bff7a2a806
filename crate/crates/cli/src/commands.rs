//! The five subcommands plus `evaluate`. Each reads its inputs from files,
//! writes its artifacts into one output directory and returns a summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qas_core::export::{to_qasm2, to_text};
use qas_core::tasks::{oracle_ground_energy, oracle_linear_solve, oracle_maxcut};
use qas_core::{finetune, run_search_with_params, sample, SearchReport, SharedParameters, TaskPayload};

use crate::circuit::{CircuitFile, LoadedCircuit};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const REWARD_TRACE: &str = "reward_trace.csv";
pub const SEARCH_REPORT: &str = "search_report.json";
pub const BEST_CIRCUIT: &str = "best_circuit.json";
pub const LOSS_TRACE: &str = "loss_trace.csv";
pub const FINETUNED_CIRCUIT: &str = "finetuned_circuit.json";
pub const HISTOGRAM: &str = "histogram.json";
pub const ORACLE: &str = "oracle.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Qasm2,
    Text,
}

impl ExportFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            ExportFormat::Qasm2 => "circuit.qasm",
            ExportFormat::Text => "circuit.txt",
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value).map_err(qas_core::Error::from)? + "\n")
}

/// Artifacts default to the directory holding the input circuit.
fn out_dir(circuit: &Path, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .unwrap_or_else(|| circuit.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf))
}

#[derive(Debug, Clone)]
pub struct SearchSummary {
    pub report: SearchReport,
    pub out_dir: PathBuf,
    /// `None` when no iteration ran.
    pub best_circuit: Option<PathBuf>,
}

/// `search`: runs the search loop and writes the reward trace, the report
/// and the best circuit.
pub fn cmd_search(config: &Path, seed: Option<u64>, out: Option<&Path>) -> CliResult<SearchSummary> {
    let cfg = RunConfig::load(config, seed)?;
    let params = match cfg.initial_parameters.clone() {
        Some(p) => p,
        None => SharedParameters::for_pool(cfg.limits.max_layers, &cfg.pool, cfg.search.init, cfg.search.seed)?,
    };
    let outcome = run_search_with_params(&cfg.task, &cfg.pool, &cfg.limits, &cfg.search, &cfg.optimizer, params)?;
    let dir = out.map_or_else(|| cfg.output_dir.clone(), Path::to_path_buf);
    write(&dir, REWARD_TRACE, &outcome.report.trace_csv())?;
    write(&dir, SEARCH_REPORT, &to_json(&outcome.report)?)?;

    let best_circuit = match outcome.report.best_reward {
        Some(_) => {
            let layout = outcome.report.best_layout.clone();
            let eval = cfg.task.evaluate(&cfg.pool, &layout, &outcome.best_params)?;
            let file = CircuitFile::new(
                cfg.task_spec.clone(),
                &cfg.pool,
                &cfg.limits,
                layout,
                outcome.best_params,
                cfg.finetune.clone(),
                eval,
            )?;
            Some(write(&dir, BEST_CIRCUIT, &(file.to_json()? + "\n"))?)
        }
        None => None,
    };
    Ok(SearchSummary { report: outcome.report, out_dir: dir, best_circuit })
}

#[derive(Debug, Clone)]
pub struct FinetuneSummary {
    /// Loss before the first step, then after every step.
    pub trace: Vec<f64>,
    pub circuit: PathBuf,
}

/// `finetune`: gradient descent on the stored layout. `steps` and
/// `learning_rate` override the settings saved with the circuit.
pub fn cmd_finetune(
    circuit: &Path,
    steps: Option<usize>,
    learning_rate: Option<f64>,
    out: Option<&Path>,
) -> CliResult<FinetuneSummary> {
    let loaded = CircuitFile::load(circuit)?;
    let mut opt = loaded.file.finetune.clone();
    opt.steps = steps.unwrap_or(opt.steps);
    opt.learning_rate = learning_rate.unwrap_or(opt.learning_rate);
    let LoadedCircuit { file, task, pool } = loaded;
    let (params, trace) = finetune(&task, &pool, &file.layout, &file.parameters, &opt)?;

    let mut csv = String::from("step,loss\n");
    for (step, loss) in trace.iter().enumerate() {
        writeln!(csv, "{step},{loss}").unwrap();
    }
    let dir = out_dir(circuit, out);
    write(&dir, LOSS_TRACE, &csv)?;
    let eval = task.evaluate(&pool, &file.layout, &params)?;
    let tuned = CircuitFile::new(file.task, &pool, &file.limits, file.layout, params, opt, eval)?;
    let path = write(&dir, FINETUNED_CIRCUIT, &(tuned.to_json()? + "\n"))?;
    Ok(FinetuneSummary { trace, circuit: path })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin {
    pub bitstring: String,
    pub count: u64,
    pub frequency: f64,
    /// Weight of the cut the bitstring encodes (MaxCut only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramReport {
    pub shots: u64,
    pub seed: u64,
    pub counts: std::collections::BTreeMap<String, u64>,
    /// Most frequent bitstrings, ties broken lexicographically.
    pub top: Vec<Bin>,
}

/// `sample`: measures the circuit's output state `shots` times.
pub fn cmd_sample(circuit: &Path, shots: u64, seed: u64, top: usize, out: Option<&Path>) -> CliResult<HistogramReport> {
    let loaded = CircuitFile::load(circuit)?;
    let hist = sample(&loaded.output_state()?, shots, seed)?;
    let graph = match &loaded.task.payload {
        TaskPayload::MaxCut { graph, .. } => Some(graph),
        _ => None,
    };
    let top = hist
        .top_k(top)
        .into_iter()
        .map(|(bitstring, count)| {
            let cut_value = graph.map(|g| g.cut_value(&bitstring)).transpose()?;
            Ok(Bin { frequency: count as f64 / shots as f64, bitstring, count, cut_value })
        })
        .collect::<qas_core::Result<Vec<_>>>()?;
    let report = HistogramReport { shots, seed, counts: hist.counts, top };
    write(&out_dir(circuit, out), HISTOGRAM, &to_json(&report)?)?;
    Ok(report)
}

/// Brute-force reference values for a configured task.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OracleReport {
    MaxCut { max_cut: f64, argmax: Vec<String> },
    VqeChemistry { ground_energy: f64 },
    /// Distribution of the normalised solution of `A x = b` over basis states.
    Vqls { probabilities: Vec<f64> },
}

/// `oracle`: exact answers for max cut, ground energy or the linear system.
pub fn cmd_oracle(config: &Path, out: Option<&Path>) -> CliResult<OracleReport> {
    let cfg = RunConfig::load(config, None)?;
    let cap = |e: qas_core::Error| match e {
        qas_core::Error::Size(m) => CliError::OracleCap(m),
        other => CliError::Core(other),
    };
    let report = match &cfg.task.payload {
        TaskPayload::MaxCut { graph, .. } => {
            let (max_cut, argmax) = oracle_maxcut(graph).map_err(cap)?;
            OracleReport::MaxCut { max_cut, argmax }
        }
        TaskPayload::VqeChemistry { hamiltonian } => {
            OracleReport::VqeChemistry { ground_energy: oracle_ground_energy(hamiltonian).map_err(cap)? }
        }
        TaskPayload::Vqls(payload) => OracleReport::Vqls { probabilities: oracle_linear_solve(payload).map_err(cap)? },
        TaskPayload::QecEncoding422(_) => {
            return Err(CliError::input(config, "the encoding task has no oracle; its optimum is a loss of 0"));
        }
    };
    let dir = out.map_or_else(|| cfg.output_dir.clone(), Path::to_path_buf);
    write(&dir, ORACLE, &to_json(&report)?)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub loss: f64,
    pub penalty: f64,
    pub reward: f64,
    /// The reward recorded in the file when it was written.
    pub stored_reward: f64,
}

/// `evaluate`: recomputes loss and reward from a circuit file alone.
pub fn cmd_evaluate(circuit: &Path) -> CliResult<EvaluationReport> {
    let loaded = CircuitFile::load(circuit)?;
    let e = loaded.evaluate()?;
    Ok(EvaluationReport { loss: e.loss, penalty: e.penalty, reward: e.reward, stored_reward: loaded.file.reward })
}

/// `export`: writes the bound circuit as OpenQASM 2.0 or a plain listing.
pub fn cmd_export(circuit: &Path, format: ExportFormat, out: Option<&Path>) -> CliResult<(PathBuf, String)> {
    let loaded = CircuitFile::load(circuit)?;
    let n = loaded.pool.num_qubits();
    let init = loaded.task.initial_state;
    let text = match format {
        ExportFormat::Qasm2 => to_qasm2(n, init, &loaded.file.gates),
        ExportFormat::Text => to_text(n, init, &loaded.file.gates),
    }
    .map_err(|e| CliError::input(circuit, e))?;
    let path = write(&out_dir(circuit, out), format.file_name(), &text)?;
    Ok((path, text))
}
