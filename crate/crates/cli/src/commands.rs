use std::fs;
use std::path::{Path, PathBuf};

use dodoor_sim::metrics::{
    emit, summarize, utilization_series, write_csv, write_decision_log, write_message_log,
    write_task_log, LabeledSeries, RunSummary,
};
use dodoor_sim::model::NodeSpec;
use dodoor_sim::sim::run;
use dodoor_sim::workload::{
    assign_arrivals_poisson, build_topology, load_trace, write_trace, Trace,
};
use rayon::prelude::*;

use crate::compare::{compare, subject_policy, write_joined, Outcome};
use crate::config::{Cell, ExperimentConfig, Generator};
use crate::error::{CliError, CliResult};

/// Overrides shared by `run` and `compare`.
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub parallel: Option<usize>,
}

fn prepare(config: &Path, o: &Overrides) -> CliResult<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(out) = &o.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = o.seed {
        cfg.seeds = vec![seed];
    }
    if o.parallel == Some(0) {
        return Err(CliError::Validation("--parallel must be > 0".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_echo(cfg: &ExperimentConfig, dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join("config.toml");
    fs::write(&path, cfg.to_toml()).map_err(|e| CliError::io(&path, e))
}

struct Finished {
    outcome: Outcome,
    series: LabeledSeries,
}

/// Simulates every cell. Each trace instance is built once and shared by all
/// of its cells. With `logs`, each cell writes its own directory of logs
/// from its worker thread.
fn execute(
    cfg: &ExperimentConfig,
    nodes: &[NodeSpec],
    parallel: Option<usize>,
    logs: bool,
) -> CliResult<Vec<Finished>> {
    let instances = cfg.instances();
    let traces: Vec<Trace> = instances
        .iter()
        .map(|&(q, s)| cfg.trace(q, s))
        .collect::<CliResult<_>>()?;
    let cells = cfg.cells();
    let work = |cell: &Cell| -> CliResult<Finished> {
        let idx = instances
            .iter()
            .position(|&(q, s)| q == cell.qps && s == cell.seed)
            .expect("cell comes from an instance");
        let result = run(&cell.cluster, nodes, &traces[idx], cell.policy)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", cell.label)))?;
        let mut summary = summarize(&result)?;
        summary.label = cell.label.clone();
        if logs {
            let dir = cfg.output_dir.join(&cell.label);
            write_echo(cfg, &dir)?;
            write_decision_log(&result.decisions, &dir.join("decisions.csv"))?;
            write_message_log(&result.messages, &dir.join("messages.csv"))?;
            write_task_log(&result.tasks, &dir.join("tasks.csv"))?;
        }
        Ok(Finished {
            series: LabeledSeries {
                label: cell.label.clone(),
                series: utilization_series(&result),
            },
            outcome: Outcome {
                policy: cell.policy,
                qps: cell.qps,
                seed: cell.seed,
                summary,
            },
        })
    };
    let threads = parallel.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(|| cells.par_iter().map(work).collect())
}

fn print_table(summaries: &[RunSummary]) {
    let width = summaries
        .iter()
        .map(|s| s.label.len())
        .max()
        .unwrap_or(5)
        .max(5);
    println!(
        "{:<width$} {:>10} {:>12} {:>10} {:>10} {:>10}",
        "label", "messages", "mean_ms", "p95_ms", "tasks/s", "util_var"
    );
    for s in summaries {
        println!(
            "{:<width$} {:>10} {:>12.1} {:>10} {:>10.2} {:>10.5}",
            s.label,
            s.scheduler_handled_messages,
            s.makespan_mean,
            s.makespan_p95,
            s.throughput,
            s.util_variance
        );
    }
}

fn report(cfg: &ExperimentConfig, finished: &[Finished]) -> CliResult<Vec<RunSummary>> {
    let summaries: Vec<RunSummary> = finished.iter().map(|f| f.outcome.summary.clone()).collect();
    let series: Vec<LabeledSeries> = finished.iter().map(|f| f.series.clone()).collect();
    write_echo(cfg, &cfg.output_dir)?;
    emit(&summaries, &series, &cfg.output_dir, cfg.report_format()?)?;
    print_table(&summaries);
    Ok(summaries)
}

pub fn cmd_run(config: &Path, o: &Overrides) -> CliResult<()> {
    let cfg = prepare(config, o)?;
    let nodes = cfg.nodes()?;
    let finished = execute(&cfg, &nodes, o.parallel, true)?;
    report(&cfg, &finished)?;
    println!("wrote {}", cfg.output_dir.display());
    Ok(())
}

pub fn cmd_compare(config: &Path, o: &Overrides) -> CliResult<()> {
    let cfg = prepare(config, o)?;
    if cfg.policies.len() < 2 {
        return Err(CliError::Validation(
            "compare needs at least two policies".into(),
        ));
    }
    let nodes = cfg.nodes()?;
    let finished = execute(&cfg, &nodes, o.parallel, false)?;
    report(&cfg, &finished)?;
    let outcomes: Vec<Outcome> = finished.into_iter().map(|f| f.outcome).collect();
    let c = compare(&outcomes, subject_policy(&cfg.policies));
    write_joined(&c.joined, &cfg.output_dir.join("comparison.csv"))?;
    write_csv(&c.deltas, &cfg.output_dir.join("comparison_deltas.csv"))?;
    println!("wrote {}", cfg.output_dir.display());
    Ok(())
}

pub struct GenParams {
    pub generator: Generator,
    pub count: usize,
    pub seed: u64,
    pub qps: Option<f64>,
    pub out: PathBuf,
}

pub fn cmd_gen_trace(p: &GenParams) -> CliResult<()> {
    if p.count == 0 {
        return Err(CliError::Validation("--count must be > 0".into()));
    }
    let mut trace = p.generator.generate(p.count, p.seed);
    if let Some(q) = p.qps {
        trace = assign_arrivals_poisson(trace, q, p.seed)?;
    }
    if let Some(dir) = p.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    write_trace(&trace, &p.out)?;
    let qps = p.qps.map_or_else(|| "none".to_string(), |q| q.to_string());
    println!(
        "generator={} count={} seed={} qps={qps} out={}",
        p.generator,
        p.count,
        p.seed,
        p.out.display()
    );
    Ok(())
}

/// Validates a config, a standalone trace against a topology, or both.
pub fn cmd_validate(
    config: Option<&Path>,
    trace: Option<&Path>,
    topology: &str,
    seed: Option<u64>,
) -> CliResult<()> {
    if config.is_none() && trace.is_none() {
        return Err(CliError::Validation(
            "validate needs --config or --trace".into(),
        ));
    }
    if let Some(path) = config {
        let mut cfg = ExperimentConfig::load(path)?;
        if let Some(s) = seed {
            cfg.seeds = vec![s];
        }
        cfg.validate()?;
        println!(
            "{}: ok ({} cells over {} trace instances)",
            path.display(),
            cfg.cells().len(),
            cfg.instances().len()
        );
    }
    if let Some(path) = trace {
        let nodes = build_topology(&topology.parse()?)?;
        let t = load_trace(path)?;
        t.validate(&nodes)?;
        println!("{}: ok ({} tasks on {topology})", path.display(), t.len());
    }
    Ok(())
}
