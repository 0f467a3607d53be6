//! Run summaries, utilization series and report files.
//!
//! Percentiles use nearest rank: the p-th percentile of `n` sorted samples
//! is the element at 0-based index `ceil(p * n) - 1`. Cluster variance is
//! the population variance over all nodes.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dodoor::SchedulerDecision;
use crate::error::{Error, Result};
use crate::model::{Millis, NodeId};
use crate::sim::{MessageRecord, RunResult, TaskRecord};

/// Version of every file layout written by [`emit`].
pub const SCHEMA_VERSION: u32 = 1;

/// Nearest-rank percentile of an ascending slice; `q` in `(0, 1]`.
pub fn percentile_nearest_rank(sorted: &[Millis], q: f64) -> Option<Millis> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    values.sum::<f64>() / n as f64
}

/// One row per run. Identity and configuration are echoed next to the
/// metrics.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunSummary {
    pub label: String,
    pub policy: String,
    pub tasks: u64,
    pub nodes: u64,
    pub batch_size: u64,
    pub duration_weight: f64,
    pub num_schedulers: u64,
    pub mini_batch: u64,
    pub placement_seed: u64,
    pub scheduler_handled_messages: u64,
    pub total_messages: u64,
    pub push_count: u64,
    /// Tasks per second over `[first_arrival_ms, last_completion_ms]`.
    pub throughput: f64,
    pub makespan_mean: f64,
    pub makespan_p95: Millis,
    pub sched_latency_mean: f64,
    pub sched_latency_p95: Millis,
    pub first_arrival_ms: Millis,
    pub last_completion_ms: Millis,
    /// Time average of the per-sample cluster mean utilization.
    pub util_mean: f64,
    /// Time average of the per-sample cluster utilization variance.
    pub util_variance: f64,
}

pub fn summarize(run: &RunResult) -> Result<RunSummary> {
    if run.tasks.is_empty() {
        return Err(Error::EmptyRun);
    }
    let mut makespans: Vec<Millis> = run.tasks.iter().map(TaskRecord::makespan).collect();
    let mut latencies: Vec<Millis> = run
        .tasks
        .iter()
        .map(TaskRecord::scheduling_latency)
        .collect();
    makespans.sort_unstable();
    latencies.sort_unstable();
    let first = run.tasks.iter().map(|t| t.submit).min().expect("non-empty");
    let last = run
        .tasks
        .iter()
        .map(|t| t.completed)
        .max()
        .expect("non-empty");
    let span_s = (last - first) as f64 / 1000.0;
    let m = run.tasks.len() as f64;
    let series = utilization_series(run);
    Ok(RunSummary {
        label: run.policy.to_string(),
        policy: run.policy.to_string(),
        tasks: run.tasks.len() as u64,
        nodes: run.nodes.len() as u64,
        batch_size: run.params.batch_size as u64,
        duration_weight: run.params.duration_weight,
        num_schedulers: run.params.num_schedulers as u64,
        mini_batch: run.params.mini_batch as u64,
        placement_seed: run.params.placement_seed,
        scheduler_handled_messages: run.scheduler_handled_messages(),
        total_messages: run.messages.len() as u64,
        push_count: run.push_count,
        throughput: if span_s > 0.0 {
            m / span_s
        } else {
            f64::INFINITY
        },
        makespan_mean: mean(makespans.iter().map(|&x| x as f64)),
        makespan_p95: percentile_nearest_rank(&makespans, 0.95).expect("non-empty"),
        sched_latency_mean: mean(latencies.iter().map(|&x| x as f64)),
        sched_latency_p95: percentile_nearest_rank(&latencies, 0.95).expect("non-empty"),
        first_arrival_ms: first,
        last_completion_ms: last,
        util_mean: series.time_averaged_mean(),
        util_variance: series.time_averaged_variance(),
    })
}

/// Mean and population variance of per-node `(cpu + mem) / 2`.
pub fn cluster_stats(per_node: &[(f64, f64)]) -> (f64, f64) {
    if per_node.is_empty() {
        return (0.0, 0.0);
    }
    let avg: Vec<f64> = per_node.iter().map(|(c, m)| (c + m) / 2.0).collect();
    let mu = mean(avg.iter().copied());
    let var = mean(avg.iter().map(|x| (x - mu) * (x - mu)));
    (mu, var)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UtilizationSeries {
    pub node_ids: Vec<NodeId>,
    pub times: Vec<Millis>,
    /// `per_node[t][j]`: `(cpu, mem)` of node `j` at `times[t]`.
    pub per_node: Vec<Vec<(f64, f64)>>,
    pub cluster_mean: Vec<f64>,
    pub cluster_variance: Vec<f64>,
}

impl UtilizationSeries {
    pub fn time_averaged_mean(&self) -> f64 {
        mean(self.cluster_mean.iter().copied())
    }

    pub fn time_averaged_variance(&self) -> f64 {
        mean(self.cluster_variance.iter().copied())
    }
}

pub fn utilization_series(run: &RunResult) -> UtilizationSeries {
    let mut s = UtilizationSeries {
        node_ids: run.nodes.iter().map(|n| n.node_id).collect(),
        ..Default::default()
    };
    for sample in &run.samples {
        let (mu, var) = cluster_stats(&sample.per_node);
        s.times.push(sample.time);
        s.per_node.push(sample.per_node.clone());
        s.cluster_mean.push(mu);
        s.cluster_variance.push(var);
    }
    s
}

/// `max - mean` of a set of counts.
pub fn gap_of_counts(counts: &[u64]) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    let max = *counts.iter().max().expect("non-empty") as f64;
    max - mean(counts.iter().map(|&c| c as f64))
}

/// Gap between the most loaded node and the average, counting every task
/// enqueued on a node at or before `at_time`.
pub fn gap_statistic(run: &RunResult, at_time: Millis) -> f64 {
    gap_of_counts(&placement_counts(run, at_time))
}

/// Tasks enqueued per node at or before `at_time`, in node order.
pub fn placement_counts(run: &RunResult, at_time: Millis) -> Vec<u64> {
    let index: std::collections::BTreeMap<NodeId, usize> = run
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.node_id, i))
        .collect();
    let mut counts = vec![0u64; run.nodes.len()];
    for t in run.tasks.iter().filter(|t| t.enqueued <= at_time) {
        counts[index[&t.node]] += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

/// A utilization series tagged with the run it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSeries {
    pub label: String,
    pub series: UtilizationSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub summaries: Vec<RunSummary>,
    pub series: Vec<LabeledSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterUtilizationRow {
    pub label: String,
    pub time_ms: Millis,
    pub cluster_mean: f64,
    pub cluster_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeUtilizationRow {
    pub label: String,
    pub time_ms: Millis,
    pub node_id: u32,
    pub cpu_util: f64,
    pub mem_util: f64,
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Writes `rows` as CSV with a header derived from `T`.
pub fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize()
        .map(|row| {
            row.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                }
            })
        })
        .collect()
}

/// Writes the summaries and series under `dir`: `summary.csv`,
/// `utilization.csv` and `utilization_nodes.csv`, or a single
/// `report.json`. Returns the files written.
pub fn emit(
    summaries: &[RunSummary],
    series: &[LabeledSeries],
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        ReportFormat::Json => {
            let path = dir.join("report.json");
            let report = Report {
                schema_version: SCHEMA_VERSION,
                summaries: summaries.to_vec(),
                series: series.to_vec(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            Ok(vec![path])
        }
        ReportFormat::Csv => {
            let summary = dir.join("summary.csv");
            write_csv(summaries, &summary)?;
            let mut cluster = Vec::new();
            let mut nodes = Vec::new();
            for ls in series {
                let s = &ls.series;
                for (t, &time) in s.times.iter().enumerate() {
                    cluster.push(ClusterUtilizationRow {
                        label: ls.label.clone(),
                        time_ms: time,
                        cluster_mean: s.cluster_mean[t],
                        cluster_variance: s.cluster_variance[t],
                    });
                    for (j, &(cpu, mem)) in s.per_node[t].iter().enumerate() {
                        nodes.push(NodeUtilizationRow {
                            label: ls.label.clone(),
                            time_ms: time,
                            node_id: s.node_ids[j].0,
                            cpu_util: cpu,
                            mem_util: mem,
                        });
                    }
                }
            }
            let util = dir.join("utilization.csv");
            write_csv(&cluster, &util)?;
            let util_nodes = dir.join("utilization_nodes.csv");
            write_csv(&nodes, &util_nodes)?;
            Ok(vec![summary, util, util_nodes])
        }
    }
}

pub fn read_report_json(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: Report = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("unsupported schema_version {}", report.schema_version),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRow {
    pub task_id: u64,
    pub scheduler: u32,
    pub time_ms: Millis,
    pub candidate_a: u32,
    pub candidate_b: u32,
    pub chosen: u32,
    pub score_a: Option<f64>,
    pub score_b: Option<f64>,
    pub cache_version: u64,
}

impl From<&SchedulerDecision> for DecisionRow {
    fn from(d: &SchedulerDecision) -> Self {
        Self {
            task_id: d.task_id,
            scheduler: d.scheduler.0,
            time_ms: d.decided_at,
            candidate_a: d.candidate_a.0,
            candidate_b: d.candidate_b.0,
            chosen: d.chosen.0,
            score_a: d.scores.map(|s| s.score_a),
            score_b: d.scores.map(|s| s.score_b),
            cache_version: d.cache_version,
        }
    }
}

pub fn write_decision_log(decisions: &[SchedulerDecision], path: &Path) -> Result<()> {
    let rows: Vec<DecisionRow> = decisions.iter().map(DecisionRow::from).collect();
    write_csv(&rows, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageRow {
    pub kind: String,
    pub from: String,
    pub to: String,
    pub send_ms: Millis,
    pub deliver_ms: Millis,
    pub scheduler_handled: bool,
}

pub fn write_message_log(messages: &[MessageRecord], path: &Path) -> Result<()> {
    let rows: Vec<MessageRow> = messages
        .iter()
        .map(|m| MessageRow {
            kind: m.kind.to_string(),
            from: m.from.to_string(),
            to: m.to.to_string(),
            send_ms: m.send_time,
            deliver_ms: m.deliver_time,
            scheduler_handled: m.is_scheduler_handled(),
        })
        .collect();
    write_csv(&rows, path)
}

pub fn write_task_log(tasks: &[TaskRecord], path: &Path) -> Result<()> {
    write_csv(tasks, path)
}
