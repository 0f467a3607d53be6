//! Traces, synthetic generators and Poisson arrivals.

pub mod azure;
pub mod functionbench;
pub mod topology;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Millis, NodeSpec, NodeType, ResourceVector, TaskSpec};
use crate::scoring::pre_filter_task;

pub use azure::gen_azure_like;
pub use functionbench::{gen_functionbench, FunctionBenchTask};
pub use topology::{build_topology, TopologyPreset};

/// Offending tasks named in a validation error before it is truncated.
const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub name: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
}

impl TraceMetadata {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }
}

/// Tasks in submission order. Ids are dense from zero and submit times
/// never decrease.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trace {
    pub tasks: Vec<TaskSpec>,
    pub metadata: TraceMetadata,
}

fn listed(ids: &[u64]) -> String {
    let mut s = ids
        .iter()
        .take(MAX_LISTED)
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    if ids.len() > MAX_LISTED {
        let _ = write!(s, " and {} more", ids.len() - MAX_LISTED);
    }
    s
}

impl Trace {
    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Checks id density, submit order and positive durations on every
    /// node type.
    pub fn validate_structure(&self) -> Result<()> {
        for (i, t) in self.tasks.iter().enumerate() {
            if t.task_id != i as u64 {
                return Err(Error::Validation(format!(
                    "task at position {i} has id {}; ids must be unique and dense from 0",
                    t.task_id
                )));
            }
        }
        if let Some(w) = self
            .tasks
            .windows(2)
            .find(|w| w[1].submit_time < w[0].submit_time)
        {
            return Err(Error::Validation(format!(
                "task {} is submitted before task {}",
                w[1].task_id, w[0].task_id
            )));
        }
        let bad: Vec<u64> = self
            .tasks
            .iter()
            .filter(|t| {
                !t.demand.is_non_negative()
                    || !t.demand.cpu.is_finite()
                    || !t.demand.memory.is_finite()
                    || t.type_demands.values().any(|d| !d.is_non_negative())
                    || NodeType::ALL
                        .iter()
                        .any(|ty| t.duration_on(*ty).is_none_or(|d| d == 0))
            })
            .map(|t| t.task_id)
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(format!(
                "tasks with negative demand or a missing or zero duration: {}",
                listed(&bad)
            )));
        }
        Ok(())
    }

    /// Structure plus feasibility on `nodes`: every task must fit at least
    /// one of them.
    pub fn validate(&self, nodes: &[NodeSpec]) -> Result<()> {
        self.validate_structure()?;
        let bad: Vec<u64> = self
            .tasks
            .iter()
            .filter(|t| pre_filter_task(t, nodes).is_err())
            .map(|t| t.task_id)
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(format!(
                "tasks fitting no node: {}",
                listed(&bad)
            )));
        }
        Ok(())
    }
}

/// Rewrites submit times as a Poisson process of rate `qps` starting at
/// zero. Order is preserved; times are rounded to whole ms.
pub fn assign_arrivals_poisson(mut trace: Trace, qps: f64, seed: u64) -> Result<Trace> {
    let exp = Exp::new(qps)
        .ok()
        .filter(|_| qps > 0.0 && qps.is_finite())
        .ok_or_else(|| Error::InvalidConfig(format!("qps must be finite and > 0, got {qps}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0_f64;
    for task in &mut trace.tasks {
        t += exp.sample(&mut rng);
        task.submit_time = (t * 1000.0).round() as Millis;
    }
    trace.metadata.params.insert("qps".into(), qps.to_string());
    trace
        .metadata
        .params
        .insert("arrival_seed".into(), seed.to_string());
    Ok(trace)
}

/// Mean core-milliseconds one task occupies when placed on a node drawn
/// uniformly from `nodes`.
pub fn mean_core_ms_per_task(trace: &Trace, nodes: &[NodeSpec]) -> f64 {
    if trace.is_empty() || nodes.is_empty() {
        return 0.0;
    }
    let mut per_type: BTreeMap<NodeType, usize> = BTreeMap::new();
    for n in nodes {
        *per_type.entry(n.node_type).or_default() += 1;
    }
    let total: f64 = trace
        .tasks
        .iter()
        .map(|t| {
            per_type
                .iter()
                .map(|(ty, c)| {
                    *c as f64 * t.demand_on(*ty).cpu * t.duration_on(*ty).unwrap_or(0) as f64
                })
                .sum::<f64>()
                / nodes.len() as f64
        })
        .sum();
    total / trace.len() as f64
}

/// Offered CPU load at `qps`: arriving core-seconds per second over the
/// cluster's total cores.
pub fn offered_cpu_load(trace: &Trace, nodes: &[NodeSpec], qps: f64) -> f64 {
    let cores: f64 = nodes.iter().map(|n| n.capacity.cpu).sum();
    qps * mean_core_ms_per_task(trace, nodes) / 1000.0 / cores
}

/// Arrival rate whose offered CPU load equals `load`.
pub fn qps_for_cpu_load(trace: &Trace, nodes: &[NodeSpec], load: f64) -> f64 {
    let cores: f64 = nodes.iter().map(|n| n.capacity.cpu).sum();
    load * cores * 1000.0 / mean_core_ms_per_task(trace, nodes)
}

// Trace CSV: `task_id, submit_ms, cpu_cores, mem_mb`, one
// `duration_ms_<type>` column per node type, and optional
// `cpu_cores_<type>` / `mem_mb_<type>` pairs. Leading `# key=value` lines
// carry metadata.

fn header() -> Vec<String> {
    let mut h: Vec<String> = ["task_id", "submit_ms", "cpu_cores", "mem_mb"]
        .map(String::from)
        .to_vec();
    h.extend(NodeType::ALL.iter().map(|t| format!("duration_ms_{t}")));
    h
}

pub fn write_trace(trace: &Trace, path: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::io(path, e);
    let per_type = trace.tasks.iter().any(|t| !t.type_demands.is_empty());
    let mut out = String::new();
    let _ = writeln!(out, "# name={}", trace.metadata.name);
    if let Some(seed) = trace.metadata.seed {
        let _ = writeln!(out, "# seed={seed}");
    }
    for (k, v) in &trace.metadata.params {
        let _ = writeln!(out, "# {k}={v}");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut h = header();
    if per_type {
        for t in NodeType::ALL {
            h.push(format!("cpu_cores_{t}"));
            h.push(format!("mem_mb_{t}"));
        }
    }
    let csv_err = |e: csv::Error| Error::io(path, e.into());
    w.write_record(&h).map_err(csv_err)?;
    for t in &trace.tasks {
        let mut row = vec![
            t.task_id.to_string(),
            t.submit_time.to_string(),
            t.demand.cpu.to_string(),
            t.demand.memory.to_string(),
        ];
        for ty in NodeType::ALL {
            row.push(t.duration_on(ty).unwrap_or(0).to_string());
        }
        if per_type {
            for ty in NodeType::ALL {
                let d = t.demand_on(ty);
                row.push(d.cpu.to_string());
                row.push(d.memory.to_string());
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let body = w.into_inner().map_err(|e| io(e.into_error()))?;
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    fs::write(path, out).map_err(io)
}

/// Reads and structurally validates a trace CSV. Feasibility against a
/// topology is checked separately by [`Trace::validate`], except that a task
/// fitting no node type at all is rejected here.
pub fn load_trace(path: &Path) -> Result<Trace> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut metadata = TraceMetadata::default();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
            match k.trim() {
                "name" => metadata.name = v.trim().to_string(),
                "seed" => metadata.seed = v.trim().parse().ok(),
                k => {
                    metadata.params.insert(k.to_string(), v.trim().to_string());
                }
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse(1, e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let mut required = BTreeMap::new();
    for name in header() {
        let idx = column(&name).ok_or_else(|| parse(1, format!("missing column `{name}`")))?;
        required.insert(name, idx);
    }
    let optional: Vec<(NodeType, usize, usize)> = NodeType::ALL
        .iter()
        .filter_map(|t| {
            Some((
                *t,
                column(&format!("cpu_cores_{t}"))?,
                column(&format!("mem_mb_{t}"))?,
            ))
        })
        .collect();

    let mut tasks = Vec::new();
    let mut seen = BTreeSet::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |idx: usize| rec.get(idx).unwrap_or("");
        let int = |name: &str| -> Result<u64> {
            let v = field(required[name]);
            v.parse()
                .map_err(|_| parse(line, format!("`{name}`: expected an integer, got `{v}`")))
        };
        let real = |idx: usize, name: &str| -> Result<f64> {
            let v = field(idx);
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| {
                    parse(
                        line,
                        format!("`{name}`: expected a non-negative number, got `{v}`"),
                    )
                })
        };
        let task_id = int("task_id")?;
        if !seen.insert(task_id) {
            return Err(parse(line, format!("duplicate task id {task_id}")));
        }
        let demand = ResourceVector::new(
            real(required["cpu_cores"], "cpu_cores")?,
            real(required["mem_mb"], "mem_mb")?,
        );
        let mut durations = BTreeMap::new();
        for t in NodeType::ALL {
            durations.insert(t, int(&format!("duration_ms_{t}"))?);
        }
        let mut type_demands = BTreeMap::new();
        for &(t, c, m) in &optional {
            type_demands.insert(
                t,
                ResourceVector::new(real(c, "cpu_cores_*")?, real(m, "mem_mb_*")?),
            );
        }
        tasks.push(TaskSpec {
            task_id,
            submit_time: int("submit_ms")?,
            demand,
            durations,
            type_demands,
        });
    }

    let trace = Trace { tasks, metadata };
    trace.validate_structure()?;
    let unfit: Vec<u64> = trace
        .tasks
        .iter()
        .filter(|t| {
            !NodeType::ALL
                .iter()
                .any(|ty| t.demand_on(*ty).fits_within(&ty.capacity()))
        })
        .map(|t| t.task_id)
        .collect();
    if !unfit.is_empty() {
        return Err(Error::Validation(format!(
            "tasks exceeding every node type: {}",
            listed(&unfit)
        )));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), text).unwrap();
        f
    }

    const HEADER: &str = "task_id,submit_ms,cpu_cores,mem_mb,duration_ms_m510,duration_ms_xl170,duration_ms_c6525-25g,duration_ms_c6620\n";

    #[test]
    fn loads_three_rows() {
        let f = write(&format!(
            "# name=hand\n{HEADER}0,0,1,100,10,10,10,10\n1,5,2,200,20,20,20,20\n2,5,4,300,30,30,30,30\n"
        ));
        let trace = load_trace(f.path()).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.metadata.name, "hand");
        assert_eq!(trace.tasks[1].demand, ResourceVector::new(2.0, 200.0));
        assert_eq!(trace.tasks[2].duration_on(NodeType::C6620), Some(30));
    }

    #[test]
    fn rejects_duplicate_id_with_line() {
        let f = write(&format!("{HEADER}0,0,1,1,1,1,1,1\n0,1,1,1,1,1,1,1\n"));
        match load_trace(f.path()) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_oversized_task_by_name() {
        let f = write(&format!("{HEADER}0,0,1,1,1,1,1,1\n1,0,64,1,1,1,1,1\n"));
        match load_trace(f.path()) {
            Err(Error::Validation(m)) => assert!(m.contains(": 1"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_number_and_missing_column() {
        let f = write(&format!("{HEADER}0,0,x,1,1,1,1,1\n"));
        assert!(matches!(
            load_trace(f.path()),
            Err(Error::Parse { line: 2, .. })
        ));
        let f = write("task_id,submit_ms,cpu_cores,mem_mb\n0,0,1,1\n");
        assert!(matches!(
            load_trace(f.path()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_trace(Path::new("/nonexistent/trace.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn round_trip_with_type_demands() {
        let trace = assign_arrivals_poisson(gen_functionbench(200, 3), 50.0, 8).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_trace(&trace, f.path()).unwrap();
        let back = load_trace(f.path()).unwrap();
        assert_eq!(back, trace);

        let azure = gen_azure_like(50, 2);
        write_trace(&azure, f.path()).unwrap();
        assert_eq!(load_trace(f.path()).unwrap(), azure);
    }

    #[test]
    fn poisson_span_and_order() {
        let trace = assign_arrivals_poisson(gen_functionbench(100_000, 1), 100.0, 2).unwrap();
        let last = trace.tasks.last().unwrap().submit_time as f64;
        assert!((last / 1_000_000.0 - 1.0).abs() < 0.05, "span {last}");
        trace.validate_structure().unwrap();

        let one = assign_arrivals_poisson(gen_functionbench(1, 1), 5.0, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let first: f64 = Exp::new(5.0).unwrap().sample(&mut rng);
        assert_eq!(one.tasks[0].submit_time, (first * 1000.0).round() as Millis);
        assert!(assign_arrivals_poisson(gen_functionbench(1, 1), 0.0, 9).is_err());
    }

    #[test]
    fn functionbench_kinds_are_balanced() {
        let trace = gen_functionbench(100_000, 5);
        let mut counts = BTreeMap::new();
        for t in &trace.tasks {
            *counts
                .entry(FunctionBenchTask::identify(t).unwrap())
                .or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 8);
        let sigma = (100_000.0_f64 * 0.125 * 0.875).sqrt();
        for c in counts.values() {
            assert!((*c as f64 - 12_500.0).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn generated_traces_fit_their_topologies() {
        let table2 = build_topology(&TopologyPreset::Table2).unwrap();
        gen_azure_like(500, 1).validate(&table2).unwrap();
        gen_functionbench(500, 1).validate(&table2).unwrap();
        let small = build_topology(&TopologyPreset::Scaled(4)).unwrap();
        gen_functionbench(500, 1).validate(&small).unwrap();
    }

    #[test]
    fn validation_failures() {
        let mut trace = gen_functionbench(3, 1);
        trace.tasks[2].task_id = 7;
        assert!(trace.validate_structure().is_err());
        let mut trace = gen_functionbench(3, 1);
        trace.tasks[0].submit_time = 10;
        assert!(trace.validate_structure().is_err());
        let mut trace = gen_functionbench(3, 1);
        trace.tasks[1].durations.remove(&NodeType::C6620);
        assert!(trace.validate_structure().is_err());
        let m510 = build_topology(&TopologyPreset::Uniform(2, NodeType::M510)).unwrap();
        let big = Trace {
            tasks: vec![TaskSpec::uniform(
                0,
                0,
                ResourceVector::new(9.0, 1.0),
                5,
                NodeType::ALL,
            )],
            metadata: TraceMetadata::default(),
        };
        assert!(matches!(big.validate(&m510), Err(Error::Validation(_))));
    }

    #[test]
    fn offered_load_by_hand() {
        // Two nodes of different types, one task of 2 cores: 10 ms on m510,
        // 30 ms on c6620. Mean core-ms = (2*10 + 2*30) / 2 = 40.
        let nodes = vec![
            NodeSpec::of_type(crate::model::NodeId(0), NodeType::M510),
            NodeSpec::of_type(crate::model::NodeId(1), NodeType::C6620),
        ];
        let mut t = TaskSpec::uniform(0, 0, ResourceVector::new(2.0, 1.0), 10, NodeType::ALL);
        t.durations.insert(NodeType::C6620, 30);
        let trace = Trace {
            tasks: vec![t],
            metadata: TraceMetadata::default(),
        };
        assert_eq!(mean_core_ms_per_task(&trace, &nodes), 40.0);
        // 36 cores; at 900 qps: 900 * 0.04 / 36 = 1.
        assert!((offered_cpu_load(&trace, &nodes, 900.0) - 1.0).abs() < 1e-12);
        assert!((qps_for_cpu_load(&trace, &nodes, 1.0) - 900.0).abs() < 1e-9);
    }
}
