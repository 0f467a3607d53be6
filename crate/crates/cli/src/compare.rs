use std::collections::BTreeMap;
use std::path::Path;

use dodoor_sim::metrics::RunSummary;
use dodoor_sim::sim::Policy;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub struct Metric {
    pub name: &'static str,
    pub lower_is_better: bool,
    pub get: fn(&RunSummary) -> f64,
}

pub const METRICS: [Metric; 7] = [
    Metric {
        name: "scheduler_handled_messages",
        lower_is_better: true,
        get: |s| s.scheduler_handled_messages as f64,
    },
    Metric {
        name: "throughput",
        lower_is_better: false,
        get: |s| s.throughput,
    },
    Metric {
        name: "makespan_mean",
        lower_is_better: true,
        get: |s| s.makespan_mean,
    },
    Metric {
        name: "makespan_p95",
        lower_is_better: true,
        get: |s| s.makespan_p95 as f64,
    },
    Metric {
        name: "sched_latency_mean",
        lower_is_better: true,
        get: |s| s.sched_latency_mean,
    },
    Metric {
        name: "sched_latency_p95",
        lower_is_better: true,
        get: |s| s.sched_latency_p95 as f64,
    },
    Metric {
        name: "util_variance",
        lower_is_better: true,
        get: |s| s.util_variance,
    },
];

/// Relative change of `subject` over `baseline` in percent; `None` when the
/// baseline is zero and the subject is not.
pub fn delta_pct(subject: f64, baseline: f64) -> Option<f64> {
    if baseline == 0.0 {
        (subject == 0.0).then_some(0.0)
    } else {
        Some((subject - baseline) / baseline * 100.0)
    }
}

/// A summarized cell with the trace instance it ran on.
pub struct Outcome {
    pub policy: Policy,
    pub qps: Option<f64>,
    pub seed: u64,
    pub summary: RunSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRow {
    pub qps: Option<f64>,
    pub seed: u64,
    pub subject: String,
    pub baseline: String,
    pub metric: String,
    pub subject_value: f64,
    pub baseline_value: f64,
    pub delta_pct: Option<f64>,
}

/// One wide row per subject cell: every metric with the best baseline for
/// it and the relative delta.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedRow {
    pub qps: Option<f64>,
    pub seed: u64,
    pub subject: String,
    pub cells: Vec<(f64, String, f64, Option<f64>)>,
}

pub struct Comparison {
    pub joined: Vec<JoinedRow>,
    pub deltas: Vec<DeltaRow>,
}

/// The cached-load policy if present, else the first configured policy.
pub fn subject_policy(policies: &[Policy]) -> Policy {
    if policies.contains(&Policy::Dodoor) {
        Policy::Dodoor
    } else {
        policies[0]
    }
}

/// Compares every subject cell with the baselines of its own trace instance.
pub fn compare(outcomes: &[Outcome], subject: Policy) -> Comparison {
    let mut groups: BTreeMap<(u64, u64), Vec<&Outcome>> = BTreeMap::new();
    let mut order = Vec::new();
    for o in outcomes {
        let key = (o.qps.map_or(0, f64::to_bits), o.seed);
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(o);
    }
    let mut joined = Vec::new();
    let mut deltas = Vec::new();
    for key in order {
        let group = &groups[&key];
        let baselines: Vec<&&Outcome> = group.iter().filter(|o| o.policy != subject).collect();
        for s in group.iter().filter(|o| o.policy == subject) {
            let mut cells = Vec::new();
            for m in &METRICS {
                let value = (m.get)(&s.summary);
                for b in &baselines {
                    let bv = (m.get)(&b.summary);
                    deltas.push(DeltaRow {
                        qps: s.qps,
                        seed: s.seed,
                        subject: s.summary.label.clone(),
                        baseline: b.summary.label.clone(),
                        metric: m.name.into(),
                        subject_value: value,
                        baseline_value: bv,
                        delta_pct: delta_pct(value, bv),
                    });
                }
                let best = baselines.iter().min_by(|a, b| {
                    let (x, y) = ((m.get)(&a.summary), (m.get)(&b.summary));
                    if m.lower_is_better {
                        x.total_cmp(&y)
                    } else {
                        y.total_cmp(&x)
                    }
                });
                let (name, bv) = best.map_or((String::new(), f64::NAN), |b| {
                    (b.policy.name().to_string(), (m.get)(&b.summary))
                });
                cells.push((value, name, bv, delta_pct(value, bv)));
            }
            joined.push(JoinedRow {
                qps: s.qps,
                seed: s.seed,
                subject: s.summary.label.clone(),
                cells,
            });
        }
    }
    Comparison { joined, deltas }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn write_joined(rows: &[JoinedRow], path: &Path) -> CliResult<()> {
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Runtime(format!("{}: {other:?}", path.display())),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["qps".to_string(), "seed".into(), "subject".into()];
    for m in &METRICS {
        header.push(m.name.into());
        header.push(format!("{}_best_baseline", m.name));
        header.push(format!("{}_best_value", m.name));
        header.push(format!("{}_delta_pct", m.name));
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![opt(r.qps), r.seed.to_string(), r.subject.clone()];
        for (value, name, bv, d) in &r.cells {
            rec.push(value.to_string());
            rec.push(name.clone());
            rec.push(if bv.is_nan() {
                String::new()
            } else {
                bv.to_string()
            });
            rec.push(opt(*d));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
