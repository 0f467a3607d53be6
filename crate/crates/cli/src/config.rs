use std::fmt;
use std::path::{Path, PathBuf};

use dodoor_sim::metrics::ReportFormat;
use dodoor_sim::model::{ClusterConfig, NodeSpec};
use dodoor_sim::sim::Policy;
use dodoor_sim::workload::{
    assign_arrivals_poisson, build_topology, gen_azure_like, gen_functionbench, load_trace,
    TopologyPreset, Trace,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Functionbench,
    AzureLike,
}

impl Generator {
    pub fn generate(self, count: usize, seed: u64) -> Trace {
        match self {
            Generator::Functionbench => gen_functionbench(count, seed),
            Generator::AzureLike => gen_azure_like(count, seed),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Functionbench => "functionbench",
            Generator::AzureLike => "azure-like",
        })
    }
}

/// Either a generator with a task count or a trace file. A trace file keeps
/// its recorded arrivals unless `qps` is given.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadSpec {
    pub generator: Option<Generator>,
    pub count: Option<usize>,
    pub trace: Option<PathBuf>,
}

/// Values crossed with each other; every cached-load run is repeated once
/// per combination. Empty lists keep the `[cluster]` value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub batch_size: Vec<usize>,
    pub duration_weight: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub policies: Vec<Policy>,
    pub topology: String,
    pub workload: WorkloadSpec,
    #[serde(default)]
    pub qps: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub cluster: ClusterConfig,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_output_dir() -> PathBuf {
    "out".into()
}

fn default_format() -> String {
    "csv".into()
}

/// One simulation: a policy with resolved tunables on one trace instance.
#[derive(Debug, Clone)]
pub struct Cell {
    pub label: String,
    pub policy: Policy,
    pub qps: Option<f64>,
    pub seed: u64,
    pub cluster: ClusterConfig,
}

impl ExperimentConfig {
    /// Reads a TOML config. Relative trace paths resolve against the config
    /// file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        if let Some(trace) = &cfg.workload.trace {
            if trace.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.workload.trace = Some(base.join(trace));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    pub fn preset(&self) -> CliResult<TopologyPreset> {
        Ok(self.topology.parse()?)
    }

    pub fn nodes(&self) -> CliResult<Vec<NodeSpec>> {
        Ok(build_topology(&self.preset()?)?)
    }

    pub fn report_format(&self) -> CliResult<ReportFormat> {
        Ok(self.format.parse()?)
    }

    /// Checks everything that can be checked without simulating, including
    /// that every trace instance fits the topology.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Validation(m));
        if self.policies.is_empty() {
            return bad("`policies` is empty".into());
        }
        if self.seeds.is_empty() {
            return bad("`seeds` is empty".into());
        }
        if let Some(q) = self.qps.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
            return bad(format!("qps {q} must be finite and > 0"));
        }
        match (&self.workload.generator, &self.workload.trace) {
            (Some(_), Some(_)) => return bad("workload sets both `generator` and `trace`".into()),
            (None, None) => return bad("workload needs `generator` or `trace`".into()),
            (Some(_), None) => {
                match self.workload.count {
                    None => return bad("workload `count` is required with a generator".into()),
                    Some(0) => return bad("workload `count` must be > 0".into()),
                    Some(_) => {}
                }
                if self.qps.is_empty() {
                    return bad("`qps` is required with a generator".into());
                }
            }
            (None, Some(path)) => {
                if !path.is_file() {
                    return bad(format!("trace file {} does not exist", path.display()));
                }
            }
        }
        self.report_format()?;
        let nodes = self.nodes()?;
        for cell in self.cells() {
            cell.cluster.resolve(nodes.len())?;
        }
        for (qps, seed) in self.instances() {
            self.trace(qps, seed)?.validate(&nodes)?;
        }
        Ok(())
    }

    fn qps_values(&self) -> Vec<Option<f64>> {
        if self.qps.is_empty() {
            vec![None]
        } else {
            self.qps.iter().copied().map(Some).collect()
        }
    }

    /// Every (qps, seed) trace instance in output order.
    pub fn instances(&self) -> Vec<(Option<f64>, u64)> {
        self.qps_values()
            .into_iter()
            .flat_map(|q| self.seeds.iter().map(move |&s| (q, s)))
            .collect()
    }

    /// Builds the trace of one instance. Generated traces and re-timed
    /// trace files both draw from `seed`.
    pub fn trace(&self, qps: Option<f64>, seed: u64) -> CliResult<Trace> {
        let base = match (&self.workload.generator, &self.workload.trace) {
            (Some(g), _) => g.generate(self.workload.count.unwrap_or(0), seed),
            (None, Some(path)) => load_trace(path)?,
            (None, None) => return Err(CliError::Validation("workload is empty".into())),
        };
        Ok(match qps {
            Some(q) => assign_arrivals_poisson(base, q, seed)?,
            None => base,
        })
    }

    fn variants(&self) -> Vec<(Option<usize>, Option<f64>)> {
        let bs: Vec<Option<usize>> = if self.sweep.batch_size.is_empty() {
            vec![None]
        } else {
            self.sweep.batch_size.iter().copied().map(Some).collect()
        };
        let ws: Vec<Option<f64>> = if self.sweep.duration_weight.is_empty() {
            vec![None]
        } else {
            self.sweep
                .duration_weight
                .iter()
                .copied()
                .map(Some)
                .collect()
        };
        bs.iter()
            .flat_map(|&b| ws.iter().map(move |&w| (b, w)))
            .collect()
    }

    /// Cells grouped by instance, then by policy in config order. Sweeps
    /// expand only the cached-load policy; baselines ignore `b` and `alpha`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for (qps, seed) in self.instances() {
            for &policy in &self.policies {
                let variants = if policy == Policy::Dodoor {
                    self.variants()
                } else {
                    vec![(None, None)]
                };
                for (b, w) in variants {
                    let mut cluster = self.cluster.clone();
                    cluster.placement_seed = seed;
                    let mut label = policy.name().to_string();
                    if let Some(b) = b {
                        cluster.batch_size = Some(b);
                        label.push_str(&format!("_b{b}"));
                    }
                    if let Some(w) = w {
                        cluster.duration_weight = w;
                        label.push_str(&format!("_a{w}"));
                    }
                    if let Some(q) = qps {
                        label.push_str(&format!("_q{q}"));
                    }
                    label.push_str(&format!("_s{seed}"));
                    cells.push(Cell {
                        label,
                        policy,
                        qps,
                        seed,
                        cluster,
                    });
                }
            }
        }
        cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ExperimentConfig {
        toml::from_str(text).unwrap()
    }

    const BASE: &str = r#"
        policies = ["dodoor", "pot"]
        topology = "scaled:8"
        qps = [40.0]
        seeds = [1, 2]
        [workload]
        generator = "functionbench"
        count = 50
    "#;

    #[test]
    fn defaults_and_cells() {
        let cfg = parse(BASE);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        assert_eq!(cfg.cluster, ClusterConfig::default());
        cfg.validate().unwrap();
        let labels: Vec<String> = cfg.cells().into_iter().map(|c| c.label).collect();
        assert_eq!(
            labels,
            ["dodoor_q40_s1", "pot_q40_s1", "dodoor_q40_s2", "pot_q40_s2"]
        );
    }

    #[test]
    fn sweep_expands_only_the_cached_load_policy() {
        let mut cfg = parse(BASE);
        cfg.seeds = vec![1];
        cfg.sweep.batch_size = vec![2, 4];
        cfg.sweep.duration_weight = vec![0.0, 1.0];
        let cells = cfg.cells();
        assert_eq!(cells.len(), 5);
        assert_eq!(cells[1].label, "dodoor_b2_a1_q40_s1");
        assert_eq!(cells[1].cluster.batch_size, Some(2));
        assert_eq!(cells[1].cluster.duration_weight, 1.0);
        assert!(cells.iter().all(|c| c.cluster.placement_seed == 1));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = parse(BASE);
        cfg.workload.count = Some(0);
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
        let mut cfg = parse(BASE);
        cfg.qps = vec![-1.0];
        assert!(cfg.validate().is_err());
        let mut cfg = parse(BASE);
        cfg.topology = "cube:3".into();
        assert!(cfg.validate().is_err());
        let mut cfg = parse(BASE);
        cfg.sweep.duration_weight = vec![1.5];
        assert!(cfg.validate().is_err());
        let mut cfg = parse(BASE);
        cfg.workload.trace = Some("/nonexistent/trace.csv".into());
        cfg.workload.generator = None;
        assert!(cfg.validate().is_err());
        assert!(toml::from_str::<ExperimentConfig>("policies = [\"sparrow\"]").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = parse(BASE);
        assert_eq!(parse(&cfg.to_toml()), cfg);
    }
}
