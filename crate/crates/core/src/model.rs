//! Domain types shared by every scheduler and by the simulator.
//!
//! Resources are two-dimensional: CPU in cores and memory in MB. Times and
//! durations are integer milliseconds of simulated time.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::PrequalConfig;
use crate::error::{Error, Result};

/// Simulated milliseconds.
pub type Millis = u64;

pub type TaskId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node-{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchedulerId(pub u32);

impl fmt::Display for SchedulerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scheduler-{}", self.0)
    }
}

/// A demand, load, or capacity over CPU cores and memory (MB).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResourceVector {
    pub cpu: f64,
    pub memory: f64,
}

impl ResourceVector {
    pub const ZERO: ResourceVector = ResourceVector {
        cpu: 0.0,
        memory: 0.0,
    };

    pub const fn new(cpu: f64, memory: f64) -> Self {
        Self { cpu, memory }
    }

    pub fn dot(&self, other: &ResourceVector) -> f64 {
        self.cpu * other.cpu + self.memory * other.memory
    }

    /// Sum of squared components. Rejects vectors with a non-positive
    /// component, since the result is used as a capacity denominator.
    pub fn l2_norm_sq(&self) -> Result<f64> {
        if self.cpu <= 0.0 || self.memory <= 0.0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(self.dot(self))
    }

    /// Component-wise `self <= capacity`.
    pub fn fits_within(&self, capacity: &ResourceVector) -> bool {
        self.cpu <= capacity.cpu && self.memory <= capacity.memory
    }

    /// Component-wise subtraction clamped at zero.
    pub fn saturating_sub(&self, other: &ResourceVector) -> ResourceVector {
        ResourceVector {
            cpu: (self.cpu - other.cpu).max(0.0),
            memory: (self.memory - other.memory).max(0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cpu == 0.0 && self.memory == 0.0
    }

    pub fn is_non_negative(&self) -> bool {
        self.cpu >= 0.0 && self.memory >= 0.0
    }
}

pub fn dot(a: &ResourceVector, b: &ResourceVector) -> f64 {
    a.dot(b)
}

pub fn l2_norm_sq(c: &ResourceVector) -> Result<f64> {
    c.l2_norm_sq()
}

pub fn fits_within(demand: &ResourceVector, capacity: &ResourceVector) -> bool {
    demand.fits_within(capacity)
}

impl Add for ResourceVector {
    type Output = ResourceVector;

    fn add(self, rhs: ResourceVector) -> ResourceVector {
        ResourceVector {
            cpu: self.cpu + rhs.cpu,
            memory: self.memory + rhs.memory,
        }
    }
}

impl AddAssign for ResourceVector {
    fn add_assign(&mut self, rhs: ResourceVector) {
        self.cpu += rhs.cpu;
        self.memory += rhs.memory;
    }
}

impl Mul<f64> for ResourceVector {
    type Output = ResourceVector;

    fn mul(self, rhs: f64) -> ResourceVector {
        ResourceVector {
            cpu: self.cpu * rhs,
            memory: self.memory * rhs,
        }
    }
}

/// Hardware type of a server node. All nodes of one type are identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeType {
    #[serde(rename = "m510")]
    M510,
    #[serde(rename = "xl170")]
    Xl170,
    #[serde(rename = "c6525-25g")]
    C6525,
    #[serde(rename = "c6620")]
    C6620,
}

impl NodeType {
    pub const ALL: [NodeType; 4] = [
        NodeType::M510,
        NodeType::Xl170,
        NodeType::C6525,
        NodeType::C6620,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NodeType::M510 => "m510",
            NodeType::Xl170 => "xl170",
            NodeType::C6525 => "c6525-25g",
            NodeType::C6620 => "c6620",
        }
    }

    pub fn core_count(&self) -> u32 {
        match self {
            NodeType::M510 => 8,
            NodeType::Xl170 => 10,
            NodeType::C6525 => 16,
            NodeType::C6620 => 28,
        }
    }

    pub fn memory_mb(&self) -> f64 {
        match self {
            NodeType::M510 | NodeType::Xl170 => 64.0 * 1024.0,
            NodeType::C6525 | NodeType::C6620 => 128.0 * 1024.0,
        }
    }

    pub fn capacity(&self) -> ResourceVector {
        ResourceVector::new(f64::from(self.core_count()), self.memory_mb())
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NodeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodeType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown node type `{s}`")))
    }
}

/// A task submitted to the cluster.
///
/// `demand` is the envelope used by callers that need a single vector. When
/// a task's footprint differs per hardware type, `type_demands` carries the
/// per-type values and [`TaskSpec::demand_on`] prefers them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub task_id: TaskId,
    pub submit_time: Millis,
    pub demand: ResourceVector,
    pub durations: BTreeMap<NodeType, Millis>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub type_demands: BTreeMap<NodeType, ResourceVector>,
}

impl TaskSpec {
    /// A task whose demand and duration are the same on every given type.
    pub fn uniform(
        task_id: TaskId,
        submit_time: Millis,
        demand: ResourceVector,
        duration: Millis,
        types: impl IntoIterator<Item = NodeType>,
    ) -> Self {
        Self {
            task_id,
            submit_time,
            demand,
            durations: types.into_iter().map(|t| (t, duration)).collect(),
            type_demands: BTreeMap::new(),
        }
    }

    pub fn demand_on(&self, node_type: NodeType) -> ResourceVector {
        self.type_demands
            .get(&node_type)
            .copied()
            .unwrap_or(self.demand)
    }

    pub fn duration_on(&self, node_type: NodeType) -> Option<Millis> {
        self.durations.get(&node_type).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub node_id: NodeId,
    pub node_type: NodeType,
    pub capacity: ResourceVector,
    pub core_count: u32,
}

impl NodeSpec {
    pub fn of_type(node_id: NodeId, node_type: NodeType) -> Self {
        Self {
            node_id,
            node_type,
            capacity: node_type.capacity(),
            core_count: node_type.core_count(),
        }
    }
}

/// Load view of one node: resource load `L_j`, total pending estimated
/// duration `D_j` and requests-in-flight `k_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NodeLoadSnapshot {
    pub load: ResourceVector,
    pub total_duration: Millis,
    pub rif: u64,
}

impl NodeLoadSnapshot {
    pub fn add_task(&mut self, demand: ResourceVector, duration: Millis) {
        self.load += demand;
        self.total_duration += duration;
        self.rif += 1;
    }

    pub fn is_idle(&self) -> bool {
        self.rif == 0 && self.load.is_zero() && self.total_duration == 0
    }
}

/// Message latency model used by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatencyModel {
    /// Constant one-way latency per message hop.
    pub hop_ms: Millis,
    /// Service time of each endpoint's inbound FIFO. Zero disables
    /// endpoint contention.
    pub endpoint_service_ms: Millis,
}

impl Default for LatencyModel {
    fn default() -> Self {
        Self {
            hop_ms: 1,
            endpoint_service_ms: 1,
        }
    }
}

impl LatencyModel {
    pub const ZERO: LatencyModel = LatencyModel {
        hop_ms: 0,
        endpoint_service_ms: 0,
    };
}

/// Cluster-wide tunables. `None` fields are derived from the topology by
/// [`ClusterConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterConfig {
    /// Decisions per cache push (`b`). Defaults to half the node count.
    pub batch_size: Option<usize>,
    /// Weight of the duration term in the load score (`alpha`).
    pub duration_weight: f64,
    pub num_schedulers: usize,
    /// Decisions per `addNewLoad` flush. Defaults to `max(1, b / (2s))`.
    pub mini_batch: Option<usize>,
    pub latency: LatencyModel,
    /// Sigma of a mean-one log-normal factor applied to actual execution
    /// times. Zero runs tasks for exactly their estimated duration.
    pub duration_noise_sigma: f64,
    /// Utilization sampling period; `None` disables sampling.
    pub utilization_interval_ms: Option<Millis>,
    /// Selects the random stream of every task-seeded generator, so that
    /// repeated trials over the same trace draw independent placements.
    pub placement_seed: u64,
    pub prequal: PrequalConfig,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            batch_size: None,
            duration_weight: 0.5,
            num_schedulers: 5,
            mini_batch: None,
            latency: LatencyModel::default(),
            duration_noise_sigma: 0.0,
            utilization_interval_ms: Some(10_000),
            placement_seed: 0,
            prequal: PrequalConfig::default(),
        }
    }
}

/// A [`ClusterConfig`] with every derived parameter filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub num_nodes: usize,
    pub batch_size: usize,
    pub duration_weight: f64,
    pub num_schedulers: usize,
    pub mini_batch: usize,
    pub latency: LatencyModel,
    pub duration_noise_sigma: f64,
    pub utilization_interval_ms: Option<Millis>,
    pub placement_seed: u64,
    pub prequal: PrequalConfig,
}

impl ClusterConfig {
    pub fn resolve(&self, num_nodes: usize) -> Result<ClusterParams> {
        if num_nodes == 0 {
            return Err(Error::InvalidConfig("topology has no nodes".into()));
        }
        if self.num_schedulers == 0 {
            return Err(Error::InvalidConfig("num_schedulers must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.duration_weight) {
            return Err(Error::InvalidConfig(format!(
                "duration_weight {} outside [0, 1]",
                self.duration_weight
            )));
        }
        if !(self.duration_noise_sigma >= 0.0 && self.duration_noise_sigma.is_finite()) {
            return Err(Error::InvalidConfig(
                "duration_noise_sigma must be finite and >= 0".into(),
            ));
        }
        if self.utilization_interval_ms == Some(0) {
            return Err(Error::InvalidConfig(
                "utilization_interval_ms must be > 0".into(),
            ));
        }
        let batch_size = self.batch_size.unwrap_or((num_nodes / 2).max(1));
        if batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be > 0".into()));
        }
        let mini_batch = self
            .mini_batch
            .unwrap_or_else(|| (batch_size / (2 * self.num_schedulers)).max(1));
        if mini_batch == 0 || mini_batch > batch_size {
            return Err(Error::InvalidConfig(format!(
                "mini_batch {mini_batch} outside [1, batch_size={batch_size}]"
            )));
        }
        self.prequal.validate()?;
        Ok(ClusterParams {
            num_nodes,
            batch_size,
            duration_weight: self.duration_weight,
            num_schedulers: self.num_schedulers,
            mini_batch,
            latency: self.latency,
            duration_noise_sigma: self.duration_noise_sigma,
            utilization_interval_ms: self.utilization_interval_ms,
            placement_seed: self.placement_seed,
            prequal: self.prequal,
        })
    }
}
