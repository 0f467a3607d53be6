//! The cached-load power-of-two scheduler.
//!
//! Each instance keeps its own view of every node's load (`L_j`, `D_j`),
//! samples two feasible candidates per task, and keeps the one with the
//! lower load score. Its own placements are applied to the local view at
//! once and accumulated into a delta that is flushed to the data store every
//! `mini_batch` decisions. Full snapshots pushed by the store replace the
//! view; deltas not yet flushed are replayed on top of the new snapshot.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Millis, NodeId, NodeLoadSnapshot, NodeSpec, ResourceVector, SchedulerId, TaskId, TaskSpec,
};
use crate::rng::{placement_rng, random_index};
use crate::scoring::{combine, pre_filter_task, resource_load, ScorePair};

/// Full load table as pushed by the data store.
pub type LoadTable = BTreeMap<NodeId, NodeLoadSnapshot>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoadCache {
    loads: LoadTable,
    version: u64,
}

impl LoadCache {
    pub fn get(&self, node: NodeId) -> Option<&NodeLoadSnapshot> {
        self.loads.get(&node)
    }

    pub fn loads(&self) -> &LoadTable {
        &self.loads
    }

    /// Number of pushes applied so far.
    pub fn version(&self) -> u64 {
        self.version
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub load: ResourceVector,
    pub duration: Millis,
    /// Decisions that contributed to this entry.
    pub count: u64,
}

/// Placements accumulated since the last flush.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadDelta {
    pub entries: BTreeMap<NodeId, DeltaEntry>,
    pub decision_count: u64,
}

impl LoadDelta {
    pub fn record(&mut self, node: NodeId, demand: ResourceVector, duration: Millis) {
        let e = self.entries.entry(node).or_default();
        e.load += demand;
        e.duration += duration;
        e.count += 1;
        self.decision_count += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.decision_count == 0
    }
}

/// One placement made by any policy. Baselines that do not score fill
/// `scores` with `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulerDecision {
    pub task_id: TaskId,
    pub scheduler: SchedulerId,
    pub decided_at: Millis,
    pub candidate_a: NodeId,
    pub candidate_b: NodeId,
    pub chosen: NodeId,
    pub scores: Option<ScorePair>,
    pub cache_version: u64,
}

#[derive(Debug, Clone)]
pub struct DodoorScheduler {
    id: SchedulerId,
    /// Every node this scheduler has been told about.
    known: BTreeMap<NodeId, NodeSpec>,
    /// Candidate domain: known nodes present in the cache, by id.
    domain: Vec<NodeSpec>,
    cache: LoadCache,
    pending: LoadDelta,
    alpha: f64,
    mini_batch: usize,
    placement_seed: u64,
}

impl DodoorScheduler {
    /// A scheduler whose cache starts with every node idle.
    pub fn new(
        id: SchedulerId,
        nodes: &[NodeSpec],
        alpha: f64,
        mini_batch: usize,
        placement_seed: u64,
    ) -> Self {
        let known: BTreeMap<_, _> = nodes.iter().map(|n| (n.node_id, *n)).collect();
        let loads = known
            .keys()
            .map(|&id| (id, NodeLoadSnapshot::default()))
            .collect();
        let mut s = Self {
            id,
            known,
            domain: Vec::new(),
            cache: LoadCache { loads, version: 0 },
            pending: LoadDelta::default(),
            alpha,
            mini_batch: mini_batch.max(1),
            placement_seed,
        };
        s.rebuild_domain();
        s
    }

    pub fn id(&self) -> SchedulerId {
        self.id
    }

    pub fn cache(&self) -> &LoadCache {
        &self.cache
    }

    pub fn pending(&self) -> &LoadDelta {
        &self.pending
    }

    /// Makes a node's spec known so that later pushes may include it. The
    /// node becomes a candidate once a push carries its row.
    pub fn register_node(&mut self, spec: NodeSpec) {
        self.known.insert(spec.node_id, spec);
    }

    fn rebuild_domain(&mut self) {
        self.domain = self
            .cache
            .loads
            .keys()
            .filter_map(|id| self.known.get(id).copied())
            .collect();
    }

    /// Places `task` on the lower-scored of two sampled candidates.
    pub fn schedule(&mut self, task: &TaskSpec, now: Millis) -> Result<SchedulerDecision> {
        let filtered = pre_filter_task(task, &self.domain)?;
        let mut rng = placement_rng(task.task_id, self.placement_seed);
        let a = self.domain[filtered[random_index(&mut rng, filtered.len())]];
        let b = self.domain[filtered[random_index(&mut rng, filtered.len())]];

        let (dur_a, dur_b) = (self.duration(task, &a)?, self.duration(task, &b)?);
        let la = self.cache.loads[&a.node_id];
        let lb = self.cache.loads[&b.node_id];
        // Each candidate is scored with the task's footprint on its own
        // hardware type; for single-footprint tasks this is load_score_pair.
        let rl_a = resource_load(&task.demand_on(a.node_type), &la.load, &a.capacity)?;
        let rl_b = resource_load(&task.demand_on(b.node_type), &lb.load, &b.capacity)?;
        let scores = combine(
            rl_a,
            rl_b,
            (la.total_duration + dur_a) as f64,
            (lb.total_duration + dur_b) as f64,
            self.alpha,
        );
        let chosen = if scores.prefers_b() { b } else { a };
        let chosen_duration = if scores.prefers_b() { dur_b } else { dur_a };

        let decision = SchedulerDecision {
            task_id: task.task_id,
            scheduler: self.id,
            decided_at: now,
            candidate_a: a.node_id,
            candidate_b: b.node_id,
            chosen: chosen.node_id,
            scores: Some(scores),
            cache_version: self.cache.version,
        };

        let placed = task.demand_on(chosen.node_type);
        self.cache
            .loads
            .get_mut(&chosen.node_id)
            .expect("domain nodes are cached")
            .add_task(placed, chosen_duration);
        self.pending.record(chosen.node_id, placed, chosen_duration);
        Ok(decision)
    }

    fn duration(&self, task: &TaskSpec, node: &NodeSpec) -> Result<Millis> {
        task.duration_on(node.node_type).ok_or_else(|| {
            Error::Validation(format!(
                "task {} has no duration for node type {}",
                task.task_id, node.node_type
            ))
        })
    }

    /// Hands out the accumulated delta once it holds `mini_batch` decisions.
    pub fn maybe_flush_delta(&mut self) -> Option<LoadDelta> {
        if self.pending.decision_count >= self.mini_batch as u64 {
            Some(std::mem::take(&mut self.pending))
        } else {
            None
        }
    }

    /// Replaces the cache with a pushed snapshot, then replays the deltas
    /// that have not been flushed yet. Nodes absent from the snapshot leave
    /// the candidate domain.
    pub fn apply_cache_update(&mut self, snapshot: &LoadTable) -> Result<()> {
        if let Some(unknown) = snapshot.keys().find(|id| !self.known.contains_key(id)) {
            return Err(Error::UnknownNode(*unknown));
        }
        let mut loads = snapshot.clone();
        for (node, e) in &self.pending.entries {
            if let Some(row) = loads.get_mut(node) {
                row.load += e.load;
                row.total_duration += e.duration;
                row.rif += e.count;
            }
        }
        self.cache.loads = loads;
        self.cache.version += 1;
        self.rebuild_domain();
        Ok(())
    }

    /// Same as [`Self::apply_cache_update`] for a shared snapshot.
    pub fn apply_shared_update(&mut self, snapshot: &Arc<LoadTable>) -> Result<()> {
        self.apply_cache_update(snapshot.as_ref())
    }
}
