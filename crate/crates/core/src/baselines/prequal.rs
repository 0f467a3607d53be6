use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Millis, NodeId, NodeSpec, TaskSpec};
use crate::rng::{placement_rng, random_index};
use crate::scoring::pre_filter_task;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrequalConfig {
    /// Probes issued after every decision.
    pub r_probe: usize,
    /// Pool capacity.
    pub s_pool: usize,
    /// RIF quantile separating hot from cold entries.
    pub q_rif: f64,
    /// Uses allowed per probe result.
    pub b_reuse: u32,
    /// Entries evicted per overflow.
    pub r_remove: usize,
}

impl Default for PrequalConfig {
    fn default() -> Self {
        Self {
            r_probe: 3,
            s_pool: 16,
            q_rif: 0.84,
            b_reuse: 1,
            r_remove: 1,
        }
    }
}

impl PrequalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_probe == 0 || self.s_pool == 0 || self.b_reuse == 0 || self.r_remove == 0 {
            return Err(Error::InvalidConfig(
                "prequal parameters must be positive".into(),
            ));
        }
        if !(self.q_rif > 0.0 && self.q_rif < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "prequal q_rif {} outside (0, 1)",
                self.q_rif
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub node_id: NodeId,
    pub rif: u64,
    /// The node's total pending estimated duration when probed.
    pub latency_estimate: Millis,
    pub issued_at: Millis,
    pub reuse_count: u32,
}

impl ProbeResult {
    pub fn new(node_id: NodeId, rif: u64, latency_estimate: Millis, issued_at: Millis) -> Self {
        Self {
            node_id,
            rif,
            latency_estimate,
            issued_at,
            reuse_count: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrequalDecision {
    pub chosen: NodeId,
    /// False when the pool had no usable entry and the node was drawn at
    /// random.
    pub from_pool: bool,
    /// Nodes to probe asynchronously now that the decision is made.
    pub probe_targets: Vec<NodeId>,
}

/// Nearest-rank quantile of unsorted values: the element at rank
/// `ceil(q * n)` (1-based) of the sorted sample.
pub fn nearest_rank(values: &[u64], q: f64) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

#[derive(Debug, Clone)]
pub struct PrequalScheduler {
    nodes: Vec<NodeSpec>,
    config: PrequalConfig,
    /// Oldest first.
    pool: Vec<ProbeResult>,
    placement_seed: u64,
}

impl PrequalScheduler {
    pub fn new(nodes: &[NodeSpec], config: PrequalConfig, placement_seed: u64) -> Self {
        Self {
            nodes: nodes.to_vec(),
            config,
            pool: Vec::with_capacity(config.s_pool + config.r_probe),
            placement_seed,
        }
    }

    pub fn pool(&self) -> &[ProbeResult] {
        &self.pool
    }

    pub fn config(&self) -> &PrequalConfig {
        &self.config
    }

    /// Hot-cold lexicographic pick among pool entries on `feasible` nodes:
    /// the lowest latency among entries whose RIF is below the pool's RIF
    /// quantile. When no pool entry lies strictly below the cut (the cut is
    /// the pool minimum, e.g. all RIFs equal) entries at the cut qualify.
    fn select(&self, feasible: &BTreeSet<NodeId>) -> Option<usize> {
        let rifs: Vec<u64> = self.pool.iter().map(|p| p.rif).collect();
        let cut = nearest_rank(&rifs, self.config.q_rif)?;
        let any_below = rifs.iter().any(|&r| r < cut);
        self.pool
            .iter()
            .enumerate()
            .filter(|(_, p)| feasible.contains(&p.node_id))
            .filter(|(_, p)| if any_below { p.rif < cut } else { p.rif <= cut })
            .min_by_key(|(i, p)| (p.latency_estimate, p.rif, *i))
            .map(|(i, _)| i)
    }

    pub fn schedule(&mut self, task: &TaskSpec) -> Result<PrequalDecision> {
        let filtered = pre_filter_task(task, &self.nodes)?;
        let mut rng = placement_rng(task.task_id, self.placement_seed);
        let feasible: BTreeSet<NodeId> = filtered.iter().map(|&i| self.nodes[i].node_id).collect();

        let (chosen, from_pool) = match self.select(&feasible) {
            Some(i) => {
                let entry = &mut self.pool[i];
                entry.reuse_count += 1;
                let node = entry.node_id;
                if entry.reuse_count >= self.config.b_reuse {
                    self.pool.remove(i);
                }
                (node, true)
            }
            None => {
                let idx = filtered[random_index(&mut rng, filtered.len())];
                (self.nodes[idx].node_id, false)
            }
        };

        let probe_targets = (0..self.config.r_probe)
            .map(|_| self.nodes[random_index(&mut rng, self.nodes.len())].node_id)
            .collect();
        Ok(PrequalDecision {
            chosen,
            from_pool,
            probe_targets,
        })
    }

    /// Adds a probe result, evicting when the pool overflows.
    pub fn insert_probe(&mut self, result: ProbeResult) {
        self.pool.push(result);
        if self.pool.len() > self.config.s_pool {
            let excess = self.pool.len() - self.config.s_pool;
            for _ in 0..excess.max(self.config.r_remove) {
                self.evict_one();
            }
        }
    }

    /// Removes the highest-RIF entry, the oldest among equals.
    fn evict_one(&mut self) {
        let victim = self
            .pool
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.rif
                    .cmp(&b.rif)
                    .then(b.issued_at.cmp(&a.issued_at))
                    .then(j.cmp(i))
            })
            .map(|(i, _)| i);
        if let Some(i) = victim {
            self.pool.remove(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeType, ResourceVector};

    fn nodes(n: u32) -> Vec<NodeSpec> {
        (0..n)
            .map(|i| NodeSpec::of_type(NodeId(i), NodeType::M510))
            .collect()
    }

    fn task(id: u64) -> TaskSpec {
        TaskSpec::uniform(id, 0, ResourceVector::new(1.0, 1.0), 10, NodeType::ALL)
    }

    #[test]
    fn defaults_match_recommended_settings() {
        let c = PrequalConfig::default();
        assert_eq!((c.r_remove, c.r_probe, c.s_pool, c.b_reuse), (1, 3, 16, 1));
        assert_eq!(c.q_rif, 0.84);
        c.validate().unwrap();
        assert!(PrequalConfig { q_rif: 1.0, ..c }.validate().is_err());
        assert!(PrequalConfig { s_pool: 0, ..c }.validate().is_err());
    }

    #[test]
    fn nearest_rank_quantile() {
        assert_eq!(nearest_rank(&[9, 1], 0.84), Some(9));
        assert_eq!(nearest_rank(&[5], 0.84), Some(5));
        assert_eq!(nearest_rank(&[], 0.84), None);
        // ceil(0.84 * 10) = 9th smallest.
        let v: Vec<u64> = (1..=10).rev().collect();
        assert_eq!(nearest_rank(&v, 0.84), Some(9));
    }

    #[test]
    fn empty_pool_falls_back_to_random() {
        let mut s = PrequalScheduler::new(&nodes(4), PrequalConfig::default(), 0);
        let d = s.schedule(&task(11)).unwrap();
        assert!(!d.from_pool);
        let mut rng = placement_rng(11, 0);
        assert_eq!(d.chosen, NodeId(random_index(&mut rng, 4) as u32));
        assert_eq!(d.probe_targets.len(), 3);
    }

    #[test]
    fn cold_entry_beats_hot_low_latency_entry() {
        let mut s = PrequalScheduler::new(&nodes(4), PrequalConfig::default(), 0);
        s.insert_probe(ProbeResult::new(NodeId(1), 1, 100, 0));
        s.insert_probe(ProbeResult::new(NodeId(2), 9, 10, 0));
        let d = s.schedule(&task(0)).unwrap();
        assert!(d.from_pool);
        assert_eq!(d.chosen, NodeId(1));
        // b_reuse = 1: the used entry is gone.
        assert_eq!(s.pool().len(), 1);
        assert_eq!(s.pool()[0].node_id, NodeId(2));
    }

    #[test]
    fn equal_rifs_qualify_whole_pool() {
        let mut s = PrequalScheduler::new(&nodes(4), PrequalConfig::default(), 0);
        s.insert_probe(ProbeResult::new(NodeId(0), 2, 50, 0));
        s.insert_probe(ProbeResult::new(NodeId(3), 2, 20, 1));
        assert_eq!(s.schedule(&task(0)).unwrap().chosen, NodeId(3));
    }

    #[test]
    fn reuse_budget_allows_multiple_uses() {
        let cfg = PrequalConfig {
            b_reuse: 2,
            ..Default::default()
        };
        let mut s = PrequalScheduler::new(&nodes(4), cfg, 0);
        s.insert_probe(ProbeResult::new(NodeId(2), 0, 5, 0));
        assert_eq!(s.schedule(&task(0)).unwrap().chosen, NodeId(2));
        assert_eq!(s.pool()[0].reuse_count, 1);
        assert_eq!(s.schedule(&task(1)).unwrap().chosen, NodeId(2));
        assert!(s.pool().is_empty());
    }

    #[test]
    fn infeasible_pool_entries_are_ignored() {
        let ns = vec![
            NodeSpec::of_type(NodeId(0), NodeType::M510),
            NodeSpec::of_type(NodeId(1), NodeType::C6620),
        ];
        let mut s = PrequalScheduler::new(&ns, PrequalConfig::default(), 0);
        s.insert_probe(ProbeResult::new(NodeId(0), 0, 0, 0));
        let big = TaskSpec::uniform(5, 0, ResourceVector::new(20.0, 1.0), 10, NodeType::ALL);
        let d = s.schedule(&big).unwrap();
        assert_eq!(d.chosen, NodeId(1));
        assert!(!d.from_pool);
        assert_eq!(s.pool().len(), 1);
    }

    #[test]
    fn pool_capacity_is_maintained() {
        let mut s = PrequalScheduler::new(&nodes(4), PrequalConfig::default(), 0);
        s.insert_probe(ProbeResult::new(NodeId(0), 0, 0, 0));
        assert_eq!(s.pool().len(), 1);
        for t in 1..17 {
            s.insert_probe(ProbeResult::new(NodeId(0), t, 0, t));
        }
        assert_eq!(s.pool().len(), 16);
        for t in 17..20 {
            s.insert_probe(ProbeResult::new(NodeId(1), 0, 0, t));
            assert!(s.pool().len() <= 16);
        }
    }

    #[test]
    fn eviction_takes_highest_rif_not_oldest() {
        let cfg = PrequalConfig {
            s_pool: 3,
            ..Default::default()
        };
        let mut s = PrequalScheduler::new(&nodes(4), cfg, 0);
        s.insert_probe(ProbeResult::new(NodeId(0), 1, 0, 0)); // oldest
        s.insert_probe(ProbeResult::new(NodeId(1), 7, 0, 1)); // highest RIF
        s.insert_probe(ProbeResult::new(NodeId(2), 2, 0, 2));
        s.insert_probe(ProbeResult::new(NodeId(3), 3, 0, 3));
        let left: Vec<_> = s.pool().iter().map(|p| p.node_id.0).collect();
        assert_eq!(left, vec![0, 2, 3]);
        // RIF tie: the older of the two goes.
        s.insert_probe(ProbeResult::new(NodeId(1), 3, 0, 4));
        let left: Vec<_> = s.pool().iter().map(|p| p.node_id.0).collect();
        assert_eq!(left, vec![0, 2, 1]);
    }

    #[test]
    fn r_remove_evicts_in_bulk() {
        let cfg = PrequalConfig {
            s_pool: 4,
            r_remove: 2,
            ..Default::default()
        };
        let mut s = PrequalScheduler::new(&nodes(4), cfg, 0);
        for t in 0..5 {
            s.insert_probe(ProbeResult::new(NodeId(0), t, 0, t));
        }
        assert_eq!(s.pool().len(), 3);
    }
}
