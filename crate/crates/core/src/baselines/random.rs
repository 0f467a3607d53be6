use crate::error::Result;
use crate::model::{NodeId, NodeSpec, TaskSpec};
use crate::rng::{placement_rng, random_index};
use crate::scoring::pre_filter_task;

/// Single-choice placement over the feasible nodes.
#[derive(Debug, Clone)]
pub struct RandomScheduler {
    nodes: Vec<NodeSpec>,
    placement_seed: u64,
}

impl RandomScheduler {
    pub fn new(nodes: &[NodeSpec], placement_seed: u64) -> Self {
        Self {
            nodes: nodes.to_vec(),
            placement_seed,
        }
    }

    pub fn schedule(&self, task: &TaskSpec) -> Result<NodeId> {
        let filtered = pre_filter_task(task, &self.nodes)?;
        let mut rng = placement_rng(task.task_id, self.placement_seed);
        Ok(self.nodes[filtered[random_index(&mut rng, filtered.len())]].node_id)
    }
}
