use crate::error::Result;
use crate::model::{NodeId, NodeSpec, TaskSpec};
use crate::rng::{placement_rng, random_index};
use crate::scoring::pre_filter_task;

/// Power-of-two choices on probed requests-in-flight.
///
/// Stateless: a placement depends only on the two sampled nodes and the
/// RIF counts their probes return.
#[derive(Debug, Clone)]
pub struct PotScheduler {
    nodes: Vec<NodeSpec>,
    placement_seed: u64,
}

impl PotScheduler {
    pub fn new(nodes: &[NodeSpec], placement_seed: u64) -> Self {
        Self {
            nodes: nodes.to_vec(),
            placement_seed,
        }
    }

    /// The two nodes to probe, drawn with replacement.
    pub fn sample(&self, task: &TaskSpec) -> Result<(NodeId, NodeId)> {
        let filtered = pre_filter_task(task, &self.nodes)?;
        let mut rng = placement_rng(task.task_id, self.placement_seed);
        let a = self.nodes[filtered[random_index(&mut rng, filtered.len())]].node_id;
        let b = self.nodes[filtered[random_index(&mut rng, filtered.len())]].node_id;
        Ok((a, b))
    }

    /// Node with strictly fewer requests in flight; ties keep `a`.
    pub fn choose(a: (NodeId, u64), b: (NodeId, u64)) -> NodeId {
        if b.1 < a.1 {
            b.0
        } else {
            a.0
        }
    }

    /// Samples, probes synchronously through `probe_rif`, and chooses.
    pub fn schedule(
        &self,
        task: &TaskSpec,
        mut probe_rif: impl FnMut(NodeId) -> u64,
    ) -> Result<NodeId> {
        let (a, b) = self.sample(task)?;
        let (ra, rb) = (probe_rif(a), probe_rif(b));
        Ok(Self::choose((a, ra), (b, rb)))
    }
}
