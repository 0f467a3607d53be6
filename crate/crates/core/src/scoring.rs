//! Resource-load anti-affinity score, the pairwise load score, and the
//! capacity pre-filter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Millis, NodeSpec, ResourceVector, TaskSpec};

/// Normalized scores of two candidates. Lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub score_a: f64,
    pub score_b: f64,
}

impl ScorePair {
    /// True when candidate B should replace A. Ties keep A.
    pub fn prefers_b(&self) -> bool {
        self.score_a > self.score_b
    }
}

/// `r . L / sum_k C_k^2`: how much the task's demand overlaps what is
/// already loaded on the node, relative to the node's size.
pub fn resource_load(
    demand: &ResourceVector,
    load: &ResourceVector,
    capacity: &ResourceVector,
) -> Result<f64> {
    let norm = capacity.l2_norm_sq()?;
    Ok(demand.dot(load) / norm)
}

/// Share of `x` in `x + y`, or an even split when both are zero.
fn share(x: f64, y: f64) -> (f64, f64) {
    let sum = x + y;
    if sum > 0.0 {
        (x / sum, y / sum)
    } else {
        (0.5, 0.5)
    }
}

/// Load score of two candidates for one task.
///
/// `duration_a` and `duration_b` must already include the task's own
/// estimated duration on each candidate (`D_j + d_ij`).
#[allow(clippy::too_many_arguments)]
pub fn load_score_pair(
    demand: &ResourceVector,
    load_a: &ResourceVector,
    load_b: &ResourceVector,
    duration_a: Millis,
    duration_b: Millis,
    capacity_a: &ResourceVector,
    capacity_b: &ResourceVector,
    alpha: f64,
) -> Result<ScorePair> {
    let rl_a = resource_load(demand, load_a, capacity_a)?;
    let rl_b = resource_load(demand, load_b, capacity_b)?;
    Ok(combine(
        rl_a,
        rl_b,
        duration_a as f64,
        duration_b as f64,
        alpha,
    ))
}

/// Convex combination of the RL shares and duration shares.
pub fn combine(rl_a: f64, rl_b: f64, duration_a: f64, duration_b: f64, alpha: f64) -> ScorePair {
    let (rl_share_a, rl_share_b) = share(rl_a, rl_b);
    let (d_share_a, d_share_b) = share(duration_a, duration_b);
    ScorePair {
        score_a: (1.0 - alpha) * rl_share_a + alpha * d_share_a,
        score_b: (1.0 - alpha) * rl_share_b + alpha * d_share_b,
    }
}

/// Indices of the nodes whose capacity can hold `demand`, in input order.
pub fn pre_filter(demand: &ResourceVector, nodes: &[NodeSpec]) -> Result<Vec<usize>> {
    let idx: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| demand.fits_within(&n.capacity))
        .map(|(i, _)| i)
        .collect();
    if idx.is_empty() {
        return Err(Error::UnschedulableTask { task_id: None });
    }
    Ok(idx)
}

/// [`pre_filter`] for a task, checking the task's footprint on each node's
/// own hardware type.
pub fn pre_filter_task(task: &TaskSpec, nodes: &[NodeSpec]) -> Result<Vec<usize>> {
    let idx: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| task.demand_on(n.node_type).fits_within(&n.capacity))
        .map(|(i, _)| i)
        .collect();
    if idx.is_empty() {
        return Err(Error::UnschedulableTask {
            task_id: Some(task.task_id),
        });
    }
    Ok(idx)
}
