//! Server execution: strict FCFS admission bounded by capacity.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Millis, NodeId, NodeLoadSnapshot, NodeSpec, ResourceVector, TaskId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueuedTask {
    pub task_id: TaskId,
    pub demand: ResourceVector,
    /// Profiled duration on this node's type; reported in `D_j`.
    pub estimate: Millis,
    /// Time the task actually runs for.
    pub actual: Millis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningTask {
    pub task: QueuedTask,
    pub started: Millis,
    pub finish: Millis,
}

/// Invariants: `committed <= spec.capacity` and `rif == queue + running`.
#[derive(Debug, Clone)]
pub struct ServerRuntime {
    spec: NodeSpec,
    queue: VecDeque<QueuedTask>,
    running: Vec<RunningTask>,
    committed: ResourceVector,
    outstanding: NodeLoadSnapshot,
}

impl ServerRuntime {
    pub fn new(spec: NodeSpec) -> Self {
        Self {
            spec,
            queue: VecDeque::new(),
            running: Vec::new(),
            committed: ResourceVector::ZERO,
            outstanding: NodeLoadSnapshot::default(),
        }
    }

    pub fn spec(&self) -> &NodeSpec {
        &self.spec
    }

    pub fn id(&self) -> NodeId {
        self.spec.node_id
    }

    pub fn committed(&self) -> ResourceVector {
        self.committed
    }

    pub fn rif(&self) -> u64 {
        self.outstanding.rif
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn running(&self) -> &[RunningTask] {
        &self.running
    }

    /// True `(L_j, D_j, k_j)` over queued and running tasks.
    pub fn snapshot(&self) -> NodeLoadSnapshot {
        self.outstanding
    }

    /// Appends to the queue. Admission is not attempted.
    pub fn enqueue(&mut self, task: QueuedTask) {
        self.outstanding.add_task(task.demand, task.estimate);
        self.queue.push_back(task);
    }

    /// Starts queue heads while they fit; never skips a blocked head.
    pub fn try_start(&mut self, now: Millis) -> Vec<RunningTask> {
        let mut started = Vec::new();
        while let Some(head) = self.queue.front() {
            if !(self.committed + head.demand).fits_within(&self.spec.capacity) {
                break;
            }
            let task = self.queue.pop_front().expect("head exists");
            self.committed += task.demand;
            let r = RunningTask {
                task,
                started: now,
                finish: now + task.actual,
            };
            self.running.push(r);
            started.push(r);
        }
        started
    }

    /// Releases a running task's resources.
    pub fn complete(&mut self, task_id: TaskId) -> Result<RunningTask> {
        let pos = self
            .running
            .iter()
            .position(|r| r.task.task_id == task_id)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "task {task_id} is not running on {}",
                    self.spec.node_id
                ))
            })?;
        let r = self.running.swap_remove(pos);
        self.committed = self.committed.saturating_sub(&r.task.demand);
        self.outstanding.load = self.outstanding.load.saturating_sub(&r.task.demand);
        self.outstanding.total_duration -= r.task.estimate;
        self.outstanding.rif -= 1;
        if self.running.is_empty() {
            self.committed = ResourceVector::ZERO;
        }
        if self.outstanding.rif == 0 {
            self.outstanding = NodeLoadSnapshot::default();
        }
        Ok(r)
    }
}
