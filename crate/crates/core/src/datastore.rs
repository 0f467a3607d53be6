//! Push-only, batched aggregator of node load.
//!
//! Servers override their row after every completion; schedulers add
//! mini-batched deltas of their placements. Every `b` counted decisions the
//! full table is pushed to all registered schedulers. The store never
//! answers reads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dodoor::{LoadDelta, LoadTable};
use crate::error::{Error, Result};
use crate::model::{NodeId, NodeLoadSnapshot, NodeSpec, SchedulerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushReason {
    /// `b` decisions were counted since the previous batch push.
    Batch,
    /// Node membership changed; the batch counter was reset.
    Membership,
}

/// A full snapshot addressed to every registered scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchPush {
    pub reason: PushReason,
    pub targets: Vec<SchedulerId>,
    pub rows: Arc<LoadTable>,
}

#[derive(Debug, Clone)]
pub struct DataStore {
    rows: LoadTable,
    nodes: BTreeMap<NodeId, NodeSpec>,
    schedulers: BTreeSet<SchedulerId>,
    batch_size: u64,
    decision_counter: u64,
    batch_pushes: u64,
}

impl DataStore {
    pub fn new(batch_size: usize) -> Self {
        Self {
            rows: LoadTable::new(),
            nodes: BTreeMap::new(),
            schedulers: BTreeSet::new(),
            batch_size: batch_size.max(1) as u64,
            decision_counter: 0,
            batch_pushes: 0,
        }
    }

    pub fn rows(&self) -> &LoadTable {
        &self.rows
    }

    pub fn row(&self, node: NodeId) -> Option<&NodeLoadSnapshot> {
        self.rows.get(&node)
    }

    /// Decisions counted toward the next batch push (`p`).
    pub fn decision_counter(&self) -> u64 {
        self.decision_counter
    }

    /// Pushes triggered by the batch counter, excluding membership pushes.
    pub fn batch_pushes(&self) -> u64 {
        self.batch_pushes
    }

    pub fn schedulers(&self) -> impl Iterator<Item = SchedulerId> + '_ {
        self.schedulers.iter().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeSpec> + '_ {
        self.nodes.values()
    }

    fn push(&self, reason: PushReason) -> Option<BatchPush> {
        if self.schedulers.is_empty() {
            return None;
        }
        Some(BatchPush {
            reason,
            targets: self.schedulers.iter().copied().collect(),
            rows: Arc::new(self.rows.clone()),
        })
    }

    fn membership_changed(&mut self) -> Option<BatchPush> {
        self.decision_counter = 0;
        self.push(PushReason::Membership)
    }

    pub fn register_node(&mut self, spec: NodeSpec) -> Result<Option<BatchPush>> {
        if self.nodes.contains_key(&spec.node_id) {
            return Err(Error::DuplicateNode(spec.node_id));
        }
        self.nodes.insert(spec.node_id, spec);
        self.rows.insert(spec.node_id, NodeLoadSnapshot::default());
        Ok(self.membership_changed())
    }

    pub fn unregister_node(&mut self, node: NodeId) -> Result<Option<BatchPush>> {
        if self.nodes.remove(&node).is_none() {
            return Err(Error::UnknownNode(node));
        }
        self.rows.remove(&node);
        Ok(self.membership_changed())
    }

    pub fn register_scheduler(&mut self, id: SchedulerId) -> Result<()> {
        if !self.schedulers.insert(id) {
            return Err(Error::DuplicateScheduler(id));
        }
        Ok(())
    }

    pub fn unregister_scheduler(&mut self, id: SchedulerId) -> Result<()> {
        if !self.schedulers.remove(&id) {
            return Err(Error::UnknownScheduler(id));
        }
        Ok(())
    }

    /// Replaces a node's row with the server's own view. Does not count as
    /// a decision.
    pub fn override_node_state(&mut self, node: NodeId, snapshot: NodeLoadSnapshot) -> Result<()> {
        let row = self.rows.get_mut(&node).ok_or(Error::UnknownNode(node))?;
        *row = snapshot;
        Ok(())
    }

    /// Adds a scheduler's delta and advances the decision counter by the
    /// number of decisions it carries. Overshoot carries into the next
    /// batch.
    pub fn add_new_load(&mut self, delta: &LoadDelta) -> Result<Option<BatchPush>> {
        if let Some(unknown) = delta.entries.keys().find(|n| !self.rows.contains_key(n)) {
            return Err(Error::UnknownNode(*unknown));
        }
        for (node, e) in &delta.entries {
            let row = self.rows.get_mut(node).expect("checked above");
            row.load += e.load;
            row.total_duration += e.duration;
            row.rif += e.count;
        }
        self.decision_counter += delta.decision_count;
        if self.decision_counter >= self.batch_size {
            self.decision_counter -= self.batch_size;
            self.batch_pushes += 1;
            return Ok(self.push(PushReason::Batch));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeType, ResourceVector};

    fn spec(i: u32) -> NodeSpec {
        NodeSpec::of_type(NodeId(i), NodeType::M510)
    }

    fn delta(node: u32, decisions: u64) -> LoadDelta {
        let mut d = LoadDelta::default();
        for _ in 0..decisions {
            d.record(NodeId(node), ResourceVector::new(1.0, 10.0), 100);
        }
        d
    }

    fn store_with(nodes: u32, schedulers: u32, b: usize) -> DataStore {
        let mut s = DataStore::new(b);
        for i in 0..nodes {
            s.register_node(spec(i)).unwrap();
        }
        for i in 0..schedulers {
            s.register_scheduler(SchedulerId(i)).unwrap();
        }
        s
    }

    #[test]
    fn registration() {
        let mut s = DataStore::new(50);
        assert!(s.register_node(spec(0)).unwrap().is_none());
        assert!(s.row(NodeId(0)).unwrap().is_idle());
        assert!(matches!(
            s.register_node(spec(0)),
            Err(Error::DuplicateNode(NodeId(0)))
        ));
        s.register_scheduler(SchedulerId(1)).unwrap();
        assert!(matches!(
            s.register_scheduler(SchedulerId(1)),
            Err(Error::DuplicateScheduler(_))
        ));
        s.unregister_scheduler(SchedulerId(1)).unwrap();
        assert!(s.unregister_scheduler(SchedulerId(1)).is_err());
        assert!(s.unregister_node(NodeId(7)).is_err());
    }

    #[test]
    fn membership_change_pushes_and_resets_batch() {
        let mut s = store_with(3, 5, 50);
        s.add_new_load(&delta(0, 7)).unwrap();
        assert_eq!(s.decision_counter(), 7);
        let push = s.unregister_node(NodeId(1)).unwrap().unwrap();
        assert_eq!(push.reason, PushReason::Membership);
        assert_eq!(push.targets.len(), 5);
        assert!(!push.rows.contains_key(&NodeId(1)));
        assert_eq!(s.decision_counter(), 0);
        assert_eq!(s.batch_pushes(), 0);
        let push = s.register_node(spec(9)).unwrap().unwrap();
        assert!(push.rows.contains_key(&NodeId(9)));
    }

    #[test]
    fn push_fans_out_to_registered_schedulers() {
        let mut s = store_with(2, 5, 5);
        let push = s.add_new_load(&delta(0, 5)).unwrap().unwrap();
        assert_eq!(push.targets, (0..5).map(SchedulerId).collect::<Vec<_>>());

        let mut lonely = store_with(2, 0, 5);
        assert!(lonely.add_new_load(&delta(0, 5)).unwrap().is_none());
        // The batch still closed even though nobody listened.
        assert_eq!(lonely.batch_pushes(), 1);
    }

    #[test]
    fn override_replaces_row() {
        let mut s = store_with(2, 1, 50);
        s.add_new_load(&delta(0, 3)).unwrap();
        s.override_node_state(NodeId(0), NodeLoadSnapshot::default())
            .unwrap();
        assert!(s.row(NodeId(0)).unwrap().is_idle());
        assert_eq!(s.decision_counter(), 3);
        assert!(matches!(
            s.override_node_state(NodeId(5), NodeLoadSnapshot::default()),
            Err(Error::UnknownNode(NodeId(5)))
        ));
    }

    #[test]
    fn override_then_delta() {
        let mut s = store_with(2, 1, 50);
        let mut snap = NodeLoadSnapshot::default();
        snap.add_task(ResourceVector::new(2.0, 5.0), 40);
        s.override_node_state(NodeId(1), snap).unwrap();
        s.add_new_load(&delta(1, 2)).unwrap();

        let mut expected = snap;
        expected.add_task(ResourceVector::new(1.0, 10.0), 100);
        expected.add_task(ResourceVector::new(1.0, 10.0), 100);
        assert_eq!(s.row(NodeId(1)), Some(&expected));
    }

    #[test]
    fn batch_boundary_and_carry_over() {
        let mut s = store_with(1, 1, 50);
        s.add_new_load(&delta(0, 45)).unwrap();
        assert!(s.add_new_load(&delta(0, 5)).unwrap().is_some());
        assert_eq!(s.decision_counter(), 0);

        let mut s = store_with(1, 1, 50);
        s.add_new_load(&delta(0, 48)).unwrap();
        assert!(s.add_new_load(&delta(0, 5)).unwrap().is_some());
        assert_eq!(s.decision_counter(), 3);
    }

    #[test]
    fn push_count_matches_closed_form() {
        let mut s = store_with(4, 5, 50);
        for i in 0..800 {
            s.add_new_load(&delta(i % 4, 5)).unwrap();
        }
        assert_eq!(s.batch_pushes(), 4000 / 50);
        assert_eq!(s.decision_counter(), 0);
    }

    #[test]
    fn unknown_node_in_delta_leaves_table_untouched() {
        let mut s = store_with(1, 1, 50);
        let mut d = delta(0, 1);
        d.record(NodeId(3), ResourceVector::new(1.0, 1.0), 1);
        assert!(matches!(
            s.add_new_load(&d),
            Err(Error::UnknownNode(NodeId(3)))
        ));
        assert!(s.row(NodeId(0)).unwrap().is_idle());
        assert_eq!(s.decision_counter(), 0);
    }

    #[test]
    fn silent_node_is_soft_pinned() {
        // Deltas keep arriving for a node that never overrides: its row only
        // grows.
        let mut s = store_with(2, 1, 1000);
        let mut last = *s.row(NodeId(1)).unwrap();
        for _ in 0..20 {
            s.add_new_load(&delta(1, 1)).unwrap();
            s.override_node_state(NodeId(0), NodeLoadSnapshot::default())
                .unwrap();
            let now = *s.row(NodeId(1)).unwrap();
            assert!(now.load.cpu > last.load.cpu);
            assert!(now.total_duration > last.total_duration);
            assert!(now.rif > last.rif);
            last = now;
        }
    }
}
