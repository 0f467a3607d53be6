//! Deterministic discrete-event cluster simulator.
//!
//! Events are processed in `(time, sequence)` order on a single thread.
//! Every message passes through the destination endpoint's FIFO: it is
//! delivered at `max(send + hop, busy_until)` and occupies the endpoint for
//! the service time. Servers admit queued tasks in strict FCFS order.

mod message;
pub mod server;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::baselines::{PotScheduler, PrequalScheduler, ProbeResult, RandomScheduler};
use crate::datastore::DataStore;
use crate::dodoor::{DodoorScheduler, LoadDelta, LoadTable, SchedulerDecision};
use crate::error::{Error, Result};
use crate::model::{
    ClusterConfig, ClusterParams, Millis, NodeId, NodeLoadSnapshot, NodeSpec, SchedulerId, TaskId,
    TaskSpec,
};
use crate::rng::noise_rng;
use crate::workload::Trace;

use message::Payload;
pub use message::{Endpoint, MessageKind, MessageRecord};
use server::{QueuedTask, ServerRuntime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Dodoor,
    Random,
    Pot,
    Prequal,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::Dodoor, Policy::Random, Policy::Pot, Policy::Prequal];

    pub fn name(&self) -> &'static str {
        match self {
            Policy::Dodoor => "dodoor",
            Policy::Random => "random",
            Policy::Pot => "pot",
            Policy::Prequal => "prequal",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown policy `{s}`")))
    }
}

/// Lifecycle of one task. `submit <= decided <= enqueued <= started <= completed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task_id: TaskId,
    pub scheduler: SchedulerId,
    pub node: NodeId,
    pub submit: Millis,
    pub decided: Millis,
    pub enqueued: Millis,
    pub started: Millis,
    pub completed: Millis,
}

impl TaskRecord {
    pub fn makespan(&self) -> Millis {
        self.completed - self.submit
    }

    pub fn scheduling_latency(&self) -> Millis {
        self.enqueued - self.submit
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PartialRecord {
    scheduler: Option<SchedulerId>,
    node: Option<NodeId>,
    decided: Option<Millis>,
    enqueued: Option<Millis>,
    started: Option<Millis>,
    completed: Option<Millis>,
}

/// Per-node `(cpu, memory)` utilization at one instant, in node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilizationSample {
    pub time: Millis,
    pub per_node: Vec<(f64, f64)>,
}

/// State transitions of the cached-load machinery, recorded by
/// [`run_audited`] in processing order.
#[derive(Debug, Clone, PartialEq)]
pub enum AuditEvent {
    Decision(SchedulerDecision),
    Flush {
        scheduler: SchedulerId,
        time: Millis,
        delta: LoadDelta,
    },
    CacheUpdate {
        scheduler: SchedulerId,
        time: Millis,
        snapshot: Arc<LoadTable>,
        cache_after: LoadTable,
    },
    StoreOverride {
        time: Millis,
        node: NodeId,
        snapshot: NodeLoadSnapshot,
        rows_after: LoadTable,
    },
    StoreAdd {
        time: Millis,
        scheduler: SchedulerId,
        delta: LoadDelta,
        pushed: bool,
        rows_after: LoadTable,
    },
    /// Start or completion of a task; `committed` is the node's total after
    /// the change.
    Execution {
        time: Millis,
        node: NodeId,
        task_id: TaskId,
        started: bool,
        committed: crate::model::ResourceVector,
    },
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub policy: Policy,
    pub params: ClusterParams,
    pub nodes: Vec<NodeSpec>,
    pub decisions: Vec<SchedulerDecision>,
    pub messages: Vec<MessageRecord>,
    /// Indexed by task id.
    pub tasks: Vec<TaskRecord>,
    pub samples: Vec<UtilizationSample>,
    /// Batch pushes fired by the data store; each fans out to every
    /// scheduler.
    pub push_count: u64,
    /// Time of the last non-sampling event.
    pub end_time: Millis,
    pub audit: Vec<AuditEvent>,
}

impl RunResult {
    pub fn scheduler_handled_messages(&self) -> u64 {
        self.messages
            .iter()
            .filter(|m| m.is_scheduler_handled())
            .count() as u64
    }

    pub fn count(&self, kind: MessageKind) -> u64 {
        self.messages.iter().filter(|m| m.kind == kind).count() as u64
    }
}

enum EventKind {
    Arrival(usize),
    Deliver {
        from: Endpoint,
        to: Endpoint,
        payload: Payload,
    },
    Complete {
        node: usize,
        task_id: TaskId,
    },
    Sample,
}

struct Event {
    time: Millis,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.seq) == (other.time, other.seq)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed: BinaryHeap pops the earliest (time, seq).
    fn cmp(&self, other: &Self) -> Ordering {
        (other.time, other.seq).cmp(&(self.time, self.seq))
    }
}

enum Schedulers {
    Dodoor(Vec<DodoorScheduler>),
    Random(RandomScheduler),
    Pot {
        pot: PotScheduler,
        /// Outstanding probe rounds by task index: candidates and replies.
        rounds: BTreeMap<usize, ([NodeId; 2], [Option<u64>; 2])>,
    },
    Prequal(Vec<PrequalScheduler>),
}

struct Sim<'a> {
    tasks: &'a [TaskSpec],
    params: ClusterParams,
    policy: Policy,
    nodes: Vec<NodeSpec>,
    node_index: BTreeMap<NodeId, usize>,
    servers: Vec<ServerRuntime>,
    schedulers: Schedulers,
    store: Option<DataStore>,
    heap: BinaryHeap<Event>,
    seq: u64,
    busy: BTreeMap<Endpoint, Millis>,
    records: Vec<PartialRecord>,
    decisions: Vec<SchedulerDecision>,
    messages: Vec<MessageRecord>,
    samples: Vec<UtilizationSample>,
    audit: Option<Vec<AuditEvent>>,
    noise: Option<LogNormal<f64>>,
}

/// Runs `trace` on `nodes` under `policy` until quiescence.
pub fn run(
    config: &ClusterConfig,
    nodes: &[NodeSpec],
    trace: &Trace,
    policy: Policy,
) -> Result<RunResult> {
    Sim::new(config, nodes, trace, policy, false)?.run()
}

/// Like [`run`], additionally recording every cache, store and execution
/// transition.
pub fn run_audited(
    config: &ClusterConfig,
    nodes: &[NodeSpec],
    trace: &Trace,
    policy: Policy,
) -> Result<RunResult> {
    Sim::new(config, nodes, trace, policy, true)?.run()
}

impl<'a> Sim<'a> {
    fn new(
        config: &ClusterConfig,
        nodes: &[NodeSpec],
        trace: &'a Trace,
        policy: Policy,
        audited: bool,
    ) -> Result<Self> {
        let params = config.resolve(nodes.len())?;
        let mut node_index = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            n.capacity.l2_norm_sq()?;
            if node_index.insert(n.node_id, i).is_some() {
                return Err(Error::DuplicateNode(n.node_id));
            }
        }
        trace.validate(nodes)?;

        let seed = params.placement_seed;
        let s = params.num_schedulers as u32;
        let schedulers = match policy {
            Policy::Dodoor => Schedulers::Dodoor(
                (0..s)
                    .map(|i| {
                        DodoorScheduler::new(
                            SchedulerId(i),
                            nodes,
                            params.duration_weight,
                            params.mini_batch,
                            seed,
                        )
                    })
                    .collect(),
            ),
            Policy::Random => Schedulers::Random(RandomScheduler::new(nodes, seed)),
            Policy::Pot => Schedulers::Pot {
                pot: PotScheduler::new(nodes, seed),
                rounds: BTreeMap::new(),
            },
            Policy::Prequal => Schedulers::Prequal(
                (0..s)
                    .map(|_| PrequalScheduler::new(nodes, params.prequal, seed))
                    .collect(),
            ),
        };
        let store = if policy == Policy::Dodoor {
            // Bootstrap registration happens before any scheduler listens,
            // so it triggers no pushes.
            let mut ds = DataStore::new(params.batch_size);
            for n in nodes {
                ds.register_node(*n)?;
            }
            for i in 0..s {
                ds.register_scheduler(SchedulerId(i))?;
            }
            Some(ds)
        } else {
            None
        };
        let noise = if params.duration_noise_sigma > 0.0 {
            let sigma = params.duration_noise_sigma;
            Some(
                LogNormal::new(-sigma * sigma / 2.0, sigma)
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?,
            )
        } else {
            None
        };

        Ok(Self {
            tasks: &trace.tasks,
            params,
            policy,
            nodes: nodes.to_vec(),
            node_index,
            servers: nodes.iter().map(|n| ServerRuntime::new(*n)).collect(),
            schedulers,
            store,
            heap: BinaryHeap::new(),
            seq: 0,
            busy: BTreeMap::new(),
            records: vec![PartialRecord::default(); trace.tasks.len()],
            decisions: Vec::with_capacity(trace.tasks.len()),
            messages: Vec::new(),
            samples: Vec::new(),
            audit: audited.then(Vec::new),
            noise,
        })
    }

    fn push(&mut self, time: Millis, kind: EventKind) {
        self.heap.push(Event {
            time,
            seq: self.seq,
            kind,
        });
        self.seq += 1;
    }

    fn send(&mut self, now: Millis, from: Endpoint, to: Endpoint, payload: Payload) {
        let lat = self.params.latency;
        let busy = self.busy.entry(to).or_insert(0);
        let deliver = (now + lat.hop_ms).max(*busy);
        if lat.endpoint_service_ms > 0 {
            *busy = deliver + lat.endpoint_service_ms;
        }
        self.messages.push(MessageRecord {
            kind: payload.kind(),
            from,
            to,
            send_time: now,
            deliver_time: deliver,
        });
        self.push(deliver, EventKind::Deliver { from, to, payload });
    }

    fn audit(&mut self, e: impl FnOnce() -> AuditEvent) {
        if let Some(log) = &mut self.audit {
            log.push(e());
        }
    }

    fn run(mut self) -> Result<RunResult> {
        if self.tasks.is_empty() {
            return Ok(self.finish(0));
        }
        if self.store.is_some() {
            let registrations = self.nodes.len() + self.params.num_schedulers;
            for _ in 0..registrations {
                self.send(
                    0,
                    Endpoint::Operator,
                    Endpoint::DataStore,
                    Payload::Register,
                );
            }
        }
        if self.params.utilization_interval_ms.is_some() {
            self.push(0, EventKind::Sample);
        }
        for i in 0..self.tasks.len() {
            self.push(self.tasks[i].submit_time, EventKind::Arrival(i));
        }

        let mut end = 0;
        while let Some(ev) = self.heap.pop() {
            let now = ev.time;
            match ev.kind {
                EventKind::Sample => {
                    // A sample after the last event would only read idle
                    // nodes.
                    if self.heap.is_empty() {
                        break;
                    }
                    self.sample(now);
                    let interval = self.params.utilization_interval_ms.expect("sampling on");
                    self.push(now + interval, EventKind::Sample);
                    continue;
                }
                EventKind::Arrival(i) => {
                    let k = SchedulerId((i % self.params.num_schedulers) as u32);
                    self.records[i].scheduler = Some(k);
                    self.send(
                        now,
                        Endpoint::Client,
                        Endpoint::Scheduler(k),
                        Payload::Schedule { task: i },
                    );
                }
                EventKind::Deliver { from, to, payload } => self.deliver(now, from, to, payload)?,
                EventKind::Complete { node, task_id } => self.complete(now, node, task_id)?,
            }
            end = now;
        }
        Ok(self.finish(end))
    }

    fn sample(&mut self, now: Millis) {
        let per_node = self
            .servers
            .iter()
            .map(|s| {
                let c = s.committed();
                let cap = s.spec().capacity;
                (c.cpu / cap.cpu, c.memory / cap.memory)
            })
            .collect();
        self.samples.push(UtilizationSample {
            time: now,
            per_node,
        });
    }

    fn node_endpoint(&self, i: usize) -> Endpoint {
        Endpoint::Node(self.nodes[i].node_id)
    }

    fn index_of(&self, node: NodeId) -> Result<usize> {
        self.node_index
            .get(&node)
            .copied()
            .ok_or(Error::UnknownNode(node))
    }

    fn deliver(
        &mut self,
        now: Millis,
        from: Endpoint,
        to: Endpoint,
        payload: Payload,
    ) -> Result<()> {
        match (to, payload) {
            (Endpoint::Scheduler(k), Payload::Schedule { task }) => self.decide(now, k, task),
            (Endpoint::Node(n), Payload::Enqueue { task, .. }) => {
                let i = self.index_of(n)?;
                self.enqueue(now, i, task)
            }
            (Endpoint::Node(n), Payload::ProbeRequest { task, slot, sent }) => {
                let snap = self.servers[self.index_of(n)?].snapshot();
                self.send(
                    now,
                    to,
                    from,
                    Payload::ProbeReply {
                        task,
                        slot,
                        rif: snap.rif,
                        latency_estimate: snap.total_duration,
                        issued_at: sent,
                    },
                );
                Ok(())
            }
            (
                Endpoint::Scheduler(k),
                Payload::ProbeReply {
                    task,
                    slot,
                    rif,
                    latency_estimate,
                    issued_at,
                },
            ) => {
                let Endpoint::Node(node) = from else {
                    unreachable!("probe replies come from nodes")
                };
                self.probe_reply(now, k, task, slot, node, rif, latency_estimate, issued_at)
            }
            (Endpoint::DataStore, Payload::AddNewLoad { delta }) => {
                let Endpoint::Scheduler(k) = from else {
                    unreachable!("deltas come from schedulers")
                };
                let store = self.store.as_mut().expect("store exists under dodoor");
                let push = store.add_new_load(&delta)?;
                if self.audit.is_some() {
                    let rows_after = store.rows().clone();
                    let pushed = push.is_some();
                    self.audit(|| AuditEvent::StoreAdd {
                        time: now,
                        scheduler: k,
                        delta,
                        pushed,
                        rows_after,
                    });
                }
                if let Some(push) = push {
                    for target in push.targets {
                        self.send(
                            now,
                            Endpoint::DataStore,
                            Endpoint::Scheduler(target),
                            Payload::UpdateNodeStates {
                                rows: Arc::clone(&push.rows),
                            },
                        );
                    }
                }
                Ok(())
            }
            (Endpoint::DataStore, Payload::OverrideNodeState { snapshot }) => {
                let Endpoint::Node(node) = from else {
                    unreachable!("overrides come from nodes")
                };
                let store = self.store.as_mut().expect("store exists under dodoor");
                store.override_node_state(node, snapshot)?;
                if self.audit.is_some() {
                    let rows_after = store.rows().clone();
                    self.audit(|| AuditEvent::StoreOverride {
                        time: now,
                        node,
                        snapshot,
                        rows_after,
                    });
                }
                Ok(())
            }
            (Endpoint::Scheduler(k), Payload::UpdateNodeStates { rows }) => {
                let Schedulers::Dodoor(scheds) = &mut self.schedulers else {
                    unreachable!("pushes only exist under dodoor")
                };
                let s = &mut scheds[k.0 as usize];
                s.apply_shared_update(&rows)?;
                if self.audit.is_some() {
                    let cache_after = s.cache().loads().clone();
                    self.audit(|| AuditEvent::CacheUpdate {
                        scheduler: k,
                        time: now,
                        snapshot: rows,
                        cache_after,
                    });
                }
                Ok(())
            }
            (Endpoint::DataStore, Payload::Register) => Ok(()),
            (to, payload) => unreachable!("{:?} delivered to {to}", payload.kind()),
        }
    }

    fn record_decision(&mut self, now: Millis, task: usize, d: SchedulerDecision) {
        self.records[task].decided = Some(now);
        self.records[task].node = Some(d.chosen);
        self.audit(|| AuditEvent::Decision(d.clone()));
        self.decisions.push(d);
    }

    fn enqueue_to(&mut self, now: Millis, k: SchedulerId, task: usize, node: NodeId) {
        self.send(
            now,
            Endpoint::Scheduler(k),
            Endpoint::Node(node),
            Payload::Enqueue { task },
        );
    }

    fn decide(&mut self, now: Millis, k: SchedulerId, i: usize) -> Result<()> {
        let task = &self.tasks[i];
        let from = Endpoint::Scheduler(k);
        match &mut self.schedulers {
            Schedulers::Dodoor(scheds) => {
                let s = &mut scheds[k.0 as usize];
                let d = s.schedule(task, now)?;
                let flushed = s.maybe_flush_delta();
                let chosen = d.chosen;
                self.record_decision(now, i, d);
                self.enqueue_to(now, k, i, chosen);
                if let Some(delta) = flushed {
                    if self.audit.is_some() {
                        let delta = delta.clone();
                        self.audit(|| AuditEvent::Flush {
                            scheduler: k,
                            time: now,
                            delta,
                        });
                    }
                    self.send(
                        now,
                        from,
                        Endpoint::DataStore,
                        Payload::AddNewLoad { delta },
                    );
                }
            }
            Schedulers::Random(r) => {
                let chosen = r.schedule(task)?;
                self.record_decision(now, i, single(task.task_id, k, now, chosen));
                self.enqueue_to(now, k, i, chosen);
            }
            Schedulers::Pot { pot, rounds } => {
                let (a, b) = pot.sample(task)?;
                rounds.insert(i, ([a, b], [None, None]));
                for (slot, n) in [a, b].into_iter().enumerate() {
                    self.send(
                        now,
                        from,
                        Endpoint::Node(n),
                        Payload::ProbeRequest {
                            task: i,
                            slot,
                            sent: now,
                        },
                    );
                }
            }
            Schedulers::Prequal(scheds) => {
                let d = scheds[k.0 as usize].schedule(task)?;
                self.record_decision(now, i, single(task.task_id, k, now, d.chosen));
                self.enqueue_to(now, k, i, d.chosen);
                for (slot, n) in d.probe_targets.into_iter().enumerate() {
                    self.send(
                        now,
                        from,
                        Endpoint::Node(n),
                        Payload::ProbeRequest {
                            task: i,
                            slot,
                            sent: now,
                        },
                    );
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn probe_reply(
        &mut self,
        now: Millis,
        k: SchedulerId,
        i: usize,
        slot: usize,
        node: NodeId,
        rif: u64,
        latency_estimate: Millis,
        issued_at: Millis,
    ) -> Result<()> {
        match &mut self.schedulers {
            Schedulers::Pot { rounds, .. } => {
                let round = rounds.get_mut(&i).expect("probe round is open");
                round.1[slot] = Some(rif);
                if let ([a, b], [Some(ra), Some(rb)]) = *round {
                    rounds.remove(&i);
                    let chosen = PotScheduler::choose((a, ra), (b, rb));
                    let d = SchedulerDecision {
                        task_id: self.tasks[i].task_id,
                        scheduler: k,
                        decided_at: now,
                        candidate_a: a,
                        candidate_b: b,
                        chosen,
                        scores: None,
                        cache_version: 0,
                    };
                    self.record_decision(now, i, d);
                    self.enqueue_to(now, k, i, chosen);
                }
            }
            Schedulers::Prequal(scheds) => {
                scheds[k.0 as usize].insert_probe(ProbeResult::new(
                    node,
                    rif,
                    latency_estimate,
                    issued_at,
                ));
            }
            _ => unreachable!("only probing policies receive probe replies"),
        }
        Ok(())
    }

    fn actual_duration(&self, task: &TaskSpec, estimate: Millis) -> Millis {
        match &self.noise {
            None => estimate,
            Some(dist) => {
                let mut rng = noise_rng(task.task_id, self.params.placement_seed);
                ((estimate as f64 * dist.sample(&mut rng)).round() as Millis).max(1)
            }
        }
    }

    fn enqueue(&mut self, now: Millis, node: usize, i: usize) -> Result<()> {
        let task = &self.tasks[i];
        let ty = self.nodes[node].node_type;
        let estimate = task.duration_on(ty).ok_or_else(|| {
            Error::Validation(format!("task {} has no duration for {ty}", task.task_id))
        })?;
        let q = QueuedTask {
            task_id: task.task_id,
            demand: task.demand_on(ty),
            estimate,
            actual: self.actual_duration(task, estimate),
        };
        self.records[i].enqueued = Some(now);
        self.servers[node].enqueue(q);
        self.start_ready(now, node);
        Ok(())
    }

    fn start_ready(&mut self, now: Millis, node: usize) {
        // Replays the server's own accumulation so each audit entry carries
        // the commitment right after that start.
        let mut committed = self.servers[node].committed();
        for r in self.servers[node].try_start(now) {
            let id = r.task.task_id;
            self.records[id as usize].started = Some(now);
            committed += r.task.demand;
            if self.audit.is_some() {
                let node_id = self.nodes[node].node_id;
                self.audit(|| AuditEvent::Execution {
                    time: now,
                    node: node_id,
                    task_id: id,
                    started: true,
                    committed,
                });
            }
            self.push(r.finish, EventKind::Complete { node, task_id: id });
        }
        debug_assert!(self.servers[node]
            .committed()
            .fits_within(&self.nodes[node].capacity));
    }

    fn complete(&mut self, now: Millis, node: usize, task_id: TaskId) -> Result<()> {
        self.servers[node].complete(task_id)?;
        self.records[task_id as usize].completed = Some(now);
        if self.audit.is_some() {
            let committed = self.servers[node].committed();
            let node_id = self.nodes[node].node_id;
            self.audit(|| AuditEvent::Execution {
                time: now,
                node: node_id,
                task_id,
                started: false,
                committed,
            });
        }
        if self.store.is_some() {
            let snapshot = self.servers[node].snapshot();
            let from = self.node_endpoint(node);
            self.send(
                now,
                from,
                Endpoint::DataStore,
                Payload::OverrideNodeState { snapshot },
            );
        }
        self.start_ready(now, node);
        Ok(())
    }

    fn finish(self, end_time: Millis) -> RunResult {
        let tasks = self
            .records
            .iter()
            .zip(self.tasks)
            .map(|(r, t)| TaskRecord {
                task_id: t.task_id,
                scheduler: r.scheduler.expect("every task arrives"),
                node: r.node.expect("every task is placed"),
                submit: t.submit_time,
                decided: r.decided.expect("every task is placed"),
                enqueued: r.enqueued.expect("every task is enqueued"),
                started: r.started.expect("every task starts"),
                completed: r.completed.expect("every task completes"),
            })
            .collect();
        RunResult {
            policy: self.policy,
            push_count: self.store.as_ref().map_or(0, DataStore::batch_pushes),
            params: self.params,
            nodes: self.nodes,
            decisions: self.decisions,
            messages: self.messages,
            tasks,
            samples: self.samples,
            end_time,
            audit: self.audit.unwrap_or_default(),
        }
    }
}

/// Decision record of a policy that considers a single node.
fn single(task_id: TaskId, k: SchedulerId, now: Millis, chosen: NodeId) -> SchedulerDecision {
    SchedulerDecision {
        task_id,
        scheduler: k,
        decided_at: now,
        candidate_a: chosen,
        candidate_b: chosen,
        chosen,
        scores: None,
        cache_version: 0,
    }
}
