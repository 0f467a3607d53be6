use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dodoor::{LoadDelta, LoadTable};
use crate::model::{Millis, NodeId, NodeLoadSnapshot, SchedulerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Schedule,
    Enqueue,
    ProbeRequest,
    ProbeReply,
    AddNewLoad,
    OverrideNodeState,
    UpdateNodeStates,
    Register,
}

impl MessageKind {
    pub const ALL: [MessageKind; 8] = [
        MessageKind::Schedule,
        MessageKind::Enqueue,
        MessageKind::ProbeRequest,
        MessageKind::ProbeReply,
        MessageKind::AddNewLoad,
        MessageKind::OverrideNodeState,
        MessageKind::UpdateNodeStates,
        MessageKind::Register,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MessageKind::Schedule => "schedule",
            MessageKind::Enqueue => "enqueue",
            MessageKind::ProbeRequest => "probe_request",
            MessageKind::ProbeReply => "probe_reply",
            MessageKind::AddNewLoad => "add_new_load",
            MessageKind::OverrideNodeState => "override_node_state",
            MessageKind::UpdateNodeStates => "update_node_states",
            MessageKind::Register => "register",
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Client,
    Operator,
    Scheduler(SchedulerId),
    Node(NodeId),
    DataStore,
}

impl Endpoint {
    pub fn is_scheduler(&self) -> bool {
        matches!(self, Endpoint::Scheduler(_))
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Client => f.write_str("client"),
            Endpoint::Operator => f.write_str("operator"),
            Endpoint::Scheduler(s) => write!(f, "{s}"),
            Endpoint::Node(n) => write!(f, "{n}"),
            Endpoint::DataStore => f.write_str("datastore"),
        }
    }
}

/// One simulated message. `deliver_time >= send_time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub kind: MessageKind,
    pub from: Endpoint,
    pub to: Endpoint,
    pub send_time: Millis,
    pub deliver_time: Millis,
}

impl MessageRecord {
    /// Sent or received by a scheduler.
    pub fn is_scheduler_handled(&self) -> bool {
        self.from.is_scheduler() || self.to.is_scheduler()
    }
}

/// Contents carried by an in-flight message.
#[derive(Debug, Clone)]
pub(crate) enum Payload {
    Schedule {
        task: usize,
    },
    Enqueue {
        task: usize,
    },
    /// `slot` orders the replies of one synchronous probe round.
    ProbeRequest {
        task: usize,
        slot: usize,
        sent: Millis,
    },
    ProbeReply {
        task: usize,
        slot: usize,
        rif: u64,
        latency_estimate: Millis,
        issued_at: Millis,
    },
    AddNewLoad {
        delta: LoadDelta,
    },
    OverrideNodeState {
        snapshot: NodeLoadSnapshot,
    },
    UpdateNodeStates {
        rows: Arc<LoadTable>,
    },
    Register,
}

impl Payload {
    pub(crate) fn kind(&self) -> MessageKind {
        match self {
            Payload::Schedule { .. } => MessageKind::Schedule,
            Payload::Enqueue { .. } => MessageKind::Enqueue,
            Payload::ProbeRequest { .. } => MessageKind::ProbeRequest,
            Payload::ProbeReply { .. } => MessageKind::ProbeReply,
            Payload::AddNewLoad { .. } => MessageKind::AddNewLoad,
            Payload::OverrideNodeState { .. } => MessageKind::OverrideNodeState,
            Payload::UpdateNodeStates { .. } => MessageKind::UpdateNodeStates,
            Payload::Register => MessageKind::Register,
        }
    }
}
