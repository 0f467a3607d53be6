use std::path::PathBuf;

use crate::model::{NodeId, SchedulerId, TaskId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("capacity vector must be strictly positive in every dimension")]
    ZeroCapacity,

    #[error("no node can host task {}", .task_id.map_or_else(|| "<anonymous>".to_string(), |id| id.to_string()))]
    UnschedulableTask { task_id: Option<TaskId> },

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("node {0} is already registered")]
    DuplicateNode(NodeId),

    #[error("unknown scheduler {0}")]
    UnknownScheduler(SchedulerId),

    #[error("scheduler {0} is already registered")]
    DuplicateScheduler(SchedulerId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown topology preset `{0}`")]
    InvalidPreset(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("workload validation failed: {0}")]
    Validation(String),

    #[error("run contains no tasks")]
    EmptyRun,

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
