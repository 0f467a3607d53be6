//! Serverless Python functions profiled per node type.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Trace, TraceMetadata};
use crate::model::{Millis, NodeType, ResourceVector, TaskSpec};
use crate::rng::random_index;

/// Cores, memory (MB) and mean duration (ms) of one function on one type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub cores: u32,
    pub memory_mb: u32,
    pub duration_ms: Millis,
}

const fn p(cores: u32, memory_mb: u32, duration_ms: Millis) -> Profile {
    Profile {
        cores,
        memory_mb,
        duration_ms,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FunctionBenchTask {
    FloatOp,
    Linpack,
    Matmul,
    Chameleon,
    Pyaes,
    LrTrain,
    LrPredict,
    RnnNameGen,
}

impl FunctionBenchTask {
    pub const ALL: [FunctionBenchTask; 8] = [
        FunctionBenchTask::FloatOp,
        FunctionBenchTask::Linpack,
        FunctionBenchTask::Matmul,
        FunctionBenchTask::Chameleon,
        FunctionBenchTask::Pyaes,
        FunctionBenchTask::LrTrain,
        FunctionBenchTask::LrPredict,
        FunctionBenchTask::RnnNameGen,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FunctionBenchTask::FloatOp => "float_op",
            FunctionBenchTask::Linpack => "linpack",
            FunctionBenchTask::Matmul => "matmul",
            FunctionBenchTask::Chameleon => "chameleon",
            FunctionBenchTask::Pyaes => "pyaes",
            FunctionBenchTask::LrTrain => "lr_train",
            FunctionBenchTask::LrPredict => "lr_predict",
            FunctionBenchTask::RnnNameGen => "rnn_name_gen",
        }
    }

    /// Profiles in [`NodeType::ALL`] order: m510, xl170, c6525-25g, c6620.
    fn profiles(&self) -> [Profile; 4] {
        match self {
            FunctionBenchTask::FloatOp => [p(2, 8, 349), p(2, 8, 239), p(1, 8, 219), p(2, 8, 275)],
            FunctionBenchTask::Linpack => {
                [p(4, 35, 595), p(5, 31, 431), p(8, 29, 372), p(14, 34, 504)]
            }
            FunctionBenchTask::Matmul => {
                [p(4, 39, 699), p(5, 37, 473), p(8, 41, 456), p(14, 38, 547)]
            }
            FunctionBenchTask::Chameleon => {
                [p(2, 38, 966), p(2, 38, 612), p(2, 38, 585), p(2, 37, 569)]
            }
            FunctionBenchTask::Pyaes => [p(2, 11, 362), p(1, 11, 251), p(1, 9, 222), p(2, 11, 288)],
            FunctionBenchTask::LrTrain => [
                p(4, 212, 16201),
                p(5, 212, 7852),
                p(8, 212, 4744),
                p(14, 213, 3532),
            ],
            FunctionBenchTask::LrPredict => [
                p(4, 210, 4341),
                p(5, 210, 3144),
                p(8, 210, 2937),
                p(14, 209, 2462),
            ],
            FunctionBenchTask::RnnNameGen => [
                p(4, 468, 3132),
                p(5, 467, 2068),
                p(8, 468, 2084),
                p(14, 470, 1738),
            ],
        }
    }

    pub fn profile(&self, node_type: NodeType) -> Profile {
        let i = NodeType::ALL
            .iter()
            .position(|t| *t == node_type)
            .expect("ALL lists every type");
        self.profiles()[i]
    }

    /// A task of this kind. The envelope demand is the per-type maximum;
    /// per-type footprints are kept alongside.
    pub fn task(&self, task_id: u64, submit_time: Millis) -> TaskSpec {
        let mut durations = BTreeMap::new();
        let mut type_demands = BTreeMap::new();
        let mut envelope = ResourceVector::ZERO;
        for t in NodeType::ALL {
            let pr = self.profile(t);
            let d = ResourceVector::new(f64::from(pr.cores), f64::from(pr.memory_mb));
            envelope.cpu = envelope.cpu.max(d.cpu);
            envelope.memory = envelope.memory.max(d.memory);
            durations.insert(t, pr.duration_ms);
            type_demands.insert(t, d);
        }
        TaskSpec {
            task_id,
            submit_time,
            demand: envelope,
            durations,
            type_demands,
        }
    }

    /// Recovers the kind of a generated task from its m510 duration, which
    /// is distinct for every function.
    pub fn identify(task: &TaskSpec) -> Option<FunctionBenchTask> {
        let d = task.duration_on(NodeType::M510)?;
        Self::ALL
            .into_iter()
            .find(|k| k.profile(NodeType::M510).duration_ms == d)
    }
}

/// `count` tasks with kinds drawn uniformly; all submit times are zero until
/// arrivals are assigned.
pub fn gen_functionbench(count: usize, seed: u64) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tasks = (0..count as u64)
        .map(|id| FunctionBenchTask::ALL[random_index(&mut rng, 8)].task(id, 0))
        .collect();
    let mut metadata = TraceMetadata::new("functionbench");
    metadata.seed = Some(seed);
    metadata.params.insert("count".into(), count.to_string());
    Trace { tasks, metadata }
}
