//! Comparison policies: uniform random placement, synchronous
//! power-of-two probing on requests-in-flight, and Prequal's asynchronous
//! probe pool with hot-cold lexicographic selection.

mod pot;
mod prequal;
pub(crate) mod random;

pub use pot::PotScheduler;
pub use prequal::{PrequalConfig, PrequalDecision, PrequalScheduler, ProbeResult};
pub use random::RandomScheduler;
