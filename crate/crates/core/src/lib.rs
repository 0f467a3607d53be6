//! Decentralized task scheduling with batched load caching.
//!
//! Contains the cached-load scheduler ([`dodoor`]) and its data store
//! ([`datastore`]), three probing and non-probing baselines
//! ([`baselines`]), workload generators ([`workload`]), a deterministic
//! discrete-event cluster simulator ([`sim`]) and metric extraction
//! ([`metrics`]).

pub mod baselines;
pub mod datastore;
pub mod dodoor;
pub mod error;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod scoring;
pub mod sim;
pub mod workload;

pub use error::{Error, Result};
