//! Statistical stand-in for the Azure 2020 VM trace.
//!
//! Lifetimes follow an exponential law truncated at ten minutes whose rate
//! is fitted so the truncated mean is 4.13 minutes. Sizes are fractions of a
//! 96-core, 672 GB host clamped to the smallest testbed node. Lifetimes do
//! not depend on hardware.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Trace, TraceMetadata};
use crate::model::{Millis, NodeType, ResourceVector, TaskSpec};

/// Lifetime cap.
pub const MAX_DURATION_MS: Millis = 600_000;
/// Target mean lifetime, 4.13 min.
pub const MEAN_DURATION_MS: f64 = 247_800.0;

/// Memory per core of the reference host (672 GB / 96 cores), in MB.
const MB_PER_CORE: f64 = 7.0 * 1024.0;
const MAX_CORES: f64 = 8.0;
const MAX_MEMORY_MB: f64 = 64.0 * 1024.0;

const CORE_CHOICES: [(f64, f64); 6] = [
    (1.0, 0.30),
    (2.0, 0.30),
    (4.0, 0.20),
    (8.0, 0.12),
    (16.0, 0.05),
    (32.0, 0.03),
];
const MEMORY_RATIOS: [f64; 3] = [0.25, 0.5, 1.0];

/// Mean of an exponential with rate `lambda` truncated to `(0, t]`.
pub fn truncated_exp_mean(lambda: f64, t: f64) -> f64 {
    1.0 / lambda - t / (lambda * t).exp_m1()
}

/// Rate whose truncated mean on `(0, t]` equals `mean`; needs
/// `0 < mean < t / 2`.
pub fn fit_truncated_exp_rate(mean: f64, t: f64) -> f64 {
    debug_assert!(mean > 0.0 && mean < t / 2.0);
    // The truncated mean decreases monotonically in lambda.
    let (mut lo, mut hi) = (1e-12 / t, 1e3 / t);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if truncated_exp_mean(mid, t) > mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse-CDF draw from the truncated exponential.
fn sample_truncated_exp<R: Rng>(rng: &mut R, lambda: f64, t: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u * -(-lambda * t).exp_m1()).ln() / lambda
}

fn weighted<R: Rng>(rng: &mut R, choices: &[(f64, f64)]) -> f64 {
    let total: f64 = choices.iter().map(|(_, w)| w).sum();
    let mut x = rng.random::<f64>() * total;
    for &(v, w) in choices {
        if x < w {
            return v;
        }
        x -= w;
    }
    choices[choices.len() - 1].0
}

pub fn gen_azure_like(count: usize, seed: u64) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = MAX_DURATION_MS as f64;
    let lambda = fit_truncated_exp_rate(MEAN_DURATION_MS, t);
    let tasks = (0..count as u64)
        .map(|id| {
            let duration = (sample_truncated_exp(&mut rng, lambda, t).round() as Millis)
                .clamp(1, MAX_DURATION_MS);
            let cores = weighted(&mut rng, &CORE_CHOICES);
            let ratio = MEMORY_RATIOS[rng.random_range(0..MEMORY_RATIOS.len())];
            let memory = (cores * MB_PER_CORE * ratio).min(MAX_MEMORY_MB).round();
            let demand = ResourceVector::new(cores.min(MAX_CORES), memory);
            TaskSpec::uniform(id, 0, demand, duration, NodeType::ALL)
        })
        .collect();
    let mut metadata = TraceMetadata::new("azure-like");
    metadata.seed = Some(seed);
    metadata.params = BTreeMap::from([
        ("count".into(), count.to_string()),
        ("mean_duration_ms".into(), MEAN_DURATION_MS.to_string()),
        ("max_duration_ms".into(), MAX_DURATION_MS.to_string()),
    ]);
    Trace { tasks, metadata }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fits_within;

    #[test]
    fn fitted_rate_hits_mean() {
        let t = MAX_DURATION_MS as f64;
        let lambda = fit_truncated_exp_rate(MEAN_DURATION_MS, t);
        assert!((truncated_exp_mean(lambda, t) - MEAN_DURATION_MS).abs() < 1e-6);
    }

    #[test]
    fn truncated_mean_matches_quadrature() {
        // Midpoint rule on the truncated density.
        let (lambda, t) = (2.0e-6, 600_000.0);
        let steps = 200_000;
        let h = t / steps as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..steps {
            let x = (i as f64 + 0.5) * h;
            let f = (-lambda * x).exp();
            num += x * f;
            den += f;
        }
        assert!((num / den - truncated_exp_mean(lambda, t)).abs() < 1e-3);
    }

    #[test]
    fn four_thousand_tasks_within_bounds() {
        let trace = gen_azure_like(4000, 1);
        assert_eq!(trace.tasks.len(), 4000);
        let smallest = NodeType::M510.capacity();
        let mut sum = 0.0;
        for t in &trace.tasks {
            let d = t.duration_on(NodeType::M510).unwrap();
            assert!((1..=MAX_DURATION_MS).contains(&d));
            assert!(t.durations.values().all(|&x| x == d));
            assert!(fits_within(&t.demand, &smallest));
            assert_eq!(t.demand.cpu.fract(), 0.0);
            sum += d as f64;
        }
        let mean = sum / 4000.0;
        assert!((mean / MEAN_DURATION_MS - 1.0).abs() <= 0.05, "mean {mean}");
    }

    #[test]
    fn generator_is_pure() {
        assert_eq!(gen_azure_like(100, 4).tasks, gen_azure_like(100, 4).tasks);
        assert_ne!(gen_azure_like(100, 4).tasks, gen_azure_like(100, 5).tasks);
    }
}
