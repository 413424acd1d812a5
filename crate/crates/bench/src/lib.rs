//! Shared fixtures for the criterion benchmarks.

use mrmr_core::data::{samples_to_feature_rows, synthetic_samples};
use mrmr_core::{DomainSpec, FeatureRow, Sample};

pub struct Fixture {
    pub samples: Vec<Sample>,
    pub domains: DomainSpec,
    pub rows: Vec<FeatureRow>,
}

/// A generated boolean dataset in both layouts.
pub fn fixture(observations: usize, features: usize, seed: u64) -> Fixture {
    let samples = synthetic_samples(observations, features, seed).expect("valid generator arguments");
    let domains = DomainSpec::scan(&samples).expect("non-empty dataset");
    let rows = samples_to_feature_rows(&samples);
    Fixture { samples, domains, rows }
}
