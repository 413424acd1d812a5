//! Greedy mRMR forward selection.
//!
//! Three interchangeable drivers produce the same ordered selection on
//! discrete data:
//!
//! * [`select_conventional`] runs one MapReduce job per iteration over
//!   observation records, emitting single-observation contingency tables
//!   that are summed by the combiner and scored by the reducer.
//! * [`select_alternative`] runs a map-only job per iteration over feature
//!   records, with the class and the selected feature vectors broadcast to
//!   every mapper.
//! * [`sequential_oracle`] is a plain nested loop with no engine involved.

mod alternative;
mod conventional;
mod oracle;

use serde::Serialize;

pub use alternative::{get_entry, select_alternative, CLASS_ROW};
pub use conventional::{
    conventional_emissions, conventional_job, partner_information, score_from_tables, select_conventional,
    select_conventional_with, ConventionalOptions, Partner, TableKey, TaggedTable,
};
pub use oracle::sequential_oracle;

use crate::engine::JobStats;
use crate::types::{FeatureIndex, Layout};

/// One pick of the greedy loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectedFeature {
    pub index: FeatureIndex,
    pub score: f64,
    pub iteration: usize,
}

/// The ordered output of a selection run plus the configuration it ran with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub num_features: usize,
    pub score: String,
    /// `None` for the sequential oracle.
    pub layout: Option<Layout>,
    pub features: Vec<SelectedFeature>,
}

impl SelectionResult {
    pub(crate) fn new(num_features: usize, score: &str, layout: Option<Layout>) -> Self {
        SelectionResult { num_features, score: score.to_owned(), layout, features: Vec::with_capacity(num_features) }
    }

    pub(crate) fn push(&mut self, index: FeatureIndex, score: f64) {
        let iteration = self.features.len() + 1;
        self.features.push(SelectedFeature { index, score, iteration });
    }

    pub fn indices(&self) -> Vec<FeatureIndex> {
        self.features.iter().map(|f| f.index).collect()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.features.iter().map(|f| f.score).collect()
    }

    /// Same features in the same order, scores within `tolerance`.
    pub fn agrees_with(&self, other: &SelectionResult, tolerance: f64) -> bool {
        self.features.len() == other.features.len()
            && self
                .features
                .iter()
                .zip(&other.features)
                .all(|(a, b)| a.index == b.index && a.iteration == b.iteration && (a.score - b.score).abs() <= tolerance)
    }
}

/// A selection result together with the statistics of every job it ran.
#[derive(Debug, Clone)]
pub struct Selection {
    pub result: SelectionResult,
    pub jobs: Vec<JobStats>,
}

impl Selection {
    pub fn bytes_shuffled(&self) -> u64 {
        self.jobs.iter().map(|j| j.bytes_shuffled).sum()
    }
}
