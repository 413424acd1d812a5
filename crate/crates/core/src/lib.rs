//! Minimum-redundancy maximum-relevance (mRMR) feature selection on top of a
//! small in-process MapReduce engine.
//!
//! Datasets can be processed in either orientation: observations as records
//! ([`select_conventional`], contingency tables flowing through a
//! map/combine/reduce job) or features as records ([`select_alternative`],
//! map-only jobs with broadcast class and selected vectors and a pluggable
//! [`ScoreFunction`]). [`sequential_oracle`] is the engine-free reference
//! both are checked against.

pub mod data;
pub mod engine;
mod error;
pub mod scoring;
pub mod selector;
pub mod table;
pub mod types;

pub use engine::{broadcast, Broadcast, Emitter, Engine, JobOutput, JobSpec, JobStats, MapOutput, Partition};
pub use error::{Error, Result};
pub use scoring::{
    mi_score_function, mrmr_combine, mutual_information, pearson, pearson_score_function, MutualInformationScore,
    PearsonScore, ScoreFunction,
};
pub use selector::{
    get_entry, select_alternative, select_conventional, sequential_oracle, Selection, SelectionResult,
    SelectedFeature, CLASS_ROW,
};
pub use table::{merge_tables, ContingencyTable};
pub use types::{Code, Domain, DomainSpec, FeatureIndex, FeatureRow, Layout, Sample, SelectionState};
