//! Dataset files: reading, writing, transposing and generating them.
//!
//! Both layouts are comma-delimited UTF-8 text without quoting. The
//! conventional layout has a header line naming every column and one
//! observation per line after it. The alternative layout has one feature per
//! line, the first field being the feature identifier. In both, the class is
//! found by name (`class` by default) or by 0-based position.

mod encode;
mod io;
mod synthetic;
mod transpose;

use std::fmt;

pub use encode::Encoding;
pub use io::{read_alternative, read_conventional, write_alternative, write_conventional};
pub use synthetic::{
    corral_class, generate_synthetic, generate_synthetic_file, synthetic_samples, synthetic_value, RELEVANT_FEATURES,
};
pub use transpose::{transpose, transpose_file};

use crate::selector::CLASS_ROW;
use crate::types::{DomainSpec, FeatureIndex, FeatureRow, Layout, Sample};

/// Where the class lives in a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassLocator {
    /// Column or row identifier. Falls back to a 0-based position when no
    /// identifier matches and the name is a number.
    Name(String),
    Index(usize),
}

impl Default for ClassLocator {
    fn default() -> Self {
        ClassLocator::Name("class".into())
    }
}

impl From<&str> for ClassLocator {
    fn from(s: &str) -> Self {
        ClassLocator::Name(s.to_owned())
    }
}

impl fmt::Display for ClassLocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLocator::Name(n) => write!(f, "{n:?}"),
            ClassLocator::Index(i) => write!(f, "#{i}"),
        }
    }
}

impl ClassLocator {
    pub fn resolve(&self, names: &[String]) -> Option<usize> {
        match self {
            ClassLocator::Name(n) => names
                .iter()
                .position(|x| x == n)
                .or_else(|| n.parse::<usize>().ok().filter(|&i| i < names.len())),
            ClassLocator::Index(i) => (*i < names.len()).then_some(*i),
        }
    }
}

/// What was learned about a dataset while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub layout: Layout,
    pub observations: usize,
    pub features: usize,
    /// 0-based column (conventional) or line (alternative) of the class.
    pub class_position: usize,
    pub class_name: String,
    /// Feature identifiers in file order; feature `k` is `feature_names[k - 1]`.
    pub feature_names: Vec<String>,
    /// Present when every value is categorical.
    pub domains: Option<DomainSpec>,
    pub feature_encoding: Encoding,
    pub class_encoding: Encoding,
}

impl DatasetMeta {
    pub fn feature_name(&self, index: FeatureIndex) -> &str {
        &self.feature_names[index - 1]
    }

    /// All identifiers in file order, class included.
    pub fn column_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        names.insert(self.class_position, &self.class_name);
        names
    }

    pub fn is_discrete(&self) -> bool {
        self.domains.is_some()
    }
}

/// Feature-major view of conventional records: the class row first (index
/// [`CLASS_ROW`]), then features `1..=N`.
pub fn samples_to_feature_rows(samples: &[Sample]) -> Vec<FeatureRow> {
    let n = samples.first().map_or(0, |s| s.values.len());
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(FeatureRow::new(CLASS_ROW, samples.iter().map(|s| f64::from(s.class)).collect()));
    for k in 1..=n {
        rows.push(FeatureRow::new(k, samples.iter().map(|s| f64::from(s.feature(k))).collect()));
    }
    rows
}

/// Feature columns and the class column as real vectors.
pub fn samples_to_columns(samples: &[Sample]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows = samples_to_feature_rows(samples);
    let class = rows.remove(0).values;
    (rows.into_iter().map(|r| r.values).collect(), class)
}
