//! Domain types shared by the engine, the scoring functions and both
//! selection pipelines.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A dictionary-encoded categorical value.
pub type Code = i32;

/// 1-based index of a feature within its dataset, class excluded.
pub type FeatureIndex = usize;

/// Which way round a dataset is stored on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Observations as rows, features as columns.
    Conventional,
    /// Features as rows, observations as columns.
    Alternative,
}

impl Layout {
    pub fn other(self) -> Layout {
        match self {
            Layout::Conventional => Layout::Alternative,
            Layout::Alternative => Layout::Conventional,
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Conventional => "conventional",
            Layout::Alternative => "alternative",
        })
    }
}

/// An ordered, duplicate-free, non-empty set of codes.
///
/// Small domains (up to four values, which covers binary and ternary data)
/// are stored inline so that cloning one never allocates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain(SmallVec<[Code; 4]>);

impl Domain {
    /// Builds a domain from arbitrary codes, sorting and deduplicating them.
    pub fn new<I: IntoIterator<Item = Code>>(codes: I) -> Result<Self> {
        let mut codes: SmallVec<[Code; 4]> = codes.into_iter().collect();
        codes.sort_unstable();
        codes.dedup();
        if codes.is_empty() {
            return Err(Error::invalid("a domain needs at least one value"));
        }
        Ok(Domain(codes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn codes(&self) -> &[Code] {
        &self.0
    }

    /// Position of `code` in canonical order, if it belongs to the domain.
    #[inline]
    pub fn position(&self, code: Code) -> Option<usize> {
        self.0.binary_search(&code).ok()
    }

    pub fn contains(&self, code: Code) -> bool {
        self.position(code).is_some()
    }
}

/// Class domain `d_c` and the union feature-value domain `d_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    pub class: Domain,
    pub values: Domain,
}

impl DomainSpec {
    pub fn new(class: Domain, values: Domain) -> Self {
        DomainSpec { class, values }
    }

    /// Scans the samples and returns the tightest domains covering them.
    pub fn scan(samples: &[Sample]) -> Result<Self> {
        let class: BTreeSet<Code> = samples.iter().map(|s| s.class).collect();
        let values: BTreeSet<Code> = samples.iter().flat_map(|s| s.values.iter().copied()).collect();
        Ok(DomainSpec { class: Domain::new(class)?, values: Domain::new(values)? })
    }

    /// Checks every code of `sample` against the domains.
    pub fn validate(&self, sample: &Sample) -> Result<()> {
        if !self.class.contains(sample.class) {
            return Err(Error::DomainViolation { code: sample.class, feature: "class".into() });
        }
        for (i, &code) in sample.values.iter().enumerate() {
            if !self.values.contains(code) {
                return Err(Error::DomainViolation { code, feature: format!("feature {}", i + 1) });
            }
        }
        Ok(())
    }
}

/// One observation in the conventional layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    /// Feature codes; `values[k - 1]` holds feature `k`.
    pub values: Vec<Code>,
    pub class: Code,
}

impl Sample {
    pub fn new(values: Vec<Code>, class: Code) -> Self {
        Sample { values, class }
    }

    #[inline]
    pub fn feature(&self, index: FeatureIndex) -> Code {
        self.values[index - 1]
    }
}

/// One feature (or the class) in the alternative layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub index: usize,
    pub values: Vec<f64>,
}

impl FeatureRow {
    pub fn new(index: usize, values: Vec<f64>) -> Self {
        FeatureRow { index, values }
    }
}

/// Candidate/selected bookkeeping for the greedy loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionState {
    candidates: Vec<FeatureIndex>,
    selected: Vec<(FeatureIndex, f64)>,
}

impl SelectionState {
    /// Starts with every index in `candidates` unselected, at step 1.
    pub fn new<I: IntoIterator<Item = FeatureIndex>>(candidates: I) -> Self {
        let mut candidates: Vec<_> = candidates.into_iter().collect();
        candidates.sort_unstable();
        candidates.dedup();
        SelectionState { candidates, selected: Vec::new() }
    }

    /// Candidate indices in ascending order.
    pub fn candidates(&self) -> &[FeatureIndex] {
        &self.candidates
    }

    pub fn selected(&self) -> &[(FeatureIndex, f64)] {
        &self.selected
    }

    pub fn selected_indices(&self) -> Vec<FeatureIndex> {
        self.selected.iter().map(|&(k, _)| k).collect()
    }

    /// The current step `l`, starting at 1.
    pub fn step(&self) -> usize {
        self.selected.len() + 1
    }

    /// Moves `index` from the candidates to the end of the selection.
    pub fn select(&mut self, index: FeatureIndex, score: f64) -> Result<()> {
        let pos = self
            .candidates
            .binary_search(&index)
            .map_err(|_| Error::structural(format!("feature {index} is not a candidate")))?;
        self.candidates.remove(pos);
        self.selected.push((index, score));
        Ok(())
    }
}
