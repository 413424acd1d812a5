//! Feature scores: plug-in mutual information over contingency tables,
//! Pearson correlation, and the relevance-minus-mean-redundancy rule that
//! combines pairwise scores into a candidate score.

use crate::error::{Error, Result};
use crate::table::ContingencyTable;
use crate::types::{Code, FeatureIndex};

/// Plug-in mutual information of the table, in bits.
///
/// Cells are visited in row-major order and empty cells contribute nothing,
/// so two tables with the same non-zero cells in the same label order give
/// bit-identical results regardless of any all-zero rows or columns.
pub fn mutual_information(table: &ContingencyTable) -> Result<f64> {
    information_with(table, f64::log2)
}

/// Same as [`mutual_information`] in nats.
pub fn mutual_information_nats(table: &ContingencyTable) -> Result<f64> {
    information_with(table, f64::ln)
}

fn information_with(table: &ContingencyTable, log: fn(f64) -> f64) -> Result<f64> {
    let total = table.total();
    if total == 0 {
        return Err(Error::EmptyTable);
    }
    let n = total as f64;
    let row_sums = table.row_sums();
    let col_sums = table.col_sums();
    let mut mi = 0.0;
    for (r, row) in table.count_rows().enumerate() {
        for (c, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let joint = count as f64;
            mi += joint / n * log(joint * n / (row_sums[r] as f64 * col_sums[c] as f64));
        }
    }
    // rounding can leave independent tables a hair below zero
    Ok(mi.max(0.0))
}

/// Mutual information between two categorical vectors, with `partner`
/// labelling the rows of the underlying table.
pub fn pair_information(partner: &[Code], candidate: &[Code]) -> Result<f64> {
    mutual_information(&ContingencyTable::from_pairs(partner, candidate)?)
}

/// Sample correlation coefficient. A constant input yields 0.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::structural(format!("pearson on vectors of length {} and {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::invalid("pearson needs at least two observations"));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Relevance minus the mean of the redundancies; plain relevance when
/// nothing has been selected yet.
pub fn mrmr_combine(relevance: f64, redundancies: &[f64]) -> Result<f64> {
    if !relevance.is_finite() || redundancies.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("mrmr scores must be finite"));
    }
    if redundancies.is_empty() {
        return Ok(relevance);
    }
    let sum: f64 = redundancies.iter().sum();
    Ok(relevance - sum / redundancies.len() as f64)
}

/// Highest score wins; ties go to the lowest feature index.
pub fn argmax<I>(scores: I) -> Option<(FeatureIndex, f64)>
where
    I: IntoIterator<Item = (FeatureIndex, f64)>,
{
    scores.into_iter().fold(None, |best, (k, s)| match best {
        Some((bk, bs)) if bs > s || (bs == s && bk < k) => Some((bk, bs)),
        _ => Some((k, s)),
    })
}

/// A pluggable candidate score.
///
/// Receives the candidate feature vector, the class vector and the vectors
/// of every feature selected so far (in selection order; empty on the first
/// iteration) and returns a scalar score. Implementations must be
/// deterministic.
pub trait ScoreFunction: Send + Sync {
    fn name(&self) -> &str;

    fn get_result(&self, candidate: &[f64], class: &[f64], selected: &[Vec<f64>]) -> Result<f64>;

    /// Whether the score only makes sense on categorical data.
    fn requires_discrete(&self) -> bool {
        false
    }
}

/// mRMR with plug-in mutual information.
#[derive(Debug, Clone, Copy, Default)]
pub struct MutualInformationScore;

impl ScoreFunction for MutualInformationScore {
    fn name(&self) -> &str {
        "mi"
    }

    fn get_result(&self, candidate: &[f64], class: &[f64], selected: &[Vec<f64>]) -> Result<f64> {
        let candidate = to_codes(candidate)?;
        let relevance = pair_information(&to_codes(class)?, &candidate)?;
        let redundancies = selected
            .iter()
            .map(|s| pair_information(&to_codes(s)?, &candidate))
            .collect::<Result<Vec<_>>>()?;
        mrmr_combine(relevance, &redundancies)
    }

    fn requires_discrete(&self) -> bool {
        true
    }
}

/// mRMR with Pearson correlation standing in for mutual information.
///
/// The signed coefficient is used as is.
#[derive(Debug, Clone, Copy, Default)]
pub struct PearsonScore;

impl ScoreFunction for PearsonScore {
    fn name(&self) -> &str {
        "pearson"
    }

    fn get_result(&self, candidate: &[f64], class: &[f64], selected: &[Vec<f64>]) -> Result<f64> {
        let relevance = pearson(candidate, class)?;
        let redundancies = selected.iter().map(|s| pearson(candidate, s)).collect::<Result<Vec<_>>>()?;
        mrmr_combine(relevance, &redundancies)
    }
}

pub fn mi_score_function() -> MutualInformationScore {
    MutualInformationScore
}

pub fn pearson_score_function() -> PearsonScore {
    PearsonScore
}

/// Converts integral reals to categorical codes.
pub fn to_codes(values: &[f64]) -> Result<Vec<Code>> {
    values
        .iter()
        .map(|&v| {
            if v.fract() == 0.0 && v >= Code::MIN as f64 && v <= Code::MAX as f64 {
                Ok(v as Code)
            } else {
                Err(Error::UnsupportedData(format!(
                    "mutual information needs categorical values, found {v}"
                )))
            }
        })
        .collect()
}
