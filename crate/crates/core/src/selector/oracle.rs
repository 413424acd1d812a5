use super::SelectionResult;
use crate::error::{Error, Result};
use crate::scoring::ScoreFunction;
use crate::types::FeatureIndex;

/// Reference mRMR: a direct nested loop over columns with no engine.
///
/// `columns[k - 1]` holds feature `k`. Ties go to the lowest index.
pub fn sequential_oracle(
    columns: &[Vec<f64>],
    class: &[f64],
    num_features: usize,
    score: &dyn ScoreFunction,
) -> Result<SelectionResult> {
    if num_features == 0 || num_features > columns.len() {
        return Err(Error::invalid(format!(
            "L exceeds candidate count: requested {num_features} features out of {} candidates",
            columns.len()
        )));
    }
    if columns.iter().any(|c| c.len() != class.len()) {
        return Err(Error::invalid("columns and class differ in length"));
    }

    let mut candidates: Vec<FeatureIndex> = (1..=columns.len()).collect();
    let mut selected: Vec<Vec<f64>> = Vec::new();
    let mut result = SelectionResult::new(num_features, score.name(), None);

    for _ in 0..num_features {
        let mut best: Option<(FeatureIndex, f64)> = None;
        for &k in &candidates {
            let g = score.get_result(&columns[k - 1], class, &selected)?;
            // candidates ascend, so strict > keeps the lowest index on ties
            if best.is_none_or(|(_, b)| g > b) {
                best = Some((k, g));
            }
        }
        let (k, g) = best.expect("candidates are non-empty");
        candidates.retain(|&c| c != k);
        selected.push(columns[k - 1].clone());
        result.push(k, g);
    }
    Ok(result)
}
