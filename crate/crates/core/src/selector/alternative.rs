use std::collections::BTreeSet;

use super::{Selection, SelectionResult};
use crate::engine::{broadcast, Broadcast, Engine};
use crate::error::{Error, Result};
use crate::scoring::{argmax, to_codes, ScoreFunction};
use crate::types::{FeatureIndex, FeatureRow, Layout, SelectionState};

/// Row index given to the class row when reading the alternative layout.
pub const CLASS_ROW: usize = 0;

/// Fetches the values of row `index` with a filtering map-only job.
pub fn get_entry(rows: &[FeatureRow], index: usize, engine: &Engine) -> Result<Vec<f64>> {
    let mut found = engine
        .map_only(rows, |row: &FeatureRow| Ok((row.index == index).then(|| row.values.clone())))?
        .outputs;
    match found.len() {
        0 => Err(Error::NotFound(format!("row {index}"))),
        1 => Ok(found.pop().unwrap()),
        n => Err(Error::invalid(format!("row index {index} occurs {n} times"))),
    }
}

struct IterationContext {
    class: Broadcast<Vec<f64>>,
    selected: Vec<Vec<f64>>,
    selected_indices: Vec<FeatureIndex>,
}

/// mRMR over feature records. Each iteration broadcasts the class vector and
/// the selected vectors, scores every remaining row in a map-only job, and
/// lets the driver pick the winner.
pub fn select_alternative(
    rows: &[FeatureRow],
    num_features: usize,
    class_row: usize,
    score: &dyn ScoreFunction,
    engine: &Engine,
) -> Result<Selection> {
    let width = rows.first().map(|r| r.values.len()).ok_or_else(|| Error::invalid("dataset has no rows"))?;
    if rows.iter().any(|r| r.values.len() != width) {
        return Err(Error::invalid("feature rows have differing lengths"));
    }
    let indices: BTreeSet<usize> = rows.iter().map(|r| r.index).collect();
    if indices.len() != rows.len() {
        return Err(Error::invalid("duplicate feature row index"));
    }
    let class = broadcast(get_entry(rows, class_row, engine)?);
    let candidates: Vec<FeatureIndex> = indices.into_iter().filter(|&i| i != class_row).collect();
    if num_features == 0 || num_features > candidates.len() {
        return Err(Error::invalid(format!(
            "L exceeds candidate count: requested {num_features} features out of {} candidates",
            candidates.len()
        )));
    }
    if score.requires_discrete() {
        for row in rows {
            to_codes(&row.values)?;
        }
    }

    let mut state = SelectionState::new(candidates);
    let mut result = SelectionResult::new(num_features, score.name(), Some(Layout::Alternative));
    let mut jobs = Vec::with_capacity(num_features);
    let mut selected_vectors: Vec<Vec<f64>> = Vec::with_capacity(num_features);

    for _ in 0..num_features {
        let ctx = broadcast(IterationContext {
            class: class.clone(),
            selected: selected_vectors.clone(),
            selected_indices: state.selected_indices(),
        });
        let out = engine.map_only(rows, |row: &FeatureRow| {
            if row.index == class_row || ctx.selected_indices.contains(&row.index) {
                return Ok(None);
            }
            let g = score.get_result(&row.values, &ctx.class, &ctx.selected)?;
            Ok(Some((row.index, g)))
        })?;
        if out.outputs.len() != state.candidates().len() {
            return Err(Error::structural(format!(
                "{} rows scored, expected {}",
                out.outputs.len(),
                state.candidates().len()
            )));
        }
        jobs.push(out.stats);

        let (k, g) = argmax(out.outputs).ok_or_else(|| Error::structural("no candidate scored"))?;
        state.select(k, g)?;
        result.push(k, g);
        selected_vectors.push(get_entry(rows, k, engine)?);
    }
    Ok(Selection { result, jobs })
}
