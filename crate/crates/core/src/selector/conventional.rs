use std::collections::{BTreeMap, HashMap};

use smallvec::SmallVec;

use super::{Selection, SelectionResult};
use crate::engine::{broadcast, Broadcast, Engine, JobSpec};
use crate::error::{Error, Result};
use crate::scoring::{argmax, mrmr_combine, mutual_information};
use crate::table::ContingencyTable;
use crate::types::{Domain, DomainSpec, FeatureIndex, Layout, Sample, SelectionState};

/// What a candidate's table is cross-tabulated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Partner {
    Class,
    Selected(FeatureIndex),
}

/// Emission key of the conventional job. The combiner folds on the full
/// key; reducers are grouped by `candidate` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableKey {
    pub candidate: FeatureIndex,
    pub partner: Partner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedTable {
    pub candidate: FeatureIndex,
    pub partner: Partner,
    pub table: ContingencyTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConventionalOptions {
    /// Fold equal-keyed tables on each worker before the shuffle.
    pub combiner: bool,
    /// Cache relevance and redundancy values across iterations so each job
    /// only emits tables against the most recently selected feature.
    pub memoize: bool,
}

impl Default for ConventionalOptions {
    fn default() -> Self {
        ConventionalOptions { combiner: true, memoize: false }
    }
}

/// Which tables a mapper emits for every record.
#[derive(Debug)]
struct MapPlan {
    candidates: Vec<FeatureIndex>,
    class: bool,
    partners: Vec<FeatureIndex>,
}

fn position_of(sample: &Sample, index: FeatureIndex, domain: &Domain) -> Result<usize> {
    let code = *sample
        .values
        .get(index.wrapping_sub(1))
        .ok_or_else(|| Error::structural(format!("record has no feature {index}")))?;
    domain
        .position(code)
        .ok_or_else(|| Error::DomainViolation { code, feature: format!("feature {index}") })
}

fn map_sample(
    sample: &Sample,
    plan: &MapPlan,
    domains: &DomainSpec,
    mut emit: impl FnMut(TableKey, ContingencyTable) -> Result<()>,
) -> Result<()> {
    let class_pos = if plan.class {
        Some(
            domains
                .class
                .position(sample.class)
                .ok_or_else(|| Error::DomainViolation { code: sample.class, feature: "class".into() })?,
        )
    } else {
        None
    };
    let partners: SmallVec<[(FeatureIndex, usize); 16]> = plan
        .partners
        .iter()
        .map(|&j| Ok((j, position_of(sample, j, &domains.values)?)))
        .collect::<Result<_>>()?;

    for &k in &plan.candidates {
        let col = position_of(sample, k, &domains.values)?;
        if let Some(row) = class_pos {
            let table = ContingencyTable::single_at(row, col, &domains.class, &domains.values);
            emit(TableKey { candidate: k, partner: Partner::Class }, table)?;
        }
        for &(j, row) in &partners {
            let table = ContingencyTable::single_at(row, col, &domains.values, &domains.values);
            emit(TableKey { candidate: k, partner: Partner::Selected(j) }, table)?;
        }
    }
    Ok(())
}

/// The tables the mapper emits for one observation: a class table for every
/// candidate, plus one table per (candidate, selected feature) pair.
pub fn conventional_emissions(
    sample: &Sample,
    candidates: &[FeatureIndex],
    selected: &[FeatureIndex],
    domains: &DomainSpec,
) -> Result<Vec<TaggedTable>> {
    let plan = MapPlan { candidates: candidates.to_vec(), class: true, partners: selected.to_vec() };
    let mut out = Vec::with_capacity(candidates.len() * (1 + selected.len()));
    map_sample(sample, &plan, domains, |key, table| {
        out.push(TaggedTable { candidate: key.candidate, partner: key.partner, table });
        Ok(())
    })?;
    Ok(out)
}

fn merge_by_partner(
    candidate: FeatureIndex,
    tables: Vec<(TableKey, ContingencyTable)>,
) -> Result<BTreeMap<Partner, ContingencyTable>> {
    let mut merged: BTreeMap<Partner, ContingencyTable> = BTreeMap::new();
    for (key, table) in tables {
        if key.candidate != candidate {
            return Err(Error::structural(format!(
                "table for feature {} delivered to reducer of feature {candidate}",
                key.candidate
            )));
        }
        match merged.get_mut(&key.partner) {
            Some(acc) => acc.merge_from(&table)?,
            None => {
                merged.insert(key.partner, table);
            }
        }
    }
    Ok(merged)
}

/// Reducer: merges the tables of one candidate and returns its score,
/// relevance minus the mean redundancy over `selected` (in that order).
pub fn score_from_tables(
    candidate: FeatureIndex,
    tables: Vec<(TableKey, ContingencyTable)>,
    selected: &[FeatureIndex],
) -> Result<f64> {
    let merged = merge_by_partner(candidate, tables)?;
    if merged.len() != selected.len() + 1 {
        return Err(Error::structural(format!(
            "feature {candidate}: expected {} partner tables, got {}",
            selected.len() + 1,
            merged.len()
        )));
    }
    let class = merged
        .get(&Partner::Class)
        .ok_or_else(|| Error::structural(format!("feature {candidate}: class table missing")))?;
    let relevance = mutual_information(class)?;
    let redundancies = selected
        .iter()
        .map(|&j| {
            merged
                .get(&Partner::Selected(j))
                .ok_or_else(|| Error::structural(format!("feature {candidate}: table against {j} missing")))
                .and_then(mutual_information)
        })
        .collect::<Result<Vec<_>>>()?;
    mrmr_combine(relevance, &redundancies)
}

/// Reducer used with memoization: the mutual information of the candidate
/// with every partner it received tables for.
pub fn partner_information(
    candidate: FeatureIndex,
    tables: Vec<(TableKey, ContingencyTable)>,
) -> Result<BTreeMap<Partner, f64>> {
    merge_by_partner(candidate, tables)?
        .into_iter()
        .map(|(p, t)| Ok((p, mutual_information(&t)?)))
        .collect()
}

fn table_size(key: &TableKey, table: &ContingencyTable) -> usize {
    std::mem::size_of_val(key)
        + std::mem::size_of::<i32>() * (table.rows().len() + table.cols().len())
        + std::mem::size_of_val(table.counts())
}

fn table_job<'a, O>(
    plan: Broadcast<MapPlan>,
    domains: &'a DomainSpec,
    reducer: impl Fn(&FeatureIndex, Vec<(TableKey, ContingencyTable)>) -> Result<O> + Sync + 'a,
) -> JobSpec<'a, Sample, TableKey, ContingencyTable, FeatureIndex, O> {
    JobSpec::grouped(
        move |sample: &Sample, out: &mut crate::engine::Emitter<'_, TableKey, ContingencyTable>| {
            map_sample(sample, &plan, domains, |k, t| out.emit(k, t))
        },
        |key: &TableKey| key.candidate,
        reducer,
    )
    .with_combiner(|acc: &mut ContingencyTable, t| acc.merge_from(&t))
    .with_size_estimate(table_size)
}

/// The job run at one iteration: contingency-table mapper, table-summing
/// combiner, and [`score_from_tables`] as reducer.
pub fn conventional_job<'a>(
    candidates: &[FeatureIndex],
    selected: &[FeatureIndex],
    domains: &'a DomainSpec,
) -> JobSpec<'a, Sample, TableKey, ContingencyTable, FeatureIndex, f64> {
    let plan = broadcast(MapPlan { candidates: candidates.to_vec(), class: true, partners: selected.to_vec() });
    let selected = selected.to_vec();
    table_job(plan, domains, move |&k, tables| score_from_tables(k, tables, &selected))
}

/// mRMR over observation records with mutual information as the score.
pub fn select_conventional(
    samples: &[Sample],
    num_features: usize,
    domains: &DomainSpec,
    engine: &Engine,
) -> Result<Selection> {
    select_conventional_with(samples, num_features, domains, engine, ConventionalOptions::default())
}

pub fn select_conventional_with(
    samples: &[Sample],
    num_features: usize,
    domains: &DomainSpec,
    engine: &Engine,
    options: ConventionalOptions,
) -> Result<Selection> {
    let n = samples.first().map(|s| s.values.len()).ok_or_else(|| Error::invalid("dataset has no observations"))?;
    if samples.iter().any(|s| s.values.len() != n) {
        return Err(Error::invalid("observations have differing feature counts"));
    }
    if num_features == 0 || num_features > n {
        return Err(Error::invalid(format!(
            "L exceeds candidate count: requested {num_features} features out of {n} candidates"
        )));
    }

    let mut state = SelectionState::new(1..=n);
    let mut result = SelectionResult::new(num_features, "mi", Some(Layout::Conventional));
    let mut jobs = Vec::with_capacity(num_features);
    let mut relevance: HashMap<FeatureIndex, f64> = HashMap::new();
    let mut redundancy: HashMap<(FeatureIndex, FeatureIndex), f64> = HashMap::new();

    for _ in 0..num_features {
        let selected = state.selected_indices();
        let candidates = state.candidates().to_vec();

        let scores: Vec<(FeatureIndex, f64)> = if options.memoize {
            let plan = broadcast(MapPlan {
                candidates: candidates.clone(),
                class: selected.is_empty(),
                partners: selected.last().copied().into_iter().collect(),
            });
            let mut job = table_job(plan, domains, |&k, t| partner_information(k, t));
            if !options.combiner {
                job = job.without_combiner();
            }
            let out = engine.run_job(samples, &job)?;
            jobs.push(out.stats);
            for (k, infos) in out.results {
                for (partner, value) in infos {
                    match partner {
                        Partner::Class => relevance.insert(k, value),
                        Partner::Selected(j) => redundancy.insert((k, j), value),
                    };
                }
            }
            candidates
                .iter()
                .map(|&k| {
                    let rel = *relevance
                        .get(&k)
                        .ok_or_else(|| Error::structural(format!("no relevance cached for feature {k}")))?;
                    let red = selected
                        .iter()
                        .map(|&j| {
                            redundancy
                                .get(&(k, j))
                                .copied()
                                .ok_or_else(|| Error::structural(format!("no redundancy cached for ({k}, {j})")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((k, mrmr_combine(rel, &red)?))
                })
                .collect::<Result<_>>()?
        } else {
            let mut job = conventional_job(&candidates, &selected, domains);
            if !options.combiner {
                job = job.without_combiner();
            }
            let out = engine.run_job(samples, &job)?;
            jobs.push(out.stats);
            if out.results.len() != candidates.len() {
                return Err(Error::structural(format!(
                    "{} candidates scored, expected {}",
                    out.results.len(),
                    candidates.len()
                )));
            }
            out.results.into_iter().collect()
        };

        let (k, g) = argmax(scores).ok_or_else(|| Error::structural("no candidate scored"))?;
        state.select(k, g)?;
        result.push(k, g);
    }
    Ok(Selection { result, jobs })
}
