//! Scalability sweeps. Each point generates its dataset in memory and times
//! the selection call alone.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context};
use mrmr_core::data::{samples_to_feature_rows, synthetic_samples};
use mrmr_core::selector::{select_conventional_with, ConventionalOptions};
use mrmr_core::{select_alternative, DomainSpec, FeatureRow, Layout, Sample, CLASS_ROW};
use serde::Serialize;

use crate::args::{BenchArgs, ScoreArg, SweepAxis};
use crate::select::{engine, score_function};

/// One timed run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub sweep_axis: &'static str,
    pub axis_value: usize,
    /// 1-based.
    pub repetition: usize,
    pub wall_time_ms: f64,
    pub bytes_shuffled: u64,
    /// Wall time over the mean wall time of the smallest axis value.
    pub relative_et: f64,
    /// Mean 1-worker wall time over the mean wall time of this point.
    pub computational_gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Point {
    rows: usize,
    cols: usize,
    num_features: usize,
    workers: usize,
}

impl Point {
    fn at(args: &BenchArgs, value: usize) -> Point {
        let mut p = Point { rows: args.rows, cols: args.cols, num_features: args.num_features, workers: args.workers };
        match args.sweep {
            SweepAxis::Rows => p.rows = value,
            SweepAxis::Cols => p.cols = value,
            SweepAxis::Features => p.num_features = value,
            SweepAxis::Workers => p.workers = value,
        }
        p
    }
}

struct Dataset {
    rows: usize,
    cols: usize,
    samples: Vec<Sample>,
    domains: DomainSpec,
    features: Option<Vec<FeatureRow>>,
}

impl Dataset {
    fn generate(rows: usize, cols: usize, seed: u64, layout: Layout) -> anyhow::Result<Dataset> {
        let samples = synthetic_samples(rows, cols, seed)?;
        let domains = DomainSpec::scan(&samples)?;
        let features = (layout == Layout::Alternative).then(|| samples_to_feature_rows(&samples));
        Ok(Dataset { rows, cols, samples, domains, features })
    }
}

struct Timing {
    ms: Vec<f64>,
    bytes: Vec<u64>,
}

impl Timing {
    fn mean(&self) -> f64 {
        self.ms.iter().sum::<f64>() / self.ms.len() as f64
    }
}

fn measure(data: &Dataset, args: &BenchArgs, num_features: usize, workers: usize) -> anyhow::Result<Timing> {
    let engine = engine(workers, args.partitions)?;
    let score = score_function(args.score);
    let mut timing = Timing { ms: Vec::new(), bytes: Vec::new() };
    for _ in 0..args.repetitions {
        let start = Instant::now();
        let selection = match &data.features {
            None => {
                if args.score != ScoreArg::Mi {
                    bail!("the conventional layout only scores with mutual information");
                }
                select_conventional_with(&data.samples, num_features, &data.domains, &engine, ConventionalOptions::default())?
            }
            Some(rows) => select_alternative(rows, num_features, CLASS_ROW, score.as_ref(), &engine)?,
        };
        let elapsed = start.elapsed();
        timing.ms.push((elapsed.as_secs_f64() * 1e3).max(f64::MIN_POSITIVE));
        timing.bytes.push(selection.bytes_shuffled());
    }
    Ok(timing)
}

/// Runs the sweep, writing CSV to `out` as each point completes. Records
/// written before a failure stay written.
pub fn run_bench<W: Write>(args: &BenchArgs, out: W) -> anyhow::Result<Vec<BenchRecord>> {
    if args.repetitions == 0 {
        bail!("--repetitions must be at least 1");
    }
    let mut values = args.values.clone();
    values.sort_unstable();
    values.dedup();
    if values.is_empty() {
        bail!("--values is empty");
    }
    let layout = Layout::from(args.layout);
    let mut writer = csv::Writer::from_writer(out);
    let mut records = Vec::new();
    let mut data: Option<Dataset> = None;
    let mut baseline_et = None;
    let mut single_worker: Option<f64> = None;

    for value in values {
        let point = Point::at(args, value);
        if data.as_ref().is_none_or(|d| d.rows != point.rows || d.cols != point.cols) {
            drop(data.take());
            data = Some(
                Dataset::generate(point.rows, point.cols, args.seed, layout)
                    .with_context(|| format!("generating {}x{} dataset", point.rows, point.cols))?,
            );
        }
        let data = data.as_ref().expect("generated above");
        let timing = measure(data, args, point.num_features, point.workers)
            .with_context(|| format!("{} = {value}", args.sweep.name()))?;

        // the workers sweep shares one dataset, so its 1-worker mean is reused
        let reuse = args.sweep == SweepAxis::Workers && single_worker.is_some();
        let one = if point.workers == 1 {
            timing.mean()
        } else if reuse {
            single_worker.expect("checked")
        } else {
            measure(data, args, point.num_features, 1).context("1-worker baseline")?.mean()
        };
        if args.sweep == SweepAxis::Workers && single_worker.is_none() {
            single_worker = Some(one);
        }
        let base = *baseline_et.get_or_insert(timing.mean());
        let gain = one / timing.mean();

        for (i, (&ms, &bytes)) in timing.ms.iter().zip(&timing.bytes).enumerate() {
            let record = BenchRecord {
                sweep_axis: args.sweep.name(),
                axis_value: value,
                repetition: i + 1,
                wall_time_ms: ms,
                bytes_shuffled: bytes,
                relative_et: ms / base,
                computational_gain: gain,
            };
            writer.serialize(&record)?;
            records.push(record);
        }
        writer.flush()?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::LayoutArg;

    fn args(sweep: SweepAxis, values: Vec<usize>) -> BenchArgs {
        BenchArgs {
            sweep,
            values,
            rows: 300,
            cols: 10,
            num_features: 2,
            workers: 1,
            partitions: None,
            layout: LayoutArg::Conventional,
            score: ScoreArg::Mi,
            repetitions: 3,
            seed: 1,
            output: None,
        }
    }

    #[test]
    fn workers_sweep_baseline() {
        let mut out = Vec::new();
        let records = run_bench(&args(SweepAxis::Workers, vec![2, 1]), &mut out).unwrap();
        assert_eq!(records.len(), 6);
        assert!(records[..3].iter().all(|r| r.axis_value == 1 && r.computational_gain == 1.0));
        let mean: f64 = records[..3].iter().map(|r| r.relative_et).sum::<f64>() / 3.0;
        assert!((mean - 1.0).abs() < 1e-12);
        assert_eq!(records.iter().map(|r| r.repetition).collect::<Vec<_>>(), vec![1, 2, 3, 1, 2, 3]);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text.lines().next(),
            Some("sweep_axis,axis_value,repetition,wall_time_ms,bytes_shuffled,relative_et,computational_gain")
        );
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn failing_point_keeps_earlier_output() {
        let mut out = Vec::new();
        // 20 features cannot be selected from 10 columns
        let err = run_bench(&args(SweepAxis::Features, vec![1, 20]), &mut out);
        assert!(err.is_err());
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 4);
    }

    #[test]
    fn alternative_layout_runs_pearson() {
        let mut a = args(SweepAxis::Rows, vec![200, 400]);
        a.layout = LayoutArg::Alternative;
        a.score = ScoreArg::Pearson;
        a.repetitions = 1;
        let records = run_bench(&a, Vec::new()).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.wall_time_ms > 0.0 && r.computational_gain > 0.0));
    }
}
