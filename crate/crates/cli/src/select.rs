use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{bail, Context};
use mrmr_core::data::{read_alternative, read_conventional, samples_to_feature_rows, DatasetMeta, Encoding};
use mrmr_core::selector::{select_conventional_with, ConventionalOptions};
use mrmr_core::{
    mi_score_function, pearson_score_function, select_alternative, Engine, Error, Layout, ScoreFunction,
    SelectionResult, CLASS_ROW,
};
use serde::Serialize;

use crate::args::{Format, ScoreArg, SelectArgs};

pub fn engine(workers: usize, partitions: Option<usize>) -> mrmr_core::Result<Engine> {
    let engine = Engine::new(workers)?;
    match partitions {
        Some(p) => engine.with_partitions(p),
        None => Ok(engine),
    }
}

pub fn score_function(score: ScoreArg) -> Box<dyn ScoreFunction> {
    match score {
        ScoreArg::Mi => Box::new(mi_score_function()),
        ScoreArg::Pearson => Box::new(pearson_score_function()),
    }
}

/// Reads the input and runs the matching pipeline.
pub fn run_selection(args: &SelectArgs) -> anyhow::Result<(SelectionResult, DatasetMeta)> {
    let engine = engine(args.workers, args.partitions)?;
    let class = args.class_locator();
    let result = match Layout::from(args.layout) {
        Layout::Conventional => {
            let (samples, meta) = read_conventional(&args.input, &class)
                .with_context(|| format!("reading {}", args.input.display()))?;
            let result = match args.score {
                ScoreArg::Mi => {
                    let Some(domains) = meta.domains.as_ref() else {
                        return Err(Error::UnsupportedData("mutual information needs discrete values".into()).into());
                    };
                    select_conventional_with(&samples, args.num_features, domains, &engine, ConventionalOptions::default())?
                        .result
                }
                ScoreArg::Pearson => {
                    // codes only equal the written values for integer columns
                    if meta.feature_encoding != Encoding::Integer || meta.class_encoding != Encoding::Integer {
                        return Err(Error::UnsupportedData(
                            "pearson on the conventional layout needs integer columns; transpose the file to use real values"
                                .into(),
                        )
                        .into());
                    }
                    let rows = samples_to_feature_rows(&samples);
                    select_alternative(&rows, args.num_features, CLASS_ROW, &pearson_score_function(), &engine)?.result
                }
            };
            (result, meta)
        }
        Layout::Alternative => {
            let (rows, meta) =
                read_alternative(&args.input, &class).with_context(|| format!("reading {}", args.input.display()))?;
            let score = score_function(args.score);
            let result = select_alternative(&rows, args.num_features, CLASS_ROW, score.as_ref(), &engine)?.result;
            (result, meta)
        }
    };
    Ok(result)
}

#[derive(Serialize)]
struct NamedFeature<'a> {
    rank: usize,
    index: usize,
    name: &'a str,
    score: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    num_features: usize,
    score: &'a str,
    layout: Option<Layout>,
    features: Vec<NamedFeature<'a>>,
}

fn report<'a>(result: &'a SelectionResult, meta: &'a DatasetMeta) -> Report<'a> {
    Report {
        num_features: result.num_features,
        score: &result.score,
        layout: result.layout,
        features: result
            .features
            .iter()
            .map(|f| NamedFeature { rank: f.iteration, index: f.index, name: meta.feature_name(f.index), score: f.score })
            .collect(),
    }
}

pub fn render<W: Write>(out: W, format: Format, result: &SelectionResult, meta: &DatasetMeta) -> anyhow::Result<()> {
    let report = report(result, meta);
    let mut out = BufWriter::new(out);
    match format {
        Format::Text => {
            for f in &report.features {
                writeln!(out, "{:>3}  {:<16} {}", f.rank, f.name, f.score)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["rank", "feature", "score"])?;
            for f in &report.features {
                w.write_record([f.rank.to_string(), f.name.to_owned(), f.score.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_select(args: &SelectArgs) -> anyhow::Result<()> {
    if args.num_features == 0 {
        bail!("--num-features must be at least 1");
    }
    let (result, meta) = run_selection(args)?;
    render(std::io::stdout().lock(), args.format, &result, &meta)?;
    if let Some(path) = &args.output {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        render(file, args.format, &result, &meta)?;
    }
    Ok(())
}
