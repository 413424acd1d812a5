use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrmr_core::data::ClassLocator;
use mrmr_core::Layout;

#[derive(Debug, Parser)]
#[command(name = "mrmr", version, about = "mRMR feature selection on an in-process MapReduce engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select features from a dataset file.
    Select(SelectArgs),
    /// Write a synthetic boolean dataset.
    Generate(GenerateArgs),
    /// Rewrite a dataset in the other layout.
    Transpose(TransposeArgs),
    /// Time selection runs over a sweep of one parameter.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    /// One observation per line, header first.
    Conventional,
    /// One feature per line, identifier first.
    Alternative,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Layout {
        match l {
            LayoutArg::Conventional => Layout::Conventional,
            LayoutArg::Alternative => Layout::Alternative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreArg {
    Mi,
    Pearson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = LayoutArg::Conventional)]
    pub layout: LayoutArg,
    /// Class column (conventional) or row (alternative): a name or a 0-based position.
    #[arg(long, default_value = "class")]
    pub class: String,
    #[arg(long = "num-features", short = 'l')]
    pub num_features: usize,
    #[arg(long, value_enum, default_value_t = ScoreArg::Mi)]
    pub score: ScoreArg,
    #[arg(long, short, default_value_t = 1)]
    pub workers: usize,
    /// Defaults to four per worker.
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Also write the result here, in the same format.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl SelectArgs {
    pub fn class_locator(&self) -> ClassLocator {
        ClassLocator::Name(self.class.clone())
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = LayoutArg::Conventional)]
    pub layout: LayoutArg,
    /// Stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransposeArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Layout of the input file.
    #[arg(long, value_enum, default_value_t = LayoutArg::Conventional)]
    pub layout: LayoutArg,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum SweepAxis {
    Rows,
    Cols,
    /// Number of selected features.
    Features,
    /// Worker threads, standing in for cluster nodes.
    Workers,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Rows => "rows",
            SweepAxis::Cols => "cols",
            SweepAxis::Features => "features",
            SweepAxis::Workers => "workers",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,
    /// Comma-separated axis values; `k` and `m` suffixes scale by 10^3 and 10^6.
    #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
    pub values: Vec<usize>,
    #[arg(long, default_value = "100k", value_parser = parse_count)]
    pub rows: usize,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub cols: usize,
    #[arg(long = "num-features", short = 'l', default_value_t = 10)]
    pub num_features: usize,
    #[arg(long, short, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub partitions: Option<usize>,
    #[arg(long, value_enum, default_value_t = LayoutArg::Conventional)]
    pub layout: LayoutArg,
    #[arg(long, value_enum, default_value_t = ScoreArg::Mi)]
    pub score: ScoreArg,
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// `250`, `100k`, `1.5m`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let s = s.trim();
    let (digits, scale) = match s.char_indices().last() {
        Some((i, 'k' | 'K')) => (&s[..i], 1e3),
        Some((i, 'm' | 'M')) => (&s[..i], 1e6),
        _ => (s, 1.0),
    };
    if scale == 1.0 {
        return digits.parse().map_err(|_| format!("not a count: {s:?}"));
    }
    let v: f64 = digits.parse().map_err(|_| format!("not a count: {s:?}"))?;
    let n = v * scale;
    if !(n >= 0.0 && n.fract() == 0.0 && n < usize::MAX as f64) {
        return Err(format!("not a count: {s:?}"));
    }
    Ok(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_with_suffixes() {
        assert_eq!(parse_count("100k"), Ok(100_000));
        assert_eq!(parse_count("1m"), Ok(1_000_000));
        assert_eq!(parse_count("1.5M"), Ok(1_500_000));
        assert_eq!(parse_count("37"), Ok(37));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("0.0001k").is_err());
        assert!(parse_count("k").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
