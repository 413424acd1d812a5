//! Command implementations behind the `mrmr` binary.

pub mod args;
pub mod bench;
pub mod select;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::Context;
use mrmr_core::data::{generate_synthetic, transpose};
use mrmr_core::Layout;

use crate::args::{BenchArgs, Cli, Command, GenerateArgs, TransposeArgs};

pub use bench::{run_bench, BenchRecord};

fn sink(path: Option<&std::path::Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let out = sink(args.output.as_deref())?;
    generate_synthetic(out, args.rows, args.cols, args.seed, Layout::from(args.layout))?;
    Ok(())
}

pub fn cmd_transpose(args: &TransposeArgs) -> anyhow::Result<()> {
    let input = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    transpose(input, Layout::from(args.layout), sink(args.output.as_deref())?)?;
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let mut out = BufWriter::new(sink(args.output.as_deref())?);
    let result = run_bench(args, &mut out);
    out.flush()?;
    result.map(drop)
}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Select(a) => select::cmd_select(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Transpose(a) => cmd_transpose(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// 2 for internal invariant violations, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<mrmr_core::Error>() {
        Some(e) if e.is_internal() => 2,
        _ => 1,
    }
}
