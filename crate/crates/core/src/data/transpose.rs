use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::Layout;

/// Rewrites a dataset in the other layout. Works on raw tokens, so applying
/// it twice reproduces the input byte for byte (for files already in
/// canonical form: no blank lines, no padding, `\n` line ends).
pub fn transpose<R: Read, W: Write>(input: R, layout: Layout, output: W) -> Result<()> {
    let mut grid: Vec<Vec<String>> = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|s| s.trim().to_owned()).collect();
        if let Some(c) = fields.iter().position(String::is_empty) {
            return Err(Error::Ingestion { line: i + 1, message: format!("empty cell in column {}", c + 1) });
        }
        if let Some(first) = grid.first() {
            if first.len() != fields.len() {
                return Err(Error::Ingestion {
                    line: i + 1,
                    message: format!("expected {} fields, found {}", first.len(), fields.len()),
                });
            }
        }
        grid.push(fields);
    }
    if grid.is_empty() {
        return Err(Error::Ingestion { line: 1, message: "empty file".into() });
    }
    let observations = match layout {
        Layout::Conventional => grid.len() - 1,
        Layout::Alternative => grid[0].len() - 1,
    };
    if observations == 0 {
        return Err(Error::Ingestion { line: 1, message: "no observations".into() });
    }

    // Both directions are a plain matrix transpose: the conventional header
    // becomes the identifier column and vice versa.
    let mut out = BufWriter::new(output);
    let width = grid[0].len();
    for c in 0..width {
        let mut line = String::new();
        for (r, row) in grid.iter().enumerate() {
            if r > 0 {
                line.push(',');
            }
            line.push_str(&row[c]);
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn transpose_file(input: impl AsRef<Path>, layout: Layout, output: impl AsRef<Path>) -> Result<()> {
    let reader = File::open(input)?;
    let writer = File::create(output)?;
    transpose(reader, layout, writer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &str, layout: Layout) -> String {
        let mut out = Vec::new();
        transpose(input.as_bytes(), layout, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn one_by_one_is_its_own_double_transpose() {
        let once = run("a\n1\n", Layout::Conventional);
        assert_eq!(once, "a,1\n");
        assert_eq!(run(&once, Layout::Alternative), "a\n1\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let mut out = Vec::new();
        let err = transpose("a,b\n1,2\n3\n".as_bytes(), Layout::Conventional, &mut out).unwrap_err();
        assert!(matches!(err, Error::Ingestion { line: 3, .. }));
        assert!(transpose("".as_bytes(), Layout::Conventional, &mut out).is_err());
        assert!(transpose("a,b\n".as_bytes(), Layout::Conventional, &mut out).is_err());
        assert!(transpose("a\nb\n".as_bytes(), Layout::Alternative, &mut out).is_err());
    }
}
