use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::encode::{Encoding, TokenScan};
use super::{ClassLocator, DatasetMeta};
use crate::error::{Error, Result};
use crate::selector::CLASS_ROW;
use crate::types::{Domain, DomainSpec, FeatureRow, Layout, Sample};

fn ingestion(line: usize, message: impl Into<String>) -> Error {
    Error::Ingestion { line, message: message.into() }
}

/// Calls `f` with the 1-based line number and the fields of every non-blank
/// line, checking that cells are non-empty.
fn for_each_line(path: &Path, mut f: impl FnMut(usize, &[&str]) -> Result<()>) -> Result<()> {
    let reader = BufReader::new(File::open(path)?);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = line
            .trim_end_matches('\r')
            .split(',')
            .map(str::trim)
            .enumerate()
            .map(|(c, cell)| {
                if cell.is_empty() {
                    Err(ingestion(line_no, format!("empty cell in column {}", c + 1)))
                } else {
                    Ok(cell)
                }
            })
            .collect::<Result<Vec<&str>>>()?;
        f(line_no, &fields)?;
    }
    Ok(())
}

fn encoding_for(scan: &TokenScan, distinct: Option<BTreeSet<String>>, keep_reals: bool) -> Encoding {
    if scan.all_integer {
        Encoding::Integer
    } else if keep_reals && scan.all_real {
        Encoding::Real
    } else {
        Encoding::dictionary(distinct.unwrap_or_default(), scan.all_real)
    }
}

/// Reads a dataset with one observation per line and a header naming the
/// columns.
pub fn read_conventional(path: impl AsRef<Path>, class: &ClassLocator) -> Result<(Vec<Sample>, DatasetMeta)> {
    let path = path.as_ref();
    let mut names: Option<Vec<String>> = None;
    let mut class_pos = 0;
    let (mut feature_scan, mut class_scan) = (TokenScan::default(), TokenScan::default());
    let mut rows = 0usize;
    let mut last_line = 1;

    for_each_line(path, |line, fields| {
        last_line = line;
        let Some(header) = &names else {
            if fields.len() < 2 {
                return Err(ingestion(line, "need a class column and at least one feature column"));
            }
            let header: Vec<String> = fields.iter().map(|s| s.to_string()).collect();
            class_pos = class.resolve(&header).ok_or_else(|| ingestion(line, format!("class column {class} not found")))?;
            names = Some(header);
            return Ok(());
        };
        if fields.len() != header.len() {
            return Err(ingestion(line, format!("expected {} fields, found {}", header.len(), fields.len())));
        }
        for (c, token) in fields.iter().enumerate() {
            if c == class_pos {
                class_scan.observe(token);
            } else {
                feature_scan.observe(token);
            }
        }
        rows += 1;
        Ok(())
    })?;
    let names = names.ok_or_else(|| ingestion(1, "empty file"))?;
    if rows == 0 {
        return Err(ingestion(last_line + 1, "no observations"));
    }

    let (mut feature_tokens, mut class_tokens) = (None, None);
    if !feature_scan.all_integer || !class_scan.all_integer {
        let (mut ft, mut ct) = (BTreeSet::new(), BTreeSet::new());
        let mut header = true;
        for_each_line(path, |_, fields| {
            if std::mem::take(&mut header) {
                return Ok(());
            }
            for (c, token) in fields.iter().enumerate() {
                if c == class_pos {
                    if !class_scan.all_integer && !ct.contains(*token) {
                        ct.insert(token.to_string());
                    }
                } else if !feature_scan.all_integer && !ft.contains(*token) {
                    ft.insert(token.to_string());
                }
            }
            Ok(())
        })?;
        feature_tokens = Some(ft);
        class_tokens = Some(ct);
    }
    let feature_encoding = encoding_for(&feature_scan, feature_tokens, false);
    let class_encoding = encoding_for(&class_scan, class_tokens, false);

    let mut samples = Vec::with_capacity(rows);
    let mut header = true;
    for_each_line(path, |line, fields| {
        if std::mem::take(&mut header) {
            return Ok(());
        }
        let mut values = Vec::with_capacity(fields.len() - 1);
        let mut label = 0;
        for (c, token) in fields.iter().enumerate() {
            let code = if c == class_pos { class_encoding.code(token) } else { feature_encoding.code(token) };
            let code = code.ok_or_else(|| ingestion(line, format!("unparseable cell {token:?} in column {}", c + 1)))?;
            if c == class_pos {
                label = code;
            } else {
                values.push(code);
            }
        }
        samples.push(Sample::new(values, label));
        Ok(())
    })?;

    let domains = DomainSpec::scan(&samples)?;
    let class_name = names[class_pos].clone();
    let feature_names = names.into_iter().enumerate().filter(|&(c, _)| c != class_pos).map(|(_, n)| n).collect();
    let meta = DatasetMeta {
        layout: Layout::Conventional,
        observations: samples.len(),
        features: samples[0].values.len(),
        class_position: class_pos,
        class_name,
        feature_names,
        domains: Some(domains),
        feature_encoding,
        class_encoding,
    };
    Ok((samples, meta))
}

/// Reads a dataset with one feature per line, the first field of each line
/// being its identifier. The class row gets index [`CLASS_ROW`]; features are
/// numbered from 1 in file order.
pub fn read_alternative(path: impl AsRef<Path>, class: &ClassLocator) -> Result<(Vec<FeatureRow>, DatasetMeta)> {
    let path = path.as_ref();
    let mut ids: Vec<String> = Vec::new();
    let mut width = 0;
    let (mut feature_scan, mut class_scan) = (TokenScan::default(), TokenScan::default());

    for_each_line(path, |line, fields| {
        if ids.is_empty() {
            if fields.len() < 2 {
                return Err(ingestion(line, "no observations"));
            }
            width = fields.len();
        } else if fields.len() != width {
            return Err(ingestion(line, format!("expected {width} fields, found {}", fields.len())));
        }
        ids.push(fields[0].to_string());
        Ok(())
    })?;
    if ids.is_empty() {
        return Err(ingestion(1, "empty file"));
    }
    let class_pos = class
        .resolve(&ids)
        .ok_or_else(|| Error::NotFound(format!("class row {class}")))?;
    if ids.iter().filter(|id| **id == ids[class_pos]).count() > 1 {
        return Err(Error::invalid(format!("row id {} occurs more than once", ids[class_pos])));
    }
    if ids.len() < 2 {
        return Err(ingestion(1, "need a class row and at least one feature row"));
    }

    let mut row_no = 0;
    let (mut ft, mut ct) = (BTreeSet::new(), BTreeSet::new());
    for_each_line(path, |_, fields| {
        let is_class = row_no == class_pos;
        row_no += 1;
        let scan = if is_class { &mut class_scan } else { &mut feature_scan };
        for token in &fields[1..] {
            scan.observe(token);
        }
        Ok(())
    })?;
    if !feature_scan.all_real || !class_scan.all_real {
        let mut row_no = 0;
        for_each_line(path, |_, fields| {
            let is_class = row_no == class_pos;
            row_no += 1;
            let (scan, set) = if is_class { (&class_scan, &mut ct) } else { (&feature_scan, &mut ft) };
            if !scan.all_real {
                set.extend(fields[1..].iter().map(|t| t.to_string()));
            }
            Ok(())
        })?;
    }
    let feature_encoding = encoding_for(&feature_scan, Some(ft), true);
    let class_encoding = encoding_for(&class_scan, Some(ct), true);

    let mut rows = Vec::with_capacity(ids.len());
    let mut row_no = 0;
    let mut next_feature = 1;
    for_each_line(path, |line, fields| {
        let is_class = row_no == class_pos;
        row_no += 1;
        let encoding = if is_class { &class_encoding } else { &feature_encoding };
        let values = fields[1..]
            .iter()
            .map(|t| encoding.value(t).ok_or_else(|| ingestion(line, format!("unparseable cell {t:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        let index = if is_class {
            CLASS_ROW
        } else {
            next_feature += 1;
            next_feature - 1
        };
        rows.push(FeatureRow::new(index, values));
        Ok(())
    })?;

    let domains = if feature_encoding.is_discrete() && class_encoding.is_discrete() {
        let class_codes = rows.iter().filter(|r| r.index == CLASS_ROW).flat_map(|r| r.values.iter());
        let value_codes = rows.iter().filter(|r| r.index != CLASS_ROW).flat_map(|r| r.values.iter());
        Some(DomainSpec::new(
            Domain::new(class_codes.map(|&v| v as i32))?,
            Domain::new(value_codes.map(|&v| v as i32))?,
        ))
    } else {
        None
    };
    let class_name = ids[class_pos].clone();
    let feature_names: Vec<String> =
        ids.into_iter().enumerate().filter(|&(r, _)| r != class_pos).map(|(_, n)| n).collect();
    let meta = DatasetMeta {
        layout: Layout::Alternative,
        observations: width - 1,
        features: feature_names.len(),
        class_position: class_pos,
        class_name,
        feature_names,
        domains,
        feature_encoding,
        class_encoding,
    };
    Ok((rows, meta))
}

/// Writes samples in the conventional layout, header first.
pub fn write_conventional<W: Write>(out: W, samples: &[Sample], meta: &DatasetMeta) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", meta.column_names().join(","))?;
    let mut line = String::new();
    for s in samples {
        line.clear();
        for c in 0..=s.values.len() {
            if c > 0 {
                line.push(',');
            }
            let token = match c.cmp(&meta.class_position) {
                std::cmp::Ordering::Equal => meta.class_encoding.decode_code(s.class),
                std::cmp::Ordering::Less => meta.feature_encoding.decode_code(s.values[c]),
                std::cmp::Ordering::Greater => meta.feature_encoding.decode_code(s.values[c - 1]),
            };
            line.push_str(&token);
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes feature rows in the alternative layout, the class row at the
/// position recorded in `meta`.
pub fn write_alternative<W: Write>(out: W, rows: &[FeatureRow], meta: &DatasetMeta) -> Result<()> {
    let mut out = BufWriter::new(out);
    let names = meta.column_names();
    let mut feature = 0;
    for (pos, name) in names.iter().enumerate() {
        let (index, encoding) = if pos == meta.class_position {
            (CLASS_ROW, &meta.class_encoding)
        } else {
            feature += 1;
            (feature, &meta.feature_encoding)
        };
        let row = rows
            .iter()
            .find(|r| r.index == index)
            .ok_or_else(|| Error::NotFound(format!("row {index} ({name})")))?;
        write!(out, "{name}")?;
        for &v in &row.values {
            write!(out, ",{}", encoding.decode_value(v))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
