//! CorrAL-style boolean datasets: the class is a fixed formula over the
//! first eight features and every other feature is independent noise.
//!
//! Each observation draws its bits from its own ChaCha stream, so any value
//! can be regenerated on its own. That lets both layouts be written in a
//! single streaming pass without holding the dataset in memory.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{Code, FeatureIndex, Layout, Sample};

/// Number of leading features the class depends on.
pub const RELEVANT_FEATURES: usize = 8;

/// `((x1 & x2) | (x3 & x4)) & ((x5 & x6) | (x7 & x8))` over 0/1 codes.
pub fn corral_class(x: &[Code]) -> Code {
    let b = |i: usize| x[i] != 0;
    Code::from(((b(0) && b(1)) || (b(2) && b(3))) && ((b(4) && b(5)) || (b(6) && b(7))))
}

fn stream(seed: u64, observation: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(observation as u64);
    rng
}

/// Value of feature `index` (1-based) in observation `observation` (0-based).
pub fn synthetic_value(seed: u64, observation: usize, index: FeatureIndex) -> Code {
    let bit = index - 1;
    let mut rng = stream(seed, observation);
    // one u64 spans two 32-bit words
    rng.set_word_pos(2 * (bit / 64) as u128);
    ((rng.next_u64() >> (bit % 64)) & 1) as Code
}

fn observation(seed: u64, i: usize, features: usize) -> Sample {
    let mut rng = stream(seed, i);
    let mut values = Vec::with_capacity(features);
    let mut word = 0u64;
    for bit in 0..features {
        if bit % 64 == 0 {
            word = rng.next_u64();
        }
        values.push(((word >> (bit % 64)) & 1) as Code);
    }
    let class = corral_class(&values);
    Sample::new(values, class)
}

fn check(observations: usize, features: usize) -> Result<()> {
    if features < RELEVANT_FEATURES {
        return Err(Error::invalid(format!("need at least {RELEVANT_FEATURES} features, got {features}")));
    }
    if observations == 0 {
        return Err(Error::invalid("need at least one observation"));
    }
    Ok(())
}

/// The generated dataset as in-memory samples.
pub fn synthetic_samples(observations: usize, features: usize, seed: u64) -> Result<Vec<Sample>> {
    check(observations, features)?;
    Ok((0..observations).map(|i| observation(seed, i, features)).collect())
}

/// Streams the generated dataset to `out`. Features are named `x1..xN` and
/// the class `class`, placed last in both layouts.
pub fn generate_synthetic<W: Write>(
    out: W,
    observations: usize,
    features: usize,
    seed: u64,
    layout: Layout,
) -> Result<()> {
    check(observations, features)?;
    let mut out = BufWriter::new(out);
    let mut line = String::new();
    match layout {
        Layout::Conventional => {
            for k in 1..=features {
                write!(out, "x{k},")?;
            }
            writeln!(out, "class")?;
            for i in 0..observations {
                let s = observation(seed, i, features);
                line.clear();
                for &v in &s.values {
                    line.push(if v == 1 { '1' } else { '0' });
                    line.push(',');
                }
                line.push(if s.class == 1 { '1' } else { '0' });
                writeln!(out, "{line}")?;
            }
        }
        Layout::Alternative => {
            for k in 1..=features {
                line.clear();
                line.push_str(&format!("x{k}"));
                for i in 0..observations {
                    line.push(',');
                    line.push(if synthetic_value(seed, i, k) == 1 { '1' } else { '0' });
                }
                writeln!(out, "{line}")?;
            }
            line.clear();
            line.push_str("class");
            for i in 0..observations {
                let relevant: Vec<Code> = (1..=RELEVANT_FEATURES).map(|k| synthetic_value(seed, i, k)).collect();
                line.push(',');
                line.push(if corral_class(&relevant) == 1 { '1' } else { '0' });
            }
            writeln!(out, "{line}")?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn generate_synthetic_file(
    path: impl AsRef<Path>,
    observations: usize,
    features: usize,
    seed: u64,
    layout: Layout,
) -> Result<()> {
    generate_synthetic(File::create(path)?, observations, features, seed, layout)
}
