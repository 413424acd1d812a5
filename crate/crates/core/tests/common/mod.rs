//! Independent reference computations and fixtures shared by the
//! integration tests. Nothing here calls into the scoring code under test.

#![allow(dead_code)]

use std::collections::HashMap;

use mrmr_core::{Code, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plug-in mutual information (bits) of a count matrix by direct summation
/// over probabilities.
pub fn brute_mi_counts(counts: &[Vec<u64>]) -> f64 {
    let n: u64 = counts.iter().flatten().sum();
    let n = n as f64;
    let rows: Vec<f64> = counts.iter().map(|r| r.iter().sum::<u64>() as f64 / n).collect();
    let cols: Vec<f64> = (0..counts[0].len()).map(|c| counts.iter().map(|r| r[c]).sum::<u64>() as f64 / n).collect();
    let mut mi = 0.0;
    for (i, row) in counts.iter().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            if k > 0 {
                let p = k as f64 / n;
                mi += p * (p / (rows[i] * cols[j])).log2();
            }
        }
    }
    mi
}

/// Plug-in mutual information (bits) of two categorical vectors.
pub fn brute_mi(a: &[i64], b: &[i64]) -> f64 {
    let n = a.len() as f64;
    let mut joint: HashMap<(i64, i64), f64> = HashMap::new();
    let mut pa: HashMap<i64, f64> = HashMap::new();
    let mut pb: HashMap<i64, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0 / n;
        *pa.entry(x).or_default() += 1.0 / n;
        *pb.entry(y).or_default() += 1.0 / n;
    }
    joint.iter().map(|(&(x, y), &p)| p * (p / (pa[&x] * pb[&y])).log2()).sum()
}

/// Correlation by the textbook covariance formula.
pub fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (n - 1.0);
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    cov / (sx * sy)
}

pub fn column(samples: &[Sample], k: usize) -> Vec<i64> {
    samples.iter().map(|s| i64::from(s.values[k - 1])).collect()
}

pub fn class_column(samples: &[Sample]) -> Vec<i64> {
    samples.iter().map(|s| i64::from(s.class)).collect()
}

/// Relevance minus mean redundancy straight from raw columns.
pub fn brute_score(samples: &[Sample], k: usize, selected: &[usize]) -> f64 {
    let x = column(samples, k);
    let relevance = brute_mi(&x, &class_column(samples));
    if selected.is_empty() {
        return relevance;
    }
    let red: f64 = selected.iter().map(|&j| brute_mi(&x, &column(samples, j))).sum();
    relevance - red / selected.len() as f64
}

/// A random discrete dataset whose class leans on a handful of features.
pub fn random_dataset(seed: u64, rows: usize, features: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value_domains: [&[Code]; 3] = [&[0, 1], &[-2, 0, 2], &[0, 1, 2, 3]];
    let values = value_domains[rng.random_range(0..3)];
    let informative: Vec<usize> = (0..3).map(|_| rng.random_range(0..features)).collect();
    (0..rows)
        .map(|_| {
            let v: Vec<Code> = (0..features).map(|_| values[rng.random_range(0..values.len())]).collect();
            let signal: i32 = informative.iter().map(|&i| v[i]).sum();
            let class = if rng.random_bool(0.2) { rng.random_range(0..3) } else { (signal.rem_euclid(3)) as Code };
            Sample::new(v, class)
        })
        .collect()
}

/// The four rows of the worked example: class, then x1..x4.
pub const EXAMPLE_ROWS: [[Code; 5]; 4] = [[0, 2, 0, 0, -2], [0, 0, -2, 2, 0], [0, 0, 2, 0, -2], [1, -2, 0, 0, 0]];

pub fn example_samples() -> Vec<Sample> {
    EXAMPLE_ROWS.iter().map(|r| Sample::new(r[1..].to_vec(), r[0])).collect()
}

pub const EXAMPLE_CSV: &str = "class,x1,x2,x3,x4\n0,2,0,0,-2\n0,0,-2,2,0\n0,0,2,0,-2\n1,-2,0,0,0\n";
