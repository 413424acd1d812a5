mod common;

use std::fs;

use mrmr_core::data::{
    corral_class, generate_synthetic, generate_synthetic_file, read_alternative, read_conventional, samples_to_columns,
    synthetic_samples, transpose, transpose_file, write_alternative, write_conventional, ClassLocator,
};
use mrmr_core::{mi_score_function, select_alternative, select_conventional, Engine, Layout, CLASS_ROW};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn generate(m: usize, n: usize, seed: u64, layout: Layout) -> Vec<u8> {
    let mut out = Vec::new();
    generate_synthetic(&mut out, m, n, seed, layout).unwrap();
    out
}

#[test]
fn generation_is_deterministic() {
    for layout in [Layout::Conventional, Layout::Alternative] {
        assert_eq!(generate(300, 12, 7, layout), generate(300, 12, 7, layout));
        assert_ne!(generate(300, 12, 7, layout), generate(300, 12, 8, layout));
    }
}

#[test]
fn alternative_output_is_the_transposed_conventional_output() {
    let conv = generate(150, 70, 3, Layout::Conventional);
    let mut transposed = Vec::new();
    transpose(conv.as_slice(), Layout::Conventional, &mut transposed).unwrap();
    assert_eq!(transposed, generate(150, 70, 3, Layout::Alternative));
}

#[test]
fn positive_rate_matches_enumeration() {
    let positives = (0u32..256)
        .filter(|bits| {
            let x: Vec<i32> = (0..8).map(|i| ((bits >> i) & 1) as i32).collect();
            corral_class(&x) == 1
        })
        .count();
    assert_eq!(positives, 49);
    let samples = synthetic_samples(20_000, 10, 42).unwrap();
    let rate = samples.iter().filter(|s| s.class == 1).count() as f64 / samples.len() as f64;
    assert!((rate - 49.0 / 256.0).abs() <= 0.02, "rate {rate}");
    for k in 1..=10 {
        let ones = samples.iter().filter(|s| s.feature(k) == 1).count() as f64 / 20_000.0;
        assert!((ones - 0.5).abs() < 0.02);
    }
}

#[test]
fn single_observation_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    fs::write(&path, "x1,x2,class\n1,0,1\n").unwrap();
    let (samples, meta) = read_conventional(&path, &ClassLocator::default()).unwrap();
    assert_eq!(meta.observations, 1);
    assert_eq!(samples.len(), 1);
    let sel = select_conventional(&samples, 2, meta.domains.as_ref().unwrap(), &Engine::new(2).unwrap()).unwrap();
    assert_eq!(sel.result.indices(), vec![1, 2]);
    assert!(sel.result.scores().iter().all(|&s| s == 0.0));
}

#[test]
fn constant_class_carries_no_information() {
    let mut samples = common::random_dataset(2, 300, 6);
    for s in &mut samples {
        s.class = 4;
    }
    let domains = mrmr_core::DomainSpec::scan(&samples).unwrap();
    let sel = select_conventional(&samples, 1, &domains, &Engine::new(1).unwrap()).unwrap();
    assert_eq!(sel.result.features[0].index, 1);
    assert_eq!(sel.result.features[0].score, 0.0);
}

#[test]
fn alternative_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alt.csv");
    fs::write(&path, "f1,1.5,2,-3\nlabel,a,b,a\nf2,0,1,1\nf3,7,7,7\n").unwrap();
    let (rows, meta) = read_alternative(&path, &ClassLocator::from("label")).unwrap();
    assert_eq!(meta.class_position, 1);
    assert_eq!(rows.iter().map(|r| r.index).collect::<Vec<_>>(), vec![1, CLASS_ROW, 2, 3]);
    let mut out = Vec::new();
    write_alternative(&mut out, &rows, &meta).unwrap();
    assert_eq!(out, fs::read(&path).unwrap());
}

#[test]
fn conventional_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.csv");
    fs::write(&path, "colour,size,class\nred,3,yes\nblue,1,no\nred,2,no\n").unwrap();
    let (samples, meta) = read_conventional(&path, &ClassLocator::Index(2)).unwrap();
    let domains = meta.domains.as_ref().unwrap();
    assert_eq!(domains.values.len(), 5);
    assert_eq!(domains.class.len(), 2);
    let mut out = Vec::new();
    write_conventional(&mut out, &samples, &meta).unwrap();
    assert_eq!(out, fs::read(&path).unwrap());
}

#[test]
fn double_transpose_reproduces_random_files() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut text = String::new();
    text.push_str(&(1..=20).map(|k| format!("c{k}")).collect::<Vec<_>>().join(","));
    text.push('\n');
    for _ in 0..50 {
        let row: Vec<String> = (0..20).map(|_| rng.random_range(-9..10).to_string()).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let mut once = Vec::new();
    transpose(text.as_bytes(), Layout::Conventional, &mut once).unwrap();
    let mut twice = Vec::new();
    transpose(once.as_slice(), Layout::Alternative, &mut twice).unwrap();
    assert_eq!(String::from_utf8(twice).unwrap(), text);
}

#[test]
fn domains_cover_exactly_the_observed_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    generate_synthetic_file(&path, 64, 9, 1, Layout::Conventional).unwrap();
    let (samples, meta) = read_conventional(&path, &ClassLocator::default()).unwrap();
    assert_eq!(meta.features, 9);
    let domains = meta.domains.unwrap();
    let seen: std::collections::BTreeSet<i32> = samples.iter().flat_map(|s| s.values.iter().copied()).collect();
    assert_eq!(domains.values.codes(), seen.into_iter().collect::<Vec<_>>().as_slice());
    assert_eq!(domains.class.codes(), &[0, 1]);
    assert_eq!(samples, synthetic_samples(64, 9, 1).unwrap());
}

#[test]
fn both_layouts_select_the_same_features_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let conv = dir.path().join("conv.csv");
    let alt = dir.path().join("alt.csv");
    generate_synthetic_file(&conv, 2000, 16, 5, Layout::Conventional).unwrap();
    transpose_file(&conv, Layout::Conventional, &alt).unwrap();
    let engine = Engine::new(2).unwrap();

    let (samples, meta) = read_conventional(&conv, &ClassLocator::default()).unwrap();
    let a = select_conventional(&samples, 8, meta.domains.as_ref().unwrap(), &engine).unwrap().result;
    let (rows, _) = read_alternative(&alt, &ClassLocator::default()).unwrap();
    let b = select_alternative(&rows, 8, CLASS_ROW, &mi_score_function(), &engine).unwrap().result;
    assert_eq!(a.features, b.features);

    let (cols, class) = samples_to_columns(&samples);
    let oracle = mrmr_core::sequential_oracle(&cols, &class, 8, &mi_score_function()).unwrap();
    assert_eq!(oracle.features, a.features);
}

#[test]
fn malformed_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    for (text, line) in [("x1,class\n1,0\n1\n", 3), ("x1,class\n1,\n", 2), ("x1,y\n1,0\n", 1)] {
        fs::write(&path, text).unwrap();
        match read_conventional(&path, &ClassLocator::default()).unwrap_err() {
            mrmr_core::Error::Ingestion { line: l, .. } => assert_eq!(l, line, "{text:?}"),
            other => panic!("{other:?}"),
        }
    }
}
