mod common;

use common::{brute_mi_counts, example_samples, EXAMPLE_CSV};
use mrmr_core::data::{read_alternative, read_conventional, transpose, ClassLocator};
use mrmr_core::selector::{conventional_emissions, Partner, TableKey};
use mrmr_core::{merge_tables, mutual_information, ContingencyTable, Domain, DomainSpec, Emitter, Engine, JobSpec, Layout, Sample};
use std::io::Write;

fn domains() -> DomainSpec {
    DomainSpec::new(Domain::new([0, 1]).unwrap(), Domain::new([-2, 0, 2]).unwrap())
}

fn x1_class_tables() -> Vec<ContingencyTable> {
    example_samples()
        .iter()
        .map(|s| {
            let mut t = conventional_emissions(s, &[1], &[], &domains()).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].partner, Partner::Class);
            t.pop().unwrap().table
        })
        .collect()
}

#[test]
fn mapper_emits_the_single_observation_table() {
    let first = &x1_class_tables()[0];
    assert_eq!(first.rows().codes(), &[0, 1]);
    assert_eq!(first.cols().codes(), &[-2, 0, 2]);
    assert_eq!(first.count_rows().collect::<Vec<_>>(), vec![&[0, 0, 1][..], &[0, 0, 0][..]]);
}

#[test]
fn combiner_sums_the_first_four_entries() {
    let tables = x1_class_tables();
    let merged = tables[1..].iter().try_fold(tables[0].clone(), |acc, t| merge_tables(&acc, t)).unwrap();
    assert_eq!(merged.count_rows().collect::<Vec<_>>(), vec![&[0, 2, 1][..], &[1, 0, 0][..]]);
    assert_eq!(merged.total(), 4);
}

#[test]
fn combiner_inside_the_engine_yields_the_same_table() {
    // four map tasks on one worker, as if on the same machine
    let engine = Engine::new(1).unwrap().with_partitions(4).unwrap();
    let d = domains();
    let job = JobSpec::new(
        |s: &Sample, out: &mut Emitter<'_, TableKey, ContingencyTable>| {
            for t in conventional_emissions(s, &[1], &[], &d)? {
                out.emit(TableKey { candidate: t.candidate, partner: t.partner }, t.table)?;
            }
            Ok(())
        },
        |_, tables: Vec<ContingencyTable>| Ok(tables),
    )
    .with_combiner(|acc: &mut ContingencyTable, t| acc.merge_from(&t));
    let out = engine.run_job(&example_samples(), &job).unwrap();
    assert_eq!(out.stats.emitted, 4);
    assert_eq!(out.stats.shuffled, 1);
    let tables = out.results.into_values().next().unwrap();
    assert_eq!(tables[0].counts(), &[0, 2, 1, 1, 0, 0]);
}

#[test]
fn information_of_the_aggregate_table() {
    let t = ContingencyTable::from_counts(domains().class, domains().values, &[0, 2, 1, 1, 0, 0]).unwrap();
    let oracle = brute_mi_counts(&[vec![0, 2, 1], vec![1, 0, 0]]);
    // frozen from the direct-summation oracle
    assert!((oracle - 0.8112781244591328).abs() < 1e-15);
    assert!((mutual_information(&t).unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn reading_the_fragment() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(EXAMPLE_CSV.as_bytes()).unwrap();
    let (samples, meta) = read_conventional(f.path(), &ClassLocator::default()).unwrap();
    assert_eq!((meta.observations, meta.features), (4, 4));
    assert_eq!(meta.domains.as_ref().unwrap(), &domains());
    assert_eq!(samples, example_samples());
}

#[test]
fn transposed_fragment_reads_as_feature_rows() {
    let mut out = Vec::new();
    transpose(EXAMPLE_CSV.as_bytes(), Layout::Conventional, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text, "class,0,0,0,1\nx1,2,0,0,-2\nx2,0,-2,2,0\nx3,0,2,0,0\nx4,-2,0,-2,0\n");

    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let (rows, meta) = read_alternative(f.path(), &ClassLocator::default()).unwrap();
    assert_eq!(meta.features, 4);
    assert!(rows.iter().all(|r| r.values.len() == 4));
    assert_eq!(rows[1].values, vec![2.0, 0.0, 0.0, -2.0]);
}
