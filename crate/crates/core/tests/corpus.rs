use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use unravel_core::checker::prover::{prove_quasi_decreasing, Verdict};
use unravel_core::ctrs::Fuel;
use unravel_core::experiment::{run_experiment, ExperimentConfig, ExperimentReport, COMBINED};
use unravel_core::io::json::{to_json, versioned};
use unravel_core::io::parse::{parse_ctrs, parse_trs};
use unravel_core::io::print::{print_csrs, print_ctrs, print_trs};
use unravel_core::unravel::{unravel, unravel_cs};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ctrs"))
        .collect();
    files.sort();
    files
}

fn expected() -> BTreeMap<&'static str, Verdict> {
    use Verdict::*;
    BTreeMap::from([
        ("bubble_sort", Maybe),
        ("cycle", No),
        ("even_odd", Yes),
        ("fib", Yes),
        ("guarded_loop", No),
        ("half", Yes),
        ("less", Yes),
        ("max", Yes),
        ("member", Maybe),
        ("self_condition", Maybe),
        ("self_loop", No),
        ("two_conditions", Yes),
    ])
}

#[test]
fn corpus_round_trips() {
    let files = corpus_files();
    assert!(files.len() >= 10);
    for f in files {
        let r = parse_ctrs(&std::fs::read_to_string(&f).unwrap())
            .unwrap()
            .dctrs;
        let printed = print_ctrs(&r);
        let again = parse_ctrs(&printed).unwrap().dctrs;
        assert_eq!(again, r, "{}", f.display());
        assert_eq!(print_ctrs(&again), printed);

        let trs = unravel(&r);
        let back = parse_trs(&print_trs(&trs)).unwrap();
        assert!(back.trs.same_rules(&trs), "{}", f.display());

        let cs = unravel_cs(&r);
        let back = parse_trs(&print_csrs(&cs)).unwrap();
        assert!(
            back.csrs().unwrap().unwrap().same_system(&cs),
            "{}",
            f.display()
        );
    }
}

#[test]
fn corpus_verdicts() {
    let want = expected();
    for f in corpus_files() {
        let name = f.file_stem().unwrap().to_str().unwrap().to_string();
        let r = parse_ctrs(&std::fs::read_to_string(&f).unwrap())
            .unwrap()
            .dctrs;
        let out = prove_quasi_decreasing(&r, Fuel::default(), None);
        assert_eq!(Some(&out.verdict), want.get(name.as_str()), "{name}");
        assert!(out.revalidate(&r), "{name}");
    }
}

fn without_timing(report: &ExperimentReport) -> String {
    let mut r = report.clone();
    for row in &mut r.systems {
        row.wall_ms = 0;
    }
    to_json(&versioned("experiment", &r))
}

#[test]
fn experiment_is_deterministic_and_consistent() {
    let config = ExperimentConfig::default();
    let a = run_experiment(&corpus_dir(), &config).unwrap();
    let b = run_experiment(
        &corpus_dir(),
        &ExperimentConfig {
            workers: 1,
            ..config
        },
    )
    .unwrap();
    assert_eq!(without_timing(&a), without_timing(&b));

    let want = expected();
    assert_eq!(a.systems.len(), want.len());
    for row in &a.systems {
        assert!(row.valid);
        assert_eq!(
            row.verdict.as_ref(),
            want.get(row.system.as_str()),
            "{}",
            row.system
        );
    }
    for column in &a.summary.columns {
        for v in [Verdict::Yes, Verdict::No, Verdict::Maybe] {
            let rows = a
                .systems
                .iter()
                .filter(|r| {
                    if column == COMBINED {
                        r.verdict == Some(v)
                    } else {
                        r.methods.get(column) == Some(&v)
                    }
                })
                .count();
            assert_eq!(a.count(v, column), rows, "{v} {column}");
        }
    }
    assert_eq!(a.count(Verdict::Yes, COMBINED), 6);
    assert_eq!(a.count(Verdict::No, COMBINED), 3);
    assert_eq!(a.count(Verdict::Maybe, COMBINED), 3);
}
