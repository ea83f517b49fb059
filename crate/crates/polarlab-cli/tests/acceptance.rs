//! Acceptance criterion 11: identical config and seed produce byte-identical
//! output files regardless of the worker count. Prints one pass/fail line;
//! run with `--nocapture` to see it.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("polarlab-acceptance-{}-{name}", std::process::id()));
    p
}

fn run_to_file(args: &[&str], out: &PathBuf) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_polarlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .expect("spawn polarlab");
    assert!(status.success(), "command {args:?} failed");
    let bytes = fs::read(out).expect("read output file");
    fs::remove_file(out).ok();
    bytes
}

#[test]
fn criterion_11_worker_count_determinism() {
    let mut ok = true;

    // A Monte Carlo experiment: SC simulation with 2000 trials.
    let code_args = |workers: &'static str| -> Vec<&'static str> {
        vec![
            "code", "--bec", "0.5", "--n", "8", "--rate", "0.25", "--trials", "2000", "--seed",
            "17", "--workers", workers,
        ]
    };
    let reference = run_to_file(&code_args("1"), &tmp("code-w1.json"));
    for workers in ["2", "3", "7"] {
        let bytes = run_to_file(&code_args(workers), &tmp(&format!("code-w{workers}.json")));
        ok &= bytes == reference;
    }
    // A different seed must actually change the result.
    let other_seed = run_to_file(
        &[
            "code", "--bec", "0.5", "--n", "8", "--rate", "0.25", "--trials", "2000", "--seed",
            "18", "--workers", "2",
        ],
        &tmp("code-seed18.json"),
    );
    ok &= other_seed != reference;

    // A sampled scaling experiment.
    let scaling_args = |workers: &'static str| -> Vec<&'static str> {
        vec![
            "scaling", "--channel", "bec:0.5", "--n", "12,16", "--t-grid", "-1,0,1", "--paths",
            "5000", "--seed", "23", "--workers", workers,
        ]
    };
    let reference = run_to_file(&scaling_args("1"), &tmp("scaling-w1.csv"));
    for workers in ["2", "5"] {
        let bytes = run_to_file(&scaling_args(workers), &tmp(&format!("scaling-w{workers}.csv")));
        ok &= bytes == reference;
    }

    // An exhaustive (deterministic) experiment rerun twice.
    let polarize_args = ["polarize", "--bec", "0.3", "--n", "10"];
    let a = run_to_file(&polarize_args, &tmp("polarize-a.csv"));
    let b = run_to_file(&polarize_args, &tmp("polarize-b.csv"));
    ok &= a == b;

    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance 11 (worker-count determinism): {verdict}");
    assert!(ok);
}
