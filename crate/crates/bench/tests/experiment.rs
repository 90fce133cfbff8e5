use std::fs;
use std::path::Path;

use optibatch::synthetic::generate_logistic;
use optibatch_bench::output::{log_gap, mean_std, write_results};
use optibatch_bench::{compute_reference_optimum, run_experiment, ExperimentConfig, ReferenceMode};

const CONFIG: &str = r#"
iterations = 100

[problem]
source = "synthetic-ls"
n = 200
d = 20
seed = 4

[[algorithm]]
name = "o2b"
method = "optimistic-o2b"

[[algorithm]]
name = "nag"
method = "nag"
"#;

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn run_into(dir: &Path, text: &str, threads: usize) -> ExperimentConfig {
    let config = ExperimentConfig::from_toml_str(text).unwrap();
    let results = run_experiment(&config, threads).unwrap();
    let names: Vec<String> = config.algorithms.iter().map(|a| a.name.clone()).collect();
    write_results(dir, &names, config.iterations, &results).unwrap();
    config
}

#[test]
fn writes_one_trace_per_run_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), CONFIG, 0);
    let mut traces: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv") && n != "summary.csv")
        .collect();
    traces.sort();
    assert_eq!(traces.len(), 10);
    assert_eq!(traces[0], "nag_seed0.csv");
    assert!(dir.path().join("summary.csv").exists());
    assert!(dir.path().join("plot/o2b.csv").exists());

    let text = fs::read_to_string(dir.path().join("o2b_seed3.csv")).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,suboptimality,elapsed_s,oracle_calls"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 100);
    assert!(rows[99].starts_with("100,"));
    assert!(rows[99].ends_with(",100"));
}

#[test]
fn runs_are_deterministic_apart_from_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_into(a.path(), CONFIG, 0);
    run_into(b.path(), CONFIG, 3);
    for name in ["o2b_seed0.csv", "nag_seed4.csv"] {
        let ra = read_rows(&a.path().join(name));
        let rb = read_rows(&b.path().join(name));
        assert_eq!(ra.len(), rb.len());
        for (x, y) in ra.iter().zip(&rb) {
            assert_eq!((&x[0], &x[1], &x[3]), (&y[0], &y[1], &y[3]));
        }
    }
}

#[test]
fn summary_matches_recomputation_from_traces() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str(CONFIG).unwrap();
    let results = run_experiment(&config, 0).unwrap();
    let tol = results.reference.tolerance;
    let names: Vec<String> = config.algorithms.iter().map(|a| a.name.clone()).collect();
    write_results(dir.path(), &names, config.iterations, &results).unwrap();

    let summary = read_rows(&dir.path().join("summary.csv"));
    assert_eq!(summary.len(), 8);
    for row in &summary {
        assert_eq!(row[1], "ok");
        assert_eq!(row[2], "5");
        let t: usize = row[3].parse().unwrap();
        let gaps: Vec<f64> = (0..5)
            .map(|seed| {
                let trace = read_rows(&dir.path().join(format!("{}_seed{seed}.csv", row[0])));
                let rec = &trace[t - 1];
                assert_eq!(rec[0], t.to_string());
                log_gap(rec[1].parse().unwrap(), tol)
            })
            .collect();
        let (mean, std) = mean_std(&gaps);
        let m: f64 = row[4].parse().unwrap();
        let s: f64 = row[5].parse().unwrap();
        assert!((m - mean).abs() <= 1e-12 * mean.abs().max(1.0), "{row:?}");
        assert!((s - std).abs() <= 1e-12, "{row:?}");
    }
}

#[test]
fn rejected_combination_is_recorded_and_others_continue() {
    let text = format!(
        "{CONFIG}\n[[algorithm]]\nname = \"sc\"\nmethod = \"strongly-convex-o2b\"\n"
    );
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), &text, 0);
    let summary = read_rows(&dir.path().join("summary.csv"));
    let failed: Vec<_> = summary.iter().filter(|r| r[1] == "failed").collect();
    assert_eq!(failed.len(), 5);
    assert!(failed.iter().all(|r| r[0] == "sc"));
    assert!(dir.path().join("o2b_seed0.csv").exists());
    assert!(!dir.path().join("sc_seed0.csv").exists());
}

#[test]
fn logistic_long_run_starts_agree() {
    let p = generate_logistic(200, 10, 0.005, 10.0, 8).unwrap();
    let r = compute_reference_optimum(&p, ReferenceMode::LongRun(50), 100).unwrap();
    assert!(r.spread <= 1e-9, "spread {}", r.spread);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    assert!(r.tolerance > 0.0);
}
