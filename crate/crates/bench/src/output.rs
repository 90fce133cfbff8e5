//! CSV traces, the per-algorithm summary and plot series.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use optibatch::optim::RunTrace;

use crate::runner::ExperimentResults;

pub const TRACE_HEADER: [&str; 4] = ["t", "suboptimality", "elapsed_s", "oracle_calls"];
pub const SUMMARY_HEADER: [&str; 9] = [
    "algorithm",
    "status",
    "runs",
    "t",
    "mean_log10_gap",
    "std_log10_gap",
    "mean_time_s",
    "mean_oracle_calls",
    "message",
];
pub const PLOT_HEADER: [&str; 3] = ["t", "mean_log10_gap", "std_log10_gap"];

/// Seventeen significant digits, enough to round-trip an f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_file_name(algorithm: &str, seed: u64) -> String {
    format!("{algorithm}_seed{seed}.csv")
}

pub fn write_trace(path: &Path, trace: &RunTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(TRACE_HEADER)?;
    for r in &trace.records {
        w.write_record([r.t.to_string(), fmt17(r.suboptimality), fmt17(r.elapsed_s), r.oracle_calls.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// log10 of the gap, floored at the reference tolerance.
pub fn log_gap(gap: f64, tolerance: f64) -> f64 {
    gap.max(tolerance).log10()
}

/// Mean and sample standard deviation; a single value has zero spread.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregatePoint {
    pub t: usize,
    pub mean_log10_gap: f64,
    pub std_log10_gap: f64,
    pub mean_time_s: f64,
    pub mean_oracle_calls: f64,
}

/// Pointwise statistics over traces that share one iteration grid.
pub fn aggregate(traces: &[&RunTrace], tolerance: f64) -> Result<Vec<AggregatePoint>> {
    let Some(first) = traces.first() else {
        return Ok(Vec::new());
    };
    for (k, tr) in traces.iter().enumerate().skip(1) {
        let same = tr.records.len() == first.records.len()
            && tr.records.iter().zip(&first.records).all(|(a, b)| a.t == b.t);
        if !same {
            bail!("trace {k} does not share the iteration grid of trace 0");
        }
    }
    Ok((0..first.records.len())
        .map(|i| {
            let gaps: Vec<f64> = traces.iter().map(|tr| log_gap(tr.records[i].suboptimality, tolerance)).collect();
            let (mean, std) = mean_std(&gaps);
            let n = traces.len() as f64;
            AggregatePoint {
                t: first.records[i].t,
                mean_log10_gap: mean,
                std_log10_gap: std,
                mean_time_s: traces.iter().map(|tr| tr.records[i].elapsed_s).sum::<f64>() / n,
                mean_oracle_calls: traces.iter().map(|tr| tr.records[i].oracle_calls as f64).sum::<f64>() / n,
            }
        })
        .collect())
}

/// T/8, T/4, T/2 and T, deduplicated and at least 1.
pub fn checkpoints(iterations: usize) -> Vec<usize> {
    let mut out: Vec<usize> = [iterations / 8, iterations / 4, iterations / 2, iterations]
        .into_iter()
        .map(|t| t.max(1))
        .collect();
    out.dedup();
    out
}

/// Writes one plot series per algorithm into `dir`.
pub fn emit_plot_data(dir: &Path, series: &BTreeMap<String, Vec<&RunTrace>>, tolerance: f64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut files = Vec::new();
    for (name, traces) in series {
        let points = aggregate(traces, tolerance).with_context(|| format!("cannot align traces of {name}"))?;
        let path = dir.join(format!("{name}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(PLOT_HEADER)?;
        for p in points {
            w.write_record([p.t.to_string(), fmt17(p.mean_log10_gap), fmt17(p.std_log10_gap)])?;
        }
        w.flush()?;
        files.push(path);
    }
    Ok(files)
}

/// Writes traces, `summary.csv` and `plot/`; returns every file written.
pub fn write_results(
    dir: &Path,
    algorithms: &[String],
    iterations: usize,
    results: &ExperimentResults,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let tolerance = results.reference.tolerance;
    let mut files = Vec::new();
    let mut series: BTreeMap<String, Vec<&RunTrace>> = BTreeMap::new();
    for o in &results.outcomes {
        if let Ok(trace) = &o.result {
            let path = dir.join(trace_file_name(&o.algorithm, o.seed));
            write_trace(&path, trace)?;
            files.push(path);
            series.entry(o.algorithm.clone()).or_default().push(trace);
        }
    }

    let summary = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&summary)?;
    w.write_record(SUMMARY_HEADER)?;
    for name in algorithms {
        if let Some(traces) = series.get(name) {
            let points = aggregate(traces, tolerance)?;
            for t in checkpoints(iterations) {
                let Some(p) = points.iter().find(|p| p.t == t) else { continue };
                w.write_record([
                    name.clone(),
                    "ok".into(),
                    traces.len().to_string(),
                    t.to_string(),
                    fmt17(p.mean_log10_gap),
                    fmt17(p.std_log10_gap),
                    fmt17(p.mean_time_s),
                    fmt17(p.mean_oracle_calls),
                    String::new(),
                ])?;
            }
        }
        for o in results.outcomes.iter().filter(|o| &o.algorithm == name) {
            if let Err(e) = &o.result {
                w.write_record([
                    name.clone(),
                    "failed".into(),
                    "0".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    format!("seed {}: {e}", o.seed),
                ])?;
            }
        }
    }
    w.flush()?;
    files.push(summary);
    files.extend(emit_plot_data(&dir.join("plot"), &series, tolerance)?);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use optibatch::optim::TraceRecord;

    fn trace(gaps: &[f64]) -> RunTrace {
        let mut tr = RunTrace::new(Vec::new());
        for (i, &g) in gaps.iter().enumerate() {
            tr.push(TraceRecord { t: i + 1, suboptimality: g, elapsed_s: 0.5 * i as f64, oracle_calls: i as u64 + 1 });
        }
        tr
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-19, 123456.789, f64::MIN_POSITIVE] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17, "{s}");
        }
    }

    #[test]
    fn single_or_identical_traces_have_zero_spread() {
        let a = trace(&[1.0, 0.1, 0.01]);
        let one = aggregate(&[&a], 1e-12).unwrap();
        assert!(one.iter().all(|p| p.std_log10_gap == 0.0));
        assert_eq!(one[1].mean_log10_gap, -1.0);
        let many = aggregate(&[&a, &a, &a], 1e-12).unwrap();
        assert!(many.iter().all(|p| p.std_log10_gap == 0.0));
    }

    #[test]
    fn floor_applies_below_tolerance() {
        let a = trace(&[1e-20, -1e-18]);
        let p = aggregate(&[&a], 1e-10).unwrap();
        assert_eq!(p[0].mean_log10_gap, -10.0);
        assert_eq!(p[1].mean_log10_gap, -10.0);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = trace(&[1.0, 0.5]);
        let b = trace(&[1.0, 0.5, 0.25]);
        assert!(aggregate(&[&a, &b], 1e-12).is_err());
    }

    #[test]
    fn checkpoint_grid() {
        assert_eq!(checkpoints(100), vec![12, 25, 50, 100]);
        assert_eq!(checkpoints(2), vec![1, 2]);
    }

    #[test]
    fn sample_standard_deviation() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
    }
}
