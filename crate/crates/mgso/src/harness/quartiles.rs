//! Quartile aggregation of convergence traces at evaluation checkpoints.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::bench::BenchmarkFunction;

use super::config::AlgorithmId;
use super::records::{format_float, ConvergenceRecord};
use super::HarnessError;

pub const QUARTILES_CSV_HEADER: &str =
    "algorithm,function,dim,checkpoint,n_trials,q1,median,q3";

#[derive(Debug, Clone, PartialEq)]
pub struct QuartileRow {
    pub algorithm: AlgorithmId,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub checkpoint: usize,
    pub n_trials: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Linear-interpolation quantile: `h = (n−1)p`, interpolate between the
/// neighbouring order statistics.
pub fn quantile_interpolated(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    assert!((0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// The 1-2-5 log grid from 10 up to `max_eval`, with `max_eval` appended.
pub fn default_checkpoints(max_eval: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 10usize;
    'outer: loop {
        for mult in [1, 2, 5] {
            let c = decade * mult;
            if c >= max_eval {
                break 'outer;
            }
            out.push(c);
        }
        match decade.checked_mul(10) {
            Some(d) => decade = d,
            None => break,
        }
    }
    if out.last() != Some(&max_eval) {
        out.push(max_eval);
    }
    out
}

/// Aggregates `f_delta` across trials per (algorithm, function, dim) cell at
/// each checkpoint, carrying the best-so-far forward past the end of shorter
/// runs. Cells with no data at a checkpoint are skipped with a warning on
/// stderr.
pub fn aggregate_quartiles(
    records: &[ConvergenceRecord],
    checkpoints: &[usize],
) -> Vec<QuartileRow> {
    // Group records per run within each cell, preserving eval order.
    type CellKey = (AlgorithmId, BenchmarkFunction, usize);
    type RunTraces<'a> = BTreeMap<&'a str, Vec<(usize, f64)>>;
    let mut cell_runs: BTreeMap<CellKey, RunTraces> = BTreeMap::new();
    for r in records {
        cell_runs
            .entry((r.algorithm, r.function, r.dim))
            .or_default()
            .entry(r.run_id.as_str())
            .or_default()
            .push((r.eval_index, r.f_delta));
    }

    let mut rows = Vec::new();
    for ((algorithm, function, dim), runs) in &cell_runs {
        for &checkpoint in checkpoints {
            let mut values: Vec<f64> = Vec::with_capacity(runs.len());
            for trace in runs.values() {
                // Last record at or before the checkpoint; the trace starts
                // at eval 1, so only a checkpoint of 0 could miss entirely.
                let v = trace
                    .iter()
                    .take_while(|(idx, _)| *idx <= checkpoint)
                    .last()
                    .map(|(_, v)| *v);
                if let Some(v) = v {
                    values.push(v);
                }
            }
            if values.is_empty() {
                eprintln!(
                    "warning: no data for {}-{}-{}d at checkpoint {}",
                    algorithm.name(),
                    function.name(),
                    dim,
                    checkpoint
                );
                continue;
            }
            values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            rows.push(QuartileRow {
                algorithm: *algorithm,
                function: *function,
                dim: *dim,
                checkpoint,
                n_trials: values.len(),
                q1: quantile_interpolated(&values, 0.25),
                median: quantile_interpolated(&values, 0.5),
                q3: quantile_interpolated(&values, 0.75),
            });
        }
    }
    rows
}

pub fn quartiles_to_csv(rows: &[QuartileRow]) -> String {
    let mut out = String::new();
    out.push_str(QUARTILES_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.algorithm.name(),
            r.function.name(),
            r.dim,
            r.checkpoint,
            r.n_trials,
            format_float(r.q1),
            format_float(r.median),
            format_float(r.q3),
        ));
    }
    out
}

pub fn write_quartiles_csv(path: &Path, rows: &[QuartileRow]) -> Result<(), HarnessError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(quartiles_to_csv(rows).as_bytes())?;
    file.flush()?;
    Ok(())
}

pub fn read_quartiles_csv(path: &Path) -> Result<Vec<QuartileRow>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == QUARTILES_CSV_HEADER => {}
        other => {
            return Err(HarnessError::Csv {
                line: 1,
                message: format!("unexpected quartile header {other:?}"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(HarnessError::Csv {
                line: line_no,
                message: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let parse_f = |s: &str, name: &str| -> Result<f64, HarnessError> {
            s.parse().map_err(|_| HarnessError::Csv {
                line: line_no,
                message: format!("cannot parse {name} from {s:?}"),
            })
        };
        rows.push(QuartileRow {
            algorithm: AlgorithmId::parse(fields[0]).ok_or_else(|| HarnessError::Csv {
                line: line_no,
                message: format!("unknown algorithm {:?}", fields[0]),
            })?,
            function: BenchmarkFunction::parse(fields[1]).ok_or_else(|| HarnessError::Csv {
                line: line_no,
                message: format!("unknown function {:?}", fields[1]),
            })?,
            dim: fields[2].parse().map_err(|_| HarnessError::Csv {
                line: line_no,
                message: format!("cannot parse dim from {:?}", fields[2]),
            })?,
            checkpoint: fields[3].parse().map_err(|_| HarnessError::Csv {
                line: line_no,
                message: format!("cannot parse checkpoint from {:?}", fields[3]),
            })?,
            n_trials: fields[4].parse().map_err(|_| HarnessError::Csv {
                line: line_no,
                message: format!("cannot parse n_trials from {:?}", fields[4]),
            })?,
            q1: parse_f(fields[5], "q1")?,
            median: parse_f(fields[6], "median")?,
            q3: parse_f(fields[7], "q3")?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_values_give_exact_quartiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_interpolated(&v, 0.25), 2.0);
        assert_eq!(quantile_interpolated(&v, 0.5), 3.0);
        assert_eq!(quantile_interpolated(&v, 0.75), 4.0);
    }

    #[test]
    fn four_values_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_interpolated(&v, 0.25), 1.75);
        assert_eq!(quantile_interpolated(&v, 0.5), 2.5);
        assert_eq!(quantile_interpolated(&v, 0.75), 3.25);
    }

    #[test]
    fn single_value_degenerates() {
        let v = [7.0];
        assert_eq!(quantile_interpolated(&v, 0.25), 7.0);
        assert_eq!(quantile_interpolated(&v, 0.5), 7.0);
        assert_eq!(quantile_interpolated(&v, 0.75), 7.0);
    }

    #[test]
    fn checkpoint_grid_is_one_two_five() {
        assert_eq!(default_checkpoints(500), vec![10, 20, 50, 100, 200, 500]);
        assert_eq!(
            default_checkpoints(1250),
            vec![10, 20, 50, 100, 200, 500, 1000, 1250]
        );
        assert_eq!(default_checkpoints(10), vec![10]);
    }

    fn record(run: &str, eval_index: usize, f_delta: f64) -> ConvergenceRecord {
        ConvergenceRecord {
            run_id: run.to_string(),
            algorithm: AlgorithmId::Mgso,
            function: BenchmarkFunction::Sphere,
            dim: 2,
            instance: 1,
            seed: 0,
            eval_index,
            f_best: f_delta,
            f_delta,
        }
    }

    #[test]
    fn carry_forward_past_run_end() {
        // Five one-record runs ending before the checkpoint.
        let records: Vec<ConvergenceRecord> = (0..5)
            .map(|i| record(&format!("r{i}"), 1, (i + 1) as f64))
            .collect();
        let rows = aggregate_quartiles(&records, &[100]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_trials, 5);
        assert_eq!(rows[0].q1, 2.0);
        assert_eq!(rows[0].median, 3.0);
        assert_eq!(rows[0].q3, 4.0);
    }

    #[test]
    fn aggregation_is_idempotent() {
        let records: Vec<ConvergenceRecord> = (0..4)
            .flat_map(|i| {
                (1..=10).map(move |e| record(&format!("r{i}"), e, 10.0 / (i + e) as f64))
            })
            .collect();
        let a = aggregate_quartiles(&records, &[5, 10]);
        let b = aggregate_quartiles(&records, &[5, 10]);
        assert_eq!(a, b);
        for row in &a {
            assert!(row.q1 <= row.median && row.median <= row.q3);
        }
    }
}
