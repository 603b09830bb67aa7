//! Convergence records and their CSV form.
//!
//! Schema (one row per objective evaluation):
//! `run_id,algorithm,function,dim,instance,seed,eval_index,f_best,f_delta`.
//! Floats are serialized with 17 significant digits so parsing them back is
//! bit-exact, which is what makes rerun-equality checks meaningful.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::bench::BenchmarkFunction;

use super::config::AlgorithmId;
use super::HarnessError;

pub const RECORDS_CSV_HEADER: &str =
    "run_id,algorithm,function,dim,instance,seed,eval_index,f_best,f_delta";

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub run_id: String,
    pub algorithm: AlgorithmId,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub instance: u64,
    pub seed: u64,
    pub eval_index: usize,
    pub f_best: f64,
    pub f_delta: f64,
}

/// 17 significant digits; round-trips every finite double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn records_to_csv(records: &[ConvergenceRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.run_id,
            r.algorithm.name(),
            r.function.name(),
            r.dim,
            r.instance,
            r.seed,
            r.eval_index,
            format_float(r.f_best),
            format_float(r.f_delta),
        ));
    }
    out
}

pub fn write_records_csv(path: &Path, records: &[ConvergenceRecord]) -> Result<(), HarnessError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(records_to_csv(records).as_bytes())?;
    file.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    name: &str,
    line: usize,
) -> Result<T, HarnessError> {
    field.parse().map_err(|_| HarnessError::Csv {
        line,
        message: format!("cannot parse {name} from {field:?}"),
    })
}

/// Reads a records CSV and audits every run for eval-index and best-so-far
/// consistency. A malformed or non-monotone file is refused loudly.
pub fn read_records_csv(path: &Path) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == RECORDS_CSV_HEADER => {}
        Some((_, header)) => {
            return Err(HarnessError::Csv {
                line: 1,
                message: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(HarnessError::Csv { line: 1, message: "empty file".into() })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(HarnessError::Csv {
                line: line_no,
                message: format!("expected 9 fields, found {}", fields.len()),
            });
        }
        let algorithm = AlgorithmId::parse(fields[1]).ok_or_else(|| HarnessError::Csv {
            line: line_no,
            message: format!("unknown algorithm {:?}", fields[1]),
        })?;
        let function = BenchmarkFunction::parse(fields[2]).ok_or_else(|| HarnessError::Csv {
            line: line_no,
            message: format!("unknown function {:?}", fields[2]),
        })?;
        records.push(ConvergenceRecord {
            run_id: fields[0].to_string(),
            algorithm,
            function,
            dim: parse_field(fields[3], "dim", line_no)?,
            instance: parse_field(fields[4], "instance", line_no)?,
            seed: parse_field(fields[5], "seed", line_no)?,
            eval_index: parse_field(fields[6], "eval_index", line_no)?,
            f_best: parse_field(fields[7], "f_best", line_no)?,
            f_delta: parse_field(fields[8], "f_delta", line_no)?,
        });
    }
    audit_runs(&records)?;
    Ok(records)
}

/// Checks the per-run invariants: strictly increasing evaluation indices and
/// a non-increasing best-so-far.
pub fn audit_runs(records: &[ConvergenceRecord]) -> Result<(), HarnessError> {
    let mut last: HashMap<&str, (usize, f64)> = HashMap::new();
    for r in records {
        if let Some((idx, best)) = last.get(r.run_id.as_str()) {
            if r.eval_index <= *idx {
                return Err(HarnessError::Integrity(format!(
                    "run {}: eval_index {} does not increase past {}",
                    r.run_id, r.eval_index, idx
                )));
            }
            if r.f_best > *best {
                return Err(HarnessError::Integrity(format!(
                    "run {}: f_best rose from {} to {} at eval {}",
                    r.run_id, best, r.f_best, r.eval_index
                )));
            }
        }
        last.insert(&r.run_id, (r.eval_index, r.f_best));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(run: &str, eval_index: usize, f_best: f64) -> ConvergenceRecord {
        ConvergenceRecord {
            run_id: run.to_string(),
            algorithm: AlgorithmId::Mgso,
            function: BenchmarkFunction::Sphere,
            dim: 2,
            instance: 1,
            seed: 42,
            eval_index,
            f_best,
            f_delta: f_best,
        }
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [
            0.0,
            -1.5,
            1.0 / 3.0,
            6.02e23,
            -7.619853024160495e-24,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_round_trips_through_a_file() {
        let records = vec![record("a", 1, 3.0), record("a", 2, 1.0), record("b", 1, 9.0)];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.csv");
        write_records_csv(&path, &records).unwrap();
        let back = read_records_csv(&path).unwrap();
        assert_eq!(records, back);
    }

    #[test]
    fn audit_rejects_rising_best() {
        let records = vec![record("a", 1, 1.0), record("a", 2, 2.0)];
        assert!(matches!(
            audit_runs(&records),
            Err(HarnessError::Integrity(_))
        ));
    }

    #[test]
    fn audit_rejects_non_increasing_index() {
        let records = vec![record("a", 2, 1.0), record("a", 2, 1.0)];
        assert!(audit_runs(&records).is_err());
    }

    #[test]
    fn header_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "nope\n").unwrap();
        let err = read_records_csv(&path).unwrap_err();
        assert!(matches!(err, HarnessError::Csv { line: 1, .. }));
    }
}
