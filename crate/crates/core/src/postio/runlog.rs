//! CSV run logs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::flow::StepRecord;
use crate::{Error, Result};

pub const RUNLOG_HEADER: &str = "i,E,E1,E2,inner_iters,dts_l2,err_n,s_min,s_max,n_max,wall_s";

/// Writes one row per outer step.
pub fn write_runlog_csv(path: impl AsRef<Path>, records: &[StepRecord]) -> Result<()> {
    let path = path.as_ref();
    if records.is_empty() {
        return Err(Error::InvalidParameter("empty run log".into()));
    }
    fs::write(path, runlog_string(records)).map_err(|e| Error::io(path, e))
}

pub fn runlog_string(records: &[StepRecord]) -> String {
    let mut out = String::from(RUNLOG_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{:.12e},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e}",
            r.i,
            r.energy,
            r.elastic,
            r.potential,
            r.inner_iters,
            r.dts_l2,
            r.err_n,
            r.s_min,
            r.s_max,
            r.n_max,
            r.wall_s
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(i: usize, energy: f64) -> StepRecord {
        StepRecord {
            i,
            energy,
            elastic: energy,
            potential: 0.0,
            inner_iters: 3,
            inner_converged: true,
            dts_l2: 0.5,
            err_n: 0.01,
            s_min: 0.1,
            s_max: 0.75,
            n_max: 1.01,
            energy_drop: 0.0,
            gradient_dissipation: 0.0,
            numerical_dissipation: 0.0,
            wall_s: 0.0,
        }
    }

    #[test]
    fn header_and_rows() {
        let text = runlog_string(&[record(1, 2.984)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], RUNLOG_HEADER);
        let e: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(e, 2.984);
        assert!(write_runlog_csv("/nonexistent-dir/x.csv", &[]).is_err());
    }
}
