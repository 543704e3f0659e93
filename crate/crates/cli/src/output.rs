//! CSV output. Floats use Rust's shortest round-trip formatting in
//! scientific notation; absent values are empty cells.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::runner::Row;
use crate::summary::{Stats, SweepSummary};

pub const CSV_HEADER: &str =
    "experiment,matrix_kind,m,n,c,kappa_target,trial,seed,method,breakdown,\
deviation,residual,kappa_A1,eta,estimate_5_2,wall_time_s";

fn float(x: f64) -> String {
    format!("{x:e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn write_csv<W: Write>(mut w: W, rows: &[Row]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        let r = &row.record;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.experiment,
            row.matrix_kind,
            r.m,
            r.n,
            r.c.map(|c| c.to_string()).unwrap_or_default(),
            float(row.kappa_target),
            row.trial,
            r.seed,
            r.method,
            r.breakdown,
            opt_float(r.deviation),
            opt_float(r.residual),
            opt_float(r.kappa_a1),
            opt_float(r.eta),
            opt_float(r.estimate()),
            float(r.wall_time),
        )?;
    }
    w.flush()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

/// Writes the per-trial CSV to `path`.
pub fn emit_csv(rows: &[Row], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(HarnessError::Config("no rows to write".into()));
    }
    write_csv(create(path)?, rows).map_err(|e| HarnessError::io(path, e))
}

const METRICS: [&str; 4] = ["deviation", "residual", "kappa_A1", "estimate_5_2"];

pub fn write_summary_csv<W: Write>(mut w: W, summaries: &[SweepSummary]) -> io::Result<()> {
    write!(w, "experiment,matrix_kind,m,n,c,method,trials,breakdowns")?;
    for m in METRICS {
        write!(w, ",{m}_min,{m}_max,{m}_mean,{m}_logmean")?;
    }
    writeln!(w)?;
    for s in summaries {
        write!(
            w,
            "{},{},{},{},{},{},{},{}",
            s.experiment,
            s.matrix_kind,
            s.m,
            s.n,
            s.c.map(|c| c.to_string()).unwrap_or_default(),
            s.method,
            s.trials,
            s.breakdowns
        )?;
        for stats in [s.deviation, s.residual, s.kappa_a1, s.estimate] {
            match stats {
                Some(Stats {
                    min,
                    max,
                    mean,
                    log_mean,
                }) => write!(
                    w,
                    ",{},{},{},{}",
                    float(min),
                    float(max),
                    float(mean),
                    float(log_mean)
                )?,
                None => write!(w, ",,,,")?,
            }
        }
        writeln!(w)?;
    }
    w.flush()
}

/// Writes the summary CSV to `path`.
pub fn emit_summary_csv(summaries: &[SweepSummary], path: &Path) -> Result<()> {
    write_summary_csv(create(path)?, summaries).map_err(|e| HarnessError::io(path, e))
}
