//! Per-point summary statistics.

use rpcholqr::bounds::ortho_estimate;
use rpcholqr::{MatrixKind, Method};

use crate::config::Experiment;
use crate::runner::Row;

/// Range and averages of one metric over the non-breakdown trials of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Geometric mean, `exp(mean(ln x))`; zero if any value is zero.
    pub log_mean: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let k = values.len() as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / k;
        let log_mean = if min <= 0.0 {
            0.0
        } else {
            (values.iter().map(|x| x.ln()).sum::<f64>() / k).exp()
        };
        // Rounding can push an average of equal values past the extremes.
        Some(Stats {
            min,
            max,
            mean: mean.clamp(min, max),
            log_mean: log_mean.clamp(min.max(0.0), max),
        })
    }
}

/// Summary of one `(sweep point, method)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub experiment: Experiment,
    pub matrix_kind: MatrixKind,
    pub point: usize,
    pub m: usize,
    pub n: usize,
    pub c: Option<usize>,
    pub method: Method,
    pub trials: usize,
    pub breakdowns: usize,
    pub deviation: Option<Stats>,
    pub residual: Option<Stats>,
    pub kappa_a1: Option<Stats>,
    /// Stats of `4·u·κ(A₁)`.
    pub estimate: Option<Stats>,
}

/// Groups rows by `(point, method)` in order of first appearance.
pub fn summarize(rows: &[Row]) -> Vec<SweepSummary> {
    let mut keys: Vec<(usize, Method)> = Vec::new();
    for r in rows {
        let key = (r.point, r.record.method);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(point, method)| {
            let group: Vec<&Row> = rows
                .iter()
                .filter(|r| r.point == point && r.record.method == method)
                .collect();
            let first = &group[0];
            let collect = |f: &dyn Fn(&Row) -> Option<f64>| -> Option<Stats> {
                Stats::of(&group.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            SweepSummary {
                experiment: first.experiment,
                matrix_kind: first.matrix_kind,
                point,
                m: first.record.m,
                n: first.record.n,
                c: first.record.c,
                method,
                trials: group.len(),
                breakdowns: group.iter().filter(|r| r.record.breakdown).count(),
                deviation: collect(&|r| r.record.deviation),
                residual: collect(&|r| r.record.residual),
                kappa_a1: collect(&|r| r.record.kappa_a1),
                estimate: collect(&|r| r.record.kappa_a1.map(ortho_estimate)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_stats_coincide() {
        let s = Stats::of(&[0.1]).unwrap();
        assert_eq!((s.min, s.max, s.mean, s.log_mean), (0.1, 0.1, 0.1, 0.1));
        let s = Stats::of(&[0.1, 0.1, 0.1]).unwrap();
        assert!(s.min <= s.mean && s.mean <= s.max);
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn geometric_mean() {
        let s = Stats::of(&[1e-16, 1e-14]).unwrap();
        assert!((s.log_mean / 1e-15 - 1.0).abs() < 1e-12);
        assert!((s.mean - 5.05e-15).abs() < 1e-28);
        assert_eq!(Stats::of(&[0.0, 1.0]).unwrap().log_mean, 0.0);
    }
}
