//! Running trials and sweeps.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rpcholqr::algorithms::{cholesky_qr, cholesky_qr2, preconditioned_cholesky_qr, rp_cholesky_qr};
use rpcholqr::kernels::householder_r;
use rpcholqr::metrics::{cond2, eta, ortho_deviation, rel_residual};
use rpcholqr::{Error, Matrix, MatrixKind, Method, QrFactors, TrialRecord, UpperTriangular};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::seeds::{matrix_seed, retry_seed, trial_seed};

/// One CSV row: a trial record with its place in the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: Experiment,
    pub matrix_kind: MatrixKind,
    pub kappa_target: f64,
    pub point: usize,
    pub trial: usize,
    pub record: TrialRecord,
}

struct Factored {
    seed: u64,
    factors: QrFactors,
    /// `(A₁, R_s)` for preconditioned methods.
    pre: Option<(Matrix, UpperTriangular)>,
}

/// Numerical failures that count as a breakdown rather than an error.
fn is_breakdown(e: &Error) -> bool {
    matches!(
        e,
        Error::Breakdown(_)
            | Error::RankDeficientSample(_)
            | Error::SingularTriangular { .. }
            | Error::NonFinite { .. }
    )
}

fn factor(
    a: &Matrix,
    method: Method,
    c: usize,
    seed: u64,
    retries: u32,
) -> (u64, rpcholqr::Result<Factored>) {
    match method {
        Method::RpCholesky => {
            let mut seed = seed;
            let mut attempt = 0;
            loop {
                match rp_cholesky_qr(a, c, seed) {
                    Err(Error::RankDeficientSample(_)) if attempt < retries => {
                        attempt += 1;
                        seed = retry_seed(seed, attempt);
                    }
                    out => {
                        let out = out.map(|o| Factored {
                            seed,
                            factors: o.factors,
                            pre: Some((o.a1, o.info.r_s)),
                        });
                        return (seed, out);
                    }
                }
            }
        }
        Method::Preconditioned => {
            // Deterministic reference: the exact triangular factor of A.
            let out = householder_r(a).and_then(|r_s| {
                let p = preconditioned_cholesky_qr(a, &r_s)?;
                Ok(Factored {
                    seed,
                    factors: p.factors,
                    pre: Some((p.a1, r_s)),
                })
            });
            (seed, out)
        }
        Method::Basic | Method::CholeskyQr2 | Method::Householder => {
            let f = match method {
                Method::Basic => cholesky_qr(a),
                Method::CholeskyQr2 => cholesky_qr2(a),
                _ => rpcholqr::kernels::householder_qr(a),
            };
            (
                seed,
                f.map(|factors| Factored {
                    seed,
                    factors,
                    pre: None,
                }),
            )
        }
    }
}

/// Runs `method` on `a` and measures the result. Breakdowns, and
/// rank-deficient samples that persist through `retries` reseeds, produce a
/// record with `breakdown = true` and no metrics.
pub fn run_trial(
    a: &Matrix,
    method: Method,
    c: usize,
    seed: u64,
    kappa_target: f64,
    retries: u32,
) -> Result<TrialRecord> {
    let (m, n) = a.shape();
    let start = Instant::now();
    let (used_seed, out) = factor(a, method, c, seed, retries);
    let wall_time = start.elapsed().as_secs_f64();
    let mut rec = TrialRecord {
        method,
        m,
        n,
        c: (method == Method::RpCholesky).then_some(c),
        seed: used_seed,
        deviation: None,
        residual: None,
        kappa_a1: None,
        kappa_a: kappa_target,
        eta: None,
        breakdown: false,
        wall_time,
    };
    match out {
        Ok(f) => {
            rec.seed = f.seed;
            rec.deviation = Some(ortho_deviation(&f.factors.q)?);
            rec.residual = Some(rel_residual(a, &f.factors)?);
            if let Some((a1, r_s)) = f.pre {
                rec.kappa_a1 = Some(cond2(&a1)?);
                rec.eta = Some(eta(a, &a1, &r_s)?);
            }
        }
        Err(e) if is_breakdown(&e) => rec.breakdown = true,
        Err(e) => return Err(e.into()),
    }
    Ok(rec)
}

/// Runs every `(point, trial, method)` of the experiment. Trials run in
/// parallel; rows come back ordered by point, then trial, then method.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let matrix_key = |n: usize, trial: usize| (n, cfg.matrix_per_trial.then_some(trial));
    let mut keys: Vec<(usize, Option<usize>)> = cfg
        .points
        .iter()
        .flat_map(|p| (0..cfg.trials).map(move |t| matrix_key(p.n, t)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let matrices: BTreeMap<_, _> = keys
        .into_par_iter()
        .map(|(n, t)| {
            let a = cfg.matrix_kind.generate(
                cfg.m,
                n,
                cfg.kappa,
                matrix_seed(cfg.master_seed, n, t),
            )?;
            Ok(((n, t), a))
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize, Method)> = (0..cfg.points.len())
        .flat_map(|p| {
            (0..cfg.trials).flat_map(move |t| cfg.methods.iter().map(move |&m| (p, t, m)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(point, trial, method)| {
            let pt = cfg.points[point];
            let a = &matrices[&matrix_key(pt.n, trial)];
            let seed = trial_seed(cfg.master_seed, point, trial, method);
            let record = run_trial(
                a,
                method,
                pt.c,
                seed,
                cfg.kappa,
                cfg.retry_on_rank_deficient,
            )?;
            Ok(Row {
                experiment: cfg.experiment,
                matrix_kind: cfg.matrix_kind,
                kappa_target: cfg.kappa,
                point,
                trial,
                record,
            })
        })
        .collect()
}

/// First trial of a `single` experiment.
pub fn run_single(cfg: &ExperimentConfig) -> Result<TrialRecord> {
    if cfg.experiment != Experiment::Single {
        return Err(HarnessError::Config(format!(
            "run_single needs a `single` experiment, got `{}`",
            cfg.experiment
        )));
    }
    let one = ExperimentConfig {
        trials: 1,
        ..cfg.clone()
    };
    let mut rows = run_experiment(&one)?;
    Ok(rows.remove(0).record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Params;
    use rpcholqr::genmat::haar_frame;

    fn single(p: Params) -> ExperimentConfig {
        ExperimentConfig::resolve(Some(Experiment::Single), None, false, p).unwrap()
    }

    #[test]
    fn single_rp_on_singular_matrix() {
        let cfg = single(Params {
            m: Some(500),
            n: Some(50),
            c: Some(150),
            ..Params::default()
        });
        let rec = run_single(&cfg).unwrap();
        assert!(!rec.breakdown);
        assert!(rec.residual.unwrap() <= 1e-14);
        assert_eq!(rec.c, Some(150));
        let again = run_single(&cfg).unwrap();
        assert_eq!(
            TrialRecord {
                wall_time: 0.0,
                ..rec
            },
            TrialRecord {
                wall_time: 0.0,
                ..again
            }
        );
    }

    #[test]
    fn basic_on_orthonormal_input() {
        let q = haar_frame(200, 10, 1).unwrap();
        let rec = run_trial(&q, Method::Basic, 0, 1, 1.0, 0).unwrap();
        assert!(rec.deviation.unwrap() <= 1e-14);
        assert_eq!((rec.c, rec.kappa_a1, rec.eta), (None, None, None));
    }

    #[test]
    fn breakdown_becomes_a_record() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]).unwrap();
        let rec = run_trial(&a, Method::CholeskyQr2, 0, 1, 1e16, 3).unwrap();
        assert!(rec.breakdown);
        assert_eq!((rec.deviation, rec.residual), (None, None));
    }

    #[test]
    fn rank_deficient_samples_are_retried_then_recorded() {
        // With m = n = c every draw needs all rows to be distinct, which
        // happens with probability 5!/5^5 per attempt.
        let a = rpcholqr::genmat::haar_rotated(5, 5, 10.0, 3).unwrap();
        let recs: Vec<_> = (0..30)
            .map(|s| run_trial(&a, Method::RpCholesky, 5, s, 10.0, 3).unwrap())
            .collect();
        let broke = recs.iter().filter(|r| r.breakdown).count();
        assert!(broke > 20, "{broke}");
        let zero_retry = (0..30)
            .filter(|&s| {
                run_trial(&a, Method::RpCholesky, 5, s, 10.0, 0)
                    .unwrap()
                    .breakdown
            })
            .count();
        assert!(zero_retry >= broke);
    }

    #[test]
    fn preconditioned_reference_is_exact() {
        let a = rpcholqr::genmat::haar_rotated(300, 10, 1e12, 2).unwrap();
        let rec = run_trial(&a, Method::Preconditioned, 0, 0, 1e12, 0).unwrap();
        assert!(rec.kappa_a1.unwrap() < 1.0 + 1e-3);
        assert!(rec.deviation.unwrap() <= 1e-14);
    }
}
