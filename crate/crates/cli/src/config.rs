//! Experiment configuration.
//!
//! A config file is TOML with a mandatory `schema_version`, an optional
//! `experiment` tag, top-level parameters, and an optional `[full_scale]`
//! table whose parameters replace the top-level ones under `--full-scale`.
//! Command-line flags override both.
//!
//! ```toml
//! schema_version = 1
//! experiment = "sweep_c"
//! m = 2000
//! n = 100
//! c_list = [200, 300, 400, 600, 800]
//! kappa = 1e15
//! matrix_kind = "worst_coherence"
//!
//! [full_scale]
//! m = 6000
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rpcholqr::{MatrixKind, Method};
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Row count used by `--full-scale` when the config has no `[full_scale]`.
pub const FULL_SCALE_M: usize = 6000;

const DEFAULT_M: usize = 2000;
const DEFAULT_TRIALS: usize = 10;
const DEFAULT_RETRIES: u32 = 3;
const DEFAULT_C_FACTOR: usize = 3;
/// Sample counts of a default `sweep_c`, in multiples of `n`.
const DEFAULT_C_MULTIPLES: [usize; 5] = [2, 3, 4, 6, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Single,
    SweepC,
    SweepN,
    CompareCqr2,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Single => "single",
            Experiment::SweepC => "sweep_c",
            Experiment::SweepN => "sweep_n",
            Experiment::CompareCqr2 => "compare_cqr2",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Experiment parameters, every one optional so that layers can be stacked.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub c: Option<usize>,
    pub c_list: Option<Vec<usize>>,
    /// `c = c_factor·n` wherever `c` is not given explicitly.
    pub c_factor: Option<usize>,
    pub kappa: Option<f64>,
    pub matrix_kind: Option<String>,
    pub method: Option<String>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub retry_on_rank_deficient: Option<u32>,
    /// Draw a fresh matrix for every trial instead of one per column count.
    pub matrix_per_trial: Option<bool>,
    pub output_path: Option<PathBuf>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl Params {
    /// `self` with every field that `top` sets replaced by `top`'s value.
    pub fn overlay(mut self, top: Params) -> Params {
        overlay_fields!(
            self,
            top,
            m,
            n,
            n_list,
            c,
            c_list,
            c_factor,
            kappa,
            matrix_kind,
            method,
            trials,
            master_seed,
            retry_on_rank_deficient,
            matrix_per_trial,
            output_path
        );
        self
    }
}

/// Parsed contents of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    pub description: Option<String>,
    pub params: Params,
    pub full_scale: Option<Params>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |e: &dyn fmt::Display| HarnessError::Config(e.to_string());
        let mut table: toml::Table = text.parse().map_err(|e| bad(&e))?;
        let version = table
            .remove("schema_version")
            .ok_or_else(|| HarnessError::Config("missing `schema_version`".into()))?;
        match version.as_integer() {
            Some(v) if v == i64::from(SCHEMA_VERSION) => {}
            _ => {
                return Err(HarnessError::Config(format!(
                    "unsupported schema_version {version}, expected {SCHEMA_VERSION}"
                )))
            }
        }
        let experiment = table
            .remove("experiment")
            .map(Experiment::deserialize)
            .transpose()
            .map_err(|e| bad(&e))?;
        let description = match table.remove("description") {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(other) => {
                return Err(HarnessError::Config(format!(
                    "`description` must be a string, got {other}"
                )))
            }
        };
        let full_scale = table
            .remove("full_scale")
            .map(Params::deserialize)
            .transpose()
            .map_err(|e| bad(&e))?;
        let params = Params::deserialize(toml::Value::Table(table)).map_err(|e| bad(&e))?;
        Ok(ConfigFile {
            experiment,
            description,
            params,
            full_scale,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

/// One sweep point: column count and, for sampling methods, sample count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub n: usize,
    pub c: usize,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub m: usize,
    pub points: Vec<SweepPoint>,
    pub kappa: f64,
    pub matrix_kind: MatrixKind,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub master_seed: u64,
    pub retry_on_rank_deficient: u32,
    pub matrix_per_trial: bool,
    pub output_path: Option<PathBuf>,
}

fn parse_field<T: FromStr<Err = String>>(name: &str, value: Option<&str>, default: T) -> Result<T> {
    match value {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|e| HarnessError::Config(format!("{name}: {e}"))),
    }
}

fn defaults(experiment: Experiment) -> Params {
    let mut p = Params {
        m: Some(DEFAULT_M),
        kappa: Some(1e15),
        matrix_kind: Some(MatrixKind::WorstCoherence.as_str().into()),
        ..Params::default()
    };
    match experiment {
        Experiment::Single => {
            p.n = Some(100);
            p.trials = Some(1);
        }
        Experiment::SweepC => p.n = Some(100),
        Experiment::SweepN => p.n_list = Some(vec![50, 100, 200]),
        Experiment::CompareCqr2 => {
            p.n = Some(200);
            p.kappa = Some(1e7);
            p.matrix_kind = Some(MatrixKind::HaarRotated.as_str().into());
        }
    }
    p
}

impl ExperimentConfig {
    /// Resolves the layers `defaults ← file ← [full_scale] ← cli` into a
    /// validated experiment. `requested` is the experiment named on the
    /// command line, if any; it must agree with the file's tag.
    pub fn resolve(
        requested: Option<Experiment>,
        file: Option<&ConfigFile>,
        full_scale: bool,
        cli: Params,
    ) -> Result<Self> {
        let file_exp = file.and_then(|f| f.experiment);
        let experiment = match (requested, file_exp) {
            (Some(a), Some(b)) if a != b => {
                return Err(HarnessError::Config(format!(
                    "config describes a `{b}` experiment but `{a}` was requested"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => {
                return Err(HarnessError::Config("no experiment given".into()));
            }
        };
        let mut p = defaults(experiment);
        if let Some(f) = file {
            p = p.overlay(f.params.clone());
        }
        if full_scale {
            match file.and_then(|f| f.full_scale.clone()) {
                Some(fs) => p = p.overlay(fs),
                None => p.m = Some(FULL_SCALE_M),
            }
        }
        // A single explicit `n` or `c` on the command line replaces a list.
        if cli.n.is_some() && cli.n_list.is_none() {
            p.n_list = None;
        }
        if cli.c.is_some() && cli.c_list.is_none() {
            p.c_list = None;
        }
        Self::from_params(experiment, p.overlay(cli))
    }

    pub fn from_params(experiment: Experiment, p: Params) -> Result<Self> {
        let err = |msg: String| Err(HarnessError::Config(msg));
        let m = p.m.unwrap_or(DEFAULT_M);
        let c_factor = p.c_factor.unwrap_or(DEFAULT_C_FACTOR);
        if c_factor == 0 {
            return err("c_factor must be >= 1".into());
        }
        let single_n = || {
            p.n.ok_or_else(|| HarnessError::Config("`n` is required".into()))
        };
        let list = |v: &Option<Vec<usize>>, name: &str| -> Result<Option<Vec<usize>>> {
            match v {
                Some(l) if l.is_empty() => Err(HarnessError::Config(format!("`{name}` is empty"))),
                other => Ok(other.clone()),
            }
        };
        let n_list = list(&p.n_list, "n_list")?;
        let c_list = list(&p.c_list, "c_list")?;
        let over_c = |n: usize| -> Vec<SweepPoint> {
            match (&c_list, p.c) {
                (Some(cs), _) => cs.iter().map(|&c| SweepPoint { n, c }).collect(),
                (None, Some(c)) => vec![SweepPoint { n, c }],
                (None, None) => DEFAULT_C_MULTIPLES
                    .iter()
                    .map(|k| SweepPoint { n, c: k * n })
                    .collect(),
            }
        };
        let over_n = |ns: &[usize]| -> Vec<SweepPoint> {
            ns.iter()
                .map(|&n| SweepPoint {
                    n,
                    c: p.c.filter(|_| ns.len() == 1).unwrap_or(c_factor * n),
                })
                .collect()
        };
        let points = match experiment {
            Experiment::Single => {
                let n = single_n()?;
                vec![SweepPoint {
                    n,
                    c: p.c.unwrap_or(c_factor * n),
                }]
            }
            Experiment::SweepC => over_c(single_n()?),
            Experiment::SweepN => match &n_list {
                Some(ns) => over_n(ns),
                None => over_n(&[single_n()?]),
            },
            Experiment::CompareCqr2 => match &n_list {
                Some(ns) => over_n(ns),
                None => over_c(single_n()?),
            },
        };

        let kappa = p.kappa.unwrap_or(1e15);
        if !(kappa.is_finite() && kappa >= 1.0) {
            return err(format!("kappa must be finite and >= 1, got {kappa}"));
        }
        let matrix_kind = parse_field(
            "matrix_kind",
            p.matrix_kind.as_deref(),
            MatrixKind::WorstCoherence,
        )?;
        let method = parse_field("method", p.method.as_deref(), Method::RpCholesky)?;
        if method == Method::Householder {
            return err("method must be one of basic, cqr2, precond, rp".into());
        }
        let methods = match experiment {
            Experiment::CompareCqr2 => vec![Method::RpCholesky, Method::CholeskyQr2],
            _ => vec![method],
        };
        let trials = p.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return err("trials must be >= 1".into());
        }
        for pt in &points {
            if pt.n == 0 || pt.n > m {
                return err(format!("need 1 <= n <= m, got n = {} with m = {m}", pt.n));
            }
            if methods.contains(&Method::RpCholesky) && pt.c < pt.n {
                return err(format!("sample count c = {} is below n = {}", pt.c, pt.n));
            }
        }
        Ok(ExperimentConfig {
            experiment,
            m,
            points,
            kappa,
            matrix_kind,
            methods,
            trials,
            master_seed: p.master_seed.unwrap_or(0),
            retry_on_rank_deficient: p.retry_on_rank_deficient.unwrap_or(DEFAULT_RETRIES),
            matrix_per_trial: p.matrix_per_trial.unwrap_or(false),
            output_path: p.output_path,
        })
    }
}
