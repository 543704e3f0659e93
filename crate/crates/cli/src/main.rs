use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rpcholqr::bounds::{
    first_order_bounds, gamma_terms, ortho_estimate, preconditioned_bounds, sampling_lower_bound,
    BoundSet, EpsilonSet,
};
use rpcholqr::UNIT_ROUNDOFF;
use rpcholqr_harness::config::{ConfigFile, Experiment, ExperimentConfig, Params};
use rpcholqr_harness::{
    emit_csv, emit_summary_csv, run_experiment, summarize, write_csv, write_summary_csv,
    HarnessError,
};

/// Accuracy experiments for randomized preconditioned Cholesky-QR.
#[derive(Parser)]
#[command(name = "rpcholqr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One matrix, one method.
    Single(RunArgs),
    /// Sweep over the sample count c.
    SweepC(RunArgs),
    /// Sweep over the column count n with c = 3n.
    SweepN(RunArgs),
    /// rpCholesky-QR against Cholesky-QR2 on identical matrices.
    CompareCqr2(RunArgs),
    /// Evaluate the perturbation bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated column counts.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    c: Option<usize>,
    /// Comma-separated sample counts.
    #[arg(long, value_delimiter = ',')]
    c_list: Option<Vec<usize>>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = ["worst", "haar", "worst_coherence", "haar_rotated"])]
    matrix: Option<String>,
    #[arg(long, value_parser = ["basic", "cqr2", "precond", "rp"])]
    method: Option<String>,
    /// Per-trial CSV; stdout when absent. The summary goes next to it with
    /// a `.summary.csv` suffix.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the large-scale parameters of the config (m = 6000 by default).
    #[arg(long)]
    full_scale: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Value of every perturbation not given separately.
    #[arg(long, default_value_t = UNIT_ROUNDOFF)]
    eps: f64,
    #[arg(long)]
    eps_a: Option<f64>,
    #[arg(long)]
    eps_s: Option<f64>,
    #[arg(long)]
    eps_1: Option<f64>,
    #[arg(long)]
    eps_2: Option<f64>,
    #[arg(long)]
    eps_3: Option<f64>,
    #[arg(long)]
    eps_4: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    kappa_rs: f64,
    /// Condition number of the preconditioned matrix.
    #[arg(long, alias = "kappa", default_value_t = 1.0)]
    kappa_a1: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Report the first-order bounds instead of the full ones.
    #[arg(long)]
    first_order: bool,
    /// Coherence; with --m and --n also reports the sampling bound.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    sample_eps: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
}

impl RunArgs {
    fn params(&self) -> Params {
        Params {
            m: self.m,
            n: self.n,
            n_list: self.n_list.clone(),
            c: self.c,
            c_list: self.c_list.clone(),
            kappa: self.kappa,
            matrix_kind: self.matrix.clone(),
            method: self.method.clone(),
            trials: self.trials,
            master_seed: self.seed,
            output_path: self.out.clone(),
            ..Params::default()
        }
    }
}

fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".summary.csv");
    out.with_file_name(name)
}

fn run(experiment: Experiment, args: RunArgs) -> Result<(), HarnessError> {
    let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
    let cfg = ExperimentConfig::resolve(
        Some(experiment),
        file.as_ref(),
        args.full_scale,
        args.params(),
    )?;
    let rows = run_experiment(&cfg)?;
    let summaries = summarize(&rows);
    match &cfg.output_path {
        Some(path) => {
            emit_csv(&rows, path)?;
            let sp = summary_path(path);
            emit_summary_csv(&summaries, &sp)?;
            eprintln!(
                "wrote {} rows to {} and summary to {}",
                rows.len(),
                path.display(),
                sp.display()
            );
        }
        None => {
            write_csv(io::stdout().lock(), &rows).map_err(|e| HarnessError::io("<stdout>", e))?;
            write_summary_csv(io::stderr().lock(), &summaries)
                .map_err(|e| HarnessError::io("<stderr>", e))?;
        }
    }
    Ok(())
}

fn print_bounds(out: &mut impl Write, b: &BoundSet) -> io::Result<()> {
    writeln!(out, "assumption_ok = {}", b.assumption_ok)?;
    for (name, v) in [
        ("ortho", b.ortho),
        ("residual", b.residual),
        ("cond_r2_factor", b.cond_r2_factor),
    ] {
        match v {
            Some(x) => writeln!(out, "{name} = {x:e}")?,
            None => writeln!(out, "# {name}: assumption kappa_a1^2 * gamma_2 < 1 fails")?,
        }
    }
    writeln!(out, "estimate = {:e}", ortho_estimate(b.kappa_a1))
}

fn bounds(args: BoundsArgs) -> Result<(), HarnessError> {
    let pick = |x: Option<f64>| x.unwrap_or(args.eps);
    let e = EpsilonSet::new(
        pick(args.eps_a),
        pick(args.eps_s),
        pick(args.eps_1),
        pick(args.eps_2),
        pick(args.eps_3),
        pick(args.eps_4),
        args.kappa_rs,
    )?;
    let mut out = io::stdout().lock();
    let io_err = |e| HarnessError::io("<stdout>", e);
    let b = if args.first_order {
        first_order_bounds(&e, args.kappa_a1, args.eta)?
    } else {
        let g = gamma_terms(&e);
        writeln!(
            out,
            "eps_f = {:e}\ngamma_1 = {:e}\ngamma_2 = {:e}\ngamma_3 = {:e}",
            g.eps_f, g.gamma_1, g.gamma_2, g.gamma_3
        )
        .map_err(io_err)?;
        preconditioned_bounds(&g, &e, args.kappa_a1, args.eta)?
    };
    writeln!(out, "kappa_a1 = {:e}\neta = {:e}", b.kappa_a1, b.eta).map_err(io_err)?;
    print_bounds(&mut out, &b).map_err(io_err)?;
    if let Some(mu) = args.mu {
        let (Some(m), Some(n)) = (args.m, args.n) else {
            return Err(HarnessError::Config("--mu needs --m and --n".into()));
        };
        let s = sampling_lower_bound(m, n, mu, args.sample_eps, args.delta)?;
        writeln!(
            out,
            "c_min = {}\nkappa_bound = {:e}",
            s.c_min, s.kappa_bound
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Single(a) => run(Experiment::Single, a),
        Command::SweepC(a) => run(Experiment::SweepC, a),
        Command::SweepN(a) => run(Experiment::SweepN, a),
        Command::CompareCqr2(a) => run(Experiment::CompareCqr2, a),
        Command::Bounds(a) => bounds(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
