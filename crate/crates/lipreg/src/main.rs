//! `lipreg`: generate data, fit Lipschitz-regularized or TV2-regularized CPWL
//! models, sparsify, sample envelopes and sweep λ.
//!
//! Exit codes: 0 success, 1 usage, parse or input error, 2 solver did not
//! converge (output is still written).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lipreg::datagen::{generate_data, load_ground_truth, GenConfig};
use lipreg::formats::{
    read_data_csv, write_data_csv, write_envelope_csv, write_json, CpwlJson, FitResultJson,
};
use lipreg::pipeline::{fit_hybrid, fit_lipschitz, sweep, FitResult, Mode};
use lipreg_core::{envelope_band, sparsest_interpolant, AdmmConfig, InterpolationInstance};

#[derive(Parser, Debug)]
#[command(
    name = "lipreg",
    version,
    about = "Lipschitz-aware CPWL regression in one dimension"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a ground truth at random abscissas in [0, 1] with Gaussian noise
    GenData(GenArgs),
    /// Lipschitz-regularized fit
    FitLip(FitLipArgs),
    /// TV2-regularized fit under a slope bound
    FitHybrid(FitHybridArgs),
    /// Sparsest CPWL interpolant of the input points
    Sparsify(IoArgs),
    /// Sample the band of all minimal-Lipschitz interpolants
    Envelope(EnvelopeArgs),
    /// Fit over a grid of λ values
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    /// `6region`, `relu_half` or `file PATH` (CPWL JSON)
    #[arg(long, num_args = 1..=2, value_names = ["NAME", "PATH"])]
    gt: Vec<String>,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    outlier_frac: f64,
    #[arg(long, default_value_t = 0.0)]
    outlier_sigma: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Starting ADMM penalty (all splits)
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Primal and dual residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Keep the penalty fixed instead of balancing residuals
    #[arg(long)]
    fixed_rho: bool,
}

impl SolverArgs {
    fn config(&self) -> AdmmConfig {
        let mut cfg = AdmmConfig::default();
        if let Some(rho) = self.rho {
            (cfg.rho, cfg.rho1, cfg.rhoinf) = (rho, rho, rho);
        }
        if let Some(n) = self.max_iter {
            cfg.max_iter = n;
        }
        if let Some(tol) = self.tol {
            (cfg.tol_primal, cfg.tol_dual) = (tol, tol);
        }
        cfg.adaptive_rho = !self.fixed_rho;
        cfg
    }
}

#[derive(Args, Debug)]
struct IoArgs {
    /// CSV with header `x,y`
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FitLipArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    lambda: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct FitHybridArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    lbar: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Number of equispaced abscissas over [x_1, x_M]
    #[arg(long)]
    grid: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SweepMode {
    Lip,
    Hybrid,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Comma-separated λ values
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<f64>,
    #[arg(long, value_enum)]
    mode: SweepMode,
    /// Slope bound, required with `--mode hybrid`
    #[arg(long)]
    lbar: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
}

enum Status {
    Done,
    NotConverged,
}

fn status(results: &[FitResult]) -> Status {
    if results.iter().all(FitResult::converged) {
        Status::Done
    } else {
        Status::NotConverged
    }
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::GenData(a) => {
            let (name, file) = match a.gt.as_slice() {
                [name] => (name.as_str(), None),
                [name, path] => (name.as_str(), Some(PathBuf::from(path))),
                _ => bail!("--gt expects a preset name or `file PATH`"),
            };
            let gt = load_ground_truth(name, file.as_deref())?;
            let cfg = GenConfig::new(a.m, gt, a.sigma, a.seed)
                .with_outliers(a.outlier_frac, a.outlier_sigma);
            write_data_csv(&a.out, &generate_data(&cfg)?)?;
            Ok(Status::Done)
        }
        Command::FitLip(a) => {
            let data = read_data_csv(&a.io.input)?;
            let r = fit_lipschitz(&data, a.lambda, &a.solver.config())?;
            write_json(&a.io.out, &FitResultJson::from(&r))?;
            Ok(status(&[r]))
        }
        Command::FitHybrid(a) => {
            let data = read_data_csv(&a.io.input)?;
            let r = fit_hybrid(&data, a.lambda, a.lbar, &a.solver.config())?;
            write_json(&a.io.out, &FitResultJson::from(&r))?;
            Ok(status(&[r]))
        }
        Command::Sparsify(a) => {
            let data = read_data_csv(&a.input)?;
            let f = sparsest_interpolant(&InterpolationInstance::from(data))?;
            write_json(&a.out, &CpwlJson::from(&f))?;
            Ok(Status::Done)
        }
        Command::Envelope(a) => {
            if a.grid == 0 {
                bail!("--grid must be positive");
            }
            let inst = InterpolationInstance::from(read_data_csv(&a.io.input)?);
            let (lo, hi) = (inst.xs()[0], inst.xs()[inst.len() - 1]);
            let n = a.grid;
            let bands = (0..n)
                .map(|i| match i {
                    0 => lo,
                    _ if i + 1 == n => hi,
                    _ => lo + (hi - lo) * i as f64 / (n - 1) as f64,
                })
                .map(|x| envelope_band(&inst, x))
                .collect::<Result<Vec<_>, _>>()?;
            write_envelope_csv(&a.io.out, &bands)?;
            Ok(Status::Done)
        }
        Command::Sweep(a) => {
            let mode = match (a.mode, a.lbar) {
                (SweepMode::Lip, _) => Mode::Lipschitz,
                (SweepMode::Hybrid, Some(lbar)) => Mode::Hybrid { lbar },
                (SweepMode::Hybrid, None) => bail!("--mode hybrid requires --lbar"),
            };
            let data = read_data_csv(&a.io.input)?;
            let results = sweep(&data, &a.lambdas, mode, &a.solver.config())?;
            let out: Vec<FitResultJson> = results.iter().map(FitResultJson::from).collect();
            write_json(&a.io.out, &out)?;
            Ok(status(&results))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command).context("lipreg") {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::NotConverged) => {
            eprintln!("warning: solver did not converge; output written");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
