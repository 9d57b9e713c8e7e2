use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mpiset::bench::problem::{rows_of, Num, Problem, Rows};
use mpiset::bench::{
    emit_plot_data, run_cse_sweep, write_sweep_csv, CseParams, GainMode, KcVariant, ProblemFile, ResultReport,
};
use mpiset::matops::eig_block_diag;
use mpiset::mpi::{mpi_oracle_forward, schur_split, MpiOptions};
use mpiset::{Error, Result};

#[derive(Parser)]
#[command(name = "mpiset", version, about = "Maximal positively invariant sets of constrained linear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant set of a problem file.
    Compute {
        file: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write plot points (CSV).
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlags,
    },
    /// Ordered Schur split of the closed-loop matrix.
    Schur {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlags,
    },
    /// Forward-power reference computation (no inverse needed).
    Oracle {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlags,
    },
    /// Benchmark sweeps.
    Bench {
        #[command(subcommand)]
        which: Bench,
    },
    /// Write plot points of the computed set (or of the reduced set).
    EmitPlot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Plot the invariant set of the reduced dynamics instead.
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        tol: TolFlags,
    },
}

#[derive(Subcommand)]
enum Bench {
    /// Coupled spring-mass chain with an LQ gain, dispatched branch against
    /// the forward baseline.
    Cse {
        #[arg(long, default_value_t = 2)]
        l_min: usize,
        #[arg(long, default_value_t = 10)]
        l_max: usize,
        /// State weight, `Q = q I`.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Input weight, `R = r I`.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = KcArg::Printed)]
        kc_variant: KcArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KcArg {
    Printed,
    Standard,
}

/// Overrides of the solver options; unset flags keep the file's values.
#[derive(Args)]
struct TolFlags {
    #[arg(long)]
    eps_zero: Option<f64>,
    #[arg(long)]
    tol_nil: Option<f64>,
    #[arg(long)]
    tol_feas: Option<f64>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    p_offset: Option<usize>,
}

impl TolFlags {
    fn apply(&self, base: MpiOptions) -> Result<MpiOptions> {
        let opts = MpiOptions {
            eps_zero: self.eps_zero.unwrap_or(base.eps_zero),
            tol_nil: self.tol_nil.unwrap_or(base.tol_nil),
            tol_feas: self.tol_feas.unwrap_or(base.tol_feas),
            k_max: self.k_max.unwrap_or(base.k_max),
            p_offset: self.p_offset.unwrap_or(base.p_offset),
            ..base
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Serialize)]
struct SchurReport {
    schema: u32,
    d1: usize,
    d2: usize,
    p: usize,
    eigenvalues_re: Vec<Num>,
    eigenvalues_im: Vec<Num>,
    #[serde(rename = "U")]
    u: Rows,
    #[serde(rename = "S")]
    s: Rows,
    #[serde(rename = "T")]
    t: Rows,
}

fn load(file: &Path, tol: &TolFlags) -> Result<Problem> {
    let mut problem = ProblemFile::load(file)?.resolve()?;
    problem.opts = tol.apply(problem.opts)?;
    Ok(problem)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(io::stdout(), "{text}")?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { file, out, plot, tol } => {
            let result = load(&file, &tol)?.solve()?;
            emit(&ResultReport::from_result(&result).to_json()?, out.as_deref())?;
            if let Some(path) = plot {
                emit_plot_data(&result.set, &path)?;
            }
        }
        Command::Schur { file, out, tol } => {
            let problem = load(&file, &tol)?;
            let a_cl = problem.closed_loop()?;
            let split = schur_split(&a_cl, problem.opts.eps_zero, problem.opts.tol_nil)?;
            let eig = eig_block_diag(&split.s())?;
            let report = SchurReport {
                schema: 1,
                d1: split.d1,
                d2: split.d2,
                p: split.p,
                eigenvalues_re: eig.iter().map(|z| Num(z.re)).collect(),
                eigenvalues_im: eig.iter().map(|z| Num(z.im)).collect(),
                u: rows_of(&split.u),
                s: rows_of(&split.s()),
                t: rows_of(&split.t),
            };
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
        }
        Command::Oracle { file, out, tol } => {
            let problem = load(&file, &tol)?;
            let result = mpi_oracle_forward(&problem.closed_loop()?, &problem.xbar_h()?, problem.opts.k_max)?;
            emit(&ResultReport::from_result(&result).to_json()?, out.as_deref())?;
        }
        Command::Bench {
            which: Bench::Cse { l_min, l_max, q, r, kc_variant, out, tol },
        } => {
            if l_min < 2 || l_max < l_min {
                return Err(Error::InvalidParams(format!("mass range {l_min}..={l_max}")));
            }
            let kc = match kc_variant {
                KcArg::Printed => KcVariant::Printed,
                KcArg::Standard => KcVariant::Standard,
            };
            let params = CseParams { kc, ..CseParams::new(l_min) };
            let opts = tol.apply(MpiOptions::default())?;
            let ells: Vec<usize> = (l_min..=l_max).collect();
            let rows = run_cse_sweep(&ells, &params, GainMode::Riccati { q, r }, &opts)?;
            match out {
                Some(path) => write_sweep_csv(&rows, File::create(path)?)?,
                None => write_sweep_csv(&rows, io::stdout())?,
            }
        }
        Command::EmitPlot { file, out, reduced, tol } => {
            let result = load(&file, &tol)?.solve()?;
            let set = if reduced {
                result
                    .reduced
                    .and_then(|run| run.phi_z)
                    .ok_or_else(|| Error::InvalidParams("no reduced set: the closed loop has no coupled zero eigenvalues".into()))?
            } else {
                result.set
            };
            let points = emit_plot_data(&set, &out)?;
            eprintln!("{points} points written to {}", out.display());
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IterationCapExceeded(_) => 4,
        Error::Parse(_)
        | Error::Io(_)
        | Error::DimensionMismatch(_)
        | Error::InvalidParams(_)
        | Error::InvalidConstraintSet(_)
        | Error::NonSquare { .. }
        | Error::NonFinite(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

