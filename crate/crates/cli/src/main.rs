//! `ptbrach`: analysis, sweeps, trajectories, dilation dumps and the
//! identity suite for the dilated PT-symmetric brachistochrone.
//!
//! Exit status is 0 on success, 1 when verification fails and 2 for
//! configuration errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ptbrach::protocol::{
    analyze_system, regime_csv_row, write_regime_csv, RegimeReport, REGIME_CSV_HEADER,
};
use ptbrach::{build_system, dilate, regime_report, trajectory, verify, PTParams, DEFAULT_TOL};

#[derive(Parser, Debug)]
#[command(name = "ptbrach", version, about = "Naimark-dilated PT-symmetric brachistochrone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report timing, geodesic distances and post-selection cost of one point.
    Analyze {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Regime CSV over an epsilon grid at fixed omega0.
    Sweep {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        e0: f64,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Comma-separated epsilon values, e.g. `0.3,0.1,0.03`.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        eps_grid: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sampled psi(t) and chi(t) over [0, tau].
    Trajectory {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 200)]
        n_samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// JSON dump of M, V, H4, Lambda, Omega and E4.
    Dilate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the built-in identity suite; exit 1 on any failure.
    Verify {
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Energy offset.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    e0: f64,
    /// Non-Hermiticity angle in (-π/2, π/2); requires --s.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Matrix scale; requires --alpha.
    #[arg(long)]
    s: Option<f64>,
    /// Distance alpha + π/2 from the exceptional point; requires --omega0.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Level spacing E+ - E-; requires --epsilon.
    #[arg(long)]
    omega0: Option<f64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Tolerance for the construction checks run before output.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Config(String),
    Verification(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<ptbrach::Error> for Failure {
    fn from(e: ptbrach::Error) -> Self {
        match e {
            ptbrach::Error::Domain(msg) => Failure::Config(msg),
            other => Failure::Verification(other.to_string()),
        }
    }
}

impl ParamArgs {
    fn resolve(&self) -> Result<PTParams, Failure> {
        match (self.alpha, self.s, self.epsilon, self.omega0) {
            (Some(alpha), Some(s), None, None) => Ok(PTParams::new(self.e0, s, alpha)?),
            (None, None, Some(eps), Some(omega0)) => Ok(PTParams::from_epsilon(self.e0, omega0, eps)?),
            _ => Err(Failure::Config(
                "give exactly one parameter group: --alpha with --s, or --epsilon with --omega0".into(),
            )),
        }
    }
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn check_tol(&self) -> Result<(), Failure> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(Failure::Config(format!("--tol {} must be positive", self.tol)))
        }
    }
}

#[derive(Serialize)]
struct AnalyzeDoc {
    #[serde(flatten)]
    report: RegimeReport,
    e0: f64,
    e_plus: f64,
    e_minus: f64,
    omega0: f64,
}

fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { params, out } => {
            out.check_tol()?;
            let p = params.resolve()?;
            let sys = build_system(p)?;
            sys.verify(out.tol)?;
            let ds = dilate(&sys)?;
            ds.verify(out.tol)?;
            let report = analyze_system(&sys, &ds)?;
            let (e_plus, e_minus) = sys.energies;
            let mut w = out.writer()?;
            match out.format(Format::Csv) {
                Format::Csv => {
                    writeln!(w, "{REGIME_CSV_HEADER},e0,e_plus,e_minus,omega0")?;
                    writeln!(w, "{},{:?},{:?},{:?},{:?}", regime_csv_row(&report), p.e0(), e_plus, e_minus, p.omega0())?;
                }
                Format::Json => {
                    write_json(&mut w, &AnalyzeDoc { report, e0: p.e0(), e_plus, e_minus, omega0: p.omega0() })?
                }
            }
            w.flush()?;
        }
        Command::Sweep { e0, omega0, eps_grid, out } => {
            out.check_tol()?;
            let rows = regime_report(e0, omega0, &eps_grid)?;
            let mut w = out.writer()?;
            match out.format(Format::Csv) {
                Format::Csv => write_regime_csv(&rows, &mut w)?,
                Format::Json => write_json(&mut w, &rows)?,
            }
            w.flush()?;
        }
        Command::Trajectory { params, n_samples, out } => {
            out.check_tol()?;
            let sys = build_system(params.resolve()?)?;
            sys.verify(out.tol)?;
            let tau = sys.passage_times().tau;
            let traj = trajectory(&sys, tau, n_samples)?;
            let mut w = out.writer()?;
            match out.format(Format::Csv) {
                Format::Csv => traj.write_csv(&mut w)?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct Doc<'a> {
                        times: &'a [f64],
                        psi: &'a [ptbrach::CVector],
                        chi: &'a [ptbrach::CVector],
                    }
                    write_json(&mut w, &Doc { times: &traj.times, psi: &traj.psi, chi: &traj.chi })?
                }
            }
            w.flush()?;
        }
        Command::Dilate { params, out } => {
            out.check_tol()?;
            if out.format(Format::Json) != Format::Json {
                return Err(Failure::Config("dilate only emits JSON".into()));
            }
            let sys = build_system(params.resolve()?)?;
            let ds = dilate(&sys)?;
            ds.verify(out.tol)?;
            let mut w = out.writer()?;
            write_json(&mut w, &ds.document())?;
            w.flush()?;
        }
        Command::Verify { out } => {
            let checks = verify::run_all();
            let mut w = out.writer()?;
            for c in &checks {
                writeln!(w, "{}", c.line())?;
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            writeln!(w, "{} checks, {} failed", checks.len(), failed)?;
            w.flush()?;
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} invariant checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}
