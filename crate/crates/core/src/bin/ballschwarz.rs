use std::path::PathBuf;
use std::process::ExitCode;

use ballschwarz::harness::{
    emit_plot_data, error_exit_code, exit_code, info, run_suite, tally, write_output, FieldSelection, Format,
    RunConfig, Suite,
};
use ballschwarz::{Error, QuadratureSpec};
use clap::{Args, Parser, Subcommand};

/// Poisson's equation on the unit ball: solver checks, Schwarz-type bounds
/// and their numerical verification.
#[derive(Parser)]
#[command(name = "ballschwarz", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and write its report.
    Verify(Common),
    /// Write curve data for U, phi, sup_C, the n = 4 closed form and A_n.
    PlotData(Common),
    /// Print version, defaults and the sharp constants.
    Info(Common),
}

#[derive(Args)]
struct Common {
    /// mobius | specfun | reconstruct | thm1 | cor1 | thm2 | thm3 | sharp | landau-demo | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
    n: Vec<usize>,
    /// Catalog size, or ';'-separated selectors (e.g. "sharp:M=2;rand:deg=3,seed=5,m=2").
    #[arg(long, default_value = "50")]
    fields: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Interior points per field (suite default when omitted).
    #[arg(long)]
    points: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Panel budget of each adaptive integration.
    #[arg(long)]
    budget: Option<usize>,
    /// Landau demonstration parameters, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,10")]
    k: Vec<u32>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut quad = QuadratureSpec::default();
        if let Some(t) = self.tol {
            quad = quad.with_tol(t);
        }
        if let Some(b) = self.budget {
            quad.max_subdivisions = b;
        }
        let cfg = RunConfig {
            suite: self.suite.parse::<Suite>()?,
            dims: self.n.clone(),
            fields: FieldSelection::parse(&self.fields)?,
            seed: self.seed,
            points: self.points,
            landau_k: self.k.clone(),
            quad,
            out: self.out.clone(),
            format: self.format.parse::<Format>()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cmd: &Cmd) -> Result<i32, Error> {
    match cmd {
        Cmd::Verify(c) => {
            let cfg = c.config()?;
            let rows = run_suite(&cfg)?;
            write_output(&rows, &cfg)?;
            let t = tally(&rows);
            eprintln!(
                "{} rows: {} pass, {} fail, {} inconclusive, {} not applicable",
                rows.len(),
                t.pass,
                t.fail,
                t.inconclusive,
                t.not_applicable
            );
            Ok(exit_code(&rows))
        }
        Cmd::PlotData(c) => {
            let cfg = c.config()?;
            write_output(&emit_plot_data(&cfg)?, &cfg)?;
            Ok(0)
        }
        Cmd::Info(c) => {
            print!("{}", info(&c.config()?)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
