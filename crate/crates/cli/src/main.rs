use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qes_cli::conjecture::conjecture_scan;
use qes_cli::emit::{Meta, Table};
use qes_cli::psi_dump::dump_wavefunction;
use qes_cli::spectrum::{compute_spectrum, MethodChoice};
use qes_cli::sweep::run_sweep;
use qes_cli::threshold::find_threshold;
use qes_cli::verify::{run_verify, Mutation};
use qes_cli::{thread_cap_from_env, CliError, TOL_REAL};
use qes_core::model::{PotentialSpec, Variant};

/// QES spectra of the potentials -(zeta cosh 2x - iM)^2 (plus variant) and
/// -(zeta sinh 2x - iM)^2 (minus variant), cross-validated by closed forms,
/// a tridiagonal eigensolve, and three-term-recursion polynomial roots.
#[derive(Parser)]
#[command(name = "qes", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plus,
    Minus,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Plus => Variant::Plus,
            VariantArg::Minus => Variant::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Matrix,
    Recursion,
    All,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> MethodChoice {
        match m {
            MethodArg::Closed => MethodChoice::Closed,
            MethodArg::Matrix => MethodChoice::Matrix,
            MethodArg::Recursion => MethodChoice::Recursion,
            MethodArg::All => MethodChoice::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance for calling an eigenvalue real.
    #[arg(long, default_value_t = TOL_REAL)]
    tol_real: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one QES spectrum, optionally cross-validating all routes.
    Spectrum {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        m: u32,
        /// closed requires M <= 4; all compares every applicable route.
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sweep the coupling on a uniform grid with level tracking.
    Sweep {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        zeta_min: f64,
        #[arg(long)]
        zeta_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, value_enum, default_value = "matrix")]
        method: MethodArg,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Locate the PT-breaking coupling zeta_c by bisection (plus variant).
    Threshold {
        #[arg(long, value_enum, default_value = "plus")]
        variant: VariantArg,
        #[arg(long)]
        m: u32,
        /// Upper end of the search interval.
        #[arg(long, default_value_t = 10.0)]
        zeta_hi: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Scan M = 1..=m-max over a coupling grid and test spectral reality.
    ConjectureScan {
        #[arg(long, value_enum, default_value = "minus")]
        variant: VariantArg,
        #[arg(long, default_value_t = 12)]
        m_max: u32,
        /// Comma-separated coupling grid.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5")]
        zeta_grid: Vec<f64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the full invariant suite; exit 0 iff everything passes.
    Verify {
        /// Relative tolerance for calling an eigenvalue real.
        #[arg(long, default_value_t = TOL_REAL)]
        tol_real: f64,
    },
    /// Sample one level's wavefunction: x, re_psi, im_psi, residual.
    Wavefunction {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        m: u32,
        /// Level index in the (Re E, Im E)-sorted spectrum.
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, value_enum, default_value = "matrix")]
        method: MethodArg,
        #[arg(long, default_value_t = -3.0)]
        x_min: f64,
        #[arg(long, default_value_t = 3.0)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn write_out(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn render(table: Table, meta: Meta, text: String, format: Format) -> String {
    match format {
        Format::Text => text,
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(&meta),
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    let threads = thread_cap_from_env();
    match cmd {
        Cmd::Spectrum { variant, zeta, m, method, output } => {
            let spec = PotentialSpec::new(variant.into(), zeta, m)?;
            let report = compute_spectrum(&spec, method.into(), output.tol_real)?;
            let body = render(
                report.table(),
                report.meta(),
                report.to_text(),
                output.format.unwrap_or(Format::Text),
            );
            write_out(&output.out, &body)?;
            if report.disagrees() {
                eprintln!(
                    "route disagreement: max multiset deviation {:.3e}",
                    report.max_deviation()
                );
                return Ok(2);
            }
            Ok(0)
        }
        Cmd::Sweep { variant, m, zeta_min, zeta_max, steps, method, output } => {
            let result = run_sweep(
                variant.into(),
                m,
                zeta_min,
                zeta_max,
                steps,
                method.into(),
                output.tol_real,
                threads,
            )?;
            let body = render(
                result.table(),
                result.meta(),
                result.to_text(),
                output.format.unwrap_or(Format::Csv),
            );
            write_out(&output.out, &body)?;
            Ok(0)
        }
        Cmd::Threshold { variant, m, zeta_hi, output } => {
            let result = find_threshold(variant.into(), m, zeta_hi, output.tol_real)?;
            let body = render(
                result.table(),
                result.meta(),
                result.to_text(),
                output.format.unwrap_or(Format::Text),
            );
            write_out(&output.out, &body)?;
            Ok(0)
        }
        Cmd::ConjectureScan { variant, m_max, zeta_grid, output } => {
            let report =
                conjecture_scan(variant.into(), m_max, &zeta_grid, output.tol_real, threads)?;
            let body = render(
                report.table(),
                report.meta(),
                report.to_text(),
                output.format.unwrap_or(Format::Text),
            );
            write_out(&output.out, &body)?;
            Ok(0)
        }
        Cmd::Verify { tol_real } => {
            let report = run_verify(tol_real, Mutation::from_env());
            print!("{}", report.to_text());
            Ok(if report.all_passed() { 0 } else { 3 })
        }
        Cmd::Wavefunction {
            variant,
            zeta,
            m,
            level,
            method,
            x_min,
            x_max,
            points,
            output,
        } => {
            let spec = PotentialSpec::new(variant.into(), zeta, m)?;
            let dump = dump_wavefunction(
                &spec,
                level,
                method.into(),
                x_min,
                x_max,
                points,
                output.tol_real,
            )?;
            let table = dump.table();
            let meta = dump.meta();
            let body = match output.format.unwrap_or(Format::Csv) {
                Format::Json => table.to_json(&meta),
                _ => table.to_csv(),
            };
            write_out(&output.out, &body)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
