use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dimer_core::analytic;
use dimer_core::eigensolver::{full_spectrum, Method, SolverOptions};
use dimer_core::output::{self, Format};
use dimer_core::sweep::{find_threshold, run_sweep, SweepConfig, Which};
use dimer_core::verify::verify;
use dimer_core::{CouplingParams, Error};

#[derive(Parser)]
#[command(name = "dimer", version, about = "Ground-state concurrence of dimerized Heisenberg rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverArgs {
    /// Eigensolver: dense, lanczos, or auto (dense for small sectors)
    #[arg(long, default_value = "auto")]
    method: Method,
    /// Lanczos start-vector seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { method: self.method, seed: self.seed, ..Default::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep J2 at fixed J1 and N, emitting one row per grid point
    Sweep {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        j1: f64,
        #[arg(long, default_value_t = 0.0)]
        j2_min: f64,
        #[arg(long, default_value_t = 4.0)]
        j2_max: f64,
        #[arg(long, default_value_t = 81)]
        steps: usize,
        /// Treat --j2-min/--j2-max as bounds on J2/J1
        #[arg(long)]
        ratio: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the zero crossing of a signed concurrence by bisection
    Threshold {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        j1: f64,
        /// c12 (J1 bond) or c23 (J2 bond)
        #[arg(long)]
        which: Which,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the built-in numerical self-checks
    Verify {
        /// Ring sizes to check
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        n: Vec<usize>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print every eigenvalue, sector by sector (N <= 12)
    Spectrum {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        j1: f64,
        #[arg(long, default_value_t = 1.0)]
        j2: f64,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_owned(), |v| format!("{v:.10}"))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep { n, j1, j2_min, j2_max, steps, ratio, solver, format, out } => {
            let config = SweepConfig {
                n,
                j1,
                j2_min,
                j2_max,
                steps,
                method: solver.method,
                seed: solver.seed,
                ratio,
                output_format: format,
                output_path: out,
            };
            let result = run_sweep(&config)?;
            let mut w = sink(&config.output_path)?;
            output::write_result(&result, format, &mut w)?;
            w.flush()?;
            let degenerate = result.rows.iter().filter(|r| r.degenerate).count();
            eprintln!(
                "N={n} J1={j1}: argmax C_mean at J2={}, J2th(12)={}, J2th(23)={}, {degenerate} degenerate point(s)",
                fmt_opt(result.argmax_cmean),
                fmt_opt(result.thresholds.0),
                fmt_opt(result.thresholds.1),
            );
        }
        Command::Threshold { n, j1, which, lo, hi, solver } => {
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidSweep("need --lo < --hi".into()));
            }
            let root = find_threshold(n, j1, which, (lo, hi), &solver.options())?;
            println!("{root:.12}");
        }
        Command::Verify { n, solver } => {
            let report = verify(&n, &solver.options())?;
            print!("{report}");
            if !report.all_passed() {
                let failed = report.checks.iter().filter(|c| !c.passed()).count();
                return Err(Error::VerificationFailed(failed));
            }
        }
        Command::Spectrum { n, j1, j2, format, out } => {
            let params = CouplingParams::new(n, j1, j2)?;
            let spectrum = full_spectrum(&params)?;
            let mut w = sink(&out)?;
            match format {
                Format::Csv => {
                    writeln!(w, "r,index,energy")?;
                    for (r, values) in &spectrum.sector_breakdown {
                        for (i, e) in values.iter().enumerate() {
                            writeln!(w, "{r},{i},{e:.16e}")?;
                        }
                    }
                }
                Format::Json => {
                    let doc = serde_json::json!({
                        "N": n,
                        "J1": j1,
                        "J2": j2,
                        "eigenvalues": spectrum.eigenvalues,
                        "sectors": spectrum.sector_breakdown,
                    });
                    serde_json::to_writer_pretty(&mut w, &doc)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            if n == 4 {
                let closed = analytic::full_spectrum4(j1, j2)?.values();
                let dev = spectrum.eigenvalues.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                eprintln!("max deviation from closed-form four-site spectrum: {dev:.3e}");
            }
        }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
