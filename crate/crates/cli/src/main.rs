//! Command-line driver: solve problem files, run the seeded verification
//! sweeps, analyze boundary behavior, and probe the sharpness threshold.
//!
//! Exit codes: 0 all checks passed, 2 parse error, 3 condition violation,
//! 4 numeric failure or failed check.

mod problem;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use skewfrac::analysis::{
    self, counterexample_check, fit_distances, fit_exponent_from_samples, EndpointBehavior,
};
use skewfrac::fraccalc::Side;
use skewfrac::solver::{check_wellposedness, solve_weak, GalerkinSolution};
use skewfrac::suites::{self, CheckRecord};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "skewfrac",
    version,
    about = "Skewed fractional diffusion-advection-reaction toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Clone)]
struct OutputArgs {
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args, Clone)]
struct SweepArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance overrides, as `ref=value` (repeatable)
    #[arg(long = "tol", value_parser = parse_tol)]
    tolerances: Vec<(String, f64)>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, val) = s.split_once('=').ok_or("expected ref=value")?;
    let v: f64 = val.parse().map_err(|_| format!("invalid tolerance '{val}'"))?;
    Ok((name.to_string(), v))
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and emit coefficients plus an evaluation table
    Solve {
        #[arg(long)]
        problem: PathBuf,
        /// Basis size
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the coupled Abel equation verification sweep
    VerifyAbel {
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the singular-equation verification sweep
    VerifySingular {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the special-function verification sweep
    VerifySpecfun {
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit endpoint exponents of a solved problem (or of an emitted table)
    AnalyzeBoundary {
        #[arg(long, conflicts_with = "table")]
        problem: Option<PathBuf>,
        /// A JSON table produced by `solve`
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the well-posedness conditions of a problem file
    CheckConditions {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Probe the sharpness threshold beyond order 1 + mu
    Counterexample {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    x: f64,
    u: f64,
    du: f64,
    dmu_left: f64,
    dmu_right: f64,
}

#[derive(Serialize, Deserialize)]
struct SolveOutput {
    command: String,
    interval: (f64, f64),
    mu: f64,
    alpha: f64,
    beta: f64,
    n: usize,
    seed: u64,
    coefficients: Vec<f64>,
    residual_norm: f64,
    energy_seminorm: f64,
    table: Vec<TableRow>,
}

#[derive(Serialize)]
struct VerifyOutput {
    command: String,
    seed: u64,
    records: Vec<CheckRecord>,
}

#[derive(Serialize)]
struct NamedFit {
    quantity: String,
    endpoint: String,
    estimate: f64,
    stderr: f64,
    class: EndpointBehavior,
}

#[derive(Serialize)]
struct BoundaryOutput {
    command: String,
    interval: (f64, f64),
    fits: Vec<NamedFit>,
}

fn write_output(output: &OutputArgs, text: String) -> Result<(), String> {
    match &output.out {
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(e.to_string());
            }
            Ok(())
        }
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
    }
}

fn records_to_csv(records: &[CheckRecord]) -> String {
    let mut out = String::from("check,status,measured,tolerance,ref\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.check.replace(',', ";"),
            if r.passed() { "pass" } else { "fail" },
            r.measured,
            r.tolerance,
            r.reference
        ));
    }
    out.trim_end().to_string()
}

fn apply_overrides(records: &mut [CheckRecord], overrides: &[(String, f64)]) {
    for r in records.iter_mut() {
        if let Some((_, tol)) = overrides.iter().find(|(name, _)| *name == r.reference) {
            let passed = r.measured.is_finite() && r.measured <= *tol;
            r.tolerance = *tol;
            r.status = if passed {
                suites::CheckStatus::Pass
            } else {
                suites::CheckStatus::Fail
            };
        }
    }
}

fn emit_records(
    command: &str,
    seed: u64,
    mut records: Vec<CheckRecord>,
    sweep: &SweepArgs,
    output: &OutputArgs,
) -> Result<bool, String> {
    apply_overrides(&mut records, &sweep.tolerances);
    let ok = suites::all_passed(&records);
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&VerifyOutput {
            command: command.into(),
            seed,
            records,
        })
        .map_err(|e| e.to_string())?,
        Format::Csv => records_to_csv(&records),
    };
    write_output(output, text)?;
    Ok(ok)
}

/// The 401-point evaluation grid: the canonical fitter distances from both
/// endpoints plus a uniform interior fill, so an emitted table can be
/// re-ingested for boundary fitting without re-solving.
fn table_points(sol: &GalerkinSolution) -> Vec<f64> {
    let iv = sol.interval();
    let ds = fit_distances(iv);
    let mut xs: Vec<f64> = Vec::with_capacity(401);
    for d in &ds {
        xs.push(iv.a + d);
        xs.push(iv.b - d);
    }
    let fill = 401 - 2 * ds.len();
    for i in 0..fill {
        xs.push(iv.a + iv.length() * (i as f64 + 1.0) / (fill as f64 + 1.0));
    }
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xs
}

fn load_problem(path: &std::path::Path) -> Result<skewfrac::solver::ProblemSpec, ExitCode> {
    problem::parse_problem_file(path).map_err(|e| {
        eprintln!("{e}");
        match e {
            problem::ProblemFileError::Condition(_) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    })
}

fn run_solve(
    problem: &std::path::Path,
    n: usize,
    seed: u64,
    output: &OutputArgs,
) -> Result<bool, ExitCode> {
    let spec = load_problem(problem)?;
    let sol = solve_weak(&spec, n).map_err(|e| {
        eprintln!("solver failure: {e}");
        ExitCode::from(4)
    })?;
    let numeric = |e: skewfrac::solver::SolverError| {
        eprintln!("evaluation failure: {e}");
        ExitCode::from(4)
    };
    let mut table = Vec::with_capacity(401);
    for x in table_points(&sol) {
        table.push(TableRow {
            x,
            u: sol.eval_u(x),
            du: sol.eval_du(x),
            dmu_left: sol.frac_deriv(Side::Left, spec.mu, x).map_err(numeric)?,
            dmu_right: sol.frac_deriv(Side::Right, spec.mu, x).map_err(numeric)?,
        });
    }
    let out = SolveOutput {
        command: "solve".into(),
        interval: (spec.interval.a, spec.interval.b),
        mu: spec.mu,
        alpha: spec.alpha,
        beta: spec.beta,
        n,
        seed,
        coefficients: sol.coefficients.clone(),
        residual_norm: sol.residual_norm,
        energy_seminorm: sol.hs_seminorm().map_err(numeric)?,
        table,
    };
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&out).map_err(|e| {
            eprintln!("{e}");
            ExitCode::from(4)
        })?,
        Format::Csv => {
            let mut s = String::from("x,u,du,dmu_left,dmu_right\n");
            for row in &out.table {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.x, row.u, row.du, row.dmu_left, row.dmu_right
                ));
            }
            s.trim_end().to_string()
        }
    };
    write_output(output, text).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(4)
    })?;
    Ok(true)
}

fn boundary_fits_live(sol: &GalerkinSolution) -> Result<Vec<NamedFit>, ExitCode> {
    let iv = sol.interval();
    let mu = sol.problem.mu;
    let mut fits = Vec::new();
    let mut push =
        |quantity: &str, endpoint: Side, f: &dyn Fn(f64) -> f64| -> Result<(), ExitCode> {
            let fit = analysis::fit_boundary_exponent(f, endpoint, iv).map_err(|e| {
                eprintln!("fit failure for {quantity}: {e}");
                ExitCode::from(4)
            })?;
            fits.push(NamedFit {
                quantity: quantity.into(),
                endpoint: match endpoint {
                    Side::Left => "left".into(),
                    Side::Right => "right".into(),
                },
                estimate: fit.estimate,
                stderr: fit.stderr,
                class: EndpointBehavior::from_fit(&fit),
            });
            Ok(())
        };
    push("u", Side::Left, &|x| sol.eval_u(x))?;
    push("u", Side::Right, &|x| sol.eval_u(x))?;
    push("du", Side::Left, &|x| sol.eval_du(x))?;
    push("du", Side::Right, &|x| sol.eval_du(x))?;
    push("dmu_left", Side::Left, &|x| {
        sol.frac_deriv(Side::Left, mu, x).unwrap_or(f64::NAN)
    })?;
    push("dmu_right", Side::Right, &|x| {
        sol.frac_deriv(Side::Right, mu, x).unwrap_or(f64::NAN)
    })?;
    Ok(fits)
}

fn boundary_fits_from_table(table_path: &PathBuf) -> Result<BoundaryOutput, ExitCode> {
    let text = std::fs::read_to_string(table_path).map_err(|e| {
        eprintln!("cannot read table: {e}");
        ExitCode::from(2)
    })?;
    let solved: SolveOutput = serde_json::from_str(&text).map_err(|e| {
        eprintln!("cannot parse table JSON: {e}");
        ExitCode::from(2)
    })?;
    let iv = skewfrac::fraccalc::Interval::new(solved.interval.0, solved.interval.1).map_err(
        |e| {
            eprintln!("bad interval in table: {e}");
            ExitCode::from(2)
        },
    )?;
    let ds = fit_distances(iv);
    let mut fits = Vec::new();
    let mut fit_quantity = |quantity: &str,
                            endpoint: Side,
                            pick: &dyn Fn(&TableRow) -> f64|
     -> Result<(), ExitCode> {
        let mut pairs = Vec::new();
        for d in &ds {
            let target = match endpoint {
                Side::Left => iv.a + d,
                Side::Right => iv.b - d,
            };
            let row = solved.table.iter().find(|r| r.x == target).ok_or_else(|| {
                eprintln!("table is missing the canonical fit point x = {target:e}");
                ExitCode::from(2)
            })?;
            pairs.push((*d, pick(row)));
        }
        let fit = fit_exponent_from_samples(endpoint, &pairs).map_err(|e| {
            eprintln!("fit failure for {quantity}: {e}");
            ExitCode::from(4)
        })?;
        fits.push(NamedFit {
            quantity: quantity.into(),
            endpoint: match endpoint {
                Side::Left => "left".into(),
                Side::Right => "right".into(),
            },
            estimate: fit.estimate,
            stderr: fit.stderr,
            class: EndpointBehavior::from_fit(&fit),
        });
        Ok(())
    };
    fit_quantity("u", Side::Left, &|r| r.u)?;
    fit_quantity("u", Side::Right, &|r| r.u)?;
    fit_quantity("du", Side::Left, &|r| r.du)?;
    fit_quantity("du", Side::Right, &|r| r.du)?;
    fit_quantity("dmu_left", Side::Left, &|r| r.dmu_left)?;
    fit_quantity("dmu_right", Side::Right, &|r| r.dmu_right)?;
    Ok(BoundaryOutput { command: "analyze-boundary".into(), interval: solved.interval, fits })
}

fn fits_to_csv(out: &BoundaryOutput) -> String {
    let mut s = String::from("quantity,endpoint,estimate,stderr,class\n");
    for f in &out.fits {
        s.push_str(&format!(
            "{},{},{},{},{:?}\n",
            f.quantity, f.endpoint, f.estimate, f.stderr, f.class.class
        ));
    }
    s.trim_end().to_string()
}

fn run() -> Result<bool, ExitCode> {
    let cli = Cli::parse();
    let as_io = |e: String| {
        eprintln!("{e}");
        ExitCode::from(4)
    };
    match cli.command {
        Command::Solve { problem, n, output, seed } => run_solve(&problem, n, seed, &output),
        Command::VerifyAbel { draws, sweep, output } => {
            let records = suites::abel_suite(sweep.seed, draws);
            emit_records("verify-abel", sweep.seed, records, &sweep, &output).map_err(as_io)
        }
        Command::VerifySingular { sweep, output } => {
            let records = suites::singular_suite(sweep.seed);
            emit_records("verify-singular", sweep.seed, records, &sweep, &output).map_err(as_io)
        }
        Command::VerifySpecfun { draws, sweep, output } => {
            let records = suites::specfun_suite(sweep.seed, draws);
            emit_records("verify-specfun", sweep.seed, records, &sweep, &output).map_err(as_io)
        }
        Command::AnalyzeBoundary { problem, table, n, output } => {
            let out = if let Some(table) = table {
                boundary_fits_from_table(&table)?
            } else if let Some(problem) = problem {
                let spec = load_problem(&problem)?;
                let sol = solve_weak(&spec, n).map_err(|e| {
                    eprintln!("solver failure: {e}");
                    ExitCode::from(4)
                })?;
                BoundaryOutput {
                    command: "analyze-boundary".into(),
                    interval: (spec.interval.a, spec.interval.b),
                    fits: boundary_fits_live(&sol)?,
                }
            } else {
                eprintln!("analyze-boundary needs --problem or --table");
                return Err(ExitCode::from(2));
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&out).map_err(|e| {
                    eprintln!("{e}");
                    ExitCode::from(4)
                })?,
                Format::Csv => fits_to_csv(&out),
            };
            write_output(&output, text).map_err(as_io)?;
            Ok(true)
        }
        Command::CheckConditions { problem, output } => {
            let text = std::fs::read_to_string(&problem).map_err(|e| {
                eprintln!("cannot read problem file: {e}");
                ExitCode::from(2)
            })?;
            let spec = problem::parse_problem_text_unchecked(&text).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(2)
            })?;
            let report = check_wellposedness(&spec);
            let body = serde_json::to_string_pretty(&report).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(4)
            })?;
            write_output(&output, body).map_err(as_io)?;
            if !report.pass {
                eprintln!(
                    "well-posedness condition violated: {}",
                    report.failing_condition.unwrap_or_default()
                );
                return Err(ExitCode::from(3));
            }
            Ok(true)
        }
        Command::Counterexample { mu, t, output } => {
            let report = counterexample_check(mu, t).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(4)
            })?;
            let ok = report.divergent_exponent && report.diverges;
            let text = serde_json::to_string_pretty(&report).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(4)
            })?;
            write_output(&output, text).map_err(as_io)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(code) => code,
    }
}
