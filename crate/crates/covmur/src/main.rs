//! Command-line interface: validation, covariantisation, distances, region
//! sweeps, dilation, and the self-verification suite.
//!
//! Exit codes: 0 on success, 1 on validation or mathematical failure, 2 on
//! usage errors. All outputs are deterministic functions of the inputs and
//! the `--seed` flag (default 0): rerunning a command byte-reproduces its
//! files and stdout.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use covmur::fourier::fourier_boundary_sweep;
use covmur::io::{
    distance_report_json, emit_boundary, load_observable, load_triple,
    parse_observable_structural, save_observable, verify_primal_report, BoundaryFormat,
    RegionBoundary, RunConfig, SCHEMA_VERSION,
};
use covmur::metrics::{d_p_exact_infty, d_p_exact_two_outcome, d_p_heuristic, PNorm};
use covmur::observables::Observable;
use covmur::pauli::boundary_sweep;
use covmur::verify::run_verification_suite;
use covmur::{tol, Result};

#[derive(Parser)]
#[command(
    name = "covmur",
    version,
    about = "Covariantisation of finite-outcome quantum observables and exact \
             measurement-uncertainty regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an observable document and print a defect report.
    Validate {
        /// Observable JSON file.
        file: PathBuf,
        /// Tolerance for positivity and normalisation defects.
        #[arg(long, default_value_t = tol::DEFAULT_VALIDATE, value_parser = parse_finite)]
        tol: f64,
    },
    /// Group-average an observable into its covariant version.
    Covariantise {
        /// Covariance-triple JSON file (group, action, representation).
        #[arg(long)]
        triple: PathBuf,
        /// Observable JSON file.
        observable: PathBuf,
        /// Output path for the covariantised observable.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Test whether an observable is covariant for a triple.
    CheckCovariance {
        /// Covariance-triple JSON file.
        #[arg(long)]
        triple: PathBuf,
        /// Observable JSON file.
        observable: PathBuf,
        /// Covariance defect tolerance.
        #[arg(long, default_value_t = tol::REPRESENTATION, value_parser = parse_finite)]
        tol: f64,
    },
    /// Distance between two observables sharing an outcome set.
    Distance {
        /// Error exponent: 1, 2, any finite p ≥ 1, or "inf".
        #[arg(long, value_parser = parse_pnorm)]
        p: PNorm,
        /// First observable JSON file.
        a: PathBuf,
        /// Second observable JSON file.
        b: PathBuf,
        /// Random restarts for the heuristic evaluator (used only when no
        /// exact evaluator applies).
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Ascent iterations per restart.
        #[arg(long, default_value_t = 400)]
        iters: usize,
        /// RNG seed for the heuristic evaluator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep an uncertainty-region boundary.
    Region {
        #[command(subcommand)]
        family: RegionCommand,
    },
    /// Move a joint along its error-dilation path to a requested error.
    Dilate {
        /// Joint observable JSON file (product outcome set).
        #[arg(long)]
        joint: PathBuf,
        /// Axis whose margin error is dilated.
        #[arg(long)]
        axis: usize,
        /// Requested error value.
        #[arg(long, value_parser = parse_finite)]
        target: f64,
        /// Error exponent.
        #[arg(long, default_value = "inf", value_parser = parse_pnorm)]
        p: PNorm,
        /// Bisection tolerance on the achieved error.
        #[arg(long, default_value_t = tol::DILATION_DEFAULT, value_parser = parse_finite)]
        tol: f64,
        /// Target observable JSON file; defaults to the joint's own margin
        /// on the chosen axis.
        target_observable: Option<PathBuf>,
        /// Output path for the dilated joint.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the self-verification suite and print its report.
    Verify {
        /// Module scope, or "all".
        #[arg(long, default_value = "all")]
        scope: String,
        /// Corrupt the dual boundary by this offset; the strong-duality
        /// check must then fail (suite self-test).
        #[arg(long, default_value_t = 0.0, value_parser = parse_finite)]
        inject_dual_offset: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RegionCommand {
    /// Three outcomes of a qubit: sweep the covariant sphere boundary.
    Pauli {
        /// Error exponent: 1, 2, any finite p ≥ 1, or "inf".
        #[arg(long, value_parser = parse_pnorm)]
        p: PNorm,
        /// Number of swept grid points (six axis landmarks are always
        /// included in addition).
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Seed recorded in the output header (the sweep is
        /// deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: BoundaryOut,
    },
    /// Cyclic-translation pair in dimension n: sweep the exact lower
    /// boundary, or run the Monte-Carlo primal verification.
    Fourier {
        /// Hilbert-space dimension n ≥ 2.
        #[arg(long)]
        dim: usize,
        /// Number of d_a grid points.
        #[arg(long, default_value_t = 33)]
        grid: usize,
        /// RNG seed for the primal sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify the dual boundary against sampled primal-feasible
        /// states instead of emitting the boundary table.
        #[arg(long)]
        verify_primal: bool,
        /// Sampler seeds per grid point in --verify-primal mode.
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        #[command(flatten)]
        out: BoundaryOut,
    },
}

#[derive(Args)]
struct BoundaryOut {
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: BoundaryFormat,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_pnorm(s: &str) -> std::result::Result<PNorm, String> {
    s.parse::<PNorm>().map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<BoundaryFormat, String> {
    s.parse::<BoundaryFormat>().map_err(|e| e.to_string())
}

fn parse_finite(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !x.is_finite() {
        return Err(format!("value must be finite, got {x}"));
    }
    Ok(x)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Print to stdout or write to a file.
fn deliver(body: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => Ok(std::fs::write(path, body)?),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate { file, tol } => {
            let obs = parse_observable_structural(&std::fs::read_to_string(&file)?)?;
            let report = obs.validate(tol);
            let doc = serde_json::json!({
                "schema": SCHEMA_VERSION,
                "file": file.display().to_string(),
                "dim": obs.dim(),
                "outcome_count": obs.outcome_count(),
                "positivity_defect": report.positivity_defect(),
                "normalisation_defect": report.normalisation_defect,
                "tolerance": report.tolerance,
                "passed": report.passes(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report"));
            Ok(report.passes())
        }
        Command::Covariantise {
            triple,
            observable,
            output,
        } => {
            let triple = load_triple(&triple)?;
            let obs = load_observable(&observable)?;
            let averaged = triple.covariantise(&obs)?;
            save_observable(&averaged, &output)?;
            Ok(true)
        }
        Command::CheckCovariance {
            triple,
            observable,
            tol,
        } => {
            let triple = load_triple(&triple)?;
            let obs = load_observable(&observable)?;
            let (covariant, defect) = triple.check_covariance(&obs, tol)?;
            let doc = serde_json::json!({
                "schema": SCHEMA_VERSION,
                "covariant": covariant,
                "defect": defect,
                "tolerance": tol,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report"));
            Ok(covariant)
        }
        Command::Distance {
            p,
            a,
            b,
            restarts,
            iters,
            seed,
            output,
        } => {
            let ea = load_observable(&a)?;
            let eb = load_observable(&b)?;
            let result = best_distance(&ea, &eb, p, restarts, iters, seed)?;
            deliver(&distance_report_json(&result), output.as_ref())?;
            Ok(true)
        }
        Command::Region { family } => match family {
            RegionCommand::Pauli {
                p,
                samples,
                seed,
                out,
            } => {
                let sweep = boundary_sweep(p, samples)?;
                let boundary = RegionBoundary::from_pauli(&sweep, seed);
                write_boundary(&boundary, &out)?;
                Ok(true)
            }
            RegionCommand::Fourier {
                dim,
                grid,
                seed,
                verify_primal,
                seeds,
                out,
            } => {
                if verify_primal {
                    let mut config = RunConfig::new("region fourier --verify-primal");
                    config.dim = Some(dim);
                    config.grid = Some(grid);
                    config.samples = Some(seeds);
                    config.seed = seed;
                    let report = verify_primal_report(dim, grid, seeds, seed, config)?;
                    let body =
                        serde_json::to_string_pretty(&report).expect("report serialises");
                    deliver(&body, out.output.as_ref())?;
                    Ok(report.all_ok)
                } else {
                    let sweep = fourier_boundary_sweep(dim, grid)?;
                    let boundary = RegionBoundary::from_fourier(&sweep, seed);
                    write_boundary(&boundary, &out)?;
                    Ok(true)
                }
            }
        },
        Command::Dilate {
            joint,
            axis,
            target,
            p,
            tol,
            target_observable,
            output,
        } => {
            let joint = load_observable(&joint)?;
            let target_obs = match target_observable {
                Some(path) => load_observable(&path)?,
                None => joint.margin(axis)?,
            };
            let outcome =
                covmur::dilation::dilate_to_error(&target_obs, &joint, axis, target, p, tol)?;
            save_observable(&outcome.joint, &output)?;
            let doc = serde_json::json!({
                "schema": SCHEMA_VERSION,
                "lambda": outcome.lambda,
                "achieved": outcome.achieved,
                "requested": target,
                "axis": axis,
                "p": p,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report"));
            Ok(true)
        }
        Command::Verify {
            scope,
            inject_dual_offset,
            output,
        } => {
            let report = run_verification_suite(&scope, inject_dual_offset)?;
            deliver(&report.to_json(), output.as_ref())?;
            Ok(report.passed)
        }
    }
}

/// Dispatch to the strongest applicable evaluator: exact at p = ∞, the
/// closed form for two-outcome pairs, heuristic ascent otherwise.
fn best_distance(
    e: &Observable,
    f: &Observable,
    p: PNorm,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<covmur::metrics::DistanceResult> {
    match p {
        PNorm::Infinity => d_p_exact_infty(e, f),
        PNorm::Finite(_) if e.outcome_count() == 2 => d_p_exact_two_outcome(e, f, p),
        PNorm::Finite(_) => d_p_heuristic(e, f, p, restarts, iters, seed),
    }
}

fn write_boundary(boundary: &RegionBoundary, out: &BoundaryOut) -> Result<()> {
    match &out.output {
        Some(path) => emit_boundary(boundary, path, out.format),
        None => {
            let body = match out.format {
                BoundaryFormat::Csv => boundary.to_csv(),
                BoundaryFormat::Json => boundary.to_json(),
            };
            print!("{body}");
            if matches!(out.format, BoundaryFormat::Json) {
                println!();
            }
            Ok(())
        }
    }
}
