//! Command-line interface to the library.
//!
//! Points and tilts are given as comma-separated structured coordinates:
//! the diagonal entries `d1..dr` first, then block coefficients in the
//! structure's `(l,k)` order (the CSV header of `sample` lists the exact
//! layout). The literals `I` and `-I` abbreviate the identity and its
//! negative. Indices shown to the user are 1-based.
//!
//! Exit codes: 0 on success, 1 when a mathematical or statistical check
//! fails, 2 on bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use homocone::cone::{ConeStructure, StructuredMatrix};
use homocone::error::{Error, Result};
use homocone::nef::{characterization_audit, NEFDescriptor};
use homocone::power::{
    bridge_pairs, canonical_flip_coeffs, dual_power, flip_dual_average, flip_midpoint,
    gindikin_stratum, riesz_laplace, sign_matrix, support_flags,
};
use homocone::sampler::{sample_singular, sample_wishart_with, BartlettConvention};
use homocone::triangular::{cholesky_structured, dual_decompose, TriangularElement};
use homocone::zoo;

#[derive(Parser)]
#[command(
    name = "homocone",
    version,
    about = "Homogeneous cones as structured matrix spaces: decompositions, power functions, \
             sampling, and the exponential-family invariance audit"
)]
struct Cli {
    /// Seed for all randomized commands.
    #[arg(long, global = true, env = "HOMOCONE_SEED", default_value_t = 42)]
    seed: u64,

    /// Worker threads for sampling (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the closure axioms of a structure (zoo name or JSON file).
    Validate {
        /// Structure name (sym<r>, lorentz<m>, vinberg, vinberg-mirrored,
        /// '+'-sums) or a path to a structure JSON file.
        structure: String,
        /// Print the validation report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Factor a point of the open cone through the group: x = ρ(T) I.
    Decompose {
        structure: String,
        /// Structured coordinates of the point, or I / -I.
        #[arg(long)]
        point: String,
    },
    /// Factor a point of the open dual cone: ξ = ρ*(T) I.
    DualDecompose {
        structure: String,
        /// Structured coordinates of the point, or I / -I.
        #[arg(long)]
        point: String,
    },
    /// Evaluate the dual power function Δ*_s(ξ).
    Power {
        structure: String,
        /// Comma-separated exponent vector s.
        #[arg(long)]
        s: String,
        /// Structured coordinates of ξ, or I.
        #[arg(long)]
        xi: String,
    },
    /// Locate an exponent vector in the Gindikin set.
    Gindikin {
        structure: String,
        /// Comma-separated exponent vector s.
        #[arg(long)]
        s: String,
    },
    /// Draw samples from the Wishart / Riesz distribution.
    Sample {
        structure: String,
        /// Comma-separated exponent vector s (must lie in the Gindikin set).
        #[arg(long)]
        s: String,
        /// Tilt θ in the interior of −Ω*: structured coordinates or -I.
        #[arg(long, default_value = "-I")]
        theta: String,
        /// Number of samples.
        #[arg(short, long, default_value_t = 1000)]
        n: usize,
        /// Use the boundary-orbit sampler (required for non-regular strata).
        #[arg(long)]
        singular: bool,
        /// Use the (wrong) column-sums shape convention, for comparison runs.
        #[arg(long)]
        column_sums: bool,
        /// Write samples to this CSV file (a .meta.json sidecar is added).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare empirical Laplace probes of a sampled batch to the closed form.
    LaplaceCheck {
        structure: String,
        #[arg(long)]
        s: String,
        /// Tilt θ: structured coordinates or -I.
        #[arg(long, default_value = "-I")]
        theta: String,
        #[arg(short, long, default_value_t = 20000)]
        n: usize,
        /// Probe scales: each τ tests η = −τ·I.
        #[arg(long, default_value = "0.25,0.5,1.0")]
        taus: String,
    },
    /// Run the invariance-characterization audit on a family.
    Audit {
        structure: String,
        #[arg(long)]
        s: String,
        /// Shift θ₀ of the generating measure (structured coordinates).
        #[arg(long)]
        theta0: Option<String>,
        /// Audit the reflected family.
        #[arg(long)]
        reflected: bool,
        /// Monte Carlo sample count for the pushforward step.
        #[arg(short, long, default_value_t = 20000)]
        n: usize,
        /// Print the full report as JSON instead of step lines.
        #[arg(long)]
        json: bool,
    },
    /// Demonstrate the orientation flip across a bridge block.
    FlipDemo {
        structure: String,
        /// Comma-separated signs ±1, one per partition block.
        #[arg(long)]
        eps: String,
        /// Row index of the bridge block (1-based; default: first bridge).
        #[arg(long)]
        l: Option<usize>,
        /// Column index of the bridge block (1-based).
        #[arg(long)]
        k: Option<usize>,
    },
}

/// Restore the default SIGPIPE disposition so `homocone ... | head` dies
/// quietly like other Unix tools instead of panicking on a closed pipe.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: could not configure {t} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_)
        | Error::Json(_)
        | Error::InvalidInput(_)
        | Error::InvalidPartition(_)
        | Error::InvalidBasis { .. }
        | Error::DimensionMismatch { .. }
        | Error::StructureMismatch
        | Error::EmptyBlock { .. }
        | Error::PreconditionViolation(_)
        | Error::NotInGindikinSet
        | Error::NonRegularStratum
        | Error::OutOfDomain
        | Error::DegenerateScale(_) => 2,
        _ => 1,
    }
}

fn load_structure(spec: &str) -> Result<Arc<ConeStructure>> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        ConeStructure::load_json(path)
    } else {
        zoo::by_name(spec)
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad number {t:?}: {e}")))
        })
        .collect()
}

fn parse_point(cone: &Arc<ConeStructure>, text: &str) -> Result<StructuredMatrix> {
    match text.trim() {
        "I" => Ok(cone.identity()),
        "-I" => Ok((&cone.identity()).scale(-1.0)),
        other => cone.point_from_coords(&parse_floats(other)?),
    }
}

fn parse_signs(text: &str) -> Result<Vec<i8>> {
    text.split(',')
        .map(|t| match t.trim() {
            "1" | "+1" => Ok(1),
            "-1" => Ok(-1),
            other => Err(Error::InvalidInput(format!("sign must be ±1, got {other:?}"))),
        })
        .collect()
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ")
}

fn print_element(cone: &ConeStructure, t: &TriangularElement) {
    println!("diagonal: [{}]", join_floats(t.tdiag()));
    for (space, coeffs) in cone.blocks().iter().zip(t.tblocks()) {
        println!(
            "block ({}, {}): [{}]",
            space.l() + 1,
            space.k() + 1,
            join_floats(coeffs)
        );
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { structure, json } => {
            let cone = load_structure(&structure)?;
            let report = cone.validate_axioms();
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "structure {}: rank {}, matrix size {}, dimension {}",
                    cone.name(),
                    cone.rank(),
                    cone.size(),
                    cone.dim()
                );
                for b in cone.blocks() {
                    println!("  block ({}, {}): dimension {}", b.l() + 1, b.k() + 1, b.dim());
                }
                println!(
                    "  irreducible: {}",
                    if cone.is_irreducible() { "yes" } else { "no" }
                );
                println!("{report}");
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Decompose { structure, point } => {
            let cone = load_structure(&structure)?;
            let x = parse_point(&cone, &point)?;
            let t = cholesky_structured(&x)?;
            print_element(&cone, &t);
            Ok(0)
        }
        Command::DualDecompose { structure, point } => {
            let cone = load_structure(&structure)?;
            let xi = parse_point(&cone, &point)?;
            let t = dual_decompose(&xi)?;
            print_element(&cone, &t);
            Ok(0)
        }
        Command::Power { structure, s, xi } => {
            let cone = load_structure(&structure)?;
            let s = parse_floats(&s)?;
            let xi = parse_point(&cone, &xi)?;
            let value = dual_power(&s, &xi)?;
            println!("{value}");
            Ok(0)
        }
        Command::Gindikin { structure, s } => {
            let cone = load_structure(&structure)?;
            let s = parse_floats(&s)?;
            if s.len() != cone.rank() {
                return Err(Error::DimensionMismatch { expected: cone.rank(), got: s.len() });
            }
            match gindikin_stratum(&cone, &s) {
                None => {
                    println!("s = [{}] is NOT in the Gindikin set of {}", join_floats(&s), cone.name());
                    Ok(1)
                }
                Some(stratum) => {
                    println!("s = [{}] lies in the Gindikin set of {}", join_floats(&s), cone.name());
                    println!(
                        "stratum: [{}]",
                        stratum.eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
                    );
                    let thresholds: Vec<f64> =
                        stratum.p.iter().map(|p| p.max(0.0) / 2.0).collect();
                    println!("thresholds p(eps)/2: [{}]", join_floats(&thresholds));
                    let flags = support_flags(&cone, &s)?;
                    if flags.regular {
                        println!("regular stratum: measures are absolutely continuous");
                    } else {
                        println!(
                            "boundary stratum: zero diagonals {:?}, zero blocks {:?}",
                            flags.zero_diag.iter().map(|k| k + 1).collect::<Vec<_>>(),
                            flags
                                .zero_blocks
                                .iter()
                                .map(|&(l, k)| (l + 1, k + 1))
                                .collect::<Vec<_>>()
                        );
                    }
                    Ok(0)
                }
            }
        }
        Command::Sample { structure, s, theta, n, singular, column_sums, output } => {
            let cone = load_structure(&structure)?;
            let s = parse_floats(&s)?;
            let theta = parse_point(&cone, &theta)?;
            let batch = if singular {
                if column_sums {
                    return Err(Error::InvalidInput(
                        "the boundary-orbit sampler only supports the row-sums convention".into(),
                    ));
                }
                sample_singular(&s, &theta, n, cli.seed)?
            } else {
                let convention = if column_sums {
                    BartlettConvention::ColumnSums
                } else {
                    BartlettConvention::RowSums
                };
                sample_wishart_with(&s, &theta, n, cli.seed, convention)?
            };
            println!(
                "drew {} samples on {} (seed {}, shape convention {})",
                batch.len(),
                cone.name(),
                batch.seed(),
                if column_sums { "column-sums" } else { "row-sums" }
            );
            match output {
                Some(path) => {
                    batch.write_csv(&path)?;
                    println!(
                        "wrote {} and {}",
                        path.display(),
                        path.with_extension("meta.json").display()
                    );
                }
                None => {
                    let m = batch.empirical_moments();
                    for (name, mean) in cone.coordinate_names().iter().zip(&m.mean) {
                        println!("  mean {name} = {mean:.6}");
                    }
                }
            }
            Ok(0)
        }
        Command::LaplaceCheck { structure, s, theta, n, taus } => {
            let cone = load_structure(&structure)?;
            let s = parse_floats(&s)?;
            let theta = parse_point(&cone, &theta)?;
            let taus = parse_floats(&taus)?;
            let batch = sample_singular(&s, &theta, n, cli.seed)?;
            let base = riesz_laplace(&s, &theta)?;
            let mut all_ok = true;
            for &tau in &taus {
                if !(tau > 0.0) {
                    return Err(Error::InvalidInput(format!("probe scale must be positive, got {tau}")));
                }
                let eta = (&cone.identity()).scale(-tau);
                let expected = riesz_laplace(&s, &(&theta + &eta))? / base;
                let est = batch.empirical_laplace(&eta);
                let ok = (est.estimate - expected).abs() <= 3.0 * est.std_error + 1e-12;
                all_ok &= ok;
                println!(
                    "tau {tau}: estimate {:.6} ± {:.6}, closed form {expected:.6} -> {}",
                    est.estimate,
                    est.std_error,
                    if ok { "PASS" } else { "FAIL" }
                );
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Audit { structure, s, theta0, reflected, n, json } => {
            let cone = load_structure(&structure)?;
            let s = parse_floats(&s)?;
            let theta0 = match theta0 {
                Some(text) => parse_point(&cone, &text)?,
                None => cone.zero(),
            };
            let desc = NEFDescriptor::new(&cone, s, theta0, 0.0, reflected)?;
            let report = characterization_audit(&desc, n, cli.seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "audit of {} with s = [{}]{} (n = {}, seed = {})",
                    report.cone,
                    join_floats(&report.s),
                    if report.reflected { ", reflected" } else { "" },
                    report.n,
                    report.seed
                );
                for step in &report.steps {
                    println!(
                        "[audit] {}: {}",
                        step.name,
                        if step.pass { "PASS" } else { "FAIL" }
                    );
                    if !step.pass {
                        println!("        {}", step.metrics);
                    }
                }
                println!("[audit] overall: {}", if report.pass { "PASS" } else { "FAIL" });
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::FlipDemo { structure, eps, l, k } => {
            let cone = load_structure(&structure)?;
            let eps = parse_signs(&eps)?;
            if eps.len() != cone.rank() {
                return Err(Error::DimensionMismatch { expected: cone.rank(), got: eps.len() });
            }
            let pair = match (l, k) {
                (Some(l), Some(k)) => {
                    if l == 0 || k == 0 {
                        return Err(Error::InvalidInput("indices are 1-based".into()));
                    }
                    Some((l - 1, k - 1))
                }
                (None, None) => bridge_pairs(&cone, &eps).first().copied(),
                _ => {
                    return Err(Error::InvalidInput(
                        "give both --l and --k, or neither".into(),
                    ))
                }
            };
            let Some((bl, bk)) = pair else {
                println!(
                    "no bridge: no block (l, k) with opposite signs exists for eps = {eps:?} \
                     on {}",
                    cone.name()
                );
                return Ok(1);
            };
            let v = canonical_flip_coeffs(&cone, bl, bk)?;
            println!(
                "flip across block ({}, {}) with vector [{}]",
                bl + 1,
                bk + 1,
                join_floats(&v)
            );
            let e = sign_matrix(&cone, &eps)?;
            let (avg, predicted) = flip_dual_average(&cone, &eps, bl, bk, &v)?;
            println!("orientation E_eps:\n{}", e.embed());
            println!("averaged adjoint image:\n{}", avg.embed());
            println!("predicted orientation: {predicted:?}");
            let expected = sign_matrix(&cone, &predicted)?;
            let err = avg.max_abs_diff(&expected);
            println!("identity residual: {err:.3e}");

            let x = cone.identity();
            let y = flip_midpoint(&x, bl, bk, &v)?;
            println!(
                "primal midpoint moves d{} of the identity from 1 to {}",
                bl + 1,
                y.diag()[bl]
            );
            Ok(if err <= 1e-12 { 0 } else { 1 })
        }
    }
}
