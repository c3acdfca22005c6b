//! The `josserman` command line: tensor checks, Jacobi operators, grid
//! scans, witness certificates and duality checks.
//!
//! Exit codes: 0 success, 1 an expectation failed, 2 invalid input.

pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::curvature::{einstein_constant, AlgebraicCurvatureTensor, Signature};
use crate::grassmann::{
    coordinate_subspace, mix_seed, sample_with, witness_pair, AdmissiblePair, GrassmannError,
    SamplingStrategy, Subspace, DEFAULT_HEIGHT, DEFAULT_MAX_TRIES,
};
use crate::jacobi::{check_trace_identity, jacobi_subspace, JacobiError};
use crate::linalg::{jordan_fingerprint_with_char_poly, parse_rational, rank_sequence, Rational};
use crate::osserman::{
    duality_check, expected_grid, grid_scan, test_type, GridReport, MarkGrid, Mode, OssermanError,
    ScanConfig, VerdictKind, DEFAULT_COORDINATE_CAP, DEFAULT_SAMPLES,
};
use report::{render_grid, Format};
use spec::{parse_tensor_spec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "josserman",
    version,
    about = "Exact Jordan Osserman checks for algebraic curvature tensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate the curvature symmetries and report the Einstein constant.
    Check {
        /// JSON spec, path to a JSON file, or a shorthand like phi-a(4,4,a=1).
        spec: String,
    },
    /// Jacobi operator of a subspace with its characteristic polynomial,
    /// rank sequence and Jordan fingerprint.
    Jacobi {
        spec: String,
        /// Coordinate labels like "t1,t2,s1" or a JSON basis matrix.
        #[arg(long)]
        subspace: String,
    },
    /// Test every admissible type and draw the grid.
    Scan {
        spec: String,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Compare the Jordan grid with the picture predicted for R_Phi_a.
        #[arg(long = "expect-theorem24")]
        expect_theorem24: bool,
        /// Draw with *, o and - instead of the Unicode marks.
        #[arg(long)]
        ascii: bool,
    },
    /// Two subspaces of one type with different Jordan fingerprints.
    Witness {
        spec: String,
        /// The type as "r,s".
        #[arg(long = "type", value_parser = parse_type)]
        target: (usize, usize),
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Check J(sigma) + J(sigma^perp) = c Id on sampled subspaces.
    Duality {
        spec: String,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Debug, Args)]
struct Sampling {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_HEIGHT)]
    height: u32,
    #[arg(long, value_enum, default_value = "auto")]
    sampler: Sampler,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sampler {
    Box,
    Isometry,
    Auto,
}

impl Sampling {
    fn config(&self) -> ScanConfig {
        ScanConfig {
            samples: self.samples,
            seed: self.seed,
            height: self.height,
            max_tries: DEFAULT_MAX_TRIES,
            coordinate_cap: DEFAULT_COORDINATE_CAP,
            strategy: match self.sampler {
                Sampler::Box => SamplingStrategy::Box,
                Sampler::Isometry => SamplingStrategy::Isometry,
                Sampler::Auto => SamplingStrategy::Auto,
            },
        }
    }
}

fn parse_type(text: &str) -> Result<(usize, usize), String> {
    let (r, s) = text.split_once(',').ok_or("expected r,s")?;
    let r = r.trim().parse().map_err(|e| format!("bad r: {e}"))?;
    let s = s.trim().parse().map_err(|e| format!("bad s: {e}"))?;
    Ok((r, s))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("bad subspace descriptor {text:?}: {reason}")]
    Descriptor { text: String, reason: String },
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Osserman(#[from] OssermanError),
    #[error("{0}")]
    Usage(String),
}

type Outcome = Result<i32, CliError>;

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check { spec } => check(spec, out),
        Command::Jacobi { spec, subspace } => jacobi(spec, subspace, out),
        Command::Scan {
            spec,
            sampling,
            format,
            expect_theorem24,
            ascii,
        } => scan(
            spec,
            &sampling.config(),
            *format,
            *expect_theorem24,
            *ascii,
            out,
        ),
        Command::Witness {
            spec,
            target,
            sampling,
        } => witness(spec, *target, &sampling.config(), out),
        Command::Duality { spec, sampling } => duality(spec, &sampling.config(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn load_tensor(arg: &str) -> Result<AlgebraicCurvatureTensor, CliError> {
    let trimmed = arg.trim();
    let text = if trimmed.starts_with('{') || trimmed.contains('(') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(trimmed).map_err(|source| CliError::Io {
            path: trimmed.to_string(),
            source,
        })?
    };
    Ok(parse_tensor_spec(&text)?.build()?)
}

/// `t1,t2,s1` or a JSON matrix whose rows are basis vectors with entries
/// given as integers or rational strings.
fn parse_subspace(sig: Signature, text: &str) -> Result<Subspace, CliError> {
    let bad = |reason: String| CliError::Descriptor {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let rows: Vec<Vec<serde_json::Value>> =
            serde_json::from_str(trimmed).map_err(|e| bad(e.to_string()))?;
        let basis = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => parse_rational(s),
                        serde_json::Value::Number(n) if n.is_i64() => {
                            Ok(Rational::from_integer(n.as_i64().expect("checked").into()))
                        }
                        other => Err(format!(
                            "entry {other} is neither an integer nor a rational string"
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(bad)?;
        return Ok(Subspace::new(sig, basis)?);
    }
    let (mut timelike, mut spacelike) = (vec![], vec![]);
    for label in trimmed.split(',').map(str::trim) {
        let (kind, index) = label.split_at(label.len().min(1));
        let index: usize = index
            .parse()
            .map_err(|_| bad(format!("label {label:?} is not tN or sN")))?;
        match kind {
            "t" => timelike.push(index),
            "s" => spacelike.push(index),
            _ => return Err(bad(format!("label {label:?} is not tN or sN"))),
        }
    }
    Ok(coordinate_subspace(sig, &timelike, &spacelike)?)
}

fn check(spec: &str, out: &mut dyn Write) -> Outcome {
    let r = load_tensor(spec)?;
    let _ = writeln!(out, "tensor: {}", r.description());
    let _ = writeln!(
        out,
        "symmetries: antisymmetry, pair symmetry and the first Bianchi identity hold"
    );
    match einstein_constant(&r) {
        Ok(c) => {
            let _ = writeln!(out, "Einstein: rho = {c} g");
        }
        Err(e) => {
            let _ = writeln!(out, "Einstein: no ({e})");
        }
    }
    match check_trace_identity(&r) {
        Ok(c) => {
            let _ = writeln!(out, "sum of eps_i J(e_i) = {c} Id");
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
        }
    }
    Ok(EXIT_OK)
}

fn jacobi(spec: &str, desc: &str, out: &mut dyn Write) -> Outcome {
    let r = load_tensor(spec)?;
    let sigma = parse_subspace(r.signature(), desc)?;
    let inertia = sigma.signature();
    if inertia.null > 0 {
        return Err(GrassmannError::Degenerate { null: inertia.null }.into());
    }
    let j = jacobi_subspace(&r, &sigma)?.into_matrix();
    let chi = j.char_poly().map_err(|e| CliError::Usage(e.to_string()))?;
    let ranks = rank_sequence(&j).map_err(|e| CliError::Usage(e.to_string()))?;
    let fp =
        jordan_fingerprint_with_char_poly(&j, &chi).map_err(|e| CliError::Usage(e.to_string()))?;
    let ranks: Vec<String> = ranks.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "tensor: {}", r.description());
    let _ = writeln!(
        out,
        "subspace: {sigma}, type ({},{})",
        inertia.neg, inertia.pos
    );
    let _ = write!(out, "J =\n{j}");
    let _ = writeln!(out, "char poly: {}", chi.display_with("λ"));
    let _ = writeln!(out, "rank sequence: {}", ranks.join(", "));
    let _ = writeln!(out, "Jordan fingerprint: {fp}");
    Ok(EXIT_OK)
}

fn scan(
    spec: &str,
    config: &ScanConfig,
    format: Format,
    expect: bool,
    ascii: bool,
    out: &mut dyn Write,
) -> Outcome {
    let r = load_tensor(spec)?;
    let expected = if expect {
        let a = r.phi_a_parameter().ok_or_else(|| {
            CliError::Usage("--expect-theorem24 needs a phi-a tensor".to_string())
        })?;
        Some((a, expected_grid(r.signature(), a)?))
    } else {
        None
    };
    let report = grid_scan(&r, config)?;
    let _ = write!(
        out,
        "{}",
        render_grid(
            &report,
            format,
            ascii,
            expected.as_ref().map(|(a, g)| (*a, g))
        )
    );
    Ok(expected
        .as_ref()
        .map_or(EXIT_OK, |(_, grid)| expectation_code(&report, grid)))
}

fn expectation_code(report: &GridReport, expected: &MarkGrid) -> i32 {
    if report.jordan_marks().differences(expected).is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn witness(
    spec: &str,
    (r_, s_): (usize, usize),
    config: &ScanConfig,
    out: &mut dyn Write,
) -> Outcome {
    let r = load_tensor(spec)?;
    let sig = r.signature();
    let target = AdmissiblePair::new(sig, r_, s_)?;
    let _ = writeln!(out, "tensor: {}", r.description());
    let _ = writeln!(out, "type: {target}");
    if let Some(a) = r.phi_a_parameter() {
        if let Some(w) = witness_pair(sig, a, target)? {
            let rank = |sigma: &Subspace| -> Result<usize, CliError> {
                Ok(jacobi_subspace(&r, sigma)?.matrix().rank())
            };
            let (r1, r2) = (rank(&w.sigma1)?, rank(&w.sigma2)?);
            let _ = writeln!(out, "sigma1: {}, rank J = {r1}", w.sigma1);
            let _ = writeln!(out, "sigma2: {}, rank J = {r2}", w.sigma2);
            let gap = r1.abs_diff(r2);
            let _ = writeln!(out, "rank gap: {gap} (expected {})", w.expected_rank_gap);
            if gap != w.expected_rank_gap {
                return Ok(EXIT_MISMATCH);
            }
            let _ = writeln!(out, "not Jordan Osserman of type {target}");
            return Ok(EXIT_OK);
        }
    }
    let verdict = test_type(&r, target, Mode::Jordan, config)?;
    match (&verdict.kind, &verdict.witness) {
        (VerdictKind::RefutedWithWitness, Some(w)) => {
            let _ = writeln!(
                out,
                "sigma1: {} [{}]: {}",
                w.sigma1, w.origin1, w.fingerprint1
            );
            let _ = writeln!(
                out,
                "sigma2: {} [{}]: {}",
                w.sigma2, w.origin2, w.fingerprint2
            );
            let _ = writeln!(out, "not Jordan Osserman of type {target}");
        }
        _ => {
            let _ = writeln!(out, "no witness: {verdict}");
        }
    }
    Ok(EXIT_OK)
}

fn duality(spec: &str, config: &ScanConfig, out: &mut dyn Write) -> Outcome {
    let r = load_tensor(spec)?;
    let sig = r.signature();
    let c = einstein_constant(&r)
        .map_err(|e| CliError::Usage(format!("duality needs an Einstein tensor; {e}")))?;
    let types = AdmissiblePair::all(sig);
    let _ = writeln!(out, "tensor: {}", r.description());
    let _ = writeln!(out, "checking J(sigma) + J(sigma^perp) = {c} Id");
    let mut failures = 0;
    for index in 0..config.samples {
        let target = types[index % types.len()];
        let seed = mix_seed(config.seed, target.r, target.s, index);
        let sigma = sample_with(
            sig,
            target,
            seed,
            config.height,
            config.max_tries,
            config.strategy,
        )?;
        let outcome = duality_check(&r, &sigma, &c)?;
        if !outcome.passed() {
            failures += 1;
            let _ = write!(
                out,
                "FAILED on {sigma} of type {target}: defect\n{}",
                outcome.defect
            );
        }
    }
    let _ = writeln!(
        out,
        "{} of {} sampled subspaces satisfy the identity",
        config.samples - failures,
        config.samples
    );
    Ok(if failures == 0 {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}
