//! Command-line front end for the `qbrion` binary.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
//! 3 precondition violation. Axes are 1-based on the command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::brion;
use crate::error::QBrionError;
use crate::jackson::{self, FirstOrthantDivisor};
use crate::laurent::LaurentQPoly;
use crate::lattice::{self, Polytope};
use crate::measures;
use crate::qalg::QPolynomial;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "QBRION_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qbrion", version, about = "q-weighted lattice point enumeration on smooth polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Polytope JSON file: {"dim": n, "facets": [{"normal": [..], "offset": a}, ...]}
    pub polytope: PathBuf,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report smoothness, radial symmetry, facet touching and dimension.
    Validate(Input),
    /// Check the lattice-point side against the vertex side at random points.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiply both sides by (q;q)_{|a|} and compare with the Rogers-Szegő polynomial.
        #[arg(long)]
        theorem1: bool,
        /// Write null for elapsed_ms so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Rogers-Szegő polynomial as exponent -> coefficient list.
    Rs(Input),
    /// Lattice-point side as exponent -> truncated series coefficients.
    Lhs {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Exact limit measure as CSV.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        dilate: i64,
    },
    /// Gaussian model and moment convergence table (TSV).
    Asymptotics {
        #[command(flatten)]
        input: Input,
        #[arg(long = "k", value_delimiter = ',', default_value = "25,100,400")]
        k: Vec<i64>,
        #[arg(long, default_value_t = measures::DEFAULT_TOL)]
        tol: f64,
    },
    /// Normalized weight tables of a dilate at numeric q. With --output, a
    /// directory receiving one TSV per q.
    Heatmap {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 30)]
        dilate: i64,
        #[arg(long = "q", value_delimiter = ',', default_value = "0.2,0.6,0.9")]
        q: Vec<f64>,
    },
    /// Jackson derivative recursion, leading term, or ladder identities.
    Jackson {
        /// First-orthant polytope file (not needed with --ladder).
        polytope: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Check the derivative recursion along this axis only (1-based).
        #[arg(long, conflicts_with = "ladder")]
        axis: Option<usize>,
        /// Check the ladder identities for RS_{k,n}, given as n,k.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<i64>>,
    },
}

/// Outcome of a command: text to emit and exit status.
struct Outcome {
    text: String,
    status: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, status: EXIT_OK }
    }
}

fn exit_code(e: &QBrionError) -> i32 {
    match e {
        QBrionError::InvalidInput(_) | QBrionError::Io(_) | QBrionError::Json(_) => EXIT_INVALID,
        QBrionError::Precondition(_)
        | QBrionError::Pole(_)
        | QBrionError::ResampleLimit { .. }
        | QBrionError::NonConvergence { .. } => EXIT_PRECONDITION,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn exponent_key(u: &[i64]) -> String {
    format!("[{}]", u.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn coeff_list(c: &QPolynomial) -> String {
    format!("[{}]", c.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

/// `{"[u]": [c_0, c_1, ...], ...}` in lexicographic exponent order.
pub fn rs_json(rs: &LaurentQPoly<QPolynomial>) -> String {
    let body: Vec<String> = rs.iter().map(|(u, c)| format!("  \"{}\": {}", exponent_key(u), coeff_list(c))).collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

fn load(path: &Path) -> Result<Polytope, QBrionError> {
    Polytope::from_path(path)
}

#[derive(Serialize)]
struct RecursionEntry {
    axis: usize,
    holds: bool,
    derivative: String,
    expected: String,
}

#[derive(Serialize)]
struct LeadingTermEntry {
    maximizer: Vec<i64>,
    derivative: String,
    rs_coefficient: String,
    expected: String,
    matches_expected: bool,
    bare_product: String,
    matches_bare_product: bool,
}

#[derive(Serialize)]
struct JacksonReport {
    derivative_recursion: Vec<RecursionEntry>,
    leading_term: Option<LeadingTermEntry>,
}

#[derive(Serialize)]
struct LadderOutput {
    convention: jackson::Convention,
    reports: Vec<jackson::LadderReport>,
    all_hold: bool,
}

fn poly_text(p: &LaurentQPoly<QPolynomial>) -> String {
    let terms: Vec<String> = p.iter().map(|(u, c)| format!("({c})*x^{}", exponent_key(u))).collect();
    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
}

fn cmd_jackson(polytope: Option<&Path>, axis: Option<usize>, ladder: Option<&[i64]>) -> Result<Outcome, QBrionError> {
    if let Some(nk) = ladder {
        let &[n, k] = nk else {
            return Err(QBrionError::InvalidInput("--ladder takes n,k".into()));
        };
        if n < 1 {
            return Err(QBrionError::InvalidInput(format!("ladder dimension must be >= 1, got {n}")));
        }
        let convention = jackson::discriminate_convention(6)?;
        let mut reports = (0..n as usize)
            .map(|i| jackson::verify_ladder(n as usize, k, i, convention))
            .collect::<Result<Vec<_>, _>>()?;
        for r in &mut reports {
            r.axis += 1;
        }
        let all_hold = reports.iter().all(jackson::LadderReport::all_hold);
        let out = LadderOutput { convention, reports, all_hold };
        return Ok(Outcome { text: to_json(&out), status: if all_hold { EXIT_OK } else { EXIT_MISMATCH } });
    }
    let path = polytope.ok_or_else(|| QBrionError::InvalidInput("a polytope file or --ladder n,k is required".into()))?;
    let d = FirstOrthantDivisor::new(load(path)?)?;
    let axes: Vec<usize> = match axis {
        Some(0) => return Err(QBrionError::InvalidInput("axes are numbered from 1".into())),
        Some(a) if a > d.dim() => {
            return Err(QBrionError::InvalidInput(format!("axis {a} exceeds dimension {}", d.dim())))
        }
        Some(a) => vec![a - 1],
        None => (0..d.dim()).collect(),
    };
    let mut derivative_recursion = Vec::new();
    for i in axes {
        let (lhs, rhs) = jackson::derivative_recursion_sides(&d, i)?;
        derivative_recursion.push(RecursionEntry { axis: i + 1, holds: lhs == rhs, derivative: poly_text(&lhs), expected: poly_text(&rhs) });
    }
    let leading_term = if axis.is_none() {
        let lt = jackson::leading_term_check(&d)?;
        let expected = lt.expected();
        let bare = lt.bare_product();
        Some(LeadingTermEntry {
            maximizer: lt.maximizer.clone(),
            derivative: lt.derivative.to_string(),
            rs_coefficient: lt.rs_coefficient.to_string(),
            matches_expected: lt.derivative == expected,
            expected: expected.to_string(),
            matches_bare_product: lt.derivative == bare,
            bare_product: bare.to_string(),
        })
    } else {
        None
    };
    let ok = derivative_recursion.iter().all(|e| e.holds) && leading_term.as_ref().is_none_or(|l| l.matches_expected);
    let report = JacksonReport { derivative_recursion, leading_term };
    Ok(Outcome { text: to_json(&report), status: if ok { EXIT_OK } else { EXIT_MISMATCH } })
}

fn heatmap_file_name(k: i64, q: f64) -> String {
    format!("heatmap_k{k}_q{q}.tsv")
}

fn execute(command: &Command) -> Result<Outcome, QBrionError> {
    match command {
        Command::Validate(input) => Ok(Outcome::ok(to_json(&lattice::validate(&load(&input.polytope)?)?))),
        Command::Verify { input, order, trials, seed, theorem1, no_timing } => {
            let p = load(&input.polytope)?;
            let mut report = brion::verify_identity(&p, *order, *trials, *seed, *theorem1)?;
            if *no_timing {
                report.elapsed_ms = None;
            }
            let status = if report.equal { EXIT_OK } else { EXIT_MISMATCH };
            Ok(Outcome { text: to_json(&report), status })
        }
        Command::Rs(input) => Ok(Outcome::ok(rs_json(&brion::rs_polynomial(&load(&input.polytope)?)?))),
        Command::Lhs { input, order } => {
            let lhs = brion::lhs_series(&load(&input.polytope)?, *order)?;
            let body: Vec<String> = lhs
                .iter()
                .map(|(u, s)| {
                    let cs: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
                    format!("  \"{}\": [{}]", exponent_key(u), cs.join(","))
                })
                .collect();
            Ok(Outcome::ok(format!("{{\n{}\n}}\n", body.join(",\n"))))
        }
        Command::Measure { input, dilate } => {
            let p = lattice::dilate(&load(&input.polytope)?, *dilate)?;
            Ok(Outcome::ok(measures::mu_measure(&p)?.to_csv()))
        }
        Command::Asymptotics { input, k, tol } => {
            let rep = measures::convergence_report(&load(&input.polytope)?, k, *tol)?;
            Ok(Outcome::ok(rep.to_tsv()))
        }
        Command::Heatmap { input, dilate, q } => {
            let p = load(&input.polytope)?;
            if p.dim() != 2 {
                return Err(QBrionError::Precondition("heatmaps need a 2-dimensional polytope".into()));
            }
            if !p.is_radially_symmetric() {
                return Err(QBrionError::Precondition("heatmaps need normals summing to zero".into()));
            }
            let kp = lattice::dilate(&p, *dilate)?;
            let tables = q
                .iter()
                .map(|&qv| Ok((qv, measures::heatmap_tsv(&measures::heatmap_weights(&kp, qv)?))))
                .collect::<Result<Vec<_>, QBrionError>>()?;
            if let Some(dir) = &input.output {
                std::fs::create_dir_all(dir)?;
                let mut listing = String::new();
                for (qv, table) in &tables {
                    let path = dir.join(heatmap_file_name(*dilate, *qv));
                    std::fs::write(&path, table)?;
                    writeln!(listing, "{}", path.display()).unwrap();
                }
                // the files are the output; report their paths on stdout
                return Ok(Outcome { text: listing, status: EXIT_OK });
            }
            let mut text = String::new();
            for (qv, table) in &tables {
                writeln!(text, "# q = {qv}").unwrap();
                text.push_str(table);
            }
            Ok(Outcome::ok(text))
        }
        Command::Jackson { polytope, axis, ladder, .. } => cmd_jackson(polytope.as_deref(), *axis, ladder.as_deref()),
    }
}

fn output_path(command: &Command) -> Option<&Path> {
    match command {
        Command::Validate(i) | Command::Rs(i) => i.output.as_deref(),
        Command::Verify { input, .. }
        | Command::Lhs { input, .. }
        | Command::Measure { input, .. }
        | Command::Asymptotics { input, .. } => input.output.as_deref(),
        Command::Heatmap { .. } => None,
        Command::Jackson { output, .. } => output.as_deref(),
    }
}

fn configure_threads() -> Result<(), QBrionError> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| QBrionError::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse arguments, run one command, write its output; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return exit_code(&e);
    }
    let result = execute(&cli.command).and_then(|outcome| {
        match output_path(&cli.command) {
            Some(path) => std::fs::write(path, &outcome.text)?,
            None => stdout.write_all(outcome.text.as_bytes())?,
        }
        Ok(outcome.status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
