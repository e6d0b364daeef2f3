//! The `opcert` command line.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 failed hypothesis or
//! invalid certificate, 3 inconclusive within bounds, 4 a realization of the
//! claim is nonzero.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use opcert::groebner::{GbConfig, MembershipCertificate};
use opcert::matrix::Matrix;
use opcert::quiver::{LabelledQuiver, SignatureSet};
use opcert::representation::{
    check_representation_consistency, realize, verify_theorem_instance, RepresentationConsistency,
    TheoremInstance,
};
use opcert::textio::{parse_certificate, parse_problem, serialize_certificate, ProblemFile};
use opcert::theorem::{
    check_certificate, check_certificate_against, prove_identity, q_consequence_decomposition,
    CheckResult, CompatibilityReport, ProofCertificate, ProveOutcome, QConsequenceOutcome,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_FAILED: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_CLAIM_VIOLATED: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "opcert", version, about = "Certified proofs of operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print progress and statistics to standard error.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Debug, clap::Args)]
struct Bounds {
    /// Degree bound on the S-polynomials formed during completion.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    maxdeg: u64,
    /// Maximum number of processed ambiguities.
    #[arg(long, default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
    maxiter: u64,
}

impl Bounds {
    fn config(&self) -> GbConfig {
        GbConfig {
            max_degree: self.maxdeg as usize,
            max_iterations: self.maxiter as usize,
            ..GbConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check compatibility and search for an ideal membership certificate.
    Prove {
        problem: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a certificate, optionally against a problem file.
    Check {
        certificate: PathBuf,
        problem: Option<PathBuf>,
    },
    /// Print signatures and compatibility verdicts for a problem.
    Compat { problem: PathBuf },
    /// Evaluate realizations in the problem's representation.
    Eval {
        problem: PathBuf,
        /// Path length bound for consistency checks.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        maxpathlen: u64,
    },
    /// Build a certificate from the problem's `witness` line.
    Certify {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Express the claim through the assumptions by direct reduction,
    /// recording the signature of every summand.
    Decompose {
        problem: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    verbose: bool,
}

// Write failures on the report streams are not actionable; ignore them.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{
        let _ = writeln!($w, $($arg)*);
    }};
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if informational {
                say!(out, "{}", e.render());
                return EXIT_OK;
            }
            say!(err, "{}", e.render());
            return EXIT_ERROR;
        }
    };
    let mut io = Io {
        out,
        err,
        verbose: cli.verbose,
    };
    let result = match &cli.command {
        Command::Prove { problem, bounds, out } => cmd_prove(&mut io, problem, bounds, out.as_deref()),
        Command::Check { certificate, problem } => cmd_check(&mut io, certificate, problem.as_deref()),
        Command::Compat { problem } => cmd_compat(&mut io, problem),
        Command::Eval { problem, maxpathlen } => cmd_eval(&mut io, problem, *maxpathlen as usize),
        Command::Certify { problem, out } => cmd_certify(&mut io, problem, out.as_deref()),
        Command::Decompose { problem, bounds } => cmd_decompose(&mut io, problem, bounds),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            say!(io.err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_problem(path: &Path) -> Result<ProblemFile, String> {
    parse_problem(&read(path)?).map_err(|e| format!("{}:{e}", path.display()))
}

fn signature_text(s: &SignatureSet, q: &LabelledQuiver) -> String {
    let pairs: Vec<String> = s
        .pairs()
        .into_iter()
        .map(|(v, w)| format!("({}, {})", q.vertex_name(v), q.vertex_name(w)))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .row_vecs()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn print_report(io: &mut Io, problem: &ProblemFile, q: &LabelledQuiver, report: &CompatibilityReport) {
    let inst = &problem.instance;
    for ((name, c), g) in inst.assumption_names.iter().zip(&report.assumptions).zip(&inst.assumptions) {
        let verdict = if c.uniform {
            "uniformly compatible"
        } else if q.is_compatible(g) {
            "compatible, not uniformly"
        } else {
            "incompatible"
        };
        say!(io.out, "assumption {name}: {verdict}, signature {}", signature_text(&c.signature, q));
    }
    let verdict = if report.claim.compatible { "compatible" } else { "incompatible" };
    say!(io.out, "claim: {verdict}, signature {}", signature_text(&report.claim.signature, q));
}

fn emit_certificate(io: &mut Io, cert: &ProofCertificate, out: Option<&Path>) -> Result<(), String> {
    let text = serialize_certificate(cert);
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            say!(
                io.out,
                "proved: {} summands{}; certificate written to {}",
                cert.membership.summands.len(),
                if cert.is_membership_only() { ", ideal membership only (no quiver)" } else { "" },
                path.display()
            );
        }
        None => {
            let _ = io.out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn cmd_prove(io: &mut Io, path: &Path, bounds: &Bounds, out: Option<&Path>) -> Result<u8, String> {
    let problem = load_problem(path)?;
    let start = Instant::now();
    let outcome = prove_identity(&problem.instance, bounds.config()).map_err(|e| e.to_string())?;
    if io.verbose {
        say!(io.err, "completion finished in {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        ProveOutcome::Proved(cert) => {
            if io.verbose {
                say!(
                    io.err,
                    "certificate: {} summands, cofactor degree up to {}",
                    cert.membership.summands.len(),
                    cert.membership.max_degree(&cert.assumptions)
                );
                if cert.is_membership_only() {
                    say!(io.err, "no quiver given: ideal membership only");
                }
            }
            emit_certificate(io, &cert, out)?;
            Ok(EXIT_OK)
        }
        ProveOutcome::FailedCompat(report) => {
            say!(io.out, "compatibility check failed");
            let q = problem.quiver().expect("compatibility is only checked with a quiver");
            print_report(io, &problem, q, &report);
            Ok(EXIT_FAILED)
        }
        ProveOutcome::Inconclusive {
            status,
            basis_size,
            iterations,
        } => {
            say!(
                io.out,
                "inconclusive: {status:?} after {iterations} iterations with {basis_size} basis elements"
            );
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_check(io: &mut Io, cert_path: &Path, problem_path: Option<&Path>) -> Result<u8, String> {
    let text = read(cert_path)?;
    let problem = problem_path.map(load_problem).transpose()?;
    let cert = match parse_certificate(&text) {
        Ok(c) => c,
        Err(e) => {
            say!(io.out, "invalid: {e}");
            return Ok(EXIT_FAILED);
        }
    };
    let result = match &problem {
        Some(p) => check_certificate_against(&cert, &p.instance),
        None => check_certificate(&cert),
    };
    match result {
        CheckResult::Valid => {
            let scope = if cert.is_membership_only() {
                "ideal membership only"
            } else {
                "membership and compatibility"
            };
            say!(io.out, "valid: {} summands ({scope})", cert.membership.summands.len());
            Ok(EXIT_OK)
        }
        CheckResult::Invalid(reason) => {
            say!(io.out, "invalid: {reason}");
            Ok(EXIT_FAILED)
        }
    }
}

fn require_quiver(problem: &ProblemFile) -> Result<&LabelledQuiver, String> {
    problem.quiver().ok_or_else(|| "the problem has no quiver".to_string())
}

fn cmd_compat(io: &mut Io, path: &Path) -> Result<u8, String> {
    let problem = load_problem(path)?;
    let q = require_quiver(&problem)?;
    let inst = &problem.instance;
    let report = CompatibilityReport::compute(q, &inst.assumptions, &inst.claim);
    say!(io.out, "structural consistency: {}", q.structural_consistency().as_str());
    print_report(io, &problem, q, &report);
    Ok(if report.passes() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_eval(io: &mut Io, path: &Path, max_len: usize) -> Result<u8, String> {
    let problem = load_problem(path)?;
    let q = require_quiver(&problem)?;
    let rep = problem
        .representation
        .as_ref()
        .ok_or_else(|| "the problem has no representation".to_string())?;
    let inst = &problem.instance;
    match check_representation_consistency(rep, q, max_len).map_err(|e| e.to_string())? {
        RepresentationConsistency::ConsistentStructural(rule) => {
            say!(io.out, "representation consistent ({})", rule.as_str());
        }
        RepresentationConsistency::ConsistentUpTo(n) => {
            say!(io.out, "representation consistent on paths up to length {n}");
            say!(io.err, "warning: consistency is only checked up to path length {n}");
        }
        RepresentationConsistency::Inconsistent(p1, p2) => {
            say!(
                io.out,
                "representation inconsistent: edge paths {:?} and {:?} share a label but differ",
                p1.edges.iter().map(|e| format!("e{}", e + 1)).collect::<Vec<_>>(),
                p2.edges.iter().map(|e| format!("e{}", e + 1)).collect::<Vec<_>>()
            );
            return Ok(EXIT_FAILED);
        }
    }
    let named = inst
        .assumption_names
        .iter()
        .map(String::as_str)
        .zip(&inst.assumptions)
        .chain([("claim", &inst.claim)]);
    for (name, p) in named {
        for pair in q.signature_of_poly(p).pairs() {
            let r = realize(rep, q, p, pair).map_err(|e| e.to_string())?;
            say!(
                io.out,
                "{name} ({}, {}): {}",
                q.vertex_name(pair.0),
                q.vertex_name(pair.1),
                if r.matrix.is_zero() { "zero".to_string() } else { matrix_text(&r.matrix) }
            );
        }
    }
    let verdict = match verify_theorem_instance(rep, q, &inst.assumptions, &inst.claim) {
        Ok(v) => v,
        Err(e) => {
            say!(io.out, "not applicable: {e}");
            return Ok(EXIT_FAILED);
        }
    };
    Ok(match verdict {
        TheoremInstance::ClaimHolds => {
            say!(io.out, "claim holds");
            EXIT_OK
        }
        TheoremInstance::AssumptionViolated { index, source, target } => {
            say!(
                io.out,
                "assumption {} does not vanish at ({}, {})",
                inst.assumption_names[index],
                q.vertex_name(source),
                q.vertex_name(target)
            );
            EXIT_FAILED
        }
        TheoremInstance::ClaimViolated { source, target } => {
            say!(
                io.out,
                "claim does not vanish at ({}, {}) although all assumptions do",
                q.vertex_name(source),
                q.vertex_name(target)
            );
            EXIT_CLAIM_VIOLATED
        }
    })
}

fn cmd_certify(io: &mut Io, path: &Path, out: Option<&Path>) -> Result<u8, String> {
    let problem = load_problem(path)?;
    let witness = problem
        .witness
        .as_ref()
        .ok_or_else(|| "the problem has no witness".to_string())?;
    let inst = &problem.instance;
    if let Some(q) = problem.quiver() {
        let report = CompatibilityReport::compute(q, &inst.assumptions, &inst.claim);
        if !report.passes() {
            say!(io.out, "compatibility check failed");
            print_report(io, &problem, q, &report);
            return Ok(EXIT_FAILED);
        }
    }
    let membership =
        match MembershipCertificate::new(inst.claim.clone(), &inst.assumptions, witness.summands.clone()) {
            Ok(m) => m,
            Err(e) => {
                say!(io.out, "witness on line {} rejected: {e}", witness.line);
                return Ok(EXIT_FAILED);
            }
        };
    let cert = ProofCertificate::assemble(inst, membership);
    emit_certificate(io, &cert, out)?;
    Ok(EXIT_OK)
}

fn cmd_decompose(io: &mut Io, path: &Path, bounds: &Bounds) -> Result<u8, String> {
    let problem = load_problem(path)?;
    let q = require_quiver(&problem)?;
    let inst = &problem.instance;
    let outcome = match q_consequence_decomposition(&inst.claim, &inst.assumptions, q, bounds.config()) {
        Ok(o) => o,
        Err(e) => {
            say!(io.out, "not applicable: {e}");
            return Ok(EXIT_FAILED);
        }
    };
    match outcome {
        QConsequenceOutcome::Found(d) => {
            for s in &d.summands {
                say!(
                    io.out,
                    "{} * {} * {} * {}  signature {}",
                    s.coeff,
                    s.left.display(&inst.alphabet),
                    inst.assumption_names[s.generator],
                    s.right.display(&inst.alphabet),
                    signature_text(&s.signature, q)
                );
            }
            say!(io.out, "decomposition with {} summands", d.summands.len());
            Ok(EXIT_OK)
        }
        QConsequenceOutcome::Inconclusive { remainder } => {
            say!(
                io.out,
                "inconclusive: direct reduction leaves {}",
                remainder.display(&inst.alphabet)
            );
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}
