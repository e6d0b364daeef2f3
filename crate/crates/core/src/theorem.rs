//! Proof certificates for operator identities.
//!
//! A proof bundles an ideal-membership certificate with a compatibility
//! report: every assumption uniformly compatible with the quiver and the claim
//! compatible with it. Together these guarantee that the claim's realizations
//! vanish in every consistent representation where the assumptions' do.
//! [`check_certificate`] rechecks everything from the stored data without
//! running completion.

use std::fmt;

use thiserror::Error;

use crate::free_algebra::{AlgebraError, Alphabet, Polynomial, Rational, Word};
use crate::groebner::{
    membership_certificate, CompletionStatus, GbConfig, GroebnerError, MembershipCertificate,
    MembershipOutcome,
};
use crate::quiver::{LabelledQuiver, SignatureSet, StructuralConsistency};
use crate::rewriting::reduce;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("alphabet mismatch: {0}")]
    Alphabet(#[from] AlgebraError),
    #[error("quiver labels range over {quiver} variables but the alphabet has {alphabet}")]
    QuiverAlphabet { quiver: usize, alphabet: usize },
    #[error("{0} assumption names for {1} assumptions")]
    NameCount(usize, usize),
    #[error(transparent)]
    Membership(#[from] GroebnerError),
    #[error("assumption {0} is not uniformly compatible with the quiver")]
    AssumptionNotUniform(usize),
    #[error("claim is not compatible with the quiver")]
    ClaimIncompatible,
    #[error("decomposition summand {0} violates the signature conditions")]
    DecompositionCheck(usize),
}

/// Assumptions, claim and optional quiver over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub alphabet: Alphabet,
    pub assumption_names: Vec<String>,
    pub assumptions: Vec<Polynomial>,
    pub claim: Polynomial,
    pub quiver: Option<LabelledQuiver>,
}

impl Instance {
    pub fn new(
        alphabet: Alphabet,
        assumptions: Vec<(String, Polynomial)>,
        claim: Polynomial,
        quiver: Option<LabelledQuiver>,
    ) -> Result<Self, TheoremError> {
        let (assumption_names, assumptions) = assumptions.into_iter().unzip();
        let instance = Instance {
            alphabet,
            assumption_names,
            assumptions,
            claim,
            quiver,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<(), TheoremError> {
        if self.assumption_names.len() != self.assumptions.len() {
            return Err(TheoremError::NameCount(
                self.assumption_names.len(),
                self.assumptions.len(),
            ));
        }
        for p in self.assumptions.iter().chain([&self.claim]) {
            self.alphabet.check_poly(p)?;
        }
        if let Some(q) = &self.quiver {
            if q.num_labels() != self.alphabet.len() {
                return Err(TheoremError::QuiverAlphabet {
                    quiver: q.num_labels(),
                    alphabet: self.alphabet.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionCompat {
    pub uniform: bool,
    pub signature: SignatureSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCompat {
    pub compatible: bool,
    pub signature: SignatureSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub assumptions: Vec<AssumptionCompat>,
    pub claim: ClaimCompat,
}

impl CompatibilityReport {
    pub fn compute(quiver: &LabelledQuiver, assumptions: &[Polynomial], claim: &Polynomial) -> Self {
        CompatibilityReport {
            assumptions: assumptions
                .iter()
                .map(|g| AssumptionCompat {
                    uniform: quiver.is_uniformly_compatible(g),
                    signature: quiver.signature_of_poly(g),
                })
                .collect(),
            claim: ClaimCompat {
                compatible: quiver.is_compatible(claim),
                signature: quiver.signature_of_poly(claim),
            },
        }
    }

    /// First failing hypothesis, if any.
    pub fn failure(&self) -> Option<InvalidReason> {
        if let Some(i) = self.assumptions.iter().position(|a| !a.uniform) {
            return Some(InvalidReason::AssumptionNotUniform(i));
        }
        if !self.claim.compatible {
            return Some(InvalidReason::ClaimIncompatible);
        }
        None
    }

    pub fn passes(&self) -> bool {
        self.failure().is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofCertificate {
    pub alphabet: Alphabet,
    pub assumption_names: Vec<String>,
    pub assumptions: Vec<Polynomial>,
    pub claim: Polynomial,
    /// Absent for membership-only certificates.
    pub quiver: Option<LabelledQuiver>,
    pub membership: MembershipCertificate,
    pub compat_report: Option<CompatibilityReport>,
    pub consistency: Option<StructuralConsistency>,
}

impl ProofCertificate {
    /// Assembles a certificate from an already verified membership certificate.
    pub fn assemble(instance: &Instance, membership: MembershipCertificate) -> Self {
        let compat_report = instance
            .quiver
            .as_ref()
            .map(|q| CompatibilityReport::compute(q, &instance.assumptions, &instance.claim));
        ProofCertificate {
            alphabet: instance.alphabet.clone(),
            assumption_names: instance.assumption_names.clone(),
            assumptions: instance.assumptions.clone(),
            claim: instance.claim.clone(),
            consistency: instance.quiver.as_ref().map(LabelledQuiver::structural_consistency),
            quiver: instance.quiver.clone(),
            membership,
            compat_report,
        }
    }

    pub fn instance(&self) -> Instance {
        Instance {
            alphabet: self.alphabet.clone(),
            assumption_names: self.assumption_names.clone(),
            assumptions: self.assumptions.clone(),
            claim: self.claim.clone(),
            quiver: self.quiver.clone(),
        }
    }

    pub fn is_membership_only(&self) -> bool {
        self.quiver.is_none()
    }
}

#[derive(Debug, Clone)]
pub enum ProveOutcome {
    Proved(Box<ProofCertificate>),
    FailedCompat(CompatibilityReport),
    Inconclusive {
        status: CompletionStatus,
        basis_size: usize,
        iterations: usize,
    },
}

/// Checks compatibility (when a quiver is given), then ideal membership.
pub fn prove_identity(instance: &Instance, cfg: GbConfig) -> Result<ProveOutcome, TheoremError> {
    instance.validate()?;
    if let Some(q) = &instance.quiver {
        let report = CompatibilityReport::compute(q, &instance.assumptions, &instance.claim);
        if !report.passes() {
            return Ok(ProveOutcome::FailedCompat(report));
        }
    }
    let membership = if instance.claim.is_zero() {
        MembershipOutcome::Proved(MembershipCertificate::new(
            Polynomial::zero(),
            &instance.assumptions,
            [],
        )?)
    } else if instance.assumptions.is_empty() {
        MembershipOutcome::Inconclusive {
            status: CompletionStatus::Complete,
            basis_size: 0,
            iterations: 0,
            remainder: instance.claim.clone(),
        }
    } else {
        membership_certificate(&instance.claim, &instance.assumptions, cfg)?
    };
    Ok(match membership {
        MembershipOutcome::Proved(cert) => {
            ProveOutcome::Proved(Box::new(ProofCertificate::assemble(instance, cert)))
        }
        MembershipOutcome::Inconclusive {
            status,
            basis_size,
            iterations,
            ..
        } => ProveOutcome::Inconclusive {
            status,
            basis_size,
            iterations,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    Instance(TheoremError),
    Membership(GroebnerError),
    AssumptionNotUniform(usize),
    ClaimIncompatible,
    /// Quiver present without a report, or the other way round.
    MissingReport,
    ReportMismatch,
    ConsistencyMismatch,
    AssumptionsDiffer,
    ClaimDiffers,
    AlphabetDiffers,
    QuiverDiffers,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::Instance(e) => write!(f, "malformed certificate: {e}"),
            InvalidReason::Membership(GroebnerError::RecombinationMismatch) => {
                f.write_str("recombination mismatch: summands do not add up to the claim")
            }
            InvalidReason::Membership(e) => write!(f, "membership certificate: {e}"),
            InvalidReason::AssumptionNotUniform(i) => write!(
                f,
                "compatibility: assumption {i} is not uniformly compatible with the quiver"
            ),
            InvalidReason::ClaimIncompatible => {
                f.write_str("compatibility: claim is not compatible with the quiver")
            }
            InvalidReason::MissingReport => {
                f.write_str("compatibility report and quiver must be present together")
            }
            InvalidReason::ReportMismatch => {
                f.write_str("compatibility report differs from the recomputed signatures")
            }
            InvalidReason::ConsistencyMismatch => {
                f.write_str("recorded structural consistency verdict differs from the quiver")
            }
            InvalidReason::AssumptionsDiffer => f.write_str("assumptions differ from the problem"),
            InvalidReason::ClaimDiffers => f.write_str("claim differs from the problem"),
            InvalidReason::AlphabetDiffers => f.write_str("alphabet differs from the problem"),
            InvalidReason::QuiverDiffers => f.write_str("quiver differs from the problem"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    Invalid(InvalidReason),
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid)
    }
}

fn check_compat_against(
    quiver: &LabelledQuiver,
    cert: &ProofCertificate,
) -> Result<CompatibilityReport, InvalidReason> {
    let report = CompatibilityReport::compute(quiver, &cert.assumptions, &cert.claim);
    match report.failure() {
        Some(reason) => Err(reason),
        None => Ok(report),
    }
}

fn check_inner(cert: &ProofCertificate) -> Result<(), InvalidReason> {
    cert.instance().validate().map_err(InvalidReason::Instance)?;
    if cert.membership.claim != cert.claim {
        return Err(InvalidReason::ClaimDiffers);
    }
    if cert.membership.recombine(&cert.assumptions).ok().as_ref() != Some(&cert.claim) {
        return Err(InvalidReason::Membership(GroebnerError::RecombinationMismatch));
    }
    match (&cert.quiver, &cert.compat_report) {
        (None, None) => {
            if cert.consistency.is_some() {
                return Err(InvalidReason::ConsistencyMismatch);
            }
        }
        (Some(q), Some(stored)) => {
            let report = check_compat_against(q, cert)?;
            if report != *stored {
                return Err(InvalidReason::ReportMismatch);
            }
            if cert.consistency != Some(q.structural_consistency()) {
                return Err(InvalidReason::ConsistencyMismatch);
            }
        }
        _ => return Err(InvalidReason::MissingReport),
    }
    cert.membership
        .verify(&cert.assumptions)
        .map_err(InvalidReason::Membership)
}

/// Recomputes recombination, compatibility and fingerprints from the
/// certificate alone.
pub fn check_certificate(cert: &ProofCertificate) -> CheckResult {
    match check_inner(cert) {
        Ok(()) => CheckResult::Valid,
        Err(reason) => CheckResult::Invalid(reason),
    }
}

/// [`check_certificate`], plus agreement with the problem's polynomials and
/// quiver. A differing quiver is evaluated first so that the reported reason
/// names the failing hypothesis.
pub fn check_certificate_against(cert: &ProofCertificate, problem: &Instance) -> CheckResult {
    if let CheckResult::Invalid(reason) = check_certificate(cert) {
        return CheckResult::Invalid(reason);
    }
    if cert.alphabet != problem.alphabet {
        return CheckResult::Invalid(InvalidReason::AlphabetDiffers);
    }
    if cert.assumptions != problem.assumptions {
        return CheckResult::Invalid(InvalidReason::AssumptionsDiffer);
    }
    if cert.claim != problem.claim {
        return CheckResult::Invalid(InvalidReason::ClaimDiffers);
    }
    if cert.quiver != problem.quiver {
        if let Some(q) = &problem.quiver {
            if let Err(reason) = check_compat_against(q, cert) {
                return CheckResult::Invalid(reason);
            }
            if cert.compat_report.as_ref() != Some(&CompatibilityReport::compute(q, &cert.assumptions, &cert.claim)) {
                return CheckResult::Invalid(InvalidReason::ReportMismatch);
            }
        }
        return CheckResult::Invalid(InvalidReason::QuiverDiffers);
    }
    CheckResult::Valid
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSummand {
    pub coeff: Rational,
    pub left: Word,
    pub generator: usize,
    pub right: Word,
    /// σ(left · F[generator] · right)
    pub signature: SignatureSet,
}

/// `f = Σ λᵢ·aᵢ·F[kᵢ]·bᵢ` with word cofactors where each `aᵢ`, `bᵢ` and
/// `aᵢ·F[kᵢ]·bᵢ` is uniformly compatible and `σ(aᵢ·F[kᵢ]·bᵢ) ⊇ σ(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QConsequenceDecomposition {
    pub summands: Vec<QSummand>,
}

impl QConsequenceDecomposition {
    /// Index of the first summand failing a signature condition, or
    /// `Err(None)` when the sum does not equal `f`.
    pub fn verify(
        &self,
        quiver: &LabelledQuiver,
        assumptions: &[Polynomial],
        f: &Polynomial,
    ) -> Result<(), Option<usize>> {
        let sigma_f = quiver.signature_of_poly(f);
        let mut sum = Polynomial::zero();
        for (i, s) in self.summands.iter().enumerate() {
            let g = assumptions.get(s.generator).ok_or(Some(i))?;
            let product = g.sandwich(&s.left, &s.right);
            let sig = quiver.signature_of_poly(&product);
            let ok = quiver.is_uniformly_compatible(&Polynomial::word(s.left.clone()))
                && quiver.is_uniformly_compatible(&Polynomial::word(s.right.clone()))
                && quiver.is_uniformly_compatible(&product)
                && sigma_f.is_subset(&sig)
                && sig == s.signature;
            if !ok {
                return Err(Some(i));
            }
            sum.add_scaled_product(&s.coeff, &s.left, g, &s.right);
        }
        if sum != *f {
            return Err(None);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QConsequenceOutcome {
    Found(QConsequenceDecomposition),
    /// Direct reduction by `F` left a nonzero remainder.
    Inconclusive { remainder: Polynomial },
}

/// Reduces `f` by `F` directly; a zero normal form yields a decomposition
/// whose summands are the negated rewriting steps.
pub fn q_consequence_decomposition(
    f: &Polynomial,
    assumptions: &[Polynomial],
    quiver: &LabelledQuiver,
    cfg: GbConfig,
) -> Result<QConsequenceOutcome, TheoremError> {
    if let Some(i) = assumptions.iter().position(|g| !quiver.is_uniformly_compatible(g)) {
        return Err(TheoremError::AssumptionNotUniform(i));
    }
    if !quiver.is_compatible(f) {
        return Err(TheoremError::ClaimIncompatible);
    }
    let result = reduce(f, assumptions, cfg.order);
    if !result.normal_form.is_zero() {
        return Ok(QConsequenceOutcome::Inconclusive {
            remainder: result.normal_form,
        });
    }
    let summands = result
        .trace
        .into_iter()
        .map(|step| {
            let product = assumptions[step.index].sandwich(&step.left, &step.right);
            QSummand {
                coeff: -step.coeff,
                signature: quiver.signature_of_poly(&product),
                left: step.left,
                generator: step.index,
                right: step.right,
            }
        })
        .collect();
    let decomposition = QConsequenceDecomposition { summands };
    match decomposition.verify(quiver, assumptions, f) {
        Ok(()) => Ok(QConsequenceOutcome::Found(decomposition)),
        Err(i) => Err(TheoremError::DecompositionCheck(i.unwrap_or(usize::MAX))),
    }
}
