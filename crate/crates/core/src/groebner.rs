//! Noncommutative Buchberger completion with cofactor tracking.
//!
//! Every basis element remembers how it was built from the input generators
//! as a [`Combination`] `Σ c·left·F[k]·right`. Ideal membership is a
//! semi-decision: the claim is reduced by the growing basis, and once it
//! reaches zero the reduction trace is unwound into a
//! [`MembershipCertificate`] over the original generators. A run that hits
//! its bounds reports [`MembershipOutcome::Inconclusive`], never non-membership.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::free_algebra::{MonomialOrder, Polynomial, Rational, Word};
use crate::rewriting::reduce_owned;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("no generators given")]
    NoGenerators,
    #[error("certificate does not recombine to the claim")]
    RecombinationMismatch,
    #[error("summand references generator {0}, but only {1} generators exist")]
    GeneratorOutOfRange(usize, usize),
    #[error("generator fingerprint {0} does not match")]
    FingerprintMismatch(usize),
    #[error("expected {expected} generator fingerprints, found {found}")]
    FingerprintCount { expected: usize, found: usize },
    #[error("summands are not in canonical order or contain zero coefficients")]
    NotNormalized,
}

/// Finite sum `Σ c·left·F[generator]·right` keyed by (generator, left, right).
///
/// The key order is generator index, then deglex of `left`, then deglex of
/// `right`; equal triples are merged and zero coefficients dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Combination {
    terms: BTreeMap<(usize, Word, Word), Rational>,
}

impl Combination {
    pub fn generator(index: usize) -> Self {
        let mut c = Combination::default();
        c.add(Rational::one(), Word::one(), index, Word::one());
        c
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&mut self, c: Rational, left: Word, generator: usize, right: Word) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((generator, left, right)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · left · other · right`
    pub fn add_sandwich(&mut self, c: &Rational, left: &Word, other: &Combination, right: &Word) {
        if c.is_zero() {
            return;
        }
        for ((k, l, r), d) in &other.terms {
            self.add(c * d, left.concat(l), *k, r.concat(right));
        }
    }

    pub fn scale(&self, c: &Rational) -> Combination {
        let mut out = Combination::default();
        out.add_sandwich(c, &Word::one(), self, &Word::one());
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &Word, usize, &Word)> + '_ {
        self.terms.iter().map(|((k, l, r), c)| (c, l, *k, r))
    }

    pub fn evaluate<P: AsRef<Polynomial>>(&self, generators: &[P]) -> Polynomial {
        let mut out = Polynomial::zero();
        for ((k, l, r), c) in &self.terms {
            out.add_scaled_product(c, l, generators[*k].as_ref(), r);
        }
        out
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().map(|(k, _, _)| *k).max()
    }

    pub fn summands(&self) -> Vec<Summand> {
        self.iter()
            .map(|(c, l, k, r)| Summand {
                coeff: c.clone(),
                left: l.clone(),
                generator: k,
                right: r.clone(),
            })
            .collect()
    }
}

/// Polynomial together with its expression in terms of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedPoly {
    pub value: Polynomial,
    pub provenance: Combination,
}

impl AsRef<Polynomial> for TracedPoly {
    fn as_ref(&self) -> &Polynomial {
        &self.value
    }
}

impl TracedPoly {
    pub fn generator(f: &Polynomial, index: usize) -> Self {
        TracedPoly {
            value: f.clone(),
            provenance: Combination::generator(index),
        }
    }

    pub fn is_consistent<P: AsRef<Polynomial>>(&self, generators: &[P]) -> bool {
        self.provenance.evaluate(generators) == self.value
    }

    fn scale(&self, c: &Rational) -> TracedPoly {
        TracedPoly {
            value: self.value.scale(c),
            provenance: self.provenance.scale(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmbiguityKind {
    /// A proper suffix of one leading word is a proper prefix of the other.
    Overlap,
    /// One leading word is a factor of the other.
    Inclusion,
}

/// Two leading words placed inside one common word:
/// `common = first_left·m₁·first_right = second_left·m₂·second_right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub first: usize,
    pub second: usize,
    pub common: Word,
    pub first_left: Word,
    pub first_right: Word,
    pub second_left: Word,
    pub second_right: Word,
}

/// Overlaps and inclusions between `m1` (index 0) and `m2` (index 1).
///
/// When the two words are equal only one overlap direction is returned and
/// the trivial whole-word inclusion is omitted.
pub fn ambiguities(m1: &Word, m2: &Word) -> Vec<Ambiguity> {
    ambiguities_between(m1, 0, m2, 1, m1 == m2)
}

fn ambiguities_between(
    m1: &Word,
    i: usize,
    m2: &Word,
    j: usize,
    same_element: bool,
) -> Vec<Ambiguity> {
    let mut out = Vec::new();
    if m1.is_empty() || m2.is_empty() {
        return out;
    }
    let (l1, l2) = (m1.len(), m2.len());
    let max_overlap = l1.min(l2).saturating_sub(1);
    // suffix of m1 = prefix of m2
    for k in 1..=max_overlap {
        if m1.letters()[l1 - k..] == m2.letters()[..k] {
            let first_right = m2.slice(k..l2);
            let second_left = m1.slice(0..l1 - k);
            out.push(Ambiguity {
                kind: AmbiguityKind::Overlap,
                first: i,
                second: j,
                common: m1.concat(&first_right),
                first_left: Word::one(),
                first_right,
                second_left,
                second_right: Word::one(),
            });
        }
    }
    if !same_element {
        // suffix of m2 = prefix of m1
        for k in 1..=max_overlap {
            if m2.letters()[l2 - k..] == m1.letters()[..k] {
                let first_left = m2.slice(0..l2 - k);
                let second_right = m1.slice(k..l1);
                out.push(Ambiguity {
                    kind: AmbiguityKind::Overlap,
                    first: i,
                    second: j,
                    common: m2.concat(&second_right),
                    first_left,
                    first_right: Word::one(),
                    second_left: Word::one(),
                    second_right,
                });
            }
        }
    }
    // m2 inside m1
    for pos in m1.occurrences(m2) {
        if same_element && l1 == l2 {
            continue;
        }
        out.push(Ambiguity {
            kind: AmbiguityKind::Inclusion,
            first: i,
            second: j,
            common: m1.clone(),
            first_left: Word::one(),
            first_right: Word::one(),
            second_left: m1.slice(0..pos),
            second_right: m1.slice(pos + l2..l1),
        });
    }
    // m1 strictly inside m2
    if l1 < l2 {
        for pos in m2.occurrences(m1) {
            out.push(Ambiguity {
                kind: AmbiguityKind::Inclusion,
                first: i,
                second: j,
                common: m2.clone(),
                first_left: m2.slice(0..pos),
                first_right: m2.slice(pos + l1..l2),
                second_left: Word::one(),
                second_right: Word::one(),
            });
        }
    }
    out
}

fn s_polynomial_value(amb: &Ambiguity, g1: &Polynomial, g2: &Polynomial) -> (Polynomial, Rational, Rational) {
    let (_, lc1) = g1.leading_term().expect("nonzero basis element");
    let (_, lc2) = g2.leading_term().expect("nonzero basis element");
    let c1 = lc1.recip();
    let c2 = -lc2.recip();
    let mut value = Polynomial::zero();
    value.add_scaled_product(&c1, &amb.first_left, g1, &amb.first_right);
    value.add_scaled_product(&c2, &amb.second_left, g2, &amb.second_right);
    (value, c1, c2)
}

/// `(1/lc₁)·a₁·g₁·b₁ − (1/lc₂)·a₂·g₂·b₂` for the placements recorded in `amb`.
pub fn s_polynomial(amb: &Ambiguity, g1: &TracedPoly, g2: &TracedPoly) -> TracedPoly {
    let (value, c1, c2) = s_polynomial_value(amb, &g1.value, &g2.value);
    let mut provenance = Combination::default();
    provenance.add_sandwich(&c1, &amb.first_left, &g1.provenance, &amb.first_right);
    provenance.add_sandwich(&c2, &amb.second_left, &g2.provenance, &amb.second_right);
    TracedPoly { value, provenance }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    /// Ambiguities whose S-polynomial has larger degree are skipped. The
    /// S-polynomial's degree is below the common word's length, so every
    /// ambiguity with a common word of at most this length is processed.
    pub max_degree: usize,
    /// Maximum number of processed ambiguities.
    pub max_iterations: usize,
    pub order: MonomialOrder,
    /// Recheck the provenance of every new basis element.
    pub verify_provenance: bool,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_degree: 12,
            max_iterations: 10_000,
            order: MonomialOrder::DegLex,
            verify_provenance: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionStatus {
    /// No ambiguity within the degree bound is left unprocessed.
    Complete,
    /// The iteration bound stopped the run early.
    BoundReached,
}

#[derive(Debug, Clone)]
pub struct PartialBasis {
    pub elements: Vec<TracedPoly>,
    pub status: CompletionStatus,
    pub iterations: usize,
    pub skipped_by_degree: usize,
}

/// Incremental completion state; [`buchberger`] drives it to the end.
pub struct Completion {
    generators: Vec<Polynomial>,
    basis: Vec<TracedPoly>,
    queue: BTreeMap<(usize, u64), Ambiguity>,
    created: u64,
    iterations: usize,
    skipped_by_degree: usize,
    cfg: GbConfig,
}

impl Completion {
    pub fn new(generators: &[Polynomial], cfg: GbConfig) -> Self {
        let mut state = Completion {
            generators: generators.to_vec(),
            basis: Vec::new(),
            queue: BTreeMap::new(),
            created: 0,
            iterations: 0,
            skipped_by_degree: 0,
            cfg,
        };
        for (k, f) in generators.iter().enumerate() {
            if !f.is_zero() {
                state.insert(TracedPoly::generator(f, k));
            }
        }
        state
    }

    pub fn basis(&self) -> &[TracedPoly] {
        &self.basis
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    fn insert(&mut self, element: TracedPoly) {
        if self.cfg.verify_provenance {
            assert!(
                element.is_consistent(&self.generators),
                "basis element provenance does not recombine"
            );
        }
        let n = self.basis.len();
        self.basis.push(element);
        let lm_new = self.basis[n].value.leading_term().expect("nonzero").0.clone();
        for j in 0..=n {
            let lm_j = self.basis[j].value.leading_term().expect("nonzero").0;
            for amb in ambiguities_between(lm_j, j, &lm_new, n, j == n) {
                if amb.common.len() > self.cfg.max_degree {
                    let (s, _, _) =
                        s_polynomial_value(&amb, &self.basis[amb.first].value, &self.basis[amb.second].value);
                    if s.degree().is_some_and(|d| d > self.cfg.max_degree) {
                        self.skipped_by_degree += 1;
                        continue;
                    }
                }
                self.queue.insert((amb.common.len(), self.created), amb);
                self.created += 1;
            }
        }
    }

    /// Processes one ambiguity. Returns `None` once the queue is empty or the
    /// iteration bound is reached; otherwise whether the basis grew.
    pub fn step(&mut self) -> Option<bool> {
        if self.iterations >= self.cfg.max_iterations {
            return None;
        }
        let (_, amb) = self.queue.pop_first()?;
        self.iterations += 1;
        let spoly = s_polynomial(&amb, &self.basis[amb.first], &self.basis[amb.second]);
        let reduced = reduce_traced(spoly, &self.basis);
        if reduced.value.is_zero() {
            return Some(false);
        }
        let lc = reduced.value.leading_term().expect("nonzero").1.clone();
        self.insert(reduced.scale(&lc.recip()));
        Some(true)
    }

    pub fn status(&self) -> CompletionStatus {
        if self.queue.is_empty() {
            CompletionStatus::Complete
        } else {
            CompletionStatus::BoundReached
        }
    }

    pub fn finish(mut self) -> PartialBasis {
        while self.step().is_some() {}
        PartialBasis {
            status: self.status(),
            elements: self.basis,
            iterations: self.iterations,
            skipped_by_degree: self.skipped_by_degree,
        }
    }
}

/// Reduces `p` by `basis`, carrying provenance through each step.
pub fn reduce_traced(p: TracedPoly, basis: &[TracedPoly]) -> TracedPoly {
    let result = reduce_owned(p.value, basis);
    let mut provenance = p.provenance;
    for step in &result.trace {
        provenance.add_sandwich(&step.coeff, &step.left, &basis[step.index].provenance, &step.right);
    }
    TracedPoly {
        value: result.normal_form,
        provenance,
    }
}

pub fn buchberger(generators: &[Polynomial], cfg: GbConfig) -> PartialBasis {
    Completion::new(generators, cfg).finish()
}

/// One summand `coeff · left · F[generator] · right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub coeff: Rational,
    pub left: Word,
    pub generator: usize,
    pub right: Word,
}

/// Explicit cofactor representation `claim = Σ cᵢ·leftᵢ·F[kᵢ]·rightᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub claim: Polynomial,
    pub summands: Vec<Summand>,
    pub generator_fingerprints: Vec<String>,
}

impl MembershipCertificate {
    /// Normalizes `summands` (merge, drop zeros, sort) and checks recombination.
    pub fn new(
        claim: Polynomial,
        generators: &[Polynomial],
        summands: impl IntoIterator<Item = Summand>,
    ) -> Result<Self, GroebnerError> {
        let mut combination = Combination::default();
        for s in summands {
            if s.generator >= generators.len() {
                return Err(GroebnerError::GeneratorOutOfRange(s.generator, generators.len()));
            }
            combination.add(s.coeff, s.left, s.generator, s.right);
        }
        let cert = MembershipCertificate {
            claim,
            summands: combination.summands(),
            generator_fingerprints: generators.iter().map(Polynomial::fingerprint).collect(),
        };
        cert.verify(generators)?;
        Ok(cert)
    }

    pub fn recombine(&self, generators: &[Polynomial]) -> Result<Polynomial, GroebnerError> {
        let mut out = Polynomial::zero();
        for s in &self.summands {
            let g = generators
                .get(s.generator)
                .ok_or(GroebnerError::GeneratorOutOfRange(s.generator, generators.len()))?;
            out.add_scaled_product(&s.coeff, &s.left, g, &s.right);
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        let keys_increase = self.summands.windows(2).all(|w| {
            (w[0].generator, &w[0].left, &w[0].right) < (w[1].generator, &w[1].left, &w[1].right)
        });
        keys_increase && self.summands.iter().all(|s| !s.coeff.is_zero())
    }

    /// Fingerprints, normal form and exact recombination, in that order.
    pub fn verify(&self, generators: &[Polynomial]) -> Result<(), GroebnerError> {
        if self.generator_fingerprints.len() != generators.len() {
            return Err(GroebnerError::FingerprintCount {
                expected: generators.len(),
                found: self.generator_fingerprints.len(),
            });
        }
        for (i, (fp, g)) in self.generator_fingerprints.iter().zip(generators).enumerate() {
            if *fp != g.fingerprint() {
                return Err(GroebnerError::FingerprintMismatch(i));
            }
        }
        if !self.is_normalized() {
            return Err(GroebnerError::NotNormalized);
        }
        if self.recombine(generators)? != self.claim {
            return Err(GroebnerError::RecombinationMismatch);
        }
        Ok(())
    }

    pub fn max_degree(&self, generators: &[Polynomial]) -> usize {
        self.summands
            .iter()
            .map(|s| s.left.len() + s.right.len() + generators[s.generator].degree().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub enum MembershipOutcome {
    Proved(MembershipCertificate),
    Inconclusive {
        status: CompletionStatus,
        basis_size: usize,
        iterations: usize,
        remainder: Polynomial,
    },
}

impl MembershipOutcome {
    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            MembershipOutcome::Proved(c) => Some(c),
            MembershipOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Semi-decides `f ∈ (F)`.
///
/// The claim is reduced against the basis after every insertion, so the run
/// stops as soon as a certificate exists.
pub fn membership_certificate(
    f: &Polynomial,
    generators: &[Polynomial],
    cfg: GbConfig,
) -> Result<MembershipOutcome, GroebnerError> {
    if generators.is_empty() {
        return Err(GroebnerError::NoGenerators);
    }
    let mut completion = Completion::new(generators, cfg);
    // invariant: f = remainder.value + remainder.provenance(F) with negated sign
    let mut remainder = TracedPoly {
        value: f.clone(),
        provenance: Combination::default(),
    };
    loop {
        remainder = reduce_traced(remainder, completion.basis());
        if remainder.value.is_zero() {
            break;
        }
        loop {
            match completion.step() {
                None => {
                    return Ok(MembershipOutcome::Inconclusive {
                        status: completion.status(),
                        basis_size: completion.basis().len(),
                        iterations: completion.iterations(),
                        remainder: remainder.value,
                    })
                }
                Some(true) => break,
                Some(false) => {}
            }
        }
    }
    // 0 = f + Σ λ·a·g·b, hence f = −provenance
    let summands = remainder.provenance.scale(&-Rational::one()).summands();
    let cert = MembershipCertificate::new(f.clone(), generators, summands)?;
    Ok(MembershipOutcome::Proved(cert))
}
