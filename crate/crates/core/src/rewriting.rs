//! Rewriting steps and cofactor-tracked reduction.
//!
//! A rewriting step replaces `f` by `f + λ·a·g·b` where `a·m·b` is a monomial
//! of `f` for some monomial `m` of `g`. [`reduce`] applies steps that cancel
//! monomials, largest first, and records them so that
//! `f = normal_form − Σ λᵢ·aᵢ·gᵢ·bᵢ`.

use num_traits::Zero;
use thiserror::Error;

use crate::free_algebra::{MonomialOrder, Polynomial, Rational, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("no monomial of the rewriter occurs in the polynomial at the given cofactors")]
    NoMatchingOccurrence,
    #[error("trace step references rewriter {0}, which does not exist")]
    UnknownRewriter(usize),
}

/// One step `f ↦ f + coeff·left·G[index]·right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTraceStep {
    pub coeff: Rational,
    pub left: Word,
    pub index: usize,
    pub right: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub normal_form: Polynomial,
    pub trace: Vec<RewriteTraceStep>,
}

impl ReductionResult {
    /// `normal_form − Σ λᵢ·aᵢ·gᵢ·bᵢ`, which equals the reduced input.
    pub fn recombine<P: AsRef<Polynomial>>(&self, rewriters: &[P]) -> Polynomial {
        let mut out = self.normal_form.clone();
        for step in &self.trace {
            out.add_scaled_product(&-&step.coeff, &step.left, rewriters[step.index].as_ref(), &step.right);
        }
        out
    }
}

pub fn rewrite_step(
    f: &Polynomial,
    g: &Polynomial,
    a: &Word,
    b: &Word,
    lambda: &Rational,
) -> Result<Polynomial, RewriteError> {
    let matches = g
        .support()
        .any(|m| !f.coeff(&m.sandwich(a, b)).is_zero());
    if !matches {
        return Err(RewriteError::NoMatchingOccurrence);
    }
    let mut h = f.clone();
    h.add_scaled_product(lambda, a, g, b);
    Ok(h)
}

/// First rewriter (by index) whose leading monomial divides `m`, with the
/// leftmost occurrence.
fn find_divisor<P: AsRef<Polynomial>>(m: &Word, rewriters: &[P]) -> Option<(usize, usize)> {
    rewriters.iter().enumerate().find_map(|(i, g)| {
        let (lm, _) = g.as_ref().leading_term()?;
        m.find(lm).map(|pos| (i, pos))
    })
}

/// Full reduction of `f` by `rewriters`.
///
/// Strategy: take the largest monomial that some leading monomial divides,
/// use the lowest-index rewriter and its leftmost occurrence, and cancel the
/// monomial. Monomials above the last cancelled one never change again, so the
/// scan resumes strictly below it.
pub fn reduce<P: AsRef<Polynomial>>(
    f: &Polynomial,
    rewriters: &[P],
    ord: MonomialOrder,
) -> ReductionResult {
    match ord {
        MonomialOrder::DegLex => reduce_owned(f.clone(), rewriters),
    }
}

pub(crate) fn reduce_owned<P: AsRef<Polynomial>>(f: Polynomial, rewriters: &[P]) -> ReductionResult {
    let mut current = f;
    let mut trace = Vec::new();
    let mut bound: Option<Word> = None;
    loop {
        let found = {
            let mut candidates: Box<dyn Iterator<Item = (&Word, &Rational)>> = match &bound {
                Some(b) => Box::new(current.term_map().range(..b.clone()).rev()),
                None => Box::new(current.term_map().iter().rev()),
            };
            candidates.find_map(|(m, c)| {
                find_divisor(m, rewriters).map(|(i, pos)| (m.clone(), c.clone(), i, pos))
            })
        };
        let Some((m, c, index, pos)) = found else {
            break;
        };
        let g = rewriters[index].as_ref();
        let (lm, lc) = g.leading_term().expect("divisor has a leading term");
        let coeff = -(c / lc);
        let left = m.slice(0..pos);
        let right = m.slice(pos + lm.len()..m.len());
        current.add_scaled_product(&coeff, &left, g, &right);
        debug_assert!(current.coeff(&m).is_zero());
        trace.push(RewriteTraceStep {
            coeff,
            left,
            index,
            right,
        });
        bound = Some(m);
    }
    ReductionResult {
        normal_form: current,
        trace,
    }
}

/// Replays `trace` on `f` via [`rewrite_step`], returning every intermediate polynomial.
pub fn replay<P: AsRef<Polynomial>>(
    f: &Polynomial,
    rewriters: &[P],
    trace: &[RewriteTraceStep],
) -> Result<Vec<Polynomial>, RewriteError> {
    let mut states = vec![f.clone()];
    for step in trace {
        let g = rewriters
            .get(step.index)
            .ok_or(RewriteError::UnknownRewriter(step.index))?;
        let next = rewrite_step(
            states.last().expect("nonempty"),
            g.as_ref(),
            &step.left,
            &step.right,
            &step.coeff,
        )?;
        states.push(next);
    }
    Ok(states)
}

impl AsRef<Polynomial> for Polynomial {
    fn as_ref(&self) -> &Polynomial {
        self
    }
}
