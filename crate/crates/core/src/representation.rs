//! Representations of labelled quivers by rational matrices.
//!
//! Each vertex gets a dimension and each edge `e` a matrix of shape
//! `dim(t(e)) × dim(s(e))`. A polynomial with signature `(v, w)` is realized by
//! substituting, for every support word, the product of edge matrices along a
//! path from `v` to `w` with that label.

use thiserror::Error;

use crate::free_algebra::Polynomial;
use crate::matrix::Matrix;
use crate::quiver::{EdgeId, LabelledQuiver, Path, StructuralConsistency, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepresentationError {
    #[error("expected {expected} vertex dimensions, got {found}")]
    DimensionCount { expected: usize, found: usize },
    #[error("expected {expected} edge matrices, got {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("edge {edge} needs a {expected:?} matrix, got {found:?}")]
    Shape {
        edge: EdgeId,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("signature ({0}, {1}) is not admitted by the polynomial")]
    SignatureNotAdmitted(VertexId, VertexId),
    #[error("assumption {0} is not uniformly compatible with the quiver")]
    AssumptionNotUniform(usize),
    #[error("claim is not compatible with the quiver")]
    ClaimIncompatible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRepresentation {
    dims: Vec<usize>,
    matrices: Vec<Matrix>,
}

impl QuiverRepresentation {
    pub fn new(
        quiver: &LabelledQuiver,
        dims: Vec<usize>,
        matrices: Vec<Matrix>,
    ) -> Result<Self, RepresentationError> {
        let rep = QuiverRepresentation { dims, matrices };
        rep.check_shapes(quiver)?;
        Ok(rep)
    }

    pub fn check_shapes(&self, quiver: &LabelledQuiver) -> Result<(), RepresentationError> {
        if self.dims.len() != quiver.num_vertices() {
            return Err(RepresentationError::DimensionCount {
                expected: quiver.num_vertices(),
                found: self.dims.len(),
            });
        }
        if self.matrices.len() != quiver.edges().len() {
            return Err(RepresentationError::MatrixCount {
                expected: quiver.edges().len(),
                found: self.matrices.len(),
            });
        }
        for (id, (e, m)) in quiver.edges().iter().zip(&self.matrices).enumerate() {
            let expected = (self.dims[e.target], self.dims[e.source]);
            if m.shape() != expected {
                return Err(RepresentationError::Shape {
                    edge: id,
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[v]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, e: EdgeId) -> &Matrix {
        &self.matrices[e]
    }

    /// `φ(e_n)·…·φ(e_1)` for edges given in traversal order starting at `source`.
    pub fn path_map(&self, source: VertexId, edges: &[EdgeId]) -> Matrix {
        edges
            .iter()
            .fold(Matrix::identity(self.dims[source]), |acc, &e| &self.matrices[e] * &acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepresentationConsistency {
    /// Certified for all path lengths by one of the structural rules.
    ConsistentStructural(StructuralConsistency),
    /// Every duplicate-labelled path pair up to the given length agrees.
    ConsistentUpTo(usize),
    Inconsistent(Path, Path),
}

pub fn check_representation_consistency(
    rep: &QuiverRepresentation,
    quiver: &LabelledQuiver,
    max_len: usize,
) -> Result<RepresentationConsistency, RepresentationError> {
    rep.check_shapes(quiver)?;
    let structural = quiver.structural_consistency();
    if structural.is_consistent() {
        return Ok(RepresentationConsistency::ConsistentStructural(structural));
    }
    for group in quiver.labelled_path_groups(max_len).into_values() {
        let Some((first, rest)) = group.split_first() else {
            continue;
        };
        let reference = rep.path_map(first.source, &first.edges);
        for other in rest {
            if rep.path_map(other.source, &other.edges) != reference {
                return Ok(RepresentationConsistency::Inconsistent(
                    first.clone(),
                    other.clone(),
                ));
            }
        }
    }
    Ok(RepresentationConsistency::ConsistentUpTo(max_len))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub source: VertexId,
    pub target: VertexId,
    /// Shape `dim(target) × dim(source)`.
    pub matrix: Matrix,
}

/// `φ_{v,w}(f)`; the representation must be consistent for this to be
/// independent of the chosen paths.
pub fn realize(
    rep: &QuiverRepresentation,
    quiver: &LabelledQuiver,
    f: &Polynomial,
    (source, target): (VertexId, VertexId),
) -> Result<Realization, RepresentationError> {
    if !quiver.signature_of_poly(f).contains(source, target) {
        return Err(RepresentationError::SignatureNotAdmitted(source, target));
    }
    let mut matrix = Matrix::zeros(rep.dim(target), rep.dim(source));
    for (word, c) in f.terms() {
        let path = quiver
            .find_path(source, target, word)
            .ok_or(RepresentationError::SignatureNotAdmitted(source, target))?;
        matrix.add_assign_scaled(c, &rep.path_map(source, &path));
    }
    Ok(Realization {
        source,
        target,
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremInstance {
    ClaimHolds,
    AssumptionViolated {
        index: usize,
        source: VertexId,
        target: VertexId,
    },
    /// Contradicts the main theorem when the claim was proved; a hard diagnostic.
    ClaimViolated { source: VertexId, target: VertexId },
}

/// Evaluates every realization of every assumption and then of the claim.
pub fn verify_theorem_instance(
    rep: &QuiverRepresentation,
    quiver: &LabelledQuiver,
    assumptions: &[Polynomial],
    claim: &Polynomial,
) -> Result<TheoremInstance, RepresentationError> {
    rep.check_shapes(quiver)?;
    for (i, g) in assumptions.iter().enumerate() {
        if !quiver.is_uniformly_compatible(g) {
            return Err(RepresentationError::AssumptionNotUniform(i));
        }
    }
    if !quiver.is_compatible(claim) {
        return Err(RepresentationError::ClaimIncompatible);
    }
    for (index, g) in assumptions.iter().enumerate() {
        for (source, target) in quiver.signature_of_poly(g).pairs() {
            if !realize(rep, quiver, g, (source, target))?.matrix.is_zero() {
                return Ok(TheoremInstance::AssumptionViolated {
                    index,
                    source,
                    target,
                });
            }
        }
    }
    for (source, target) in quiver.signature_of_poly(claim).pairs() {
        if !realize(rep, quiver, claim, (source, target))?.matrix.is_zero() {
            return Ok(TheoremInstance::ClaimViolated { source, target });
        }
    }
    Ok(TheoremInstance::ClaimHolds)
}
