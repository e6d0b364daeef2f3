//! Proofs of linear operator identities.
//!
//! An identity is encoded as a noncommutative polynomial `f`, the assumptions
//! as polynomials `F`, and the shapes of the operators as a labelled quiver.
//! If `f` lies in the two-sided ideal generated by `F`, every element of `F` is
//! uniformly compatible with the quiver and `f` is compatible with it, then
//! every realization of `f` vanishes in every consistent representation whose
//! realizations of `F` vanish. This crate certifies both halves:
//!
//! * [`groebner`] produces an explicit cofactor representation of `f` over `F`,
//! * [`quiver`] computes signature sets and compatibility,
//! * [`theorem`] bundles and independently rechecks the two,
//! * [`representation`] evaluates polynomials on concrete rational matrices.

pub mod free_algebra;
pub mod groebner;
pub mod matrix;
pub mod quiver;
pub mod representation;
pub mod rewriting;
pub mod textio;
pub mod theorem;

pub use free_algebra::{Alphabet, MonomialOrder, Polynomial, Rational, Var, Word};
pub use groebner::{GbConfig, MembershipCertificate, MembershipOutcome};
pub use quiver::{LabelledQuiver, SignatureSet, StructuralConsistency};
