//! Labelled quivers and signature sets.
//!
//! A path `p = e_n … e_1` (edge `e_1` traversed first) has label
//! `l(e_n) … l(e_1)`, so the rightmost letter of a word is the first edge
//! walked. [`LabelledQuiver::signature_of_monomial`] composes the per-letter
//! relations in that order.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::free_algebra::{Alphabet, Polynomial, Var, Word};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("a quiver needs at least one vertex")]
    NoVertices,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("label `{0}` is not a declared variable")]
    UndeclaredLabel(String),
    #[error("variable id {0} is not declared")]
    UndeclaredVariable(u32),
}

/// Set of (source, target) vertex pairs stored as a dense boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureSet {
    n: usize,
    bits: Vec<bool>,
}

impl fmt::Debug for SignatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl SignatureSet {
    pub fn empty(n: usize) -> Self {
        SignatureSet {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn full(n: usize) -> Self {
        SignatureSet {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v, v);
        }
        s
    }

    pub fn from_pairs<I: IntoIterator<Item = (VertexId, VertexId)>>(n: usize, pairs: I) -> Self {
        let mut s = Self::empty(n);
        for (a, b) in pairs {
            s.insert(a, b);
        }
        s
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, source: VertexId, target: VertexId) {
        self.bits[source * self.n + target] = true;
    }

    pub fn contains(&self, source: VertexId, target: VertexId) -> bool {
        source < self.n && target < self.n && self.bits[source * self.n + target]
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|s| (0..self.n).map(move |t| (s, t)))
            .filter(|&(s, t)| self.contains(s, t))
            .collect()
    }

    pub fn intersect(&self, other: &SignatureSet) -> SignatureSet {
        debug_assert_eq!(self.n, other.n);
        SignatureSet {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }

    pub fn union(&self, other: &SignatureSet) -> SignatureSet {
        debug_assert_eq!(self.n, other.n);
        SignatureSet {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &SignatureSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// Relational composite: `(s, t)` such that `(s, u) ∈ self` and `(u, t) ∈ next`.
    pub fn then(&self, next: &SignatureSet) -> SignatureSet {
        let n = self.n;
        let mut out = SignatureSet::empty(n);
        for s in 0..n {
            for u in 0..n {
                if !self.bits[s * n + u] {
                    continue;
                }
                for t in 0..n {
                    if next.bits[u * n + t] {
                        out.bits[s * n + t] = true;
                    }
                }
            }
        }
        out
    }

    pub fn sources(&self) -> Vec<VertexId> {
        (0..self.n)
            .filter(|&s| (0..self.n).any(|t| self.contains(s, t)))
            .collect()
    }

    pub fn targets(&self) -> Vec<VertexId> {
        (0..self.n)
            .filter(|&t| (0..self.n).any(|s| self.contains(s, t)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub label: Var,
}

/// A nonempty path; `edges[0]` leaves `source` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructuralConsistency {
    /// Outgoing edges of every vertex carry distinct labels.
    BySourceRule,
    /// Incoming edges of every vertex carry distinct labels.
    ByTargetRule,
    Inconclusive,
}

impl StructuralConsistency {
    pub fn is_consistent(self) -> bool {
        !matches!(self, StructuralConsistency::Inconclusive)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StructuralConsistency::BySourceRule => "by_source_rule",
            StructuralConsistency::ByTargetRule => "by_target_rule",
            StructuralConsistency::Inconclusive => "inconclusive",
        }
    }

    pub fn from_str_tag(s: &str) -> Option<Self> {
        match s {
            "by_source_rule" => Some(StructuralConsistency::BySourceRule),
            "by_target_rule" => Some(StructuralConsistency::ByTargetRule),
            "inconclusive" => Some(StructuralConsistency::Inconclusive),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabelledQuiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    num_labels: usize,
    letter_relations: Vec<SignatureSet>,
}

impl PartialEq for LabelledQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.num_labels == other.num_labels
    }
}

impl Eq for LabelledQuiver {}

impl LabelledQuiver {
    pub fn new(
        alphabet: &Alphabet,
        vertices: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<Self, QuiverError> {
        if vertices.is_empty() {
            return Err(QuiverError::NoVertices);
        }
        for (i, name) in vertices.iter().enumerate() {
            if vertices[..i].contains(name) {
                return Err(QuiverError::DuplicateVertex(name.clone()));
            }
        }
        let n = vertices.len();
        let mut letter_relations = vec![SignatureSet::empty(n); alphabet.len()];
        for e in &edges {
            for v in [e.source, e.target] {
                if v >= n {
                    return Err(QuiverError::VertexOutOfRange(v));
                }
            }
            if !alphabet.contains(e.label) {
                return Err(QuiverError::UndeclaredVariable(e.label.0));
            }
            letter_relations[e.label.index()].insert(e.source, e.target);
        }
        Ok(LabelledQuiver {
            vertices,
            edges,
            num_labels: alphabet.len(),
            letter_relations,
        })
    }

    /// Builds a quiver from vertex names and `(source, target, label)` name triples.
    pub fn from_names(
        alphabet: &Alphabet,
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, QuiverError> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let vertex = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| QuiverError::UnknownVertex(name.to_owned()))
        };
        let edges = edges
            .iter()
            .map(|&(s, t, l)| {
                Ok(Edge {
                    source: vertex(s)?,
                    target: vertex(t)?,
                    label: alphabet
                        .var(l)
                        .ok_or_else(|| QuiverError::UndeclaredLabel(l.to_owned()))?,
                })
            })
            .collect::<Result<Vec<_>, QuiverError>>()?;
        Self::new(alphabet, vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label_relation(&self, x: Var) -> Result<SignatureSet, QuiverError> {
        self.letter_relations
            .get(x.index())
            .cloned()
            .ok_or(QuiverError::UndeclaredVariable(x.0))
    }

    fn letter(&self, x: Var) -> SignatureSet {
        self.letter_relations
            .get(x.index())
            .cloned()
            .unwrap_or_else(|| SignatureSet::empty(self.num_vertices()))
    }

    pub fn signature_of_monomial(&self, m: &Word) -> SignatureSet {
        let mut sig = SignatureSet::diagonal(self.num_vertices());
        for &x in m.letters().iter().rev() {
            if sig.is_empty() {
                break;
            }
            sig = sig.then(&self.letter(x));
        }
        sig
    }

    pub fn signature_of_poly(&self, f: &Polynomial) -> SignatureSet {
        let mut sig = SignatureSet::full(self.num_vertices());
        for m in f.support() {
            sig = sig.intersect(&self.signature_of_monomial(m));
            if sig.is_empty() {
                break;
            }
        }
        sig
    }

    pub fn is_compatible(&self, f: &Polynomial) -> bool {
        !self.signature_of_poly(f).is_empty()
    }

    /// Compatible, and every support monomial has the same signature set.
    pub fn is_uniformly_compatible(&self, f: &Polynomial) -> bool {
        let mut sigs = f.support().map(|m| self.signature_of_monomial(m));
        match sigs.next() {
            None => self.num_vertices() > 0,
            Some(first) => !first.is_empty() && sigs.all(|s| s == first),
        }
    }

    pub fn structural_consistency(&self) -> StructuralConsistency {
        let distinct_by = |key: fn(&Edge) -> VertexId| {
            let mut seen = std::collections::HashSet::new();
            self.edges.iter().all(|e| seen.insert((key(e), e.label)))
        };
        if distinct_by(|e| e.source) {
            StructuralConsistency::BySourceRule
        } else if distinct_by(|e| e.target) {
            StructuralConsistency::ByTargetRule
        } else {
            StructuralConsistency::Inconclusive
        }
    }

    /// Label of a path: the word `l(e_n) … l(e_1)`.
    pub fn path_label(&self, edges: &[EdgeId]) -> Word {
        Word::from(
            edges
                .iter()
                .rev()
                .map(|&e| self.edges[e].label)
                .collect::<Vec<_>>(),
        )
    }

    /// Nonempty paths of length at most `max_len`, grouped by (source, target, label).
    pub(crate) fn labelled_path_groups(
        &self,
        max_len: usize,
    ) -> BTreeMap<(VertexId, VertexId, Word), Vec<Path>> {
        let mut out_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); self.num_vertices()];
        for (id, e) in self.edges.iter().enumerate() {
            out_edges[e.source].push(id);
        }
        let mut groups: BTreeMap<(VertexId, VertexId, Word), Vec<Path>> = BTreeMap::new();
        // frontier of (source, current vertex, edges so far)
        let mut frontier: Vec<(VertexId, VertexId, Vec<EdgeId>)> =
            (0..self.num_vertices()).map(|v| (v, v, Vec::new())).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (source, at, path) in &frontier {
                for &e in &out_edges[*at] {
                    let mut p = path.clone();
                    p.push(e);
                    let target = self.edges[e].target;
                    groups
                        .entry((*source, target, self.path_label(&p)))
                        .or_default()
                        .push(Path {
                            source: *source,
                            target,
                            edges: p.clone(),
                        });
                    next.push((*source, target, p));
                }
            }
            frontier = next;
        }
        groups
    }

    /// Distinct path pairs (length ≤ `max_len`) sharing source, target and label.
    pub fn duplicate_labelled_paths(&self, max_len: usize) -> Vec<(Path, Path)> {
        let mut pairs = Vec::new();
        for group in self.labelled_path_groups(max_len).into_values() {
            for i in 0..group.len() {
                for j in i + 1..group.len() {
                    pairs.push((group[i].clone(), group[j].clone()));
                }
            }
        }
        pairs.sort_by(|a, b| {
            (a.0.edges.len(), &a.0.edges, &a.1.edges).cmp(&(b.0.edges.len(), &b.0.edges, &b.1.edges))
        });
        pairs
    }

    /// Lexicographically smallest edge sequence (in traversal order) of a path
    /// from `source` to `target` labelled `m`. The empty word yields an empty
    /// sequence when `source == target`.
    pub fn find_path(&self, source: VertexId, target: VertexId, m: &Word) -> Option<Vec<EdgeId>> {
        let n = self.num_vertices();
        if source >= n || target >= n {
            return None;
        }
        let steps: Vec<Var> = m.letters().iter().rev().copied().collect();
        let k = steps.len();
        // feasible[j][u]: from u, walking steps[j..] can end at target
        let mut feasible = vec![vec![false; n]; k + 1];
        feasible[k][target] = true;
        for j in (0..k).rev() {
            for e in &self.edges {
                if e.label == steps[j] && feasible[j + 1][e.target] {
                    feasible[j][e.source] = true;
                }
            }
        }
        if !feasible[0][source] {
            return None;
        }
        let mut at = source;
        let mut path = Vec::with_capacity(k);
        for j in 0..k {
            let (id, e) = self
                .edges
                .iter()
                .enumerate()
                .find(|(_, e)| e.source == at && e.label == steps[j] && feasible[j + 1][e.target])?;
            path.push(id);
            at = e.target;
        }
        Some(path)
    }
}

pub fn label_relation(q: &LabelledQuiver, x: Var) -> Result<SignatureSet, QuiverError> {
    q.label_relation(x)
}

pub fn signature_of_monomial(q: &LabelledQuiver, m: &Word) -> SignatureSet {
    q.signature_of_monomial(m)
}

pub fn signature_of_poly(q: &LabelledQuiver, f: &Polynomial) -> SignatureSet {
    q.signature_of_poly(f)
}

pub fn is_compatible(q: &LabelledQuiver, f: &Polynomial) -> bool {
    q.is_compatible(f)
}

pub fn is_uniformly_compatible(q: &LabelledQuiver, f: &Polynomial) -> bool {
    q.is_uniformly_compatible(f)
}

pub fn structural_consistency(q: &LabelledQuiver) -> StructuralConsistency {
    q.structural_consistency()
}

pub fn duplicate_labelled_paths(q: &LabelledQuiver, max_len: usize) -> Vec<(Path, Path)> {
    q.duplicate_labelled_paths(max_len)
}
