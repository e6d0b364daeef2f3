//! Random instance generators and independent oracles shared by the
//! property suites and the acceptance run.
#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use opcert::free_algebra::{ratio, Alphabet, Polynomial, Rational, Var, Word};
use opcert::matrix::Matrix;
use opcert::quiver::{Edge, LabelledQuiver, SignatureSet};
use opcert::representation::QuiverRepresentation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(["x", "y", "z", "u", "v", "w"].iter().take(n).copied()).unwrap()
}

pub fn coeff(rng: &mut impl Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5i64..=5);
    }
    let d = if rng.gen_bool(0.2) { rng.gen_range(2i64..=4) } else { 1 };
    ratio(n, d)
}

pub fn word(rng: &mut impl Rng, nvars: usize, min_len: usize, max_len: usize) -> Word {
    let len = rng.gen_range(min_len..=max_len);
    Word::from((0..len).map(|_| Var(rng.gen_range(0..nvars as u32))).collect::<Vec<_>>())
}

pub fn poly(rng: &mut impl Rng, nvars: usize, max_terms: usize, max_len: usize) -> Polynomial {
    let n = rng.gen_range(0..=max_terms);
    Polynomial::from_terms((0..n).map(|_| (coeff(rng), word(rng, nvars, 0, max_len))))
}

pub fn nonzero_poly(rng: &mut impl Rng, nvars: usize, max_terms: usize, max_len: usize) -> Polynomial {
    loop {
        let p = poly(rng, nvars, max_terms.max(1), max_len);
        if !p.is_zero() {
            return p;
        }
    }
}

/// All words over `nvars` letters of length at most `max_len`.
pub fn words_up_to(nvars: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..nvars as u32 {
                next.push(w.concat(&Word::letter(Var(x))));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuiverShape {
    Any,
    /// Outgoing labels distinct at every vertex.
    DistinctOutgoing,
}

pub fn quiver(
    rng: &mut impl Rng,
    nlabels: usize,
    max_vertices: usize,
    max_edges: usize,
    shape: QuiverShape,
) -> LabelledQuiver {
    let a = alphabet(nlabels);
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let mut edges = Vec::new();
    let mut used = BTreeSet::new();
    for _ in 0..m {
        let source = rng.gen_range(0..n);
        let target = rng.gen_range(0..n);
        let label = Var(rng.gen_range(0..nlabels as u32));
        if shape == QuiverShape::DistinctOutgoing && !used.insert((source, label)) {
            continue;
        }
        edges.push(Edge { source, target, label });
    }
    let names = (0..n).map(|i| format!("q{i}")).collect();
    LabelledQuiver::new(&a, names, edges).unwrap()
}

/// σ(m) by enumerating every edge sequence whose label is `m`.
pub fn enumerate_signature(q: &LabelledQuiver, m: &Word) -> SignatureSet {
    let n = q.num_vertices();
    let mut sig = SignatureSet::empty(n);
    // the rightmost letter labels the first edge
    let steps: Vec<Var> = m.letters().iter().rev().copied().collect();
    fn walk(q: &LabelledQuiver, steps: &[Var], at: usize, start: usize, sig: &mut SignatureSet) {
        match steps.split_first() {
            None => sig.insert(start, at),
            Some((x, rest)) => {
                for e in q.edges() {
                    if e.source == at && e.label == *x {
                        walk(q, rest, e.target, start, sig);
                    }
                }
            }
        }
    }
    for v in 0..n {
        walk(q, &steps, v, v, &mut sig);
    }
    sig
}

/// Words of length ≤ `max_len` grouped by their (nonempty) signature.
pub fn signature_classes(q: &LabelledQuiver, nvars: usize, max_len: usize) -> Vec<Vec<Word>> {
    let mut classes: BTreeMap<Vec<(usize, usize)>, Vec<Word>> = BTreeMap::new();
    for w in words_up_to(nvars, max_len) {
        let sig = q.signature_of_monomial(&w);
        if !sig.is_empty() {
            classes.entry(sig.pairs()).or_default().push(w);
        }
    }
    classes.into_values().collect()
}

/// A nonzero uniformly compatible polynomial, if the quiver admits one.
pub fn uniform_poly(rng: &mut impl Rng, q: &LabelledQuiver, nvars: usize, max_len: usize) -> Option<Polynomial> {
    let classes = signature_classes(q, nvars, max_len);
    let class = classes.choose(rng)?;
    let k = rng.gen_range(1..=class.len().min(3));
    let words: Vec<&Word> = class.choose_multiple(rng, k).collect();
    Some(Polynomial::from_terms(words.into_iter().map(|w| (coeff(rng), w.clone()))))
}

/// A nonzero compatible polynomial: all support words share a chosen pair.
pub fn compatible_poly(rng: &mut impl Rng, q: &LabelledQuiver, nvars: usize, max_len: usize) -> Option<Polynomial> {
    let words = words_up_to(nvars, max_len);
    let n = q.num_vertices();
    let (v, w) = (rng.gen_range(0..n), rng.gen_range(0..n));
    let pool: Vec<&Word> = words
        .iter()
        .filter(|m| q.signature_of_monomial(m).contains(v, w))
        .collect();
    if pool.is_empty() {
        return None;
    }
    let k = rng.gen_range(1..=pool.len().min(4));
    let chosen: Vec<&&Word> = pool.choose_multiple(rng, k).collect();
    Some(Polynomial::from_terms(chosen.into_iter().map(|m| (coeff(rng), (*m).clone()))))
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| ratio(rng.gen_range(-3i64..=3), 1)).collect())
        .collect();
    Matrix::from_rows(data, cols).unwrap()
}

pub fn representation(rng: &mut impl Rng, q: &LabelledQuiver, max_dim: usize) -> QuiverRepresentation {
    let dims: Vec<usize> = (0..q.num_vertices()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let matrices = q
        .edges()
        .iter()
        .map(|e| matrix(rng, dims[e.target], dims[e.source]))
        .collect();
    QuiverRepresentation::new(q, dims, matrices).unwrap()
}

/// Exact row echelon form over ℚ with sparse rows keyed by words (as plain
/// id vectors). Independent of the rewriting and completion code.
#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<Vec<u32>, BTreeMap<Vec<u32>, Rational>>,
}

fn pivot_key(row: &BTreeMap<Vec<u32>, Rational>) -> Option<Vec<u32>> {
    row.keys().max_by(|a, b| (a.len(), *a).cmp(&(b.len(), *b))).cloned()
}

impl Echelon {
    fn reduce(&self, mut row: BTreeMap<Vec<u32>, Rational>) -> BTreeMap<Vec<u32>, Rational> {
        // eliminate pivot columns from the largest key downwards
        let mut done: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        loop {
            let next = row
                .keys()
                .filter(|k| !done.contains(&(k.len(), (*k).clone())))
                .max_by(|a, b| (a.len(), *a).cmp(&(b.len(), *b)))
                .cloned();
            let Some(k) = next else { return row };
            if let Some(p) = self.pivots.get(&k) {
                let c = row[&k].clone();
                for (key, value) in p {
                    let entry = row.entry(key.clone()).or_insert_with(Rational::zero);
                    *entry -= &c * value;
                    if entry.is_zero() {
                        row.remove(key);
                    }
                }
            } else {
                done.insert((k.len(), k));
            }
        }
    }

    pub fn insert(&mut self, row: BTreeMap<Vec<u32>, Rational>) {
        let row = self.reduce(row);
        if let Some(k) = pivot_key(&row) {
            let inv = row[&k].recip();
            let row = row.into_iter().map(|(key, v)| (key, v * &inv)).collect();
            self.pivots.insert(k, row);
        }
    }

    pub fn contains(&self, row: BTreeMap<Vec<u32>, Rational>) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn to_row(p: &Polynomial) -> BTreeMap<Vec<u32>, Rational> {
    p.terms()
        .map(|(w, c)| (w.letters().iter().map(|v| v.0).collect(), c.clone()))
        .collect()
}

fn sandwich_row(left: &[u32], terms: &[(Vec<u32>, Rational)], right: &[u32]) -> BTreeMap<Vec<u32>, Rational> {
    terms
        .iter()
        .map(|(w, c)| {
            let mut k = left.to_vec();
            k.extend_from_slice(w);
            k.extend_from_slice(right);
            (k, c.clone())
        })
        .collect()
}

/// Decides `f ∈ span{a·g·b : deg(a·g·b) ≤ degree}` by Gaussian elimination
/// over all cofactor words. Membership here implies membership in the ideal.
pub fn truncated_membership(generators: &[Polynomial], f: &Polynomial, nvars: usize, degree: usize) -> bool {
    if f.degree().is_some_and(|d| d > degree) {
        return false;
    }
    let mut ech = Echelon::default();
    let words: Vec<Vec<u32>> = words_up_to(nvars, degree)
        .into_iter()
        .map(|w| w.letters().iter().map(|v| v.0).collect())
        .collect();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let terms: Vec<(Vec<u32>, Rational)> = to_row(g).into_iter().collect();
        let dg = g.degree().unwrap();
        if dg > degree {
            continue;
        }
        for a in &words {
            if a.len() + dg > degree {
                continue;
            }
            for b in &words {
                if a.len() + dg + b.len() <= degree {
                    ech.insert(sandwich_row(a, &terms, b));
                }
            }
        }
    }
    ech.contains(to_row(f))
}

/// Random claim `Σ c·a·F[k]·b` with total cofactor degree ≤ `cofactor_degree`.
pub fn ideal_element(
    rng: &mut impl Rng,
    generators: &[Polynomial],
    nvars: usize,
    cofactor_degree: usize,
    summands: usize,
) -> Polynomial {
    let mut f = Polynomial::zero();
    for _ in 0..summands {
        let k = rng.gen_range(0..generators.len());
        let total = rng.gen_range(0..=cofactor_degree);
        let left_len = rng.gen_range(0..=total);
        let a = word(rng, nvars, left_len, left_len);
        let b = word(rng, nvars, total - left_len, total - left_len);
        f.add_scaled_product(&coeff(rng), &a, &generators[k], &b);
    }
    f
}

pub fn one() -> Rational {
    Rational::one()
}
