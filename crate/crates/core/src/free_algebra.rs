//! Words and polynomials in the free algebra over the rationals.
//!
//! A [`Word`] is a finite sequence of variables, the empty word being the
//! multiplicative identity. A [`Polynomial`] is a finite map from words to
//! nonzero rational coefficients. Words are ordered degree-lexicographically
//! with variable precedence given by declaration order in the [`Alphabet`], so
//! the terms of a polynomial are always stored sorted by the monomial order and
//! the leading term is the last entry of the map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Formats a rational as `p/q`, always including the denominator.
pub fn rational_to_fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p` or `p/q` (optional leading minus) into a canonical rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = den.parse().ok()?;
    if denom.is_zero() || den.starts_with('-') || den.starts_with('+') {
        return None;
    }
    Some(Rational::new(numer, denom))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("variable id {0} is not declared in the alphabet")]
    UndeclaredVariable(u32),
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
}

/// Index of a variable in its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered set of variable names; declaration order is the variable precedence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Var>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet {
            names: Vec::new(),
            lookup: HashMap::new(),
        };
        for name in names {
            alphabet.push(name.into())?;
        }
        Ok(alphabet)
    }

    pub(crate) fn push(&mut self, name: String) -> Result<Var, AlgebraError> {
        if !is_identifier(&name) {
            return Err(AlgebraError::InvalidVariableName(name));
        }
        if self.lookup.contains_key(&name) {
            return Err(AlgebraError::DuplicateVariable(name));
        }
        let var = Var(self.names.len() as u32);
        self.lookup.insert(name.clone(), var);
        self.names.push(name);
        Ok(var)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.lookup.get(name).copied()
    }

    pub fn contains(&self, var: Var) -> bool {
        var.index() < self.names.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len() as u32).map(Var)
    }

    pub fn check_word(&self, word: &Word) -> Result<(), AlgebraError> {
        match word.letters().iter().find(|v| !self.contains(**v)) {
            Some(v) => Err(AlgebraError::UndeclaredVariable(v.0)),
            None => Ok(()),
        }
    }

    pub fn check_poly(&self, f: &Polynomial) -> Result<(), AlgebraError> {
        f.support().try_for_each(|w| self.check_word(w))
    }
}

/// A monomial: a finite sequence of variables.
///
/// `Ord` is degree-lexicographic: shorter words are smaller, words of equal
/// length compare letter by letter from the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Var>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Var>> for Word {
    fn from(v: Vec<Var>) -> Self {
        Word(v)
    }
}

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn letter(v: Var) -> Self {
        Word(vec![v])
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Word(ids.iter().map(|&i| Var(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right`
    pub fn sandwich(&self, left: &Word, right: &Word) -> Word {
        let mut v = Vec::with_capacity(left.len() + self.len() + right.len());
        v.extend_from_slice(&left.0);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&right.0);
        Word(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// Start positions of every occurrence of `d` in `self`, overlapping ones included.
    pub fn occurrences<'a>(&'a self, d: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = d.len();
        let count = if n > self.len() {
            0
        } else {
            self.len() - n + 1
        };
        (0..count).filter(move |&i| self.0[i..i + n] == d.0[..])
    }

    pub fn find(&self, d: &Word) -> Option<usize> {
        self.occurrences(d).next()
    }

    pub fn contains_factor(&self, d: &Word) -> bool {
        self.find(d).is_some()
    }

    /// All factorizations `self = a · d · b`, ordered by start position of `d`.
    pub fn divisions(&self, d: &Word) -> Vec<(Word, Word)> {
        self.occurrences(d)
            .map(|i| (self.slice(0..i), self.slice(i + d.len()..self.len())))
            .collect()
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }

    pub fn to_names(&self, alphabet: &Alphabet) -> Vec<String> {
        self.0.iter().map(|&v| alphabet.name(v).to_owned()).collect()
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, v) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.alphabet.name(*v))?;
        }
        Ok(())
    }
}

pub fn word_concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

pub fn word_divisions(m: &Word, d: &Word) -> Vec<(Word, Word)> {
    m.divisions(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Degree first, then lexicographic by declaration order.
    #[default]
    DegLex,
}

impl MonomialOrder {
    pub fn compare(self, u: &Word, v: &Word) -> Ordering {
        match self {
            MonomialOrder::DegLex => u.cmp(v),
        }
    }
}

/// Element of the free algebra: a map from words to nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Word, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Word::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Word::letter(v))
    }

    pub fn word(w: Word) -> Self {
        Self::term(Rational::one(), w)
    }

    pub fn term(c: Rational, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, Word)>>(iter: I) -> Self {
        let mut f = Polynomial::zero();
        for (c, w) in iter {
            f.add_term(c, w);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rational)> + '_ {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = &Word> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn leading_term(&self) -> Option<(&Word, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self, ord: MonomialOrder) -> Result<(Word, Rational), AlgebraError> {
        let (w, c) = match ord {
            MonomialOrder::DegLex => self.leading_term(),
        }
        .ok_or(AlgebraError::ZeroPolynomial)?;
        Ok((w.clone(), c.clone()))
    }

    pub fn add_term(&mut self, c: Rational, w: Word) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    /// `self += c · left · g · right`
    pub fn add_scaled_product(&mut self, c: &Rational, left: &Word, g: &Polynomial, right: &Word) {
        if c.is_zero() {
            return;
        }
        for (w, d) in g.terms() {
            self.add_term(c * d, w.sandwich(left, right));
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    /// `left · self · right` for words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.sandwich(left, right), c.clone()))
                .collect(),
        }
    }

    pub fn mul_poly(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (u, c) in self.terms() {
            for (v, d) in other.terms() {
                out.add_term(c * d, u.concat(v));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        (0..n).fold(Polynomial::one(), |acc, _| acc.mul_poly(self))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alphabet }
    }

    /// SHA-256 over the terms in descending order, encoded as
    /// `p/q:i.j.k;` with variable ids, so it does not depend on names.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut text = String::new();
        for (w, c) in self.terms().rev() {
            text.push_str(&rational_to_fraction(c));
            text.push(':');
            let ids: Vec<String> = w.letters().iter().map(|v| v.0.to_string()).collect();
            text.push_str(&ids.join("."));
            text.push(';');
        }
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

pub fn poly_add(f: &Polynomial, g: &Polynomial) -> Polynomial {
    f + g
}

pub fn poly_scale(c: &Rational, f: &Polynomial) -> Polynomial {
    f.scale(c)
}

pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Polynomial {
    f.mul_poly(g)
}

pub fn leading_monomial(f: &Polynomial, ord: MonomialOrder) -> Result<(Word, Rational), AlgebraError> {
    f.leading_monomial(ord)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(c.clone(), w.clone());
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(-c, w.clone());
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_poly(rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.mul_poly(&rhs)
    }
}

/// Canonical text form: terms in descending monomial order, explicit `*`.
pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.poly.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if w.is_empty() {
                write!(f, "{}", magnitude)?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{}*", magnitude)?;
                }
                write!(f, "{}", w.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}
