//! Problem files.
//!
//! ```text
//! vars a ai y
//! assume g = a*ai*a - a
//! claim a*(ai + y - y*a*ai)*a - a
//! vertex v
//! vertex w
//! edge v -> w : a
//! ...
//! dim v = 2
//! matrix e1 = [[1, 0], [0, 0]]
//! witness (1 - a*y)*g
//! ```
//!
//! Statements may continue on following lines that start with whitespace.
//! Quiver and representation sections are optional. A `witness` expresses
//! the claim as a combination of the assumptions, written with assumption
//! names as extra letters; every term must contain exactly one of them.

use super::poly::{parse_polynomial_at, Origin};
use super::quiver::{QuiverBuilder, RepresentationBuilder};
use super::{content_lines, split_keyword, TextError};
use crate::free_algebra::{is_identifier, Alphabet, Polynomial};
use crate::groebner::Summand;
use crate::quiver::LabelledQuiver;
use crate::representation::QuiverRepresentation;
use crate::theorem::Instance;

/// Hand-written cofactor representation of the claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub line: usize,
    pub summands: Vec<Summand>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub instance: Instance,
    pub representation: Option<QuiverRepresentation>,
    pub witness: Option<Witness>,
}

impl ProblemFile {
    pub fn alphabet(&self) -> &Alphabet {
        &self.instance.alphabet
    }

    pub fn quiver(&self) -> Option<&LabelledQuiver> {
        self.instance.quiver.as_ref()
    }
}

struct Statement {
    line: usize,
    keyword: String,
    rest: String,
    rest_col: usize,
}

fn statements(text: &str) -> Vec<Statement> {
    let mut out: Vec<Statement> = Vec::new();
    let mut last_line = 0;
    for (lineno, line) in content_lines(text) {
        let continues = line.starts_with(char::is_whitespace);
        if let (true, Some(prev)) = (continues, out.last_mut()) {
            for _ in last_line..lineno {
                prev.rest.push('\n');
            }
            prev.rest.push_str(line);
        } else {
            let (keyword, rest, rest_col) = split_keyword(line);
            out.push(Statement {
                line: lineno,
                keyword: keyword.to_owned(),
                rest: rest.to_owned(),
                rest_col,
            });
        }
        last_line = lineno;
    }
    out
}

/// Splits `name = body`, returning the body's column.
fn split_definition(s: &Statement) -> Result<(String, &str, usize), TextError> {
    let (name, body) = s
        .rest
        .split_once('=')
        .ok_or_else(|| TextError::syntax(s.line, s.rest_col, "expected `assume <name> = <polynomial>`"))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(TextError::syntax(s.line, s.rest_col, format!("invalid assumption name `{name}`")));
    }
    let offset = s.rest.len() - body.len();
    let body_col = s.rest_col + s.rest[..offset].chars().count();
    Ok((name.to_owned(), body, body_col))
}

fn parse_witness(
    s: &Statement,
    alphabet: &Alphabet,
    names: &[String],
) -> Result<Witness, TextError> {
    let mut extended = alphabet.clone();
    for name in names {
        extended
            .push(name.clone())
            .map_err(|_| TextError::invalid(s.line, format!("assumption name `{name}` is also a variable")))?;
    }
    let origin = Origin {
        line: s.line,
        column: s.rest_col,
    };
    let expr = parse_polynomial_at(&s.rest, &extended, origin)?;
    let first_gen = alphabet.len() as u32;
    let mut summands = Vec::new();
    for (word, coeff) in expr.terms() {
        let positions: Vec<usize> = word
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.0 >= first_gen)
            .map(|(i, _)| i)
            .collect();
        let [k] = positions[..] else {
            return Err(TextError::invalid(
                s.line,
                format!(
                    "witness term `{}` must contain exactly one assumption",
                    word.display(&extended)
                ),
            ));
        };
        summands.push(Summand {
            coeff: coeff.clone(),
            left: word.slice(0..k),
            generator: (word.letters()[k].0 - first_gen) as usize,
            right: word.slice(k + 1..word.len()),
        });
    }
    Ok(Witness {
        line: s.line,
        summands,
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, TextError> {
    let stmts = statements(text);
    let mut names: Vec<String> = Vec::new();
    for s in stmts.iter().filter(|s| s.keyword == "vars") {
        for name in s.rest.split_whitespace() {
            if !is_identifier(name) {
                return Err(TextError::syntax(s.line, s.rest_col, format!("invalid variable name `{name}`")));
            }
            if names.iter().any(|n| n == name) {
                return Err(TextError::invalid(s.line, format!("duplicate variable `{name}`")));
            }
            names.push(name.to_owned());
        }
    }
    let alphabet = Alphabet::new(names).map_err(|e| TextError::invalid(0, e.to_string()))?;

    let mut assumptions: Vec<(String, Polynomial)> = Vec::new();
    let mut claim: Option<Polynomial> = None;
    let mut witness_stmt: Option<&Statement> = None;
    let mut quiver = QuiverBuilder::default();
    let mut rep = RepresentationBuilder::default();
    for s in &stmts {
        match s.keyword.as_str() {
            "vars" => {}
            "assume" => {
                let (name, body, col) = split_definition(s)?;
                if alphabet.var(&name).is_some() {
                    return Err(TextError::invalid(s.line, format!("assumption name `{name}` is also a variable")));
                }
                if assumptions.iter().any(|(n, _)| *n == name) {
                    return Err(TextError::invalid(s.line, format!("duplicate assumption `{name}`")));
                }
                let p = parse_polynomial_at(body, &alphabet, Origin { line: s.line, column: col })?;
                assumptions.push((name, p));
            }
            "claim" => {
                if claim.is_some() {
                    return Err(TextError::invalid(s.line, "more than one claim"));
                }
                let origin = Origin {
                    line: s.line,
                    column: s.rest_col,
                };
                claim = Some(parse_polynomial_at(&s.rest, &alphabet, origin)?);
            }
            "witness" => {
                if witness_stmt.replace(s).is_some() {
                    return Err(TextError::invalid(s.line, "more than one witness"));
                }
            }
            kw => {
                let handled = quiver.line(s.line, kw, &s.rest, s.rest_col, &alphabet)?
                    || rep.line(s.line, kw, &s.rest, s.rest_col)?;
                if !handled {
                    return Err(TextError::syntax(s.line, 1, format!("unknown keyword `{kw}`")));
                }
            }
        }
    }
    let claim = claim.ok_or_else(|| TextError::invalid(0, "missing `claim`"))?;
    let quiver = if quiver.is_empty() {
        None
    } else {
        Some(quiver.build(&alphabet)?)
    };
    let representation = match (&quiver, rep.is_empty()) {
        (_, true) => None,
        (Some(q), false) => Some(rep.build(q)?),
        (None, false) => return Err(TextError::invalid(0, "representation given without a quiver")),
    };
    let names: Vec<String> = assumptions.iter().map(|(n, _)| n.clone()).collect();
    let witness = witness_stmt
        .map(|s| parse_witness(s, &alphabet, &names))
        .transpose()?;
    let instance =
        Instance::new(alphabet, assumptions, claim, quiver).map_err(|e| TextError::invalid(0, e.to_string()))?;
    Ok(ProblemFile {
        instance,
        representation,
        witness,
    })
}

impl Witness {
    /// The polynomial `Σ c·left·F[k]·right`.
    pub fn evaluate(&self, assumptions: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for s in &self.summands {
            out.add_scaled_product(&s.coeff, &s.left, &assumptions[s.generator], &s.right);
        }
        out
    }
}
