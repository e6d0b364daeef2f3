//! Line formats for quivers and representations.
//!
//! ```text
//! vertex v
//! vertex w
//! edge v -> w : a        # e1
//! edge w -> v : ai       # e2
//! dim v = 2
//! matrix e1 = [[1, 0], [0, 0]]
//! ```
//!
//! Edges are referred to as `e1, e2, ...` in declaration order.

use num_traits::One;

use super::{content_lines, is_name, split_keyword, TextError};
use crate::free_algebra::{parse_rational, Alphabet, Rational};
use crate::matrix::Matrix;
use crate::quiver::{Edge, LabelledQuiver};
use crate::representation::QuiverRepresentation;

#[derive(Debug, Default)]
pub(crate) struct QuiverBuilder {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl QuiverBuilder {
    pub(crate) fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    /// Handles `vertex` and `edge` lines; returns false for other keywords.
    pub(crate) fn line(
        &mut self,
        lineno: usize,
        keyword: &str,
        rest: &str,
        rest_col: usize,
        alphabet: &Alphabet,
    ) -> Result<bool, TextError> {
        match keyword {
            "vertex" => {
                for name in rest.split_whitespace() {
                    if !is_name(name) {
                        return Err(TextError::syntax(
                            lineno,
                            rest_col,
                            format!("invalid vertex name `{name}`"),
                        ));
                    }
                    if self.vertices.iter().any(|v| v == name) {
                        return Err(TextError::invalid(lineno, format!("duplicate vertex `{name}`")));
                    }
                    self.vertices.push(name.to_owned());
                }
                if rest.is_empty() {
                    return Err(TextError::syntax(lineno, rest_col, "expected a vertex name"));
                }
                Ok(true)
            }
            "edge" => {
                let bad = || {
                    TextError::syntax(lineno, rest_col, "expected `edge <source> -> <target> : <label>`")
                };
                let (source, tail) = rest.split_once("->").ok_or_else(bad)?;
                let (target, label) = tail.split_once(':').ok_or_else(bad)?;
                let (source, target, label) = (source.trim(), target.trim(), label.trim());
                if !is_name(source) || !is_name(target) || !is_name(label) {
                    return Err(bad());
                }
                let vertex = |name: &str| {
                    self.vertices.iter().position(|v| v == name).ok_or_else(|| {
                        TextError::Undeclared {
                            line: lineno,
                            column: rest_col,
                            name: name.to_owned(),
                        }
                    })
                };
                let edge = Edge {
                    source: vertex(source)?,
                    target: vertex(target)?,
                    label: alphabet.var(label).ok_or_else(|| TextError::Undeclared {
                        line: lineno,
                        column: rest_col,
                        name: label.to_owned(),
                    })?,
                };
                self.edges.push(edge);
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    pub(crate) fn build(self, alphabet: &Alphabet) -> Result<LabelledQuiver, TextError> {
        LabelledQuiver::new(alphabet, self.vertices, self.edges)
            .map_err(|e| TextError::invalid(0, e.to_string()))
    }
}

/// Parses `vertex` and `edge` lines.
pub fn parse_quiver(text: &str, alphabet: &Alphabet) -> Result<LabelledQuiver, TextError> {
    let mut builder = QuiverBuilder::default();
    for (lineno, line) in content_lines(text) {
        let (keyword, rest, col) = split_keyword(line);
        if !builder.line(lineno, keyword, rest, col, alphabet)? {
            return Err(TextError::syntax(lineno, 1, format!("unknown keyword `{keyword}`")));
        }
    }
    if builder.vertices.is_empty() {
        return Err(TextError::invalid(0, "a quiver needs at least one vertex"));
    }
    builder.build(alphabet)
}

pub fn serialize_quiver(q: &LabelledQuiver, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    for v in q.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in q.edges() {
        out.push_str(&format!(
            "edge {} -> {} : {}\n",
            q.vertex_name(e.source),
            q.vertex_name(e.target),
            alphabet.name(e.label)
        ));
    }
    out
}

#[derive(Debug, Default)]
pub(crate) struct RepresentationBuilder {
    dims: Vec<(usize, String, usize)>,
    matrices: Vec<(usize, String, String)>,
}

impl RepresentationBuilder {
    pub(crate) fn is_empty(&self) -> bool {
        self.dims.is_empty() && self.matrices.is_empty()
    }

    /// Records `dim` and `matrix` lines; they are resolved in [`Self::build`].
    pub(crate) fn line(
        &mut self,
        lineno: usize,
        keyword: &str,
        rest: &str,
        rest_col: usize,
    ) -> Result<bool, TextError> {
        if keyword != "dim" && keyword != "matrix" {
            return Ok(false);
        }
        let (name, value) = rest.split_once('=').ok_or_else(|| {
            TextError::syntax(lineno, rest_col, format!("expected `{keyword} <name> = ...`"))
        })?;
        let name = name.trim();
        if !is_name(name) {
            return Err(TextError::syntax(lineno, rest_col, format!("invalid name `{name}`")));
        }
        let value = value.trim();
        if keyword == "dim" {
            let n = value.parse::<usize>().map_err(|_| {
                TextError::syntax(lineno, rest_col, format!("invalid dimension `{value}`"))
            })?;
            self.dims.push((lineno, name.to_owned(), n));
        } else {
            self.matrices.push((lineno, name.to_owned(), value.to_owned()));
        }
        Ok(true)
    }

    pub(crate) fn build(self, q: &LabelledQuiver) -> Result<QuiverRepresentation, TextError> {
        let mut dims: Vec<Option<usize>> = vec![None; q.num_vertices()];
        for (lineno, name, n) in self.dims {
            let v = q.vertex(&name).ok_or_else(|| TextError::Undeclared {
                line: lineno,
                column: 1,
                name: name.clone(),
            })?;
            if dims[v].replace(n).is_some() {
                return Err(TextError::invalid(lineno, format!("duplicate dimension for `{name}`")));
            }
        }
        let dims = dims
            .into_iter()
            .enumerate()
            .map(|(v, d)| {
                d.ok_or_else(|| {
                    TextError::invalid(0, format!("missing dimension for vertex `{}`", q.vertex_name(v)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut matrices: Vec<Option<Matrix>> = vec![None; q.edges().len()];
        for (lineno, name, literal) in self.matrices {
            let id = edge_index(&name)
                .filter(|&k| k < q.edges().len())
                .ok_or_else(|| TextError::Undeclared {
                    line: lineno,
                    column: 1,
                    name: name.clone(),
                })?;
            let e = &q.edges()[id];
            let expected = (dims[e.target], dims[e.source]);
            let m = parse_matrix(&literal, expected.1).map_err(|msg| TextError::invalid(lineno, msg))?;
            if m.shape() != expected {
                return Err(TextError::Shape {
                    line: lineno,
                    edge: name,
                    expected,
                    found: m.shape(),
                });
            }
            if matrices[id].replace(m).is_some() {
                return Err(TextError::invalid(lineno, format!("duplicate matrix for `{name}`")));
            }
        }
        let matrices = matrices
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or_else(|| TextError::invalid(0, format!("missing matrix for edge e{}", k + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        QuiverRepresentation::new(q, dims, matrices).map_err(|e| TextError::invalid(0, e.to_string()))
    }
}

fn edge_index(name: &str) -> Option<usize> {
    let k: usize = name.strip_prefix('e')?.parse().ok()?;
    if k == 0 || name[1..].starts_with('0') {
        return None;
    }
    Some(k - 1)
}

/// `[[r, ...], ...]`; `cols_if_empty` is used when there are no rows.
fn parse_matrix(literal: &str, cols_if_empty: usize) -> Result<Matrix, String> {
    let s: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("invalid matrix literal `{literal}`"))?;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| format!("expected `[` in matrix literal `{literal}`"))?;
        let close = body
            .find(']')
            .ok_or_else(|| format!("unclosed row in matrix literal `{literal}`"))?;
        let row = &body[..close];
        let entries = if row.is_empty() {
            Vec::new()
        } else {
            row.split(',')
                .map(|x| parse_rational(x).ok_or_else(|| format!("invalid matrix entry `{x}`")))
                .collect::<Result<Vec<_>, _>>()?
        };
        rows.push(entries);
        rest = &body[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(format!("trailing `,` in matrix literal `{literal}`"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(format!("expected `,` between rows in `{literal}`"));
        }
    }
    let cols = rows.first().map_or(cols_if_empty, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err("rows of different lengths".into());
    }
    Ok(Matrix::from_rows(rows, cols).expect("rows checked"))
}

/// Parses `dim` and `matrix` lines against `q`.
pub fn parse_representation(text: &str, q: &LabelledQuiver) -> Result<QuiverRepresentation, TextError> {
    let mut builder = RepresentationBuilder::default();
    for (lineno, line) in content_lines(text) {
        let (keyword, rest, col) = split_keyword(line);
        if !builder.line(lineno, keyword, rest, col)? {
            return Err(TextError::syntax(lineno, 1, format!("unknown keyword `{keyword}`")));
        }
    }
    builder.build(q)
}

fn format_entry(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn serialize_representation(rep: &QuiverRepresentation, q: &LabelledQuiver) -> String {
    let mut out = String::new();
    for (v, d) in rep.dims().iter().enumerate() {
        out.push_str(&format!("dim {} = {d}\n", q.vertex_name(v)));
    }
    for (k, m) in rep.matrices().iter().enumerate() {
        let rows: Vec<String> = m
            .row_vecs()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(format_entry).collect::<Vec<_>>().join(", ")))
            .collect();
        out.push_str(&format!("matrix e{} = [{}]\n", k + 1, rows.join(", ")));
    }
    out
}
