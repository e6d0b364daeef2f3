//! Text formats: polynomial expressions, quiver and representation
//! descriptions, problem files and JSON certificates.
//!
//! All formats are UTF-8 with LF line endings. Line-based formats treat `#`
//! as the start of a comment.

mod certificate;
mod poly;
mod problem;
mod quiver;

use thiserror::Error;

pub use certificate::{parse_certificate, serialize_certificate, CERTIFICATE_FORMAT};
pub use poly::parse_polynomial;
pub use problem::{parse_problem, ProblemFile, Witness};
pub use quiver::{
    parse_quiver, parse_representation, serialize_quiver, serialize_representation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: undeclared identifier `{name}`")]
    Undeclared {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line}: matrix for edge {edge} must be {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape {
        line: usize,
        edge: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("fingerprint mismatch for {0}")]
    FingerprintMismatch(String),
}

impl TextError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        TextError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(line: usize, message: impl Into<String>) -> Self {
        TextError::Invalid {
            line,
            message: message.into(),
        }
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
/// The text keeps its original columns.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(k) => &line[..k],
            None => line,
        };
        let line = line.trim_end();
        (!line.trim().is_empty()).then_some((i + 1, line))
    })
}

/// Splits `keyword rest` and returns the column (1-based) where `rest` starts.
pub(crate) fn split_keyword(line: &str) -> (&str, &str, usize) {
    let start = line.len() - line.trim_start().len();
    let body = &line[start..];
    let end = body.find(char::is_whitespace).unwrap_or(body.len());
    let rest = &body[end..];
    let rest_start = start + end + (rest.len() - rest.trim_start().len());
    (&body[..end], rest.trim_start(), line[..rest_start].chars().count() + 1)
}

pub(crate) fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
