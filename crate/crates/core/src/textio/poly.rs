//! Polynomial expressions.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := rational | [rational ['*']] factor ('*' factor)*
//! factor := (ident | '(' poly ')') ('^' nat)*
//! rational := nat ['/' nat]
//! ```
//!
//! Juxtaposed identifiers are rejected; `2 a` and `2(a + b)` are accepted
//! since a leading rational may drop the `*`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::TextError;
use crate::free_algebra::{Alphabet, Polynomial, Rational};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 256;
const MAX_EXPANSION: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(s) => format!("number `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

/// Position of the first character of `text` in the enclosing file.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Origin {
    pub line: usize,
    pub column: usize,
}

impl Default for Origin {
    fn default() -> Self {
        Origin { line: 1, column: 1 }
    }
}

fn lex(text: &str, origin: Origin) -> Result<Vec<Spanned>, TextError> {
    let mut out = Vec::new();
    let mut line = origin.line;
    let mut column = origin.column;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(TextError::syntax(
                    line,
                    column + (i - start),
                    "missing `*` between number and identifier",
                ));
            }
            Tok::Nat(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(TextError::syntax(l, col, format!("unexpected character `{c}`"))),
            }
        };
        column += i - start;
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    alphabet: &'a Alphabet,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, TextError> {
        let (line, column) = self.here();
        Err(TextError::syntax(
            line,
            column,
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn poly(&mut self) -> Result<Polynomial, TextError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let (line, column) = self.here();
            return Err(TextError::syntax(line, column, "expression nested too deeply"));
        }
        let mut negate = match self.peek() {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        let mut acc = Polynomial::zero();
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            match self.peek() {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                Tok::End | Tok::RParen => break,
                Tok::Ident(_) | Tok::LParen | Tok::Nat(_) => {
                    return self.unexpected("`*` or an operator (juxtaposition is not multiplication)")
                }
                _ => return self.unexpected("`+`, `-` or end of expression"),
            }
            self.bump();
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, TextError> {
        let mut acc = if let Tok::Nat(_) = self.peek() {
            let c = self.rational()?;
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Ident(_) | Tok::LParen => {}
                _ => return Ok(Polynomial::constant(c)),
            }
            self.factor()?.scale(&c)
        } else {
            self.factor()?
        };
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigInt, TextError> {
        match self.peek().clone() {
            Tok::Nat(digits) => {
                self.bump();
                Ok(digits.parse().expect("lexer yields digits"))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn rational(&mut self) -> Result<Rational, TextError> {
        let numer = self.nat()?;
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_integer(numer));
        }
        self.bump();
        let (line, column) = self.here();
        let denom = self.nat()?;
        if denom.is_zero() {
            return Err(TextError::syntax(line, column, "zero denominator"));
        }
        Ok(Rational::new(numer, denom))
    }

    fn factor(&mut self) -> Result<Polynomial, TextError> {
        let (line, column) = self.here();
        let mut base = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                match self.alphabet.var(&name) {
                    Some(v) => Polynomial::var(v),
                    None => return Err(TextError::Undeclared { line, column, name }),
                }
            }
            Tok::LParen => {
                self.bump();
                let p = self.poly()?;
                if *self.peek() != Tok::RParen {
                    return self.unexpected("`)`");
                }
                self.bump();
                p
            }
            _ => return self.unexpected("an identifier or `(`"),
        };
        while *self.peek() == Tok::Caret {
            self.bump();
            let (line, column) = self.here();
            let n = self.nat()?;
            let n = u32::try_from(&n)
                .ok()
                .filter(|&n| n <= MAX_EXPONENT)
                .ok_or_else(|| TextError::syntax(line, column, "exponent too large"))?;
            if (base.num_terms() as f64).powi(n as i32) > MAX_EXPANSION {
                return Err(TextError::syntax(line, column, "power expands to too many terms"));
            }
            base = base.pow(n);
        }
        Ok(base)
    }
}

pub(crate) fn parse_polynomial_at(
    text: &str,
    alphabet: &Alphabet,
    origin: Origin,
) -> Result<Polynomial, TextError> {
    let toks = lex(text, origin)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
        depth: 0,
    };
    if *p.peek() == Tok::End {
        return p.unexpected("an expression");
    }
    let poly = p.poly()?;
    if *p.peek() != Tok::End {
        return p.unexpected("end of expression");
    }
    Ok(poly)
}

/// Parses one polynomial over `alphabet`.
pub fn parse_polynomial(text: &str, alphabet: &Alphabet) -> Result<Polynomial, TextError> {
    parse_polynomial_at(text, alphabet, Origin::default())
}
