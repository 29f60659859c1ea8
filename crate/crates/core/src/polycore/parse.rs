//! Text grammar for polynomial maps.
//!
//! ```text
//! map    := expr (';' expr)*
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := base ('^' nat)?
//! base   := rational | 'i' | ident | '(' expr ')'
//! rational := nat ('/' nat)?
//! ```
//!
//! Juxtaposition multiplies (`2z`, `(z+1)(w-1)`); `zw` is a single identifier.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::gauss::GaussRat;
use super::mpoly::MPoly;

/// Exponents above this are rejected to keep expansion bounded.
const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("invalid variable list: {0}")]
    BadVariables(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Num(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'+' => out.push((Tok::Plus, i)),
            b'-' => out.push((Tok::Minus, i)),
            b'*' => out.push((Tok::Star, i)),
            b'/' => out.push((Tok::Slash, i)),
            b'^' => out.push((Tok::Caret, i)),
            b'(' => out.push((Tok::LParen, i)),
            b')' => out.push((Tok::RParen, i)),
            b';' => out.push((Tok::Semi, i)),
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc + t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc - t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen))
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.starts_factor() {
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, ParseError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = n.to_u32().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| ParseError::Syntax {
                        pos,
                        msg: format!("exponent exceeds {MAX_EXPONENT}"),
                    })?;
                    Ok(base.pow(e))
                }
                Some(Tok::Minus) => Err(ParseError::NegativeExponent { pos }),
                _ => Err(ParseError::Syntax { pos, msg: "expected a natural-number exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<MPoly, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut value = BigRational::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            value /= BigRational::from_integer(d);
                        }
                        Some(Tok::Num(_)) => {
                            return Err(ParseError::Syntax { pos: dpos, msg: "zero denominator".into() })
                        }
                        _ => {
                            return Err(ParseError::Syntax {
                                pos: dpos,
                                msg: "`/` is only allowed inside a rational literal".into(),
                            })
                        }
                    }
                }
                Ok(MPoly::constant(self.nvars(), GaussRat::real(value)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(j) = self.vars.iter().position(|v| *v == name) {
                    Ok(MPoly::var(self.nvars(), j))
                } else if name == "i" {
                    Ok(MPoly::constant(self.nvars(), GaussRat::i()))
                } else {
                    Err(ParseError::UnknownIdentifier { pos, name })
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cpos = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Syntax { pos: cpos, msg: "expected `)`".into() }),
                }
            }
            Some(Tok::Minus) => Err(ParseError::Syntax {
                pos,
                msg: "a sign may only start an expression; use parentheses".into(),
            }),
            Some(t) => Err(ParseError::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

fn check_vars(vars: &[String]) -> Result<(), ParseError> {
    for (k, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ParseError::BadVariables(format!("`{v}` is not an identifier")));
        }
        if v == "i" {
            return Err(ParseError::BadVariables("`i` is reserved for the imaginary unit".into()));
        }
        if vars[..k].contains(v) {
            return Err(ParseError::BadVariables(format!("`{v}` listed twice")));
        }
    }
    Ok(())
}

/// Parse a `;`-separated list of polynomials over the named variables.
pub fn parse_poly_list<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Vec<MPoly>, ParseError> {
    let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    check_vars(&vars)?;
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars: &vars };
    let mut out = vec![p.expr()?];
    loop {
        match p.peek() {
            None => return Ok(out),
            Some(Tok::Semi) => {
                p.bump();
                out.push(p.expr()?);
            }
            Some(_) => {
                return Err(ParseError::Syntax { pos: p.here(), msg: "expected `;`, an operator, or end of input".into() })
            }
        }
    }
}

/// Parse a single polynomial.
pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<MPoly, ParseError> {
    let mut list = parse_poly_list(text, vars)?;
    if list.len() != 1 {
        return Err(ParseError::Syntax { pos: 0, msg: format!("expected one polynomial, found {}", list.len()) });
    }
    Ok(list.remove(0))
}

/// Parse a constant such as `3/4`, `-2`, `1 + 2i`.
pub fn parse_constant(text: &str) -> Result<GaussRat, ParseError> {
    let no_vars: [&str; 0] = [];
    let p = parse_poly(text, &no_vars)?;
    Ok(p.constant_term())
}
