//! Parser and evaluator for algebra expressions.
//!
//! ```text
//! element := sign? term (('+' | '-') term)*
//! term    := scalar? factor ('.' factor)*
//! factor  := IDENT '*'?
//! scalar  := INT ('/' INT)?
//! ```
//!
//! `IDENT` is a vertex name or an edge address such as `b[3]`; names that
//! are not plain identifiers can be quoted with backticks. A lone `0` is
//! the zero element.

use num_bigint::BigInt;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub ghost: bool,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub numer: BigInt,
    pub denom: BigInt,
    pub factors: Vec<Factor>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(self.src[start..self.pos].parse().expect("digits"))
        }
    }

    fn ident(&mut self) -> Result<Factor> {
        self.skip_ws();
        let position = self.pos;
        let name = if self.peek() == Some('`') {
            self.pos += 1;
            let Some(len) = self.src[self.pos..].find('`') else {
                return self.err("unterminated quoted name");
            };
            let name = self.src[self.pos..self.pos + len].to_string();
            self.pos += len + 1;
            if name.is_empty() {
                return Err(Error::Parse {
                    position,
                    message: "empty quoted name".into(),
                });
            }
            name
        } else {
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
                _ => return self.err("expected a vertex or edge name"),
            }
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
                self.pos += 1;
            }
            if self.peek() == Some('[') {
                self.pos += 1;
                let digits = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if digits == self.pos || self.peek() != Some(']') {
                    return self.err("expected `[INT]` slot index");
                }
                self.pos += 1;
            }
            self.src[start..self.pos].to_string()
        };
        let ghost = self.eat('*');
        Ok(Factor {
            name,
            ghost,
            position,
        })
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let mut numer = BigInt::from(1);
        let mut denom = BigInt::from(1);
        if let Some(n) = self.int() {
            numer = n;
            if self.eat('/') {
                match self.int() {
                    Some(d) => denom = d,
                    None => return self.err("expected denominator"),
                }
            }
        }
        let mut factors = vec![self.ident()?];
        while self.eat('.') {
            factors.push(self.ident()?);
        }
        Ok(Term {
            negative,
            numer,
            denom,
            factors,
        })
    }
}

/// Parses an expression into terms without resolving names.
pub fn parse(src: &str) -> Result<Vec<Term>> {
    let mut p = Parser { src, pos: 0 };
    if src.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut negative = if p.eat('-') {
        true
    } else {
        p.eat('+');
        false
    };
    let mut terms = Vec::new();
    loop {
        terms.push(p.term(negative)?);
        if p.eat('+') {
            negative = false;
        } else if p.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected input");
    }
    Ok(terms)
}

/// Parses and evaluates an expression in the algebra.
pub fn evaluate(alg: &Algebra, src: &str) -> Result<AlgebraElement> {
    let mut acc = alg.zero();
    for term in parse(src)? {
        let mut coeff: Scalar = alg.field().from_big_ratio(term.numer, term.denom)?;
        if term.negative {
            coeff = alg.field().neg(&coeff);
        }
        let mut value: Option<AlgebraElement> = None;
        for f in &term.factors {
            let x = resolve(alg, f)?;
            value = Some(match value {
                None => x,
                Some(v) => alg.multiply(&v, &x)?,
            });
        }
        let value = value.expect("terms have at least one factor");
        acc = alg.add(&acc, &alg.scale(&coeff, &value)?)?;
    }
    Ok(acc)
}

fn resolve(alg: &Algebra, f: &Factor) -> Result<AlgebraElement> {
    let g = alg.graph();
    if g.has_vertex(&f.name) {
        // vertices are self-adjoint
        return alg.vertex(&f.name);
    }
    match g.edge_ref(&f.name) {
        Ok(_) if f.ghost => alg.ghost(&f.name),
        Ok(_) => alg.edge(&f.name),
        Err(_) => Err(Error::UnknownIdentifier(f.name.clone())),
    }
}
