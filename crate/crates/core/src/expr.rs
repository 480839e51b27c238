//! Polynomial expressions in the ring/matrix file grammar.
//!
//! An expression is a sum of terms `c*m`, where `c` is an optional integer
//! literal and `m` a product of variables with optional `^` powers, e.g.
//! `x^2`, `2*x*y - z`, `x+y+z`. Whitespace is ignored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Exponent vector → integer coefficient (not yet reduced mod p).
pub type Polynomial = BTreeMap<Vec<u32>, i64>;

pub fn total_degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    variables: &'a [String],
}

pub fn parse_polynomial(src: &str, variables: &[String]) -> Result<Polynomial> {
    let chars: Vec<char> = src
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    let mut p = Parser {
        src,
        chars,
        pos: 0,
        variables,
    };
    p.expression()
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<Polynomial> {
        if self.chars.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut poly = Polynomial::new();
        let mut first = true;
        loop {
            let mut sign = 1i64;
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
                None => break,
            }
            first = false;
            let (coeff, exps) = self.term()?;
            *poly.entry(exps).or_insert(0) += sign * coeff;
            if self.peek().is_none() {
                break;
            }
        }
        poly.retain(|_, c| *c != 0);
        Ok(poly)
    }

    fn term(&mut self) -> Result<(i64, Vec<u32>)> {
        let mut coeff = 1i64;
        let mut exps = vec![0u32; self.variables.len()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    coeff = coeff
                        .checked_mul(n)
                        .ok_or_else(|| self.err("coefficient overflow"))?;
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let name = self.identifier();
                    let idx = self
                        .variables
                        .iter()
                        .position(|v| *v == name)
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    let mut power = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let n = self.integer()?;
                        power = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx] += power;
                }
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
                None => return Err(self.err("expression ends inside a term")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, exps))
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| self.err("integer too large"))
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}
