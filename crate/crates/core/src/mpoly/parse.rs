// Recursive-descent parser for polynomial text:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*      division by constants only
//   unary  := '-' unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | 'x' integer | '(' expr ')'

use num_bigint::BigInt;
use num_traits::Zero;

use super::MPoly;
use crate::error::{Error, Result};
use crate::linalg::Rational;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

pub(super) fn parse_poly(text: &str, dim: usize) -> Result<MPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error("bad integer"))
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.unary()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let c = match rhs.degree() {
                        Some(0) => rhs.coeff(&super::MultiIndex::zero(self.dim)),
                        None => return Err(self.error("division by zero")),
                        Some(_) => return Err(self.error("division by a non-constant")),
                    };
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e: u32 = self
                .digits()?
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let i: usize = self
                    .digits()?
                    .try_into()
                    .map_err(|_| self.error("variable index too large"))?;
                if i == 0 || i > self.dim {
                    return Err(self.error(&format!("variable x{i} outside d = {}", self.dim)));
                }
                Ok(MPoly::var(self.dim, i - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                if n.is_zero() {
                    return Ok(MPoly::zero(self.dim));
                }
                Ok(MPoly::constant(self.dim, Rational::from_integer(n)))
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}
