//! A small expression language for rational functions of one variable `z`:
//! integer literals, `+ - * /`, `^` with nonnegative integer exponents, and
//! parentheses. `3/4` is ordinary division, so rational coefficients need no
//! special syntax. Errors carry the byte offset of the offending token.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::recurrence::RationalFunction;
use num_bigint::BigInt;

pub fn parse_rational_function(src: &str) -> Result<RationalFunction> {
    let mut p = Parser {
        bytes: src.as_bytes(),
        pos: 0,
    };
    let value = p.expression()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                acc = acc.div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        if self.eat(b'-') {
            let inner = self.factor()?;
            return RationalFunction::from_poly(Poly::constant(-Rat::from_integer(
                BigInt::from(1),
            )))
            .mul(&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let exp = self.integer_literal()?;
            let exp: usize = exp.try_into().map_err(|_| Error::Syntax {
                offset: start,
                msg: "exponent too large".into(),
            })?;
            base = rf_pow(&base, exp)?;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(Poly::x()))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer_literal()?;
                Ok(RationalFunction::from_poly(Poly::constant(
                    Rat::from_integer(n),
                )))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{}'", c as char))),
            None => Err(self.err("expected an operand")),
        }
    }

    fn integer_literal(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digit spans are valid UTF-8");
        Ok(text.parse().expect("digit spans parse as integers"))
    }
}

fn rf_pow(base: &RationalFunction, mut e: usize) -> Result<RationalFunction> {
    let mut acc = RationalFunction::from_poly(Poly::one());
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq)?;
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq)?;
        }
    }
    Ok(acc)
}
