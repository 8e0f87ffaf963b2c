//! Text front end for the color Grassmann algebra.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' int)*
//! atom   := rational | 'q' | 'i' | 'z' uint | gen | '(' expr ')'
//! gen    := NAME '[' uint ']'
//! ```
//!
//! `z8` is the primitive eighth root of unity; `z<m>` with m the field's
//! root order is accepted too, since that is how such scalars render.
//! Negative exponents are allowed on invertible scalars only.

use thiserror::Error;

use crate::grading::GradingConfig;
use crate::grassmann::{Family, Generator, Multivector};
use crate::scalar::{Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

/// Parses `text` and returns its normal-ordered value.
pub fn parse_expr(grading: &GradingConfig, text: &str) -> Result<Multivector, ParseError> {
    let mut p = Parser { grading, text, pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error(format!("unexpected '{}'", p.rest().chars().next().unwrap_or(' '))));
    }
    Ok(value)
}

struct Parser<'a> {
    grading: &'a GradingConfig,
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        let s = self.text[self.pos..self.pos + n].to_string();
        self.pos += n;
        Some(s)
    }

    fn uint(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let s = self.digits().ok_or_else(|| self.error("expected an unsigned integer"))?;
        s.parse().map_err(|_| ParseError { position: start, message: format!("integer '{s}' out of range") })
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = self.eat('-');
        let v = self.uint()?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<Multivector, ParseError> {
        let negative = self.eat('-');
        let first = self.term()?;
        let mut acc = if negative { first.neg() } else { first };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Multivector, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Multivector, ParseError> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let at = self.pos;
            let e = self.int()?;
            base = power(&base, e).map_err(|message| ParseError { position: at, message })?;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Multivector, ParseError> {
        let field = self.grading.field();
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if let Some(num) = self.digits() {
            let num: i64 = num.parse().map_err(|_| self.error("integer out of range"))?;
            let mut value = Rat::from_integer(num);
            // a '/' directly followed by digits belongs to the rational
            let save = self.pos;
            if self.eat('/') {
                match self.digits() {
                    Some(den) => {
                        let den: i64 = den.parse().map_err(|_| self.error("integer out of range"))?;
                        if den == 0 {
                            return Err(self.error("zero denominator"));
                        }
                        value = Rat::new(num, den);
                    }
                    None => self.pos = save,
                }
            }
            return Ok(Multivector::scalar(field.rational(value)));
        }
        let start = self.pos;
        let n = self.rest().bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        if n == 0 {
            return Err(match self.rest().chars().next() {
                Some(c) => self.error(format!("unexpected '{c}'")),
                None => self.error("unexpected end of input"),
            });
        }
        let word = &self.text[start..start + n];
        self.pos += n;
        match word {
            "q" => return Ok(Multivector::scalar(field.q())),
            "i" => return Ok(Multivector::scalar(field.i())),
            _ => {}
        }
        if let Some(order) = word.strip_prefix('z').filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())) {
            let zeta = match order.parse::<u32>() {
                Ok(8) => field.zeta8(1),
                Ok(m) if m == field.m() => field.zeta(1),
                _ => return Err(ParseError { position: start, message: format!("unknown root of unity '{word}'") }),
            };
            return Ok(Multivector::scalar(zeta));
        }
        let family = Family::from_name(word)
            .ok_or_else(|| ParseError { position: start, message: format!("unknown generator name '{word}'") })?;
        self.expect('[')?;
        let at = self.pos;
        let index = self.uint()?;
        let index =
            u32::try_from(index).map_err(|_| ParseError { position: at, message: "index out of range".into() })?;
        self.expect(']')?;
        Ok(Multivector::generator(field, Generator::new(self.grading, family, index)))
    }
}

/// Expressions whose rendering must reparse to the same value.
pub const ROUND_TRIP_CORPUS: &[&str] = &[
    "0",
    "1",
    "-3/4",
    "q^-2 + z8^3",
    "th_r[1]*th_g[1]",
    "th_g[1]*th_r[1]",
    "thb_b[2]*th_b[1] - eta[3]",
    "(1 + i)*etab[1]*eta[1]",
    "(th_r[1] + th_g[2])*(thb_r[1] - q*thb_g[2])",
    "1/2*z8^3*q^-1 + 2",
    "eta[1]*eta[2]*eta[1]",
    "th_r[1]^3 + th_r[2]^1",
    "i*th_r[1]*thb_r[1]*th_g[1]*thb_g[1]*th_b[1]*thb_b[1]",
    "(q - q^-1)^2*eta[2]",
];

fn power(base: &Multivector, e: i64) -> Result<Multivector, String> {
    let field = base.field();
    let is_scalar = base.terms().all(|(m, _)| m.is_empty());
    if is_scalar {
        let s: Scalar = base.body();
        return s.pow(e).map(Multivector::scalar).map_err(|err| err.to_string());
    }
    if e < 0 {
        return Err("negative power of a non-scalar".into());
    }
    let mut out = Multivector::one(field);
    for _ in 0..e {
        out = out.mul(base);
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g0() -> GradingConfig {
        GradingConfig::new(0).unwrap()
    }

    fn parse(s: &str) -> Multivector {
        parse_expr(&g0(), s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn theta_q_commutation_normalizes_to_zero() {
        assert!(parse("th_r[1]*th_g[1] - q*th_g[1]*th_r[1]").is_zero());
    }

    #[test]
    fn eta_squared_vanishes() {
        assert!(parse("eta[1]^2").is_zero());
    }

    #[test]
    fn scalar_arithmetic() {
        let f = g0().field();
        let expected = f.frac(1, 2).mul(&f.one().sub(&f.q()));
        assert_eq!(parse("(1/2)*(1-q)"), Multivector::scalar(expected));
        assert_eq!(parse("z8^2"), parse("i"));
        assert_eq!(parse("q^-1*q"), parse("1"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr(&g0(), "th_r[1] * foo[2]").unwrap_err();
        assert_eq!(e.position, 10);
        assert!(e.message.contains("foo"));
        assert_eq!(parse_expr(&g0(), "th_r[1] +").unwrap_err().position, 9);
        assert!(parse_expr(&g0(), "(eta[1]").is_err());
        assert!(parse_expr(&g0(), "eta[1]^-1").is_err());
        assert!(parse_expr(&g0(), "1/0").is_err());
    }

    #[test]
    fn rendering_reparses_to_the_same_value() {
        for n in [0, 3] {
            let grading = GradingConfig::new(n).unwrap();
            for text in ROUND_TRIP_CORPUS {
                let value = parse_expr(&grading, text).unwrap();
                let again = parse_expr(&grading, &value.to_string()).unwrap();
                assert_eq!(value, again, "{text} rendered as {value}");
            }
        }
    }
}
