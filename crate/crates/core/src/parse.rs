//! Polynomial literals for the command line.
//!
//! ```text
//! ratfunc := poly | "(" poly ")" "/" "(" poly ")"
//! poly    := ["+" | "-"] term { ("+" | "-") term }
//! term    := coeff ["*"] [mono] | mono
//! mono    := var ["^" digits]
//! coeff   := digits ["/" digits]
//! var     := "t" | "s"
//! ```
//!
//! Whitespace is ignored everywhere; one literal uses a single variable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;

pub fn parse_poly(text: &str) -> Result<Poly> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = Parser {
        chars: &chars,
        pos: 0,
        var: None,
        source: text,
    };
    let p = parser.poly()?;
    if parser.pos != chars.len() {
        return Err(parser.error("unexpected character"));
    }
    Ok(p)
}

/// A polynomial, or a quotient `(num)/(den)` of two.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = compact.strip_prefix('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {text:?}")))?;
        let num = parse_poly(&rest[..close])?;
        let tail = &rest[close + 1..];
        if tail.is_empty() {
            return Ok(RationalFunction::from_poly(num));
        }
        let den_text = tail
            .strip_prefix("/(")
            .and_then(|d| d.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (num)/(den), got {text:?}")))?;
        let den = parse_poly(den_text)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(RationalFunction::new(num, den));
    }
    Ok(RationalFunction::from_poly(parse_poly(text)?))
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    var: Option<char>,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.source))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        if self.chars.is_empty() {
            return Err(self.error("empty polynomial"));
        }
        let mut total = Poly::zero();
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else {
                let plus = self.eat('+');
                if !first && !plus {
                    break;
                }
                false
            };
            let term = self.term()?;
            total = if negative { &total - &term } else { &total + &term };
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(total)
    }

    fn term(&mut self) -> Result<Poly> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.coeff()?;
            let star = self.eat('*');
            if !self.at_var() {
                if star {
                    return Err(self.error("expected t or s after '*'"));
                }
                return Ok(Poly::constant(c));
            }
            c
        } else {
            BigRational::one()
        };
        if !self.at_var() {
            return Err(self.error("expected a coefficient or variable"));
        }
        let exp = self.mono()?;
        Ok(Poly::monomial(coeff, exp))
    }

    fn at_var(&self) -> bool {
        matches!(self.peek(), Some('t' | 's'))
    }

    fn mono(&mut self) -> Result<usize> {
        let v = self.peek().expect("checked by at_var");
        match self.var {
            Some(w) if w != v => return Err(self.error("mixed variables")),
            _ => self.var = Some(v),
        }
        self.pos += 1;
        if self.eat('^') {
            let digits = self.digits()?;
            return digits.parse().map_err(|_| self.error("exponent too large"));
        }
        Ok(1)
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn coeff(&mut self) -> Result<BigRational> {
        let num: BigInt = self.digits()?.parse().expect("digits parse");
        if self.eat('/') {
            let den: BigInt = self.digits()?.parse().expect("digits parse");
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }
}
