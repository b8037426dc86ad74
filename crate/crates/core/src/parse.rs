//! Expression grammar for vectors and tensor literals.
//!
//! A vector is a sum of terms `coeff * a(-n1)a(-n2)...|0>` with `coeff` a
//! rational like `3/2` or `-1`; the coefficient (and the `*`) may be
//! omitted, `|0>` alone denotes the vacuum, and repeated factors may be
//! abbreviated `a(-1)^2`. Whitespace is insignificant. A tensor literal is
//! `[x1 | x2 | ... | xk]` with one vector per slot.

use std::fmt;

use crate::fock::{FockMonomial, Vector};
use crate::scalar::Scalar;
use crate::tensor::{TensorMonomial, TensorVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
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

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn try_consume(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("digits are utf8")
            .parse::<i64>()
            .map_err(|e| ParseError {
                pos: start,
                msg: format!("integer out of range: {e}"),
            })
    }

    /// `int` or `int/int`, without sign.
    fn rational(&mut self) -> Result<Scalar, ParseError> {
        let n = self.integer()?;
        if self.try_consume("/") {
            let d = self.integer()?;
            if d == 0 {
                return self.error("zero denominator");
            }
            Ok(Scalar::new(n, d))
        } else {
            Ok(Scalar::from_int(n))
        }
    }

    /// `a(-n)` factors, optionally with `^count`, ending in `|0>`.
    fn monomial(&mut self) -> Result<FockMonomial, ParseError> {
        let mut parts = Vec::new();
        loop {
            if self.try_consume("|0>") {
                return Ok(FockMonomial::from_parts(parts));
            }
            if !self.try_consume("a") {
                return self.error("expected `a(-n)` or `|0>`");
            }
            self.expect("(")?;
            self.expect("-")?;
            let n = self.integer()?;
            if n < 1 {
                return self.error("mode index must be at least 1");
            }
            self.expect(")")?;
            let count = if self.try_consume("^") {
                let c = self.integer()?;
                if c < 1 {
                    return self.error("exponent must be at least 1");
                }
                c
            } else {
                1
            };
            for _ in 0..count {
                parts.push(n as u32);
            }
        }
    }

    /// One signed term: `[coeff [*]] mono`.
    fn term(&mut self, sign_negative: bool) -> Result<Vector<Scalar>, ParseError> {
        let mut coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.rational()?;
            self.try_consume("*");
            c
        } else {
            Scalar::one()
        };
        if sign_negative {
            coeff = -coeff;
        }
        let mono = self.monomial()?;
        Ok(Vector::term(mono, coeff))
    }

    fn vector(&mut self) -> Result<Vector<Scalar>, ParseError> {
        let negative = if self.try_consume("-") {
            true
        } else {
            self.try_consume("+");
            false
        };
        let mut acc = self.term(negative)?;
        loop {
            if self.try_consume("+") {
                acc = acc + &self.term(false)?;
            } else if self.try_consume("-") {
                acc = acc + &self.term(true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    /// `tensor := [sign] tensor_term (('+'|'-') tensor_term)*`
    /// `tensor_term := [coeff ['*']] '[' vector ('|' vector)* ']'`
    fn tensor_expr(&mut self) -> Result<TensorVector<Scalar>, ParseError> {
        let negative = if self.try_consume("-") {
            true
        } else {
            self.try_consume("+");
            false
        };
        let mut acc = self.tensor_term(negative)?;
        loop {
            if self.try_consume("+") {
                acc = acc + &self.tensor_term(false)?;
            } else if self.try_consume("-") {
                acc = acc + &self.tensor_term(true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn tensor_term(&mut self, sign_negative: bool) -> Result<TensorVector<Scalar>, ParseError> {
        let mut coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.rational()?;
            self.try_consume("*");
            c
        } else {
            Scalar::one()
        };
        if sign_negative {
            coeff = -coeff;
        }
        Ok(self.tensor()?.scale(&coeff))
    }

    fn tensor(&mut self) -> Result<TensorVector<Scalar>, ParseError> {
        self.expect("[")?;
        let mut slots = vec![self.vector()?];
        while self.try_consume("|") {
            slots.push(self.vector()?);
        }
        self.expect("]")?;
        // Expand the product of slot vectors into tensor monomials.
        let mut acc: Vec<(Vec<FockMonomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for slot in &slots {
            if slot.is_zero() {
                return Ok(TensorVector::zero());
            }
            let mut next = Vec::new();
            for (prefix, c) in &acc {
                for (m, cm) in slot.terms() {
                    let mut p = prefix.clone();
                    p.push(m.clone());
                    next.push((p, c * cm));
                }
            }
            acc = next;
        }
        Ok(TensorVector::from_terms(
            acc.into_iter()
                .map(|(slots, c)| (TensorMonomial::new(slots), c)),
        ))
    }
}

/// Parse a vector expression; the entire input must be consumed.
pub fn parse_vector(src: &str) -> Result<Vector<Scalar>, ParseError> {
    let mut cur = Cursor::new(src);
    let v = cur.vector()?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(v)
}

/// Parse a sum of tensor literals `[x1 | ... | xk]`, each with an optional
/// rational coefficient; the entire input must be consumed.
pub fn parse_tensor(src: &str) -> Result<TensorVector<Scalar>, ParseError> {
    let mut cur = Cursor::new(src);
    let t = cur.tensor_expr()?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::GVector;

    fn mon(parts: &[u32]) -> FockMonomial {
        FockMonomial::from_parts(parts.to_vec())
    }

    #[test]
    fn parses_vacuum() {
        assert_eq!(parse_vector("|0>").unwrap(), Vector::basis(mon(&[])));
        assert_eq!(parse_vector("  |0>  ").unwrap(), Vector::basis(mon(&[])));
    }

    #[test]
    fn parses_monomials_with_coefficients() {
        let v = parse_vector("3/2 * a(-1)a(-2)|0> - a(-3)|0>").unwrap();
        let mut expected = GVector::zero();
        expected.add_term(mon(&[2, 1]), Scalar::new(3, 2));
        expected.add_term(mon(&[3]), Scalar::from_int(-1));
        assert_eq!(v, expected);
    }

    #[test]
    fn parses_exponent_notation() {
        assert_eq!(
            parse_vector("a(-1)^2|0>").unwrap(),
            Vector::basis(mon(&[1, 1]))
        );
        assert_eq!(
            parse_vector("a(-1)a(-1)|0>").unwrap(),
            Vector::basis(mon(&[1, 1]))
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse_vector(" 1/2 * a( - 2 ) |0> ").unwrap(),
            parse_vector("1/2*a(-2)|0>").unwrap()
        );
    }

    #[test]
    fn display_round_trips_through_the_grammar() {
        let v = parse_vector("2*a(-3)a(-1)|0> - 1/2*|0> + a(-2)^2|0>").unwrap();
        let printed = v.to_string();
        assert_eq!(parse_vector(&printed).unwrap(), v);
    }

    #[test]
    fn parses_tensor_literals() {
        let t = parse_tensor("[a(-1)|0> | |0>]").unwrap();
        let mut expected = TensorVector::zero();
        expected.add_term(
            TensorMonomial::new(vec![mon(&[1]), mon(&[])]),
            Scalar::one(),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_literal_expands_products() {
        let t = parse_tensor("[a(-1)|0> + |0> | 2*|0>]").unwrap();
        let mut expected = TensorVector::zero();
        expected.add_term(
            TensorMonomial::new(vec![mon(&[1]), mon(&[])]),
            Scalar::from_int(2),
        );
        expected.add_term(
            TensorMonomial::new(vec![mon(&[]), mon(&[])]),
            Scalar::from_int(2),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_display_round_trips() {
        let t = parse_tensor("[a(-2)|0> - |0> | a(-1)^2|0>]").unwrap();
        assert_eq!(parse_tensor(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_vector("a(-1)|0> + b(-2)|0>").unwrap_err();
        assert!(e.pos >= 9, "pos = {}", e.pos);
        assert!(parse_vector("a(1)|0>").is_err());
        assert!(parse_vector("3//2 * |0>").is_err());
        assert!(parse_tensor("[|0> | |0>").is_err());
    }
}
