//! Reader for series, scalars and germs written in a small infix syntax.
//!
//! Accepts `+ - * / ^`, parentheses, implicit products (`2z`, `zw`), the
//! imaginary unit `i`, variables `z`, `w` (aliases `x`, `y`), decimal and
//! integer literals, and `zeta(n)`. Division is allowed by series with a
//! nonzero constant term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::BiSeries;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Z,
    W,
    I,
    Zeta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        let start = k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while k < bytes.len() && (bytes[k].is_ascii_digit() || bytes[k] == b'.') {
                k += 1;
            }
            let text = &src[start..k];
            out.push((start, Tok::Num(parse_decimal(text).ok_or_else(|| perr(start, "malformed number"))?)));
            continue;
        }
        if src[k..].starts_with("zeta") {
            out.push((start, Tok::Zeta));
            k += 4;
            continue;
        }
        let t = match c {
            'z' | 'x' => Tok::Z,
            'w' | 'y' => Tok::W,
            'i' => Tok::I,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(perr(start, &format!("unexpected character '{c}'"))),
        };
        out.push((start, t));
        k += c.len_utf8();
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(n, d))
}

fn perr(pos: usize, msg: &str) -> Error {
    Error::Parse { pos, msg: msg.to_string() }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    trunc: u32,
    field: Option<u32>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            Err(perr(self.pos(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<BiSeries> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiSeries> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.unary()?;
                    acc = acc.mul(&self.reciprocal(&d, pos)?);
                }
                Some(Tok::Num(_) | Tok::Z | Tok::W | Tok::I | Tok::Zeta | Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn reciprocal(&self, d: &BiSeries, pos: usize) -> Result<BiSeries> {
        if d.constant_term().is_zero() {
            return Err(perr(pos, "division by a series without constant term"));
        }
        d.unit_reciprocal().map_err(|e| perr(pos, &e.to_string()))
    }

    fn unary(&mut self) -> Result<BiSeries> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<BiSeries> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let n = match self.bump() {
            Some(Tok::Num(q)) if q.is_integer() => {
                u32::try_from(q.to_integer()).map_err(|_| perr(pos, "exponent too large"))?
            }
            _ => return Err(perr(pos, "expected a nonnegative integer exponent")),
        };
        let base = if neg { self.reciprocal(&base, pos)? } else { base };
        if base.constant_term().is_zero() {
            if n > self.trunc {
                return Ok(BiSeries::zero(self.trunc));
            }
            return Ok(base.pow(n));
        }
        if base.len() == 1 {
            return Ok(BiSeries::constant(base.constant_term().pow(n), self.trunc));
        }
        Ok(base.pow(n))
    }

    fn primary(&mut self) -> Result<BiSeries> {
        let pos = self.pos();
        let n = self.trunc;
        match self.bump() {
            Some(Tok::Num(q)) => Ok(BiSeries::constant(Scalar::from_rational(q), n)),
            Some(Tok::Z) => Ok(BiSeries::z(n)),
            Some(Tok::W) => Ok(BiSeries::w(n)),
            Some(Tok::I) => Ok(BiSeries::constant(Scalar::i(), n)),
            Some(Tok::Zeta) => {
                self.expect(Tok::LParen, "'(' after zeta")?;
                let p = self.pos();
                let r = match self.bump() {
                    Some(Tok::Num(q)) if q.is_integer() && q >= BigRational::one() => {
                        u32::try_from(q.to_integer()).map_err(|_| perr(p, "zeta order too large"))?
                    }
                    _ => return Err(perr(p, "expected a positive integer order")),
                };
                self.expect(Tok::RParen, "')'")?;
                let z = Scalar::zeta(r);
                if let Some(l) = z.field_order() {
                    match self.field {
                        None => self.field = Some(l),
                        Some(m) if m != l => return Err(Error::IncompatibleFields { left: m, right: l }),
                        _ => {}
                    }
                }
                Ok(BiSeries::constant(z, n))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(perr(pos, "expected a number, variable or '('")),
        }
    }
}

fn parser(src: &str, trunc: u32) -> Result<Parser> {
    Ok(Parser { toks: lex(src)?, at: 0, end: src.len(), trunc, field: None })
}

/// Parses a series in `z`, `w`, keeping terms up to total degree `trunc`.
pub fn parse_series(src: &str, trunc: u32) -> Result<BiSeries> {
    let mut p = parser(src, trunc)?;
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(perr(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Parses a scalar expression with no variables.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let s = parse_series(src, 0)?;
    let mut p = parser(src, 0)?;
    if p.toks.iter().any(|t| matches!(t.1, Tok::Z | Tok::W)) {
        p.at = p.toks.iter().position(|t| matches!(t.1, Tok::Z | Tok::W)).unwrap_or(0);
        return Err(perr(p.pos(), "scalar expected, found a variable"));
    }
    Ok(s.constant_term())
}

/// Parses a germ `(f1, f2)`, optionally preceded by a name and `=`.
pub fn parse_germ_components(src: &str, trunc: u32) -> Result<(BiSeries, BiSeries)> {
    let body_start = src.rfind('=').map(|k| k + 1).unwrap_or(0);
    let body = &src[body_start..];
    let mut p = parser(body, trunc)?;
    let shift = |e: Error| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + body_start, msg },
        other => other,
    };
    p.expect(Tok::LParen, "'(' opening the germ").map_err(shift)?;
    let f1 = p.expr().map_err(shift)?;
    p.expect(Tok::Comma, "',' between components").map_err(shift)?;
    let f2 = p.expr().map_err(shift)?;
    p.expect(Tok::RParen, "')' closing the germ").map_err(shift)?;
    if p.at < p.toks.len() {
        return Err(shift(perr(p.pos(), "trailing input")));
    }
    Ok((f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn basics() {
        let e = parse_series("2z + 3/2 z^2 w - w^2", 10).unwrap();
        assert_eq!(e.coeff(1, 0), s(2));
        assert_eq!(e.coeff(2, 1), Scalar::ratio(3, 2));
        assert_eq!(e.coeff(0, 2), s(-1));
    }

    #[test]
    fn implicit_products_and_i() {
        let e = parse_series("zw + 1/3i z", 5).unwrap();
        assert_eq!(e.coeff(1, 1), s(1));
        assert_eq!(e.coeff(1, 0), &Scalar::ratio(1, 3) * &Scalar::i());
    }

    #[test]
    fn division_by_unit() {
        let e = parse_series("z/(1-z)", 6).unwrap();
        assert!((1..=6).all(|k| e.coeff(k, 0) == s(1)));
        assert!(parse_series("1/z", 6).is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_scalar("0.25").unwrap(), Scalar::ratio(1, 4));
    }

    #[test]
    fn zeta_literals() {
        assert_eq!(parse_scalar("zeta(6)^6").unwrap(), s(1));
        assert!(matches!(parse_scalar("zeta(5) + zeta(3)"), Err(Error::IncompatibleFields { .. })));
        assert_eq!(parse_scalar("zeta(3)*zeta(6)").unwrap(), s(-1));
    }

    #[test]
    fn germs() {
        let (a, b) = parse_germ_components("f = (w^2, z^3)", 8).unwrap();
        assert_eq!(a, BiSeries::monomial(s(1), 0, 2, 8));
        assert_eq!(b, BiSeries::monomial(s(1), 3, 0, 8));
        let err = parse_germ_components("(z, w", 8).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn round_trip_display() {
        let e = parse_series("(3/2+1/3i) z^2 w - 2w + zeta(12)z^3", 8).unwrap();
        let back = parse_series(&e.to_string(), 8).unwrap();
        assert_eq!(e, back);
    }
}
