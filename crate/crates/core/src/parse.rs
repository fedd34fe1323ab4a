//! Text grammar for polynomials.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] | var ['^' int] | 'zeta' ['^' int]
//! sign   := '+' | '-'
//! ```
//!
//! Whitespace between tokens is ignored. `zeta` is the declared primitive
//! root of unity and is only legal when the session order is greater than 1.

use std::fmt;

use num::{BigInt, BigRational, Zero};

use crate::cyclotomic::{Cyclo, CyclotomicField};
use crate::polynomial::{Monomial, Polynomial, Variables};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownVariable(String),
    /// `zeta` used while the session has no root-of-unity extension.
    UndeclaredRootOfUnity,
    /// Decimal or other non-rational literal.
    NonRational,
    ExponentTooLarge,
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            ParseErrorKind::UndeclaredRootOfUnity => {
                write!(f, "zeta used without a declared root-of-unity order")
            }
            ParseErrorKind::NonRational => write!(f, "non-rational coefficient"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent too large"),
            ParseErrorKind::DivisionByZero => write!(f, "zero denominator"),
        }
    }
}

/// Variables and coefficient field a parse is resolved against.
#[derive(Debug, Clone)]
pub struct ParseContext {
    pub vars: Variables,
    pub field: CyclotomicField,
}

impl ParseContext {
    pub fn new(vars: Variables, field: CyclotomicField) -> Self {
        Self { vars, field }
    }

    /// `s0..s4` over `Q(ζ_k)`.
    pub fn quintic(zeta_order: u32) -> Result<Self, crate::cyclotomic::FieldError> {
        Ok(Self::new(Variables::s(5), CyclotomicField::new(zeta_order)?))
    }
}

pub fn parse_polynomial(text: &str, ctx: &ParseContext) -> Result<Polynomial, ParseError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    }
    .polynomial()
}

/// Parses a constant expression such as `1/2*zeta^3 - 1` into a field
/// element.
pub fn parse_constant(text: &str, field: &CyclotomicField) -> Result<Cyclo, ParseError> {
    let ctx = ParseContext::new(Variables::new(Vec::<String>::new()), field.clone());
    let p = parse_polynomial(text, &ctx)?;
    Ok(p.coefficient(&Monomial::one())
        .cloned()
        .unwrap_or_else(|| field.zero()))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.pos,
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

    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(_) => false,
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        };
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            terms.push((m, c));
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(ch) => return Err(self.err(ParseErrorKind::UnexpectedChar(ch as char))),
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(
            self.ctx.vars.clone(),
            self.ctx.field.clone(),
            terms,
        ))
    }

    fn term(&mut self) -> Result<(Monomial, Cyclo), ParseError> {
        let mut coeff = self.ctx.field.one();
        let mut mono = Monomial::one();
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let q = self.rational()?;
                    coeff = coeff.scale(&q);
                }
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let start = self.pos;
                    let name = self.identifier();
                    let exp = self.exponent()?;
                    if name == "zeta" {
                        if self.ctx.field.order() == 1 {
                            return Err(ParseError {
                                kind: ParseErrorKind::UndeclaredRootOfUnity,
                                position: start,
                            });
                        }
                        coeff = &coeff * &self.ctx.field.zeta_pow(exp as i64);
                    } else {
                        let i = self.ctx.vars.index_of(&name).ok_or(ParseError {
                            kind: ParseErrorKind::UnknownVariable(name),
                            position: start,
                        })?;
                        let mut e = [0u16; crate::polynomial::MAX_VARS];
                        e[i] = exp as u16;
                        mono = mono.mul(&Monomial::from_exponents(&e));
                        if mono.exponent(i) as u32 > MAX_EXPONENT {
                            return Err(self.err(ParseErrorKind::ExponentTooLarge));
                        }
                    }
                }
                Some(ch) => return Err(self.err(ParseErrorKind::UnexpectedChar(ch as char))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let n = self.integer()?;
        if n > BigInt::from(MAX_EXPONENT) {
            return Err(self.err(ParseErrorKind::ExponentTooLarge));
        }
        Ok(u32::try_from(n).expect("bounded above"))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.src.get(self.pos) {
                Some(&c) => self.err(ParseErrorKind::UnexpectedChar(c as char)),
                None => self.err(ParseErrorKind::UnexpectedEnd),
            });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as integer"))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.integer()?;
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.err(ParseErrorKind::NonRational));
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.err(ParseErrorKind::DivisionByZero));
            }
            if self.src.get(self.pos) == Some(&b'.') {
                return Err(self.err(ParseErrorKind::NonRational));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx5() -> ParseContext {
        ParseContext::quintic(5).unwrap()
    }

    #[test]
    fn fermat_and_dwork() {
        let f = parse_polynomial("s0^5+s1^5+s2^5+s3^5+s4^5", &ctx5()).unwrap();
        assert_eq!(f.n_terms(), 5);
        let d = parse_polynomial("s0^5+s1^5+s2^5+s3^5+s4^5-5*s0*s1*s2*s3*s4", &ctx5()).unwrap();
        assert_eq!(d.n_terms(), 6);
        // graded lex: s0*s1*s2*s3*s4 outranks s1^5
        assert_eq!(d.to_string(), "s0^5 - 5*s0*s1*s2*s3*s4 + s1^5 + s2^5 + s3^5 + s4^5");
    }

    #[test]
    fn unknown_variable() {
        let e = parse_polynomial("s0^5 + q", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("q".into()));
        assert_eq!(e.position, 7);
        assert!(e.to_string().contains("unknown variable q"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_polynomial("s0^5 + + s1", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('+'));
        assert_eq!(e.position, 7);
        let e = parse_polynomial("s0^5 +", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse_polynomial("", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse_polynomial("s0 s1", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('s'));
        let e = parse_polynomial("1/0*s0", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);
        let e = parse_polynomial("s0^99999", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentTooLarge);
    }

    #[test]
    fn non_rational_coefficients() {
        let e = parse_polynomial("1.5*s0", &ctx5()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonRational);
        let q = ParseContext::quintic(1).unwrap();
        let e = parse_polynomial("zeta*s0", &q).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredRootOfUnity);
        assert_eq!(e.position, 0);
    }

    #[test]
    fn whitespace_and_rationals() {
        let a = parse_polynomial("  3 / 4 * s0 ^ 2*s1 -  s2\t", &ctx5()).unwrap();
        let b = parse_polynomial("3/4*s0^2*s1-s2", &ctx5()).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_string(), "3/4*s0^2*s1 - s2");
    }

    #[test]
    fn zeta_coefficients_expand_on_print() {
        let p = parse_polynomial("(zeta^5)*s0", &ctx5());
        assert!(p.is_err(), "parentheses are not part of the grammar");
        let p = parse_polynomial("zeta^5*s0 + 2*zeta*s1 - zeta^4", &ctx5()).unwrap();
        // ζ^4 = -1 - ζ - ζ^2 - ζ^3
        assert_eq!(p.to_string(), "s0 + 2*zeta*s1 + zeta^3 + zeta^2 + zeta + 1");
    }

    #[test]
    fn constants() {
        let f = CyclotomicField::new(5).unwrap();
        assert_eq!(parse_constant("zeta^4", &f).unwrap(), f.zeta_pow(4));
        assert!(parse_constant("0", &f).unwrap().is_zero());
        assert!(parse_constant("s0", &f).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let term = (
            -20i64..20,
            1i64..6,
            0u32..5,
            prop::collection::vec(0u16..4, 5),
        );
        prop::collection::vec(term, 0..8).prop_map(|terms| {
            let ctx = ctx5();
            let t = terms.into_iter().map(|(n, d, z, e)| {
                let c = ctx
                    .field
                    .zeta_pow(z as i64)
                    .scale(&BigRational::new(n.into(), d.into()));
                (Monomial::from_exponents(&e), c)
            });
            Polynomial::from_terms(ctx.vars.clone(), ctx.field.clone(), t)
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(p in arb_poly()) {
            let printed = p.to_string();
            let back = parse_polynomial(&printed, &ctx5()).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
