//! Polynomial expressions: parsing from and printing to text.
//!
//! Grammar: integers, variable names, `+ - * ^`, parentheses, and division
//! by nonzero constants (so that printed rational coefficients reparse).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::error::Error;
use crate::poly::Polynomial;
use crate::ring::RingRef;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    ring: &'a RingRef,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    line: usize,
    col0: usize,
}

/// Parse a polynomial in `ring`.
pub fn parse_poly(ring: &RingRef, text: &str) -> Result<Polynomial, Error> {
    parse_poly_at(ring, text, 1, 1)
}

/// Parse with error positions offset to `(line, col)` of the enclosing source.
pub fn parse_poly_at(ring: &RingRef, text: &str, line: usize, col: usize) -> Result<Polynomial, Error> {
    let toks = tokenize(text, line, col)?;
    let mut p = Parser { ring, toks, pos: 0, end_col: text.chars().count(), line, col0: col };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(p.err_here("unexpected token"));
    }
    Ok(e)
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*^/()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { line, col: col0 + i, msg: alloc::format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn err_here(&self, msg: &str) -> Error {
        let c = self.toks.get(self.pos).map_or(self.end_col, |t| t.1);
        Error::Parse { line: self.line, col: self.col0 + c, msg: msg.to_string() }
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Sym(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<Polynomial, Error> {
        let mut acc = match self.peek_sym() {
            Some('-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.power()?;
            if c == '*' {
                acc = acc.mul(&rhs);
            } else {
                if !rhs.is_unit() {
                    self.pos = at;
                    return Err(self.err_here("division only by nonzero constants"));
                }
                acc = acc.div_const(rhs.lc());
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, Error> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some((Tok::Num(n), _)) => {
                    let e: u32 = n.try_into().map_err(|_| self.err_here("exponent too large"))?;
                    if e > 255 {
                        return Err(self.err_here("exponent too large"));
                    }
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err_here("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, Error> {
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err_here("unexpected end of expression"));
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, self.ring.field().from_bigint(&n)))
            }
            Tok::Ident(name) => match self.ring.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ring, i))
                }
                None => {
                    let col = self.col0 + self.toks[self.pos].1;
                    Err(Error::Parse { line: self.line, col, msg: alloc::format!("unknown variable `{name}`") })
                }
            },
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek_sym() != Some(')') {
                    return Err(self.err_here("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Sym('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Tok::Sym(_) => Err(self.err_here("expected a term")),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        let k = ring.field();
        for (idx, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative(k);
            let abs = if neg { k.neg(c) } else { c.clone() };
            if neg {
                write!(f, "-")?;
            } else if idx > 0 {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.render(k));
            }
            for i in 0..ring.nvars() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(ring.name(i).to_string()),
                    e => factors.push(alloc::format!("{}^{}", ring.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Render a generator list as `a, b, c`.
pub fn join_polys(ps: &[Polynomial]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoefficientField;
    use crate::ring::{MonomialOrder, Ring};
    use proptest::prelude::*;

    #[test]
    fn prints_descending_terms() {
        let r = Ring::qq_param(&["x", "y"], "t");
        let p = parse_poly(&r, "(x - t*y)^2").unwrap();
        assert_eq!(p.to_string(), "x^2-2*x*y*t+y^2*t^2");
        let q = parse_poly(&Ring::qq(&["z"]), "1 + 4*z").unwrap();
        assert_eq!(q.to_string(), "4*z+1");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let r = Ring::qq(&["x", "y"]);
        match parse_poly_at(&r, "x + w", 3, 10) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (3, 14));
                assert!(msg.contains("unknown variable"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly(&r, "x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "x / y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "x $ y"), Err(Error::Parse { col: 3, .. })));
    }

    #[test]
    fn rational_and_modular_roundtrip() {
        let r = Ring::qq(&["x", "y"]);
        let p = parse_poly(&r, "x/2 - 3*y/4 + 1/3").unwrap();
        assert_eq!(p.to_string(), "1/2*x-3/4*y+1/3");
        assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
        let f = Ring::new(&["x"], None, CoefficientField::Prime(7), MonomialOrder::Grevlex).unwrap();
        let q = parse_poly(&f, "6*x + 3").unwrap();
        assert_eq!(q.to_string(), "-x+3");
        assert_eq!(parse_poly(&f, &q.to_string()).unwrap(), q);
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(terms in proptest::collection::vec((proptest::collection::vec(0u32..4, 3), -20i64..20, 1i64..5), 0..6)) {
            let r = Ring::qq_param(&["x", "y"], "t");
            let k = r.field();
            let p = Polynomial::from_terms(&r, terms.iter().map(|(e, n, d)| {
                (crate::ring::Monomial::from_exponents(e), k.div(&k.from_i64(*n), &k.from_i64(*d)))
            }).collect());
            prop_assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
        }
    }
}
