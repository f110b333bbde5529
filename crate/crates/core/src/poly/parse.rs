//! Expression grammar shared by polynomial and scalar literals:
//! integers, identifiers, `+ - * / ^` and parentheses. Multiplication must
//! be explicit and division is only allowed by nonzero constants.

use super::{MultiPoly, PolyRing, Ring};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Int(lit.parse().map_err(|_| Error::Parse(format!("bad integer {lit}")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() {
                    return Err(Error::Parse("division by a non-constant polynomial".into()));
                }
                let inv = d.constant_term().inv().map_err(|_| Error::Parse("division by zero".into()))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("exponent must be an integer literal".into())),
        };
        if neg {
            if !base.is_constant() {
                return Err(Error::Parse("negative exponent on a non-constant".into()));
            }
            let c = base.constant_term().pow(-(e as i64)).map_err(|_| Error::Parse("0^-k".into()))?;
            return Ok(MultiPoly::constant(self.ring, c));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.ring, self.ring.field().from_rational(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.ring.var_index(&name) {
                    Ok(MultiPoly::var(self.ring, i))
                } else if self.ring.field().generator_name() == Some(name.as_str()) {
                    Ok(MultiPoly::constant(self.ring, self.ring.field().generator().unwrap()))
                } else {
                    Err(Error::Parse(format!("unknown identifier {name:?}")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub(super) fn parse_poly(ring: &Ring, s: &str) -> Result<MultiPoly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after position {} in {s:?}", p.pos)));
    }
    Ok(out)
}

/// Parses a scalar literal of `field` (e.g. `3/4`, `zeta^2 + 1`, `1/(x^2+1)`).
pub fn parse_scalar(field: &Field, s: &str) -> Result<Scalar> {
    let ring = PolyRing::new(field.clone(), &[] as &[&str], super::MonomialOrder::Lex)?;
    let p = parse_poly(&ring, s)?;
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    #[test]
    fn scalar_literals() {
        let q = Field::Rationals;
        assert_eq!(parse_scalar(&q, "1/2 + 1/3").unwrap(), q.from_ratio(5, 6));
        assert_eq!(parse_scalar(&q, "-2^2").unwrap(), q.from_i64(-4));
        assert_eq!(parse_scalar(&q, "2^-2").unwrap(), q.from_ratio(1, 4));
        let c = Field::cyclotomic(4).unwrap();
        assert_eq!(parse_scalar(&c, "zeta*zeta^3").unwrap(), c.from_i64(1));
        assert_eq!(parse_scalar(&c, "zeta^2").unwrap(), c.from_i64(-1));
        let x = Field::rational_functions("x").unwrap();
        assert_eq!(parse_scalar(&x, "1/(x^2+1)").unwrap().to_string(), "1/(x^2 + 1)");
        assert!(parse_scalar(&q, "1/0").is_err());
        assert!(parse_scalar(&q, "zeta").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let r = PolyRing::new(Field::Rationals, &["x", "y"], MonomialOrder::Lex).unwrap();
        assert!(parse_poly(&r, "2x").is_err());
        assert!(parse_poly(&r, "x/y").is_err());
        assert!(parse_poly(&r, "(x+1").is_err());
        assert!(parse_poly(&r, "").is_err());
        assert!(parse_poly(&r, "x^y").is_err());
    }

    #[test]
    fn printing_round_trips() {
        let x = Field::rational_functions("x").unwrap();
        let r = PolyRing::new(x, &["y", "z"], MonomialOrder::Lex).unwrap();
        for s in ["y - 1/2*x^3*z", "(x + 1)*y^2 - 1/(x^2 + 1)*z + 3", "(-1/2*x^3)*z", "1/x*y"] {
            let p = parse_poly(&r, s).unwrap();
            assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p, "{s} -> {p}");
        }
        let c = Field::cyclotomic(6).unwrap();
        let r = PolyRing::new(c, &["u"], MonomialOrder::Lex).unwrap();
        let p = parse_poly(&r, "(zeta + 2)*u^2 - zeta*u + 1/3").unwrap();
        assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
    }
}
