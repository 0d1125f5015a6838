//! Scalar literals.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' ['-'] int)?
//! base   := int | 'i' | 'a' | 'w' int | 'y' | '(' expr ')'
//! ```
//!
//! `a` is `zeta_8`, `w M` is `zeta_M`; a rational `p/q` parses as a
//! quotient. The atom `y` is accepted only when a radical is supplied and
//! stands for its generator.

use super::cyclo::Cyclotomic;
use super::tower::{Radical, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal {input:?}: {message}")]
pub struct ParseError {
    pub input: String,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    radical: Option<Arc<Radical>>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            input: self.src.to_string(),
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
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

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(format!("expected an integer at offset {start}"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                acc = match acc.try_div(&d) {
                    Ok(v) => v,
                    Err(e) => return self.err(e.to_string()),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = self.int()?;
        let e: u32 = match e.try_into() {
            Ok(e) => e,
            Err(_) => return self.err("exponent out of range"),
        };
        let p = base.pow(e);
        if neg {
            match p.try_inv() {
                Ok(v) => Ok(v),
                Err(e) => self.err(e.to_string()),
            }
        } else {
            Ok(p)
        }
    }

    fn base(&mut self) -> Result<Scalar, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("missing ')'");
                }
                Ok(v)
            }
            Some('i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some('a') => {
                self.pos += 1;
                Ok(Scalar::alpha())
            }
            Some('w') => {
                self.pos += 1;
                let m = self.int()?;
                match u32::try_from(m) {
                    Ok(m) if (1..=1 << 16).contains(&m) => Ok(Scalar::zeta_power(m, 1)),
                    _ => self.err("root-of-unity order out of range"),
                }
            }
            Some('y') => {
                self.pos += 1;
                match &self.radical {
                    Some(r) => Ok(Scalar::generator(Arc::clone(r))),
                    None => self.err("'y' used without a radical declaration"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(Scalar::from(BigRational::from_integer(n)))
            }
            Some(c) => self.err(format!("unexpected {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a scalar literal.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    parse_scalar_with(src, None)
}

/// Parses a scalar literal that may mention the generator `y` of `radical`.
pub fn parse_scalar_with(src: &str, radical: Option<Arc<Radical>>) -> Result<Scalar, ParseError> {
    let mut p = Parser {
        src,
        chars: src.chars().collect(),
        pos: 0,
        radical,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err(format!("trailing input at offset {}", p.pos));
    }
    Ok(v)
}

/// Parses a radical declaration `y^k = <expr>` with a branch index.
pub fn parse_radical(decl: &str, branch: u32) -> Result<Arc<Radical>, ParseError> {
    let bad = |m: &str| ParseError {
        input: decl.to_string(),
        message: m.to_string(),
    };
    let (lhs, rhs) = decl.split_once('=').ok_or_else(|| bad("expected 'y^k = <expr>'"))?;
    let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let k: u32 = lhs
        .strip_prefix("y^")
        .and_then(|k| k.parse().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| bad("expected 'y^k' on the left"))?;
    let v = parse_scalar(rhs)?;
    let v = v
        .as_cyclotomic()
        .cloned()
        .ok_or_else(|| bad("radicand must be cyclotomic"))?;
    if v.is_zero() {
        return Err(bad("radicand must be nonzero"));
    }
    Ok(Arc::new(Radical::new(k, v, branch)))
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn atom(order: u32, j: usize) -> String {
    if order == 8 {
        match j {
            1 => "a".into(),
            2 => "i".into(),
            3 => "a^3".into(),
            _ => unreachable!(),
        }
    } else if j == 1 {
        format!("w{order}")
    } else {
        format!("w{order}^{j}")
    }
}

/// Renders a cyclotomic number as a literal of the grammar above.
pub fn format_cyclotomic(c: &Cyclotomic) -> String {
    let c = &c.demote();
    let mut out = String::new();
    for (j, q) in c.coeffs().iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let neg = q.is_negative();
        let mag = q.abs();
        let body = if j == 0 {
            format_rational(&mag)
        } else if mag.is_one() {
            atom(c.order(), j)
        } else {
            format!("{}*{}", format_rational(&mag), atom(c.order(), j))
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders a scalar; powers of the radical generator appear as `y^j`.
pub fn format_scalar(s: &Scalar) -> String {
    if let Some(c) = s.as_cyclotomic() {
        return format_cyclotomic(c);
    }
    let mut parts = Vec::new();
    for (j, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let y = if j == 1 { "y".to_string() } else { format!("y^{j}") };
        let body = format_cyclotomic(c);
        parts.push(if j == 0 {
            format!("({body})")
        } else if c.is_one() {
            y
        } else {
            format!("({body})*{y}")
        });
    }
    parts.join(" + ")
}

/// Renders the side declaration of a radical, `y^k = <expr>`.
pub fn format_radical(r: &Radical) -> String {
    format!("y^{} = {}", r.degree(), format_cyclotomic(r.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_constants() {
        assert!(parse_scalar("a*a").unwrap().equals(&Scalar::i()).unwrap());
        assert!(parse_scalar("(a - a^3)^2").unwrap().equals(&Scalar::from(2)).unwrap());
        assert!(parse_scalar("1/(1+i)")
            .unwrap()
            .equals(&parse_scalar("(1 - i)/2").unwrap())
            .unwrap());
        assert!(parse_scalar("-3/4").unwrap().equals(&Scalar::rational(-3, 4)).unwrap());
        assert!(parse_scalar("w 3 ^ 3").unwrap().equals(&Scalar::one()).unwrap());
        assert!(parse_scalar("i^-1").unwrap().equals(&-Scalar::i()).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("y").is_err());
        assert!(parse_scalar("(1").is_err());
    }

    #[test]
    fn format_round_trips() {
        for src in ["0", "1", "-7/3", "a", "2 - 3*i + a^3/5", "w12 + w12^3", "w24^5 - 1"] {
            let v = parse_scalar(src).unwrap();
            let printed = format_scalar(&v);
            let back = parse_scalar(&printed).unwrap();
            assert!(back.equals(&v).unwrap(), "{src} -> {printed}");
        }
    }

    #[test]
    fn radical_round_trip() {
        let r = parse_radical("y^2 = 1 + i", 0).unwrap();
        let v = parse_scalar_with("3 + a*y", Some(Arc::clone(&r))).unwrap();
        let printed = format_scalar(&v);
        let decl = format_radical(&r);
        let r2 = parse_radical(&decl, r.branch()).unwrap();
        let back = parse_scalar_with(&printed, Some(r2)).unwrap();
        assert_eq!(format_scalar(&back), printed);
        assert_eq!(printed, "(3) + (a)*y");
    }
}
