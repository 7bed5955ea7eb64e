//! Text form of Laurent series: `t^v*(c0 + c1*t + c2*t^2) + O(t^p)`.
//!
//! The printer writes only the nonzero terms, drops the `t^v*(...)` wrapper
//! when `v = 0`, and wraps extension-field coefficients in parentheses. The
//! parser accepts any arithmetic expression in the series variable, the
//! coefficient generator `a`, integers and `O(...)` terms.

use std::fmt;

use super::field::FiniteField;
use super::series::LaurentSeries;
use crate::error::{Error, Result};

impl LaurentSeries {
    /// Canonical text with series variable `var`.
    pub fn to_text(&self, var: char) -> String {
        let f = self.field();
        let big_o = |p: i64| match p {
            0 => "O(1)".to_string(),
            1 => format!("O({var})"),
            _ => format!("O({var}^{p})"),
        };
        if self.is_zero() {
            return self.prec().map_or_else(|| "0".to_string(), big_o);
        }
        let v = self.valuation().unwrap();
        let mut terms = Vec::new();
        for (i, &c) in self.codes().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut coeff = f.fmt_code(c);
            if f.k() > 1 && coeff.contains('a') && coeff.contains('+') {
                coeff = format!("({coeff})");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (i, coeff.as_str()) {
                (0, _) => coeff,
                (_, "1") => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        let body = terms.join(" + ");
        let mut out = match v {
            0 => body,
            1 => format!("{var}*({body})"),
            _ => format!("{var}^{v}*({body})"),
        };
        if let Some(p) = self.prec() {
            out.push_str(" + ");
            out.push_str(&big_o(p));
        }
        out
    }

    /// Parses an expression in `var` with coefficients in `field`.
    pub fn parse(field: &FiniteField, text: &str, var: char) -> Result<Self> {
        let tokens = tokenize(text, var)?;
        let mut p = Parser { tokens, pos: 0, field };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {text:?}")));
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('t'))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Var,
    Gen,
    BigO,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, var: char) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            'a' => out.push(Tok::Gen),
            'O' => out.push(Tok::BigO),
            d if d.is_ascii_digit() => {
                let mut n = d.to_digit(10).unwrap() as u64;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(chars[i].to_digit(10).unwrap() as u64))
                        .ok_or_else(|| Error::Parse("integer literal overflows".into()))?;
                    i += 1;
                }
                out.push(Tok::Num(n));
            }
            v if v == var => out.push(Tok::Var),
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    field: &'a FiniteField,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }
    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<LaurentSeries> {
        let mut acc = if self.eat(&Tok::Minus) {
            self.term()?.neg()
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentSeries> {
        let mut acc = self.factor()?;
        loop {
            let juxtaposed = matches!(self.peek(), Some(Tok::Var | Tok::Gen | Tok::LParen | Tok::BigO));
            if self.eat(&Tok::Star) || juxtaposed {
                acc = acc.mul(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.pos += 1;
                let n = i64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
                Ok(if neg { -n } else { n })
            }
            _ => Err(Error::Parse("expected an integer exponent".into())),
        }
    }

    fn factor(&mut self) -> Result<LaurentSeries> {
        let f = self.field;
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                LaurentSeries::monomial(f, f.int_code((n % f.p()) as i64), 0)
            }
            Some(Tok::Var) => {
                self.pos += 1;
                if self.eat(&Tok::Caret) {
                    let e = self.exponent()?;
                    return Ok(LaurentSeries::monomial(f, 1, e));
                }
                LaurentSeries::monomial(f, 1, 1)
            }
            Some(Tok::Gen) => {
                self.pos += 1;
                LaurentSeries::constant(&f.generator())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                inner
            }
            Some(Tok::BigO) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let p = if self.eat(&Tok::Num(1)) {
                    0
                } else {
                    self.expect(Tok::Var)?;
                    if self.eat(&Tok::Caret) {
                        self.exponent()?
                    } else {
                        1
                    }
                };
                self.expect(Tok::RParen)?;
                return Ok(LaurentSeries::big_o(f, p));
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        if self.eat(&Tok::Caret) {
            let e = self.exponent()?;
            return power(&base, e);
        }
        Ok(base)
    }
}

fn power(x: &LaurentSeries, e: i64) -> Result<LaurentSeries> {
    let base = if e < 0 { x.inv()? } else { x.clone() };
    let mut acc = LaurentSeries::one(x.field());
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base)?;
    }
    Ok(acc)
}
