//! Text form of exponents: rational linear combinations such as
//! `(-1/9)*pi + (2/3)` or `3/r4 - pi/27`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BasisContext, Exponent, ExponentError, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExponentError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(ExponentError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Intermediate value: a linear form, or a bare `rN` awaiting use as a divisor.
#[derive(Clone, Debug)]
enum Val {
    Lin(Vec<(usize, Rational)>),
    RDivisor(u32, usize),
}

struct Parser<'a> {
    ctx: &'a Arc<BasisContext>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ExponentError> {
    Err(ExponentError::Parse { pos, msg: msg.into() })
}

fn rational_of(v: &[(usize, Rational)]) -> Option<Rational> {
    match v {
        [] => Some(Rational::zero()),
        [(0, q)] => Some(q.clone()),
        _ => None,
    }
}

fn lin_add(a: Vec<(usize, Rational)>, b: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    let mut all = a;
    all.extend(b);
    all
}

fn lin_scale(a: Vec<(usize, Rational)>, q: &Rational) -> Vec<(usize, Rational)> {
    a.into_iter().map(|(i, c)| (i, c * q)).collect()
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn lin(&self, v: Val) -> Result<Vec<(usize, Rational)>, ExponentError> {
        match v {
            Val::Lin(l) => Ok(l),
            Val::RDivisor(n, pos) => err(pos, format!("`r{n}` may only appear as a divisor, e.g. `1/r{n}`")),
        }
    }

    fn expr(&mut self) -> Result<Val, ExponentError> {
        let first = self.term()?;
        let mut acc = self.lin(first)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = lin_add(acc, self.lin(t)?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = lin_add(acc, lin_scale(self.lin(t)?, &-Rational::one()));
                }
                _ => return Ok(Val::Lin(acc)),
            }
        }
    }

    fn term(&mut self) -> Result<Val, ExponentError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let at = self.here();
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let (l, r) = (self.lin(acc)?, self.lin(rhs)?);
                    acc = if let Some(q) = rational_of(&l) {
                        Val::Lin(lin_scale(r, &q))
                    } else if let Some(q) = rational_of(&r) {
                        Val::Lin(lin_scale(l, &q))
                    } else {
                        return err(at, "product of two irrational exponents is not linear");
                    };
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let l = self.lin(acc)?;
                    acc = match rhs {
                        Val::RDivisor(n, _) => {
                            let q = rational_of(&l)
                                .ok_or_else(|| ExponentError::Parse { pos: at, msg: "only rationals may be divided by `rN`".into() })?;
                            if n == 1 {
                                let p = self.ctx.r1().ok_or_else(|| ExponentError::UnknownSymbol("r1".into()))?;
                                Val::Lin(vec![(0, q / Rational::from_integer(p.into()))])
                            } else {
                                let name = format!("r{n}");
                                let idx = self.ctx.symbol_index(&name).ok_or(ExponentError::UnknownSymbol(name))?;
                                Val::Lin(vec![(idx, q)])
                            }
                        }
                        Val::Lin(r) => {
                            let q = rational_of(&r)
                                .ok_or_else(|| ExponentError::Parse { pos: at, msg: "division by an irrational exponent".into() })?;
                            if q.is_zero() {
                                return err(at, "division by zero");
                            }
                            Val::Lin(lin_scale(l, &(Rational::one() / q)))
                        }
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Val, ExponentError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            let v = self.unary()?;
            let l = self.lin(v)?;
            return Ok(Val::Lin(lin_scale(l, &-Rational::one())));
        }
        if let Some(Tok::Plus) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Val, ExponentError> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(Val::Lin(vec![(0, Rational::from_integer(n))]))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                if let Some(rest) = name.strip_prefix('r') {
                    if let Ok(n) = rest.parse::<u32>() {
                        return Ok(Val::RDivisor(n, at));
                    }
                }
                match self.ctx.symbol_index(&name) {
                    Some(idx) if idx != 0 => Ok(Val::Lin(vec![(idx, Rational::one())])),
                    _ => Err(ExponentError::UnknownSymbol(name)),
                }
            }
            Some((_, Tok::LParen)) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => err(self.here(), "expected `)`"),
                }
            }
            Some((_, t)) => err(at, format!("unexpected token {t:?}")),
            None => err(at, "unexpected end of input"),
        }
    }
}

pub(super) fn parse_exponent(ctx: &Arc<BasisContext>, text: &str) -> Result<Exponent, ExponentError> {
    let toks = lex(text)?;
    let mut p = Parser {
        ctx,
        toks,
        pos: 0,
        end: text.len(),
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input");
    }
    let lin = p.lin(v)?;
    Ok(Exponent::from_coords(ctx, lin))
}
