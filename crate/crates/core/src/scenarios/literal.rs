//! Series literals: sums of products of coefficients, `t^(exponent)`
//! monomials and named constructions, e.g. `(2*u+1)*t^((-1/3)*pi) + 2`,
//! `t^(-1)*c(3)` or `alpha + u*beta`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{FFElem, FieldSpec};
use crate::exponents::{BasisContext, Exponent, ExponentError};
use crate::series::{HahnSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("bad exponent at {pos}: {source}")]
    Exponent { pos: usize, source: ExponentError },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0}")]
    Recipe(String),
}

pub type Recipe = Arc<dyn Fn(usize) -> Result<HahnSeries, String> + Send + Sync>;

/// Named series available to literals.
#[derive(Clone)]
pub struct SeriesEnv {
    pub ctx: Arc<BasisContext>,
    pub field: Arc<FieldSpec>,
    named: BTreeMap<String, HahnSeries>,
    indexed: BTreeMap<String, Recipe>,
}

impl fmt::Debug for SeriesEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesEnv")
            .field("named", &self.named.keys().collect::<Vec<_>>())
            .field("indexed", &self.indexed.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl SeriesEnv {
    pub fn new(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>) -> Self {
        SeriesEnv {
            ctx: ctx.clone(),
            field: field.clone(),
            named: BTreeMap::new(),
            indexed: BTreeMap::new(),
        }
    }

    pub fn define(&mut self, name: &str, s: HahnSeries) {
        self.named.insert(name.into(), s.with_tag(name));
    }

    pub fn define_indexed(&mut self, name: &str, f: impl Fn(usize) -> Result<HahnSeries, String> + Send + Sync + 'static) {
        self.indexed.insert(name.into(), Arc::new(f));
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.named.keys().cloned().collect();
        out.extend(self.indexed.keys().map(|k| format!("{k}(ell)")));
        out
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    env: &'a SeriesEnv,
}

fn finite_or_lazy(parts: Vec<HahnSeries>, env: &SeriesEnv) -> Result<HahnSeries, LiteralError> {
    let finite = parts.iter().all(|s| s.finite_terms().is_some());
    let s = HahnSeries::sum(&env.ctx, &env.field, parts);
    Ok(if finite { s.collect_all(usize::MAX)? } else { s })
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LiteralError> {
        Err(LiteralError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<HahnSeries, LiteralError> {
        let mut parts = Vec::new();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            parts.push(if negate { t.neg() } else { t });
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                break;
            }
        }
        finite_or_lazy(parts, self.env)
    }

    fn term(&mut self) -> Result<HahnSeries, LiteralError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            let finite = acc.finite_terms().is_some() && f.finite_terms().is_some();
            acc = acc.product(&f);
            if finite {
                acc = acc.collect_all(usize::MAX)?;
            }
        }
        Ok(acc)
    }

    fn number(&mut self) -> Option<i64> {
        self.skip_ws();
        let digits: String = self.src[self.pos..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return None;
        }
        self.pos += digits.len();
        digits.parse().ok()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        let id: String = rest.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
        self.pos += id.len();
        Some(id)
    }

    /// Text up to the matching `)`; the opening `(` is already consumed.
    fn balanced(&mut self) -> Result<(usize, &'a str), LiteralError> {
        let start = self.pos;
        let mut depth = 1;
        for (i, c) in self.src[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos = start + i + 1;
                        return Ok((start, &self.src[start..start + i]));
                    }
                }
                _ => {}
            }
        }
        self.err("unbalanced parenthesis")
    }

    fn exponent(&mut self) -> Result<Exponent, LiteralError> {
        if self.eat('(') {
            let (pos, text) = self.balanced()?;
            return self.env.ctx.parse(text).map_err(|source| LiteralError::Exponent { pos, source });
        }
        let neg = self.eat('-');
        match self.number() {
            Some(n) => Ok(Exponent::int(&self.env.ctx, if neg { -n } else { n })),
            None => self.err("expected `(` or an integer after `t^`"),
        }
    }

    fn factor(&mut self) -> Result<HahnSeries, LiteralError> {
        let env = self.env;
        if self.eat('(') {
            let s = self.sum()?;
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            return Ok(s);
        }
        if let Some(n) = self.number() {
            return Ok(HahnSeries::constant(&env.ctx, FFElem::from_int(&env.field, n)));
        }
        let start = self.pos;
        let Some(id) = self.ident() else {
            return self.err("expected a coefficient, `t^(...)` or a name");
        };
        match id.as_str() {
            "t" => {
                let e = if self.eat('^') { self.exponent()? } else { Exponent::int(&env.ctx, 1) };
                Ok(HahnSeries::t_pow(&env.ctx, &env.field, e))
            }
            "u" => Ok(HahnSeries::constant(&env.ctx, FFElem::generator(&env.field))),
            _ => {
                if let Some(f) = env.indexed.get(&id) {
                    if !self.eat('(') {
                        return self.err(format!("`{id}` takes an index, e.g. `{id}(2)`"));
                    }
                    let Some(k) = self.number() else { return self.err("expected an index") };
                    if !self.eat(')') {
                        return self.err("expected `)`");
                    }
                    return f(k as usize).map_err(LiteralError::Recipe);
                }
                match env.named.get(&id) {
                    Some(s) => Ok(s.clone()),
                    None => {
                        self.pos = start;
                        Err(LiteralError::UnknownName(id))
                    }
                }
            }
        }
    }
}

/// Parses `text` against the names of `env`.
pub fn parse_series_literal(text: &str, env: &SeriesEnv) -> Result<HahnSeries, LiteralError> {
    let mut p = Parser { src: text, pos: 0, env };
    let s = p.sum()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(s)
}
