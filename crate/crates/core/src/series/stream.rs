//! Bound-aware term streams.
//!
//! A stream enumerates the terms of a series in increasing exponent order,
//! but only ever an initial segment of order type at most omega. Every pull
//! carries an upper bound: `next_below(Some(b))` yields the next term only if
//! its exponent is `< b`, and otherwise keeps whatever it computed for a later
//! pull. Composite streams forward adjusted bounds to their children, which
//! is what lets cancelling sums such as `a^p - a` terminate below a bound.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::coefficients::FFElem;
use num_bigint::BigInt;
use num_traits::Pow;

use crate::exponents::{Exponent, Rational};

use super::{SeriesError, Term};

/// Work counter shared by one materialization; exhausting it turns a
/// nonterminating computation into an error.
#[derive(Debug)]
pub struct Fuel {
    left: u64,
}

impl Fuel {
    pub fn new(units: u64) -> Self {
        Fuel { left: units }
    }

    pub fn remaining(&self) -> u64 {
        self.left
    }

    pub(crate) fn burn(&mut self) -> Result<(), SeriesError> {
        if self.left == 0 {
            return Err(SeriesError::WorkBudget);
        }
        self.left -= 1;
        Ok(())
    }
}

pub trait TermStream: Send {
    /// The next term if its exponent is below `bound` (`None` = unbounded).
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError>;

    /// True once no further terms can ever be produced.
    fn is_exhausted(&self) -> bool {
        false
    }
}

pub(crate) fn is_below(e: &Exponent, bound: Option<&Exponent>) -> Result<bool, SeriesError> {
    match bound {
        None => Ok(true),
        Some(b) => Ok(e.try_lt(b)?),
    }
}

/// A child stream with a one-term lookahead.
pub(crate) struct Peek {
    inner: Box<dyn TermStream>,
    head: Option<Term>,
}

impl Peek {
    pub fn new(inner: Box<dyn TermStream>) -> Self {
        Peek { inner, head: None }
    }

    /// Exponent of the buffered head if it lies below `bound`.
    pub fn peek(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<&Exponent>, SeriesError> {
        if self.head.is_none() {
            self.head = self.inner.next_below(bound, fuel)?;
        }
        match &self.head {
            Some(t) if is_below(&t.exp, bound)? => Ok(Some(&t.exp)),
            _ => Ok(None),
        }
    }

    pub fn take(&mut self) -> Option<Term> {
        self.head.take()
    }

    pub fn is_exhausted(&self) -> bool {
        self.head.is_none() && self.inner.is_exhausted()
    }
}

pub(crate) struct VecStream {
    terms: Arc<Vec<Term>>,
    idx: usize,
}

impl VecStream {
    pub fn new(terms: Arc<Vec<Term>>) -> Self {
        VecStream { terms, idx: 0 }
    }
}

impl TermStream for VecStream {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        match self.terms.get(self.idx) {
            Some(t) if is_below(&t.exp, bound)? => {
                fuel.burn()?;
                self.idx += 1;
                Ok(Some(t.clone()))
            }
            _ => Ok(None),
        }
    }

    fn is_exhausted(&self) -> bool {
        self.idx >= self.terms.len()
    }
}

pub type TermFn = Arc<dyn Fn(usize) -> Option<(Exponent, FFElem)> + Send + Sync>;

/// Terms given by a formula `k -> k-th term`; monotonicity is checked as
/// terms are drawn.
pub(crate) struct GenStream {
    f: TermFn,
    idx: usize,
    pending: Option<Term>,
    last: Option<Exponent>,
    done: bool,
}

impl GenStream {
    pub fn new(f: TermFn) -> Self {
        GenStream {
            f,
            idx: 0,
            pending: None,
            last: None,
            done: false,
        }
    }
}

impl TermStream for GenStream {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        if self.pending.is_none() && !self.done {
            fuel.burn()?;
            match (self.f)(self.idx) {
                None => self.done = true,
                Some((exp, coeff)) => {
                    if coeff.is_zero() {
                        return Err(SeriesError::ZeroCoefficient);
                    }
                    if let Some(last) = &self.last {
                        if exp.try_cmp(last)? != Ordering::Greater {
                            return Err(SeriesError::NotIncreasing(format!("{last} then {exp}")));
                        }
                    }
                    self.idx += 1;
                    self.last = Some(exp.clone());
                    self.pending = Some(Term { exp, coeff });
                }
            }
        }
        match &self.pending {
            Some(t) if is_below(&t.exp, bound)? => Ok(self.pending.take()),
            _ => Ok(None),
        }
    }

    fn is_exhausted(&self) -> bool {
        self.done && self.pending.is_none()
    }
}

#[derive(Clone)]
pub(crate) enum MapKind {
    /// Multiply by `c t^s`.
    Monomial(FFElem, Exponent),
    /// Termwise `p^k`-th root.
    Root { p: u32, k: u32 },
    /// Termwise `p^k`-th power.
    Power { p: u32, k: u32 },
}

pub(crate) struct MapStream {
    inner: Box<dyn TermStream>,
    kind: MapKind,
}

impl MapStream {
    pub fn new(inner: Box<dyn TermStream>, kind: MapKind) -> Self {
        MapStream { inner, kind }
    }
}

impl TermStream for MapStream {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        let child_bound = bound.map(|b| match &self.kind {
            MapKind::Monomial(_, s) => b - s,
            MapKind::Root { p, k } => b.scale(&p_pow(*p, *k)),
            MapKind::Power { p, k } => b.scale(&p_pow(*p, *k).recip()),
        });
        let Some(t) = self.inner.next_below(child_bound.as_ref(), fuel)? else {
            return Ok(None);
        };
        Ok(Some(match &self.kind {
            MapKind::Monomial(c, s) => Term {
                exp: &t.exp + s,
                coeff: &t.coeff * c,
            },
            MapKind::Root { p, k } => Term {
                exp: t.exp.scale(&p_pow(*p, *k).recip()),
                coeff: frobenius_iter(&t.coeff, *k, true),
            },
            MapKind::Power { p, k } => Term {
                exp: t.exp.scale(&p_pow(*p, *k)),
                coeff: frobenius_iter(&t.coeff, *k, false),
            },
        }))
    }

    fn is_exhausted(&self) -> bool {
        self.inner.is_exhausted()
    }
}

/// `p^k` as an exact rational.
pub(crate) fn p_pow(p: u32, k: u32) -> Rational {
    Rational::from_integer(BigInt::from(p).pow(k))
}

/// Frobenius (or its inverse) applied `k` times, using that it has order
/// `m` on `F_{p^m}`.
fn frobenius_iter(c: &FFElem, k: u32, inverse: bool) -> FFElem {
    let m = c.field().degree() as u32;
    let steps = if inverse { (m - k % m) % m } else { k % m };
    let mut x = c.clone();
    for _ in 0..steps {
        x = x.frobenius();
    }
    x
}

/// Index and exponent of the smallest head among `kids` below `bound`.
fn min_head(kids: &mut [Peek], bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Exponent>, SeriesError> {
    let mut best: Option<Exponent> = None;
    for kid in kids.iter_mut() {
        if let Some(e) = kid.peek(bound, fuel)? {
            let smaller = match &best {
                None => true,
                Some(b) => e.try_lt(b)?,
            };
            if smaller {
                best = Some(e.clone());
            }
        }
    }
    Ok(best)
}

/// Sums the heads sitting exactly at `at`; `None` if they cancel.
fn collect_at(kids: &mut [Peek], at: &Exponent, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
    let mut acc: Option<FFElem> = None;
    for kid in kids.iter_mut() {
        if kid.peek(bound, fuel)? == Some(at) {
            let t = kid.take().expect("peeked");
            acc = Some(match acc {
                None => t.coeff,
                Some(a) => &a + &t.coeff,
            });
        }
    }
    Ok(acc.filter(|c| !c.is_zero()).map(|coeff| Term { exp: at.clone(), coeff }))
}

/// Finite sum of streams.
pub(crate) struct MergeStream {
    kids: Vec<Peek>,
}

impl MergeStream {
    pub fn new(kids: Vec<Box<dyn TermStream>>) -> Self {
        MergeStream {
            kids: kids.into_iter().map(Peek::new).collect(),
        }
    }
}

impl TermStream for MergeStream {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        loop {
            fuel.burn()?;
            let Some(at) = min_head(&mut self.kids, bound, fuel)? else {
                return Ok(None);
            };
            if let Some(t) = collect_at(&mut self.kids, &at, bound, fuel)? {
                return Ok(Some(t));
            }
        }
    }

    fn is_exhausted(&self) -> bool {
        self.kids.iter().all(Peek::is_exhausted)
    }
}

/// Rows of an infinite sum, each announced with a lower bound for the
/// exponents it can produce. Lower bounds must not decrease.
pub trait RowSource: Send {
    fn next_row(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<(Exponent, Box<dyn TermStream>)>, SeriesError>;
}

/// Sum of a possibly infinite family of streams; a row is opened only once
/// its lower bound could compete with the current smallest head.
pub(crate) struct InfiniteSum {
    rows: Box<dyn RowSource>,
    open: Vec<Peek>,
    pending: Option<(Exponent, Box<dyn TermStream>)>,
}

impl InfiniteSum {
    pub fn new(rows: Box<dyn RowSource>) -> Self {
        InfiniteSum {
            rows,
            open: Vec::new(),
            pending: None,
        }
    }
}

impl TermStream for InfiniteSum {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        loop {
            fuel.burn()?;
            if self.pending.is_none() {
                self.pending = self.rows.next_row(bound, fuel)?;
            }
            let min = min_head(&mut self.open, bound, fuel)?;
            if let Some((lb, _)) = &self.pending {
                let competes = match &min {
                    None => true,
                    Some(m) => lb.try_le(m)?,
                };
                if competes && is_below(lb, bound)? {
                    let (_, row) = self.pending.take().expect("pending row");
                    self.open.push(Peek::new(row));
                    continue;
                }
            }
            let Some(at) = min else {
                return Ok(None);
            };
            let found = collect_at(&mut self.open, &at, bound, fuel)?;
            self.open.retain(|k| !k.is_exhausted());
            if let Some(t) = found {
                return Ok(Some(t));
            }
        }
    }
}
