//! Lazy Hahn series `sum c_g t^g` over a finite field with exponents in the
//! value group.
//!
//! A series is a restartable recipe for a term stream. Infinite series are
//! only observable below a window bound; all equality and arithmetic checks
//! are made relative to such a bound. Bounds must lie below the first
//! accumulation point of the support, since a stream reaches only the
//! initial omega-segment of a well-ordered support.

mod stream;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{CoeffError, FFElem, FieldSpec};
use crate::exponents::{BasisContext, Exponent, ExponentError};

pub use stream::{Fuel, RowSource, TermFn, TermStream};
use stream::{GenStream, InfiniteSum, MapKind, MapStream, MergeStream, Peek, VecStream};

/// Default cap on materialized terms.
pub const DEFAULT_TERM_BUDGET: usize = 10_000;

/// Work units granted per budgeted term.
const WORK_PER_TERM: u64 = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("more than {0} terms below the bound")]
    TermBudget(usize),
    #[error("work budget exhausted (bound beyond an accumulation point?)")]
    WorkBudget,
    #[error("exponents not strictly increasing: {0}")]
    NotIncreasing(String),
    #[error("zero coefficient in term list")]
    ZeroCoefficient,
    #[error("series over different basis contexts or coefficient fields")]
    Mismatch,
    #[error("outside the implemented regime: {0}")]
    OutOfRegime(String),
}

/// A single term `coeff * t^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exp: Exponent,
    pub coeff: FFElem,
}

/// Upper bound for materialization: terms with exponent `< bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub bound: Exponent,
}

impl Window {
    pub fn new(bound: Exponent) -> Self {
        Window { bound }
    }
}

/// Result of [`HahnSeries::support_count_below`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportCount {
    Finite(usize),
    ExceedsBudget,
}

type Factory = Arc<dyn Fn() -> Box<dyn TermStream> + Send + Sync>;

#[derive(Clone)]
enum Body {
    Finite(Arc<Vec<Term>>),
    Lazy(Factory),
}

#[derive(Clone)]
pub struct HahnSeries {
    ctx: Arc<BasisContext>,
    field: Arc<FieldSpec>,
    body: Body,
    tag: Option<Arc<str>>,
}

fn fuel_for(budget: usize) -> Fuel {
    Fuel::new((budget.max(1) as u64).saturating_mul(WORK_PER_TERM).max(10_000))
}

impl HahnSeries {
    pub fn zero(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>) -> Self {
        HahnSeries {
            ctx: ctx.clone(),
            field: field.clone(),
            body: Body::Finite(Arc::new(Vec::new())),
            tag: None,
        }
    }

    pub fn monomial(ctx: &Arc<BasisContext>, c: FFElem, e: Exponent) -> Self {
        let field = c.field().clone();
        let terms = if c.is_zero() { Vec::new() } else { vec![Term { exp: e, coeff: c }] };
        HahnSeries {
            ctx: ctx.clone(),
            field,
            body: Body::Finite(Arc::new(terms)),
            tag: None,
        }
    }

    /// `t^e` with coefficient 1.
    pub fn t_pow(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, e: Exponent) -> Self {
        Self::monomial(ctx, FFElem::one(field), e)
    }

    pub fn constant(ctx: &Arc<BasisContext>, c: FFElem) -> Self {
        Self::monomial(ctx, c, Exponent::zero(ctx))
    }

    /// Series from a list sorted strictly by exponent with nonzero
    /// coefficients.
    pub fn from_terms(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, terms: Vec<(Exponent, FFElem)>) -> Result<Self, SeriesError> {
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (exp, coeff) in terms {
            if coeff.is_zero() {
                return Err(SeriesError::ZeroCoefficient);
            }
            if !coeff.same_field(&FFElem::zero(field)) || exp.context().id() != ctx.id() {
                return Err(SeriesError::Mismatch);
            }
            if let Some(last) = out.last() {
                if !last.exp.try_lt(&exp)? {
                    return Err(SeriesError::NotIncreasing(format!("{} then {}", last.exp, exp)));
                }
            }
            out.push(Term { exp, coeff });
        }
        Ok(HahnSeries {
            ctx: ctx.clone(),
            field: field.clone(),
            body: Body::Finite(Arc::new(out)),
            tag: None,
        })
    }

    /// Series whose `k`-th term is `f(k)`; `None` ends the support.
    pub fn from_fn(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, f: impl Fn(usize) -> Option<(Exponent, FFElem)> + Send + Sync + 'static) -> Self {
        let f: TermFn = Arc::new(f);
        Self::lazy(ctx, field, move || Box::new(GenStream::new(f.clone())))
    }

    /// Series from an arbitrary stream factory; each call must produce the
    /// same terms.
    pub fn lazy(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, make: impl Fn() -> Box<dyn TermStream> + Send + Sync + 'static) -> Self {
        HahnSeries {
            ctx: ctx.clone(),
            field: field.clone(),
            body: Body::Lazy(Arc::new(make)),
            tag: None,
        }
    }

    /// Infinite sum of rows produced by `rows()`.
    pub fn from_rows(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, rows: impl Fn() -> Box<dyn RowSource> + Send + Sync + 'static) -> Self {
        Self::lazy(ctx, field, move || Box::new(InfiniteSum::new(rows())))
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(Arc::from(tag.into()));
        self
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn context(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Terms of a finite series, `None` for lazy ones.
    pub fn finite_terms(&self) -> Option<&[Term]> {
        match &self.body {
            Body::Finite(v) => Some(v),
            Body::Lazy(_) => None,
        }
    }

    /// Known to be zero without drawing terms.
    pub fn is_known_zero(&self) -> bool {
        matches!(&self.body, Body::Finite(v) if v.is_empty())
    }

    pub fn stream(&self) -> Box<dyn TermStream> {
        match &self.body {
            Body::Finite(v) => Box::new(VecStream::new(v.clone())),
            Body::Lazy(f) => f(),
        }
    }

    fn compatible(&self, other: &HahnSeries) -> bool {
        self.ctx.id() == other.ctx.id() && *self.field == *other.field
    }

    fn assert_compatible(&self, other: &HahnSeries) {
        assert!(self.compatible(other), "series over different contexts or fields");
    }

    fn map(&self, kind: MapKind) -> HahnSeries {
        if self.is_known_zero() {
            return self.clone();
        }
        let me = self.clone();
        if let Body::Finite(v) = &self.body {
            // finite inputs stay finite: the map is order preserving
            let mut fuel = Fuel::new(u64::MAX);
            let mut s = MapStream::new(Box::new(VecStream::new(v.clone())), kind);
            let mut out = Vec::with_capacity(v.len());
            while let Some(t) = s.next_below(None, &mut fuel).expect("finite map") {
                out.push(t);
            }
            return HahnSeries {
                body: Body::Finite(Arc::new(out)),
                tag: None,
                ..me
            };
        }
        HahnSeries::lazy(&self.ctx, &self.field, move || Box::new(MapStream::new(me.stream(), kind.clone())))
    }

    /// `c t^s * self`.
    pub fn mul_monomial(&self, c: &FFElem, s: &Exponent) -> HahnSeries {
        if c.is_zero() {
            return HahnSeries::zero(&self.ctx, &self.field);
        }
        self.map(MapKind::Monomial(c.clone(), s.clone()))
    }

    pub fn scale(&self, c: &FFElem) -> HahnSeries {
        self.mul_monomial(c, &Exponent::zero(&self.ctx))
    }

    pub fn shift(&self, s: &Exponent) -> HahnSeries {
        self.mul_monomial(&FFElem::one(&self.field), s)
    }

    pub fn neg(&self) -> HahnSeries {
        self.scale(&FFElem::from_int(&self.field, -1))
    }

    /// Sum of several series.
    pub fn sum(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, parts: Vec<HahnSeries>) -> HahnSeries {
        let parts: Vec<HahnSeries> = parts.into_iter().filter(|s| !s.is_known_zero()).collect();
        for s in &parts {
            assert!(s.ctx.id() == ctx.id() && *s.field == **field, "series over different contexts or fields");
        }
        match parts.len() {
            0 => HahnSeries::zero(ctx, field),
            1 => parts.into_iter().next().unwrap(),
            _ => HahnSeries::lazy(ctx, field, move || Box::new(MergeStream::new(parts.iter().map(|s| s.stream()).collect()))),
        }
    }

    /// Panics if the operands live over different contexts or fields.
    pub fn add(&self, other: &HahnSeries) -> HahnSeries {
        self.assert_compatible(other);
        HahnSeries::sum(&self.ctx, &self.field, vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &HahnSeries) -> HahnSeries {
        self.add(&other.neg())
    }

    /// Termwise `(e, c) -> (e/p, c^{1/p})`.
    pub fn pth_root(&self) -> HahnSeries {
        self.pth_root_iter(1)
    }

    /// The `p^k`-th root.
    pub fn pth_root_iter(&self, k: u32) -> HahnSeries {
        self.map(MapKind::Root { p: self.p(), k })
    }

    /// Termwise `(e, c) -> (p e, c^p)`; equals `self^p` in characteristic `p`.
    pub fn pth_power(&self) -> HahnSeries {
        self.map(MapKind::Power { p: self.p(), k: 1 })
    }

    /// The lazy product. Each term of `self` opens a row `c t^e * other`; a
    /// row is drawn only once it can compete with the current minimum, so
    /// any bound below the accumulation points of the product terminates.
    pub fn product(&self, other: &HahnSeries) -> HahnSeries {
        self.assert_compatible(other);
        if self.is_known_zero() || other.is_known_zero() {
            return HahnSeries::zero(&self.ctx, &self.field);
        }
        if let Some([t]) = self.finite_terms() {
            return other.mul_monomial(&t.coeff, &t.exp);
        }
        if let Some([t]) = other.finite_terms() {
            return self.mul_monomial(&t.coeff, &t.exp);
        }
        let (a, b) = (self.clone(), other.clone());
        HahnSeries::from_rows(&self.ctx, &self.field, move || {
            Box::new(ProductRows {
                a: Peek::new(a.stream()),
                b: b.clone(),
                vb: None,
            })
        })
    }

    /// Product materialized below the window.
    pub fn mul(&self, other: &HahnSeries, w: &Window, budget: usize) -> Result<HahnSeries, SeriesError> {
        self.product(other).truncate(&w.bound, budget)
    }

    /// `a^p - a`, lazily.
    pub fn artin_schreier(&self) -> HahnSeries {
        self.pth_power().sub(self)
    }

    /// `a^p - a` below the window.
    pub fn as_operator(&self, w: &Window, budget: usize) -> Result<HahnSeries, SeriesError> {
        self.artin_schreier().truncate(&w.bound, budget)
    }

    /// First term, drawing at most `budget` terms' worth of work.
    pub fn leading_term(&self, budget: usize) -> Result<Option<Term>, SeriesError> {
        let mut fuel = fuel_for(budget);
        self.stream().next_below(None, &mut fuel)
    }

    /// First term if it lies below `bound`.
    pub fn leading_term_below(&self, bound: &Exponent, budget: usize) -> Result<Option<Term>, SeriesError> {
        let mut fuel = fuel_for(budget);
        self.stream().next_below(Some(bound), &mut fuel)
    }

    /// Valuation; `None` is infinity.
    pub fn val(&self) -> Result<Option<Exponent>, SeriesError> {
        Ok(self.leading_term(DEFAULT_TERM_BUDGET)?.map(|t| t.exp))
    }

    /// All terms below `bound`, failing past `budget` terms.
    pub fn terms_below(&self, bound: &Exponent, budget: usize) -> Result<Vec<Term>, SeriesError> {
        self.collect(Some(bound), budget)
    }

    /// Materializes a series with finite support.
    pub fn collect_all(&self, budget: usize) -> Result<HahnSeries, SeriesError> {
        let terms = self.collect(None, budget)?;
        Ok(HahnSeries {
            ctx: self.ctx.clone(),
            field: self.field.clone(),
            body: Body::Finite(Arc::new(terms)),
            tag: self.tag.clone(),
        })
    }

    fn collect(&self, bound: Option<&Exponent>, budget: usize) -> Result<Vec<Term>, SeriesError> {
        let mut fuel = fuel_for(budget);
        let mut s = self.stream();
        let mut out: Vec<Term> = Vec::new();
        while let Some(t) = s.next_below(bound, &mut fuel)? {
            if out.len() == budget {
                return Err(SeriesError::TermBudget(budget));
            }
            if let Some(last) = out.last() {
                if !last.exp.try_lt(&t.exp)? {
                    return Err(SeriesError::NotIncreasing(format!("{} then {}", last.exp, t.exp)));
                }
            }
            out.push(t);
        }
        Ok(out)
    }

    /// The first `n` terms (fewer if the series is shorter).
    pub fn first_terms(&self, n: usize) -> Result<Vec<Term>, SeriesError> {
        let mut fuel = fuel_for(n.max(DEFAULT_TERM_BUDGET));
        let mut s = self.stream();
        let mut out = Vec::new();
        while out.len() < n {
            match s.next_below(None, &mut fuel)? {
                Some(t) => out.push(t),
                None => break,
            }
        }
        Ok(out)
    }

    /// `trn_delta(self)`: the finite series of terms below `delta`.
    pub fn truncate(&self, delta: &Exponent, budget: usize) -> Result<HahnSeries, SeriesError> {
        let terms = self.terms_below(delta, budget)?;
        Ok(HahnSeries {
            ctx: self.ctx.clone(),
            field: self.field.clone(),
            body: Body::Finite(Arc::new(terms)),
            tag: None,
        })
    }

    /// `#supp(trn_delta(self))`, or overflow once `budget` terms were seen.
    pub fn support_count_below(&self, delta: &Exponent, budget: usize) -> Result<SupportCount, SeriesError> {
        match self.terms_below(delta, budget) {
            Ok(v) => Ok(SupportCount::Finite(v.len())),
            Err(SeriesError::TermBudget(_)) | Err(SeriesError::WorkBudget) => Ok(SupportCount::ExceedsBudget),
            Err(e) => Err(e),
        }
    }

    /// Whether the two series agree on all exponents below `bound`.
    pub fn agrees_below(&self, other: &HahnSeries, bound: &Exponent, budget: usize) -> Result<bool, SeriesError> {
        Ok(self.sub(other).leading_term_below(bound, budget)?.is_none())
    }
}

struct ProductRows {
    a: Peek,
    b: HahnSeries,
    vb: Option<Exponent>,
}

impl RowSource for ProductRows {
    fn next_row(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<(Exponent, Box<dyn TermStream>)>, SeriesError> {
        if self.vb.is_none() {
            match self.b.stream().next_below(None, fuel)? {
                Some(t) => self.vb = Some(t.exp),
                None => return Ok(None),
            }
        }
        let vb = self.vb.as_ref().expect("valuation of right factor");
        let child = bound.map(|b| b - vb);
        if self.a.peek(child.as_ref(), fuel)?.is_none() {
            return Ok(None);
        }
        let t = self.a.take().expect("peeked");
        let lb = &t.exp + vb;
        let row = MapStream::new(self.b.stream(), MapKind::Monomial(t.coeff, t.exp));
        Ok(Some((lb, Box::new(row))))
    }
}

/// Rows `rhs^{1/p^k}`, `k >= 1`, summing to a root of `x^p - x = rhs`.
struct RootRows {
    rhs: HahnSeries,
    v: Exponent,
    k: u32,
}

/// Passes terms through, rejecting non-negative exponents.
struct NegativeGuard {
    inner: Box<dyn TermStream>,
}

impl TermStream for NegativeGuard {
    fn next_below(&mut self, bound: Option<&Exponent>, fuel: &mut Fuel) -> Result<Option<Term>, SeriesError> {
        let t = self.inner.next_below(bound, fuel)?;
        if let Some(t) = &t {
            if t.exp.try_signum()? != std::cmp::Ordering::Less {
                return Err(SeriesError::OutOfRegime(format!(
                    "right-hand side has a term at non-negative exponent {}",
                    t.exp
                )));
            }
        }
        Ok(t)
    }

    fn is_exhausted(&self) -> bool {
        self.inner.is_exhausted()
    }
}

impl RowSource for RootRows {
    fn next_row(&mut self, _bound: Option<&Exponent>, _fuel: &mut Fuel) -> Result<Option<(Exponent, Box<dyn TermStream>)>, SeriesError> {
        self.k += 1;
        let p = self.rhs.p();
        let lb = self.v.scale(&stream::p_pow(p, self.k).recip());
        let guarded = Box::new(NegativeGuard { inner: self.rhs.stream() });
        let row = MapStream::new(guarded, MapKind::Root { p, k: self.k });
        Ok(Some((lb, Box::new(row))))
    }
}

impl HahnSeries {
    /// The root `x = sum_{k >= 1} rhs^{1/p^k}` of `x^p - x = rhs` for a
    /// right-hand side with negative support.
    pub fn as_root(rhs: &HahnSeries) -> Result<HahnSeries, SeriesError> {
        let v = rhs
            .val()?
            .ok_or_else(|| SeriesError::OutOfRegime("right-hand side is zero".into()))?;
        if v.try_signum()? != std::cmp::Ordering::Less {
            return Err(SeriesError::OutOfRegime(format!("valuation {v} is not negative")));
        }
        let rhs = rhs.clone();
        Ok(HahnSeries::from_rows(&rhs.ctx.clone(), &rhs.field.clone(), move || {
            Box::new(RootRows {
                rhs: rhs.clone(),
                v: v.clone(),
                k: 0,
            })
        }))
    }
}

type RowFn = Arc<dyn Fn(usize) -> Option<(Exponent, HahnSeries)> + Send + Sync>;

struct IndexedRows {
    f: RowFn,
    k: usize,
}

impl RowSource for IndexedRows {
    fn next_row(&mut self, _bound: Option<&Exponent>, _fuel: &mut Fuel) -> Result<Option<(Exponent, Box<dyn TermStream>)>, SeriesError> {
        let row = (self.f)(self.k);
        self.k += 1;
        Ok(row.map(|(lb, s)| (lb, s.stream())))
    }
}

impl HahnSeries {
    /// `sum_k row(k)`, where `row(k)` returns a lower bound for the support
    /// of the `k`-th summand together with the summand. Lower bounds must not
    /// decrease; `None` ends the family.
    pub fn indexed_sum(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, row: impl Fn(usize) -> Option<(Exponent, HahnSeries)> + Send + Sync + 'static) -> HahnSeries {
        let f: RowFn = Arc::new(row);
        HahnSeries::from_rows(ctx, field, move || Box::new(IndexedRows { f: f.clone(), k: 0 }))
    }
}

fn fmt_coeff(c: &FFElem) -> String {
    let s = c.to_string();
    if s.contains('+') || s.contains('*') || s.contains('^') {
        format!("({s})")
    } else {
        s
    }
}

/// Text form of a term list in the series literal grammar.
pub fn format_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let mono = if t.exp.is_zero() { None } else { Some(format!("t^({})", t.exp)) };
        match (t.coeff.is_one(), mono) {
            (_, None) => out.push_str(&fmt_coeff(&t.coeff)),
            (true, Some(m)) => out.push_str(&m),
            (false, Some(m)) => out.push_str(&format!("{}*{m}", fmt_coeff(&t.coeff))),
        }
    }
    out
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.body, &self.tag) {
            (Body::Finite(v), _) => write!(f, "{}", format_terms(v)),
            (Body::Lazy(_), Some(tag)) => write!(f, "{tag}"),
            (Body::Lazy(_), None) => write!(f, "<lazy series>"),
        }
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HahnSeries({self})")
    }
}

#[cfg(test)]
mod tests;
