//! Exact elements of the value group.
//!
//! The value group is the rational span of finitely many real numbers that
//! are declared rationally independent. An [`Exponent`] stores its rational
//! coordinates over that basis, so equality and the group law are exact and
//! syntactic; only the order needs the numerical values, and those are
//! decided by refining interval enclosures until the sign is certain.

mod lattice;
mod parse;
pub mod reals;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

pub use lattice::{LatticeIndex, ValueLattice};
pub use reals::{Interval, RealSource};

use reals::Enclosure;

/// Default number of refinement levels tried by [`Exponent::try_cmp`].
pub const DEFAULT_REFINEMENT_BUDGET: usize = 256;

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("exponents belong to different basis contexts")]
    ContextMismatch,
    #[error("order undecided after {0} refinement levels")]
    RefinementBudget(usize),
    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("lattice does not contain generator {0}")]
    NotContained(String),
}

/// How the default reals `r_i` (`i >= 2`) are chosen; `r_1` is always `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RFamily {
    /// `r_i = p^i + 1/pi`.
    #[default]
    Geometric,
    /// `r_i = p + (i - 1) + 1/pi`.
    Linear,
}

impl RFamily {
    fn offset(self, p: u32, i: u32) -> Rational {
        match self {
            RFamily::Geometric => BigRational::from_integer(BigInt::from(p).pow(i)),
            RFamily::Linear => BigRational::from_integer(BigInt::from(p + i - 1)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RFamily::Geometric => "r_i = p^i + 1/pi",
            RFamily::Linear => "r_i = p + (i-1) + 1/pi",
        }
    }
}

#[derive(Debug)]
struct BasisSymbol {
    name: String,
    enclosure: Enclosure,
}

/// The declared basis of the value group.
///
/// Symbol 0 is always the unit `1`. A symbol named `rN` spans the direction
/// of the real `1/r_N`; in text it is written as a divisor, e.g. `3/r4`.
#[derive(Debug)]
pub struct BasisContext {
    id: u64,
    symbols: Vec<BasisSymbol>,
    independent: bool,
    refinement_budget: usize,
    /// The prime `r_1 = p`, if declared, so that `q/r1` means `q/p`.
    r1: Option<u32>,
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

pub struct BasisBuilder {
    symbols: Vec<(String, RealSource)>,
    independent: bool,
    refinement_budget: usize,
    r1: Option<u32>,
}

impl BasisBuilder {
    pub fn symbol(mut self, name: &str, source: RealSource) -> Self {
        self.symbols.push((name.to_string(), source));
        self
    }

    pub fn pi(self) -> Self {
        self.symbol("pi", RealSource::Pi)
    }

    /// Adds `r2 ..= r{last}` from `family`, and declares `r1 = p`.
    pub fn r_family(mut self, p: u32, last: u32, family: RFamily) -> Self {
        self.r1 = Some(p);
        for i in 2..=last {
            let offset = family.offset(p, i);
            self = self.symbol(&format!("r{i}"), RealSource::ReciprocalOffsetInvPi { offset });
        }
        self
    }

    pub fn independent(mut self, flag: bool) -> Self {
        self.independent = flag;
        self
    }

    pub fn refinement_budget(mut self, budget: usize) -> Self {
        self.refinement_budget = budget.max(1);
        self
    }

    pub fn build(self) -> Arc<BasisContext> {
        let mut symbols = vec![BasisSymbol {
            name: "1".into(),
            enclosure: Enclosure::new(RealSource::Exact(Rational::one())),
        }];
        for (name, source) in self.symbols {
            symbols.push(BasisSymbol {
                name,
                enclosure: Enclosure::new(source),
            });
        }
        Arc::new(BasisContext {
            id: NEXT_CONTEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            symbols,
            independent: self.independent,
            refinement_budget: self.refinement_budget,
            r1: self.r1,
        })
    }
}

impl BasisContext {
    pub fn builder() -> BasisBuilder {
        BasisBuilder {
            symbols: Vec::new(),
            independent: true,
            refinement_budget: DEFAULT_REFINEMENT_BUDGET,
            r1: None,
        }
    }

    /// Rational exponents only.
    pub fn rational() -> Arc<BasisContext> {
        Self::builder().build()
    }

    /// Span of `1` and `pi`.
    pub fn with_pi() -> Arc<BasisContext> {
        Self::builder().pi().build()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn refinement_budget(&self) -> usize {
        self.refinement_budget
    }

    pub fn rank(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.name.as_str())
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn symbol_name(&self, index: usize) -> &str {
        &self.symbols[index].name
    }

    pub fn r1(&self) -> Option<u32> {
        self.r1
    }

    /// Enclosure of basis symbol `index` at refinement `level`.
    pub fn enclosure(&self, index: usize, level: usize) -> Interval {
        self.symbols[index].enclosure.at(level)
    }

    pub fn source(&self, index: usize) -> &RealSource {
        self.symbols[index].enclosure.source()
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Exponent, ExponentError> {
        parse::parse_exponent(self, text)
    }
}

/// An element of the value group: rational coordinates over a basis.
///
/// Zero coordinates are never stored, so two exponents are equal exactly
/// when their coordinate lists are equal.
#[derive(Clone)]
pub struct Exponent {
    ctx: Arc<BasisContext>,
    coords: Vec<(usize, Rational)>,
}

impl PartialEq for Exponent {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.coords == other.coords
    }
}

impl Eq for Exponent {}

impl Hash for Exponent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.id.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exponent({self})")
    }
}

impl Exponent {
    pub fn zero(ctx: &Arc<BasisContext>) -> Self {
        Exponent {
            ctx: ctx.clone(),
            coords: Vec::new(),
        }
    }

    pub fn rational(ctx: &Arc<BasisContext>, q: Rational) -> Self {
        Self::from_coords(ctx, vec![(0, q)])
    }

    pub fn int(ctx: &Arc<BasisContext>, n: i64) -> Self {
        Self::rational(ctx, rat(n, 1))
    }

    /// `q` times basis symbol `name`.
    pub fn symbol(ctx: &Arc<BasisContext>, name: &str, q: Rational) -> Result<Self, ExponentError> {
        let idx = ctx
            .symbol_index(name)
            .ok_or_else(|| ExponentError::UnknownSymbol(name.to_string()))?;
        Ok(Self::from_coords(ctx, vec![(idx, q)]))
    }

    /// Builds an exponent from `(symbol index, coefficient)` pairs; repeated
    /// indices are summed and zeros dropped.
    pub fn from_coords(ctx: &Arc<BasisContext>, mut raw: Vec<(usize, Rational)>) -> Self {
        raw.sort_by_key(|(i, _)| *i);
        let mut coords: Vec<(usize, Rational)> = Vec::with_capacity(raw.len());
        for (i, q) in raw {
            assert!(i < ctx.rank(), "symbol index {i} outside basis");
            match coords.last_mut() {
                Some((j, acc)) if *j == i => *acc += q,
                _ => coords.push((i, q)),
            }
        }
        coords.retain(|(_, q)| !q.is_zero());
        Exponent {
            ctx: ctx.clone(),
            coords,
        }
    }

    pub fn context(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn coords(&self) -> &[(usize, Rational)] {
        &self.coords
    }

    /// Coefficient on basis symbol `index` (zero if absent).
    pub fn coord(&self, index: usize) -> Rational {
        self.coords
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, q)| q.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn coord_of(&self, name: &str) -> Option<Rational> {
        self.ctx.symbol_index(name).map(|i| self.coord(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// The rational value when only the unit coordinate is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coords.as_slice() {
            [] => Some(Rational::zero()),
            [(0, q)] => Some(q.clone()),
            _ => None,
        }
    }

    pub fn same_context(&self, other: &Exponent) -> bool {
        self.ctx.id == other.ctx.id
    }

    fn check_ctx(&self, other: &Exponent) -> Result<(), ExponentError> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(ExponentError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Exponent) -> Result<Exponent, ExponentError> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Exponent) -> Result<Exponent, ExponentError> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    fn add_unchecked(&self, other: &Exponent) -> Exponent {
        let mut out = Vec::with_capacity(self.coords.len() + other.coords.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.coords, &other.coords);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let s = &a[i].1 + &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Exponent {
            ctx: self.ctx.clone(),
            coords: out,
        }
    }

    pub fn scale(&self, q: &Rational) -> Exponent {
        if q.is_zero() {
            return Exponent::zero(&self.ctx);
        }
        Exponent {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|(i, c)| (*i, c * q)).collect(),
        }
    }

    pub fn neg(&self) -> Exponent {
        Exponent {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    /// Enclosure of the real value at refinement `level`.
    pub fn enclosure(&self, level: usize) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for (i, q) in &self.coords {
            acc = acc.add(&self.ctx.enclosure(*i, level).scale(q));
        }
        acc
    }

    /// Sign of the real value: exact for rational exponents, otherwise by
    /// refining enclosures until zero is excluded.
    pub fn try_signum(&self) -> Result<Ordering, ExponentError> {
        if self.coords.is_empty() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(if q.is_positive() { Ordering::Greater } else { Ordering::Less });
        }
        let budget = self.ctx.refinement_budget;
        for level in 1..=budget {
            let iv = self.enclosure(level);
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(ExponentError::RefinementBudget(budget))
    }

    /// Total order of the value group.
    pub fn try_cmp(&self, other: &Exponent) -> Result<Ordering, ExponentError> {
        self.check_ctx(other)?;
        if self.coords == other.coords {
            return Ok(Ordering::Equal);
        }
        self.add_unchecked(&other.neg()).try_signum()
    }

    pub fn try_lt(&self, other: &Exponent) -> Result<bool, ExponentError> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn try_le(&self, other: &Exponent) -> Result<bool, ExponentError> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    /// Coarse decimal approximation, for reports only.
    pub fn approx_f64(&self) -> f64 {
        let iv = self.enclosure(1);
        let mid = (&iv.lo + &iv.hi) / rat(2, 1);
        rational_to_f64(&mid)
    }

    /// The larger of two exponents.
    pub fn try_max(&self, other: &Exponent) -> Result<Exponent, ExponentError> {
        Ok(if self.try_lt(other)? { other.clone() } else { self.clone() })
    }

    pub fn try_min(&self, other: &Exponent) -> Result<Exponent, ExponentError> {
        Ok(if other.try_lt(self)? { other.clone() } else { self.clone() })
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

impl std::ops::Add for &Exponent {
    type Output = Exponent;
    /// Panics on mismatched contexts; use [`Exponent::try_add`] otherwise.
    fn add(self, rhs: &Exponent) -> Exponent {
        self.try_add(rhs).expect("exponent context mismatch")
    }
}

impl std::ops::Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        self.try_sub(rhs).expect("exponent context mismatch")
    }
}

impl std::ops::Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent::neg(self)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Exponent {
    /// Text form: `(-1/9)*pi + (2/3)`, with `rN` directions written `(q)/rN`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        // non-unit symbols first, unit last, matching the usual reading order
        let mut parts = Vec::new();
        for (i, q) in self.coords.iter().filter(|(i, _)| *i != 0) {
            let name = self.ctx.symbol_name(*i);
            if name.starts_with('r') && name[1..].chars().all(|c| c.is_ascii_digit()) {
                parts.push(format!("({})/{}", fmt_rational(q), name));
            } else {
                parts.push(format!("({})*{}", fmt_rational(q), name));
            }
        }
        if let Some((_, q)) = self.coords.iter().find(|(i, _)| *i == 0) {
            parts.push(format!("({})", fmt_rational(q)));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
