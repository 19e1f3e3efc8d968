//! Cuts of the value group and final/initial segments.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::exponents::{rat, Exponent, ExponentError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error("witness values not strictly increasing at index {0}")]
    NonMonotone(usize),
    #[error("witness list is empty")]
    NoWitnesses,
    #[error("unsupported segment operation: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

/// A cut `(L, R)` of the value group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cut {
    /// `(empty, all)`.
    MinusInfinity,
    /// `gamma^-` has left set `{x < gamma}`, `gamma^+` has `{x <= gamma}`.
    Principal(Exponent, Side),
    /// `D^+` for a set `D` known only through sampled, strictly increasing
    /// values without a maximum.
    Witnesses(Vec<Exponent>),
    /// `(all, empty)`.
    PlusInfinityMinus,
}

/// Outcome of comparing two cuts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutOrdering {
    Less,
    Equal,
    Greater,
    /// Not decidable from the sampled witnesses.
    Inconclusive,
}

impl From<Ordering> for CutOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CutOrdering::Less,
            Ordering::Equal => CutOrdering::Equal,
            Ordering::Greater => CutOrdering::Greater,
        }
    }
}

impl CutOrdering {
    pub fn reverse(self) -> Self {
        match self {
            CutOrdering::Less => CutOrdering::Greater,
            CutOrdering::Greater => CutOrdering::Less,
            other => other,
        }
    }
}

fn check_increasing(vals: &[Exponent]) -> Result<(), CutError> {
    for (i, w) in vals.windows(2).enumerate() {
        if !w[0].try_lt(&w[1])? {
            return Err(CutError::NonMonotone(i + 1));
        }
    }
    Ok(())
}

/// The cut `D^+` from sampled values of `D`.
///
/// With `attained`, the last value is the maximum and the cut is its `+`
/// side. With a hint `gamma`, the cut is `gamma^-` when every value is below
/// `gamma` and, for each `k <= depth`, some value exceeds `gamma - 1/p^k`.
pub fn cut_from_witnesses(vals: &[Exponent], limit_hint: Option<&Exponent>, attained: bool, depth: u32, p: u32) -> Result<Cut, CutError> {
    let last = vals.last().ok_or(CutError::NoWitnesses)?;
    check_increasing(vals)?;
    if attained {
        return Ok(Cut::Principal(last.clone(), Side::Plus));
    }
    if let Some(gamma) = limit_hint {
        if hint_is_limit(vals, gamma, depth, p)? {
            return Ok(Cut::Principal(gamma.clone(), Side::Minus));
        }
    }
    Ok(Cut::Witnesses(vals.to_vec()))
}

/// Whether the sampled values approach `gamma` from below to within
/// `1/p^depth`.
pub fn hint_is_limit(vals: &[Exponent], gamma: &Exponent, depth: u32, p: u32) -> Result<bool, CutError> {
    for v in vals {
        if !v.try_lt(gamma)? {
            return Ok(false);
        }
    }
    let last = match vals.last() {
        Some(v) => v,
        None => return Ok(false),
    };
    let ctx = gamma.context();
    for k in 1..=depth {
        let eps = Exponent::rational(ctx, rat(1, (p as i64).pow(k)));
        let probe = gamma - &eps;
        // values increase, so the last one is the best candidate
        if !probe.try_lt(last)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Position of a principal or improper cut, for exact comparison.
fn key(c: &Cut) -> Option<(i8, Option<(&Exponent, i8)>)> {
    match c {
        Cut::MinusInfinity => Some((-1, None)),
        Cut::PlusInfinityMinus => Some((1, None)),
        Cut::Principal(g, s) => Some((0, Some((g, if *s == Side::Minus { -1 } else { 1 })))),
        Cut::Witnesses(_) => None,
    }
}

/// Order of cuts by inclusion of left sets.
pub fn cut_cmp(a: &Cut, b: &Cut) -> Result<CutOrdering, CutError> {
    match (key(a), key(b)) {
        (Some((ia, pa)), Some((ib, pb))) => {
            if ia != ib {
                return Ok(ia.cmp(&ib).into());
            }
            match (pa, pb) {
                (Some((ga, sa)), Some((gb, sb))) => {
                    let o = ga.try_cmp(gb)?;
                    Ok(if o == Ordering::Equal { sa.cmp(&sb).into() } else { o.into() })
                }
                _ => Ok(CutOrdering::Equal),
            }
        }
        (None, Some(_)) => Ok(witness_vs(a, b)?),
        (Some(_), None) => Ok(witness_vs(b, a)?.reverse()),
        (None, None) => Ok(if a == b { CutOrdering::Equal } else { CutOrdering::Inconclusive }),
    }
}

fn witness_vs(w: &Cut, other: &Cut) -> Result<CutOrdering, CutError> {
    let Cut::Witnesses(vals) = w else { unreachable!() };
    match other {
        Cut::MinusInfinity => Ok(CutOrdering::Greater),
        Cut::PlusInfinityMinus => Ok(CutOrdering::Inconclusive),
        Cut::Principal(g, _) => {
            // D has no maximum, so a value >= g gives a larger one above g
            for v in vals {
                if !v.try_lt(g)? {
                    return Ok(CutOrdering::Greater);
                }
            }
            Ok(CutOrdering::Inconclusive)
        }
        Cut::Witnesses(_) => unreachable!(),
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::MinusInfinity => write!(f, "-inf"),
            Cut::PlusInfinityMinus => write!(f, "inf^-"),
            Cut::Principal(g, Side::Minus) => write!(f, "{g}^-"),
            Cut::Principal(g, Side::Plus) => write!(f, "{g}^+"),
            Cut::Witnesses(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "limsup{{{}}}", parts.join(", "))
            }
        }
    }
}

/// An upward closed set of values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinalSegment {
    /// `{x > gamma}`.
    AboveOpen(Exponent),
    /// `{x >= gamma}`.
    AboveClosed(Exponent),
    /// `{x >= w for some w}` for sampled, strictly decreasing witnesses with
    /// no minimum.
    GeneratedBy(Vec<Exponent>),
    Empty,
    Everything,
}

/// A downward closed set of values; the mirror image of [`FinalSegment`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialSegment {
    /// `{x < gamma}`.
    BelowOpen(Exponent),
    /// `{x <= gamma}`.
    BelowClosed(Exponent),
    /// `{x <= w for some w}`, witnesses strictly increasing, no maximum.
    GeneratedBy(Vec<Exponent>),
    Empty,
    Everything,
}

impl FinalSegment {
    pub fn contains(&self, val: &Exponent) -> Result<bool, CutError> {
        Ok(match self {
            FinalSegment::AboveOpen(g) => g.try_lt(val)?,
            FinalSegment::AboveClosed(g) => g.try_le(val)?,
            FinalSegment::GeneratedBy(ws) => {
                for w in ws {
                    if w.try_le(val)? {
                        return Ok(true);
                    }
                }
                false
            }
            FinalSegment::Empty => false,
            FinalSegment::Everything => true,
        })
    }

    /// `S + delta`.
    pub fn shift(&self, delta: &Exponent) -> FinalSegment {
        match self {
            FinalSegment::AboveOpen(g) => FinalSegment::AboveOpen(g + delta),
            FinalSegment::AboveClosed(g) => FinalSegment::AboveClosed(g + delta),
            FinalSegment::GeneratedBy(ws) => FinalSegment::GeneratedBy(ws.iter().map(|w| w + delta).collect()),
            other => other.clone(),
        }
    }

    pub fn neg(&self) -> InitialSegment {
        match self {
            FinalSegment::AboveOpen(g) => InitialSegment::BelowOpen(-g),
            FinalSegment::AboveClosed(g) => InitialSegment::BelowClosed(-g),
            FinalSegment::GeneratedBy(ws) => InitialSegment::GeneratedBy(ws.iter().map(|w| -w).collect()),
            FinalSegment::Empty => InitialSegment::Empty,
            FinalSegment::Everything => InitialSegment::Everything,
        }
    }

    /// Minkowski sum `S + S'`.
    pub fn minkowski(&self, other: &FinalSegment) -> Result<FinalSegment, CutError> {
        use FinalSegment::*;
        Ok(match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Everything, _) | (_, Everything) => Everything,
            (AboveClosed(a), AboveClosed(b)) => AboveClosed(a + b),
            (AboveOpen(a), AboveOpen(b)) | (AboveOpen(a), AboveClosed(b)) | (AboveClosed(a), AboveOpen(b)) => AboveOpen(a + b),
            // without a minimum witness, open and closed translates agree
            (GeneratedBy(ws), AboveOpen(b)) | (GeneratedBy(ws), AboveClosed(b)) | (AboveOpen(b), GeneratedBy(ws)) | (AboveClosed(b), GeneratedBy(ws)) => {
                GeneratedBy(ws.iter().map(|w| w + b).collect())
            }
            (GeneratedBy(_), GeneratedBy(_)) => {
                return Err(CutError::Unsupported("sum of two witness-generated segments".into()))
            }
        })
    }

    /// Union of two final segments (one of them contains the other).
    pub fn union(&self, other: &FinalSegment) -> Result<FinalSegment, CutError> {
        use FinalSegment::*;
        Ok(match (self, other) {
            (Empty, x) | (x, Empty) => x.clone(),
            (Everything, _) | (_, Everything) => Everything,
            (AboveOpen(a), AboveOpen(b)) => AboveOpen(a.try_min(b)?),
            (AboveClosed(a), AboveClosed(b)) => AboveClosed(a.try_min(b)?),
            (AboveOpen(a), AboveClosed(b)) | (AboveClosed(b), AboveOpen(a)) => {
                if b.try_le(a)? {
                    AboveClosed(b.clone())
                } else {
                    AboveOpen(a.clone())
                }
            }
            (GeneratedBy(ws), x) | (x, GeneratedBy(ws)) => {
                let bound = match x {
                    AboveOpen(g) | AboveClosed(g) => g,
                    _ => return Err(CutError::Unsupported("union of two witness-generated segments".into())),
                };
                let mut covers = false;
                for w in ws {
                    if w.try_le(bound)? {
                        covers = true;
                        break;
                    }
                }
                if covers {
                    GeneratedBy(ws.clone())
                } else {
                    return Err(CutError::Unsupported("witness segment may be strictly inside a principal one".into()));
                }
            }
        })
    }

    /// Whether `S` lies inside the maximal ideal segment `{x > 0}`; `None`
    /// when witnesses cannot decide it.
    pub fn within_positive(&self) -> Result<Option<bool>, CutError> {
        Ok(match self {
            FinalSegment::AboveOpen(g) => Some(g.try_signum()? != Ordering::Less),
            FinalSegment::AboveClosed(g) => Some(g.try_signum()? == Ordering::Greater),
            FinalSegment::GeneratedBy(ws) => {
                for w in ws {
                    if w.try_signum()? != Ordering::Greater {
                        return Ok(Some(false));
                    }
                }
                None
            }
            FinalSegment::Empty => Some(true),
            FinalSegment::Everything => Some(false),
        })
    }
}

impl InitialSegment {
    pub fn neg(&self) -> FinalSegment {
        match self {
            InitialSegment::BelowOpen(g) => FinalSegment::AboveOpen(-g),
            InitialSegment::BelowClosed(g) => FinalSegment::AboveClosed(-g),
            InitialSegment::GeneratedBy(ws) => FinalSegment::GeneratedBy(ws.iter().map(|w| -w).collect()),
            InitialSegment::Empty => FinalSegment::Empty,
            InitialSegment::Everything => FinalSegment::Everything,
        }
    }

    pub fn contains(&self, val: &Exponent) -> Result<bool, CutError> {
        self.neg().contains(&-val)
    }

    /// The left set of a cut.
    pub fn left_of(cut: &Cut) -> InitialSegment {
        match cut {
            Cut::MinusInfinity => InitialSegment::Empty,
            Cut::PlusInfinityMinus => InitialSegment::Everything,
            Cut::Principal(g, Side::Minus) => InitialSegment::BelowOpen(g.clone()),
            Cut::Principal(g, Side::Plus) => InitialSegment::BelowClosed(g.clone()),
            Cut::Witnesses(ws) => InitialSegment::GeneratedBy(ws.clone()),
        }
    }
}

/// `gamma - D = {gamma - d | d in D}` for `D` the left set of `cut`.
pub fn point_minus_cut(gamma: &Exponent, cut: &Cut) -> FinalSegment {
    InitialSegment::left_of(cut).neg().shift(gamma)
}

impl fmt::Display for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalSegment::AboveOpen(g) => write!(f, "{{v > {g}}}"),
            FinalSegment::AboveClosed(g) => write!(f, "{{v >= {g}}}"),
            FinalSegment::GeneratedBy(ws) => {
                let parts: Vec<String> = ws.iter().map(|e| e.to_string()).collect();
                write!(f, "{{v >= some of [{}]}}", parts.join(", "))
            }
            FinalSegment::Empty => write!(f, "{{}}"),
            FinalSegment::Everything => write!(f, "{{all}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exponents::BasisContext;

    fn e(ctx: &Arc<BasisContext>, s: &str) -> Exponent {
        ctx.parse(s).unwrap()
    }

    #[test]
    fn witnesses_below_minus_one_give_minus_one_minus() {
        let ctx = BasisContext::with_pi();
        let vals: Vec<_> = (1..=5).map(|l| e(&ctx, &format!("-1 - 1/{}", 3i64.pow(l + 1)))).collect();
        let c = cut_from_witnesses(&vals, Some(&e(&ctx, "-1")), false, 4, 3).unwrap();
        assert_eq!(c, Cut::Principal(e(&ctx, "-1"), Side::Minus));
        assert_eq!(c.to_string(), "(-1)^-");
    }

    #[test]
    fn pi_witnesses_give_zero_minus() {
        let ctx = BasisContext::with_pi();
        let vals: Vec<_> = (1..=5).map(|l| e(&ctx, &format!("-pi/{}", 3i64.pow(l + 1)))).collect();
        let c = cut_from_witnesses(&vals, Some(&e(&ctx, "0")), false, 4, 3).unwrap();
        assert_eq!(c, Cut::Principal(e(&ctx, "0"), Side::Minus));
        // too few samples for the requested depth
        let c = cut_from_witnesses(&vals[..2], Some(&e(&ctx, "0")), false, 4, 3).unwrap();
        assert!(matches!(c, Cut::Witnesses(_)));
    }

    #[test]
    fn attained_witness_gives_plus() {
        let ctx = BasisContext::with_pi();
        let c = cut_from_witnesses(&[e(&ctx, "pi/2")], None, true, 3, 3).unwrap();
        assert_eq!(c, Cut::Principal(e(&ctx, "pi/2"), Side::Plus));
        let bad = [e(&ctx, "1"), e(&ctx, "1/2")];
        assert_eq!(cut_from_witnesses(&bad, None, false, 3, 3), Err(CutError::NonMonotone(1)));
    }

    #[test]
    fn comparisons() {
        let ctx = BasisContext::with_pi();
        let zm = Cut::Principal(e(&ctx, "0"), Side::Minus);
        let zp = Cut::Principal(e(&ctx, "0"), Side::Plus);
        let mm = Cut::Principal(e(&ctx, "-1"), Side::Minus);
        assert_eq!(cut_cmp(&zm, &zp).unwrap(), CutOrdering::Less);
        assert_eq!(cut_cmp(&mm, &zm).unwrap(), CutOrdering::Less);
        assert_eq!(cut_cmp(&Cut::MinusInfinity, &mm).unwrap(), CutOrdering::Less);
        assert_eq!(cut_cmp(&Cut::MinusInfinity, &Cut::MinusInfinity).unwrap(), CutOrdering::Equal);
        assert_eq!(cut_cmp(&Cut::PlusInfinityMinus, &zp).unwrap(), CutOrdering::Greater);
        let w = Cut::Witnesses(vec![e(&ctx, "-1/2"), e(&ctx, "-1/4")]);
        assert_eq!(cut_cmp(&w, &zm).unwrap(), CutOrdering::Inconclusive);
        assert_eq!(cut_cmp(&mm, &w).unwrap(), CutOrdering::Less);
        assert_eq!(cut_cmp(&w, &w.clone()).unwrap(), CutOrdering::Equal);
        assert_eq!(cut_cmp(&w, &Cut::Witnesses(vec![e(&ctx, "-1/3")])).unwrap(), CutOrdering::Inconclusive);
    }

    #[test]
    fn segments_from_cuts() {
        let ctx = BasisContext::with_pi();
        let zero = e(&ctx, "0");
        let one = e(&ctx, "1");
        let zm = Cut::Principal(zero.clone(), Side::Minus);
        let mm = Cut::Principal(-&one, Side::Minus);
        assert_eq!(point_minus_cut(&zero, &zm), FinalSegment::AboveOpen(zero.clone()));
        assert_eq!(point_minus_cut(&one, &zm), FinalSegment::AboveOpen(one.clone()));
        assert_eq!(point_minus_cut(&zero, &mm), FinalSegment::AboveOpen(one.clone()));
        assert_eq!(point_minus_cut(&zero, &Cut::Principal(zero.clone(), Side::Plus)), FinalSegment::AboveClosed(zero.clone()));
        assert_eq!(point_minus_cut(&zero, &Cut::MinusInfinity), FinalSegment::Empty);
        assert_eq!(point_minus_cut(&zero, &Cut::PlusInfinityMinus), FinalSegment::Everything);
    }

    #[test]
    fn membership() {
        let ctx = BasisContext::with_pi();
        let m = FinalSegment::AboveOpen(e(&ctx, "0"));
        for n in 1..6 {
            assert!(m.contains(&e(&ctx, &format!("1/{}", 3i64.pow(n + 1)))).unwrap());
        }
        let s = FinalSegment::AboveOpen(e(&ctx, "1"));
        assert!(!s.contains(&e(&ctx, "1")).unwrap());
        assert!(s.contains(&e(&ctx, "1 + 1/3")).unwrap());
        assert!(FinalSegment::AboveClosed(e(&ctx, "1")).contains(&e(&ctx, "1")).unwrap());
        let g = FinalSegment::GeneratedBy(vec![e(&ctx, "1/2"), e(&ctx, "1/4")]);
        assert!(g.contains(&e(&ctx, "1/3")).unwrap());
        assert!(!g.contains(&e(&ctx, "1/5")).unwrap());
    }

    #[test]
    fn negation_is_an_involution() {
        let ctx = BasisContext::with_pi();
        let segs = [
            FinalSegment::AboveOpen(e(&ctx, "pi - 1")),
            FinalSegment::AboveClosed(e(&ctx, "2/3")),
            FinalSegment::GeneratedBy(vec![e(&ctx, "1"), e(&ctx, "1/2")]),
            FinalSegment::Empty,
            FinalSegment::Everything,
        ];
        for s in segs {
            assert_eq!(s.neg().neg(), s);
        }
        let d = FinalSegment::AboveClosed(e(&ctx, "1")).neg();
        assert!(d.contains(&e(&ctx, "-1")).unwrap());
        assert!(!d.contains(&e(&ctx, "-1/2")).unwrap());
    }

    #[test]
    fn minkowski_and_union() {
        let ctx = BasisContext::with_pi();
        let a = FinalSegment::AboveOpen(e(&ctx, "1"));
        let b = FinalSegment::AboveClosed(e(&ctx, "pi"));
        assert_eq!(a.minkowski(&b).unwrap(), FinalSegment::AboveOpen(e(&ctx, "1 + pi")));
        assert_eq!(b.minkowski(&b).unwrap(), FinalSegment::AboveClosed(e(&ctx, "2*pi")));
        let g = FinalSegment::GeneratedBy(vec![e(&ctx, "1")]);
        assert!(g.minkowski(&g).is_err());
        assert_eq!(a.union(&FinalSegment::AboveOpen(e(&ctx, "0"))).unwrap(), FinalSegment::AboveOpen(e(&ctx, "0")));
        assert_eq!(a.union(&FinalSegment::AboveClosed(e(&ctx, "1"))).unwrap(), FinalSegment::AboveClosed(e(&ctx, "1")));
        assert_eq!(FinalSegment::AboveOpen(e(&ctx, "0")).within_positive().unwrap(), Some(true));
        assert_eq!(FinalSegment::AboveOpen(e(&ctx, "-1/9")).within_positive().unwrap(), Some(false));
    }
}
