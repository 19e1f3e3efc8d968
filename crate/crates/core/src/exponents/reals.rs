//! Refinable rational enclosures of the basis reals.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Interval {
        if q.is_negative() {
            Interval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            Interval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    /// Intersection, assuming the two overlap.
    fn meet(&self, other: &Interval) -> Interval {
        Interval {
            lo: if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

/// Where a basis real comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealSource {
    Exact(BigRational),
    Pi,
    /// The real `1 / (offset + 1/pi) = pi / (offset * pi + 1)`, i.e. the
    /// reciprocal of `r = offset + 1/pi`.
    ReciprocalOffsetInvPi { offset: BigRational },
}

/// Decimal digits delivered at refinement level `k` (levels start at 1).
fn digits_at(level: usize) -> u32 {
    24 * level as u32
}

impl RealSource {
    fn compute(&self, level: usize) -> Interval {
        match self {
            RealSource::Exact(q) => Interval::point(q.clone()),
            RealSource::Pi => pi_enclosure(level),
            RealSource::ReciprocalOffsetInvPi { offset } => {
                // x -> x / (offset*x + 1) is increasing for x > 0, offset >= 0.
                let pi = pi_enclosure(level);
                let f = |x: &BigRational| x / (offset * x + BigRational::one());
                Interval {
                    lo: f(&pi.lo),
                    hi: f(&pi.hi),
                }
            }
        }
    }
}

/// A real number with a monotonically shrinking cache of enclosures.
///
/// Refinement is serialized through a mutex and every new level is met with
/// the previous one, so cached intervals are nested.
#[derive(Debug)]
pub struct Enclosure {
    source: RealSource,
    cache: Mutex<Vec<Interval>>,
}

impl Enclosure {
    pub fn new(source: RealSource) -> Self {
        Enclosure {
            source,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn source(&self) -> &RealSource {
        &self.source
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.source, RealSource::Exact(_))
    }

    /// Enclosure at refinement level `level >= 1`.
    pub fn at(&self, level: usize) -> Interval {
        let level = level.max(1);
        if let RealSource::Exact(q) = &self.source {
            return Interval::point(q.clone());
        }
        let mut cache = self.cache.lock().expect("enclosure cache poisoned");
        while cache.len() < level {
            let next = self.source.compute(cache.len() + 1);
            let next = match cache.last() {
                Some(prev) => prev.meet(&next),
                None => next,
            };
            cache.push(next);
        }
        cache[level - 1].clone()
    }
}

fn pi_cache() -> &'static Mutex<Vec<Interval>> {
    static CACHE: OnceLock<Mutex<Vec<Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Rigorous enclosure of pi with at least `24 * level` correct decimals.
pub fn pi_enclosure(level: usize) -> Interval {
    let level = level.max(1);
    let mut cache = pi_cache().lock().expect("pi cache poisoned");
    while cache.len() < level {
        let next = machin_interval(digits_at(cache.len() + 1));
        let next = match cache.last() {
            Some(prev) => prev.meet(&next),
            None => next,
        };
        cache.push(next);
    }
    cache[level - 1].clone()
}

/// arctan(1/x) scaled by `scale`, with the number of truncating operations
/// performed (each contributes at most one unit of error).
fn arctan_inv(x: u32, scale: &BigInt) -> (BigInt, u64) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = scale / &x;
    let mut sum = power.clone();
    let mut ops = 1u64;
    let mut k = 1u64;
    loop {
        power = &power / &x2;
        let term = &power / BigInt::from(2 * k + 1);
        ops += 2;
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    // tail below one unit
    (sum, ops + 1)
}

fn machin_interval(digits: u32) -> Interval {
    let guard = 12u32;
    let scale = BigInt::from(10u32).pow(digits + guard);
    let (a5, e5) = arctan_inv(5, &scale);
    let (a239, e239) = arctan_inv(239, &scale);
    let approx = a5 * 16 - a239 * 4;
    let err = BigInt::from(16 * e5 + 4 * e239 + 1);
    let denom = BigRational::from_integer(scale);
    Interval {
        lo: BigRational::from_integer(&approx - &err) / &denom,
        hi: BigRational::from_integer(&approx + &err) / &denom,
    }
}
