//! Finite fields `F_{p^m} = F_p[u]/(f)` used as coefficient rings.
//!
//! Elements are stored as a single integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! encoding the coefficient vector of a polynomial in `u`, which keeps them
//! `Copy`-cheap inside long term streams.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

const MAX_DEGREE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("modulus must have degree between 1 and {MAX_DEGREE}")]
    BadDegree,
    #[error("modulus {0} is reducible over F_p")]
    Reducible(String),
    #[error("field too large for brute-force routines ({0} elements)")]
    TooLarge(u64),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
}

/// `F_p[u]/(modulus)` with a monic irreducible modulus of degree `m`.
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    m: usize,
    /// Low coefficients `c_0 .. c_{m-1}` of the monic modulus.
    low: Vec<u32>,
    size: u64,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.low == other.low
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

type Digits = [u32; MAX_DEGREE];

/// Remainder of `a` (given by coefficient list, low first) mod the monic `b`.
fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let shift = a.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let t = (lead as u64 * bi as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop();
    }
    a
}

fn poly_from_index(mut idx: u64, len: usize, p: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (idx % p as u64) as u32;
            idx /= p as u64;
            d
        })
        .collect()
}

/// Brute force: no monic factor of degree `1..=m/2`.
fn is_irreducible(full: &[u32], p: u32) -> bool {
    let m = full.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = poly_from_index(idx, d, p);
            divisor.push(1);
            if poly_rem(full.to_vec(), &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Field with the given monic modulus (low coefficients first, leading 1
    /// implicit).
    pub fn new(p: u32, low: Vec<u32>) -> Result<Arc<FieldSpec>, CoeffError> {
        if !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        let m = low.len();
        if m == 0 || m > MAX_DEGREE {
            return Err(CoeffError::BadDegree);
        }
        let low: Vec<u32> = low.into_iter().map(|c| c % p).collect();
        let mut full = low.clone();
        full.push(1);
        if !is_irreducible(&full, p) {
            return Err(CoeffError::Reducible(fmt_poly(&full, "x")));
        }
        let size = (p as u64)
            .checked_pow(m as u32)
            .filter(|s| *s < (1u64 << 62))
            .ok_or(CoeffError::BadDegree)?;
        Ok(Arc::new(FieldSpec { p, m, low, size }))
    }

    /// The lexicographically least monic irreducible modulus of degree `m`
    /// (ordered by `c_{m-1}` first, then downwards).
    pub fn default_for(p: u32, m: usize) -> Result<Arc<FieldSpec>, CoeffError> {
        if !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(CoeffError::BadDegree);
        }
        let count = (p as u64).pow(m as u32);
        for idx in 0..count {
            let low = poly_from_index(idx, m, p);
            let mut full = low.clone();
            full.push(1);
            if is_irreducible(&full, p) {
                return FieldSpec::new(p, low);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn prime_field(p: u32) -> Result<Arc<FieldSpec>, CoeffError> {
        Self::default_for(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// The modulus as text, e.g. `u^2+1`.
    pub fn modulus_string(&self) -> String {
        let mut full = self.low.clone();
        full.push(1);
        fmt_poly(&full, "u")
    }

    fn decode(&self, mut v: u64) -> Digits {
        let mut d = [0u32; MAX_DEGREE];
        for slot in d.iter_mut().take(self.m) {
            *slot = (v % self.p as u64) as u32;
            v /= self.p as u64;
        }
        d
    }

    fn encode(&self, d: &Digits) -> u64 {
        d[..self.m].iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }
}

/// An element of a [`FieldSpec`].
#[derive(Clone)]
pub struct FFElem {
    field: Arc<FieldSpec>,
    value: u64,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FFElem {}

impl Hash for FFElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.value.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.field.decode(self.value);
        write!(f, "{}", fmt_poly(&d[..self.field.m], "u"))
    }
}

fn fmt_poly(coeffs: &[u32], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl FFElem {
    pub fn zero(field: &Arc<FieldSpec>) -> Self {
        FFElem { field: field.clone(), value: 0 }
    }

    pub fn one(field: &Arc<FieldSpec>) -> Self {
        Self::from_int(field, 1)
    }

    /// The image of an integer in the prime field.
    pub fn from_int(field: &Arc<FieldSpec>, n: i64) -> Self {
        let p = field.p as i64;
        FFElem {
            field: field.clone(),
            value: n.rem_euclid(p) as u64,
        }
    }

    /// The class of `u` (equal to `-c_0` when `m = 1`).
    pub fn generator(field: &Arc<FieldSpec>) -> Self {
        let mut d = [0u32; MAX_DEGREE];
        if field.m == 1 {
            d[0] = (field.p - field.low[0]) % field.p;
        } else {
            d[1] = 1;
        }
        FFElem {
            field: field.clone(),
            value: field.encode(&d),
        }
    }

    /// Element from its coefficient vector in `u`, low degree first.
    pub fn from_coeffs(field: &Arc<FieldSpec>, coeffs: &[u32]) -> Self {
        let mut d = [0u32; MAX_DEGREE];
        for (i, &c) in coeffs.iter().enumerate() {
            if i < field.m {
                d[i] = c % field.p;
            } else {
                // reduce higher powers through multiplication
                let mut acc = FFElem::from_int(field, c as i64);
                acc = acc.mul(&FFElem::generator(field).pow(i as u64));
                let cur = FFElem { field: field.clone(), value: field.encode(&d) };
                d = field.decode(cur.add(&acc).value);
            }
        }
        FFElem { field: field.clone(), value: field.encode(&d) }
    }

    /// All elements in index order.
    pub fn all(field: &Arc<FieldSpec>) -> impl Iterator<Item = FFElem> + '_ {
        (0..field.size).map(move |value| FFElem { field: field.clone(), value })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.value < self.field.p as u64
    }

    /// The integer representative in `0..p` of a prime-field element.
    pub fn prime_value(&self) -> Option<u32> {
        self.in_prime_field().then_some(self.value as u32)
    }

    pub fn same_field(&self, other: &FFElem) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    fn check(&self, other: &FFElem) -> Result<(), CoeffError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(CoeffError::FieldMismatch)
        }
    }

    fn with(&self, d: &Digits) -> FFElem {
        FFElem {
            field: self.field.clone(),
            value: self.field.encode(d),
        }
    }

    pub fn try_add(&self, other: &FFElem) -> Result<FFElem, CoeffError> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &FFElem) -> Result<FFElem, CoeffError> {
        self.check(other)?;
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &FFElem) -> Result<FFElem, CoeffError> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn try_div(&self, other: &FFElem) -> Result<FFElem, CoeffError> {
        self.check(other)?;
        Ok(self.mul(&other.inv()?))
    }

    pub(crate) fn add(&self, other: &FFElem) -> FFElem {
        let p = self.field.p;
        if self.field.m == 1 {
            return FFElem {
                field: self.field.clone(),
                value: (self.value + other.value) % p as u64,
            };
        }
        let (a, b) = (self.field.decode(self.value), self.field.decode(other.value));
        let mut d = [0u32; MAX_DEGREE];
        for i in 0..self.field.m {
            d[i] = (a[i] + b[i]) % p;
        }
        self.with(&d)
    }

    pub fn neg(&self) -> FFElem {
        let p = self.field.p;
        let a = self.field.decode(self.value);
        let mut d = [0u32; MAX_DEGREE];
        for i in 0..self.field.m {
            d[i] = (p - a[i]) % p;
        }
        self.with(&d)
    }

    pub(crate) fn sub(&self, other: &FFElem) -> FFElem {
        self.add(&other.neg())
    }

    pub(crate) fn mul(&self, other: &FFElem) -> FFElem {
        let f = &*self.field;
        let p = f.p as u64;
        if f.m == 1 {
            return FFElem {
                field: self.field.clone(),
                value: self.value * other.value % p,
            };
        }
        let (a, b) = (f.decode(self.value), f.decode(other.value));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..f.m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f.m {
                prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % p;
            }
        }
        // reduce by u^m = -(c_0 + ... + c_{m-1} u^{m-1})
        for k in (f.m..2 * f.m - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &c) in f.low.iter().enumerate() {
                let t = lead * c as u64 % p;
                prod[k - f.m + i] = (prod[k - f.m + i] + p - t) % p;
            }
        }
        let mut d = [0u32; MAX_DEGREE];
        for i in 0..f.m {
            d[i] = prod[i] as u32;
        }
        self.with(&d)
    }

    pub fn pow(&self, mut e: u64) -> FFElem {
        let mut base = self.clone();
        let mut acc = FFElem::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FFElem, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self.pow(self.field.size - 2))
    }

    /// `a^p`.
    pub fn frobenius(&self) -> FFElem {
        self.pow(self.field.p as u64)
    }

    /// The unique `b` with `b^p = a`, namely `a^{p^{m-1}}`.
    pub fn frobenius_inverse(&self) -> FFElem {
        let mut x = self.clone();
        for _ in 1..self.field.m {
            x = x.frobenius();
        }
        x
    }

    /// `a^p - a`.
    pub fn artin_schreier(&self) -> FFElem {
        self.frobenius().sub(self)
    }

    /// All `x` in the field with `x^p - x = self`; empty or a coset of `F_p`.
    pub fn as_roots_in_field(&self) -> Result<Vec<FFElem>, CoeffError> {
        if self.field.size > 1 << 24 {
            return Err(CoeffError::TooLarge(self.field.size));
        }
        let Some(root) = FFElem::all(&self.field).find(|x| x.artin_schreier() == *self) else {
            return Ok(Vec::new());
        };
        Ok((0..self.field.p as i64)
            .map(|k| root.add(&FFElem::from_int(&self.field, k)))
            .collect())
    }
}

impl std::ops::Add for &FFElem {
    type Output = FFElem;
    fn add(self, rhs: &FFElem) -> FFElem {
        self.try_add(rhs).expect("coefficient field mismatch")
    }
}

impl std::ops::Sub for &FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &FFElem) -> FFElem {
        self.try_sub(rhs).expect("coefficient field mismatch")
    }
}

impl std::ops::Mul for &FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &FFElem) -> FFElem {
        self.try_mul(rhs).expect("coefficient field mismatch")
    }
}

impl std::ops::Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        FFElem::neg(self)
    }
}
