//! Galois group models, symbolic automorphism action, and ramification
//! ideals `I_sigma`, `I_H` as final segments of the value group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{FFElem, FieldSpec};
use crate::cuts::{hint_is_limit, point_minus_cut, Cut, CutError, FinalSegment};
use crate::exponents::{BasisContext, Exponent, ExponentError};
use crate::series::{HahnSeries, SeriesError};

const COEFF_BUDGET: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error("element {0} does not belong to this group model")]
    ModelMismatch(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("unknown group generator {0}")]
    UnknownGenerator(String),
    #[error("expression evaluates to zero: {0}")]
    ZeroEvaluation(String),
    #[error("S(theta, H) is empty: H is trivial")]
    EmptyS,
    #[error("no segment supplied for subgroup {0}")]
    MissingSegment(String),
    #[error("reduction by Artin-Schreier relations did not terminate")]
    Reduction,
}

/// An element in normal form: exponent vector of the generators.
/// For the Heisenberg model the vector is `[a, b, c]` for `iota^a tau^b sigma^c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupModel {
    /// `C_p^n` generated by `sigma1, ..., sigman`.
    ElementaryAbelian { n: usize, p: u32 },
    /// Order `p^3`, `iota` central, `sigma tau sigma^-1 = iota^-2 tau`.
    Heisenberg { p: u32 },
}

impl GroupModel {
    pub fn p(&self) -> u32 {
        match self {
            GroupModel::ElementaryAbelian { p, .. } | GroupModel::Heisenberg { p } => *p,
        }
    }

    fn rank(&self) -> usize {
        match self {
            GroupModel::ElementaryAbelian { n, .. } => *n,
            GroupModel::Heisenberg { .. } => 3,
        }
    }

    pub fn order(&self) -> u64 {
        (self.p() as u64).pow(self.rank() as u32)
    }

    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupModel::ElementaryAbelian { n, .. } => (1..=*n).map(|i| format!("sigma{i}")).collect(),
            GroupModel::Heisenberg { .. } => vec!["iota".into(), "tau".into(), "sigma".into()],
        }
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.rank()])
    }

    pub fn generator(&self, name: &str) -> Result<GroupElem, RamError> {
        let i = self
            .generator_names()
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| RamError::UnknownGenerator(name.into()))?;
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Ok(GroupElem(v))
    }

    fn check(&self, g: &GroupElem) -> Result<(), RamError> {
        if g.0.len() != self.rank() || g.0.iter().any(|&e| e >= self.p()) {
            return Err(RamError::ModelMismatch(format!("{:?}", g.0)));
        }
        Ok(())
    }

    pub fn mul(&self, g: &GroupElem, h: &GroupElem) -> Result<GroupElem, RamError> {
        self.check(g)?;
        self.check(h)?;
        let p = self.p() as i64;
        let m = |x: i64| x.rem_euclid(p) as u32;
        Ok(match self {
            GroupModel::ElementaryAbelian { .. } => GroupElem(g.0.iter().zip(&h.0).map(|(a, b)| m(*a as i64 + *b as i64)).collect()),
            GroupModel::Heisenberg { .. } => {
                let (a, b, c) = (g.0[0] as i64, g.0[1] as i64, g.0[2] as i64);
                let (a2, b2, c2) = (h.0[0] as i64, h.0[1] as i64, h.0[2] as i64);
                GroupElem(vec![m(a + a2 - 2 * c * b2), m(b + b2), m(c + c2)])
            }
        })
    }

    pub fn inv(&self, g: &GroupElem) -> Result<GroupElem, RamError> {
        self.check(g)?;
        let p = self.p() as i64;
        let m = |x: i64| x.rem_euclid(p) as u32;
        Ok(match self {
            GroupModel::ElementaryAbelian { .. } => GroupElem(g.0.iter().map(|a| m(-(*a as i64))).collect()),
            GroupModel::Heisenberg { .. } => {
                let (a, b, c) = (g.0[0] as i64, g.0[1] as i64, g.0[2] as i64);
                GroupElem(vec![m(-a - 2 * c * b), m(-b), m(-c)])
            }
        })
    }

    pub fn pow(&self, g: &GroupElem, k: i64) -> Result<GroupElem, RamError> {
        let base = if k < 0 { self.inv(g)? } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Product of a word of `(generator, power)` pairs, left to right.
    pub fn word(&self, letters: &[(&str, i64)]) -> Result<GroupElem, RamError> {
        let mut acc = self.identity();
        for (name, k) in letters {
            acc = self.mul(&acc, &self.pow(&self.generator(name)?, *k)?)?;
        }
        Ok(acc)
    }

    pub fn elements(&self) -> Vec<GroupElem> {
        let p = self.p();
        let mut out = vec![Vec::new()];
        for _ in 0..self.rank() {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..p).map(move |e| {
                        let mut v = v.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(GroupElem).collect()
    }

    /// Generator powers whose successive application realizes `g`: the
    /// rightmost factor of the normal form acts first.
    fn action_word(&self, g: &GroupElem) -> Vec<(usize, u32)> {
        (0..self.rank()).rev().map(|i| (i, g.0[i])).filter(|(_, k)| *k > 0).collect()
    }

    pub fn format(&self, g: &GroupElem) -> String {
        let names = self.generator_names();
        let parts: Vec<String> = g
            .0
            .iter()
            .zip(&names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join("*")
        }
    }
}

/// A materialized subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<GroupElem>,
    pub elements: Vec<GroupElem>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn label(&self, model: &GroupModel) -> String {
        if self.generators.is_empty() {
            return "<id>".into();
        }
        let g: Vec<String> = self.generators.iter().map(|x| model.format(x)).collect();
        format!("<{}>", g.join(", "))
    }

    pub fn nontrivial_elements(&self) -> impl Iterator<Item = &GroupElem> {
        self.elements.iter().filter(|g| g.0.iter().any(|&e| e != 0))
    }
}

pub fn closure(model: &GroupModel, gens: &[GroupElem]) -> Result<BTreeSet<GroupElem>, RamError> {
    let mut set = BTreeSet::from([model.identity()]);
    let mut frontier = vec![model.identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = model.mul(&x, g)?;
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(set)
}

/// All subgroups, the trivial one first, ordered by size.
pub fn subgroup_enumerate(model: &GroupModel) -> Result<Vec<Subgroup>, RamError> {
    let elems = model.elements();
    let mut found: BTreeMap<BTreeSet<GroupElem>, Vec<GroupElem>> = BTreeMap::new();
    found.insert(BTreeSet::from([model.identity()]), Vec::new());
    let mut queue = vec![(BTreeSet::from([model.identity()]), Vec::new())];
    while let Some((set, gens)) = queue.pop() {
        for g in &elems {
            if set.contains(g) {
                continue;
            }
            let mut next_gens: Vec<GroupElem> = gens.clone();
            next_gens.push(g.clone());
            let next = closure(model, &next_gens)?;
            if !found.contains_key(&next) {
                found.insert(next.clone(), next_gens.clone());
                queue.push((next, next_gens));
            }
        }
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|(set, generators)| Subgroup {
            generators,
            elements: set.into_iter().collect(),
        })
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(out)
}

/// The identities relating `sigma`, `tau`, `iota`, each as an equality of
/// normal forms.
pub fn heisenberg_relations(model: &GroupModel) -> Result<Vec<(String, bool)>, RamError> {
    let w = |l: &[(&str, i64)]| model.word(l);
    let mut out = Vec::new();
    out.push((
        "(i) iota commutes with sigma and tau".into(),
        w(&[("iota", 1), ("sigma", 1)])? == w(&[("sigma", 1), ("iota", 1)])? && w(&[("iota", 1), ("tau", 1)])? == w(&[("tau", 1), ("iota", 1)])?,
    ));
    out.push((
        "(ii) sigma tau sigma^-1 = iota^-2 tau".into(),
        w(&[("sigma", 1), ("tau", 1), ("sigma", -1)])? == w(&[("iota", -2), ("tau", 1)])?,
    ));
    out.push((
        "(iii) sigma tau sigma^-1 tau^-1 = iota^-2, tau sigma^-1 tau^-1 = iota^-2 sigma^-1".into(),
        w(&[("sigma", 1), ("tau", 1), ("sigma", -1), ("tau", -1)])? == w(&[("iota", -2)])?
            && w(&[("tau", 1), ("sigma", -1), ("tau", -1)])? == w(&[("iota", -2), ("sigma", -1)])?,
    ));
    out.push((
        "(iv) tau^-1 sigma tau sigma^-1 = iota^-2, tau^-1 sigma tau = iota^-2 sigma".into(),
        w(&[("tau", -1), ("sigma", 1), ("tau", 1), ("sigma", -1)])? == w(&[("iota", -2)])?
            && w(&[("tau", -1), ("sigma", 1), ("tau", 1)])? == w(&[("iota", -2), ("sigma", 1)])?,
    ));
    out.push((
        "(v) sigma tau = iota^-2 tau sigma".into(),
        w(&[("sigma", 1), ("tau", 1)])? == w(&[("iota", -2), ("tau", 1), ("sigma", 1)])?,
    ));
    Ok(out)
}

/// The variant of (iv) with conclusion `tau^-1 sigma tau = iota^-1 sigma`.
pub fn lemma_iv_iota_inverse_form(model: &GroupModel) -> Result<bool, RamError> {
    Ok(model.word(&[("tau", -1), ("sigma", 1), ("tau", 1)])? == model.word(&[("iota", -1), ("sigma", 1)])?)
}

/// Names of the field generators an action table talks about.
#[derive(Clone, Debug)]
pub struct SymbolSet {
    names: Arc<Vec<String>>,
    ctx: Arc<BasisContext>,
    field: Arc<FieldSpec>,
}

impl PartialEq for SymbolSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl SymbolSet {
    pub fn new(ctx: &Arc<BasisContext>, field: &Arc<FieldSpec>, names: &[&str]) -> Self {
        SymbolSet {
            names: Arc::new(names.iter().map(|s| s.to_string()).collect()),
            ctx: ctx.clone(),
            field: field.clone(),
        }
    }

    pub fn index(&self, name: &str) -> Result<usize, RamError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| RamError::UnknownSymbol(name.into()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, name: &str) -> Result<Expr, RamError> {
        let i = self.index(name)?;
        let mut e = vec![0; self.names.len()];
        e[i] = 1;
        let one = HahnSeries::constant(&self.ctx, FFElem::one(&self.field));
        Ok(Expr {
            symbols: self.clone(),
            terms: BTreeMap::from([(e, one)]),
        })
    }

    pub fn constant(&self, c: HahnSeries) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_known_zero() {
            terms.insert(vec![0; self.names.len()], c);
        }
        Expr { symbols: self.clone(), terms }
    }

    pub fn ff(&self, c: FFElem) -> Expr {
        self.constant(HahnSeries::constant(&self.ctx, c))
    }

    pub fn int(&self, n: i64) -> Expr {
        self.ff(FFElem::from_int(&self.field, n))
    }

    pub fn zero(&self) -> Expr {
        Expr {
            symbols: self.clone(),
            terms: BTreeMap::new(),
        }
    }
}

fn coeff_add(a: &HahnSeries, b: &HahnSeries) -> Result<Option<HahnSeries>, RamError> {
    let s = a.add(b);
    if a.finite_terms().is_some() && b.finite_terms().is_some() {
        let s = s.collect_all(COEFF_BUDGET)?;
        return Ok((!s.is_known_zero()).then_some(s));
    }
    Ok(Some(s))
}

fn coeff_mul(a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries, RamError> {
    let s = a.product(b);
    if a.finite_terms().is_some() && b.finite_terms().is_some() {
        return Ok(s.collect_all(COEFF_BUDGET)?);
    }
    Ok(s)
}

/// A polynomial in field-generator symbols with series coefficients.
/// Finite coefficients are combined eagerly, so cancellation among them is
/// exact.
#[derive(Clone, Debug)]
pub struct Expr {
    symbols: SymbolSet,
    terms: BTreeMap<Vec<u32>, HahnSeries>,
}

impl Expr {
    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the constant monomial when nothing else is present.
    pub fn as_constant(&self) -> Option<HahnSeries> {
        match self.terms.len() {
            0 => Some(HahnSeries::zero(&self.symbols.ctx, &self.symbols.field)),
            1 => self.terms.get(&vec![0; self.symbols.names.len()]).cloned(),
            _ => None,
        }
    }

    fn same(&self, other: &Expr) -> Result<(), RamError> {
        if self.symbols != other.symbols {
            return Err(RamError::UnknownSymbol(format!("{:?} vs {:?}", self.symbols.names, other.symbols.names)));
        }
        Ok(())
    }

    fn insert(terms: &mut BTreeMap<Vec<u32>, HahnSeries>, e: Vec<u32>, c: HahnSeries) -> Result<(), RamError> {
        match terms.remove(&e) {
            None => {
                if !c.is_known_zero() {
                    terms.insert(e, c);
                }
            }
            Some(old) => {
                if let Some(s) = coeff_add(&old, &c)? {
                    terms.insert(e, s);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Expr) -> Result<Expr, RamError> {
        self.same(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert(&mut terms, e.clone(), c.clone())?;
        }
        Ok(Expr {
            symbols: self.symbols.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Expr {
        Expr {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Result<Expr, RamError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Result<Expr, RamError> {
        self.same(other)?;
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                Self::insert(&mut terms, e, coeff_mul(c1, c2)?)?;
            }
        }
        Ok(Expr {
            symbols: self.symbols.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Expr, RamError> {
        let mut acc = self.symbols.int(1);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Replace symbol `i` by `images[i]`.
    pub fn substitute(&self, images: &[Expr]) -> Result<Expr, RamError> {
        let mut acc = self.symbols.zero();
        for (e, c) in &self.terms {
            let mut mono = self.symbols.constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    mono = mono.mul(&images[i].pow(k)?)?;
                }
            }
            acc = acc.add(&mono)?;
        }
        Ok(acc)
    }

    /// Rewrites `x^p` as `x + rhs_x` for every symbol with a relation
    /// `AS(x) = rhs_x` until no such power remains.
    pub fn reduce_as(&self, relations: &[(usize, Expr)]) -> Result<Expr, RamError> {
        let p = self.symbols.field.p();
        let mut cur = self.clone();
        for _ in 0..1000 {
            let hit = cur.terms.iter().find_map(|(e, c)| {
                relations
                    .iter()
                    .find(|(i, _)| e[*i] >= p)
                    .map(|(i, rhs)| (e.clone(), c.clone(), *i, rhs.clone()))
            });
            let Some((e, c, i, rhs)) = hit else { return Ok(cur) };
            cur.terms.remove(&e);
            let mut lower = e.clone();
            lower[i] -= p;
            let mut mono = cur.symbols.zero();
            mono.terms.insert(lower, c);
            let x = cur.symbols.var(&cur.symbols.names[i].clone())?;
            cur = cur.add(&mono.mul(&x.add(&rhs)?)?)?;
        }
        Err(RamError::Reduction)
    }

    /// The series obtained by substituting `values` for the symbols.
    pub fn evaluate(&self, values: &[HahnSeries]) -> HahnSeries {
        let (ctx, field) = (&self.symbols.ctx, &self.symbols.field);
        let parts = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut acc = c.clone();
                for (i, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        acc = acc.product(&values[i]);
                    }
                }
                acc
            })
            .collect();
        HahnSeries::sum(ctx, field, parts)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(self.symbols.names.iter())
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            let cs = c.to_string();
            let one = c.finite_terms().is_some_and(|t| t.len() == 1 && t[0].exp.is_zero() && t[0].coeff.is_one());
            parts.push(match (mono.is_empty(), one) {
                (true, _) => cs,
                (false, true) => mono.join("*"),
                (false, false) => format!("({cs})*{}", mono.join("*")),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Images of the field generators under each group generator; symbols
/// without an entry are fixed.
#[derive(Clone, Debug)]
pub struct ActionTable {
    symbols: SymbolSet,
    gens: Vec<String>,
    images: Vec<Vec<Option<Expr>>>,
}

impl ActionTable {
    pub fn new(model: &GroupModel, symbols: &SymbolSet) -> Self {
        let gens = model.generator_names();
        let images = vec![vec![None; symbols.names.len()]; gens.len()];
        ActionTable {
            symbols: symbols.clone(),
            gens,
            images,
        }
    }

    pub fn set(&mut self, generator: &str, symbol: &str, image: Expr) -> Result<(), RamError> {
        let g = self
            .gens
            .iter()
            .position(|n| n == generator)
            .ok_or_else(|| RamError::UnknownGenerator(generator.into()))?;
        let s = self.symbols.index(symbol)?;
        image.same(&self.symbols.zero())?;
        self.images[g][s] = Some(image);
        Ok(())
    }

    fn images_for(&self, g: usize) -> Result<Vec<Expr>, RamError> {
        self.images[g]
            .iter()
            .enumerate()
            .map(|(i, im)| match im {
                Some(e) => Ok(e.clone()),
                None => self.symbols.var(&self.symbols.names[i]),
            })
            .collect()
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }
}

/// A group acting on named field generators, with series values for the
/// generators.
#[derive(Clone, Debug)]
pub struct GaloisSetting {
    pub group: GroupModel,
    pub table: ActionTable,
    pub values: Vec<HahnSeries>,
}

impl GaloisSetting {
    pub fn var(&self, name: &str) -> Result<Expr, RamError> {
        self.table.symbols.var(name)
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.table.symbols
    }

    pub fn apply(&self, g: &GroupElem, expr: &Expr) -> Result<Expr, RamError> {
        apply_automorphism(&self.group, &self.table, g, expr)
    }

    pub fn evaluate(&self, expr: &Expr) -> HahnSeries {
        expr.evaluate(&self.values)
    }

    /// Valuation of a nonzero expression.
    pub fn val(&self, expr: &Expr) -> Result<Exponent, RamError> {
        if expr.is_zero() {
            return Err(RamError::ZeroEvaluation(expr.to_string()));
        }
        self.evaluate(expr).val()?.ok_or_else(|| RamError::ZeroEvaluation(expr.to_string()))
    }
}

/// `g(expr)`: substitute generator images per the table, rightmost factor
/// of the normal form first.
pub fn apply_automorphism(model: &GroupModel, table: &ActionTable, g: &GroupElem, expr: &Expr) -> Result<Expr, RamError> {
    model.check(g)?;
    expr.same(&table.symbols.zero())?;
    let mut cur = expr.clone();
    for (gen, k) in model.action_word(g) {
        let images = table.images_for(gen)?;
        for _ in 0..k {
            cur = cur.substitute(&images)?;
        }
    }
    Ok(cur)
}

/// `v(g b - b) - v(b)` for each test element `b`.
pub fn i_sigma_witnesses(setting: &GaloisSetting, g: &GroupElem, tests: &[Expr]) -> Result<Vec<Exponent>, RamError> {
    let mut out = Vec::with_capacity(tests.len());
    for b in tests {
        let diff = setting.apply(g, b)?.sub(b)?;
        out.push(&setting.val(&diff)? - &setting.val(b)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub element: String,
    pub test: String,
    pub value: Exponent,
}

/// A ramification ideal `I_H` as the final segment of values of its
/// elements, with sampled witnesses.
#[derive(Clone, Debug)]
pub struct RamSegment {
    pub segment: FinalSegment,
    pub evidence: Vec<Evidence>,
    /// Every evidence value lies in the segment.
    pub sound: bool,
    /// The segment is `I_H` itself rather than a lower bound for it.
    pub exact: bool,
    pub basis: String,
}

/// The sampled (HC) condition: `v(sigma theta - theta) - v(theta - a) >= 0`.
#[derive(Clone, Debug)]
pub struct HcReport {
    pub passed: bool,
    /// All sampled values are strictly positive.
    pub strict: bool,
    pub samples: Vec<Evidence>,
}

pub fn hc_check(setting: &GaloisSetting, h: &Subgroup, theta: &Expr, approximants: &[Expr]) -> Result<HcReport, RamError> {
    let tests: Vec<Expr> = approximants.iter().map(|a| theta.sub(a)).collect::<Result<_, _>>()?;
    let mut samples = Vec::new();
    let (mut passed, mut strict) = (true, true);
    for g in h.nontrivial_elements() {
        let vs = setting.val(&setting.apply(g, theta)?.sub(theta)?)?;
        for (a, b) in approximants.iter().zip(&tests) {
            let value = &vs - &setting.val(b)?;
            let sign = value.try_signum()?;
            passed &= sign != std::cmp::Ordering::Less;
            strict &= sign == std::cmp::Ordering::Greater;
            samples.push(Evidence {
                element: setting.group.format(g),
                test: format!("theta - ({a})"),
                value,
            });
        }
    }
    Ok(HcReport { passed, strict, samples })
}

/// `I_H` from `min S(theta, H) - D_1(theta, K_H)`, where `d1` is the cut
/// read off witnesses in `K_H` and `approximants` are those witnesses as
/// expressions. The segment is exact when `d1` is declared to be the true
/// distance, (HC) holds on the samples and `|H| <= p`; otherwise it is a
/// lower bound.
pub fn i_h_formula(setting: &GaloisSetting, h: &Subgroup, theta: &Expr, d1: &Cut, d1_exact: bool, approximants: &[Expr], hc: Option<&HcReport>) -> Result<RamSegment, RamError> {
    let mut best: Option<(Exponent, GroupElem)> = None;
    for g in h.nontrivial_elements() {
        let v = setting.val(&setting.apply(g, theta)?.sub(theta)?)?;
        let smaller = match &best {
            None => true,
            Some((b, _)) => v.try_lt(b)?,
        };
        if smaller {
            best = Some((v, g.clone()));
        }
    }
    let (min_s, g) = best.ok_or(RamError::EmptyS)?;
    let segment = point_minus_cut(&min_s, d1);
    let tests: Vec<Expr> = approximants.iter().map(|a| theta.sub(a)).collect::<Result<_, _>>()?;
    let values = i_sigma_witnesses(setting, &g, &tests)?;
    let mut evidence = Vec::with_capacity(values.len());
    let mut sound = true;
    for (a, value) in approximants.iter().zip(values) {
        sound &= segment.contains(&value)?;
        evidence.push(Evidence {
            element: setting.group.format(&g),
            test: format!("theta - ({a})"),
            value,
        });
    }
    let exact = d1_exact && hc.is_some_and(|r| r.passed) && h.order() as u32 <= setting.group.p();
    Ok(RamSegment {
        segment,
        evidence,
        sound,
        exact,
        basis: format!("min S = {min_s}, D_1 = {d1}"),
    })
}

/// `I_H` from witness values `v((rho b - b)/b)` decreasing to `hint`, one
/// test family per chosen element `rho`. When every family approaches
/// `hint`, the segment is `{v > hint}`; `bounded_above` declares that all
/// values of `I_H` exceed `hint`, which makes that segment exact.
pub fn i_h_from_limit(setting: &GaloisSetting, families: &[(GroupElem, Vec<Expr>)], hint: &Exponent, depth: u32, bounded_above: bool) -> Result<RamSegment, RamError> {
    let mut evidence = Vec::new();
    let mut all_limit = !families.is_empty();
    let mut pooled = Vec::new();
    for (g, tests) in families {
        let values = i_sigma_witnesses(setting, g, tests)?;
        let negs: Vec<Exponent> = values.iter().map(|v| -v).collect();
        let neg_hint = -hint;
        let increasing = negs.windows(2).try_fold(true, |ok, w| Ok::<_, ExponentError>(ok && w[0].try_lt(&w[1])?))?;
        all_limit &= increasing && hint_is_limit(&negs, &neg_hint, depth, setting.group.p())?;
        for (b, value) in tests.iter().zip(values) {
            evidence.push(Evidence {
                element: setting.group.format(g),
                test: b.to_string(),
                value: value.clone(),
            });
            pooled.push(value);
        }
    }
    let segment = if all_limit {
        FinalSegment::AboveOpen(hint.clone())
    } else {
        let mut sorted = pooled.clone();
        sort_desc(&mut sorted)?;
        sorted.dedup();
        FinalSegment::GeneratedBy(sorted)
    };
    let mut sound = true;
    for e in &evidence {
        sound &= segment.contains(&e.value)?;
    }
    Ok(RamSegment {
        exact: all_limit && bounded_above,
        segment,
        evidence,
        sound,
        basis: format!("witness values approaching {hint} from above"),
    })
}

/// `I_H` as the union of the ideals of subgroups covering `H`, typically
/// its cyclic subgroups.
pub fn union_segments(parts: &[RamSegment]) -> Result<RamSegment, RamError> {
    let mut segment = FinalSegment::Empty;
    let mut evidence = Vec::new();
    for part in parts {
        segment = segment.union(&part.segment)?;
        evidence.extend(part.evidence.iter().cloned());
    }
    Ok(RamSegment {
        segment,
        evidence,
        sound: parts.iter().all(|x| x.sound),
        exact: !parts.is_empty() && parts.iter().all(|x| x.exact),
        basis: format!("union of {} subgroup ideals", parts.len()),
    })
}

/// The cyclic subgroups contained in `h`.
pub fn cyclic_subgroups_of(model: &GroupModel, h: &Subgroup) -> Result<Vec<Subgroup>, RamError> {
    let mut out: Vec<Subgroup> = Vec::new();
    for g in h.nontrivial_elements() {
        let elements: Vec<GroupElem> = closure(model, std::slice::from_ref(g))?.into_iter().collect();
        if !out.iter().any(|c| c.elements == elements) {
            out.push(Subgroup {
                generators: vec![g.clone()],
                elements,
            });
        }
    }
    Ok(out)
}

fn sort_desc(v: &mut [Exponent]) -> Result<(), ExponentError> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1].try_lt(&v[j])? {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

/// `Ram(E)` and the invariants it is compared with.
#[derive(Clone, Debug)]
pub struct RamComparison {
    pub ideals: Vec<FinalSegment>,
    /// Per ideal: contained in the maximal ideal `{v > 0}`.
    pub inside_maximal: Vec<Option<bool>>,
    /// Every segment is exact, so `#Ram` is a count rather than a lower bound.
    pub exact: bool,
    pub depth: usize,
    pub s_theta: usize,
}

impl RamComparison {
    pub fn count(&self) -> usize {
        self.ideals.len()
    }
}

/// Deduplicates the segments of all nontrivial subgroups by endpoint.
pub fn ram_set_and_compare(model: &GroupModel, subgroups: &[Subgroup], segments: &[Option<RamSegment>], depth: usize, s_theta: usize) -> Result<RamComparison, RamError> {
    let mut ideals: Vec<FinalSegment> = Vec::new();
    let mut exact = true;
    for (h, seg) in subgroups.iter().zip(segments.iter().chain(std::iter::repeat(&None))) {
        if h.is_trivial() {
            continue;
        }
        let seg = seg.as_ref().ok_or_else(|| RamError::MissingSegment(h.label(model)))?;
        exact &= seg.exact;
        if !ideals.contains(&seg.segment) {
            ideals.push(seg.segment.clone());
        }
    }
    let inside_maximal = ideals.iter().map(|s| s.within_positive()).collect::<Result<_, _>>()?;
    Ok(RamComparison {
        ideals,
        inside_maximal,
        exact,
        depth,
        s_theta,
    })
}
