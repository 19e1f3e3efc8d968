//! Artin-Schreier elements, generator combinations and their conjugates,
//! distance witnesses, Okutsu-sequence checks, and Hasse-Schmidt
//! derivatives.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::coefficients::FFElem;
use crate::cuts::{cut_from_witnesses, Cut, CutError, Side};
use crate::exponents::{Exponent, ExponentError, ValueLattice};
use crate::series::{HahnSeries, SeriesError, SupportCount, DEFAULT_TERM_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error("linear disjointness of the parts is not declared")]
    NotDisjoint,
    #[error("conjugate shift {0:?} vanishes, so theta is not a generator")]
    NotGenerator(Vec<u32>),
    #[error("no conjugates other than theta (degree one)")]
    EmptySet,
    #[error("invalid degree chain: {0}")]
    DegreeChain(String),
    #[error("invalid candidate: {0}")]
    Candidate(String),
    #[error("approximant {0} coincides with theta below the budget")]
    ZeroDistance(usize),
}

/// A root of `x^p - x = rhs` given by its series solution.
#[derive(Clone, Debug)]
pub struct ASElement {
    pub label: String,
    pub rhs: HahnSeries,
    pub solution: HahnSeries,
}

impl ASElement {
    pub fn solve(label: impl Into<String>, rhs: &HahnSeries) -> Result<Self, ExtError> {
        let label = label.into();
        let solution = HahnSeries::as_root(rhs)?.with_tag(label.clone());
        Ok(ASElement {
            label,
            rhs: rhs.clone(),
            solution,
        })
    }

    /// Whether `AS(solution)` and `rhs` agree below every bound.
    pub fn check_windows(&self, bounds: &[Exponent], budget: usize) -> Result<bool, ExtError> {
        let image = self.solution.artin_schreier();
        for b in bounds {
            if !image.agrees_below(&self.rhs, b, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `theta = sum c_i alpha_i` with finite coefficients `c_i`.
#[derive(Clone, Debug)]
pub struct GeneratorCombo {
    pub parts: Vec<(HahnSeries, ASElement)>,
    /// Declared: the `K(alpha_i)` are linearly disjoint over the ground field.
    pub disjoint: bool,
}

impl GeneratorCombo {
    pub fn new(parts: Vec<(HahnSeries, ASElement)>, disjoint: bool) -> Self {
        GeneratorCombo { parts, disjoint }
    }

    fn first(&self) -> &HahnSeries {
        &self.parts[0].1.solution
    }

    pub fn theta(&self) -> HahnSeries {
        let f = self.first();
        let terms = self.parts.iter().map(|(c, a)| c.product(&a.solution)).collect();
        HahnSeries::sum(f.context(), f.field(), terms)
    }

    /// `theta^p - c theta`, rewritten through `alpha_i^p = alpha_i + rhs_i` as
    /// `sum c_i^p rhs_i + (c_i^p - c c_i) alpha_i`, which avoids the infinite
    /// cancellation a direct expansion would need.
    pub fn frobenius_minus(&self, c: &HahnSeries) -> HahnSeries {
        let f = self.first();
        let mut terms = Vec::new();
        for (ci, a) in &self.parts {
            let cp = ci.pth_power();
            terms.push(cp.product(&a.rhs));
            terms.push(cp.sub(&c.product(ci)).product(&a.solution));
        }
        HahnSeries::sum(f.context(), f.field(), terms)
    }

    /// `AS(theta)`.
    pub fn artin_schreier_image(&self) -> HahnSeries {
        let f = self.first();
        self.frobenius_minus(&HahnSeries::constant(f.context(), FFElem::one(f.field())))
    }

    /// The shift `sum e_i c_i` taking theta to a conjugate.
    pub fn shift_for(&self, tuple: &[u32]) -> HahnSeries {
        let f = self.first();
        let terms = self
            .parts
            .iter()
            .zip(tuple)
            .map(|((c, _), &e)| c.scale(&FFElem::from_int(f.field(), e as i64)))
            .collect();
        HahnSeries::sum(f.context(), f.field(), terms)
    }
}

/// All tuples in `F_p^n`, lexicographic.
pub fn fp_tuples(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..p).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct Conjugate {
    pub tuple: Vec<u32>,
    pub series: HahnSeries,
}

/// `{theta + sum e_i c_i}` over all tuples.
pub fn conjugate_set(g: &GeneratorCombo) -> Result<Vec<Conjugate>, ExtError> {
    if !g.disjoint {
        return Err(ExtError::NotDisjoint);
    }
    let theta = g.theta();
    Ok(fp_tuples(g.first().p(), g.parts.len())
        .into_iter()
        .map(|tuple| {
            let series = theta.add(&g.shift_for(&tuple));
            Conjugate { tuple, series }
        })
        .collect())
}

/// `S_theta` both as a set and as a multiset (values with multiplicity),
/// sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SThetaResult {
    pub set: Vec<Exponent>,
    pub multiset: Vec<(Exponent, usize)>,
}

pub fn s_theta(g: &GeneratorCombo) -> Result<SThetaResult, ExtError> {
    if !g.disjoint {
        return Err(ExtError::NotDisjoint);
    }
    let mut multiset: Vec<(Exponent, usize)> = Vec::new();
    for tuple in fp_tuples(g.first().p(), g.parts.len()) {
        if tuple.iter().all(|&e| e == 0) {
            continue;
        }
        let v = g.shift_for(&tuple).val()?.ok_or_else(|| ExtError::NotGenerator(tuple.clone()))?;
        match multiset.iter_mut().find(|(e, _)| *e == v) {
            Some((_, n)) => *n += 1,
            None => multiset.push((v, 1)),
        }
    }
    sort_exps_by(&mut multiset, |x| &x.0)?;
    let set = multiset.iter().map(|(e, _)| e.clone()).collect();
    Ok(SThetaResult { set, multiset })
}

fn sort_exps_by<T>(v: &mut [T], key: impl Fn(&T) -> &Exponent) -> Result<(), ExponentError> {
    // insertion sort so comparison errors propagate
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && key(&v[j]).try_lt(key(&v[j - 1]))? {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

/// Krasner's constant `max S_theta`.
pub fn krasner_omega(g: &GeneratorCombo) -> Result<Exponent, ExtError> {
    s_theta(g)?.set.last().cloned().ok_or(ExtError::EmptySet)
}

/// Whether every nonzero `F_p`-combination of `coeffs` has valuation 0.
pub fn ge_witness_check(p: u32, coeffs: &[HahnSeries]) -> Result<bool, ExtError> {
    let Some(first) = coeffs.first() else { return Ok(true) };
    for tuple in fp_tuples(p, coeffs.len()) {
        if tuple.iter().all(|&e| e == 0) {
            continue;
        }
        let parts = coeffs
            .iter()
            .zip(&tuple)
            .map(|(c, &e)| c.scale(&FFElem::from_int(c.field(), e as i64)))
            .collect();
        let combo = HahnSeries::sum(first.context(), first.field(), parts);
        match combo.val()? {
            Some(v) if v.is_zero() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Values `v(theta - a)` for a declared family of approximants.
#[derive(Clone, Debug)]
pub struct DistanceWitnesses {
    pub approximants: Vec<(HahnSeries, u32)>,
    pub values: Vec<Exponent>,
    pub attained: bool,
}

/// How to read a witness family.
#[derive(Clone, Debug, Default)]
pub struct DistanceConfig {
    pub limit_hint: Option<Exponent>,
    pub attained: bool,
    /// Probe depth for the limit test.
    pub depth: u32,
    /// `lattices[i]` is the value group the `i`-th approximant lives in; the
    /// `i`-th value must fall outside it.
    pub lattices: Option<Vec<ValueLattice>>,
}

#[derive(Clone, Debug)]
pub struct DistanceEval {
    pub witnesses: DistanceWitnesses,
    pub cut: Cut,
    /// Per witness: its value lies outside the matching lattice.
    pub lattice_outside: Option<Vec<bool>>,
}

impl DistanceEval {
    /// Witness values increase, the cut is the hinted limit, and no value
    /// lies in its lattice: the non-attainment pattern.
    pub fn supports_limit(&self) -> bool {
        matches!(self.cut, Cut::Principal(_, Side::Minus)) && self.lattice_outside.as_ref().is_none_or(|v| v.iter().all(|b| *b))
    }
}

pub fn distance_witnesses_eval(theta: &HahnSeries, approximants: Vec<(HahnSeries, u32)>, cfg: &DistanceConfig) -> Result<DistanceEval, ExtError> {
    let mut values = Vec::with_capacity(approximants.len());
    for (i, (a, _)) in approximants.iter().enumerate() {
        let v = theta.sub(a).val()?.ok_or(ExtError::ZeroDistance(i))?;
        values.push(v);
    }
    let p = theta.p();
    let cut = cut_from_witnesses(&values, cfg.limit_hint.as_ref(), cfg.attained, cfg.depth, p)?;
    let lattice_outside = match &cfg.lattices {
        None => None,
        Some(ls) => {
            let mut out = Vec::with_capacity(values.len());
            for (v, l) in values.iter().zip(ls) {
                out.push(!l.contains(v)?);
            }
            Some(out)
        }
    };
    Ok(DistanceEval {
        witnesses: DistanceWitnesses {
            approximants,
            values,
            attained: cfg.attained,
        },
        cut,
        lattice_outside,
    })
}

/// Classification of an AS element from its `d_1` cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependence {
    /// `d_1 = 0^-`.
    Independent,
    /// `d_1 = delta^-` with `delta < 0`.
    Dependent(Exponent),
    Undetermined,
}

pub fn classify_dependence(d1: &Cut) -> Result<Dependence, ExtError> {
    Ok(match d1 {
        Cut::Principal(g, Side::Minus) => match g.try_signum()? {
            Ordering::Equal => Dependence::Independent,
            Ordering::Less => Dependence::Dependent(g.clone()),
            Ordering::Greater => Dependence::Undetermined,
        },
        _ => Dependence::Undetermined,
    })
}

/// One level `A_l` of an Okutsu candidate.
#[derive(Clone, Debug)]
pub struct OkutsuLevel {
    pub elements: Vec<HahnSeries>,
    pub degree: u32,
    /// Declared: `max D_{m_l}` exists and is realized by the single element.
    pub attained: bool,
}

/// `[A_0, ..., A_{r-1}, {theta}]`.
#[derive(Clone, Debug)]
pub struct OkutsuCandidate {
    pub levels: Vec<OkutsuLevel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Augmentation {
    Ordinary,
    Limit,
}

impl fmt::Display for Augmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Augmentation::Ordinary => "ordinary",
            Augmentation::Limit => "limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ConditionCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        ConditionCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OkutsuReport {
    pub depth: usize,
    pub augmentations: Vec<Augmentation>,
    /// `v(theta - a)` per element, for all levels below the top.
    pub level_values: Vec<Vec<Exponent>>,
    pub checks: Vec<ConditionCheck>,
}

impl OkutsuReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn min_exp(v: &[Exponent]) -> Result<&Exponent, ExponentError> {
    let mut best = &v[0];
    for e in &v[1..] {
        if e.try_lt(best)? {
            best = e;
        }
    }
    Ok(best)
}

fn max_exp(v: &[Exponent]) -> Result<&Exponent, ExponentError> {
    let mut best = &v[0];
    for e in &v[1..] {
        if best.try_lt(e)? {
            best = e;
        }
    }
    Ok(best)
}

/// Checks (OS1)-(OS3) on the sampled levels and (OS0) against the finite
/// `challenge` set of `(element, declared degree)` pairs. (OS0) is a
/// universal statement, so passing it here is a necessary condition only.
pub fn okutsu_verify(cand: &OkutsuCandidate, theta: &HahnSeries, challenge: &[(HahnSeries, u32)]) -> Result<OkutsuReport, ExtError> {
    let levels = &cand.levels;
    if levels.len() < 2 {
        return Err(ExtError::Candidate("need at least A_0 and {theta}".into()));
    }
    if levels[0].degree != 1 {
        return Err(ExtError::DegreeChain("m_0 must be 1".into()));
    }
    for w in levels.windows(2) {
        if w[0].degree >= w[1].degree {
            return Err(ExtError::DegreeChain(format!("{} is not below {}", w[0].degree, w[1].degree)));
        }
    }
    let top = levels.last().expect("nonempty");
    if top.elements.len() != 1 {
        return Err(ExtError::Candidate("top level must be {theta}".into()));
    }
    if levels[..levels.len() - 1].iter().any(|l| l.elements.is_empty()) {
        return Err(ExtError::Candidate("empty level".into()));
    }
    let r = levels.len() - 1;
    let mut level_values = Vec::with_capacity(r);
    for lvl in &levels[..r] {
        let mut vals = Vec::with_capacity(lvl.elements.len());
        for (i, a) in lvl.elements.iter().enumerate() {
            vals.push(theta.sub(a).val()?.ok_or(ExtError::ZeroDistance(i))?);
        }
        level_values.push(vals);
    }

    let mut checks = Vec::new();
    let mut augmentations = Vec::with_capacity(r);
    for (l, lvl) in levels[..r].iter().enumerate() {
        let vals = &level_values[l];
        if lvl.attained {
            augmentations.push(Augmentation::Ordinary);
            checks.push(ConditionCheck::new(
                format!("OS1 level {l}"),
                lvl.elements.len() == 1,
                format!("#A_{l} = {}", lvl.elements.len()),
            ));
        } else {
            augmentations.push(Augmentation::Limit);
            let mut increasing = true;
            for w in vals.windows(2) {
                if !w[0].try_lt(&w[1])? {
                    increasing = false;
                }
            }
            checks.push(ConditionCheck::new(
                format!("OS2 level {l}"),
                increasing,
                format!("{} values strictly increasing: {increasing}", vals.len()),
            ));
        }
        if l + 1 < r {
            let hi = max_exp(vals)?;
            let lo_next = min_exp(&level_values[l + 1])?;
            checks.push(ConditionCheck::new(
                format!("OS3 levels {l},{}", l + 1),
                hi.try_lt(lo_next)?,
                format!("max {hi} < min {lo_next}"),
            ));
        }
    }

    let mut os0_ok = true;
    let mut os0_detail = Vec::new();
    for (j, (b, deg)) in challenge.iter().enumerate() {
        let vb = match theta.sub(b).val()? {
            Some(v) => v,
            None => return Err(ExtError::Candidate(format!("challenge {j} equals theta"))),
        };
        for l in 0..r {
            if *deg >= levels[l + 1].degree {
                continue;
            }
            let top = max_exp(&level_values[l])?;
            if !vb.try_le(top)? {
                os0_ok = false;
                os0_detail.push(format!("challenge {j} (deg {deg}) beats A_{l}: {vb} > {top}"));
            }
        }
    }
    checks.push(ConditionCheck::new(
        "OS0 (necessary-conditions only)",
        os0_ok,
        if os0_ok {
            format!("{} challenge elements dominated", challenge.len())
        } else {
            os0_detail.join("; ")
        },
    ));

    Ok(OkutsuReport {
        depth: r,
        augmentations,
        level_values,
        checks,
    })
}

/// Concrete obstructions against a degree-`p` element `epsilon` sharing the
/// truncation of `theta` below 0, one per Kaplansky form `x^p - c` and
/// `x^p - c x - d`. `q1_neg < 0 < q1_pos` are sample leading exponents of
/// `c` and `c1` a sample leading coefficient other than 1.
pub fn kaplansky_obstructions(g: &GeneratorCombo, q1_neg: &Exponent, q1_pos: &Exponent, c1: &FFElem, budget: usize) -> Result<Vec<ConditionCheck>, ExtError> {
    let f = g.first();
    let (ctx, field) = (f.context().clone(), f.field().clone());
    let zero = Exponent::zero(&ctx);
    let theta = g.theta();
    let theta_p = g.frobenius_minus(&HahnSeries::zero(&ctx, &field));
    let count = |s: &HahnSeries, d: &Exponent| s.support_count_below(d, budget);
    let show = |c: SupportCount| match c {
        SupportCount::Finite(n) => format!("{n} terms"),
        SupportCount::ExceedsBudget => format!("more than {budget} terms"),
    };
    let mut out = Vec::new();

    let c = count(&theta_p, &zero)?;
    out.push(ConditionCheck::new(
        "x^p-c: trn_0(theta^p) infinite",
        c == SupportCount::ExceedsBudget,
        show(c),
    ));

    let c = count(&theta.shift(q1_neg), q1_neg)?;
    out.push(ConditionCheck::new(
        format!("q1={q1_neg}: trn_q1(t^q1 theta) infinite"),
        c == SupportCount::ExceedsBudget,
        show(c),
    ));
    let c = count(&theta_p, q1_neg)?;
    out.push(ConditionCheck::new(
        format!("q1={q1_neg}: trn_q1(theta^p) finite"),
        matches!(c, SupportCount::Finite(_)),
        show(c),
    ));

    let tq = HahnSeries::t_pow(&ctx, &field, q1_pos.clone());
    let c = count(&g.frobenius_minus(&tq), &zero)?;
    out.push(ConditionCheck::new(
        format!("q1={q1_pos}: trn_0(theta^p - t^q1 theta) infinite"),
        c == SupportCount::ExceedsBudget,
        show(c),
    ));

    let c = count(&g.frobenius_minus(&HahnSeries::constant(&ctx, c1.clone())), &zero)?;
    out.push(ConditionCheck::new(
        format!("c1={c1}: trn_0(theta^p - c1 theta) infinite"),
        c == SupportCount::ExceedsBudget,
        show(c),
    ));

    let c = count(&g.artin_schreier_image(), &zero)?;
    out.push(ConditionCheck::new(
        "c1=1: trn_0(AS(theta)) finite",
        matches!(c, SupportCount::Finite(_)),
        show(c),
    ));
    Ok(out)
}

/// `{delta_i^{t_i}}` with `t_i = n/m_i - n/m_{i+1}`.
pub fn tame_multiset_predict<T: Clone>(n: u64, degrees: &[u64], deltas: &[T]) -> Result<Vec<(T, u64)>, ExtError> {
    if degrees.first() != Some(&1) || degrees.last() != Some(&n) {
        return Err(ExtError::DegreeChain(format!("must run from 1 to {n}")));
    }
    if deltas.len() + 1 != degrees.len() {
        return Err(ExtError::DegreeChain("need one delta per step".into()));
    }
    for w in degrees.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(ExtError::DegreeChain(format!("{} does not properly divide {}", w[0], w[1])));
        }
    }
    Ok(degrees
        .windows(2)
        .zip(deltas)
        .map(|(w, d)| (d.clone(), n / w[0] - n / w[1]))
        .collect())
}

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut b = 1u64;
        for i in 0..ki {
            b = b * (ni - i) / (i + 1);
        }
        acc = acc * (b % p) % p;
        n /= p;
        k /= p;
    }
    acc
}

/// A polynomial `sum c_i x^i` with series coefficients.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    pub coeffs: Vec<HahnSeries>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<HahnSeries>) -> Self {
        SeriesPoly { coeffs }
    }

    /// Lazy Horner evaluation.
    pub fn eval(&self, x: &HahnSeries) -> HahnSeries {
        let mut acc = HahnSeries::zero(x.context(), x.field());
        for c in self.coeffs.iter().rev() {
            acc = acc.product(x).add(c);
        }
        acc
    }

    /// Evaluation of a polynomial with finite coefficients at a finite point.
    pub fn eval_finite(&self, x: &HahnSeries) -> Result<HahnSeries, ExtError> {
        let mut acc = HahnSeries::zero(x.context(), x.field());
        for c in self.coeffs.iter().rev() {
            acc = acc.product(x).add(c).collect_all(DEFAULT_TERM_BUDGET)?;
        }
        Ok(acc)
    }
}

/// The Hasse-Schmidt derivative: `d_s x^n = binom(n, s) x^{n-s}` in
/// characteristic `p`.
pub fn hasse_schmidt(f: &SeriesPoly, s: usize) -> SeriesPoly {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .skip(s)
        .map(|(n, c)| {
            let b = binom_mod_p(n as u64, s as u64, c.p() as u64);
            c.scale(&FFElem::from_int(c.field(), b as i64))
        })
        .collect();
    SeriesPoly { coeffs }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coefficients::FieldSpec;
    use crate::exponents::{rat, BasisContext, RFamily};

    fn q(ctx: &Arc<BasisContext>, n: i64, d: i64) -> Exponent {
        Exponent::rational(ctx, rat(n, d))
    }

    fn mono(ctx: &Arc<BasisContext>, f: &Arc<FieldSpec>, e: &str) -> HahnSeries {
        HahnSeries::t_pow(ctx, f, ctx.parse(e).unwrap())
    }

    fn constant(ctx: &Arc<BasisContext>, c: FFElem) -> HahnSeries {
        HahnSeries::constant(ctx, c)
    }

    #[test]
    fn as_solve_examples() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let a1 = ASElement::solve("a_1", &mono(&ctx, &f, "-1")).unwrap();
        let first: Vec<_> = a1.solution.first_terms(4).unwrap().into_iter().map(|t| t.exp).collect();
        let want: Vec<_> = (1..=4).map(|k| q(&ctx, -1, 3i64.pow(k))).collect();
        assert_eq!(first, want);
        let bounds = [q(&ctx, -1, 9), q(&ctx, -1, 81), q(&ctx, -1, 3i64.pow(7))];
        assert!(a1.check_windows(&bounds, 1000).unwrap());

        let a2 = ASElement::solve("a_2", &a1.solution.neg()).unwrap();
        assert!(a2.check_windows(&bounds, 1000).unwrap());

        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")).unwrap();
        let first: Vec<_> = alpha.solution.first_terms(3).unwrap().into_iter().map(|t| t.exp).collect();
        assert_eq!(first, vec![ctx.parse("-pi/3").unwrap(), ctx.parse("-pi/9").unwrap(), ctx.parse("-pi/27").unwrap()]);
    }

    #[test]
    fn conjugates_and_s_theta() {
        let ctx = BasisContext::with_pi();
        let f9 = FieldSpec::default_for(3, 2).unwrap();
        let u = FFElem::generator(&f9);
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f9, "-pi")).unwrap();
        let beta = ASElement::solve("beta", &mono(&ctx, &f9, "-4")).unwrap();
        let one = constant(&ctx, FFElem::one(&f9));
        let g = GeneratorCombo::new(vec![(one.clone(), alpha.clone()), (constant(&ctx, u.clone()), beta.clone())], true);
        assert_eq!(conjugate_set(&g).unwrap().len(), 9);
        let s = s_theta(&g).unwrap();
        assert_eq!(s.set, vec![q(&ctx, 0, 1)]);
        assert_eq!(s.multiset, vec![(q(&ctx, 0, 1), 8)]);
        assert_eq!(krasner_omega(&g).unwrap(), q(&ctx, 0, 1));

        // theta = alpha + t beta
        let t = mono(&ctx, &f9, "1");
        let g2 = GeneratorCombo::new(vec![(one.clone(), alpha.clone()), (t, beta)], true);
        let s = s_theta(&g2).unwrap();
        assert_eq!(s.set, vec![q(&ctx, 0, 1), q(&ctx, 1, 1)]);
        assert_eq!(s.multiset, vec![(q(&ctx, 0, 1), 6), (q(&ctx, 1, 1), 2)]);
        assert_eq!(krasner_omega(&g2).unwrap(), q(&ctx, 1, 1));

        let single = GeneratorCombo::new(vec![(one, alpha)], true);
        let s = s_theta(&single).unwrap();
        assert_eq!(s.multiset, vec![(q(&ctx, 0, 1), 2)]);
        let undeclared = GeneratorCombo { disjoint: false, ..single };
        assert_eq!(conjugate_set(&undeclared).unwrap_err(), ExtError::NotDisjoint);
    }

    #[test]
    fn conjugates_form_a_coset() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")).unwrap();
        let beta = ASElement::solve("beta", &mono(&ctx, &f, "-4")).unwrap();
        let g = GeneratorCombo::new(vec![(constant(&ctx, FFElem::one(&f)), alpha), (mono(&ctx, &f, "1"), beta)], true);
        let conj = conjugate_set(&g).unwrap();
        let bound = q(&ctx, 2, 1);
        for x in &conj {
            for y in &conj {
                // difference lies in F_p + t F_p: two coefficients in {0,1,2}
                let d = x.series.sub(&y.series).truncate(&q(&ctx, -1, 729), 1000).unwrap();
                assert!(d.is_known_zero());
                let diff: Vec<u32> = x.tuple.iter().zip(&y.tuple).map(|(a, b)| (a + 3 - b) % 3).collect();
                let want = g.shift_for(&diff).collect_all(10).unwrap();
                let got = g.shift_for(&x.tuple).sub(&g.shift_for(&y.tuple)).collect_all(10).unwrap();
                assert!(got.agrees_below(&want, &bound, 10).unwrap());
            }
        }
    }

    #[test]
    fn ge_checks() {
        let ctx = BasisContext::with_pi();
        let f9 = FieldSpec::default_for(3, 2).unwrap();
        let c = |x: FFElem| constant(&ctx, x);
        assert!(ge_witness_check(3, &[c(FFElem::one(&f9))]).unwrap());
        assert!(ge_witness_check(3, &[c(FFElem::one(&f9)), c(FFElem::generator(&f9))]).unwrap());
        assert!(!ge_witness_check(3, &[c(FFElem::one(&f9)), c(FFElem::from_int(&f9, 2))]).unwrap());
    }

    #[test]
    fn distances_and_cuts() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")).unwrap();
        let apps: Vec<_> = (1..=5)
            .map(|l| {
                let parts = (1..=l).map(|i| mono(&ctx, &f, &format!("-pi/{}", 3i64.pow(i)))).collect();
                (HahnSeries::sum(&ctx, &f, parts), 1)
            })
            .collect();
        let lattices = (1..=5)
            .map(|l| ValueLattice::new(vec![q(&ctx, 1, 3i64.pow(l)), ctx.parse(&format!("pi/{}", 3i64.pow(l))).unwrap()]))
            .collect();
        let cfg = DistanceConfig {
            limit_hint: Some(q(&ctx, 0, 1)),
            depth: 4,
            lattices: Some(lattices),
            ..Default::default()
        };
        let ev = distance_witnesses_eval(&alpha.solution, apps, &cfg).unwrap();
        let want: Vec<_> = (1..=5).map(|l| ctx.parse(&format!("-pi/{}", 3i64.pow(l + 1))).unwrap()).collect();
        assert_eq!(ev.witnesses.values, want);
        assert_eq!(ev.cut, Cut::Principal(q(&ctx, 0, 1), Side::Minus));
        assert!(ev.supports_limit());
        assert_eq!(classify_dependence(&ev.cut).unwrap(), Dependence::Independent);
    }

    #[test]
    fn single_level_candidate_is_depth_one() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let theta = HahnSeries::from_terms(&ctx, &f, vec![(q(&ctx, -1, 2), FFElem::one(&f)), (q(&ctx, 0, 1), FFElem::one(&f))]).unwrap();
        let a = mono(&ctx, &f, "-1/2");
        let cand = OkutsuCandidate {
            levels: vec![
                OkutsuLevel { elements: vec![a], degree: 1, attained: true },
                OkutsuLevel { elements: vec![theta.clone()], degree: 3, attained: true },
            ],
        };
        let challenge = vec![(mono(&ctx, &f, "-1"), 1), (HahnSeries::zero(&ctx, &f), 1)];
        let rep = okutsu_verify(&cand, &theta, &challenge).unwrap();
        assert_eq!(rep.depth, 1);
        assert_eq!(rep.augmentations, vec![Augmentation::Ordinary]);
        assert!(rep.all_passed(), "{:?}", rep.checks);
        // a challenge closer than A_0 violates OS0
        let close = vec![(theta.sub(&mono(&ctx, &f, "1")), 1)];
        let rep = okutsu_verify(&cand, &theta, &close).unwrap();
        assert!(!rep.all_passed());
    }

    #[test]
    fn bad_degree_chain_rejected() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let a = mono(&ctx, &f, "-1");
        let cand = OkutsuCandidate {
            levels: vec![
                OkutsuLevel { elements: vec![a.clone()], degree: 3, attained: true },
                OkutsuLevel { elements: vec![a.clone()], degree: 3, attained: true },
            ],
        };
        assert!(matches!(okutsu_verify(&cand, &a, &[]), Err(ExtError::DegreeChain(_))));
    }

    #[test]
    fn monster_kaplansky_obstructions() {
        let ctx = BasisContext::builder().pi().r_family(3, 5, RFamily::Geometric).build();
        let f = FieldSpec::prime_field(3).unwrap();
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")).unwrap();
        let beta = ASElement::solve("beta", &mono(&ctx, &f, "-4")).unwrap();
        let g = GeneratorCombo::new(vec![(constant(&ctx, FFElem::one(&f)), alpha), (mono(&ctx, &f, "1"), beta)], true);
        let checks = kaplansky_obstructions(&g, &q(&ctx, -1, 10), &q(&ctx, 1, 10), &FFElem::from_int(&f, 2), 300).unwrap();
        assert_eq!(checks.len(), 6);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        // AS(theta) below 0 is t^{-pi} + t^{-1} - t^{-1/3}
        let img = g.artin_schreier_image().terms_below(&q(&ctx, 0, 1), 100).unwrap();
        let exps: Vec<_> = img.iter().map(|t| t.exp.clone()).collect();
        assert_eq!(exps, vec![ctx.parse("-pi").unwrap(), q(&ctx, -1, 1), q(&ctx, -1, 3)]);
        assert_eq!(img[2].coeff, FFElem::from_int(&f, -1));
    }

    #[test]
    fn tame_predictions() {
        assert_eq!(tame_multiset_predict(4, &[1, 4], &["g"]).unwrap(), vec![("g", 3)]);
        let m = tame_multiset_predict(6, &[1, 2, 6], &["a", "b"]).unwrap();
        assert_eq!(m, vec![("a", 3), ("b", 2)]);
        let p = 5u64;
        let m = tame_multiset_predict(p * p, &[1, p, p * p], &[0, 1]).unwrap();
        assert_eq!(m, vec![(0, p * p - p), (1, p - 1)]);
        assert!(tame_multiset_predict(6, &[1, 4, 6], &[0, 1]).is_err());
    }

    #[test]
    fn hasse_schmidt_examples() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let one = constant(&ctx, FFElem::one(&f));
        let zero = HahnSeries::zero(&ctx, &f);
        let x3 = SeriesPoly::new(vec![zero.clone(), zero.clone(), zero.clone(), one.clone()]);
        // d_1(x^3) = 3x^2 = 0, d_2(x^3) = 3x = 0, d_3(x^3) = 1
        for s in 1..3 {
            assert!(hasse_schmidt(&x3, s).coeffs.iter().all(|c| c.val().unwrap().is_none()));
        }
        let d3 = hasse_schmidt(&x3, 3);
        assert_eq!(d3.coeffs.len(), 1);
        assert_eq!(d3.coeffs[0].val().unwrap(), Some(q(&ctx, 0, 1)));
        assert_eq!(binom_mod_p(9, 3, 3), 0);
        assert_eq!(binom_mod_p(10, 1, 3), 1);
    }

    #[test]
    fn taylor_identity_on_small_polynomial() {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::prime_field(3).unwrap();
        let c = |n: i64, e: &str| HahnSeries::monomial(&ctx, FFElem::from_int(&f, n), ctx.parse(e).unwrap());
        let poly = SeriesPoly::new(vec![c(1, "pi"), c(2, "-1"), c(1, "0"), c(1, "1/3"), c(2, "0"), c(1, "-pi")]);
        let x = c(1, "-1/3").add(&c(2, "pi"));
        let h = c(1, "1/2");
        let lhs = poly.eval_finite(&x.add(&h)).unwrap().sub(&poly.eval_finite(&x).unwrap());
        let mut parts = Vec::new();
        let mut hs = h.clone();
        for s in 1..=5 {
            let d = hasse_schmidt(&poly, s).eval_finite(&x).unwrap();
            parts.push(d.product(&hs));
            hs = hs.product(&h).collect_all(100).unwrap();
        }
        let rhs = HahnSeries::sum(&ctx, &f, parts);
        assert!(lhs.sub(&rhs).collect_all(1000).unwrap().is_known_zero());
    }
}
