use std::sync::Arc;

use crate::coefficients::{FFElem, FieldSpec};
use crate::exponents::{BasisContext, Exponent};
use crate::series::HahnSeries;

use super::ScenarioError;

pub(super) fn exp(ctx: &Arc<BasisContext>, text: &str) -> Result<Exponent, ScenarioError> {
    Ok(ctx.parse(text)?)
}

pub(super) fn mono(ctx: &Arc<BasisContext>, f: &Arc<FieldSpec>, text: &str) -> Result<HahnSeries, ScenarioError> {
    Ok(HahnSeries::t_pow(ctx, f, ctx.parse(text)?))
}

pub(super) fn constant(ctx: &Arc<BasisContext>, c: FFElem) -> HahnSeries {
    HahnSeries::constant(ctx, c)
}

pub(super) fn show(vals: &[Exponent]) -> String {
    let parts: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// `p^k` as an exponent denominator.
pub(super) fn pk(p: u32, k: usize) -> String {
    num_bigint::BigInt::from(p).pow(k as u32).to_string()
}

/// The first `n` nonzero terms of `s`, as a finite series.
pub(super) fn head(s: &HahnSeries, n: usize) -> Result<HahnSeries, ScenarioError> {
    let terms = s.first_terms(n)?;
    Ok(HahnSeries::from_terms(s.context(), s.field(), terms.into_iter().map(|t| (t.exp, t.coeff)).collect())?)
}

pub(super) fn val(s: &HahnSeries, what: &str) -> Result<Exponent, ScenarioError> {
    s.val()?.ok_or_else(|| ScenarioError::Vanishes(what.into()))
}
