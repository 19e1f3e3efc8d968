//! Lazy Hahn series: an Artin-Schreier root with accumulating support,
//! products, valuations and truncations.

use asdefect::coefficients::FieldSpec;
use asdefect::exponents::{BasisContext, Exponent};
use asdefect::series::{format_terms, HahnSeries};

fn main() {
    let ctx = BasisContext::with_pi();
    let f = FieldSpec::prime_field(3).unwrap();
    let rhs = HahnSeries::t_pow(&ctx, &f, ctx.parse("-pi").unwrap());
    // x^p - x = t^-pi has the root sum_k t^(-pi/p^k)
    let alpha = HahnSeries::as_root(&rhs).unwrap();
    println!("alpha = {} + ...", format_terms(&alpha.first_terms(4).unwrap()));
    let check = alpha.pth_power().sub(&alpha).sub(&rhs);
    let bound = ctx.parse("-pi/729").unwrap();
    println!("AS(alpha) = t^-pi below {bound}: {}", check.agrees_below(&HahnSeries::zero(&ctx, &f), &bound, 1000).unwrap());

    let a1 = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, Exponent::int(&ctx, -1))).unwrap();
    let prod = alpha.product(&a1);
    println!("v(alpha * a_1) = {}", prod.val().unwrap().unwrap());
    let head = prod.truncate(&ctx.parse("-pi/3 - 1/9").unwrap(), 1000).unwrap();
    println!("trn(alpha * a_1) = {head}");
}
