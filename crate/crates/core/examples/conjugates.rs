//! Conjugates of theta = alpha + u beta, the set S_theta and Krasner's
//! constant.

use asdefect::coefficients::{FFElem, FieldSpec};
use asdefect::exponents::BasisContext;
use asdefect::extensions::{conjugate_set, krasner_omega, s_theta, ASElement, GeneratorCombo};
use asdefect::series::HahnSeries;

fn main() {
    let ctx = BasisContext::with_pi();
    let f = FieldSpec::default_for(3, 2).unwrap();
    let t = |e: &str| HahnSeries::t_pow(&ctx, &f, ctx.parse(e).unwrap());
    let alpha = ASElement::solve("alpha", &t("-pi")).unwrap();
    let beta = ASElement::solve("beta", &t("-4")).unwrap();
    let one = HahnSeries::constant(&ctx, FFElem::one(&f));
    let u = HahnSeries::constant(&ctx, FFElem::generator(&f));
    let theta = GeneratorCombo::new(vec![(one, alpha), (u, beta)], true);

    let conj = conjugate_set(&theta).unwrap();
    println!("{} conjugates", conj.len());
    for c in conj.iter().take(4) {
        println!("  {:?}: leading {}", c.tuple, c.series.first_terms(1).unwrap()[0].exp);
    }
    let s = s_theta(&theta).unwrap();
    for (v, k) in &s.multiset {
        println!("v(theta' - theta) = {v} for {k} conjugates");
    }
    println!("omega(theta) = {}", krasner_omega(&theta).unwrap());
}
