use std::collections::HashMap;

use super::*;
use crate::exponents::{rat, RFamily};

fn setup(p: u32) -> (Arc<BasisContext>, Arc<FieldSpec>) {
    let ctx = BasisContext::builder().pi().r_family(p, 6, RFamily::Geometric).build();
    (ctx, FieldSpec::prime_field(p).unwrap())
}

fn q(ctx: &Arc<BasisContext>, n: i64, d: i64) -> Exponent {
    Exponent::rational(ctx, rat(n, d))
}

fn one(f: &Arc<FieldSpec>) -> FFElem {
    FFElem::one(f)
}

fn int(f: &Arc<FieldSpec>, n: i64) -> FFElem {
    FFElem::from_int(f, n)
}

/// Dense convolution of two finite term lists, terms below `bound` only.
fn convolve(a: &[Term], b: &[Term], bound: &Exponent) -> Vec<Term> {
    let mut acc: HashMap<Exponent, FFElem> = HashMap::new();
    for x in a {
        for y in b {
            let e = &x.exp + &y.exp;
            let c = &x.coeff * &y.coeff;
            acc.entry(e)
                .and_modify(|v| *v = &*v + &c)
                .or_insert(c);
        }
    }
    let mut out: Vec<Term> = acc
        .into_iter()
        .filter(|(e, c)| !c.is_zero() && e.try_lt(bound).unwrap())
        .map(|(exp, coeff)| Term { exp, coeff })
        .collect();
    out.sort_by(|x, y| x.exp.try_cmp(&y.exp).unwrap());
    out
}

#[test]
fn monomial_and_empty() {
    let (ctx, f) = setup(3);
    let m = HahnSeries::monomial(&ctx, one(&f), q(&ctx, -1, 1));
    assert_eq!(m.val().unwrap(), Some(q(&ctx, -1, 1)));
    assert_eq!(m.to_string(), "t^((-1))");
    let z = HahnSeries::from_terms(&ctx, &f, vec![]).unwrap();
    assert_eq!(z.val().unwrap(), None);
    assert_eq!(z.to_string(), "0");
}

#[test]
fn from_terms_rejects_bad_input() {
    let (ctx, f) = setup(3);
    let unsorted = vec![(q(&ctx, 1, 1), one(&f)), (q(&ctx, 0, 1), one(&f))];
    assert!(matches!(HahnSeries::from_terms(&ctx, &f, unsorted), Err(SeriesError::NotIncreasing(_))));
    let zero = vec![(q(&ctx, 1, 1), int(&f, 3))];
    assert_eq!(HahnSeries::from_terms(&ctx, &f, zero).unwrap_err(), SeriesError::ZeroCoefficient);
}

#[test]
fn b_ell_of_the_r_basis_is_two_terms() {
    let (ctx, f) = setup(3);
    for l in 2..5 {
        let lo = ctx.parse(&format!("-1/r{l}")).unwrap();
        let hi = ctx.parse(&format!("-1/r{}", l + 1)).unwrap();
        let b = HahnSeries::from_terms(&ctx, &f, vec![(lo.clone(), one(&f)), (hi, int(&f, -1))]).unwrap();
        assert_eq!(b.finite_terms().unwrap().len(), 2);
        assert_eq!(b.val().unwrap(), Some(lo));
    }
}

#[test]
fn additive_inverse_cancels() {
    let (ctx, f) = setup(3);
    let a = HahnSeries::from_terms(&ctx, &f, vec![(ctx.parse("-pi").unwrap(), one(&f)), (q(&ctx, -1, 2), int(&f, 2))]).unwrap();
    assert_eq!(a.add(&a.neg()).val().unwrap(), None);
    // infinite series cancel below any bound short of the accumulation point
    let alpha = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, ctx.parse("-pi").unwrap())).unwrap();
    let bound = ctx.parse("-pi/729").unwrap();
    assert!(alpha.add(&alpha.neg()).terms_below(&bound, 100).unwrap().is_empty());
}

#[test]
fn cube_of_third_root() {
    let (ctx, f) = setup(3);
    let x = HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 3));
    let w = Window::new(q(&ctx, 1, 1));
    let cube = x.mul(&x, &w, 100).unwrap().mul(&x, &w, 100).unwrap();
    assert_eq!(cube.finite_terms().unwrap(), &[Term { exp: q(&ctx, -1, 1), coeff: one(&f) }]);
}

#[test]
fn lazy_product_matches_dense_convolution() {
    let (ctx, f) = setup(3);
    // d_l = t^{-1/p} - t^{-1/r_{l+1}}
    for l in 1..4 {
        let d = HahnSeries::from_terms(
            &ctx,
            &f,
            vec![(q(&ctx, -1, 3), one(&f)), (ctx.parse(&format!("-1/r{}", l + 1)).unwrap(), int(&f, -1))],
        )
        .unwrap();
        let bound = q(&ctx, 1, 1);
        let got = d.mul(&d, &Window::new(bound.clone()), 100).unwrap();
        let want = convolve(d.finite_terms().unwrap(), d.finite_terms().unwrap(), &bound);
        assert_eq!(got.finite_terms().unwrap(), &want[..]);
    }
    // infinite factors, bound chosen so both oracle truncations are finite
    let alpha = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, ctx.parse("-pi").unwrap())).unwrap();
    let a1 = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1))).unwrap();
    let bound = ctx.parse("-pi/3 - 1/81").unwrap();
    let va = alpha.val().unwrap().unwrap();
    let vb = a1.val().unwrap().unwrap();
    let ta = alpha.terms_below(&(&bound - &vb), 1000).unwrap();
    let tb = a1.terms_below(&(&bound - &va), 1000).unwrap();
    let want = convolve(&ta, &tb, &bound);
    let got = alpha.product(&a1).terms_below(&bound, 1000).unwrap();
    assert!(!want.is_empty());
    assert_eq!(got, want);
}

#[test]
fn valuations() {
    let (ctx, f) = setup(3);
    let a1 = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1))).unwrap();
    assert_eq!(a1.val().unwrap(), Some(q(&ctx, -1, 3)));
    let z = HahnSeries::zero(&ctx, &f);
    assert_eq!(z.val().unwrap(), None);
}

fn monster_theta(ctx: &Arc<BasisContext>, f: &Arc<FieldSpec>) -> HahnSeries {
    let alpha = HahnSeries::as_root(&HahnSeries::t_pow(ctx, f, ctx.parse("-pi").unwrap())).unwrap();
    let beta = HahnSeries::as_root(&HahnSeries::t_pow(ctx, f, q(ctx, -4, 1))).unwrap();
    alpha.add(&beta.shift(&q(ctx, 1, 1)))
}

#[test]
fn truncations_of_monster_theta() {
    let (ctx, f) = setup(3);
    let theta = monster_theta(&ctx, &f);
    let trn = theta.truncate(&q(&ctx, -3, 10), 100).unwrap();
    let exps: Vec<Exponent> = trn.finite_terms().unwrap().iter().map(|t| t.exp.clone()).collect();
    assert_eq!(exps, vec![ctx.parse("-pi/3").unwrap(), ctx.parse("-pi/9").unwrap(), q(&ctx, -1, 3)]);
    // below zero: t^{-1/3} and the first few pi terms in the window [-1, 0)
    let prefix = theta.terms_below(&ctx.parse("-pi/243").unwrap(), 100).unwrap();
    assert_eq!(prefix.len(), 5);
    assert_eq!(theta.support_count_below(&q(&ctx, 0, 1), 1000).unwrap(), SupportCount::ExceedsBudget);

    let m = HahnSeries::t_pow(&ctx, &f, q(&ctx, 2, 1));
    assert!(m.truncate(&q(&ctx, 1, 1), 10).unwrap().is_known_zero());
    assert!(m.truncate(&q(&ctx, 2, 1), 10).unwrap().is_known_zero());
}

#[test]
fn support_counts() {
    let (ctx, f) = setup(3);
    let d = HahnSeries::from_terms(&ctx, &f, vec![(q(&ctx, -1, 3), one(&f)), (ctx.parse("-1/r3").unwrap(), int(&f, -1))]).unwrap();
    assert_eq!(d.support_count_below(&q(&ctx, 0, 1), 1000).unwrap(), SupportCount::Finite(2));
    assert_eq!(d.support_count_below(&q(&ctx, 5, 1), 1000).unwrap(), SupportCount::Finite(2));
    assert_eq!(d.support_count_below(&q(&ctx, -1, 3), 1000).unwrap(), SupportCount::Finite(0));
}

#[test]
fn roots_and_powers() {
    let (ctx, f) = setup(3);
    let t_inv = HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1));
    assert_eq!(t_inv.pth_root().finite_terms().unwrap()[0].exp, q(&ctx, -1, 3));
    let a1 = HahnSeries::as_root(&t_inv).unwrap();
    let back = a1.pth_root().pth_power();
    assert!(back.agrees_below(&a1, &q(&ctx, -1, 243), 100).unwrap());
}

#[test]
fn roots_in_extension_field_use_inverse_frobenius() {
    let ctx = BasisContext::with_pi();
    let f9 = FieldSpec::default_for(3, 2).unwrap();
    let u = FFElem::generator(&f9);
    let s = HahnSeries::monomial(&ctx, u.clone(), q(&ctx, -1, 1));
    let r = s.pth_root();
    let t = &r.finite_terms().unwrap()[0];
    assert_eq!(t.coeff.frobenius(), u);
    assert_eq!(r.pth_power().finite_terms().unwrap(), s.finite_terms().unwrap());
}

#[test]
fn artin_schreier_examples() {
    let (ctx, f) = setup(3);
    let w = Window::new(q(&ctx, 1, 1));
    let c = HahnSeries::constant(&ctx, int(&f, 2));
    assert!(c.as_operator(&w, 10).unwrap().is_known_zero());

    // telescoping: AS(sum_{k=1}^n t^{-1/p^k}) = t^{-1} - t^{-1/p^n}
    for n in 1..6 {
        let terms = (1..=n).map(|k| (q(&ctx, -1, 3i64.pow(k)), one(&f))).collect();
        let s = HahnSeries::from_terms(&ctx, &f, terms).unwrap();
        let got = s.as_operator(&w, 100).unwrap();
        let want = HahnSeries::from_terms(&ctx, &f, vec![(q(&ctx, -1, 1), one(&f)), (q(&ctx, -1, 3i64.pow(n)), int(&f, -1))]).unwrap();
        assert_eq!(got.finite_terms().unwrap(), want.finite_terms().unwrap(), "n = {n}");
    }

    let a1 = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1))).unwrap();
    for k in [2, 4, 7] {
        let w = Window::new(q(&ctx, -1, 3i64.pow(k)));
        let got = a1.as_operator(&w, 1000).unwrap();
        assert_eq!(got.finite_terms().unwrap(), &[Term { exp: q(&ctx, -1, 1), coeff: one(&f) }]);
    }
}

fn binom_mod(n: u64, k: u64, p: u64) -> i64 {
    // Lucas
    let (mut n, mut k, mut acc) = (n, k, 1u64);
    while k > 0 || n > 0 {
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
    acc as i64
}

#[test]
fn iterated_as_roots_have_binomial_coefficients() {
    let (ctx, f) = setup(3);
    let mut a = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1))).unwrap();
    let kmax = 7u32;
    let bound = q(&ctx, -1, 3i64.pow(kmax) * 2);
    for l in 1..=4u64 {
        let mut want = Vec::new();
        for k in 1..=kmax as u64 {
            let c = binom_mod(k - 1, l - 1, 3) * if l % 2 == 1 { 1 } else { -1 };
            let c = int(&f, c);
            if !c.is_zero() {
                want.push(Term { exp: q(&ctx, -1, 3i64.pow(k as u32)), coeff: c });
            }
        }
        assert_eq!(a.terms_below(&bound, 1000).unwrap(), want, "a_{l}");
        let next = HahnSeries::as_root(&a.neg()).unwrap();
        // AS(a_{l+1}) = -a_l
        assert!(next.artin_schreier().agrees_below(&a.neg(), &bound, 1000).unwrap());
        a = next;
    }
}

#[test]
fn as_root_rejects_nonnegative_valuation() {
    let (ctx, f) = setup(3);
    let c = HahnSeries::constant(&ctx, one(&f));
    assert!(matches!(HahnSeries::as_root(&c), Err(SeriesError::OutOfRegime(_))));
    let mixed = HahnSeries::from_terms(&ctx, &f, vec![(q(&ctx, -1, 1), one(&f)), (q(&ctx, 1, 1), one(&f))]).unwrap();
    let x = HahnSeries::as_root(&mixed).unwrap();
    assert!(matches!(x.terms_below(&q(&ctx, 1, 1), 1000), Err(SeriesError::OutOfRegime(_))));
}

#[test]
fn cancelling_beyond_accumulation_point_is_a_budget_error() {
    let (ctx, f) = setup(3);
    let a1 = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, q(&ctx, -1, 1))).unwrap();
    let r = a1.artin_schreier().terms_below(&q(&ctx, 0, 1), 50);
    assert!(matches!(r, Err(SeriesError::TermBudget(_)) | Err(SeriesError::WorkBudget)), "{r:?}");
}

#[test]
fn pth_power_matches_repeated_product() {
    let (ctx, f) = setup(3);
    let alpha = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, ctx.parse("-pi").unwrap())).unwrap();
    let d = HahnSeries::from_terms(&ctx, &f, vec![(q(&ctx, -2, 1), int(&f, 2)), (q(&ctx, -1, 3), one(&f))]).unwrap();
    let x = alpha.add(&d);
    let bound = ctx.parse("-4 - pi/243").unwrap();
    let cube = x.product(&x).product(&x);
    assert!(cube.agrees_below(&x.pth_power(), &bound, 1000).unwrap());
}

#[test]
fn display_round_trip_form() {
    let ctx = BasisContext::with_pi();
    let f9 = FieldSpec::default_for(3, 2).unwrap();
    let s = HahnSeries::from_terms(
        &ctx,
        &f9,
        vec![(ctx.parse("-pi/3").unwrap(), FFElem::from_coeffs(&f9, &[1, 2])), (q(&ctx, 0, 1), FFElem::from_int(&f9, 2))],
    )
    .unwrap();
    assert_eq!(s.to_string(), "(2*u+1)*t^((-1/3)*pi) + 2");
}
