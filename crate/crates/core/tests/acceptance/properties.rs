//! Randomized laws, 1000 cases per suite from a fixed seed.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use asdefect::coefficients::{FFElem, FieldSpec};
use asdefect::exponents::{rat, BasisContext, Exponent, RFamily, ValueLattice};
use asdefect::extensions::{hasse_schmidt, SeriesPoly};
use asdefect::series::HahnSeries;

const BUDGET: usize = 2000;

fn config() -> Config {
    Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(0x5eed_a5de),
        failure_persistence: None,
        max_global_rejects: 20_000,
        ..Config::default()
    }
}

/// Basis `1, pi, 1/r2` with `r2 = 9 + 1/pi`.
fn ctx() -> &'static Arc<BasisContext> {
    static CTX: OnceLock<Arc<BasisContext>> = OnceLock::new();
    CTX.get_or_init(|| BasisContext::builder().pi().r_family(3, 2, RFamily::Geometric).build())
}

fn f9() -> &'static Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| FieldSpec::default_for(3, 2).unwrap())
}

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

fn exp3(c: [(i64, i64); 3]) -> Exponent {
    Exponent::from_coords(ctx(), c.iter().enumerate().map(|(i, &(n, d))| (i, q(n, d))).collect())
}

fn small_rat() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, prop::sample::select(vec![1i64, 2, 3, 9]))
}

fn exponent() -> impl Strategy<Value = Exponent> {
    (small_rat(), (-3i64..=3, prop::sample::select(vec![1i64, 3])), (-2i64..=2, Just(1i64))).prop_map(|(a, b, c)| exp3([a, b, c]))
}

/// Exponents in `Q + Q pi`, where the series arithmetic works.
fn series_exponent() -> impl Strategy<Value = Exponent> {
    (small_rat(), (-3i64..=3, prop::sample::select(vec![1i64, 3]))).prop_map(|(a, b)| exp3([a, b, (0, 1)]))
}

fn coeff() -> impl Strategy<Value = FFElem> {
    (0u32..3, 0u32..3).prop_map(|(a, b)| FFElem::from_coeffs(f9(), &[a, b]))
}

fn series() -> impl Strategy<Value = HahnSeries> {
    prop::collection::vec((series_exponent(), coeff()), 0..6).prop_map(|terms| {
        let parts = terms.into_iter().map(|(e, c)| HahnSeries::monomial(ctx(), c, e)).collect();
        HahnSeries::sum(ctx(), f9(), parts).collect_all(BUDGET).unwrap()
    })
}

/// Nonempty support strictly below 0.
fn polar_series() -> impl Strategy<Value = HahnSeries> {
    let e = ((1i64..=6, prop::sample::select(vec![1i64, 2, 3, 9])), (0i64..=3, prop::sample::select(vec![1i64, 3])))
        .prop_map(|((a, da), (b, db))| exp3([(-a, da), (-b, db), (0, 1)]));
    prop::collection::vec((e, coeff()), 1..5)
        .prop_map(|terms| {
            let parts = terms.into_iter().map(|(e, c)| HahnSeries::monomial(ctx(), c, e)).collect();
            HahnSeries::sum(ctx(), f9(), parts).collect_all(BUDGET).unwrap()
        })
        .prop_filter("nonzero", |s| s.val().unwrap().is_some())
}

fn nonzero_series() -> impl Strategy<Value = HahnSeries> {
    series().prop_filter("nonzero", |s| s.val().unwrap().is_some())
}

fn is_zero(s: &HahnSeries) -> bool {
    s.collect_all(BUDGET).unwrap().val().unwrap().is_none()
}

/// Real value of an exponent from coordinates, computed in f64.
fn real(e: &Exponent) -> f64 {
    let pi = std::f64::consts::PI;
    let basis = [1.0, pi, 1.0 / (9.0 + 1.0 / pi)];
    (0..3)
        .map(|i| {
            let c = e.coord(i);
            let (n, d) = (c.numer().to_string().parse::<f64>().unwrap(), c.denom().to_string().parse::<f64>().unwrap());
            n / d * basis[i]
        })
        .sum()
}

pub fn ultrametric_law() {
    proptest!(config(), |(a in nonzero_series(), b in nonzero_series())| {
        let (va, vb) = (a.val().unwrap().unwrap(), b.val().unwrap().unwrap());
        let m = va.try_min(&vb).unwrap();
        match a.add(&b).val().unwrap() {
            None => prop_assert_eq!(&va, &vb),
            Some(v) => {
                prop_assert!(m.try_le(&v).unwrap());
                if va != vb {
                    prop_assert_eq!(v, m);
                }
            }
        }
    });
}

pub fn valuation_is_multiplicative() {
    proptest!(config(), |(a in nonzero_series(), b in nonzero_series())| {
        let (va, vb) = (a.val().unwrap().unwrap(), b.val().unwrap().unwrap());
        let v = a.product(&b).val().unwrap().expect("F_9((t^G)) is a domain");
        prop_assert_eq!(v, &va + &vb);
    });
}

pub fn artin_schreier_additivity() {
    let bound = Exponent::rational(ctx(), q(-1, 81));
    proptest!(config(), |(a in series(), b in series())| {
        let as_map = |x: &HahnSeries| x.pth_power().sub(x);
        prop_assert!(is_zero(&as_map(&a.add(&b)).sub(&as_map(&a)).sub(&as_map(&b))));
    });
    // roots of AS(x) = c with support below 0 add up as well
    proptest!(config(), |(ca in polar_series(), cb in polar_series())| {
        let sum = ca.add(&cb).collect_all(BUDGET).unwrap();
        prop_assume!(sum.val().unwrap().is_some());
        let ra = HahnSeries::as_root(&ca).unwrap();
        let rb = HahnSeries::as_root(&cb).unwrap();
        let rs = HahnSeries::as_root(&sum).unwrap();
        prop_assert!(rs.agrees_below(&ra.add(&rb), &bound, BUDGET).unwrap());
    });
}

pub fn truncation_is_idempotent() {
    proptest!(config(), |(s in series(), d in series_exponent())| {
        let once = s.truncate(&d, BUDGET).unwrap();
        let twice = once.truncate(&d, BUDGET).unwrap();
        prop_assert!(is_zero(&once.sub(&twice)));
        prop_assert!(once.agrees_below(&s, &d, BUDGET).unwrap());
        for t in once.first_terms(10).unwrap() {
            prop_assert!(t.exp.try_lt(&d).unwrap());
        }
    });
}

pub fn frobenius_inversion() {
    let fields: Vec<Arc<FieldSpec>> = [(2, 1), (2, 3), (3, 2), (3, 3), (5, 2), (7, 1)].iter().map(|&(p, m)| FieldSpec::default_for(p, m).unwrap()).collect();
    proptest!(config(), |(i in 0..6usize, raw in prop::collection::vec(0u32..7, 3))| {
        let x = FFElem::from_coeffs(&fields[i], &raw);
        prop_assert_eq!(x.frobenius().frobenius_inverse(), x.clone());
        prop_assert_eq!(x.frobenius_inverse().frobenius(), x.clone());
        prop_assert_eq!(x.frobenius(), x.pow(fields[i].p() as u64));
    });
    proptest!(config(), |(s in series())| {
        prop_assert!(is_zero(&s.pth_power().pth_root().sub(&s)));
        prop_assert!(is_zero(&s.pth_root().pth_power().sub(&s)));
    });
}

pub fn exponent_order_laws() {
    proptest!(config(), |(a in exponent(), b in exponent(), c in exponent())| {
        let ab = a.try_cmp(&b).unwrap();
        prop_assert_eq!(ab, b.try_cmp(&a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab == Ordering::Less && b.try_cmp(&c).unwrap() == Ordering::Less {
            prop_assert_eq!(a.try_cmp(&c).unwrap(), Ordering::Less);
        }
        prop_assert_eq!((&a + &c).try_cmp(&(&b + &c)).unwrap(), ab);
        let gap = real(&a) - real(&b);
        if gap.abs() > 1e-9 {
            prop_assert_eq!(ab, gap.partial_cmp(&0.0).unwrap());
        }
    });
}

/// Rank of a rational matrix by elimination.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut r = 0;
    for col in 0..3 {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[r][col];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn lattice_membership_matches_enumeration() {
    let gen = prop::collection::vec([small_rat(), small_rat(), small_rat()], 1..=3);
    let mults = prop::collection::vec(-3i64..=3, 3);
    proptest!(config(), |(g in gen, m in mults, d in 1i64..=3, zero_mask in prop::collection::vec(any::<bool>(), 3))| {
        // sparsify so that low-rank sublattices of a coordinate plane occur
        let coords: Vec<[(i64, i64); 3]> = g.iter().map(|c| {
            let mut c = *c;
            for k in 0..3 {
                if zero_mask[k] { c[k] = (0, 1); }
            }
            c
        }).collect();
        let rows: Vec<Vec<BigRational>> = coords.iter().map(|c| c.iter().map(|&(n, dd)| q(n, dd)).collect()).collect();
        prop_assume!(rank(rows) == coords.len());
        let gens: Vec<Exponent> = coords.iter().map(|c| exp3(*c)).collect();
        let k = gens.len();
        let mut x = Exponent::zero(ctx());
        for (gi, mi) in gens.iter().zip(&m) {
            x = &x + &gi.scale(&q(*mi, d));
        }
        // independent generators: membership is integrality of the unique
        // coefficients, which lie in [-3, 3]
        let mut found = false;
        let box_ = -3i64..=3;
        let mut idx = vec![*box_.start(); k];
        'outer: loop {
            let mut y = Exponent::zero(ctx());
            for (gi, n) in gens.iter().zip(&idx) {
                y = &y + &gi.scale(&q(*n, 1));
            }
            if y == x {
                found = true;
                break;
            }
            for slot in idx.iter_mut() {
                if *slot < *box_.end() {
                    *slot += 1;
                    continue 'outer;
                }
                *slot = *box_.start();
            }
            break;
        }
        let lattice = ValueLattice::new(gens);
        prop_assert_eq!(lattice.contains(&x).unwrap(), found);
        prop_assert_eq!(found, m[..k].iter().all(|mi| mi % d == 0));
    });
}

pub fn hasse_schmidt_taylor() {
    let rctx = BasisContext::rational();
    let fields: Vec<Arc<FieldSpec>> = [(2, 2), (3, 1), (3, 2), (5, 1)].iter().map(|&(p, m)| FieldSpec::default_for(p, m).unwrap()).collect();
    let term = (-4i64..=4, prop::sample::select(vec![1i64, 2, 3]), 0u32..5, 0u32..5);
    proptest!(config(), |(fi in 0..4usize, poly in prop::collection::vec(prop::collection::vec(term.clone(), 0..3), 1..=7), xs in prop::collection::vec(term.clone(), 1..3), ys in prop::collection::vec(term, 1..3))| {
        let f = &fields[fi];
        let build = |ts: &[(i64, i64, u32, u32)]| {
            let parts = ts.iter().map(|&(n, d, a, b)| HahnSeries::monomial(&rctx, FFElem::from_coeffs(f, &[a, b]), Exponent::rational(&rctx, q(n, d)))).collect();
            HahnSeries::sum(&rctx, f, parts).collect_all(BUDGET).unwrap()
        };
        let fpoly = SeriesPoly::new(poly.iter().map(|ts| build(ts)).collect());
        let (x, y) = (build(&xs), build(&ys));
        let lhs = fpoly.eval_finite(&x.add(&y).collect_all(BUDGET).unwrap()).unwrap();
        let mut rhs = HahnSeries::zero(&rctx, f);
        let mut y_pow = HahnSeries::constant(&rctx, FFElem::one(f));
        for s in 0..fpoly.coeffs.len() {
            let ds = hasse_schmidt(&fpoly, s).eval_finite(&x).unwrap();
            rhs = rhs.add(&ds.product(&y_pow)).collect_all(BUDGET).unwrap();
            y_pow = y_pow.product(&y).collect_all(BUDGET).unwrap();
        }
        prop_assert!(is_zero(&lhs.sub(&rhs)));
    });
}

pub const SUITES: [(&str, fn()); 8] = [
    ("ultrametric law", ultrametric_law),
    ("v(ab) = v(a) + v(b)", valuation_is_multiplicative),
    ("AS additivity", artin_schreier_additivity),
    ("truncation idempotence", truncation_is_idempotent),
    ("frobenius inversion", frobenius_inversion),
    ("exponent order laws", exponent_order_laws),
    ("lattice membership vs enumeration", lattice_membership_matches_enumeration),
    ("Hasse-Schmidt Taylor identity", hasse_schmidt_taylor),
];
