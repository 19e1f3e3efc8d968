//! The Heisenberg group of order p^3 acting on AS generators, and the
//! ramification ideal of the subgroup generated by sigma.

use asdefect::coefficients::FieldSpec;
use asdefect::exponents::{BasisContext, Exponent};
use asdefect::ramification::{heisenberg_relations, i_sigma_witnesses, subgroup_enumerate, ActionTable, GaloisSetting, GroupModel, SymbolSet};
use asdefect::series::HahnSeries;

fn main() {
    let p = 3;
    let g = GroupModel::Heisenberg { p };
    let sigma = g.generator("sigma").unwrap();
    let tau = g.generator("tau").unwrap();
    let comm = g.word(&[("sigma", 1), ("tau", 1), ("sigma", -1), ("tau", -1)]).unwrap();
    println!("order {}, [sigma, tau] = {}", g.order(), g.format(&comm));
    for (name, ok) in heisenberg_relations(&g).unwrap() {
        println!("  {name}: {ok}");
    }
    println!("{} subgroups", subgroup_enumerate(&g).unwrap().len());

    // sigma moves alpha by 1; the values v((sigma b - b)/b) for
    // b = alpha - (first n terms of alpha) decrease to 0
    let ctx = BasisContext::rational();
    let f = FieldSpec::prime_field(p).unwrap();
    let alpha = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, Exponent::int(&ctx, -1))).unwrap();
    let sy = SymbolSet::new(&ctx, &f, &["alpha"]);
    let mut table = ActionTable::new(&g, &sy);
    table.set("sigma", "alpha", sy.var("alpha").unwrap().add(&sy.int(1)).unwrap()).unwrap();
    let setting = GaloisSetting { group: g.clone(), table, values: vec![alpha.clone()] };
    let tests: Vec<_> = (1..=4)
        .map(|n| {
            let head = HahnSeries::from_terms(&ctx, &f, alpha.first_terms(n).unwrap().into_iter().map(|t| (t.exp, t.coeff)).collect()).unwrap();
            sy.var("alpha").unwrap().sub(&sy.constant(head)).unwrap()
        })
        .collect();
    let vals = i_sigma_witnesses(&setting, &sigma, &tests).unwrap();
    let shown: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    println!("sigma witnesses: {}", shown.join(", "));
    println!("tau fixes alpha: {}", setting.apply(&tau, &sy.var("alpha").unwrap()).unwrap());
}
