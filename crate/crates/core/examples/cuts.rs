//! Cuts of the value group from witness values, and their comparison.

use asdefect::cuts::{cut_cmp, cut_from_witnesses, Cut, Side};
use asdefect::exponents::{rat, BasisContext, Exponent};

fn main() {
    let ctx = BasisContext::with_pi();
    let p = 3;
    // v(beta - t^-1 c_l) = -1 - 1/p^(l+1)
    let vals: Vec<Exponent> = (1..=5).map(|l| Exponent::rational(&ctx, rat(-1, 1) - rat(1, 3i64.pow(l + 1)))).collect();
    let minus_one = Exponent::int(&ctx, -1);
    let d1 = cut_from_witnesses(&vals, Some(&minus_one), false, 4, p).unwrap();
    println!("D_1 from {} values: {d1}", vals.len());

    // the same values do not support a limit at 0
    let zero = Exponent::zero(&ctx);
    let other = cut_from_witnesses(&vals, Some(&zero), false, 4, p).unwrap();
    println!("with hint 0 the cut stays sampled: {other}");

    let principal = Cut::Principal(zero, Side::Minus);
    println!("{d1} vs {principal}: {:?}", cut_cmp(&d1, &principal).unwrap());
}
