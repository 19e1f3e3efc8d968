//! Exponents in the rational span of 1, pi and 1/r_i, their exact order,
//! and membership in finitely generated subgroups.

use asdefect::exponents::{BasisContext, RFamily, ValueLattice};

fn main() {
    let ctx = BasisContext::builder().pi().r_family(3, 4, RFamily::Geometric).build();
    let a = ctx.parse("-pi/9").unwrap();
    let b = ctx.parse("-1/3 - 1/r2").unwrap();
    println!("{a} vs {b}: {:?}", a.try_cmp(&b).unwrap());
    println!("{a} + {b} = {}", &a + &b);

    // G_2 = <pi/9, 1/3, 1/r2, 3/r3>
    let gens = ["pi/9", "1/3", "1/r2", "3/r3"].map(|s| ctx.parse(s).unwrap()).to_vec();
    let g2 = ValueLattice::new(gens);
    for w in ["-pi/27", "-1/r3", "-3/r3", "2*pi/9 - 1/r2"] {
        let x = ctx.parse(w).unwrap();
        println!("{w:>14} in G_2: {}", g2.contains(&x).unwrap());
    }
    let g1 = ValueLattice::new(["pi/3", "1/3", "3/r2"].map(|s| ctx.parse(s).unwrap()).to_vec());
    println!("[G_2 : G_1] = {} (G_1 misses the r3 direction)", g2.index_of(&g1).unwrap());
    let sub = ValueLattice::new(["pi/3", "1/3", "3/r2", "3/r3"].map(|s| ctx.parse(s).unwrap()).to_vec());
    println!("[G_2 : <pi/3, 1/3, 3/r2, 3/r3>] = {}", g2.index_of(&sub).unwrap());
}
