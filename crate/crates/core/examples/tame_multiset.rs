//! The predicted multiset of distances for a tower of tame degrees.

use asdefect::extensions::tame_multiset_predict;

fn main() {
    let degrees = [1, 2, 6, 24];
    let deltas = ["delta_0", "delta_1", "delta_2"];
    let m = tame_multiset_predict(24, &degrees, &deltas).unwrap();
    for (d, k) in &m {
        println!("{d} with multiplicity {k}");
    }
    println!("total {} = n - 1", m.iter().map(|(_, k)| k).sum::<u64>());
}
