//! Arithmetic in F_{p^m}: Frobenius, its inverse and Artin-Schreier roots.

use asdefect::coefficients::{FFElem, FieldSpec};

fn main() {
    let f = FieldSpec::default_for(3, 2).unwrap();
    println!("F_9 = F_3[u]/({})", f.modulus_string());
    let u = FFElem::generator(&f);
    let x = &u + &FFElem::one(&f);
    println!("x = {x}, x^3 = {}, frobenius^-1(x) = {}", x.frobenius(), x.frobenius_inverse());
    println!("x * x^-1 = {}", &x * &x.inv().unwrap());

    // roots of y^p - y = c exist in the field exactly when the trace of c vanishes
    for c in FFElem::all(&f).take(5) {
        let roots = c.as_roots_in_field().unwrap();
        let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        println!("y^3 - y = {c}: [{}]", shown.join(", "));
    }
}
