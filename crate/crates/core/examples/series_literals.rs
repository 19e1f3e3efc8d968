//! Parsing series literals, alone and against a scenario's named
//! constructions.

use asdefect::scenarios::{parse_series_literal, scenario_env, Config};
use asdefect::series::format_terms;

fn main() {
    let cfg = Config::default();
    let plain = scenario_env(None, &cfg).unwrap();
    for text in ["t^(-1)", "t^((-1/3)*pi) + 2*t^(-1/3)", "(u + 1)*t^(1/2)*t", "t^(-1) +"] {
        match parse_series_literal(text, &plain) {
            Ok(s) => println!("{text:>28} -> {}", format_terms(&s.first_terms(5).unwrap())),
            Err(e) => println!("{text:>28} -> {e}"),
        }
    }

    let env = scenario_env(Some("example-5-1-1"), &cfg).unwrap();
    println!("names: {}", env.names().join(", "));
    let s = parse_series_literal("beta - t^(-1)*c(2)", &env).unwrap();
    println!("v(beta - t^-1 c_2) = {}", s.val().unwrap().unwrap());
}
