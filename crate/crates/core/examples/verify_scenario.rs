//! Running a scenario and printing its report; the first argument picks
//! the scenario, the second the prime.

use asdefect::scenarios::{emit_report, run_scenario, scenario_ids, Config, Format};

fn main() {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "example-5-1-1".into());
    let prime = args.next().map(|p| p.parse().expect("prime")).unwrap_or(3);
    if !scenario_ids().contains(&id.as_str()) {
        eprintln!("unknown scenario {id}; known: {}", scenario_ids().join(", "));
        std::process::exit(1);
    }
    let report = run_scenario(&id, &Config { prime, ..Config::default() }).unwrap();
    print!("{}", emit_report(&report, Format::Text));
    std::process::exit(report.exit_code());
}
