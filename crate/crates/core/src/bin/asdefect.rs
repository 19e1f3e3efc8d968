use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use asdefect::scenarios::{emit_report, parse_series_literal, run_scenario, scenario_env, scenarios, Config, Format};
use asdefect::series::format_terms;

#[derive(Parser)]
#[command(name = "asdefect", version, about = "Reproduce Artin-Schreier defect scenarios over Hahn series fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and report one line per check.
    Verify {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 3)]
        prime: u32,
        /// Approximation levels sampled.
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Term budget per materialization.
        #[arg(long, default_value_t = 256)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// List the available scenarios.
    ListScenarios,
    /// Parse a series literal and print its leading terms.
    Parse {
        #[arg(long)]
        expr: String,
        /// Resolve names against this scenario's constructions.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 3)]
        prime: u32,
        /// Number of leading terms shown.
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { scenario, prime, levels, budget, format } => {
            let cfg = Config { prime, levels, budget };
            match run_scenario(&scenario, &cfg) {
                Ok(report) => {
                    let format = match format {
                        OutFormat::Json => Format::Json,
                        OutFormat::Text => Format::Text,
                    };
                    print!("{}", emit_report(&report, format));
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(if e.is_budget() { 2 } else { 1 })
                }
            }
        }
        Command::ListScenarios => {
            for s in scenarios() {
                println!("{:<15} p: {:<36} {}", s.id, s.primes, s.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Parse { expr, scenario, prime, terms } => {
            let cfg = Config { prime, ..Config::default() };
            let parsed = scenario_env(scenario.as_deref(), &cfg)
                .map_err(|e| e.to_string())
                .and_then(|env| parse_series_literal(&expr, &env).map_err(|e| e.to_string()))
                .and_then(|s| s.first_terms(terms).map_err(|e| e.to_string()));
            match parsed {
                Ok(ts) => {
                    println!("{}", format_terms(&ts));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_arguments() {
        let cli = Cli::try_parse_from(["asdefect", "verify", "--scenario", "asd-6-3", "--prime", "5", "--levels", "4", "--budget", "100", "--format", "json"]).unwrap();
        let Command::Verify { scenario, prime, levels, budget, format } = cli.command else { panic!("not verify") };
        assert_eq!((scenario.as_str(), prime, levels, budget), ("asd-6-3", 5, 4, 100));
        assert!(matches!(format, OutFormat::Json));
    }

    #[test]
    fn defaults_and_rejections() {
        let cli = Cli::try_parse_from(["asdefect", "verify", "--scenario", "monster-5-2"]).unwrap();
        let Command::Verify { prime, levels, budget, .. } = cli.command else { panic!("not verify") };
        assert_eq!((prime, levels, budget), (3, 5, 256));
        assert!(Cli::try_parse_from(["asdefect", "verify"]).is_err());
        assert!(Cli::try_parse_from(["asdefect", "verify", "--scenario", "x", "--format", "yaml"]).is_err());
        assert!(Cli::try_parse_from(["asdefect", "list-scenarios"]).is_ok());
        assert!(Cli::try_parse_from(["asdefect", "parse", "--expr", "t^(-1)"]).is_ok());
    }
}
