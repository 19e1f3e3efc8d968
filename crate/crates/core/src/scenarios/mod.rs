//! Reproducible scenarios. Each one fixes a ground field, names its series
//! constructions and runs a battery of checks against expected values.

mod asd;
mod example;
pub mod literal;
mod monster;
mod ramif;
mod util;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::coefficients::CoeffError;
use crate::cuts::CutError;
use crate::exponents::ExponentError;
use crate::extensions::ExtError;
use crate::ramification::RamError;
use crate::series::SeriesError;

pub use literal::{parse_series_literal, LiteralError, SeriesEnv};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub prime: u32,
    /// Number of approximation levels `l = 1..=levels` sampled.
    pub levels: usize,
    /// Term budget for every materialization.
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            prime: 3,
            levels: 5,
            budget: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// Label of the statement being reproduced.
    pub reference: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: String,
    pub prime: u32,
    pub levels: usize,
    pub budget: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// 0 if every check passes, 1 on any failure, 2 if the only
    /// shortfalls are inconclusive checks.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Inconclusive) > 0 {
            2
        } else {
            0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "scenario {} (p = {}, levels = {}, budget = {})", r.scenario, r.prime, r.levels, r.budget);
            for c in &r.checks {
                let _ = writeln!(out, "[{}] {} ({})", c.status.as_str(), c.id, c.reference);
                let _ = writeln!(out, "    {}", c.description);
                let _ = writeln!(out, "    expected: {}", c.expected);
                let _ = writeln!(out, "    computed: {}", c.computed);
            }
            let _ = writeln!(
                out,
                "{} passed, {} failed, {} inconclusive",
                r.count(Status::Pass),
                r.count(Status::Fail),
                r.count(Status::Inconclusive)
            );
            out
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}` (try list-scenarios)")]
    UnknownScenario(String),
    #[error("scenario {scenario} needs {need}, got p = {prime}")]
    UnsupportedPrime { scenario: String, prime: u32, need: String },
    #[error("levels must be at least {0}")]
    TooFewLevels(usize),
    #[error("{0} vanishes")]
    Vanishes(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Ram(#[from] RamError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Literal(#[from] LiteralError),
}

fn series_budget(e: &SeriesError) -> bool {
    matches!(e, SeriesError::TermBudget(_) | SeriesError::WorkBudget)
}

impl ScenarioError {
    /// Budget exhaustion, as opposed to a wrong value or a broken input.
    pub fn is_budget(&self) -> bool {
        match self {
            ScenarioError::Series(e) | ScenarioError::Ext(ExtError::Series(e)) | ScenarioError::Ram(RamError::Series(e)) => series_budget(e),
            ScenarioError::Literal(LiteralError::Series(e)) => series_budget(e),
            _ => false,
        }
    }
}

type Outcome = Result<(String, bool), ScenarioError>;

/// Collects checks; errors become FAIL or, for budget exhaustion,
/// INCONCLUSIVE.
#[derive(Debug)]
struct Battery {
    checks: Vec<Check>,
}

impl Battery {
    fn new() -> Self {
        Battery { checks: Vec::new() }
    }

    fn run(&mut self, id: &str, description: &str, reference: &str, expected: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let (computed, status) = match f() {
            Ok((computed, true)) => (computed, Status::Pass),
            Ok((computed, false)) => (computed, Status::Fail),
            Err(e) if e.is_budget() => (format!("budget exhausted: {e}"), Status::Inconclusive),
            Err(e) => (format!("error: {e}"), Status::Fail),
        };
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            reference: reference.into(),
            expected: expected.into(),
            computed,
            status,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScenarioInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub primes: &'static str,
}

const SCENARIOS: [ScenarioInfo; 4] = [
    ScenarioInfo {
        id: "example-5-1-1",
        summary: "theta = alpha + u beta with alpha independent, beta dependent: #S_theta = 1 < 2 = depth",
        primes: "any",
    },
    ScenarioInfo {
        id: "monster-5-2",
        summary: "theta = alpha + t beta over K with value groups G_l: #S_theta = 2 > 1 = depth",
        primes: "any",
    },
    ScenarioInfo {
        id: "ramif-6-2",
        summary: "ramification ideals of the compositum K(alpha, beta): #Ram = 2 > 1 = depth",
        primes: "any",
    },
    ScenarioInfo {
        id: "asd-6-3",
        summary: "Heisenberg extension N = K(theta, eta): group law, iota witnesses, Ram = {M}",
        primes: "odd (p = 2 runs the M_0 variant)",
    },
];

pub fn scenarios() -> &'static [ScenarioInfo] {
    &SCENARIOS
}

pub fn scenario_ids() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.id).collect()
}

fn validate(id: &str, cfg: &Config) -> Result<(), ScenarioError> {
    if !SCENARIOS.iter().any(|s| s.id == id) {
        return Err(ScenarioError::UnknownScenario(id.into()));
    }
    if !crate::coefficients::is_prime(cfg.prime) {
        return Err(ScenarioError::UnsupportedPrime {
            scenario: id.into(),
            prime: cfg.prime,
            need: "a prime".into(),
        });
    }
    if cfg.levels < 2 {
        return Err(ScenarioError::TooFewLevels(2));
    }
    Ok(())
}

pub fn run_scenario(id: &str, cfg: &Config) -> Result<Report, ScenarioError> {
    validate(id, cfg)?;
    let cfg = Config {
        budget: cfg.budget.max(1),
        ..cfg.clone()
    };
    let mut b = Battery::new();
    match id {
        "example-5-1-1" => example::run(&cfg, &mut b)?,
        "monster-5-2" => monster::run(&cfg, &mut b)?,
        "ramif-6-2" => ramif::run(&cfg, &mut b)?,
        "asd-6-3" => asd::run(&cfg, &mut b)?,
        _ => unreachable!("validated"),
    }
    Ok(Report {
        schema: SCHEMA_VERSION,
        scenario: id.into(),
        prime: cfg.prime,
        levels: cfg.levels,
        budget: cfg.budget,
        checks: b.checks,
    })
}

/// The named constructions of a scenario, for parsing literals against it.
/// Without a scenario only `t` and `u` are known, over `F_{p^2}` with `pi`.
pub fn scenario_env(id: Option<&str>, cfg: &Config) -> Result<SeriesEnv, ScenarioError> {
    match id {
        None => {
            let ctx = crate::exponents::BasisContext::with_pi();
            let field = crate::coefficients::FieldSpec::default_for(cfg.prime, 2)?;
            Ok(SeriesEnv::new(&ctx, &field))
        }
        Some(id) => {
            validate(id, cfg)?;
            match id {
                "example-5-1-1" => example::env(cfg),
                "monster-5-2" => monster::env(cfg),
                "ramif-6-2" => ramif::env(cfg),
                "asd-6-3" => asd::env(cfg),
                _ => unreachable!("validated"),
            }
        }
    }
}

#[cfg(test)]
mod tests;
