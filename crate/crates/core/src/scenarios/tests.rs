use super::*;
use crate::coefficients::FFElem;
use crate::exponents::{rat, Exponent};
use crate::series::HahnSeries;

fn cfg() -> Config {
    Config::default()
}

#[test]
fn literal_monomial() {
    let env = scenario_env(None, &cfg()).unwrap();
    let s = parse_series_literal("t^(-1)", &env).unwrap();
    let want = HahnSeries::t_pow(&env.ctx, &env.field, Exponent::int(&env.ctx, -1));
    assert!(s.agrees_below(&want, &Exponent::int(&env.ctx, 10), 100).unwrap());
    assert_eq!(s.first_terms(5).unwrap().len(), 1);
}

#[test]
fn literal_two_terms() {
    let env = scenario_env(None, &cfg()).unwrap();
    let s = parse_series_literal("t^((-1/3)*pi) + 2*t^(-1/3)", &env).unwrap();
    let terms = s.first_terms(5).unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0].exp, env.ctx.parse("(-1/3)*pi").unwrap());
    assert!(terms[0].coeff.is_one());
    assert_eq!(terms[1].exp, Exponent::rational(&env.ctx, rat(-1, 3)));
    assert_eq!(terms[1].coeff, FFElem::from_int(&env.field, 2));
}

#[test]
fn literal_products_and_generator() {
    let env = scenario_env(None, &cfg()).unwrap();
    let s = parse_series_literal("(u + 1)*t^(1/2)*t", &env).unwrap();
    let terms = s.first_terms(5).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].exp, Exponent::rational(&env.ctx, rat(3, 2)));
    assert_eq!(terms[0].coeff, &FFElem::generator(&env.field) + &FFElem::one(&env.field));
    let zero = parse_series_literal("t - t", &env).unwrap();
    assert!(zero.val().unwrap().is_none());
}

#[test]
fn literal_named_recipe() {
    let env = scenario_env(Some("example-5-1-1"), &cfg()).unwrap();
    let a1 = parse_series_literal("a(1)", &env).unwrap();
    let a2 = parse_series_literal("a(2)", &env).unwrap();
    // AS(a_2) = -a_1
    let lhs = a2.pth_power().sub(&a2);
    assert!(lhs.agrees_below(&a1.neg(), &Exponent::rational(&env.ctx, rat(-1, 3i64.pow(6))), 200).unwrap());
    assert_eq!(a2.val().unwrap().unwrap(), Exponent::rational(&env.ctx, rat(-1, 9)));
}

#[test]
fn literal_errors() {
    let env = scenario_env(None, &cfg()).unwrap();
    assert!(matches!(parse_series_literal("t^(-1) +", &env), Err(LiteralError::Syntax { pos: 8, .. })));
    assert!(matches!(parse_series_literal("2 * )", &env), Err(LiteralError::Syntax { pos: 4, .. })));
    assert_eq!(parse_series_literal("gamma", &env).unwrap_err(), LiteralError::UnknownName("gamma".into()));
    assert!(matches!(parse_series_literal("t^(1/0)", &env), Err(LiteralError::Exponent { .. })));
}

#[test]
fn empty_report_json() {
    let r = Report {
        schema: SCHEMA_VERSION,
        scenario: "none".into(),
        prime: 3,
        levels: 5,
        budget: 256,
        checks: vec![],
    };
    let v: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["checks"], serde_json::json!([]));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn exit_codes() {
    let mut b = Battery::new();
    b.run("ok", "", "", "", || Ok(("x".into(), true)));
    b.run("budget", "", "", "", || Err(ScenarioError::Series(crate::series::SeriesError::WorkBudget)));
    let mut r = Report {
        schema: SCHEMA_VERSION,
        scenario: "none".into(),
        prime: 3,
        levels: 5,
        budget: 1,
        checks: b.checks,
    };
    assert_eq!(r.check("budget").unwrap().status, Status::Inconclusive);
    assert_eq!(r.exit_code(), 2);
    let mut b = Battery::new();
    b.run("bad", "", "", "", || Ok(("y".into(), false)));
    r.checks.extend(b.checks);
    assert_eq!(r.exit_code(), 1);
    assert!(emit_report(&r, Format::Text).contains("[FAIL] bad"));
}

#[test]
fn unknown_scenario_and_bad_config() {
    assert_eq!(run_scenario("nope", &cfg()).unwrap_err(), ScenarioError::UnknownScenario("nope".into()));
    let c = Config { prime: 4, ..cfg() };
    assert!(matches!(run_scenario("monster-5-2", &c), Err(ScenarioError::UnsupportedPrime { .. })));
    let c = Config { levels: 1, ..cfg() };
    assert_eq!(run_scenario("monster-5-2", &c).unwrap_err(), ScenarioError::TooFewLevels(2));
}

#[test]
fn reports_are_deterministic() {
    let c = Config { levels: 3, ..cfg() };
    let a = emit_report(&run_scenario("ramif-6-2", &c).unwrap(), Format::Json);
    let b = emit_report(&run_scenario("ramif-6-2", &c).unwrap(), Format::Json);
    assert_eq!(a, b);
}

#[test]
fn example_all_pass() {
    let r = run_scenario("example-5-1-1", &cfg()).unwrap();
    for c in &r.checks {
        assert_eq!(c.status, Status::Pass, "{}: {}", c.id, c.computed);
    }
    assert!(r.check("s-theta").unwrap().computed.contains("#S_theta = 1"));
    assert!(r.check("depth-evidence").unwrap().computed.contains("depth 2"));
}

#[test]
fn tiny_budget_is_inconclusive_not_wrong() {
    let r = run_scenario("monster-5-2", &Config { budget: 3, ..cfg() }).unwrap();
    assert!(r.count(Status::Inconclusive) > 0);
    assert!(r.checks.iter().all(|c| c.status != Status::Fail || c.id == "kaplansky-obstructions"), "{r:?}");
}

#[test]
fn monster_json_matches_golden() {
    let r = run_scenario("monster-5-2", &Config { levels: 3, ..cfg() }).unwrap();
    let json = emit_report(&r, Format::Json);
    assert!(json.contains("\"id\": \"equianfgmarl-nonmembership\""));
    assert_eq!(json, include_str!("../../tests/golden/monster-5-2.json"));
}
