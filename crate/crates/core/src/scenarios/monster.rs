//! `K = K_0(a_l, b_l)` with `a_l = t^{-pi/p^l}`,
//! `b_l = t^{-1/r_l} - t^{-1/r_{l+1}}` and `theta = alpha + t beta`.

use std::sync::Arc;

use crate::coefficients::{FFElem, FieldSpec};
use crate::cuts::{Cut, Side};
use crate::exponents::{BasisContext, Exponent, RFamily, ValueLattice};
use crate::extensions::{
    conjugate_set, distance_witnesses_eval, kaplansky_obstructions, krasner_omega, okutsu_verify, s_theta, ASElement, DistanceConfig, DistanceEval,
    GeneratorCombo, OkutsuCandidate, OkutsuLevel, OkutsuReport,
};
use crate::series::{HahnSeries, SeriesError, SupportCount};

use super::util::{constant, exp, mono, pk, show, val};
use super::{Battery, Config, ScenarioError, SeriesEnv};

pub(super) struct Monster {
    pub ctx: Arc<BasisContext>,
    pub f: Arc<FieldSpec>,
    pub p: u32,
    pub alpha: ASElement,
    pub beta: ASElement,
    pub combo: GeneratorCombo,
}

/// `1/r_i` as exponent text; `r_1 = p`.
fn inv_r(p: u32, i: usize) -> String {
    if i == 1 {
        format!("1/{p}")
    } else {
        format!("1/r{i}")
    }
}

impl Monster {
    /// Basis with `r_1, ..., r_{top}`.
    pub fn new(p: u32, top: usize, field_degree: usize) -> Result<Self, ScenarioError> {
        Self::with_family(p, top, field_degree, RFamily::Geometric)
    }

    pub fn with_family(p: u32, top: usize, field_degree: usize, family: RFamily) -> Result<Self, ScenarioError> {
        let ctx = BasisContext::builder().pi().r_family(p, top as u32, family).build();
        let f = FieldSpec::default_for(p, field_degree)?;
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")?)?;
        let beta = ASElement::solve("beta", &HahnSeries::t_pow(&ctx, &f, Exponent::int(&ctx, -(p as i64) - 1)))?;
        let combo = GeneratorCombo::new(
            vec![(constant(&ctx, FFElem::one(&f)), alpha.clone()), (mono(&ctx, &f, "1")?, beta.clone())],
            true,
        );
        Ok(Monster { ctx, f, p, alpha, beta, combo })
    }

    pub fn a(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        mono(&self.ctx, &self.f, &format!("-pi/{}", pk(self.p, l)))
    }

    pub fn b(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        Ok(mono(&self.ctx, &self.f, &format!("-{}", inv_r(self.p, l)))?.sub(&mono(&self.ctx, &self.f, &format!("-{}", inv_r(self.p, l + 1)))?))
    }

    pub fn c(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        let parts = (1..=l).map(|i| self.a(i)).collect::<Result<_, _>>()?;
        Ok(HahnSeries::sum(&self.ctx, &self.f, parts).collect_all(l + 1)?)
    }

    /// `b_1 + ... + b_l`, summed termwise.
    pub fn d(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        let parts = (1..=l).map(|i| self.b(i)).collect::<Result<_, _>>()?;
        Ok(HahnSeries::sum(&self.ctx, &self.f, parts).collect_all(2 * l + 2)?)
    }

    pub fn lattice(&self, l: usize) -> Result<ValueLattice, ScenarioError> {
        let mut gens = vec![exp(&self.ctx, &format!("pi/{}", pk(self.p, l)))?];
        for i in 1..=l {
            gens.push(exp(&self.ctx, &inv_r(self.p, i))?);
        }
        gens.push(exp(&self.ctx, &format!("{}/r{}", self.p, l + 1))?);
        Ok(ValueLattice::new(gens))
    }
}

pub(super) fn env(cfg: &Config) -> Result<SeriesEnv, ScenarioError> {
    let top = cfg.levels + 2;
    let m = Arc::new(Monster::new(cfg.prime, top, 2)?);
    let mut env = SeriesEnv::new(&m.ctx, &m.f);
    env.define("alpha", m.alpha.solution.clone());
    env.define("beta", m.beta.solution.clone());
    env.define("theta", m.combo.theta());
    let guard = move |l: usize| if l == 0 || l + 1 > top { Err(format!("index must lie in 1..={}", top - 1)) } else { Ok(()) };
    let mm = m.clone();
    env.define_indexed("a", move |l| {
        guard(l)?;
        mm.a(l).map_err(|e| e.to_string())
    });
    let mm = m.clone();
    env.define_indexed("b", move |l| {
        guard(l)?;
        mm.b(l).map_err(|e| e.to_string())
    });
    let mm = m.clone();
    env.define_indexed("c", move |l| {
        guard(l)?;
        mm.c(l).map_err(|e| e.to_string())
    });
    let mm = m;
    env.define_indexed("d", move |l| {
        guard(l)?;
        mm.d(l).map_err(|e| e.to_string())
    });
    Ok(env)
}

fn sort_exps(v: &mut [Exponent]) -> Result<(), ScenarioError> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j].try_lt(&v[j - 1])? {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

/// Okutsu candidate `[{c_l + d_l}, {theta}]` with challenges kept inside
/// the sampled range.
pub(super) fn depth_evidence(m: &Monster, n: usize) -> Result<OkutsuReport, ScenarioError> {
    let (ctx, p) = (&m.ctx, m.p);
    let theta = m.combo.theta();
    let t_root = mono(ctx, &m.f, &format!("-1/{p}"))?;
    let a0: Vec<HahnSeries> = (1..=n).map(|l| Ok(m.c(l)?.add(&m.d(l)?))).collect::<Result<_, ScenarioError>>()?;
    let cand = OkutsuCandidate {
        levels: vec![
            OkutsuLevel { elements: a0.clone(), degree: 1, attained: false },
            OkutsuLevel { elements: vec![theta.clone()], degree: p * p, attained: true },
        ],
    };
    let tb = m.combo.parts[1].0.product(&m.beta.solution);
    let mut challenge: Vec<(HahnSeries, u32)> = vec![(HahnSeries::zero(ctx, &m.f), 1), (t_root, 1)];
    for l in 1..n.saturating_sub(1) {
        challenge.push((a0[l - 1].clone(), 1));
        challenge.push((m.c(l)?, 1));
        challenge.push((m.d(l)?, 1));
        challenge.push((m.alpha.solution.add(&m.d(l)?), p));
        challenge.push((tb.add(&m.c(l)?), p));
    }
    challenge.push((m.alpha.solution.clone(), p));
    challenge.push((tb, p));
    Ok(okutsu_verify(&cand, &theta, &challenge)?)
}

pub(super) fn run(cfg: &Config, b: &mut Battery) -> Result<(), ScenarioError> {
    let (p, n, budget) = (cfg.prime, cfg.levels, cfg.budget);
    let m = Monster::new(p, n + 2, 2)?;
    let ctx = m.ctx.clone();
    let theta = m.combo.theta();
    let depth = n as u32 - 1;
    let lattice_levels = 1..n;

    b.run(
        "equatsibestigl-generators",
        "v(a_l) = -pi/p^l, v(b_j) = -1/r_j (j <= l) and v(t^-1 - d_l^p) = -p/r_(l+1) all lie in G_l, for l = 1..levels-1",
        "eq:equatsibestigl",
        "all declared generator values match and lie in G_l",
        || {
            let mut checked = 0;
            let mut bad = Vec::new();
            for l in lattice_levels.clone() {
                let g = m.lattice(l)?;
                let mut pairs = vec![(val(&m.a(l)?, "a_l")?, exp(&ctx, &format!("-pi/{}", pk(p, l)))?)];
                for j in 1..=l {
                    pairs.push((val(&m.b(j)?, "b_j")?, exp(&ctx, &format!("-{}", inv_r(p, j)))?));
                }
                let t_tilde = mono(&ctx, &m.f, "-1")?.sub(&m.d(l)?.pth_power()).collect_all(4)?;
                pairs.push((val(&t_tilde, "t~")?, exp(&ctx, &format!("-{p}/r{}", l + 1))?));
                for (got, want) in pairs {
                    checked += 1;
                    if got != want || !g.contains(&got)? {
                        bad.push(format!("level {l}: {got}"));
                    }
                }
            }
            Ok(if bad.is_empty() {
                (format!("{checked} generator values match and lie in G_l"), true)
            } else {
                (bad.join("; "), false)
            })
        },
    );

    b.run(
        "equianfgmarl-nonmembership",
        "-pi/p^(l+1) and -1/r_(l+1) are not in G_l, for l = 1..levels-1",
        "eq:equianfgmarl",
        "no witness value lies in G_l",
        || {
            let mut inside = Vec::new();
            let mut checked = 0;
            for l in lattice_levels.clone() {
                let g = m.lattice(l)?;
                for w in [format!("-pi/{}", pk(p, l + 1)), format!("-1/r{}", l + 1)] {
                    checked += 1;
                    let x = exp(&ctx, &w)?;
                    if g.contains(&x)? {
                        inside.push(format!("{x} in G_{l}"));
                    }
                }
            }
            Ok(if inside.is_empty() {
                (format!("{checked} witness values outside"), true)
            } else {
                (inside.join("; "), false)
            })
        },
    );

    let lattices: Vec<ValueLattice> = (1..=n).map(|l| m.lattice(l)).collect::<Result<_, _>>()?;
    let dist = |target: &HahnSeries, apps: Vec<HahnSeries>, hint: i64| -> Result<DistanceEval, ScenarioError> {
        let cfg = DistanceConfig {
            limit_hint: Some(Exponent::int(&ctx, hint)),
            depth,
            lattices: Some(lattices.clone()),
            ..Default::default()
        };
        Ok(distance_witnesses_eval(target, apps.into_iter().map(|a| (a, 1)).collect(), &cfg)?)
    };
    let t_root = mono(&ctx, &m.f, &format!("-1/{p}"))?;
    let expect = |fmt: &dyn Fn(usize) -> String| -> Result<Vec<Exponent>, ScenarioError> { (1..=n).map(|l| exp(&ctx, &fmt(l))).collect() };
    let want_a = expect(&|l| format!("-pi/{}", pk(p, l + 1)))?;
    let want_t = expect(&|l| format!("-1/r{}", l + 1))?;
    let want_b = expect(&|l| format!("-1-1/r{}", l + 1))?;
    b.run(
        "impodist",
        "v(alpha - c_l) = -pi/p^(l+1), v(t^(-1/p) - d_l) = -1/r_(l+1), v(beta - t^-1 d_l) = -1 - 1/r_(l+1); cuts 0^-, 0^-, (-1)^-; values outside G_l",
        "eq:impodist",
        format!("{}; {}; {}; cuts 0^-, 0^-, -1^-", show(&want_a), show(&want_t), show(&want_b)),
        || {
            let ea = dist(&m.alpha.solution, (1..=n).map(|l| m.c(l)).collect::<Result<_, _>>()?, 0)?;
            let et = dist(&t_root, (1..=n).map(|l| m.d(l)).collect::<Result<_, _>>()?, 0)?;
            let t_inv = Exponent::int(&ctx, -1);
            let eb = dist(&m.beta.solution, (1..=n).map(|l| Ok(m.d(l)?.shift(&t_inv))).collect::<Result<_, ScenarioError>>()?, -1)?;
            let ok = ea.witnesses.values == want_a
                && et.witnesses.values == want_t
                && eb.witnesses.values == want_b
                && ea.cut == Cut::Principal(Exponent::zero(&ctx), Side::Minus)
                && et.cut == Cut::Principal(Exponent::zero(&ctx), Side::Minus)
                && eb.cut == Cut::Principal(t_inv.clone(), Side::Minus)
                && ea.supports_limit()
                && et.supports_limit()
                && eb.supports_limit();
            let computed = format!(
                "{}; {}; {}; cuts {}, {}, {}",
                show(&ea.witnesses.values),
                show(&et.witnesses.values),
                show(&eb.witnesses.values),
                ea.cut,
                et.cut,
                eb.cut
            );
            Ok((computed, ok))
        },
    );

    b.run(
        "trn0-theta",
        "trn_0(theta) = t^(-1/p) + sum t^(-pi/p^l) has infinite support; sampled elements of K have finite truncations",
        "def:no-finite-limits",
        "leading exponents in order with coefficient 1; support below 0 exceeds the budget; K samples finite",
        || {
            let mut want: Vec<Exponent> = (1..=6).map(|k| exp(&ctx, &format!("-pi/{}", pk(p, k)))).collect::<Result<_, _>>()?;
            want.push(exp(&ctx, &format!("-1/{p}"))?);
            sort_exps(&mut want)?;
            want.truncate(4);
            let got = theta.first_terms(4)?;
            let exps: Vec<Exponent> = got.iter().map(|t| t.exp.clone()).collect();
            let ones = got.iter().all(|t| t.coeff.is_one());
            let inf = theta.support_count_below(&Exponent::zero(&ctx), budget)? == SupportCount::ExceedsBudget;
            let samples = [m.c(n)?.add(&m.d(n)?), m.a(1)?.product(&m.b(n)?), mono(&ctx, &m.f, "-1")?.sub(&m.d(n)?.pth_power())];
            for s in &samples {
                // a finite support larger than the budget cannot be told apart from an infinite one
                if s.support_count_below(&Exponent::int(&ctx, 1), budget)? == SupportCount::ExceedsBudget {
                    return Err(SeriesError::TermBudget(budget).into());
                }
            }
            let computed = format!("leading {} (coefficients 1: {ones}); infinite below 0: {inf}; K samples finite: true", show(&exps));
            Ok((computed, exps == want && ones && inf))
        },
    );

    let conj = conjugate_set(&m.combo);
    let s = s_theta(&m.combo);
    b.run(
        "conjugates",
        "the conjugates of theta are theta + F_p + t F_p, all distinct",
        "sec:monster",
        format!("{} distinct conjugates", p * p),
        || {
            let c = conj.clone()?;
            Ok((format!("{} distinct conjugates", c.len()), c.len() == (p * p) as usize))
        },
    );
    b.run("s-theta", "S_theta = {0, 1} and omega(theta) = 1", "sec:monster", "S_theta = [0, 1], #S_theta = 2, omega = 1", || {
        let s = s.clone()?;
        let w = krasner_omega(&m.combo)?;
        let ok = s.set == vec![Exponent::zero(&ctx), Exponent::int(&ctx, 1)] && w == Exponent::int(&ctx, 1);
        Ok((format!("S_theta = {}, #S_theta = {}, omega = {w}", show(&s.set), s.set.len()), ok))
    });

    b.run(
        "kaplansky-obstructions",
        "a degree-p element sharing trn_0(theta) is neither a root of x^p - c nor of x^p - c x - d in K (sampled q_1 = -1/10, 1/10 and c_1 = u)",
        "lemma:dephtonfisone",
        "6 obstructions hold",
        || {
            let c1 = FFElem::generator(&m.f);
            let checks = kaplansky_obstructions(&m.combo, &exp(&ctx, "-1/10")?, &exp(&ctx, "1/10")?, &c1, budget)?;
            if checks.iter().any(|c| !c.passed && c.name.ends_with(" finite")) {
                return Err(SeriesError::TermBudget(budget).into());
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            let detail: Vec<String> = checks.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            Ok((format!("{passed} of {} hold ({})", checks.len(), detail.join("; ")), passed == checks.len() && passed == 6))
        },
    );

    let depth_report = depth_evidence(&m, n);
    b.run(
        "depth-evidence",
        "Okutsu candidate [A_0 = {c_l + d_l}, {theta}] satisfies OS0-OS3 on samples (OS0: necessary conditions only)",
        "lemma:dephtonfisone",
        "depth 1, augmentations [limit], all conditions pass",
        || {
            let rep = depth_report.clone()?;
            let aug: Vec<String> = rep.augmentations.iter().map(|a| a.to_string()).collect();
            let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let computed = format!(
                "depth {}, augmentations [{}], {} of {} conditions pass{}; OS0 is a necessary-conditions check",
                rep.depth,
                aug.join(", "),
                rep.checks.len() - failed.len(),
                rep.checks.len(),
                if failed.is_empty() { String::new() } else { format!(" (failed: {})", failed.join(", ")) }
            );
            Ok((computed, rep.depth == 1 && rep.all_passed()))
        },
    );

    b.run("s-theta-above-depth", "#S_theta = 2 > 1 = depth(theta)", "sec:monster", "2 > 1", || {
        let s = s.clone()?;
        let rep = depth_report.clone()?;
        Ok((format!("{} > {}", s.set.len(), rep.depth), s.set.len() == 2 && rep.depth == 1))
    });

    b.run(
        "r-family-sensitivity",
        "rerun with r_i = p + (i - 1) + 1/pi: results stated in coordinates must not change; results that compare real values are flagged",
        "sec:monster",
        "coordinate results agree",
        || {
            let lin = Monster::with_family(p, n + 2, 2, RFamily::Linear)?;
            let same = coordinate_results(&m, n)? == coordinate_results(&lin, n)?;
            let flag = match depth_evidence(&lin, n) {
                Ok(r) if r.all_passed() && r.depth == 1 => "depth evidence unchanged".to_string(),
                Ok(r) => format!(
                    "flagged: depth evidence has {} of {} conditions passing",
                    r.checks.iter().filter(|c| c.passed).count(),
                    r.checks.len()
                ),
                Err(e) => format!("flagged: depth evidence fails with {e}"),
            };
            Ok((format!("coordinate results {}; {flag}", if same { "agree" } else { "differ" }), same))
        },
    );
    Ok(())
}

/// Distance values and `S_theta`, as text so that contexts can be compared.
fn coordinate_results(m: &Monster, n: usize) -> Result<Vec<String>, ScenarioError> {
    let t_root = mono(&m.ctx, &m.f, &format!("-1/{}", m.p))?;
    let mut out = Vec::new();
    for l in 1..=n {
        out.push(val(&m.alpha.solution.sub(&m.c(l)?), "alpha - c_l")?.to_string());
        out.push(val(&t_root.sub(&m.d(l)?), "t^(-1/p) - d_l")?.to_string());
    }
    out.push(show(&s_theta(&m.combo)?.set));
    Ok(out)
}
