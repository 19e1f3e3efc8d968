//! `K_0 = k(t, t^pi)` with `a_1 = AS^{-1}(t^{-1})`, `a_{l+1} = AS^{-1}(-a_l)`,
//! `b_l = t^{-pi/p^l}`; `alpha` independent, `beta` dependent and
//! `theta = alpha + u beta` for a constant `u` outside `F_p`.

use std::sync::Arc;

use crate::coefficients::{FFElem, FieldSpec};
use crate::cuts::{Cut, Side};
use crate::exponents::{BasisContext, Exponent, ValueLattice};
use crate::extensions::{
    classify_dependence, conjugate_set, distance_witnesses_eval, ge_witness_check, krasner_omega, okutsu_verify, s_theta, ASElement, Dependence,
    DistanceConfig, GeneratorCombo, OkutsuCandidate, OkutsuLevel,
};
use crate::series::HahnSeries;

use super::util::{constant, exp, mono, pk, show};
use super::{Battery, Config, ScenarioError, SeriesEnv};

pub(super) struct Example {
    pub ctx: Arc<BasisContext>,
    pub f: Arc<FieldSpec>,
    pub u: FFElem,
    pub p: u32,
    /// `a[l - 1] = a_l`.
    pub a: Vec<ASElement>,
    pub alpha: ASElement,
    pub beta: ASElement,
    pub combo: GeneratorCombo,
}

fn a_chain(ctx: &Arc<BasisContext>, f: &Arc<FieldSpec>, n: usize) -> Result<Vec<ASElement>, ScenarioError> {
    let mut out: Vec<ASElement> = Vec::with_capacity(n);
    for l in 1..=n {
        let rhs = match out.last() {
            None => mono(ctx, f, "-1")?,
            Some(prev) => prev.solution.neg(),
        };
        out.push(ASElement::solve(format!("a_{l}"), &rhs)?);
    }
    Ok(out)
}

impl Example {
    pub fn new(p: u32, levels: usize) -> Result<Self, ScenarioError> {
        let ctx = BasisContext::with_pi();
        let f = FieldSpec::default_for(p, 2)?;
        let u = FFElem::generator(&f);
        let a = a_chain(&ctx, &f, levels)?;
        let alpha = ASElement::solve("alpha", &mono(&ctx, &f, "-pi")?)?;
        let beta = ASElement::solve("beta", &HahnSeries::t_pow(&ctx, &f, Exponent::int(&ctx, -(p as i64) - 1)))?;
        let combo = GeneratorCombo::new(
            vec![(constant(&ctx, FFElem::one(&f)), alpha.clone()), (constant(&ctx, u.clone()), beta.clone())],
            true,
        );
        Ok(Example { ctx, f, u, p, a, alpha, beta, combo })
    }

    fn b(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        mono(&self.ctx, &self.f, &format!("-pi/{}", pk(self.p, l)))
    }

    fn c(&self, l: usize) -> HahnSeries {
        HahnSeries::sum(&self.ctx, &self.f, self.a[..l].iter().map(|x| x.solution.clone()).collect())
    }

    fn d(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        let parts = (1..=l).map(|i| self.b(i)).collect::<Result<_, _>>()?;
        Ok(HahnSeries::sum(&self.ctx, &self.f, parts))
    }

    fn t_inv_c(&self, l: usize) -> Result<HahnSeries, ScenarioError> {
        Ok(self.c(l).shift(&Exponent::int(&self.ctx, -1)))
    }

    fn u_series(&self) -> HahnSeries {
        constant(&self.ctx, self.u.clone())
    }

    fn lattice(&self, l: usize) -> Result<ValueLattice, ScenarioError> {
        Ok(ValueLattice::new(vec![exp(&self.ctx, &format!("1/{}", pk(self.p, l)))?, exp(&self.ctx, &format!("pi/{}", pk(self.p, l)))?]))
    }
}

pub(super) fn env(cfg: &Config) -> Result<SeriesEnv, ScenarioError> {
    let ex = Example::new(cfg.prime, 1)?;
    let mut env = SeriesEnv::new(&ex.ctx, &ex.f);
    env.define("alpha", ex.alpha.solution.clone());
    env.define("beta", ex.beta.solution.clone());
    env.define("theta", ex.combo.theta());
    let p = cfg.prime;
    let (ctx, f) = (ex.ctx.clone(), ex.f.clone());
    let chain = move |n: usize| -> Result<Vec<ASElement>, String> {
        if n == 0 {
            return Err("indices start at 1".into());
        }
        a_chain(&ctx, &f, n).map_err(|e| e.to_string())
    };
    let chain = Arc::new(chain);
    let ch = chain.clone();
    env.define_indexed("a", move |l| Ok(ch(l)?.pop().expect("nonempty").solution));
    let ch = chain.clone();
    let (ctx, f) = (ex.ctx.clone(), ex.f.clone());
    env.define_indexed("c", move |l| Ok(HahnSeries::sum(&ctx, &f, ch(l)?.into_iter().map(|x| x.solution).collect())));
    let (ctx, f) = (ex.ctx.clone(), ex.f.clone());
    env.define_indexed("b", move |l| mono(&ctx, &f, &format!("-pi/{}", pk(p, l))).map_err(|e| e.to_string()));
    let (ctx, f) = (ex.ctx.clone(), ex.f.clone());
    env.define_indexed("d", move |l| {
        let parts = (1..=l).map(|i| mono(&ctx, &f, &format!("-pi/{}", pk(p, i)))).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        Ok(HahnSeries::sum(&ctx, &f, parts))
    });
    Ok(env)
}

pub(super) fn run(cfg: &Config, b: &mut Battery) -> Result<(), ScenarioError> {
    let (p, n, budget) = (cfg.prime, cfg.levels, cfg.budget);
    let ex = Example::new(p, n)?;
    let ctx = ex.ctx.clone();
    let theta = ex.combo.theta();
    let depth = n as u32 - 1;

    b.run(
        "as-relations",
        "AS(a_1) = t^-1, AS(a_{l+1}) = -a_l, AS(alpha) = t^-pi, AS(beta) = t^-(p+1) on sampled windows",
        "def:a-chain",
        "all windows agree",
        || {
            let mut bad = Vec::new();
            for (i, a) in ex.a.iter().enumerate() {
                let bounds = [exp(&ctx, &format!("-1/{}", pk(p, i + 2)))?, exp(&ctx, &format!("-1/{}", pk(p, i + 4)))?];
                if !a.check_windows(&bounds, budget)? {
                    bad.push(a.label.clone());
                }
            }
            let bounds = [exp(&ctx, &format!("-pi/{}", pk(p, 2)))?, exp(&ctx, &format!("-pi/{}", pk(p, 4)))?];
            if !ex.alpha.check_windows(&bounds, budget)? {
                bad.push("alpha".into());
            }
            let bounds = [exp(&ctx, &format!("-1/{}", pk(p, 2)))?, exp(&ctx, &format!("-1/{}", pk(p, 4)))?];
            if !ex.beta.check_windows(&bounds, budget)? {
                bad.push("beta".into());
            }
            Ok(if bad.is_empty() {
                (format!("{} elements agree on all windows", ex.a.len() + 2), true)
            } else {
                (format!("mismatch: {}", bad.join(", ")), false)
            })
        },
    );

    let want: Vec<Exponent> = (1..=n).map(|l| exp(&ctx, &format!("-1/{}", pk(p, l + 1)))).collect::<Result<_, _>>()?;
    b.run("c-telescoping", "v(t^(-1/p) - c_l) = v(a_l^(1/p)) for l = 1..levels", "eq:cl-telescoping", show(&want), || {
        let t = mono(&ctx, &ex.f, &format!("-1/{p}"))?;
        let got: Vec<Exponent> = (1..=n).map(|l| super::util::val(&t.sub(&ex.c(l)), "t^(-1/p) - c_l")).collect::<Result<_, _>>()?;
        Ok((show(&got), got == want))
    });

    let beta_apps: Vec<(HahnSeries, u32)> = (1..=n).map(|l| Ok((ex.t_inv_c(l)?, 1))).collect::<Result<_, ScenarioError>>()?;
    let alpha_apps: Vec<(HahnSeries, u32)> = (1..=n).map(|l| Ok((ex.d(l)?, 1))).collect::<Result<_, ScenarioError>>()?;
    let lattices: Vec<ValueLattice> = (1..=n).map(|l| ex.lattice(l)).collect::<Result<_, _>>()?;
    let beta_cfg = DistanceConfig {
        limit_hint: Some(Exponent::int(&ctx, -1)),
        depth,
        lattices: Some(lattices.clone()),
        ..Default::default()
    };
    let alpha_cfg = DistanceConfig {
        limit_hint: Some(Exponent::zero(&ctx)),
        ..beta_cfg.clone()
    };
    let beta_eval = distance_witnesses_eval(&ex.beta.solution, beta_apps, &beta_cfg);
    let alpha_eval = distance_witnesses_eval(&ex.alpha.solution, alpha_apps, &alpha_cfg);

    let want: Vec<Exponent> = (1..=n).map(|l| exp(&ctx, &format!("-1-1/{}", pk(p, l + 1)))).collect::<Result<_, _>>()?;
    b.run(
        "psicusbeta",
        "v(beta - t^-1 c_l) = -1 - 1/p^(l+1) for l = 1..levels; d_1(beta) = (-1)^-",
        "eq:psicusbeta",
        format!("{}; cut -1^-", show(&want)),
        || {
            let ev = beta_eval.clone()?;
            let cut_ok = ev.cut == Cut::Principal(Exponent::int(&ctx, -1), Side::Minus);
            Ok((format!("{}; cut {}", show(&ev.witnesses.values), ev.cut), ev.witnesses.values == want && cut_ok))
        },
    );

    let want: Vec<Exponent> = (1..=n).map(|l| exp(&ctx, &format!("-pi/{}", pk(p, l + 1)))).collect::<Result<_, _>>()?;
    b.run(
        "psicusalpha",
        "v(alpha - d_l) = -pi/p^(l+1) for l = 1..levels; d_1(alpha) = 0^-",
        "eq:psicusalpha",
        format!("{}; cut 0^-", show(&want)),
        || {
            let ev = alpha_eval.clone()?;
            let cut_ok = ev.cut == Cut::Principal(Exponent::zero(&ctx), Side::Minus);
            Ok((format!("{}; cut {}", show(&ev.witnesses.values), ev.cut), ev.witnesses.values == want && cut_ok))
        },
    );

    b.run(
        "equakl-lattice",
        "v(a_l), v(b_l) lie in vK_l = (1/p^l)(Z + pi Z); both witness values at level l lie outside it",
        "eq:equakl",
        "generators inside, witnesses outside",
        || {
            let mut inside = true;
            for (i, lat) in lattices.iter().enumerate() {
                let va = super::util::val(&ex.a[i].solution, "a_l")?;
                let vb = super::util::val(&ex.b(i + 1)?, "b_l")?;
                inside &= lat.contains(&va)? && lat.contains(&vb)?;
            }
            let outside = |r: &Result<crate::extensions::DistanceEval, _>| -> Result<bool, ScenarioError> {
                let ev: &crate::extensions::DistanceEval = r.as_ref().map_err(|e: &crate::extensions::ExtError| ScenarioError::Ext(e.clone()))?;
                Ok(ev.lattice_outside.as_ref().is_some_and(|v| v.iter().all(|x| *x)))
            };
            let out_b = outside(&beta_eval)?;
            let out_a = outside(&alpha_eval)?;
            Ok((format!("generators inside: {inside}; beta witnesses outside: {out_b}; alpha witnesses outside: {out_a}"), inside && out_a && out_b))
        },
    );

    b.run(
        "dependence",
        "alpha is independent (d_1 = 0^-), beta is dependent (d_1 = delta^- with delta = -1 < 0)",
        "sec:concrete-example",
        "alpha independent; beta dependent, delta = -1",
        || {
            let da = classify_dependence(&alpha_eval.clone()?.cut)?;
            let db = classify_dependence(&beta_eval.clone()?.cut)?;
            let ok = da == Dependence::Independent && db == Dependence::Dependent(Exponent::int(&ctx, -1));
            Ok((format!("alpha {da:?}; beta {db:?}"), ok))
        },
    );

    b.run(
        "ge-condition",
        "v(x + y u) = 0 for all (x, y) in F_p^2 other than (0, 0)",
        "eq:congent",
        "holds",
        || {
            let ok = ge_witness_check(p, &[constant(&ctx, FFElem::one(&ex.f)), ex.u_series()])?;
            Ok((if ok { "holds" } else { "violated" }.into(), ok))
        },
    );

    let conj = conjugate_set(&ex.combo);
    let s = s_theta(&ex.combo);
    b.run(
        "conjugates",
        "the conjugates of theta are theta + F_p + u F_p, all distinct",
        "lemma:congent1",
        format!("{} distinct conjugates", p * p),
        || {
            let c = conj.clone()?;
            Ok((format!("{} distinct conjugates", c.len()), c.len() == (p * p) as usize))
        },
    );
    b.run("s-theta", "S_theta = {0} and omega(theta) = 0", "lemma:congent1", "S_theta = [0], #S_theta = 1, omega = 0", || {
        let s = s.clone()?;
        let w = krasner_omega(&ex.combo)?;
        let ok = s.set == vec![Exponent::zero(&ctx)] && w.is_zero();
        Ok((format!("S_theta = {}, #S_theta = {}, omega = {w}", show(&s.set), s.set.len()), ok))
    });

    let depth_report = (|| -> Result<crate::extensions::OkutsuReport, ScenarioError> {
        let u = ex.u_series();
        let a0: Vec<HahnSeries> = (1..=n).map(|l| Ok(ex.d(l)?.add(&u.product(&ex.t_inv_c(l)?)))).collect::<Result<_, ScenarioError>>()?;
        let ub = u.product(&ex.beta.solution);
        let a1: Vec<HahnSeries> = (1..=n).map(|l| Ok(ub.add(&ex.d(l)?))).collect::<Result<_, ScenarioError>>()?;
        let cand = OkutsuCandidate {
            levels: vec![
                OkutsuLevel { elements: a0.clone(), degree: 1, attained: false },
                OkutsuLevel { elements: a1.clone(), degree: p, attained: false },
                OkutsuLevel { elements: vec![theta.clone()], degree: p * p, attained: true },
            ],
        };
        let mut challenge: Vec<(HahnSeries, u32)> = vec![(HahnSeries::zero(&ctx, &ex.f), 1)];
        for l in 1..n {
            challenge.push((ex.d(l)?, 1));
            challenge.push((u.product(&ex.t_inv_c(l)?), 1));
            challenge.push((a0[l - 1].clone(), 1));
            challenge.push((a1[l - 1].clone(), p));
            challenge.push((ex.alpha.solution.add(&u.product(&ex.t_inv_c(l)?)), p));
        }
        challenge.push((ex.alpha.solution.clone(), p));
        challenge.push((ub.clone(), p));
        Ok(okutsu_verify(&cand, &theta, &challenge)?)
    })();
    b.run(
        "depth-evidence",
        "Okutsu candidate [A_0 = {d_l + u t^-1 c_l}, A_1 = {u beta + d_l}, {theta}] satisfies OS0-OS3 on samples (OS0: necessary conditions only)",
        "lemma:congent1",
        "depth 2, augmentations [limit, limit], all conditions pass",
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
            Ok((computed, rep.depth == 2 && rep.all_passed()))
        },
    );

    b.run("s-theta-below-depth", "#S_theta = 1 < 2 = depth(theta)", "lemma:congent1", "1 < 2", || {
        let s = s.clone()?;
        let rep = depth_report.clone()?;
        Ok((format!("{} < {}", s.set.len(), rep.depth), s.set.len() == 1 && rep.depth == 2))
    });
    Ok(())
}
