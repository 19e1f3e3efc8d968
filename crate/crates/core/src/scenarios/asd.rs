//! `AS(alpha) = t^-1`, `AS(theta) = alpha`, `AS(eta) = alpha^2` over a
//! field with no finite limits; `N = K(theta, eta)` has the Heisenberg
//! group of order `p^3` as Galois group for odd `p`.

use std::sync::Arc;

use crate::coefficients::{FFElem, FieldSpec};
use crate::cuts::FinalSegment;
use crate::exponents::{rat, BasisContext, Exponent};
use crate::ramification::{
    apply_automorphism, heisenberg_relations, i_h_from_limit, i_sigma_witnesses, lemma_iv_iota_inverse_form, ram_set_and_compare, subgroup_enumerate,
    ActionTable, Expr, GaloisSetting, GroupElem, GroupModel, RamSegment, Subgroup, SymbolSet,
};
use crate::series::HahnSeries;

use super::util::{head, pk, show};
use super::{Battery, Config, ScenarioError, SeriesEnv};

/// Field `F_{p^p}` and a root of `c^p - c = 1` in it.
fn field_with_c(p: u32) -> Result<(Arc<FieldSpec>, FFElem), ScenarioError> {
    let f = FieldSpec::default_for(p, p as usize)?;
    let one = FFElem::one(&f);
    let c = FFElem::all(&f).find(|c| (&c.pow(p as u64) - c) == one).expect("x^p - x - 1 splits in F_{p^p}");
    Ok((f, c))
}

/// `sum_{k >= n, p does not divide k} k beta^{1/p^k}` with
/// `beta = t^{-2/p} + 2 t^{-1/p} alpha^{1/p}`: the series `eta - beta_n`.
fn eta_tail(alpha: &HahnSeries, n: usize) -> HahnSeries {
    let (ctx, f) = (alpha.context().clone(), alpha.field().clone());
    let p = alpha.p() as usize;
    let q = |a: i64, b: i64| Exponent::rational(&ctx, rat(a, b));
    let beta = HahnSeries::t_pow(&ctx, &f, q(-2, p as i64)).add(&alpha.pth_root().mul_monomial(&FFElem::from_int(&f, 2), &q(-1, p as i64)));
    let ks: Arc<Vec<usize>> = Arc::new((n..).filter(|k| k % p != 0).take(64).collect());
    let ctx2 = ctx.clone();
    HahnSeries::indexed_sum(&ctx, &f, move |i| {
        let k = *ks.get(i)?;
        let lb = Exponent::rational(&ctx2, rat(-2, (p as i64).pow(k as u32 + 1)));
        Some((lb, beta.pth_root_iter(k as u32).scale(&FFElem::from_int(beta.field(), k as i64))))
    })
}

struct Asd {
    ctx: Arc<BasisContext>,
    f: Arc<FieldSpec>,
    c: FFElem,
    p: u32,
    alpha: HahnSeries,
    theta: HahnSeries,
    eta: HahnSeries,
}

impl Asd {
    fn new(p: u32) -> Result<Self, ScenarioError> {
        let ctx = BasisContext::rational();
        let (f, c) = field_with_c(p)?;
        let alpha = HahnSeries::as_root(&HahnSeries::t_pow(&ctx, &f, Exponent::int(&ctx, -1)))?;
        let theta = HahnSeries::as_root(&alpha)?;
        let eta = HahnSeries::as_root(&alpha.product(&alpha))?;
        Ok(Asd { ctx, f, c, p, alpha, theta, eta })
    }

    fn omega(&self) -> HahnSeries {
        let two = FFElem::from_int(&self.f, 2);
        let at = self.alpha.product(&self.theta).scale(&two);
        let a2 = self.alpha.product(&self.alpha).scale(&self.c);
        self.eta.sub(&at).add(&a2)
    }

    /// Heisenberg action on `alpha, theta, eta, omega` and `b_1..b_nb`.
    fn heisenberg(&self, nb: usize) -> Result<GaloisSetting, ScenarioError> {
        let p = self.p;
        let model = GroupModel::Heisenberg { p };
        let b_names: Vec<String> = (1..=nb).map(|n| format!("b{n}")).collect();
        let mut names = vec!["alpha", "theta", "eta", "omega"];
        names.extend(b_names.iter().map(|s| s.as_str()));
        let sy = SymbolSet::new(&self.ctx, &self.f, &names);
        let v = |n: &str| sy.var(n);
        let k = sy.ff(self.c.clone());
        let two = sy.int(2);
        let mut t = ActionTable::new(&model, &sy);
        t.set("sigma", "alpha", v("alpha")?.add(&sy.int(1))?)?;
        t.set("sigma", "theta", v("theta")?.add(&k)?)?;
        let two_theta = two.mul(&v("theta")?)?;
        t.set("sigma", "eta", v("eta")?.add(&two_theta)?.add(&k)?)?;
        t.set("iota", "eta", v("eta")?.add(&sy.int(1))?)?;
        t.set("iota", "omega", v("omega")?.add(&sy.int(1))?)?;
        t.set("tau", "theta", v("theta")?.add(&sy.int(1))?)?;
        t.set("tau", "omega", v("omega")?.sub(&two.mul(&v("alpha")?)?)?)?;
        for (i, name) in b_names.iter().enumerate() {
            let n = i + 1;
            t.set("iota", name, v(name)?.add(&sy.int(1))?)?;
            // sigma(beta_n) = beta_n + sum_{k<n} 2k t^{-1/p^{k+1}}
            let parts: Vec<HahnSeries> = (1..n)
                .map(|k| HahnSeries::monomial(&self.ctx, FFElem::from_int(&self.f, 2 * k as i64), Exponent::rational(&self.ctx, rat(-1, (p as i64).pow(k as u32 + 1)))))
                .collect();
            let shift = HahnSeries::sum(&self.ctx, &self.f, parts).collect_all(n)?;
            t.set("sigma", name, v(name)?.add(&two_theta)?.add(&k)?.sub(&sy.constant(shift))?)?;
        }
        let mut values = vec![self.alpha.clone(), self.theta.clone(), self.eta.clone(), self.omega()];
        values.extend((1..=nb).map(|n| eta_tail(&self.alpha, n)));
        Ok(GaloisSetting { group: model, table: t, values })
    }

    /// `Gal(M_0/K)`: `sigma1` moves `theta` by `c` and `alpha` by 1,
    /// `sigma2` moves `theta` by 1.
    fn m0(&self) -> Result<GaloisSetting, ScenarioError> {
        let model = GroupModel::ElementaryAbelian { n: 2, p: self.p };
        let sy = SymbolSet::new(&self.ctx, &self.f, &["alpha", "theta"]);
        let mut t = ActionTable::new(&model, &sy);
        t.set("sigma1", "alpha", sy.var("alpha")?.add(&sy.int(1))?)?;
        t.set("sigma1", "theta", sy.var("theta")?.add(&sy.ff(self.c.clone()))?)?;
        t.set("sigma2", "theta", sy.var("theta")?.add(&sy.int(1))?)?;
        Ok(GaloisSetting { group: model, table: t, values: vec![self.alpha.clone(), self.theta.clone()] })
    }

    fn l_ext(&self) -> Result<GaloisSetting, ScenarioError> {
        let model = GroupModel::ElementaryAbelian { n: 1, p: self.p };
        let sy = SymbolSet::new(&self.ctx, &self.f, &["alpha"]);
        let mut t = ActionTable::new(&model, &sy);
        t.set("sigma1", "alpha", sy.var("alpha")?.add(&sy.int(1))?)?;
        Ok(GaloisSetting { group: model, table: t, values: vec![self.alpha.clone()] })
    }
}

/// `x - head_n(x)` for `n = 1..=levels`: elements whose values approach 0.
fn tails(setting: &GaloisSetting, name: &str, series: &HahnSeries, levels: usize) -> Result<Vec<Expr>, ScenarioError> {
    let sy = setting.symbols();
    let x = sy.var(name)?;
    (1..=levels).map(|n| Ok(x.sub(&sy.constant(head(series, n)?))?)).collect()
}

/// `Ram` from witness families approaching 0 from above, one chosen
/// element per subgroup.
fn ram_by_limits(
    setting: &GaloisSetting,
    subs: &[Subgroup],
    family: &dyn Fn(&GroupElem) -> Result<Vec<Expr>, ScenarioError>,
    depth: u32,
) -> Result<Vec<Option<RamSegment>>, ScenarioError> {
    let zero = Exponent::zero(setting.values[0].context());
    let mut out = Vec::with_capacity(subs.len());
    for h in subs {
        if h.is_trivial() {
            out.push(None);
            continue;
        }
        let rho = h.generators[0].clone();
        let tests = family(&rho)?;
        // the extensions are immediate, so every I_H lies in {v > 0}
        out.push(Some(i_h_from_limit(setting, &[(rho, tests)], &zero, depth, true)?));
    }
    Ok(out)
}

fn ram_summary(setting: &GaloisSetting, subs: &[Subgroup], segs: &[Option<RamSegment>], depth: usize, s: usize) -> Result<(String, bool), ScenarioError> {
    let cmp = ram_set_and_compare(&setting.group, subs, segs, depth, s)?;
    let zero = Exponent::zero(setting.values[0].context());
    let names: Vec<String> = cmp.ideals.iter().map(|x| x.to_string()).collect();
    let ok = cmp.ideals == vec![FinalSegment::AboveOpen(zero)] && cmp.exact;
    let n = subs.iter().filter(|h| !h.is_trivial()).count();
    Ok((format!("Ram = {{{}}} over {n} nontrivial subgroups ({})", names.join(", "), if cmp.exact { "exact" } else { "lower bounds" }), ok))
}

pub(super) fn env(cfg: &Config) -> Result<SeriesEnv, ScenarioError> {
    let a = Asd::new(cfg.prime)?;
    let mut env = SeriesEnv::new(&a.ctx, &a.f);
    env.define("alpha", a.alpha.clone());
    env.define("theta", a.theta.clone());
    env.define("eta", a.eta.clone());
    env.define("omega", a.omega());
    let alpha = a.alpha.clone();
    env.define_indexed("b", move |n| if n == 0 { Err("indices start at 1".into()) } else { Ok(eta_tail(&alpha, n)) });
    Ok(env)
}

pub(super) fn run(cfg: &Config, b: &mut Battery) -> Result<(), ScenarioError> {
    if cfg.prime == 2 {
        return run_p2(cfg, b);
    }
    let (p, n) = (cfg.prime, cfg.levels);
    let a = Asd::new(p)?;
    let ctx = a.ctx.clone();
    let depth = n as u32 - 1;
    // b_n for n = 1..levels, plus enough to reach `levels` indices prime to p
    let limit_ns: Vec<usize> = (1..).filter(|k| k % p as usize != 0).take(n).collect();
    let nb = n.max(*limit_ns.last().expect("levels >= 2"));
    let setting = a.heisenberg(nb)?;
    let model = setting.group.clone();

    b.run(
        "group-law",
        "normal form iota^a tau^b sigma^c: group axioms, order p^3, associativity over all triples",
        "lemma:heisenberg",
        format!("order {}, all {} triples associative", pk(p, 3), pk(p, 9)),
        || {
            let els = model.elements();
            let mut ok = true;
            for g in &els {
                ok &= model.mul(g, &model.identity())? == *g && model.mul(g, &model.inv(g)?)? == model.identity();
            }
            let mut triples = 0u64;
            for x in &els {
                for y in &els {
                    let xy = model.mul(x, y)?;
                    for z in &els {
                        triples += 1;
                        ok &= model.mul(&xy, z)? == model.mul(x, &model.mul(y, z)?)?;
                    }
                }
            }
            Ok((format!("order {}, {triples} triples {}", els.len(), if ok { "associative" } else { "with a violation" }), ok && els.len() as u64 == (p as u64).pow(3)))
        },
    );

    b.run("lemma-relations", "the five commutation identities among sigma, tau, iota", "lemma:heisenberg", "(i)-(v) hold", || {
        let rel = heisenberg_relations(&model)?;
        let bad: Vec<&str> = rel.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
        Ok((if bad.is_empty() { format!("all {} hold", rel.len()) } else { format!("failing: {}", bad.join("; ")) }, bad.is_empty() && rel.len() == 5))
    });

    b.run(
        "lemma-iv-printed",
        "the conclusion of (iv) as printed: tau^-1 sigma tau = iota^-1 sigma",
        "lemma:heisenberg",
        "tau^-1 sigma tau = iota^-1 sigma",
        || {
            let lhs = model.word(&[("tau", -1), ("sigma", 1), ("tau", 1)])?;
            let holds = lemma_iv_iota_inverse_form(&model)?;
            let squared = lhs == model.word(&[("iota", -2), ("sigma", 1)])?;
            Ok((format!("tau^-1 sigma tau = {}{}", model.format(&lhs), if squared { " = iota^-2 sigma" } else { "" }), holds))
        },
    );

    b.run(
        "action-consistency",
        "the table action composes like the normal form and preserves AS(alpha) = t^-1, AS(theta) = alpha, AS(eta) = alpha^2",
        "sec:heisenberg-action",
        "consistent",
        || {
            let sy = setting.symbols();
            let v = |n: &str| sy.var(n);
            let xs = [v("alpha")?, v("theta")?, v("eta")?, v("omega")?, v("b1")?];
            let els = model.elements();
            let gens: Vec<GroupElem> = model.generator_names().iter().map(|g| model.generator(g)).collect::<Result<_, _>>()?;
            let left: &[GroupElem] = if els.len() <= 27 { &els } else { &gens };
            let mut pairs = 0;
            for g in left {
                for h in &els {
                    let gh = model.mul(g, h)?;
                    for x in &xs {
                        pairs += 1;
                        let lhs = apply_automorphism(&model, &setting.table, &gh, x)?;
                        let inner = apply_automorphism(&model, &setting.table, h, x)?;
                        let rhs = apply_automorphism(&model, &setting.table, g, &inner)?;
                        if !lhs.sub(&rhs)?.is_zero() {
                            return Ok((format!("composition mismatch for {} on {x}", model.format(&gh)), false));
                        }
                    }
                }
            }
            let t_inv = sy.constant(HahnSeries::t_pow(&ctx, &a.f, Exponent::int(&ctx, -1)));
            let rels = vec![(sy.index("alpha")?, t_inv), (sy.index("theta")?, v("alpha")?), (sy.index("eta")?, v("alpha")?.pow(2)?)];
            for gname in model.generator_names() {
                let g = model.generator(&gname)?;
                for (i, rhs) in &rels {
                    let x = sy.var(&sy.names()[*i].clone())?;
                    let gx = apply_automorphism(&model, &setting.table, &g, &x)?;
                    let as_gx = gx.pow(p)?.sub(&gx)?.reduce_as(&rels)?;
                    let g_rhs = apply_automorphism(&model, &setting.table, &g, rhs)?.reduce_as(&rels)?;
                    if !as_gx.sub(&g_rhs)?.is_zero() {
                        return Ok((format!("{gname} breaks the relation for {x}"), false));
                    }
                }
            }
            Ok((format!("{pairs} compositions agree; relations preserved by all generators"), true))
        },
    );

    let subs = subgroup_enumerate(&model);
    b.run(
        "subgroups",
        "the Heisenberg group of order p^3 has p^2 + 2p + 4 subgroups",
        "sec:heisenberg-ram",
        format!("{}", p * p + 2 * p + 4),
        || {
            let s = subs.clone()?;
            Ok((s.len().to_string(), s.len() == (p * p + 2 * p + 4) as usize))
        },
    );

    b.run(
        "eta-expansion",
        "eta = sum_k k beta^(1/p^k) with beta = t^(-2/p) + 2 t^(-1/p) alpha^(1/p), compared below -1/p^2 - 1/p^6",
        "sec:heisenberg-ram",
        "agree",
        || {
            let bound = Exponent::rational(&ctx, rat(-1, (p as i64).pow(2)) - rat(1, (p as i64).pow(6)));
            let ok = a.eta.agrees_below(&eta_tail(&a.alpha, 1), &bound, cfg.budget)?;
            Ok((if ok { "agree" } else { "differ" }.into(), ok))
        },
    );

    let iota = model.generator("iota")?;
    let want: Vec<Exponent> = (1..=n).map(|k| Exponent::rational(&ctx, rat(1, (p as i64).pow(k as u32 + 1)))).collect();
    b.run(
        "iota-witness-values",
        "v((iota b - b)/b) for b = eta - beta_n, n = 1..levels",
        "sec:heisenberg-ram",
        show(&want),
        || {
            let tests: Vec<Expr> = (1..=n).map(|k| setting.var(&format!("b{k}"))).collect::<Result<_, _>>()?;
            let got = i_sigma_witnesses(&setting, &iota, &tests)?;
            Ok((show(&got), got == want))
        },
    );

    b.run(
        "iota-ideal-maximal",
        "the iota witnesses decrease to 0, so I_<iota> = {v > 0}",
        "sec:heisenberg-ram",
        "v > 0 (exact)",
        || {
            let tests: Vec<Expr> = limit_ns.iter().map(|k| setting.var(&format!("b{k}"))).collect::<Result<_, _>>()?;
            let seg = i_h_from_limit(&setting, &[(iota.clone(), tests)], &Exponent::zero(&ctx), depth, true)?;
            let vals: Vec<Exponent> = seg.evidence.iter().map(|e| e.value.clone()).collect();
            let ok = seg.segment == FinalSegment::AboveOpen(Exponent::zero(&ctx)) && seg.exact;
            Ok((format!("{} from witnesses {}", seg.segment, show(&vals)), ok))
        },
    );

    let l_ext = a.l_ext()?;
    b.run("ram-l", "Ram(L/K) for L = K(alpha) is {v > 0}", "prop:degree-p-ram", "Ram = {v > 0}", || {
        let subs = subgroup_enumerate(&l_ext.group)?;
        let fam = |_: &GroupElem| tails(&l_ext, "alpha", &a.alpha, n);
        let segs = ram_by_limits(&l_ext, &subs, &fam, depth)?;
        ram_summary(&l_ext, &subs, &segs, 1, 1)
    });

    let m0 = a.m0()?;
    b.run("ram-m0", "Ram(M_0/K) for M_0 = K(theta) is {v > 0}, over all p + 1 cyclic subgroups and the full group", "prop:m0-ram", "Ram = {v > 0}", || {
        let subs = subgroup_enumerate(&m0.group)?;
        let fam = |_: &GroupElem| tails(&m0, "theta", &a.theta, n);
        let segs = ram_by_limits(&m0, &subs, &fam, depth)?;
        ram_summary(&m0, &subs, &segs, 0, 0)
    });

    b.run(
        "m0-cyclicity",
        "Gal(M_0/K) consists of theta -> theta + x with x^p - x in F_p; cyclic exactly when some x has additive order p^2",
        "prop:asd-fields",
        "not cyclic for odd p",
        || m0_structure(&a),
    );

    b.run("ram-n", "Ram(N/K) is {v > 0} over all nontrivial subgroups of the Heisenberg group", "prop:n-ram", "Ram = {v > 0}", || {
        let subs = subs.clone()?;
        let fam = |rho: &GroupElem| -> Result<Vec<Expr>, ScenarioError> {
            let (ia, tb, sc) = (rho.0[0], rho.0[1], rho.0[2]);
            if sc != 0 {
                tails(&setting, "alpha", &a.alpha, n)
            } else if tb != 0 {
                tails(&setting, "theta", &a.theta, n)
            } else {
                debug_assert!(ia != 0);
                limit_ns.iter().map(|k| Ok(setting.var(&format!("b{k}"))?)).collect()
            }
        };
        let segs = ram_by_limits(&setting, &subs, &fam, depth)?;
        ram_summary(&setting, &subs, &segs, 0, 0)
    });
    Ok(())
}

/// Additive structure of `{x : x^p - x in F_p}`.
fn m0_structure(a: &Asd) -> Result<(String, bool), ScenarioError> {
    let p = a.p;
    let shifts: Vec<FFElem> = FFElem::all(&a.f).filter(|x| (&x.pow(p as u64) - x).in_prime_field()).collect();
    // every nonzero x has additive order p, so the group is elementary abelian
    let max_order = shifts
        .iter()
        .map(|x| {
            let mut acc = x.clone();
            let mut k = 1u64;
            while !acc.is_zero() {
                acc = &acc + x;
                k += 1;
            }
            k
        })
        .max()
        .unwrap_or(1);
    let cyclic = max_order == shifts.len() as u64;
    Ok((
        format!("{} automorphisms, largest order {max_order}: {}", shifts.len(), if cyclic { "cyclic" } else { "not cyclic" }),
        cyclic == (p == 2),
    ))
}

/// `p = 2`: only `M_0 = K(theta)` with `Gal(M_0/K)` computed from the
/// action, and the cited depth 2.
fn run_p2(cfg: &Config, b: &mut Battery) -> Result<(), ScenarioError> {
    let n = cfg.levels;
    let a = Asd::new(2)?;
    let m0 = a.m0()?;
    let depth = n as u32 - 1;
    b.run(
        "m0-cyclicity",
        "Gal(M_0/K) consists of theta -> theta + x with x^2 - x in F_2; cyclic exactly when some x has additive order 4",
        "prop:asd-fields",
        "cyclic for p = 2",
        || m0_structure(&a),
    );
    let subs = subgroup_enumerate(&m0.group);
    b.run("ram-m0", "Ram(M_0/K) is {v > 0} over all nontrivial subgroups of C_2 x C_2", "rem:depn3famif1", "Ram = {v > 0}", || {
        let subs = subs.clone()?;
        let fam = |_: &GroupElem| tails(&m0, "theta", &a.theta, n);
        let segs = ram_by_limits(&m0, &subs, &fam, depth)?;
        ram_summary(&m0, &subs, &segs, 2, 0)
    });
    b.run(
        "ram-below-depth",
        "#Ram(M_0/K) = 1 < 2 = depth(M_0/K); the depth is cited, not computed",
        "rem:depn3famif1",
        "1 < 2",
        || {
            let subs = subs.clone()?;
            let fam = |_: &GroupElem| tails(&m0, "theta", &a.theta, n);
            let segs = ram_by_limits(&m0, &subs, &fam, depth)?;
            let cmp = ram_set_and_compare(&m0.group, &subs, &segs, 2, 0)?;
            Ok((format!("{} < {} (depth cited)", cmp.count(), cmp.depth), cmp.count() == 1))
        },
    );
    Ok(())
}
