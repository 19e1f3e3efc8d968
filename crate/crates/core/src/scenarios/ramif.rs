//! Ramification ideals of `L = K(alpha, beta)` over the field of the
//! monster scenario, with generator `theta = alpha + u beta`.

use crate::cuts::{cut_from_witnesses, Cut, FinalSegment, Side};
use crate::coefficients::FFElem;
use crate::exponents::Exponent;
use crate::ramification::{
    closure, cyclic_subgroups_of, hc_check, i_h_formula, ram_set_and_compare, subgroup_enumerate, union_segments, ActionTable, Expr, GaloisSetting,
    GroupElem, GroupModel, RamSegment, Subgroup, SymbolSet,
};
use crate::series::HahnSeries;

use super::monster::{depth_evidence, Monster};
use super::util::{exp, pk, show};
use super::{Battery, Config, ScenarioError, SeriesEnv};

struct Ramif {
    m: Monster,
    setting: GaloisSetting,
    theta: Expr,
    u: Expr,
    subs: Vec<Subgroup>,
    levels: usize,
}

impl Ramif {
    fn new(p: u32, levels: usize) -> Result<Self, ScenarioError> {
        let m = Monster::new(p, levels + 2, 2)?;
        let model = GroupModel::ElementaryAbelian { n: 2, p };
        let sy = SymbolSet::new(&m.ctx, &m.f, &["alpha", "beta"]);
        let mut table = ActionTable::new(&model, &sy);
        table.set("sigma1", "alpha", sy.var("alpha")?.add(&sy.int(1))?)?;
        table.set("sigma2", "beta", sy.var("beta")?.add(&sy.int(1))?)?;
        let u = sy.ff(FFElem::generator(&m.f));
        let theta = sy.var("alpha")?.add(&u.mul(&sy.var("beta")?)?)?;
        let subs = subgroup_enumerate(&model)?;
        let values = vec![m.alpha.solution.clone(), m.beta.solution.clone()];
        Ok(Ramif {
            m,
            setting: GaloisSetting { group: model, table, values },
            theta,
            u,
            subs,
            levels,
        })
    }

    fn sy(&self) -> &SymbolSet {
        self.setting.symbols()
    }

    fn constant(&self, s: HahnSeries) -> Expr {
        self.sy().constant(s)
    }

    fn subgroup_of(&self, g: &GroupElem) -> Result<Subgroup, ScenarioError> {
        let set: Vec<GroupElem> = closure(&self.setting.group, std::slice::from_ref(g))?.into_iter().collect();
        Ok(self.subs.iter().find(|s| s.elements == set).expect("enumeration is complete").clone())
    }

    /// Approximants in `K_H` for `H = <sigma1 sigma2^j>`, fixed field
    /// `K(beta - j alpha)`: `u (beta - j alpha) + (1 + u j) c_l`.
    fn mixed_approximants(&self, j: u32) -> Result<Vec<Expr>, ScenarioError> {
        let sy = self.sy();
        let jj = sy.int(j as i64);
        let fixed = sy.var("beta")?.sub(&jj.mul(&sy.var("alpha")?)?)?;
        let lead = self.u.mul(&fixed)?;
        let coef = sy.int(1).add(&self.u.mul(&jj)?)?;
        (1..=self.levels).map(|l| Ok(lead.add(&coef.mul(&self.constant(self.m.c(l)?))?)?)).collect()
    }

    /// `H = <sigma2>` fixes `alpha`: approximants `alpha + u t^-1 d_l`.
    fn beta_approximants(&self) -> Result<Vec<Expr>, ScenarioError> {
        let t_inv = Exponent::int(&self.m.ctx, -1);
        let alpha = self.sy().var("alpha")?;
        (1..=self.levels).map(|l| Ok(alpha.add(&self.u.mul(&self.constant(self.m.d(l)?.shift(&t_inv)))?)?)).collect()
    }

    fn cut(&self, apps: &[Expr], hint: i64) -> Result<Cut, ScenarioError> {
        let vals: Vec<Exponent> = apps.iter().map(|a| self.setting.val(&self.theta.sub(a)?)).collect::<Result<_, _>>()?;
        let hint = Exponent::int(&self.m.ctx, hint);
        Ok(cut_from_witnesses(&vals, Some(&hint), false, self.levels as u32 - 1, self.m.p)?)
    }

    fn segment(&self, h: &Subgroup, apps: &[Expr], hint: i64) -> Result<(Cut, RamSegment), ScenarioError> {
        let d1 = self.cut(apps, hint)?;
        let hc = hc_check(&self.setting, h, &self.theta, apps)?;
        let seg = i_h_formula(&self.setting, h, &self.theta, &d1, true, apps, Some(&hc))?;
        Ok((d1, seg))
    }
}

pub(super) fn env(cfg: &Config) -> Result<SeriesEnv, ScenarioError> {
    let r = Ramif::new(cfg.prime, cfg.levels)?;
    let mut env = super::monster::env(cfg)?;
    env.define("theta", r.setting.evaluate(&r.theta));
    Ok(env)
}

fn seg_values(seg: &RamSegment) -> Vec<Exponent> {
    seg.evidence.iter().map(|e| e.value.clone()).collect()
}

pub(super) fn run(cfg: &Config, b: &mut Battery) -> Result<(), ScenarioError> {
    let (p, n) = (cfg.prime, cfg.levels);
    let r = Ramif::new(p, n)?;
    let ctx = r.m.ctx.clone();
    let zero = Exponent::zero(&ctx);
    let one = Exponent::int(&ctx, 1);

    b.run(
        "subgroups",
        "Gal(L/K) = C_p x C_p has p + 3 subgroups, p + 1 of them cyclic of order p",
        "prop:ramificiudle",
        format!("{} subgroups, {} of order {p}", p + 3, p + 1),
        || {
            let cyclic = r.subs.iter().filter(|s| s.order() == p as usize).count();
            Ok((format!("{} subgroups, {cyclic} of order {p}", r.subs.len()), r.subs.len() == p as usize + 3 && cyclic == p as usize + 1))
        },
    );

    let g1 = r.setting.group.generator("sigma1")?;
    let g2 = r.setting.group.generator("sigma2")?;
    let h1 = r.subgroup_of(&g1)?;
    let h2 = r.subgroup_of(&g2)?;
    let s1 = r.mixed_approximants(0).and_then(|a| Ok((r.segment(&h1, &a, 0)?, a)));
    let s2 = r.beta_approximants().and_then(|a| Ok((r.segment(&h2, &a, -1)?, a)));

    b.run(
        "d1-alpha-over-k-beta",
        "d_1(theta, K(beta)) = d_1(alpha, K(beta)) = 0^- from approximants u beta + c_l",
        "rem:examplediferamificidela",
        "0^-",
        || {
            let ((d1, _), _) = s1.clone()?;
            Ok((d1.to_string(), d1 == Cut::Principal(zero.clone(), Side::Minus)))
        },
    );
    b.run(
        "d1-beta-over-k-alpha",
        "d_1(theta, K(alpha)) = d_1(u beta, K(alpha)) = (-1)^- from approximants alpha + u t^-1 d_l",
        "rem:examplediferamificidela",
        "-1^-",
        || {
            let ((d1, _), _) = s2.clone()?;
            Ok((d1.to_string(), d1 == Cut::Principal(Exponent::int(&ctx, -1), Side::Minus)))
        },
    );
    b.run(
        "hc-condition",
        "v((sigma theta - theta)/(theta - a)) > 0 on all sampled a in K_H, for H_1 and H_2",
        "def:hc",
        "holds strictly for H_1 and H_2",
        || {
            let (_, a1) = s1.clone()?;
            let (_, a2) = s2.clone()?;
            let r1 = hc_check(&r.setting, &h1, &r.theta, &a1)?;
            let r2 = hc_check(&r.setting, &h2, &r.theta, &a2)?;
            Ok((format!("H_1: passed {}, strict {}; H_2: passed {}, strict {}", r1.passed, r1.strict, r2.passed, r2.strict), r1.strict && r2.strict))
        },
    );

    let want1: Vec<Exponent> = (1..=n).map(|l| exp(&ctx, &format!("pi/{}", pk(p, l + 1)))).collect::<Result<_, _>>()?;
    b.run(
        "i-h1",
        "I_{H_1} for H_1 = <sigma1> is the maximal ideal {v > 0}; witnesses v((sigma1 b - b)/b) = pi/p^(l+1)",
        "prop:ramificiudle",
        format!("v > 0 (exact); witnesses {}", show(&want1)),
        || {
            let ((_, seg), _) = s1.clone()?;
            let vals = seg_values(&seg);
            let ok = seg.segment == FinalSegment::AboveOpen(zero.clone()) && seg.exact && seg.sound && vals == want1;
            Ok((format!("{} ({}); witnesses {}", seg.segment, if seg.exact { "exact" } else { "lower bound" }, show(&vals)), ok))
        },
    );
    let want2: Vec<Exponent> = (1..=n).map(|l| exp(&ctx, &format!("1+1/r{}", l + 1))).collect::<Result<_, _>>()?;
    b.run(
        "i-h2",
        "I_{H_2} for H_2 = <sigma2> is {v > 1}; formula-derived, cross-checked by witnesses 1 + 1/r_(l+1)",
        "cor:depth-below-ram",
        format!("v > 1 (exact); witnesses {}", show(&want2)),
        || {
            let ((_, seg), _) = s2.clone()?;
            let vals = seg_values(&seg);
            let ok = seg.segment == FinalSegment::AboveOpen(one.clone()) && seg.exact && seg.sound && vals == want2;
            Ok((format!("{} ({}); witnesses {}", seg.segment, if seg.exact { "exact" } else { "lower bound" }, show(&vals)), ok))
        },
    );

    // every cyclic subgroup other than <sigma2> is <sigma1 sigma2^j>
    let cyclic = (|| -> Result<Vec<(Subgroup, RamSegment)>, ScenarioError> {
        let mut out = Vec::new();
        for j in 0..p {
            let g = r.setting.group.word(&[("sigma1", 1), ("sigma2", j as i64)])?;
            let h = r.subgroup_of(&g)?;
            let apps = r.mixed_approximants(j)?;
            out.push((h.clone(), r.segment(&h, &apps, 0)?.1));
        }
        let ((_, seg2), _) = s2.clone()?;
        out.push((h2.clone(), seg2));
        Ok(out)
    })();
    b.run(
        "i-h-mixed",
        "I_H = {v > 0} for H = <sigma1 sigma2^j>, j = 1..p-1, with K_H = K(beta - j alpha)",
        "prop:ramificiudle",
        "v > 0 for all p - 1 subgroups",
        || {
            let cyc = cyclic.clone()?;
            let segs: Vec<String> = cyc[1..p as usize].iter().map(|(_, s)| s.segment.to_string()).collect();
            let ok = cyc[1..p as usize].iter().all(|(_, s)| s.segment == FinalSegment::AboveOpen(zero.clone()) && s.exact);
            Ok((format!("[{}]", segs.join(", ")), ok))
        },
    );

    let all_segments = (|| -> Result<Vec<Option<RamSegment>>, ScenarioError> {
        let cyc = cyclic.clone()?;
        let mut segs = Vec::with_capacity(r.subs.len());
        for s in &r.subs {
            if s.is_trivial() {
                segs.push(None);
                continue;
            }
            let parts: Vec<RamSegment> = cyclic_subgroups_of(&r.setting.group, s)?
                .iter()
                .map(|c| cyc.iter().find(|(h, _)| h == c).map(|(_, seg)| seg.clone()).expect("all cyclic subgroups covered"))
                .collect();
            segs.push(Some(if parts.len() == 1 { parts[0].clone() } else { union_segments(&parts)? }));
        }
        Ok(segs)
    })();
    b.run(
        "i-full-group",
        "I_G for the full group is the union over its cyclic subgroups: {v > 0}",
        "prop:ramificiudle",
        "v > 0",
        || {
            let segs = all_segments.clone()?;
            let full = segs.last().cloned().flatten().expect("full group is nontrivial");
            Ok((full.segment.to_string(), full.segment == FinalSegment::AboveOpen(zero.clone())))
        },
    );

    b.run(
        "ram-vs-depth",
        "#Ram(E) = 2 > 1 = depth(E); both ideals lie inside the maximal ideal",
        "cor:depth-below-ram",
        "Ram = {v > 0, v > 1}; 2 > 1",
        || {
            let segs = all_segments.clone()?;
            let depth = depth_evidence(&r.m, n)?;
            let cmp = ram_set_and_compare(&r.setting.group, &r.subs, &segs, depth.depth, 2)?;
            let names: Vec<String> = cmp.ideals.iter().map(|s| s.to_string()).collect();
            let want = [FinalSegment::AboveOpen(zero.clone()), FinalSegment::AboveOpen(one.clone())];
            let same = cmp.ideals.len() == 2 && want.iter().all(|w| cmp.ideals.contains(w));
            let inside = cmp.inside_maximal.iter().all(|x| *x == Some(true));
            let ok = same && inside && cmp.count() > cmp.depth && depth.all_passed() && depth.depth == 1;
            Ok((format!("Ram = {{{}}}; {} > {} (inside maximal: {inside})", names.join(", "), cmp.count(), cmp.depth), ok))
        },
    );
    Ok(())
}
