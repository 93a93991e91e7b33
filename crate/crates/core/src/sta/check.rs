use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{ctx_equiv, sta_eq, subst_sta, StaContext, StaDerivation, StaMeta, StaRule, StaType};
use crate::names::Name;
use crate::term::{substitute, Term};

/// First failing node in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct StaViolation {
    pub path: Vec<usize>,
    pub rule: StaRule,
    pub reason: &'static str,
    pub detail: String,
}

impl fmt::Display for StaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{} at node [{}] ({}): {}", self.reason, path.join("."), self.rule, self.detail)
    }
}

type NodeResult = Result<(), (&'static str, String)>;

fn ensure(cond: bool, reason: &'static str, detail: impl FnOnce() -> String) -> NodeResult {
    if cond {
        Ok(())
    } else {
        Err((reason, detail()))
    }
}

fn show(c: &StaContext) -> String {
    c.iter().map(|(x, t)| format!("{x}: {t}")).collect::<Vec<_>>().join(", ")
}

pub fn check_sta(d: &StaDerivation) -> Result<(), StaViolation> {
    fn go(d: &StaDerivation, path: &mut Vec<usize>) -> Result<(), StaViolation> {
        if let Err((reason, detail)) = check_node(d) {
            return Err(StaViolation { path: path.clone(), rule: d.rule(), reason, detail });
        }
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            go(p, path)?;
            path.pop();
        }
        Ok(())
    }
    go(d, &mut Vec::new())
}

fn check_node(d: &StaDerivation) -> NodeResult {
    let mut tys: Vec<&StaType> = d.ctx.values().collect();
    tys.push(&d.ty);
    for t in tys {
        ensure(t.is_well_formed(), "ill-formed-type", || t.to_string())?;
    }
    let expected = match d.rule() {
        StaRule::Ax => 0,
        StaRule::LollE => 2,
        _ => 1,
    };
    ensure(d.premises.len() == expected, "premise-count", || {
        format!("expected {expected}, found {}", d.premises.len())
    })?;
    match &d.meta {
        StaMeta::Ax { var, ty } => {
            ensure(ty.is_linear(), "axiom-not-linear", || ty.to_string())?;
            let ok = d.ctx.len() == 1 && d.ctx.get(var).is_some_and(|t| sta_eq(t, ty));
            ensure(ok, "axiom-context", || show(&d.ctx))?;
            ensure(matches!(&d.subject, Term::Var(x) if x == var), "axiom-subject", || d.subject.to_string())?;
            ensure(sta_eq(&d.ty, ty), "axiom-type", || d.ty.to_string())
        }
        StaMeta::W { var, ty } => {
            let p = &d.premises[0];
            ensure(ty.is_linear(), "weaken-not-linear", || ty.to_string())?;
            ensure(!p.ctx.contains_key(var), "weaken-var-present", || var.to_string())?;
            let mut want = p.ctx.clone();
            want.insert(var.clone(), ty.clone());
            ensure(ctx_equiv(&d.ctx, &want), "weaken-context", || show(&d.ctx))?;
            ensure(d.subject.alpha_eq(&p.subject), "weaken-subject", || d.subject.to_string())?;
            ensure(sta_eq(&d.ty, &p.ty), "weaken-type", || d.ty.to_string())
        }
        StaMeta::LollI { var } => {
            let p = &d.premises[0];
            let arg = p.ctx.get(var).ok_or(("abs-var-missing", var.to_string()))?;
            ensure(p.ty.is_linear(), "abs-body-not-linear", || p.ty.to_string())?;
            let mut want = p.ctx.clone();
            want.remove(var);
            ensure(ctx_equiv(&d.ctx, &want), "abs-context", || show(&d.ctx))?;
            let subj = Term::abs(var.clone(), p.subject.clone());
            ensure(d.subject.alpha_eq(&subj), "abs-subject", || d.subject.to_string())?;
            let ok = matches!(&d.ty, StaType::Arrow(s, r) if sta_eq(s, arg) && sta_eq(r, &p.ty));
            ensure(ok, "abs-type", || d.ty.to_string())
        }
        StaMeta::LollE => {
            let (f, a) = (&d.premises[0], &d.premises[1]);
            let StaType::Arrow(arg, res) = &f.ty else {
                return Err(("fun-not-arrow", f.ty.to_string()));
            };
            let shared: Vec<String> = f.ctx.keys().filter(|x| a.ctx.contains_key(*x)).map(|x| x.to_string()).collect();
            ensure(shared.is_empty(), "contexts-not-disjoint", || shared.join(", "))?;
            ensure(sta_eq(arg, &a.ty), "arg-type-mismatch", || format!("{arg} vs {}", a.ty))?;
            let mut want = f.ctx.clone();
            want.extend(a.ctx.iter().map(|(k, v)| (k.clone(), v.clone())));
            ensure(ctx_equiv(&d.ctx, &want), "app-context", || show(&d.ctx))?;
            let subj = Term::app(f.subject.clone(), a.subject.clone());
            ensure(d.subject.alpha_eq(&subj), "app-subject", || d.subject.to_string())?;
            ensure(sta_eq(&d.ty, res), "app-type", || d.ty.to_string())
        }
        StaMeta::ForallI { tyvar } => {
            let p = &d.premises[0];
            let free = p.ctx.values().any(|t| t.free_tyvars().contains(tyvar));
            ensure(!free, "forall-var-free-in-context", || tyvar.to_string())?;
            ensure(p.ty.is_linear(), "forall-body-not-linear", || p.ty.to_string())?;
            ensure(ctx_equiv(&d.ctx, &p.ctx), "forall-intro-context", || show(&d.ctx))?;
            ensure(d.subject.alpha_eq(&p.subject), "forall-intro-subject", || d.subject.to_string())?;
            let want = StaType::Forall(tyvar.clone(), std::sync::Arc::new(p.ty.clone()));
            ensure(sta_eq(&d.ty, &want), "forall-intro-type", || d.ty.to_string())
        }
        StaMeta::ForallE { tyvar, inst } => {
            let p = &d.premises[0];
            let StaType::Forall(a, body) = &p.ty else {
                return Err(("forall-elim-not-forall", p.ty.to_string()));
            };
            ensure(inst.is_linear(), "forall-elim-not-linear", || inst.to_string())?;
            ensure(a == tyvar, "forall-elim-var", || format!("{tyvar} vs bound {a}"))?;
            ensure(ctx_equiv(&d.ctx, &p.ctx), "forall-elim-context", || show(&d.ctx))?;
            ensure(d.subject.alpha_eq(&p.subject), "forall-elim-subject", || d.subject.to_string())?;
            let want = subst_sta(body, a, inst);
            ensure(sta_eq(&d.ty, &want), "forall-elim-type", || d.ty.to_string())
        }
        StaMeta::M { domain, range } => {
            let p = &d.premises[0];
            ensure(!domain.is_empty(), "mux-empty-domain", String::new)?;
            let distinct: BTreeSet<&Name> = domain.iter().collect();
            ensure(distinct.len() == domain.len(), "mux-duplicate-domain", || format!("{domain:?}"))?;
            let missing: Vec<&Name> = domain.iter().filter(|y| !p.ctx.contains_key(*y)).collect();
            ensure(missing.is_empty(), "mux-var-missing", || format!("{missing:?}"))?;
            let mu = &p.ctx[&domain[0]];
            let same = domain.iter().all(|y| sta_eq(&p.ctx[y], mu));
            ensure(same, "mux-type-mismatch", || {
                domain.iter().map(|y| format!("{y}: {}", p.ctx[y])).collect::<Vec<_>>().join(", ")
            })?;
            let mut rest = p.ctx.clone();
            for y in domain {
                rest.remove(y);
            }
            ensure(!rest.contains_key(range), "mux-range-clash", || range.to_string())?;
            let want_ty = StaType::bang(mu.clone());
            ensure(d.ctx.get(range).is_some_and(|t| sta_eq(t, &want_ty)), "mux-type", || {
                format!("expected {range}: {want_ty}")
            })?;
            let mut outer = d.ctx.clone();
            outer.remove(range);
            ensure(ctx_equiv(&outer, &rest), "mux-context", || show(&d.ctx))?;
            let bindings: Vec<(Name, Term)> = domain.iter().map(|y| (y.clone(), Term::Var(range.clone()))).collect();
            let want = substitute(&p.subject, &bindings);
            ensure(d.subject.alpha_eq(&want), "mux-subject", || d.subject.to_string())?;
            ensure(sta_eq(&d.ty, &p.ty), "mux-result-type", || d.ty.to_string())
        }
        StaMeta::Sp => {
            let p = &d.premises[0];
            let want: StaContext = p.ctx.iter().map(|(k, v)| (k.clone(), StaType::bang(v.clone()))).collect();
            ensure(ctx_equiv(&d.ctx, &want), "sp-context", || show(&d.ctx))?;
            ensure(d.subject.alpha_eq(&p.subject), "sp-subject", || d.subject.to_string())?;
            ensure(sta_eq(&d.ty, &StaType::bang(p.ty.clone())), "sp-type", || d.ty.to_string())
        }
    }
}
