use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Derivation, Meta, Rule};
use crate::names::Name;
use crate::term::{substitute, Term};
use crate::types::{context_union, subst_type, type_eq, union_strat, Context, Type};

/// First failing node in preorder, with a machine-readable reason code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Violation {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
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

pub fn check(d: &Derivation) -> Result<(), Violation> {
    fn go(d: &Derivation, path: &mut Vec<usize>) -> Result<(), Violation> {
        if let Err((reason, detail)) = check_node(d) {
            return Err(Violation { path: path.clone(), rule: d.rule(), reason, detail });
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

fn ctx_minus(c: &Context, xs: &[&Name]) -> Context {
    c.iter()
        .filter(|(k, _)| !xs.contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn node_types(d: &Derivation) -> Vec<&Type> {
    let mut ts: Vec<&Type> = d.concl.ctx.iter().map(|(_, t)| t).collect();
    ts.push(&d.concl.ty);
    match &d.meta {
        Meta::Ax { ty, .. } | Meta::W { ty, .. } => ts.push(ty),
        Meta::ForallE { inst, .. } => ts.push(inst),
        _ => {}
    }
    ts
}

fn check_node(d: &Derivation) -> NodeResult {
    for t in node_types(d) {
        ensure(t.is_well_formed(), "ill-formed-type", || t.to_string())?;
    }
    let expected = match d.rule() {
        Rule::Ax => Some(0),
        Rule::LollE => Some(2),
        Rule::St => None,
        _ => Some(1),
    };
    if let Some(n) = expected {
        ensure(d.premises.len() == n, "premise-count", || format!("expected {n}, found {}", d.premises.len()))?;
    }
    let j = &d.concl;
    match &d.meta {
        Meta::Ax { var, ty } => {
            ensure(ty.is_linear(), "axiom-not-linear", || ty.to_string())?;
            ensure(
                j.ctx.len() == 1 && j.ctx.get(var).is_some_and(|t| type_eq(t, ty)),
                "axiom-context",
                || j.ctx.to_string(),
            )?;
            ensure(matches!(&j.subject, Term::Var(x) if x == var), "axiom-subject", || j.subject.to_string())?;
            ensure(type_eq(&j.ty, ty), "axiom-type", || j.ty.to_string())
        }
        Meta::W { var, ty } => {
            let p = &d.premises[0].concl;
            ensure(ty.is_linear(), "weaken-not-linear", || ty.to_string())?;
            ensure(!p.ctx.contains(var), "weaken-var-present", || var.to_string())?;
            let mut want = p.ctx.clone();
            want.insert(var.clone(), ty.clone());
            ensure(j.ctx.equiv(&want), "weaken-context", || j.ctx.to_string())?;
            ensure(j.subject.alpha_eq(&p.subject), "weaken-subject", || j.subject.to_string())?;
            ensure(type_eq(&j.ty, &p.ty), "weaken-type", || j.ty.to_string())
        }
        Meta::LollI { var } => {
            let p = &d.premises[0].concl;
            let arg = p.ctx.get(var).ok_or(("abs-var-missing", var.to_string()))?;
            ensure(p.ty.is_linear(), "abs-body-not-linear", || p.ty.to_string())?;
            ensure(j.ctx.equiv(&ctx_minus(&p.ctx, &[var])), "abs-context", || j.ctx.to_string())?;
            let want = Term::abs(var.clone(), p.subject.clone());
            ensure(j.subject.alpha_eq(&want), "abs-subject", || j.subject.to_string())?;
            let ok = matches!(&j.ty, Type::Arrow(s, r) if type_eq(s, arg) && type_eq(r, &p.ty));
            ensure(ok, "abs-type", || j.ty.to_string())
        }
        Meta::LollE => {
            let (f, a) = (&d.premises[0].concl, &d.premises[1].concl);
            let Type::Arrow(arg, res) = &f.ty else {
                return Err(("fun-not-arrow", f.ty.to_string()));
            };
            let shared: Vec<String> = f.ctx.vars().filter(|x| a.ctx.contains(x)).map(|x| x.to_string()).collect();
            ensure(shared.is_empty(), "contexts-not-disjoint", || shared.join(", "))?;
            ensure(type_eq(arg, &a.ty), "arg-type-mismatch", || format!("{arg} vs {}", a.ty))?;
            let mut want = f.ctx.clone();
            for (x, t) in a.ctx.iter() {
                want.insert(x.clone(), t.clone());
            }
            ensure(j.ctx.equiv(&want), "app-context", || j.ctx.to_string())?;
            let subj = Term::app(f.subject.clone(), a.subject.clone());
            ensure(j.subject.alpha_eq(&subj), "app-subject", || j.subject.to_string())?;
            ensure(type_eq(&j.ty, res), "app-type", || j.ty.to_string())
        }
        Meta::M { domain, range } => {
            let p = &d.premises[0].concl;
            ensure(!domain.is_empty(), "mux-empty-domain", String::new)?;
            let distinct: BTreeSet<&Name> = domain.iter().collect();
            ensure(distinct.len() == domain.len(), "mux-duplicate-domain", || format!("{domain:?}"))?;
            let missing: Vec<&Name> = domain.iter().filter(|y| !p.ctx.contains(y)).collect();
            ensure(missing.is_empty(), "mux-var-missing", || format!("{missing:?}"))?;
            let dom_refs: Vec<&Name> = domain.iter().collect();
            let rest = ctx_minus(&p.ctx, &dom_refs);
            ensure(!rest.contains(range), "mux-range-clash", || range.to_string())?;
            let tys: Vec<Type> = domain.iter().map(|y| p.ctx.get(y).unwrap().clone()).collect();
            let want_ty = union_strat(&tys);
            ensure(j.ctx.get(range).is_some_and(|t| type_eq(t, &want_ty)), "mux-type", || {
                format!("expected {range}: {want_ty}")
            })?;
            ensure(ctx_minus(&j.ctx, &[range]).equiv(&rest), "mux-context", || j.ctx.to_string())?;
            let bindings: Vec<(Name, Term)> = domain.iter().map(|y| (y.clone(), Term::Var(range.clone()))).collect();
            let want = substitute(&p.subject, &bindings);
            ensure(j.subject.alpha_eq(&want), "mux-subject", || j.subject.to_string())?;
            ensure(type_eq(&j.ty, &p.ty), "mux-result-type", || j.ty.to_string())
        }
        Meta::St => {
            let ps: Vec<_> = d.premises.iter().map(|p| &p.concl).collect();
            ensure(!ps.is_empty(), "st-no-premises", String::new)?;
            ensure(
                ps.iter().all(|p| p.subject.alpha_eq(&ps[0].subject)),
                "st-subject-mismatch",
                String::new,
            )?;
            ensure(ps.iter().all(|p| p.ctx.same_domain(&ps[0].ctx)), "st-domain-mismatch", String::new)?;
            let ctxs: Vec<Context> = ps.iter().map(|p| p.ctx.clone()).collect();
            let want = context_union(&ctxs).map_err(|e| ("st-domain-mismatch", e.to_string()))?;
            ensure(j.ctx.equiv(&want), "st-context", || j.ctx.to_string())?;
            ensure(j.subject.alpha_eq(&ps[0].subject), "st-subject", || j.subject.to_string())?;
            let tys: Vec<Type> = ps.iter().map(|p| p.ty.clone()).collect();
            ensure(type_eq(&j.ty, &union_strat(&tys)), "st-type", || j.ty.to_string())
        }
        Meta::ForallI { tyvar } => {
            let p = &d.premises[0].concl;
            let free = p.ctx.iter().any(|(_, t)| t.free_tyvars().contains(tyvar));
            ensure(!free, "forall-var-free-in-context", || tyvar.to_string())?;
            ensure(p.ty.is_linear(), "forall-body-not-linear", || p.ty.to_string())?;
            ensure(j.ctx.equiv(&p.ctx), "forall-intro-context", || j.ctx.to_string())?;
            ensure(j.subject.alpha_eq(&p.subject), "forall-intro-subject", || j.subject.to_string())?;
            let want = Type::Forall(tyvar.clone(), std::sync::Arc::new(p.ty.clone()));
            ensure(type_eq(&j.ty, &want), "forall-intro-type", || j.ty.to_string())
        }
        Meta::ForallE { tyvar, inst } => {
            let p = &d.premises[0].concl;
            let Type::Forall(a, body) = &p.ty else {
                return Err(("forall-elim-not-forall", p.ty.to_string()));
            };
            ensure(inst.is_linear(), "forall-elim-not-linear", || inst.to_string())?;
            ensure(a == tyvar, "forall-elim-var", || format!("{tyvar} vs bound {a}"))?;
            ensure(j.ctx.equiv(&p.ctx), "forall-elim-context", || j.ctx.to_string())?;
            ensure(j.subject.alpha_eq(&p.subject), "forall-elim-subject", || j.subject.to_string())?;
            let want = subst_type(body, a, inst);
            ensure(type_eq(&j.ty, &want), "forall-elim-type", || j.ty.to_string())
        }
    }
}
