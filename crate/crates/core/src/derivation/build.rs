use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Derivation, Judgment, Meta, Rule};
use crate::error::{Error, Result};
use crate::names::Name;
use crate::term::{rename_free, Term};
use crate::types::{context_union, subst_type, type_eq, union_strat, Context, Type};

fn fail<T>(rule: Rule, reason: &'static str) -> Result<T> {
    Err(Error::Rule { rule, reason })
}

fn node(meta: Meta, ctx: Context, subject: Term, ty: Type, premises: Vec<Derivation>) -> Derivation {
    Derivation {
        meta,
        concl: Judgment { ctx, subject, ty },
        premises: premises.into_iter().map(Arc::new).collect(),
    }
}

/// `x : A |- x : A`
pub fn ax(var: Name, ty: Type) -> Result<Derivation> {
    if !ty.is_linear() {
        return fail(Rule::Ax, "axiom-not-linear");
    }
    let ctx = Context::singleton(var.clone(), ty.clone());
    Ok(node(Meta::Ax { var: var.clone(), ty: ty.clone() }, ctx, Term::Var(var), ty, vec![]))
}

/// Weakening by a linear type.
pub fn weak(d: Derivation, var: Name, ty: Type) -> Result<Derivation> {
    if !ty.is_linear() {
        return fail(Rule::W, "weaken-not-linear");
    }
    if d.ctx().contains(&var) {
        return fail(Rule::W, "weaken-var-present");
    }
    let mut ctx = d.ctx().clone();
    ctx.insert(var.clone(), ty.clone());
    let (subject, t) = (d.subject().clone(), d.ty().clone());
    Ok(node(Meta::W { var, ty }, ctx, subject, t, vec![d]))
}

pub fn loll_i(d: Derivation, var: Name) -> Result<Derivation> {
    let Some(arg) = d.ctx().get(&var).cloned() else {
        return fail(Rule::LollI, "abs-var-missing");
    };
    if !d.ty().is_linear() {
        return fail(Rule::LollI, "abs-body-not-linear");
    }
    let mut ctx = d.ctx().clone();
    ctx.remove(&var);
    let subject = Term::abs(var.clone(), d.subject().clone());
    let ty = Type::arrow(arg, d.ty().clone())?;
    Ok(node(Meta::LollI { var }, ctx, subject, ty, vec![d]))
}

pub fn loll_e(f: Derivation, a: Derivation) -> Result<Derivation> {
    let Type::Arrow(arg, res) = f.ty().clone() else {
        return fail(Rule::LollE, "fun-not-arrow");
    };
    let Some(ctx) = f.ctx().join(a.ctx()) else {
        return fail(Rule::LollE, "contexts-not-disjoint");
    };
    if !type_eq(&arg, a.ty()) {
        return fail(Rule::LollE, "arg-type-mismatch");
    }
    let subject = Term::app(f.subject().clone(), a.subject().clone());
    Ok(node(Meta::LollE, ctx, subject, (*res).clone(), vec![f, a]))
}

/// Multiplexor: contract `domain` into `range`.
pub fn mux(d: Derivation, domain: Vec<Name>, range: Name) -> Result<Derivation> {
    if domain.is_empty() {
        return fail(Rule::M, "mux-empty-domain");
    }
    let distinct: BTreeSet<&Name> = domain.iter().collect();
    if distinct.len() != domain.len() {
        return fail(Rule::M, "mux-duplicate-domain");
    }
    let mut ctx = d.ctx().clone();
    let mut tys = Vec::with_capacity(domain.len());
    for y in &domain {
        match ctx.remove(y) {
            Some(t) => tys.push(t),
            None => return fail(Rule::M, "mux-var-missing"),
        }
    }
    if ctx.contains(&range) {
        return fail(Rule::M, "mux-range-clash");
    }
    ctx.insert(range.clone(), union_strat(&tys));
    let renames: Vec<(Name, Name)> = domain.iter().map(|y| (y.clone(), range.clone())).collect();
    let subject = rename_free(d.subject(), &renames);
    let ty = d.ty().clone();
    Ok(node(Meta::M { domain, range }, ctx, subject, ty, vec![d]))
}

/// Stratification of derivations of one subject over one context domain.
pub fn strat(premises: Vec<Derivation>) -> Result<Derivation> {
    let Some(first) = premises.first() else {
        return fail(Rule::St, "st-no-premises");
    };
    if premises.iter().any(|p| !p.subject().alpha_eq(first.subject())) {
        return fail(Rule::St, "st-subject-mismatch");
    }
    let ctxs: Vec<Context> = premises.iter().map(|p| p.ctx().clone()).collect();
    let Ok(ctx) = context_union(&ctxs) else {
        return fail(Rule::St, "st-domain-mismatch");
    };
    let tys: Vec<Type> = premises.iter().map(|p| p.ty().clone()).collect();
    let subject = first.subject().clone();
    Ok(node(Meta::St, ctx, subject, union_strat(&tys), premises))
}

pub fn forall_i(d: Derivation, tyvar: Name) -> Result<Derivation> {
    if d.ctx().iter().any(|(_, t)| t.free_tyvars().contains(&tyvar)) {
        return fail(Rule::ForallI, "forall-var-free-in-context");
    }
    if !d.ty().is_linear() {
        return fail(Rule::ForallI, "forall-body-not-linear");
    }
    let ty = Type::forall(tyvar.clone(), d.ty().clone())?;
    let (ctx, subject) = (d.ctx().clone(), d.subject().clone());
    Ok(node(Meta::ForallI { tyvar }, ctx, subject, ty, vec![d]))
}

pub fn forall_e(d: Derivation, inst: Type) -> Result<Derivation> {
    let Type::Forall(a, body) = d.ty().clone() else {
        return fail(Rule::ForallE, "forall-elim-not-forall");
    };
    if !inst.is_linear() {
        return fail(Rule::ForallE, "forall-elim-not-linear");
    }
    let ty = subst_type(&body, &a, &inst);
    let (ctx, subject) = (d.ctx().clone(), d.subject().clone());
    Ok(node(Meta::ForallE { tyvar: a, inst }, ctx, subject, ty, vec![d]))
}

/// Apply `meta`'s rule to fresh premises.
pub fn reapply(meta: &Meta, premises: Vec<Derivation>) -> Result<Derivation> {
    let mut it = premises.into_iter();
    let mut one = |rule| it.next().ok_or(Error::Rule { rule, reason: "premise-count" });
    match meta {
        Meta::Ax { var, ty } => ax(var.clone(), ty.clone()),
        Meta::W { var, ty } => weak(one(Rule::W)?, var.clone(), ty.clone()),
        Meta::LollI { var } => loll_i(one(Rule::LollI)?, var.clone()),
        Meta::LollE => {
            let f = one(Rule::LollE)?;
            let a = one(Rule::LollE)?;
            loll_e(f, a)
        }
        Meta::M { domain, range } => mux(one(Rule::M)?, domain.clone(), range.clone()),
        Meta::St => strat(it.collect()),
        Meta::ForallI { tyvar } => forall_i(one(Rule::ForallI)?, tyvar.clone()),
        Meta::ForallE { inst, .. } => forall_e(one(Rule::ForallE)?, inst.clone()),
    }
}

/// One node of a unary chain of renaming or quantifier rules.
#[derive(Clone, Debug)]
pub enum Step {
    W { var: Name, ty: Type },
    M { domain: Vec<Name>, range: Name },
    ForallI { tyvar: Name },
    ForallE { inst: Type },
}

impl Step {
    pub fn of(d: &Derivation) -> Option<Step> {
        Some(match &d.meta {
            Meta::W { var, ty } => Step::W { var: var.clone(), ty: ty.clone() },
            Meta::M { domain, range } => Step::M { domain: domain.clone(), range: range.clone() },
            Meta::ForallI { tyvar } => Step::ForallI { tyvar: tyvar.clone() },
            Meta::ForallE { inst, .. } => Step::ForallE { inst: inst.clone() },
            _ => return None,
        })
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Step::ForallI { .. } | Step::ForallE { .. })
    }

    pub fn rule(&self) -> Rule {
        match self {
            Step::W { .. } => Rule::W,
            Step::M { .. } => Rule::M,
            Step::ForallI { .. } => Rule::ForallI,
            Step::ForallE { .. } => Rule::ForallE,
        }
    }

    pub fn apply(&self, d: Derivation) -> Result<Derivation> {
        match self {
            Step::W { var, ty } => weak(d, var.clone(), ty.clone()),
            Step::M { domain, range } => mux(d, domain.clone(), range.clone()),
            Step::ForallI { tyvar } => forall_i(d, tyvar.clone()),
            Step::ForallE { inst } => forall_e(d, inst.clone()),
        }
    }
}
