use std::sync::Arc;

use super::{check_sta, StaContext, StaDerivation, StaMeta, StaType};
use crate::derivation::{ax, forall_e, forall_i, loll_e, loll_i, mux, strat, weak, Derivation};
use crate::error::{Error, Result};
use crate::types::{type_eq, Context, Type};

/// `!mu` becomes the singleton set of the translation of `mu`; every other
/// constructor is mapped homomorphically.
pub fn translate_type(t: &StaType) -> Type {
    match t {
        StaType::Var(a) => Type::Var(a.clone()),
        StaType::Arrow(s, r) => Type::Arrow(Arc::new(translate_type(s)), Arc::new(translate_type(r))),
        StaType::Forall(a, b) => Type::Forall(a.clone(), Arc::new(translate_type(b))),
        StaType::Bang(s) => Type::Strat(vec![translate_type(s)].into()),
    }
}

pub fn translate_context(c: &StaContext) -> Context {
    c.iter().map(|(x, t)| (x.clone(), translate_type(t))).collect()
}

/// Rule-by-rule image of a valid derivation; each promotion becomes a
/// one-premise stratification.
pub fn translate_derivation(d: &StaDerivation) -> Result<Derivation> {
    check_sta(d)?;
    go(d)
}

fn go(d: &StaDerivation) -> Result<Derivation> {
    let p = |i: usize| go(&d.premises[i]);
    let out = match &d.meta {
        StaMeta::Ax { var, ty } => ax(var.clone(), translate_type(ty))?,
        StaMeta::W { var, ty } => weak(p(0)?, var.clone(), translate_type(ty))?,
        StaMeta::LollI { var } => loll_i(p(0)?, var.clone())?,
        StaMeta::LollE => loll_e(p(0)?, p(1)?)?,
        StaMeta::ForallI { tyvar } => forall_i(p(0)?, tyvar.clone())?,
        StaMeta::ForallE { inst, .. } => forall_e(p(0)?, translate_type(inst))?,
        StaMeta::M { domain, range } => mux(p(0)?, domain.clone(), range.clone())?,
        StaMeta::Sp => strat(vec![p(0)?])?,
    };
    if !type_eq(out.ty(), &translate_type(&d.ty)) {
        return Err(Error::TypeMismatch(format!("{} does not translate to {}", d.ty, out.ty())));
    }
    Ok(out)
}
