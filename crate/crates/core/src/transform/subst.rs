use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;

use crate::derivation::{
    forall_i, freshen_locals, loll_e, loll_i, make_copy, mux, rank, reapply, strat,
    stratified_premises, subst_tyvar_in_derivation, weak, weaken, weight_at, Derivation, Meta,
};
use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::types::{type_eq, Type};

static CALLS: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);
static CHECKING: AtomicBool = AtomicBool::new(cfg!(debug_assertions));

/// Counters of the weighted-substitution check, process wide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubstStats {
    pub calls: u64,
    pub violations: u64,
}

pub fn subst_stats() -> SubstStats {
    SubstStats { calls: CALLS.load(Ordering::Relaxed), violations: VIOLATIONS.load(Ordering::Relaxed) }
}

/// Turn the per-call weight check on or off (on by default in debug builds).
pub fn set_weight_checking(on: bool) {
    CHECKING.store(on, Ordering::Relaxed);
}

/// Substitute derivations `sigmas[i]` for the variables `vars[i]` of `pi`.
pub fn subst_derivation(sigmas: &[Derivation], pi: &Derivation, vars: &[Name]) -> Result<Derivation> {
    if sigmas.len() != vars.len() {
        return Err(Error::Shape("one derivation per variable".into()));
    }
    let distinct: BTreeSet<&Name> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return Err(Error::Shape("substituted variables must be distinct".into()));
    }
    let mut seen: BTreeSet<Name> = pi.ctx().vars().filter(|x| !distinct.contains(x)).cloned().collect();
    for (x, s) in vars.iter().zip(sigmas) {
        let want = pi.ctx().get(x).ok_or_else(|| Error::NotInContext(x.clone()))?;
        if !type_eq(want, s.ty()) {
            return Err(Error::TypeMismatch(format!("{x}: {want} vs {}", s.ty())));
        }
        for y in s.ctx().vars() {
            if !seen.insert(y.clone()) {
                return Err(Error::ContextClash(y.clone()));
            }
        }
    }
    let pi = freshen_locals(pi)?;
    let subs = vars
        .iter()
        .zip(sigmas)
        .map(|(x, s)| Ok((x.clone(), freshen_locals(s)?)))
        .collect::<Result<Vec<_>>>()?;
    subst_rec(&subs, &pi)
}

fn subst_rec(subs: &[(Name, Derivation)], pi: &Derivation) -> Result<Derivation> {
    let out = subst_case(subs, pi)?;
    if CHECKING.load(Ordering::Relaxed) {
        record_inequality(subs, pi, &out);
    }
    Ok(out)
}

fn record_inequality(subs: &[(Name, Derivation)], pi: &Derivation, out: &Derivation) {
    let r0 = subs.iter().map(|(_, s)| rank(s)).fold(rank(pi), u64::max);
    let mut ok = true;
    for r in [r0, r0 + 1, r0 + 3] {
        let mut bound = weight_at(pi, r);
        for (x, s) in subs {
            if pi.subject().is_free(x) {
                bound += weight_at(s, r);
            }
        }
        let lhs: BigUint = weight_at(out, r);
        ok &= lhs <= bound;
    }
    CALLS.fetch_add(1, Ordering::Relaxed);
    if !ok {
        VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    debug_assert!(ok, "weighted substitution inequality violated");
}

fn split_off<'a>(subs: &'a [(Name, Derivation)], x: &Name) -> (Option<&'a Derivation>, Vec<(Name, Derivation)>) {
    let hit = subs.iter().find(|(y, _)| y == x).map(|(_, s)| s);
    let rest = subs.iter().filter(|(y, _)| y != x).cloned().collect();
    (hit, rest)
}

fn subst_case(subs: &[(Name, Derivation)], pi: &Derivation) -> Result<Derivation> {
    if subs.is_empty() {
        return Ok(pi.clone());
    }
    match &pi.meta {
        Meta::Ax { var, .. } => match subs {
            [(x, s)] if x == var => Ok(s.clone()),
            _ => Err(Error::Shape("axiom with several substituted variables".into())),
        },
        Meta::W { var, ty } => {
            let (hit, rest) = split_off(subs, var);
            let p = subst_rec(&rest, &pi.premises[0])?;
            match hit {
                None => weak(p, var.clone(), ty.clone()),
                Some(s) => s.ctx().iter().try_fold(p, |acc, (z, t)| weaken(&acc, z, t)),
            }
        }
        Meta::LollI { var } => loll_i(subst_rec(subs, &pi.premises[0])?, var.clone()),
        Meta::LollE => {
            let (f, a) = (&pi.premises[0], &pi.premises[1]);
            let (sf, sa): (Vec<_>, Vec<_>) = subs.iter().cloned().partition(|(x, _)| f.ctx().contains(x));
            loll_e(subst_rec(&sf, f)?, subst_rec(&sa, a)?)
        }
        Meta::ForallI { tyvar } => {
            let captured = subs.iter().any(|(_, s)| s.ctx().iter().any(|(_, t)| t.free_tyvars().contains(tyvar)));
            if captured {
                let b = names::fresh();
                let p = subst_tyvar_in_derivation(&pi.premises[0], tyvar, &Type::Var(b.clone()))?;
                forall_i(subst_rec(subs, &p)?, b)
            } else {
                forall_i(subst_rec(subs, &pi.premises[0])?, tyvar.clone())
            }
        }
        Meta::ForallE { .. } => reapply(&pi.meta, vec![subst_rec(subs, &pi.premises[0])?]),
        Meta::M { domain, range } => {
            let (hit, rest) = split_off(subs, range);
            match hit {
                None => mux(subst_rec(subs, &pi.premises[0])?, domain.clone(), range.clone()),
                Some(s) => mux_case(s, domain, rest, &pi.premises[0]),
            }
        }
        Meta::St => st_case(subs, pi),
    }
}

/// The substituted variable was produced by a multiplexor: give each
/// contracted variable a copy of the matching component derivation, then
/// contract the copies' free variables back.
fn mux_case(
    sigma: &Derivation,
    domain: &[Name],
    rest: Vec<(Name, Derivation)>,
    premise: &Derivation,
) -> Result<Derivation> {
    let (comps, suffix) = stratified_premises(sigma)?;
    let mut subs = rest;
    let mut maps = Vec::with_capacity(domain.len());
    for y in domain {
        let want = premise.ctx().get(y).ok_or_else(|| Error::NotInContext(y.clone()))?;
        let comp = comps
            .iter()
            .find(|c| type_eq(c.ty(), want))
            .ok_or_else(|| Error::TypeMismatch(format!("no component of type {want}")))?;
        let copy = make_copy(comp)?;
        subs.push((y.clone(), copy.deriv));
        maps.push(copy.map);
    }
    let mut out = subst_rec(&subs, premise)?;
    for z in comps[0].ctx().vars() {
        let copies: Vec<Name> = maps.iter().map(|m| m[z].clone()).collect();
        out = mux(out, copies, z.clone())?;
    }
    suffix.iter().try_fold(out, |acc, s| s.apply(acc))
}

/// Substitution into a stratification: each premise receives the matching
/// component of every substituted derivation.
fn st_case(subs: &[(Name, Derivation)], pi: &Derivation) -> Result<Derivation> {
    let decomposed = subs
        .iter()
        .map(|(x, s)| Ok((x.clone(), stratified_premises(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut premises = Vec::with_capacity(pi.premises.len());
    for p in &pi.premises {
        let mut local = Vec::with_capacity(subs.len());
        for (x, (comps, _)) in &decomposed {
            let want = p.ctx().get(x).ok_or_else(|| Error::NotInContext(x.clone()))?;
            let comp = comps
                .iter()
                .find(|c| type_eq(c.ty(), want))
                .ok_or_else(|| Error::TypeMismatch(format!("no component of type {want}")))?;
            local.push((x.clone(), comp.clone()));
        }
        premises.push(subst_rec(&local, p)?);
    }
    let mut out = strat(premises)?;
    for (_, (_, suffix)) in &decomposed {
        out = suffix.iter().try_fold(out, |acc, s| s.apply(acc))?;
    }
    Ok(out)
}
