//! Inverse substitution. Every occurrence of a substituted variable becomes
//! its own hole; the hole typings are stratified and the hole variables
//! contracted at the end.

use std::collections::{BTreeMap, BTreeSet};

use super::Engine;
use crate::derivation::{
    forall_i, identity, loll_e, loll_i, mux, reapply, rename_vars, strat, strat_padded, weak,
    weaken, Derivation, Meta,
};
use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::term::{substitute, Dir, Term};

/// From `pi` proving `m[N_i/x_i]`, derive typings of the `N_i` and a typing
/// of `m` with each `x_i` assigned the type its derivation gives.
pub fn invert_substitution(
    pi: &Derivation,
    m: &Term,
    bindings: &[(Name, Term)],
    fuel: u64,
) -> Result<(Vec<Derivation>, Derivation)> {
    invert_with(&mut Engine::new(fuel), pi, m, bindings)
}

type Hole = (Vec<Dir>, Name);

pub(crate) fn invert_with(
    engine: &mut Engine,
    pi: &Derivation,
    m: &Term,
    bindings: &[(Name, Term)],
) -> Result<(Vec<Derivation>, Derivation)> {
    if bindings.is_empty() {
        return Ok((Vec::new(), pi.clone()));
    }
    let want = substitute(m, bindings);
    if !pi.subject().alpha_eq(&want) {
        return Err(Error::Decomposition(format!("{} is not {want}", pi.subject())));
    }
    let mut holes: Vec<Hole> = Vec::new();
    let mut owner: Vec<Vec<Name>> = Vec::with_capacity(bindings.len());
    for (x, _) in bindings {
        let zs: Vec<Name> = m
            .occurrences(x)
            .into_iter()
            .map(|p| {
                let z = names::fresh();
                holes.push((p, z.clone()));
                z
            })
            .collect();
        owner.push(zs);
    }
    let (mut tmpl, mut sigmas) = invert_node(pi, &holes)?;
    let mut out = Vec::with_capacity(bindings.len());
    for ((x, n), zs) in bindings.iter().zip(owner) {
        match zs.as_slice() {
            [] => {
                let s = engine.infer_linear(n)?;
                tmpl = weaken(&tmpl, x, s.ty())?;
                out.push(s);
            }
            [z] => {
                tmpl = rename_vars(&tmpl, &BTreeMap::from([(z.clone(), x.clone())]), false)?;
                out.push(sigmas.remove(z).expect("hole typed"));
            }
            _ => {
                let parts: Vec<Derivation> = zs.iter().map(|z| sigmas.remove(z).expect("hole typed")).collect();
                out.push(strat_padded(parts)?);
                tmpl = mux(tmpl, zs.clone(), x.clone())?;
            }
        }
    }
    Ok((out, tmpl))
}

/// The template derivation (holes as variables) and one derivation per hole.
fn invert_node(d: &Derivation, holes: &[Hole]) -> Result<(Derivation, BTreeMap<Name, Derivation>)> {
    if holes.is_empty() {
        return Ok((d.clone(), BTreeMap::new()));
    }
    if let [(p, z)] = holes {
        if p.is_empty() {
            let drop: BTreeSet<Name> = d.ctx().vars().filter(|v| !d.subject().is_free(v)).cloned().collect();
            return Ok((identity(z, d.ty())?, BTreeMap::from([(z.clone(), strip(d, &drop)?)])));
        }
    }
    let tail = |dir: Dir| -> Vec<Hole> {
        holes.iter().filter(|(p, _)| p[0] == dir).map(|(p, z)| (p[1..].to_vec(), z.clone())).collect()
    };
    match &d.meta {
        Meta::Ax { .. } => Err(Error::Decomposition("hole below a variable".into())),
        Meta::W { var, ty } => {
            let (t, s) = invert_node(&d.premises[0], holes)?;
            Ok((weak(t, var.clone(), ty.clone())?, s))
        }
        Meta::LollI { var } => {
            let (t, s) = invert_node(&d.premises[0], &tail(Dir::Body))?;
            let t = if t.ctx().contains(var) {
                t
            } else {
                let ty = d.premises[0].ctx().get(var).expect("bound variable in premise");
                weaken(&t, var, ty)?
            };
            Ok((loll_i(t, var.clone())?, s))
        }
        Meta::LollE => {
            let (tf, mut sf) = invert_node(&d.premises[0], &tail(Dir::Fun))?;
            let (ta, sa) = invert_node(&d.premises[1], &tail(Dir::Arg))?;
            sf.extend(sa);
            Ok((loll_e(tf, ta)?, sf))
        }
        Meta::M { domain, range } => {
            let (t, s) = invert_node(&d.premises[0], holes)?;
            let on = |c: &Derivation| -> Vec<Name> { domain.iter().filter(|y| c.ctx().contains(y)).cloned().collect() };
            let dt = on(&t);
            let t = if dt.is_empty() { t } else { mux(t, dt, range.clone())? };
            let s = s
                .into_iter()
                .map(|(z, sd)| {
                    let dz = on(&sd);
                    let sd = if dz.is_empty() { sd } else { mux(sd, dz, range.clone())? };
                    Ok((z, sd))
                })
                .collect::<Result<_>>()?;
            Ok((t, s))
        }
        Meta::St => {
            let mut ts = Vec::with_capacity(d.premises.len());
            let mut per_hole: BTreeMap<Name, Vec<Derivation>> = BTreeMap::new();
            for p in &d.premises {
                let (t, s) = invert_node(p, holes)?;
                ts.push(t);
                for (z, sd) in s {
                    per_hole.entry(z).or_default().push(sd);
                }
            }
            let s = per_hole
                .into_iter()
                .map(|(z, parts)| Ok((z, strat_padded(parts)?)))
                .collect::<Result<_>>()?;
            Ok((strat_padded(ts)?, s))
        }
        Meta::ForallI { tyvar } => {
            let (t, s) = invert_node(&d.premises[0], holes)?;
            forall_i(t, tyvar.clone())
                .map(|t| (t, s))
                .map_err(|_| Error::Decomposition(format!("type variable {tyvar} escapes through a hole")))
        }
        Meta::ForallE { .. } => {
            let (t, s) = invert_node(&d.premises[0], holes)?;
            Ok((reapply(&d.meta, vec![t])?, s))
        }
    }
}

/// Remove context variables that are not free in the subject.
fn strip(d: &Derivation, drop: &BTreeSet<Name>) -> Result<Derivation> {
    if drop.is_empty() {
        return Ok(d.clone());
    }
    let only = |c: &Derivation| -> BTreeSet<Name> { drop.iter().filter(|v| c.ctx().contains(v)).cloned().collect() };
    match &d.meta {
        Meta::Ax { .. } => Err(Error::Shape("axiom variable is free".into())),
        Meta::W { var, ty } => {
            let p = &d.premises[0];
            if drop.contains(var) {
                strip(p, &only(p))
            } else {
                weak(strip(p, drop)?, var.clone(), ty.clone())
            }
        }
        Meta::M { domain, range } => {
            let p = &d.premises[0];
            if drop.contains(range) {
                let mut inner = only(p);
                inner.extend(domain.iter().cloned());
                strip(p, &inner)
            } else {
                mux(strip(p, drop)?, domain.clone(), range.clone())
            }
        }
        Meta::LollE => {
            let (f, a) = (&d.premises[0], &d.premises[1]);
            loll_e(strip(f, &only(f))?, strip(a, &only(a))?)
        }
        Meta::St => strat(d.premises.iter().map(|p| strip(p, drop)).collect::<Result<_>>()?),
        _ => reapply(&d.meta, vec![strip(&d.premises[0], drop)?]),
    }
}
