use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::build::{ax, forall_e, forall_i, loll_e, loll_i, mux, reapply, strat, weak, Step};
use super::{Derivation, Meta};
use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::types::{canonicalize, linear_components, subst_type, type_eq, Type};

/// Rename free variables of the conclusion through the whole tree. Local
/// variables (abstraction and multiplexor binders) that would collide with a
/// target are renamed too; with `fresh_locals` every local gets a fresh name.
pub fn rename_vars(d: &Derivation, map: &BTreeMap<Name, Name>, fresh_locals: bool) -> Result<Derivation> {
    let mut targets = BTreeSet::new();
    for (x, y) in map {
        if !d.ctx().contains(x) {
            return Err(Error::NotInContext(x.clone()));
        }
        if !targets.insert(y.clone()) {
            return Err(Error::ContextClash(y.clone()));
        }
    }
    for x in d.ctx().vars() {
        if !map.contains_key(x) && targets.contains(x) {
            return Err(Error::ContextClash(x.clone()));
        }
    }
    let map: HashMap<Name, Name> = map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    rename_rec(d, &map, fresh_locals)
}

fn restrict(map: &HashMap<Name, Name>, d: &Derivation) -> HashMap<Name, Name> {
    map.iter()
        .filter(|(k, _)| d.ctx().contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn rename_rec(d: &Derivation, map: &HashMap<Name, Name>, fresh: bool) -> Result<Derivation> {
    let look = |v: &Name| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match &d.meta {
        Meta::Ax { var, ty } => ax(look(var), ty.clone()),
        Meta::W { var, ty } => {
            let p = &d.premises[0];
            let inner = restrict(map, p);
            weak(rename_rec(p, &inner, fresh)?, look(var), ty.clone())
        }
        Meta::LollI { var } => {
            let taken: BTreeSet<Name> = d.ctx().vars().map(look).collect();
            let v2 = if fresh || taken.contains(var) { names::fresh() } else { var.clone() };
            let mut inner = map.clone();
            inner.insert(var.clone(), v2.clone());
            loll_i(rename_rec(&d.premises[0], &inner, fresh)?, v2)
        }
        Meta::LollE => {
            let (f, a) = (&d.premises[0], &d.premises[1]);
            let f2 = rename_rec(f, &restrict(map, f), fresh)?;
            let a2 = rename_rec(a, &restrict(map, a), fresh)?;
            loll_e(f2, a2)
        }
        Meta::M { domain, range } => {
            let taken: BTreeSet<Name> = d.ctx().vars().filter(|v| *v != range).map(look).collect();
            let mut inner: HashMap<Name, Name> =
                map.iter().filter(|(k, _)| *k != range).map(|(k, v)| (k.clone(), v.clone())).collect();
            let mut dom2 = Vec::with_capacity(domain.len());
            for y in domain {
                let y2 = if fresh || taken.contains(y) { names::fresh() } else { y.clone() };
                inner.insert(y.clone(), y2.clone());
                dom2.push(y2);
            }
            mux(rename_rec(&d.premises[0], &inner, fresh)?, dom2, look(range))
        }
        Meta::St => {
            let ps = d.premises.iter().map(|p| rename_rec(p, map, fresh)).collect::<Result<Vec<_>>>()?;
            strat(ps)
        }
        Meta::ForallI { tyvar } => forall_i(rename_rec(&d.premises[0], map, fresh)?, tyvar.clone()),
        Meta::ForallE { inst, .. } => forall_e(rename_rec(&d.premises[0], map, fresh)?, inst.clone()),
    }
}

/// Give every local variable a fresh name; the conclusion is unchanged.
pub fn freshen_locals(d: &Derivation) -> Result<Derivation> {
    rename_rec(d, &HashMap::new(), true)
}

/// A copy together with the renaming of its free variables.
#[derive(Clone, Debug)]
pub struct Copy {
    pub deriv: Derivation,
    pub map: BTreeMap<Name, Name>,
}

/// Rename every variable of the derivation to a fresh name.
pub fn make_copy(d: &Derivation) -> Result<Copy> {
    let map: BTreeMap<Name, Name> = d.ctx().vars().map(|x| (x.clone(), names::fresh())).collect();
    let deriv = rename_vars(d, &map, true)?;
    Ok(Copy { deriv, map })
}

/// Contract each group of free variables into its target.
pub fn make_instance(d: &Derivation, grouping: &[(Vec<Name>, Name)]) -> Result<Derivation> {
    let mut seen = BTreeSet::new();
    for (group, target) in grouping {
        for x in group {
            if !d.ctx().contains(x) {
                return Err(Error::NotInContext(x.clone()));
            }
            if !seen.insert(x.clone()) {
                return Err(Error::ContextClash(x.clone()));
            }
        }
        let clash = d.ctx().contains(target) || grouping.iter().filter(|(_, t)| t == target).count() > 1;
        if clash {
            return Err(Error::AlreadyInContext(target.clone()));
        }
    }
    grouping
        .iter()
        .try_fold(d.clone(), |acc, (group, target)| mux(acc, group.clone(), target.clone()))
}

/// Derived weakening by an arbitrary stratified type: weaken by each
/// linear component, then rebuild the set structure with multiplexors.
pub fn weaken(d: &Derivation, x: &Name, t: &Type) -> Result<Derivation> {
    if d.ctx().contains(x) {
        return Err(Error::AlreadyInContext(x.clone()));
    }
    fn intro(d: Derivation, t: &Type, target: Option<&Name>) -> Result<(Derivation, Name)> {
        match t {
            Type::Strat(cs) => {
                let mut d = d;
                let mut vars = Vec::with_capacity(cs.len());
                for c in cs.iter() {
                    let (d2, y) = intro(d, c, None)?;
                    d = d2;
                    vars.push(y);
                }
                let z = target.cloned().unwrap_or_else(names::fresh);
                Ok((mux(d, vars, z.clone())?, z))
            }
            lin => {
                let y = target.cloned().unwrap_or_else(names::fresh);
                Ok((weak(d, y.clone(), lin.clone())?, y))
            }
        }
    }
    Ok(intro(d.clone(), &canonicalize(t), Some(x))?.0)
}

/// Unary renaming and quantifier nodes at the root, in application order
/// (first element applied first), and the node below them.
pub fn peel_chain(d: &Derivation) -> (Derivation, Vec<Step>) {
    let mut steps = Vec::new();
    let mut cur = d;
    while let Some(s) = Step::of(cur) {
        steps.push(s);
        cur = &cur.premises[0];
    }
    steps.reverse();
    (cur.clone(), steps)
}

/// Premises of the stratification node under a trailing chain of renaming
/// nodes, and that chain in application order.
pub fn stratified_premises(d: &Derivation) -> Result<(Vec<Derivation>, Vec<Step>)> {
    if d.ty().is_linear() {
        return Err(Error::NotStratified);
    }
    let mut steps = Vec::new();
    let mut cur = d;
    loop {
        match &cur.meta {
            Meta::St => break,
            Meta::W { .. } | Meta::M { .. } => {
                steps.push(Step::of(cur).unwrap());
                cur = &cur.premises[0];
            }
            _ => return Err(Error::NotStratified),
        }
    }
    steps.reverse();
    Ok((cur.premises.iter().map(|p| (**p).clone()).collect(), steps))
}

pub fn recompose(premises: Vec<Derivation>, steps: &[Step]) -> Result<Derivation> {
    steps.iter().try_fold(strat(premises)?, |d, s| s.apply(d))
}

/// Derivation of the `i`-th (0-based) linear component of the conclusion type.
pub fn linear_component_typing(d: &Derivation, i: usize) -> Result<Derivation> {
    if d.ty().is_linear() {
        return if i == 0 { Ok(d.clone()) } else { Err(Error::IndexOutOfRange(i)) };
    }
    let comps = canonicalize(d.ty()).components();
    let mut local = i;
    let mut chosen = None;
    for c in &comps {
        let n = linear_components(c).len();
        if local < n {
            chosen = Some(c.clone());
            break;
        }
        local -= n;
    }
    let comp = chosen.ok_or(Error::IndexOutOfRange(i))?;
    let (ps, steps) = stratified_premises(d)?;
    let p = ps
        .iter()
        .find(|p| type_eq(p.ty(), &comp))
        .ok_or_else(|| Error::Shape("no premise for component".into()))?;
    let inner = linear_component_typing(p, local)?;
    steps.iter().try_fold(inner, |acc, s| s.apply(acc))
}

/// Axiom-level variables that `x` was contracted from.
pub fn ancestors(x: &Name, d: &Derivation) -> Result<BTreeSet<Name>> {
    if !d.ctx().contains(x) {
        return Err(Error::NotInContext(x.clone()));
    }
    fn go(x: &Name, d: &Derivation) -> BTreeSet<Name> {
        match &d.meta {
            Meta::Ax { .. } => BTreeSet::from([x.clone()]),
            Meta::W { var, .. } if var == x => BTreeSet::from([x.clone()]),
            Meta::M { domain, range } if range == x => {
                domain.iter().flat_map(|y| go(y, &d.premises[0])).collect()
            }
            Meta::LollE => {
                let side = if d.premises[0].ctx().contains(x) { 0 } else { 1 };
                go(x, &d.premises[side])
            }
            Meta::St => d.premises.iter().flat_map(|p| go(x, p)).collect(),
            _ => go(x, &d.premises[0]),
        }
    }
    Ok(go(x, d))
}

fn all_vars(d: &Derivation, out: &mut BTreeSet<Name>) {
    out.extend(d.ctx().vars().cloned());
    d.premises.iter().for_each(|p| all_vars(p, out));
}

/// Every application node's premises mention disjoint variable sets.
pub fn is_clean(d: &Derivation) -> bool {
    if let Meta::LollE = d.meta {
        let (mut l, mut r) = (BTreeSet::new(), BTreeSet::new());
        all_vars(&d.premises[0], &mut l);
        all_vars(&d.premises[1], &mut r);
        if !l.is_disjoint(&r) {
            return false;
        }
    }
    d.premises.iter().all(|p| is_clean(p))
}

/// Clean form. Application nodes whose premises share free variables are
/// repaired with copies and a multiplexor; local names are then freshened.
pub fn make_clean(d: &Derivation) -> Result<Derivation> {
    fn go(d: &Derivation) -> Result<Derivation> {
        let ps = d.premises.iter().map(|p| go(p)).collect::<Result<Vec<_>>>()?;
        if !matches!(d.meta, Meta::LollE) {
            return reapply(&d.meta, ps);
        }
        let (f, a) = (&ps[0], &ps[1]);
        let shared: Vec<Name> = f.ctx().vars().filter(|x| a.ctx().contains(x)).cloned().collect();
        if shared.is_empty() {
            return loll_e(f.clone(), a.clone());
        }
        let lmap: BTreeMap<Name, Name> = shared.iter().map(|x| (x.clone(), names::fresh())).collect();
        let rmap: BTreeMap<Name, Name> = shared.iter().map(|x| (x.clone(), names::fresh())).collect();
        let mut e = loll_e(rename_vars(f, &lmap, false)?, rename_vars(a, &rmap, false)?)?;
        for x in &shared {
            e = mux(e, vec![lmap[x].clone(), rmap[x].clone()], x.clone())?;
        }
        Ok(e)
    }
    if is_clean(d) {
        return Ok(d.clone());
    }
    freshen_locals(&go(d)?)
}

/// `z : t |- z : t`, stratified with nested stratification nodes when `t` is a set.
pub fn identity(z: &Name, t: &Type) -> Result<Derivation> {
    match t {
        Type::Strat(cs) => strat(cs.iter().map(|c| identity(z, c)).collect::<Result<Vec<_>>>()?),
        lin => ax(z.clone(), lin.clone()),
    }
}

/// Stratify after padding every premise to the union of their domains.
pub fn strat_padded(ds: Vec<Derivation>) -> Result<Derivation> {
    let mut domain: BTreeMap<Name, Type> = BTreeMap::new();
    for d in &ds {
        for (x, t) in d.ctx().iter() {
            domain.entry(x.clone()).or_insert_with(|| t.clone());
        }
    }
    let padded = ds
        .into_iter()
        .map(|d| {
            domain
                .iter()
                .filter(|(x, _)| !d.ctx().contains(x))
                .try_fold(d.clone(), |acc, (x, t)| weaken(&acc, x, t))
        })
        .collect::<Result<Vec<_>>>()?;
    strat(padded)
}

/// Replace the free type variable `a` by the linear type `by` throughout.
pub fn subst_tyvar_in_derivation(d: &Derivation, a: &Name, by: &Type) -> Result<Derivation> {
    if !by.is_linear() {
        return Err(crate::types::TypeError::NotLinear(by.to_string()).into());
    }
    let fv = by.free_tyvars();
    fn go(d: &Derivation, a: &Name, by: &Type, fv: &BTreeSet<Name>) -> Result<Derivation> {
        let sub = |t: &Type| subst_type(t, a, by);
        match &d.meta {
            Meta::Ax { var, ty } => ax(var.clone(), sub(ty)),
            Meta::W { var, ty } => weak(go(&d.premises[0], a, by, fv)?, var.clone(), sub(ty)),
            Meta::ForallI { tyvar } if tyvar == a => Ok(d.clone()),
            Meta::ForallI { tyvar } if fv.contains(tyvar) => {
                let b2 = names::fresh();
                let renamed = go(&d.premises[0], tyvar, &Type::Var(b2.clone()), &BTreeSet::new())?;
                forall_i(go(&renamed, a, by, fv)?, b2)
            }
            Meta::ForallE { inst, .. } => forall_e(go(&d.premises[0], a, by, fv)?, sub(inst)),
            meta => {
                let ps = d.premises.iter().map(|p| go(p, a, by, fv)).collect::<Result<Vec<_>>>()?;
                reapply(meta, ps)
            }
        }
    }
    go(d, a, by, &fv)
}
