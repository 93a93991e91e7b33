//! Typing of strongly normalizing terms, following the inductive
//! characterization of SN: head variable, abstraction, head redex.

mod invert;

use std::collections::BTreeMap;

use crate::derivation::{
    ax, linear_component_typing, loll_e, loll_i, make_copy, mux, rename_vars, strat_padded,
    stratified_premises, weaken, Derivation,
};
use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::term::{rename_free, substitute, PathIndex, Term};
use crate::transform::subst_derivation;
use crate::types::Type;

pub use invert::invert_substitution;

pub const DEFAULT_INFER_FUEL: u64 = 100_000;

/// Derive a typing for `m`. Fails with [`Error::Fuel`] when the budget runs
/// out and with [`Error::Divergent`] when the search meets a term that
/// reduces to a term containing itself.
pub fn infer_sn(m: &Term, fuel: u64) -> Result<Derivation> {
    Engine::new(fuel).infer(m)
}

/// As [`infer_sn`], with a linear conclusion type.
pub fn infer_linear(m: &Term, fuel: u64) -> Result<Derivation> {
    Engine::new(fuel).infer_linear(m)
}

/// From `theta` proving `m[n/x]`, derive a typing of `(\x. m) n` with the
/// same type.
pub fn subject_expand(theta: &Derivation, m: &Term, x: &Name, n: &Term, fuel: u64) -> Result<Derivation> {
    Engine::new(fuel).expand(theta, m, x, n)
}

pub(crate) struct Engine {
    fuel: u64,
    path: PathIndex,
}

impl Engine {
    pub(crate) fn new(fuel: u64) -> Self {
        Engine { fuel, path: PathIndex::default() }
    }

    fn spend(&mut self) -> Result<()> {
        if self.fuel == 0 {
            return Err(Error::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn infer(&mut self, m: &Term) -> Result<Derivation> {
        self.spend()?;
        let db = m.to_db();
        if self.path.embeds_ancestor(&db) {
            return Err(Error::Divergent);
        }
        self.path.push(&db);
        let out = self.infer_spine(m);
        self.path.pop(&db);
        out
    }

    pub(crate) fn infer_linear(&mut self, m: &Term) -> Result<Derivation> {
        let d = self.infer(m)?;
        if d.ty().is_linear() {
            Ok(d)
        } else {
            linear_component_typing(&d, 0)
        }
    }

    fn infer_spine(&mut self, m: &Term) -> Result<Derivation> {
        let (head, args) = m.spine();
        match head {
            Term::Var(x) => self.head_variable(x, &args),
            Term::Abs(x, body) if args.is_empty() => {
                let d = self.infer(body)?;
                let d = if d.ctx().contains(x) { d } else { weaken(&d, x, &fresh_tyvar())? };
                loll_i(d, x.clone())
            }
            Term::Abs(x, body) => {
                let n = args[0];
                let rest: Vec<Term> = args[1..].iter().map(|t| (*t).clone()).collect();
                let contracted = substitute(body, &[(x.clone(), n.clone())]);
                let reduct = Term::apps(contracted.clone(), rest.iter().cloned());
                let dr = self.infer(&reduct)?;
                if rest.is_empty() {
                    return self.expand(&dr, body, x, n);
                }
                // type the contracted head as a hole of the reduct, expand
                // it, and plug the expansion back in
                let h = names::fresh();
                let template = Term::apps(Term::Var(h.clone()), rest);
                let (mut sigmas, tmpl) =
                    invert::invert_with(self, &dr, &template, &[(h.clone(), contracted)])?;
                let head_d = self.expand(&sigmas.remove(0), body, x, n)?;
                let copy = make_copy(&head_d)?;
                let joined = subst_derivation(&[copy.deriv], &tmpl, &[h])?;
                merge_back(joined, &copy.map)
            }
            Term::App(..) => unreachable!("spine head is never an application"),
        }
    }

    /// `x N1 .. Nn`: type each argument linearly on disjoint copies, give the
    /// head the arrow type they determine, then contract the copies.
    fn head_variable(&mut self, x: &Name, args: &[&Term]) -> Result<Derivation> {
        if args.is_empty() {
            return ax(x.clone(), fresh_tyvar());
        }
        let mut copies = Vec::with_capacity(args.len());
        for a in args {
            let d = self.infer_linear(a)?;
            copies.push(make_copy(&d)?);
        }
        let result = fresh_tyvar();
        let head_ty = Type::arrows(copies.iter().map(|c| c.deriv.ty().clone()).collect::<Vec<_>>(), result)?;
        let x2 = names::fresh();
        let mut d = ax(x2.clone(), head_ty)?;
        let mut origin: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
        origin.entry(x.clone()).or_default().push(x2);
        for c in copies {
            for (orig, new) in &c.map {
                origin.entry(orig.clone()).or_default().push(new.clone());
            }
            d = loll_e(d, c.deriv)?;
        }
        contract(d, origin)
    }

    fn expand(&mut self, theta: &Derivation, m: &Term, x: &Name, n: &Term) -> Result<Derivation> {
        let want = substitute(m, &[(x.clone(), n.clone())]);
        if !theta.subject().alpha_eq(&want) {
            return Err(Error::Decomposition(format!("{} is not {want}", theta.subject())));
        }
        if !theta.ty().is_linear() {
            let (comps, suffix) = stratified_premises(theta)?;
            let expanded = comps
                .into_iter()
                .map(|c| {
                    let c = suffix.iter().try_fold(c, |acc, s| s.apply(acc))?;
                    self.expand(&c, m, x, n)
                })
                .collect::<Result<Vec<_>>>()?;
            return strat_padded(expanded);
        }
        let x2 = names::fresh();
        let m2 = rename_free(m, &[(x.clone(), x2.clone())]);
        let (mut sigmas, tmpl) = invert::invert_with(self, theta, &m2, &[(x2.clone(), n.clone())])?;
        let fun = loll_i(tmpl, x2)?;
        let copy = make_copy(&sigmas.remove(0))?;
        let app = loll_e(fun, copy.deriv)?;
        merge_back(app, &copy.map)
    }
}

fn fresh_tyvar() -> Type {
    Type::Var(names::fresh())
}

/// Contract every group of names into its original variable; singleton
/// groups are renamed.
fn contract(d: Derivation, origin: BTreeMap<Name, Vec<Name>>) -> Result<Derivation> {
    let mut renames = BTreeMap::new();
    let mut d = d;
    for (orig, group) in origin {
        if let [single] = group.as_slice() {
            renames.insert(single.clone(), orig);
        } else {
            d = mux(d, group, orig)?;
        }
    }
    if renames.is_empty() {
        Ok(d)
    } else {
        rename_vars(&d, &renames, false)
    }
}

/// Undo a copy: each copied variable is contracted with the original when
/// both are present, and renamed back otherwise.
fn merge_back(d: Derivation, map: &BTreeMap<Name, Name>) -> Result<Derivation> {
    let mut origin: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
    for (orig, new) in map {
        if d.ctx().contains(new) {
            let group = origin.entry(orig.clone()).or_default();
            if group.is_empty() && d.ctx().contains(orig) {
                group.push(orig.clone());
            }
            group.push(new.clone());
        }
    }
    contract(d, origin)
}
