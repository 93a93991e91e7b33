//! Linear and stratified types.

mod context;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::names::{self, Name};

pub use context::{context_union, Context};
pub use parse::{parse_type, parse_type_with};
pub(crate) use parse::{Surface, TypeParser};

/// A stratified type. Linear types are `Var`, `Arrow` and `Forall`; `Strat`
/// is a finite set of stratified types.
#[derive(Clone, Debug)]
pub enum Type {
    Var(Name),
    Arrow(Arc<Type>, Arc<Type>),
    Forall(Name, Arc<Type>),
    Strat(Arc<[Type]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("expected a linear type, found {0}")]
    NotLinear(String),
    #[error("empty stratified type")]
    EmptyStrat,
    #[error("context domains differ")]
    DomainMismatch,
}

/// α-canonical key: bound type variables become indices, set levels are
/// sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKey {
    Free(Name),
    Bound(u32),
    Arrow(Box<TypeKey>, Box<TypeKey>),
    Forall(Box<TypeKey>),
    Strat(Vec<TypeKey>),
}

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeKey::Free(a) => write!(f, "{a}"),
            TypeKey::Bound(i) => write!(f, "#{i}"),
            TypeKey::Arrow(s, t) => write!(f, "({s} -o {t})"),
            TypeKey::Forall(b) => write!(f, "(forall. {b})"),
            TypeKey::Strat(cs) => {
                write!(f, "{{")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl Type {
    pub fn var(a: &str) -> Type {
        Type::Var(names::name(a))
    }

    /// `arg -o res`; `res` must be linear.
    pub fn arrow(arg: Type, res: Type) -> Result<Type, TypeError> {
        if !res.is_linear() {
            return Err(TypeError::NotLinear(res.to_string()));
        }
        Ok(Type::Arrow(Arc::new(arg), Arc::new(res)))
    }

    pub fn forall(a: Name, body: Type) -> Result<Type, TypeError> {
        if !body.is_linear() {
            return Err(TypeError::NotLinear(body.to_string()));
        }
        Ok(Type::Forall(a, Arc::new(body)))
    }

    pub fn strat(components: Vec<Type>) -> Result<Type, TypeError> {
        if components.is_empty() {
            return Err(TypeError::EmptyStrat);
        }
        Ok(Type::Strat(components.into()))
    }

    /// `args[0] -o ... -o args[n-1] -o res`.
    pub fn arrows(args: impl IntoIterator<Item = Type, IntoIter: DoubleEndedIterator>, res: Type) -> Result<Type, TypeError> {
        args.into_iter().rev().try_fold(res, |acc, a| Type::arrow(a, acc))
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Type::Strat(_))
    }

    /// Grammar check: arrow results and quantifier bodies are linear and
    /// every set is nonempty.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Arrow(s, t) => t.is_linear() && s.is_well_formed() && t.is_well_formed(),
            Type::Forall(_, b) => b.is_linear() && b.is_well_formed(),
            Type::Strat(cs) => !cs.is_empty() && cs.iter().all(Type::is_well_formed),
        }
    }

    pub fn key(&self) -> TypeKey {
        fn go(t: &Type, env: &mut Vec<Name>) -> TypeKey {
            match t {
                Type::Var(a) => match env.iter().rev().position(|b| b == a) {
                    Some(i) => TypeKey::Bound(i as u32),
                    None => TypeKey::Free(a.clone()),
                },
                Type::Arrow(s, r) => TypeKey::Arrow(Box::new(go(s, env)), Box::new(go(r, env))),
                Type::Forall(a, b) => {
                    env.push(a.clone());
                    let k = go(b, env);
                    env.pop();
                    TypeKey::Forall(Box::new(k))
                }
                Type::Strat(cs) => {
                    let mut ks: Vec<TypeKey> = cs.iter().map(|c| go(c, env)).collect();
                    ks.sort();
                    ks.dedup();
                    TypeKey::Strat(ks)
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn free_tyvars(&self) -> BTreeSet<Name> {
        fn go(t: &Type, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match t {
                Type::Var(a) => {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
                Type::Arrow(s, r) => {
                    go(s, bound, out);
                    go(r, bound, out);
                }
                Type::Forall(a, b) => {
                    bound.push(a.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Type::Strat(cs) => cs.iter().for_each(|c| go(c, bound, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every type variable name, bound or free.
    pub fn all_tyvars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(a) => {
                out.insert(a.clone());
            }
            Type::Arrow(s, r) => {
                s.all_tyvars(out);
                r.all_tyvars(out);
            }
            Type::Forall(a, b) => {
                out.insert(a.clone());
                b.all_tyvars(out);
            }
            Type::Strat(cs) => cs.iter().for_each(|c| c.all_tyvars(out)),
        }
    }

    /// Components of a set level; a linear type is its own single component.
    pub fn components(&self) -> Vec<Type> {
        match self {
            Type::Strat(cs) => cs.to_vec(),
            t => vec![t.clone()],
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Arrow(s, r) => 1 + s.size() + r.size(),
            Type::Forall(_, b) => 1 + b.size(),
            Type::Strat(cs) => 1 + cs.iter().map(Type::size).sum::<usize>(),
        }
    }
}

impl PartialEq for Type {
    fn eq(&self, other: &Type) -> bool {
        type_eq(self, other)
    }
}

impl Eq for Type {}

/// Set equality at each level, quantifiers up to renaming.
pub fn type_eq(s: &Type, t: &Type) -> bool {
    s.key() == t.key()
}

/// Dedup and sort every set level by canonical print.
pub fn canonicalize(s: &Type) -> Type {
    match s {
        Type::Var(_) => s.clone(),
        Type::Arrow(a, r) => Type::Arrow(Arc::new(canonicalize(a)), Arc::new(canonicalize(r))),
        Type::Forall(a, b) => Type::Forall(a.clone(), Arc::new(canonicalize(b))),
        Type::Strat(cs) => {
            let mut keyed: Vec<(String, TypeKey, Type)> = cs
                .iter()
                .map(|c| {
                    let c = canonicalize(c);
                    let k = c.key();
                    (k.to_string(), k, c)
                })
                .collect();
            keyed.sort_by(|x, y| x.0.cmp(&y.0));
            keyed.dedup_by(|x, y| x.1 == y.1);
            Type::Strat(keyed.into_iter().map(|(_, _, c)| c).collect())
        }
    }
}

/// Multiset of linear components, flattening every set level.
pub fn linear_components(s: &Type) -> Vec<Type> {
    fn go(t: &Type, out: &mut Vec<Type>) {
        match t {
            Type::Strat(cs) => cs.iter().for_each(|c| go(c, out)),
            t => out.push(t.clone()),
        }
    }
    let mut out = Vec::new();
    go(&canonicalize(s), &mut out);
    out
}

/// Wrap in `n` singleton set layers.
pub fn stratify_n(s: &Type, n: usize) -> Type {
    (0..n).fold(s.clone(), |t, _| Type::Strat(vec![t].into()))
}

/// The set whose elements are the given types, without flattening.
///
/// # Panics
/// On an empty list.
pub fn union_strat(ss: &[Type]) -> Type {
    assert!(!ss.is_empty(), "union of no types");
    canonicalize(&Type::Strat(ss.to_vec().into()))
}

/// Capture-avoiding substitution of `by` for the free variable `a`.
pub fn subst_type(t: &Type, a: &str, by: &Type) -> Type {
    let fv = by.free_tyvars();
    subst_in(t, a, by, &fv)
}

fn subst_in(t: &Type, a: &str, by: &Type, fv: &BTreeSet<Name>) -> Type {
    match t {
        Type::Var(b) => {
            if &**b == a {
                by.clone()
            } else {
                t.clone()
            }
        }
        Type::Arrow(s, r) => Type::Arrow(Arc::new(subst_in(s, a, by, fv)), Arc::new(subst_in(r, a, by, fv))),
        Type::Forall(b, body) => {
            if &**b == a || !body.free_tyvars().contains(a) {
                return t.clone();
            }
            if fv.contains(b) {
                let mut avoid = fv.clone();
                body.all_tyvars(&mut avoid);
                avoid.insert(names::name(a));
                let b2 = primed(b, &avoid);
                let renamed = subst_in(body, b, &Type::Var(b2.clone()), &BTreeSet::new());
                Type::Forall(b2, Arc::new(subst_in(&renamed, a, by, fv)))
            } else {
                Type::Forall(b.clone(), Arc::new(subst_in(body, a, by, fv)))
            }
        }
        Type::Strat(cs) => Type::Strat(cs.iter().map(|c| subst_in(c, a, by, fv)).collect()),
    }
}

/// `b'`, `b''`, ... avoiding the given names.
fn primed(b: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut cand = format!("{b}'");
    while avoid.contains(cand.as_str()) {
        cand.push('\'');
    }
    cand.into()
}

/// Instantiation as in the quantifier elimination rule: linear types only.
pub fn subst_tyvar(t: &Type, a: &str, b: &Type) -> Result<Type, TypeError> {
    if !t.is_linear() {
        return Err(TypeError::NotLinear(t.to_string()));
    }
    if !b.is_linear() {
        return Err(TypeError::NotLinear(b.to_string()));
    }
    Ok(subst_type(t, a, b))
}

fn needs_parens_as_arg(t: &Type) -> bool {
    matches!(t, Type::Arrow(..) | Type::Forall(..))
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(a) => write!(f, "{a}"),
            Type::Arrow(s, r) => {
                if needs_parens_as_arg(s) {
                    write!(f, "({s}) -o {r}")
                } else {
                    write!(f, "{s} -o {r}")
                }
            }
            Type::Forall(a, b) => write!(f, "forall {a}. {b}"),
            Type::Strat(cs) => {
                write!(f, "{{")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Renames free type variables to `a1, a2, ...` in order of first use.
#[derive(Default)]
pub struct TyvarNamer {
    map: std::collections::HashMap<Name, Name>,
}

impl TyvarNamer {
    pub fn rename(&mut self, t: &Type) -> Type {
        fn go(t: &Type, namer: &mut TyvarNamer, bound: &mut Vec<Name>) -> Type {
            match t {
                Type::Var(a) if !bound.contains(a) => {
                    let n = namer.map.len() + 1;
                    Type::Var(namer.map.entry(a.clone()).or_insert_with(|| format!("a{n}").into()).clone())
                }
                Type::Var(_) => t.clone(),
                Type::Arrow(s, r) => {
                    let s = go(s, namer, bound);
                    Type::Arrow(Arc::new(s), Arc::new(go(r, namer, bound)))
                }
                Type::Forall(a, b) => {
                    bound.push(a.clone());
                    let body = go(b, namer, bound);
                    bound.pop();
                    Type::Forall(a.clone(), Arc::new(body))
                }
                Type::Strat(cs) => Type::Strat(cs.iter().map(|c| go(c, namer, bound)).collect()),
            }
        }
        go(t, self, &mut Vec::new())
    }
}
