//! Pure λ-terms.

mod enumerate;
mod parse;
mod reduce;
mod sn;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::names::{self, Name};

pub use enumerate::{count_closed_terms, enumerate_closed_terms, random_closed_term, ClosedTerms, MAX_ENUM_SIZE};
pub use parse::{parse_term, parse_term_with, ParseError};
pub(crate) use parse::{lex, Spanned, Tok};
pub use reduce::{
    beta_step, is_normal, leftmost_outermost, redex_positions, reduce_to_nf, reducts, Dir,
    FuelExhausted, NotARedex, RedexPosition, DEFAULT_REDUCE_FUEL,
};
pub use sn::{is_sn, SnVerdict, DEFAULT_SN_FUEL};
pub(crate) use sn::PathIndex;

#[derive(Clone, Debug)]
pub enum Term {
    Var(Name),
    Abs(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(names::name(x))
    }

    pub fn abs(x: Name, body: Term) -> Term {
        Term::Abs(x, Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// `f a1 ... an`
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `\x1 ... xn. body`
    pub fn lams<I>(binders: I, body: Term) -> Term
    where
        I: IntoIterator<Item = Name>,
        I::IntoIter: DoubleEndedIterator,
    {
        binders.into_iter().rev().fold(body, |b, x| Term::abs(x, b))
    }

    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => b.size() + 1,
            Term::App(f, a) => f.size() + a.size() + 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_fv(self, &mut bound, &mut out);
        out
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::Abs(y, b) => &**y != x && b.is_free(x),
            Term::App(f, a) => f.is_free(x) || a.is_free(x),
        }
    }

    /// Every identifier in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Abs(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            Term::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq_in(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Locally nameless form: bound variables become indices.
    pub fn to_db(&self) -> Db {
        fn go(t: &Term, env: &mut Vec<Name>) -> Db {
            match t {
                Term::Var(x) => match env.iter().rev().position(|y| y == x) {
                    Some(i) => Db::Bound(i as u32),
                    None => Db::Free(x.clone()),
                },
                Term::Abs(x, b) => {
                    env.push(x.clone());
                    let body = go(b, env);
                    env.pop();
                    Db::Abs(Arc::new(body))
                }
                Term::App(f, a) => Db::App(Arc::new(go(f, env)), Arc::new(go(a, env))),
            }
        }
        go(self, &mut Vec::new())
    }

    /// Rename every binder to a fresh generated name.
    pub fn freshen_binders(&self) -> Term {
        fn go(t: &Term, env: &mut Vec<(Name, Name)>) -> Term {
            match t {
                Term::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                    Some((_, new)) => Term::Var(new.clone()),
                    None => t.clone(),
                },
                Term::Abs(x, b) => {
                    let y = names::fresh();
                    env.push((x.clone(), y.clone()));
                    let body = go(b, env);
                    env.pop();
                    Term::abs(y, body)
                }
                Term::App(f, a) => Term::app(go(f, env), go(a, env)),
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn has_binder(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Abs(..) => true,
            Term::App(f, a) => f.has_binder() || a.has_binder(),
        }
    }

    /// Positions of the free occurrences of `x`, as paths from the root.
    pub fn occurrences(&self, x: &str) -> Vec<Vec<Dir>> {
        fn go(t: &Term, x: &str, path: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
            match t {
                Term::Var(y) => {
                    if &**y == x {
                        out.push(path.clone());
                    }
                }
                Term::Abs(y, b) => {
                    if &**y != x {
                        path.push(Dir::Body);
                        go(b, x, path, out);
                        path.pop();
                    }
                }
                Term::App(f, a) => {
                    path.push(Dir::Fun);
                    go(f, x, path, out);
                    path.pop();
                    path.push(Dir::Arg);
                    go(a, x, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, x, &mut Vec::new(), &mut out);
        out
    }

    pub fn subterm(&self, path: &[Dir]) -> Option<&Term> {
        let mut t = self;
        for d in path {
            t = match (t, d) {
                (Term::App(f, _), Dir::Fun) => f,
                (Term::App(_, a), Dir::Arg) => a,
                (Term::Abs(_, b), Dir::Body) => b,
                _ => return None,
            };
        }
        Some(t)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }
}

fn collect_fv(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Abs(x, b) => {
            bound.push(x.clone());
            collect_fv(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_fv(f, bound, out);
            collect_fv(a, bound, out);
        }
    }
}

fn alpha_eq_in(s: &Term, t: &Term, ls: &mut Vec<Name>, rs: &mut Vec<Name>) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => {
            let i = ls.iter().rev().position(|z| z == x);
            let j = rs.iter().rev().position(|z| z == y);
            match (i, j) {
                (None, None) => x == y,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Term::Abs(x, b), Term::Abs(y, c)) => {
            ls.push(x.clone());
            rs.push(y.clone());
            let eq = alpha_eq_in(b, c, ls, rs);
            ls.pop();
            rs.pop();
            eq
        }
        (Term::App(f, a), Term::App(g, b)) => {
            alpha_eq_in(f, g, ls, rs) && alpha_eq_in(a, b, ls, rs)
        }
        _ => false,
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.to_db().hash(state);
    }
}

/// Locally nameless term, used as an α-canonical key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Db {
    Free(Name),
    Bound(u32),
    Abs(Arc<Db>),
    App(Arc<Db>, Arc<Db>),
}

/// Simultaneous capture-avoiding substitution. Every inserted copy of a
/// replacement that contains binders gets fresh binder names.
pub fn substitute(m: &Term, bindings: &[(Name, Term)]) -> Term {
    if bindings.is_empty() {
        return m.clone();
    }
    let map: HashMap<Name, Term> = bindings.iter().cloned().collect();
    let mut avoid = BTreeSet::new();
    for (_, n) in bindings {
        avoid.extend(n.free_vars());
    }
    subst_in(m, &map, &avoid)
}

fn subst_in(t: &Term, map: &HashMap<Name, Term>, avoid: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(x) => match map.get(x) {
            Some(n) if n.has_binder() => n.freshen_binders(),
            Some(n) => n.clone(),
            None => t.clone(),
        },
        Term::App(f, a) => Term::app(subst_in(f, map, avoid), subst_in(a, map, avoid)),
        Term::Abs(y, b) => {
            if !map.keys().any(|k| k != y && b.is_free(k)) {
                return t.clone();
            }
            let mut inner = map.clone();
            inner.remove(y);
            if avoid.contains(y) {
                let y2 = names::fresh();
                inner.insert(y.clone(), Term::Var(y2.clone()));
                Term::abs(y2, subst_in(b, &inner, avoid))
            } else {
                Term::abs(y.clone(), subst_in(b, &inner, avoid))
            }
        }
    }
}

/// Rename free variables according to `map` (capture-avoiding).
pub fn rename_free(m: &Term, map: &[(Name, Name)]) -> Term {
    let bindings: Vec<(Name, Term)> = map
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.clone(), Term::Var(b.clone())))
        .collect();
    substitute(m, &bindings)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Abs(..) => {
                let mut t = self;
                write!(f, "\\")?;
                let mut first = true;
                while let Term::Abs(x, b) = t {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                    first = false;
                    t = b;
                }
                write!(f, ". {t}")
            }
            Term::Var(x) => write!(f, "{x}"),
            Term::App(g, a) => {
                match &**g {
                    Term::Abs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match &**a {
                    Term::Var(x) => write!(f, " {x}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

/// Rename bound variables to short readable names for display.
pub fn prettify(m: &Term) -> Term {
    let mut taken = m.free_vars();
    let mut next = 0usize;
    fn pick(taken: &mut BTreeSet<Name>, next: &mut usize) -> Name {
        const BASE: [&str; 8] = ["x", "y", "z", "w", "u", "v", "p", "q"];
        loop {
            let i = *next;
            *next += 1;
            let cand = if i < BASE.len() {
                BASE[i].to_string()
            } else {
                format!("{}{}", BASE[i % BASE.len()], i / BASE.len())
            };
            let cand: Name = cand.into();
            if !taken.contains(&cand) {
                taken.insert(cand.clone());
                return cand;
            }
        }
    }
    fn go(t: &Term, env: &mut Vec<(Name, Name)>, taken: &mut BTreeSet<Name>, next: &mut usize) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(o, _)| o == x) {
                Some((_, n)) => Term::Var(n.clone()),
                None => t.clone(),
            },
            Term::Abs(x, b) => {
                let y = pick(taken, next);
                env.push((x.clone(), y.clone()));
                let body = go(b, env, taken, next);
                env.pop();
                Term::abs(y, body)
            }
            Term::App(f, a) => Term::app(go(f, env, taken, next), go(a, env, taken, next)),
        }
    }
    go(m, &mut Vec::new(), &mut taken, &mut next)
}
