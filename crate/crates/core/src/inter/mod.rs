//! Translation of stratified types into intersection types, with meets
//! identified up to commutativity and idempotency but not associativity.

use std::fmt;
use std::sync::Arc;

use crate::names::Name;
use crate::types::{canonicalize, Type};

#[derive(Clone, Debug)]
pub enum InterType {
    Var(Name),
    Arrow(Arc<InterType>, Arc<InterType>),
    Forall(Name, Arc<InterType>),
    /// At least two components.
    Meet(Arc<[InterType]>),
}

impl InterType {
    /// Meet of the given components; a single component stands for itself.
    ///
    /// # Panics
    /// On an empty list.
    pub fn meet(cs: Vec<InterType>) -> InterType {
        assert!(!cs.is_empty(), "meet of no types");
        if cs.len() == 1 {
            cs.into_iter().next().unwrap()
        } else {
            InterType::Meet(cs.into())
        }
    }

    /// No meet on the right of an arrow or under a quantifier.
    pub fn is_strict(&self) -> bool {
        match self {
            InterType::Var(_) => true,
            InterType::Arrow(s, r) => !matches!(**r, InterType::Meet(_)) && s.is_strict() && r.is_strict(),
            InterType::Forall(_, b) => !matches!(**b, InterType::Meet(_)) && b.is_strict(),
            InterType::Meet(cs) => cs.len() >= 2 && cs.iter().all(InterType::is_strict),
        }
    }
}

/// Sets become meets of their translated elements; a singleton set becomes
/// its element, since meets have at least two components.
pub fn to_inter(s: &Type) -> InterType {
    go(&canonicalize(s))
}

fn go(s: &Type) -> InterType {
    match s {
        Type::Var(a) => InterType::Var(a.clone()),
        Type::Arrow(a, r) => InterType::Arrow(Arc::new(go(a)), Arc::new(go(r))),
        Type::Forall(a, b) => InterType::Forall(a.clone(), Arc::new(go(b))),
        Type::Strat(cs) => InterType::meet(cs.iter().map(go).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Free(Name),
    Bound(usize),
    Arrow(Box<Key>, Box<Key>),
    Forall(Box<Key>),
    Meet(Vec<Key>),
}

fn key(t: &InterType, bound: &mut Vec<Name>) -> Key {
    match t {
        InterType::Var(a) => match bound.iter().rposition(|b| b == a) {
            Some(i) => Key::Bound(bound.len() - 1 - i),
            None => Key::Free(a.clone()),
        },
        InterType::Arrow(s, r) => Key::Arrow(Box::new(key(s, bound)), Box::new(key(r, bound))),
        InterType::Forall(a, b) => {
            bound.push(a.clone());
            let k = key(b, bound);
            bound.pop();
            Key::Forall(Box::new(k))
        }
        InterType::Meet(cs) => {
            let mut ks: Vec<Key> = cs.iter().map(|c| key(c, bound)).collect();
            ks.sort();
            ks.dedup();
            if ks.len() == 1 {
                ks.pop().unwrap()
            } else {
                Key::Meet(ks)
            }
        }
    }
}

/// Equality up to α, commutativity and idempotency of each meet. Nested
/// meets are not flattened.
pub fn inter_eq(a: &InterType, b: &InterType) -> bool {
    key(a, &mut Vec::new()) == key(b, &mut Vec::new())
}

/// No singleton set anywhere, after the duplicates of each set are merged.
pub fn is_non_degenerate(s: &Type) -> bool {
    fn ok(s: &Type) -> bool {
        match s {
            Type::Var(_) => true,
            Type::Arrow(a, r) => ok(a) && ok(r),
            Type::Forall(_, b) => ok(b),
            Type::Strat(cs) => cs.len() >= 2 && cs.iter().all(ok),
        }
    }
    ok(&canonicalize(s))
}

impl fmt::Display for InterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atomic = |t: &InterType| matches!(t, InterType::Var(_));
        match self {
            InterType::Var(a) => write!(f, "{a}"),
            InterType::Arrow(s, r) => {
                if atomic(s) {
                    write!(f, "{s} -> {r}")
                } else {
                    write!(f, "({s}) -> {r}")
                }
            }
            InterType::Forall(a, b) => write!(f, "forall {a}. {b}"),
            InterType::Meet(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " /\\ ")?;
                    }
                    if atomic(c) {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "({c})")?;
                    }
                }
                Ok(())
            }
        }
    }
}
