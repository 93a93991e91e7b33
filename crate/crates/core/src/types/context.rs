use std::collections::BTreeMap;
use std::fmt;

use super::{type_eq, union_strat, Type, TypeError};
use crate::names::Name;

/// Finite map from term variables to stratified types.
#[derive(Clone, Debug, Default)]
pub struct Context(BTreeMap<Name, Type>);

impl Context {
    pub fn new() -> Self {
        Context(BTreeMap::new())
    }

    pub fn singleton(x: Name, t: Type) -> Self {
        let mut c = Context::new();
        c.insert(x, t);
        c
    }

    pub fn get(&self, x: &str) -> Option<&Type> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains_key(x)
    }

    pub fn insert(&mut self, x: Name, t: Type) -> Option<Type> {
        self.0.insert(x, t)
    }

    pub fn remove(&mut self, x: &str) -> Option<Type> {
        self.0.remove(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    pub fn same_domain(&self, other: &Context) -> bool {
        self.0.len() == other.0.len() && self.0.keys().all(|k| other.0.contains_key(k))
    }

    pub fn disjoint(&self, other: &Context) -> bool {
        self.0.keys().all(|k| !other.0.contains_key(k))
    }

    /// Union of contexts with disjoint domains; `None` on a clash.
    pub fn join(&self, other: &Context) -> Option<Context> {
        if !self.disjoint(other) {
            return None;
        }
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        Some(out)
    }

    /// Pointwise type equality on equal domains.
    pub fn equiv(&self, other: &Context) -> bool {
        self.same_domain(other) && self.0.iter().all(|(k, v)| type_eq(v, &other.0[k]))
    }
}

impl FromIterator<(Name, Type)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, Type)>>(iter: I) -> Self {
        Context(iter.into_iter().collect())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        Ok(())
    }
}

/// Pointwise union of singletons; all contexts must share one domain.
pub fn context_union(cs: &[Context]) -> Result<Context, TypeError> {
    let first = cs.first().ok_or(TypeError::DomainMismatch)?;
    if cs.iter().any(|c| !c.same_domain(first)) {
        return Err(TypeError::DomainMismatch);
    }
    Ok(first
        .vars()
        .map(|x| {
            let ts: Vec<Type> = cs.iter().map(|c| c.0[x].clone()).collect();
            (x.clone(), union_strat(&ts))
        })
        .collect())
}
