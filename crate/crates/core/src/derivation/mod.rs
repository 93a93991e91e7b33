//! Derivation trees, their checker, measures and structural operations.

mod build;
mod check;
pub mod json;
mod measure;
mod ops;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::names::Name;
use crate::term::Term;
use crate::types::{Context, Type};

pub use build::{ax, forall_e, forall_i, loll_e, loll_i, mux, reapply, strat, weak, Step};
pub use check::{check, Violation};
pub use measure::{measures, rank, degree, weight_at, Measures};
pub use ops::{
    ancestors, identity, is_clean, linear_component_typing, make_clean, make_copy,
    make_instance, peel_chain, recompose, rename_vars, strat_padded, stratified_premises,
    subst_tyvar_in_derivation, weaken, freshen_locals, Copy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    Ax,
    W,
    LollI,
    LollE,
    M,
    St,
    ForallI,
    ForallE,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Ax,
        Rule::W,
        Rule::LollI,
        Rule::LollE,
        Rule::M,
        Rule::St,
        Rule::ForallI,
        Rule::ForallE,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::Ax => "Ax",
            Rule::W => "W",
            Rule::LollI => "LollI",
            Rule::LollE => "LollE",
            Rule::M => "M",
            Rule::St => "St",
            Rule::ForallI => "ForallI",
            Rule::ForallE => "ForallE",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.tag() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Rule-specific data of a node.
#[derive(Clone, Debug)]
pub enum Meta {
    Ax { var: Name, ty: Type },
    W { var: Name, ty: Type },
    LollI { var: Name },
    LollE,
    M { domain: Vec<Name>, range: Name },
    St,
    ForallI { tyvar: Name },
    ForallE { tyvar: Name, inst: Type },
}

impl Meta {
    pub fn rule(&self) -> Rule {
        match self {
            Meta::Ax { .. } => Rule::Ax,
            Meta::W { .. } => Rule::W,
            Meta::LollI { .. } => Rule::LollI,
            Meta::LollE => Rule::LollE,
            Meta::M { .. } => Rule::M,
            Meta::St => Rule::St,
            Meta::ForallI { .. } => Rule::ForallI,
            Meta::ForallE { .. } => Rule::ForallE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Judgment {
    pub ctx: Context,
    pub subject: Term,
    pub ty: Type,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            write!(f, "|- {} : {}", self.subject, self.ty)
        } else {
            write!(f, "{} |- {} : {}", self.ctx, self.subject, self.ty)
        }
    }
}

impl Judgment {
    /// Same context map, α-equal subject and equal type.
    pub fn equiv(&self, other: &Judgment) -> bool {
        self.ctx.equiv(&other.ctx) && self.subject.alpha_eq(&other.subject) && self.ty == other.ty
    }
}

/// A node of a derivation tree. Nodes built through the rule constructors
/// in this module are valid by construction; [`check`] re-verifies any tree.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub meta: Meta,
    pub concl: Judgment,
    pub premises: Vec<Arc<Derivation>>,
}

impl Derivation {
    pub fn rule(&self) -> Rule {
        self.meta.rule()
    }

    pub fn ctx(&self) -> &Context {
        &self.concl.ctx
    }

    pub fn subject(&self) -> &Term {
        &self.concl.subject
    }

    pub fn ty(&self) -> &Type {
        &self.concl.ty
    }

    pub fn premise(&self, i: usize) -> &Derivation {
        &self.premises[i]
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&Derivation> {
        let mut d = self;
        for &i in path {
            d = d.premises.get(i)?;
        }
        Some(d)
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }

    /// Every node with its path, in preorder.
    pub fn preorder(&self) -> Vec<(Vec<usize>, &Derivation)> {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Replace the subtree at `path` and rebuild every node above it
    /// through the rule constructors.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> crate::Result<Derivation> {
        let Some((&i, rest)) = path.split_first() else {
            return Ok(new);
        };
        let child = self.premises.get(i).ok_or(crate::Error::BadPath)?;
        let new_child = child.replace_at(rest, new)?;
        let mut ps: Vec<Derivation> = self.premises.iter().map(|p| (**p).clone()).collect();
        ps[i] = new_child;
        reapply(&self.meta, ps)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &Derivation, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let meta = match &d.meta {
                Meta::Ax { .. } | Meta::LollE | Meta::St => String::new(),
                Meta::W { var, ty } => format!(" [{var}: {ty}]"),
                Meta::LollI { var } => format!(" [{var}]"),
                Meta::M { domain, range } => {
                    let dom: Vec<&str> = domain.iter().map(|n| &**n).collect();
                    format!(" [{} => {range}]", dom.join(","))
                }
                Meta::ForallI { tyvar } => format!(" [{tyvar}]"),
                Meta::ForallE { tyvar, inst } => format!(" [{tyvar} := {inst}]"),
            };
            writeln!(f, "{:indent$}{}{}  {}", "", d.rule(), meta, d.concl, indent = depth * 2)?;
            d.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}
