//! The soft type assignment system: modal types with `!`, its rules,
//! measures, and the translation into stratified derivations.

mod check;
pub mod corpus;
pub mod json;
mod translate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::term::{lex, substitute, ParseError, Term};
use crate::types::{type_eq, Surface, TypeParser};

pub use check::{check_sta, StaViolation};
pub use translate::{translate_context, translate_derivation, translate_type};

/// A modal type. `Var`, `Arrow` and `Forall` are linear.
#[derive(Clone, Debug)]
pub enum StaType {
    Var(Name),
    Arrow(Arc<StaType>, Arc<StaType>),
    Forall(Name, Arc<StaType>),
    Bang(Arc<StaType>),
}

impl StaType {
    pub fn var(a: &str) -> StaType {
        StaType::Var(names::name(a))
    }

    pub fn arrow(arg: StaType, res: StaType) -> Result<StaType> {
        if !res.is_linear() {
            return Err(Error::TypeMismatch(format!("arrow result {res} is not linear")));
        }
        Ok(StaType::Arrow(Arc::new(arg), Arc::new(res)))
    }

    pub fn bang(inner: StaType) -> StaType {
        StaType::Bang(Arc::new(inner))
    }

    /// `n` leading bangs.
    pub fn bangs(inner: StaType, n: usize) -> StaType {
        (0..n).fold(inner, |t, _| StaType::bang(t))
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, StaType::Bang(_))
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            StaType::Var(_) => true,
            StaType::Arrow(s, r) => r.is_linear() && s.is_well_formed() && r.is_well_formed(),
            StaType::Forall(_, b) => b.is_linear() && b.is_well_formed(),
            StaType::Bang(t) => t.is_well_formed(),
        }
    }

    pub fn free_tyvars(&self) -> BTreeSet<Name> {
        match self {
            StaType::Var(a) => BTreeSet::from([a.clone()]),
            StaType::Arrow(s, r) => {
                let mut out = s.free_tyvars();
                out.extend(r.free_tyvars());
                out
            }
            StaType::Forall(a, b) => {
                let mut out = b.free_tyvars();
                out.remove(a);
                out
            }
            StaType::Bang(t) => t.free_tyvars(),
        }
    }
}

/// α-equality. The translation into stratified types is injective, so the
/// comparison is delegated to it.
pub fn sta_eq(s: &StaType, t: &StaType) -> bool {
    type_eq(&translate_type(s), &translate_type(t))
}

/// Capture-avoiding substitution of `by` for the free variable `a`.
pub fn subst_sta(t: &StaType, a: &str, by: &StaType) -> StaType {
    match t {
        StaType::Var(b) if &**b == a => by.clone(),
        StaType::Var(_) => t.clone(),
        StaType::Arrow(s, r) => StaType::Arrow(Arc::new(subst_sta(s, a, by)), Arc::new(subst_sta(r, a, by))),
        StaType::Bang(s) => StaType::bang(subst_sta(s, a, by)),
        StaType::Forall(b, body) => {
            if &**b == a || !body.free_tyvars().contains(a) {
                t.clone()
            } else if by.free_tyvars().contains(b) {
                let b2 = names::fresh();
                let renamed = subst_sta(body, b, &StaType::Var(b2.clone()));
                StaType::Forall(b2, Arc::new(subst_sta(&renamed, a, by)))
            } else {
                StaType::Forall(b.clone(), Arc::new(subst_sta(body, a, by)))
            }
        }
    }
}

impl fmt::Display for StaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StaType::Var(a) => write!(f, "{a}"),
            StaType::Arrow(s, r) => {
                if matches!(**s, StaType::Arrow(..) | StaType::Forall(..)) {
                    write!(f, "({s}) -o {r}")
                } else {
                    write!(f, "{s} -o {r}")
                }
            }
            StaType::Forall(a, b) => write!(f, "forall {a}. {b}"),
            StaType::Bang(t) => {
                if matches!(**t, StaType::Arrow(..) | StaType::Forall(..)) {
                    write!(f, "!({t})")
                } else {
                    write!(f, "!{t}")
                }
            }
        }
    }
}

pub fn parse_sta_type(text: &str) -> Result<StaType, ParseError> {
    parse_sta_type_with(text, false)
}

pub fn parse_sta_type_with(text: &str, allow_reserved: bool) -> Result<StaType, ParseError> {
    let (toks, end) = lex(text)?;
    let mut p = TypeParser { toks, pos: 0, end, allow_reserved, bang: true };
    let s = p.surface()?;
    p.finish()?;
    from_surface(&s).map_err(|msg| ParseError { line: 1, col: 1, msg })
}

fn from_surface(s: &Surface) -> Result<StaType, String> {
    match s {
        Surface::Var(a) => Ok(StaType::Var(a.clone())),
        Surface::Arrow(a, r) => {
            let r = from_surface(r)?;
            if !r.is_linear() {
                return Err(format!("arrow result {r} is not linear"));
            }
            Ok(StaType::Arrow(Arc::new(from_surface(a)?), Arc::new(r)))
        }
        Surface::Forall(a, b) => {
            let b = from_surface(b)?;
            if !b.is_linear() {
                return Err(format!("quantifier body {b} is not linear"));
            }
            Ok(StaType::Forall(a.clone(), Arc::new(b)))
        }
        Surface::Bang(t) => Ok(StaType::bang(from_surface(t)?)),
        Surface::Set(_) => Err("set types are not modal types".into()),
    }
}

pub type StaContext = BTreeMap<Name, StaType>;

fn ctx_equiv(a: &StaContext, b: &StaContext) -> bool {
    a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| sta_eq(v, w)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StaRule {
    Ax,
    W,
    LollI,
    LollE,
    ForallI,
    ForallE,
    M,
    Sp,
}

impl StaRule {
    pub const ALL: [StaRule; 8] = [
        StaRule::Ax,
        StaRule::W,
        StaRule::LollI,
        StaRule::LollE,
        StaRule::ForallI,
        StaRule::ForallE,
        StaRule::M,
        StaRule::Sp,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            StaRule::Ax => "Ax",
            StaRule::W => "W",
            StaRule::LollI => "LollI",
            StaRule::LollE => "LollE",
            StaRule::ForallI => "ForallI",
            StaRule::ForallE => "ForallE",
            StaRule::M => "M",
            StaRule::Sp => "Sp",
        }
    }

    pub fn from_tag(s: &str) -> Option<StaRule> {
        StaRule::ALL.into_iter().find(|r| r.tag() == s)
    }
}

impl fmt::Display for StaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug)]
pub enum StaMeta {
    Ax { var: Name, ty: StaType },
    W { var: Name, ty: StaType },
    LollI { var: Name },
    LollE,
    ForallI { tyvar: Name },
    ForallE { tyvar: Name, inst: StaType },
    M { domain: Vec<Name>, range: Name },
    Sp,
}

impl StaMeta {
    pub fn rule(&self) -> StaRule {
        match self {
            StaMeta::Ax { .. } => StaRule::Ax,
            StaMeta::W { .. } => StaRule::W,
            StaMeta::LollI { .. } => StaRule::LollI,
            StaMeta::LollE => StaRule::LollE,
            StaMeta::ForallI { .. } => StaRule::ForallI,
            StaMeta::ForallE { .. } => StaRule::ForallE,
            StaMeta::M { .. } => StaRule::M,
            StaMeta::Sp => StaRule::Sp,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StaDerivation {
    pub meta: StaMeta,
    pub ctx: StaContext,
    pub subject: Term,
    pub ty: StaType,
    pub premises: Vec<Arc<StaDerivation>>,
}

fn rule_err<T>(rule: StaRule, reason: &'static str) -> Result<T> {
    Err(Error::Shape(format!("cannot apply {rule}: {reason}")))
}

fn node(meta: StaMeta, ctx: StaContext, subject: Term, ty: StaType, premises: Vec<StaDerivation>) -> StaDerivation {
    StaDerivation { meta, ctx, subject, ty, premises: premises.into_iter().map(Arc::new).collect() }
}

impl StaDerivation {
    pub fn rule(&self) -> StaRule {
        self.meta.rule()
    }

    pub fn ax(var: Name, ty: StaType) -> Result<Self> {
        if !ty.is_linear() {
            return rule_err(StaRule::Ax, "axiom-not-linear");
        }
        let ctx = StaContext::from([(var.clone(), ty.clone())]);
        Ok(node(StaMeta::Ax { var: var.clone(), ty: ty.clone() }, ctx, Term::Var(var), ty, vec![]))
    }

    pub fn weak(self, var: Name, ty: StaType) -> Result<Self> {
        if !ty.is_linear() {
            return rule_err(StaRule::W, "weaken-not-linear");
        }
        if self.ctx.contains_key(&var) {
            return rule_err(StaRule::W, "weaken-var-present");
        }
        let mut ctx = self.ctx.clone();
        ctx.insert(var.clone(), ty.clone());
        let (subject, t) = (self.subject.clone(), self.ty.clone());
        Ok(node(StaMeta::W { var, ty }, ctx, subject, t, vec![self]))
    }

    pub fn loll_i(self, var: Name) -> Result<Self> {
        let Some(arg) = self.ctx.get(&var).cloned() else {
            return rule_err(StaRule::LollI, "abs-var-missing");
        };
        let mut ctx = self.ctx.clone();
        ctx.remove(&var);
        let subject = Term::abs(var.clone(), self.subject.clone());
        let ty = StaType::arrow(arg, self.ty.clone())?;
        Ok(node(StaMeta::LollI { var }, ctx, subject, ty, vec![self]))
    }

    pub fn loll_e(self, arg: StaDerivation) -> Result<Self> {
        let StaType::Arrow(want, res) = self.ty.clone() else {
            return rule_err(StaRule::LollE, "fun-not-arrow");
        };
        if self.ctx.keys().any(|x| arg.ctx.contains_key(x)) {
            return rule_err(StaRule::LollE, "contexts-not-disjoint");
        }
        if !sta_eq(&want, &arg.ty) {
            return rule_err(StaRule::LollE, "arg-type-mismatch");
        }
        let mut ctx = self.ctx.clone();
        ctx.extend(arg.ctx.iter().map(|(k, v)| (k.clone(), v.clone())));
        let subject = Term::app(self.subject.clone(), arg.subject.clone());
        Ok(node(StaMeta::LollE, ctx, subject, (*res).clone(), vec![self, arg]))
    }

    pub fn forall_i(self, tyvar: Name) -> Result<Self> {
        if self.ctx.values().any(|t| t.free_tyvars().contains(&tyvar)) {
            return rule_err(StaRule::ForallI, "forall-var-free-in-context");
        }
        if !self.ty.is_linear() {
            return rule_err(StaRule::ForallI, "forall-body-not-linear");
        }
        let ty = StaType::Forall(tyvar.clone(), Arc::new(self.ty.clone()));
        let (ctx, subject) = (self.ctx.clone(), self.subject.clone());
        Ok(node(StaMeta::ForallI { tyvar }, ctx, subject, ty, vec![self]))
    }

    pub fn forall_e(self, inst: StaType) -> Result<Self> {
        let StaType::Forall(a, body) = self.ty.clone() else {
            return rule_err(StaRule::ForallE, "forall-elim-not-forall");
        };
        if !inst.is_linear() {
            return rule_err(StaRule::ForallE, "forall-elim-not-linear");
        }
        let ty = subst_sta(&body, &a, &inst);
        let (ctx, subject) = (self.ctx.clone(), self.subject.clone());
        Ok(node(StaMeta::ForallE { tyvar: a, inst }, ctx, subject, ty, vec![self]))
    }

    /// Contract variables of one common type `mu` into `range : !mu`.
    pub fn mux(self, domain: Vec<Name>, range: Name) -> Result<Self> {
        let Some(first) = domain.first() else {
            return rule_err(StaRule::M, "mux-empty-domain");
        };
        if domain.iter().collect::<BTreeSet<_>>().len() != domain.len() {
            return rule_err(StaRule::M, "mux-duplicate-domain");
        }
        let Some(mu) = self.ctx.get(first).cloned() else {
            return rule_err(StaRule::M, "mux-var-missing");
        };
        for y in &domain {
            match self.ctx.get(y) {
                None => return rule_err(StaRule::M, "mux-var-missing"),
                Some(t) if !sta_eq(t, &mu) => return rule_err(StaRule::M, "mux-type"),
                _ => {}
            }
        }
        let mut ctx = self.ctx.clone();
        for y in &domain {
            ctx.remove(y);
        }
        if ctx.contains_key(&range) {
            return rule_err(StaRule::M, "mux-range-clash");
        }
        ctx.insert(range.clone(), StaType::bang(mu));
        let bindings: Vec<(Name, Term)> = domain.iter().map(|y| (y.clone(), Term::Var(range.clone()))).collect();
        let subject = substitute(&self.subject, &bindings);
        let ty = self.ty.clone();
        Ok(node(StaMeta::M { domain, range }, ctx, subject, ty, vec![self]))
    }

    /// Soft promotion: bang the whole context and the type.
    pub fn sp(self) -> Result<Self> {
        let ctx = self.ctx.iter().map(|(k, v)| (k.clone(), StaType::bang(v.clone()))).collect();
        let (subject, ty) = (self.subject.clone(), StaType::bang(self.ty.clone()));
        Ok(node(StaMeta::Sp, ctx, subject, ty, vec![self]))
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }
}

/// Largest number of contracted variables free in a multiplexor premise,
/// and at least 1.
pub fn sta_rank(d: &StaDerivation) -> u64 {
    fn go(d: &StaDerivation) -> u64 {
        let here = match &d.meta {
            StaMeta::M { domain, .. } => {
                let p = &d.premises[0].subject;
                domain.iter().filter(|y| p.is_free(y)).count() as u64
            }
            _ => 0,
        };
        d.premises.iter().map(|p| go(p)).fold(here, u64::max)
    }
    go(d).max(1)
}

/// Maximal nesting of promotions.
pub fn sta_degree(d: &StaDerivation) -> u64 {
    let below = d.premises.iter().map(|p| sta_degree(p)).max().unwrap_or(0);
    below + u64::from(matches!(d.meta, StaMeta::Sp))
}

pub fn sta_weight_at(d: &StaDerivation, r: u64) -> BigUint {
    match &d.meta {
        StaMeta::Ax { .. } => BigUint::one(),
        StaMeta::LollI { .. } => sta_weight_at(&d.premises[0], r) + 1u32,
        StaMeta::LollE => sta_weight_at(&d.premises[0], r) + sta_weight_at(&d.premises[1], r) + 1u32,
        StaMeta::Sp => sta_weight_at(&d.premises[0], r) * r,
        _ => sta_weight_at(&d.premises[0], r),
    }
}

#[derive(Clone, Debug)]
pub struct StaMeasures {
    pub subject_size: u64,
    pub rank: u64,
    pub degree: u64,
}

pub fn sta_measures(d: &StaDerivation) -> Result<StaMeasures> {
    check_sta(d)?;
    Ok(StaMeasures { subject_size: d.subject.size(), rank: sta_rank(d), degree: sta_degree(d) })
}
