use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{substitute, Term};

pub const DEFAULT_REDUCE_FUEL: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Fun,
    Arg,
    Body,
}

/// Path from the root to a β-redex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RedexPosition(pub Vec<Dir>);

impl RedexPosition {
    pub fn root() -> Self {
        RedexPosition(Vec::new())
    }
}

impl fmt::Display for RedexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|d| match d {
                Dir::Fun => "fun",
                Dir::Arg => "arg",
                Dir::Body => "body",
            })
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("position {0} is not a redex")]
pub struct NotARedex(pub RedexPosition);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fuel exhausted after {steps} steps")]
pub struct FuelExhausted {
    pub steps: u64,
}

/// Contract the redex at `at`.
pub fn beta_step(m: &Term, at: &RedexPosition) -> Result<Term, NotARedex> {
    fn go(t: &Term, path: &[Dir], at: &RedexPosition) -> Result<Term, NotARedex> {
        match (t, path.split_first()) {
            (Term::App(f, a), None) => match &**f {
                Term::Abs(x, body) => Ok(substitute(body, &[(x.clone(), (**a).clone())])),
                _ => Err(NotARedex(at.clone())),
            },
            (Term::App(f, a), Some((Dir::Fun, rest))) => {
                Ok(Term::App(Arc::new(go(f, rest, at)?), a.clone()))
            }
            (Term::App(f, a), Some((Dir::Arg, rest))) => {
                Ok(Term::App(f.clone(), Arc::new(go(a, rest, at)?)))
            }
            (Term::Abs(x, b), Some((Dir::Body, rest))) => {
                Ok(Term::Abs(x.clone(), Arc::new(go(b, rest, at)?)))
            }
            _ => Err(NotARedex(at.clone())),
        }
    }
    go(m, &at.0, at)
}

pub fn is_normal(m: &Term) -> bool {
    match m {
        Term::Var(_) => true,
        Term::Abs(_, b) => is_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Abs(..)) && is_normal(f) && is_normal(a),
    }
}

/// All redex positions, leftmost-outermost first.
pub fn redex_positions(m: &Term) -> Vec<RedexPosition> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<RedexPosition>) {
        match t {
            Term::Var(_) => {}
            Term::Abs(_, b) => {
                path.push(Dir::Body);
                go(b, path, out);
                path.pop();
            }
            Term::App(f, a) => {
                if matches!(**f, Term::Abs(..)) {
                    out.push(RedexPosition(path.clone()));
                }
                path.push(Dir::Fun);
                go(f, path, out);
                path.pop();
                path.push(Dir::Arg);
                go(a, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, &mut Vec::new(), &mut out);
    out
}

pub fn leftmost_outermost(m: &Term) -> Option<RedexPosition> {
    fn go(t: &Term, path: &mut Vec<Dir>) -> bool {
        match t {
            Term::Var(_) => false,
            Term::Abs(_, b) => {
                path.push(Dir::Body);
                if go(b, path) {
                    return true;
                }
                path.pop();
                false
            }
            Term::App(f, a) => {
                if matches!(**f, Term::Abs(..)) {
                    return true;
                }
                path.push(Dir::Fun);
                if go(f, path) {
                    return true;
                }
                path.pop();
                path.push(Dir::Arg);
                if go(a, path) {
                    return true;
                }
                path.pop();
                false
            }
        }
    }
    let mut path = Vec::new();
    go(m, &mut path).then_some(RedexPosition(path))
}

/// Every one-step reduct, in leftmost-outermost order of the contracted redex.
pub fn reducts(m: &Term) -> Vec<Term> {
    fn go(t: &Term, out: &mut Vec<Term>) {
        match t {
            Term::Var(_) => {}
            Term::Abs(x, b) => {
                let mut inner = Vec::new();
                go(b, &mut inner);
                out.extend(inner.into_iter().map(|r| Term::Abs(x.clone(), Arc::new(r))));
            }
            Term::App(f, a) => {
                if let Term::Abs(x, body) = &**f {
                    out.push(substitute(body, &[(x.clone(), (**a).clone())]));
                }
                let mut inner = Vec::new();
                go(f, &mut inner);
                out.extend(inner.into_iter().map(|r| Term::App(Arc::new(r), a.clone())));
                let mut inner = Vec::new();
                go(a, &mut inner);
                out.extend(inner.into_iter().map(|r| Term::App(f.clone(), Arc::new(r))));
            }
        }
    }
    let mut out = Vec::new();
    go(m, &mut out);
    out
}

fn step_lo(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => None,
        Term::Abs(x, b) => step_lo(b).map(|b| Term::Abs(x.clone(), Arc::new(b))),
        Term::App(f, a) => {
            if let Term::Abs(x, body) = &**f {
                return Some(substitute(body, &[(x.clone(), (**a).clone())]));
            }
            if let Some(f2) = step_lo(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            step_lo(a).map(|a2| Term::App(f.clone(), Arc::new(a2)))
        }
    }
}

/// Leftmost-outermost normalization with at most `fuel` steps.
pub fn reduce_to_nf(m: &Term, fuel: u64) -> Result<(Term, u64), FuelExhausted> {
    let mut t = m.clone();
    let mut steps = 0;
    while let Some(next) = step_lo(&t) {
        if steps == fuel {
            return Err(FuelExhausted { steps });
        }
        t = next;
        steps += 1;
    }
    Ok((t, steps))
}
