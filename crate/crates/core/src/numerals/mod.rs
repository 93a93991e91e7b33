//! Church binary words, their typings, successors, bounded iteration and
//! the step-bound harness.

use std::sync::Arc;

use serde::Serialize;

use crate::derivation::{
    ax, check, degree, forall_e, forall_i, identity, loll_e, loll_i, mux, strat, weak, Derivation,
};
use crate::error::{Error, Result};
use crate::names::{self, name, Name};
use crate::term::Term;
use crate::transform::{normalize_typed_with, Strategy};
use crate::types::{canonicalize, stratify_n, type_eq, Type};

/// `\s0 s1 x. s_i1 (... (s_im x))` for the binary digits `i1..im` of `n`,
/// most significant first.
pub fn encode_num(n: u64) -> Term {
    let body = digits(n).iter().rev().fold(Term::var("x"), |acc, &d| {
        Term::app(Term::var(if d == 0 { "s0" } else { "s1" }), acc)
    });
    Term::lams([name("s0"), name("s1"), name("x")], body)
}

/// Binary digits, most significant first; empty for 0.
fn digits(n: u64) -> Vec<u8> {
    if n == 0 {
        return Vec::new();
    }
    (0..64 - n.leading_zeros()).rev().map(|i| ((n >> i) & 1) as u8).collect()
}

/// Inverse of [`encode_num`] up to α. Leading zero digits are accepted.
pub fn decode_num(m: &Term) -> Result<u64> {
    let Term::Abs(s0, b1) = m else { return Err(Error::NotANumeral) };
    let Term::Abs(s1, b2) = &**b1 else { return Err(Error::NotANumeral) };
    let Term::Abs(x, body) = &**b2 else { return Err(Error::NotANumeral) };
    if s0 == s1 || s1 == x || s0 == x {
        return Err(Error::NotANumeral);
    }
    let mut ds = Vec::new();
    let mut cur: &Term = body;
    loop {
        match cur {
            Term::Var(v) if v == x => break,
            Term::App(f, a) => {
                match &**f {
                    Term::Var(v) if v == s0 => ds.push(0u64),
                    Term::Var(v) if v == s1 => ds.push(1),
                    _ => return Err(Error::NotANumeral),
                }
                cur = a;
            }
            _ => return Err(Error::NotANumeral),
        }
    }
    ds.into_iter().try_fold(0u64, |acc, d| acc.checked_mul(2).and_then(|v| v.checked_add(d)).ok_or(Error::NotANumeral))
}

fn endo() -> Type {
    Type::Arrow(Arc::new(Type::var("a")), Arc::new(Type::var("a")))
}

/// `forall a. {a -o a}^h -o {a -o a}^k -o a -o a`.
pub fn word_type(h: usize, k: usize) -> Type {
    let a = Type::var("a");
    let body = Type::arrows([stratify_n(&endo(), h), stratify_n(&endo(), k), a.clone()], a).expect("linear result");
    Type::Forall(name("a"), Arc::new(body))
}

/// Parameters `(h, k)` if `t` is a word type.
pub fn word_params(t: &Type) -> Option<(usize, usize)> {
    let Type::Forall(a, body) = t else { return None };
    let var = Type::Var(a.clone());
    let lift = |s: &Type| -> Option<usize> {
        let mut n = 0;
        let mut cur = s;
        while let Type::Strat(cs) = cur {
            if cs.len() != 1 {
                return None;
            }
            n += 1;
            cur = &cs[0];
        }
        let endo = Type::Arrow(Arc::new(var.clone()), Arc::new(var.clone()));
        (n >= 1 && type_eq(cur, &endo)).then_some(n)
    };
    let Type::Arrow(t0, r0) = &**body else { return None };
    let Type::Arrow(t1, r1) = &**r0 else { return None };
    let Type::Arrow(t2, r2) = &**r1 else { return None };
    let h = lift(t0)?;
    let k = lift(t1)?;
    (type_eq(t2, &var) && type_eq(r2, &var)).then_some((h, k))
}

/// A typing of a numeral at a word type.
#[derive(Clone, Debug)]
pub struct NumeralTyping {
    pub n: u64,
    pub h: usize,
    pub k: usize,
    pub derivation: Derivation,
}

/// Degree-0 derivation of `|- num(n) : word_type(h, k)`.
pub fn numeral_derivation(n: u64, h: usize, k: usize) -> Result<NumeralTyping> {
    if h == 0 || k == 0 {
        return Err(Error::Shape("word type parameters start at 1".into()));
    }
    let ds = digits(n);
    let mut d = ax(name("x"), Type::var("a"))?;
    let mut occ: [Vec<Name>; 2] = [Vec::new(), Vec::new()];
    for &digit in ds.iter().rev() {
        let u = names::fresh();
        occ[digit as usize].push(u.clone());
        d = loll_e(ax(u, endo())?, d)?;
    }
    for (digit, levels) in [(0usize, h), (1usize, k)] {
        let s = name(if digit == 0 { "s0" } else { "s1" });
        let mut group = std::mem::take(&mut occ[digit]);
        if group.is_empty() {
            let u = names::fresh();
            d = weak(d, u.clone(), endo())?;
            group.push(u);
        }
        d = mux(d, group, s.clone())?;
        for _ in 1..levels {
            d = mux(d, vec![s.clone()], s.clone())?;
        }
    }
    for v in ["x", "s1", "s0"] {
        d = loll_i(d, name(v))?;
    }
    let derivation = forall_i(d, name("a"))?;
    Ok(NumeralTyping { n, h, k, derivation })
}

/// Derivation of a numeral at a stratified type whose linear components are
/// all word types, by stratifying word typings.
pub fn numeral_typing_at(n: u64, t: &Type) -> Result<Derivation> {
    match t {
        Type::Strat(cs) => strat(cs.iter().map(|c| numeral_typing_at(n, c)).collect::<Result<_>>()?),
        lin => {
            let (h, k) = word_params(lin).ok_or_else(|| Error::Shape(format!("{lin} is not a word type")))?;
            Ok(numeral_derivation(n, h, k)?.derivation)
        }
    }
}

/// Which digit a successor appends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bit {
    Zero,
    One,
}

/// `\w f0 f1 x. w f0 f1 (f_b x)`.
pub fn succ_term(bit: Bit) -> Term {
    let f = if bit == Bit::Zero { "f0" } else { "f1" };
    let inner = Term::app(Term::var(f), Term::var("x"));
    let body = Term::apps(Term::var("w"), [Term::var("f0"), Term::var("f1"), inner]);
    Term::lams([name("w"), name("f0"), name("f1"), name("x")], body)
}

pub fn succ_terms() -> (Term, Term) {
    (succ_term(Bit::Zero), succ_term(Bit::One))
}

/// Word parameters after one successor step.
pub fn succ_params(bit: Bit, m: usize, n: usize) -> (usize, usize) {
    match bit {
        Bit::Zero => (m + 1, n),
        Bit::One => (m, n + 1),
    }
}

/// `|- succ_b : word_type(m, n) -o word_type(succ_params(b, m, n))`.
pub fn succ_derivation(bit: Bit, m: usize, n: usize) -> Result<Derivation> {
    if m == 0 || n == 0 {
        return Err(Error::Shape("word type parameters start at 1".into()));
    }
    let w = name("w");
    let head = forall_e(ax(w.clone(), word_type(m, n))?, Type::var("a"))?;
    let (used, levels) = match bit {
        Bit::Zero => ("f0", m),
        Bit::One => ("f1", n),
    };
    let first = names::fresh();
    let second = names::fresh();
    let arg = |f: &str, lv: usize| -> Result<Derivation> {
        if f == used {
            identity(&first, &stratify_n(&endo(), lv))
        } else {
            identity(&name(f), &stratify_n(&endo(), lv))
        }
    };
    let inner = loll_e(ax(second.clone(), endo())?, ax(name("x"), Type::var("a"))?)?;
    let mut d = loll_e(loll_e(loll_e(head, arg("f0", m)?)?, arg("f1", n)?)?, inner)?;
    for _ in 0..levels {
        d = mux(d, vec![second.clone()], second.clone())?;
    }
    d = mux(d, vec![first, second], name(used))?;
    for v in ["x", "f1", "f0"] {
        d = loll_i(d, name(v))?;
    }
    loll_i(forall_i(d, name("a"))?, w)
}

/// `\f x. f (... (f x))` with `k` applications.
pub fn iter_term(k: usize) -> Term {
    let body = (0..k).fold(Term::var("x"), |acc, _| Term::app(Term::var("f"), acc));
    Term::lams([name("f"), name("x")], body)
}

/// Types `V_1..V_k` of the successive successor applications from `(m, n)`.
pub fn iter_step_types(bit: Bit, k: usize, m: usize, n: usize) -> Vec<Type> {
    let mut out = Vec::with_capacity(k);
    let mut cur = (m, n);
    for _ in 0..k {
        let next = succ_params(bit, cur.0, cur.1);
        out.push(Type::Arrow(Arc::new(word_type(cur.0, cur.1)), Arc::new(word_type(next.0, next.1))));
        cur = next;
    }
    out
}

/// `|- ITER_k : {V_1..V_k} -o word_type(m, n) -o word_type(m', n')`.
pub fn iter_derivation(bit: Bit, k: usize, m: usize, n: usize) -> Result<Derivation> {
    if k == 0 {
        return Err(Error::Shape("iteration count starts at 1".into()));
    }
    let vs = iter_step_types(bit, k, m, n);
    let mut d = ax(name("x"), word_type(m, n))?;
    let mut fs = Vec::with_capacity(k);
    for v in vs {
        let f = names::fresh();
        d = loll_e(ax(f.clone(), v)?, d)?;
        fs.push(f);
    }
    d = mux(d, fs, name("f"))?;
    loll_i(loll_i(d, name("x"))?, name("f"))
}

/// `|- succ_b : {V_1..V_k}`, one successor typing per iteration step.
pub fn iter_argument_derivation(bit: Bit, k: usize, m: usize, n: usize) -> Result<Derivation> {
    let mut ps = Vec::with_capacity(k);
    let mut cur = (m, n);
    for _ in 0..k {
        ps.push(succ_derivation(bit, cur.0, cur.1)?);
        cur = succ_params(bit, cur.0, cur.1);
    }
    strat(ps)
}

/// `|- ITER_k succ_b : word_type(m, n) -o word_type(m', n')`.
pub fn iter_succ_derivation(bit: Bit, k: usize, m: usize, n: usize) -> Result<Derivation> {
    loll_e(iter_derivation(bit, k, m, n)?, iter_argument_derivation(bit, k, m, n)?)
}

/// Outcome of normalizing a program applied to numerals.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub output: u64,
    pub steps: u64,
    pub size: u64,
    pub degree: u64,
    pub bound: u128,
    pub max_size: u64,
    pub steps_ok: bool,
    pub sizes_ok: bool,
    pub pass: bool,
}

/// Apply a typed program to numeral inputs, normalize the derivation and
/// compare the step count and intermediate sizes with `size^(degree+1)`.
pub fn bound_harness(program: &Term, prog_derivation: &Derivation, inputs: &[u64]) -> Result<Report> {
    check(prog_derivation)?;
    if !prog_derivation.subject().alpha_eq(program) {
        return Err(Error::Shape("derivation does not type the program".into()));
    }
    let mut d = prog_derivation.clone();
    for &n in inputs {
        let Type::Arrow(arg, res) = d.ty().clone() else {
            return Err(Error::Shape(format!("{} takes no further argument", d.ty())));
        };
        if !res.is_linear() {
            return Err(Error::Shape("program result is not linear".into()));
        }
        d = loll_e(d, numeral_typing_at(n, &canonicalize(&arg))?)?;
    }
    if word_params(d.ty()).is_none() {
        return Err(Error::Shape(format!("{} is not a word type", d.ty())));
    }
    let size = d.subject().size();
    let deg = degree(&d);
    let bound = (size as u128).checked_pow(deg as u32 + 1).unwrap_or(u128::MAX);
    let norm = normalize_typed_with(&d, Strategy::LeftmostOutermost, &[], u64::MAX)?;
    let output = decode_num(norm.deriv.subject())?;
    let steps_ok = u128::from(norm.steps) <= bound;
    let sizes_ok = u128::from(norm.max_size) <= bound;
    Ok(Report {
        output,
        steps: norm.steps,
        size,
        degree: deg,
        bound,
        max_size: norm.max_size,
        steps_ok,
        sizes_ok,
        pass: steps_ok && sizes_ok,
    })
}
