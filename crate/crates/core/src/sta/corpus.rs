//! Hand-built modal derivations: numerals and successors at the word types
//! `forall a. !^m(a -o a) -o !^n(a -o a) -o a -o a`.

use std::sync::Arc;

use super::{StaDerivation, StaType};
use crate::error::{Error, Result};
use crate::names::{self, name};
use crate::numerals::{encode_num, succ_params, succ_term, Bit};

fn endo() -> StaType {
    StaType::Arrow(Arc::new(StaType::var("a")), Arc::new(StaType::var("a")))
}

pub fn sta_word_type(m: usize, n: usize) -> StaType {
    let a = StaType::var("a");
    let body = [StaType::bangs(endo(), m), StaType::bangs(endo(), n), a.clone()]
        .into_iter()
        .rev()
        .fold(a, |acc, t| StaType::Arrow(Arc::new(t), Arc::new(acc)));
    StaType::Forall(name("a"), Arc::new(body))
}

fn positive(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Shape("word type parameters start at 1".into()));
    }
    Ok(())
}

/// `|- num(v) : sta_word_type(m, n)` without promotions.
pub fn sta_numeral(v: u64, m: usize, n: usize) -> Result<StaDerivation> {
    positive(m, n)?;
    let digits: Vec<u8> = (0..64 - v.leading_zeros()).rev().map(|i| ((v >> i) & 1) as u8).collect();
    let mut d = StaDerivation::ax(name("x"), StaType::var("a"))?;
    let mut occ = [Vec::new(), Vec::new()];
    for &digit in digits.iter().rev() {
        let u = names::fresh();
        occ[digit as usize].push(u.clone());
        d = StaDerivation::ax(u, endo())?.loll_e(d)?;
    }
    for (digit, levels) in [(0usize, m), (1usize, n)] {
        let s = name(if digit == 0 { "s0" } else { "s1" });
        let mut group = std::mem::take(&mut occ[digit]);
        if group.is_empty() {
            let u = names::fresh();
            d = d.weak(u.clone(), endo())?;
            group.push(u);
        }
        d = d.mux(group, s.clone())?;
        for _ in 1..levels {
            d = d.mux(vec![s.clone()], s.clone())?;
        }
    }
    for v in ["x", "s1", "s0"] {
        d = d.loll_i(name(v))?;
    }
    let d = d.forall_i(name("a"))?;
    debug_assert!(d.subject.alpha_eq(&encode_num(v)));
    Ok(d)
}

/// `z : !^k A |- z : !^k A` by `k` promotions of an axiom.
fn promoted_identity(z: &str, t: StaType, k: usize) -> Result<StaDerivation> {
    (0..k).try_fold(StaDerivation::ax(name(z), t)?, |d, _| d.sp())
}

/// `|- succ_b : sta_word_type(m, n) -o sta_word_type(succ_params(b, m, n))`.
pub fn sta_succ(bit: Bit, m: usize, n: usize) -> Result<StaDerivation> {
    positive(m, n)?;
    let head = StaDerivation::ax(name("w"), sta_word_type(m, n))?.forall_e(StaType::var("a"))?;
    let (used, levels) = match bit {
        Bit::Zero => ("f0", m),
        Bit::One => ("f1", n),
    };
    let first = names::fresh();
    let second = names::fresh();
    let arg = |f: &str, lv: usize| -> Result<StaDerivation> {
        if f == used {
            promoted_identity(&first, endo(), lv)
        } else {
            promoted_identity(f, endo(), lv)
        }
    };
    let inner = StaDerivation::ax(second.clone(), endo())?.loll_e(StaDerivation::ax(name("x"), StaType::var("a"))?)?;
    let mut d = head.loll_e(arg("f0", m)?)?.loll_e(arg("f1", n)?)?.loll_e(inner)?;
    for _ in 0..levels {
        d = d.mux(vec![second.clone()], second.clone())?;
    }
    d = d.mux(vec![first, second], name(used))?;
    for v in ["x", "f1", "f0"] {
        d = d.loll_i(name(v))?;
    }
    let d = d.forall_i(name("a"))?.loll_i(name("w"))?;
    debug_assert!(d.subject.alpha_eq(&succ_term(bit)));
    debug_assert!({
        let (m2, n2) = succ_params(bit, m, n);
        super::sta_eq(&d.ty, &StaType::Arrow(Arc::new(sta_word_type(m, n)), Arc::new(sta_word_type(m2, n2))))
    });
    Ok(d)
}

/// `|- \x. x : a -o a`.
pub fn sta_identity() -> Result<StaDerivation> {
    StaDerivation::ax(name("x"), StaType::var("a"))?.loll_i(name("x"))
}

/// Named corpus entries.
pub fn sta_corpus() -> Result<Vec<(String, StaDerivation)>> {
    let mut out = vec![("identity".to_string(), sta_identity()?)];
    for v in [0, 1, 6, 9, 13] {
        for (m, n) in [(1, 1), (2, 3), (3, 1)] {
            out.push((format!("num({v}) at W[{m},{n}]"), sta_numeral(v, m, n)?));
        }
    }
    for bit in [Bit::Zero, Bit::One] {
        for (m, n) in [(1, 1), (2, 1), (1, 3), (3, 2)] {
            let b = if bit == Bit::Zero { 0 } else { 1 };
            out.push((format!("succ{b} at W[{m},{n}]"), sta_succ(bit, m, n)?));
        }
    }
    Ok(out)
}
