//! Hand-built stratified derivations used as fixtures by the tests and the
//! command line.

use crate::derivation::{ax, loll_e, loll_i, mux, Derivation};
use crate::error::Result;
use crate::names::name;
use crate::numerals::{iter_derivation, iter_succ_derivation, numeral_derivation, succ_derivation, Bit};
use crate::types::Type;

/// `|- \x. x : a -o a`.
pub fn identity() -> Result<Derivation> {
    loll_i(ax(name("x"), Type::var("a"))?, name("x"))
}

/// `|- \x. x x : {a -o b, a} -o b`.
pub fn self_application() -> Result<Derivation> {
    let a = Type::var("a");
    let f = ax(name("x1"), Type::arrow(a.clone(), Type::var("b"))?)?;
    let d = loll_e(f, ax(name("x2"), a)?)?;
    loll_i(mux(d, vec![name("x1"), name("x2")], name("x"))?, name("x"))
}

/// Named fixtures: identity, self-application, numerals, successors, the
/// iterator and its application to a successor.
pub fn str_corpus() -> Result<Vec<(String, Derivation)>> {
    let mut out = vec![("identity".to_string(), identity()?), ("self-application".to_string(), self_application()?)];
    for n in [0, 6, 9] {
        for (h, k) in [(1, 1), (2, 3)] {
            out.push((format!("num({n}) at W_I[{h},{k}]"), numeral_derivation(n, h, k)?.derivation));
        }
    }
    for (bit, b) in [(Bit::Zero, 0), (Bit::One, 1)] {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            out.push((format!("succ{b} at W_I[{m},{n}]"), succ_derivation(bit, m, n)?));
        }
    }
    out.push(("ITER_3".to_string(), iter_derivation(Bit::Zero, 3, 1, 1)?));
    out.push(("ITER_3 succ0".to_string(), iter_succ_derivation(Bit::Zero, 3, 1, 1)?));
    let applied = loll_e(iter_succ_derivation(Bit::Zero, 3, 1, 1)?, numeral_derivation(5, 1, 1)?.derivation)?;
    out.push(("ITER_3 succ0 num(5)".to_string(), applied));
    out.push(("ITER_2 succ1".to_string(), iter_succ_derivation(Bit::One, 2, 1, 1)?));
    Ok(out)
}
