use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::subst::subst_derivation;
use crate::derivation::{
    check, forall_i, freshen_locals, loll_e, loll_i, peel_chain, rank, reapply, strat,
    subst_tyvar_in_derivation, weight_at, Derivation, Meta, Step,
};
use crate::error::{Error, Result};
use crate::term::{leftmost_outermost, redex_positions, Dir, NotARedex, RedexPosition, Term};

/// What one typed reduction step removed, and the weights around it.
#[derive(Clone, Debug, Serialize)]
pub struct DetourReport {
    pub forall_detours_removed: usize,
    pub loll_detours_removed: usize,
    pub rank: u64,
    #[serde(serialize_with = "ser_big")]
    pub weight_before: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub weight_after: BigUint,
}

fn ser_big<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Replace a quantifier elimination directly above its introduction by the
/// instantiated premise.
pub fn eliminate_forall_detour(d: &Derivation, path: &[usize]) -> Result<Derivation> {
    let node = d.node_at(path).ok_or(Error::BadPath)?;
    let Meta::ForallE { inst, .. } = &node.meta else {
        return Err(Error::NotADetour);
    };
    let intro = &node.premises[0];
    let Meta::ForallI { tyvar } = &intro.meta else {
        return Err(Error::NotADetour);
    };
    let inner = subst_tyvar_in_derivation(&intro.premises[0], tyvar, inst)?;
    d.replace_at(path, inner)
}

/// Move the quantifier steps of a chain below its renaming steps, keeping
/// the relative order inside each group.
pub fn reorder_steps(steps: &[Step]) -> Vec<Step> {
    let (q, r): (Vec<Step>, Vec<Step>) = steps.iter().cloned().partition(Step::is_quantifier);
    q.into_iter().chain(r).collect()
}

/// Reorder the top `len` unary nodes of `d` so that quantifier rules come
/// first (nearest the leaves) and weakening and multiplexor rules last.
pub fn reorder_renaming_quantifier(d: &Derivation, len: usize) -> Result<Derivation> {
    let mut steps = Vec::with_capacity(len);
    let mut cur = d;
    for _ in 0..len {
        let s = Step::of(cur).ok_or(Error::NotAChain(cur.rule()))?;
        steps.push(s);
        cur = &cur.premises[0];
    }
    steps.reverse();
    reorder_steps(&steps).iter().try_fold(cur.clone(), |acc, s| s.apply(acc))
}

/// Reduce the redex at `at` in the subject, returning the transformed
/// derivation of the reduct.
pub fn subject_reduce(d: &Derivation, at: &RedexPosition) -> Result<(Derivation, DetourReport)> {
    check(d)?;
    reduce_checked(d, at)
}

fn reduce_checked(d: &Derivation, at: &RedexPosition) -> Result<(Derivation, DetourReport)> {
    match d.subject().subterm(&at.0) {
        Some(Term::App(f, _)) if matches!(**f, Term::Abs(..)) => {}
        _ => return Err(NotARedex(at.clone()).into()),
    }
    let mut counts = (0, 0);
    let out = reduce_at(d, &at.0, &mut counts)?;
    let r = rank(d);
    let report = DetourReport {
        forall_detours_removed: counts.0,
        loll_detours_removed: counts.1,
        rank: r,
        weight_before: weight_at(d, r),
        weight_after: weight_at(&out, r),
    };
    debug_assert!(report.weight_after < report.weight_before, "weight did not decrease");
    Ok((out, report))
}

fn reduce_at(d: &Derivation, pos: &[Dir], counts: &mut (usize, usize)) -> Result<Derivation> {
    match &d.meta {
        Meta::LollE if pos.is_empty() => loll_detour(d, counts),
        Meta::LollE => {
            let (f, a) = ((*d.premises[0]).clone(), (*d.premises[1]).clone());
            match pos[0] {
                Dir::Fun => loll_e(reduce_at(&f, &pos[1..], counts)?, a),
                Dir::Arg => loll_e(f, reduce_at(&a, &pos[1..], counts)?),
                Dir::Body => Err(Error::BadPath),
            }
        }
        Meta::LollI { var } => match pos.first() {
            Some(Dir::Body) => loll_i(reduce_at(&d.premises[0], &pos[1..], counts)?, var.clone()),
            _ => Err(Error::BadPath),
        },
        Meta::Ax { .. } => Err(Error::BadPath),
        Meta::St => {
            // every premise types the same subject; count the detours once
            let mut first = None;
            let mut ps = Vec::with_capacity(d.premises.len());
            for p in &d.premises {
                let mut c = (0, 0);
                ps.push(reduce_at(p, pos, &mut c)?);
                first.get_or_insert(c);
            }
            let c = first.unwrap_or_default();
            counts.0 += c.0;
            counts.1 += c.1;
            strat(ps)
        }
        meta => reapply(meta, vec![reduce_at(&d.premises[0], pos, counts)?]),
    }
}

/// Root case: the function premise is an abstraction under a chain of
/// renaming and quantifier rules.
fn loll_detour(d: &Derivation, counts: &mut (usize, usize)) -> Result<Derivation> {
    let f = freshen_locals(&d.premises[0])?;
    let arg = &*d.premises[1];
    let (base, steps) = peel_chain(&f);
    if !matches!(base.meta, Meta::LollI { .. }) {
        return Err(Error::Shape(format!("function premise ends in {}", base.rule())));
    }
    let steps = reorder_steps(&steps);
    let split = steps.iter().take_while(|s| s.is_quantifier()).count();
    let (quant, renaming) = steps.split_at(split);

    // cancel introduction/elimination pairs bottom-up
    let mut cur = base;
    for s in quant {
        match s {
            Step::ForallI { tyvar } => cur = forall_i(cur, tyvar.clone())?,
            Step::ForallE { inst } => {
                let Meta::ForallI { tyvar } = &cur.meta else {
                    return Err(Error::Shape("quantifier chain does not cancel".into()));
                };
                cur = subst_tyvar_in_derivation(&cur.premises[0], tyvar, inst)?;
                counts.0 += 1;
            }
            _ => unreachable!(),
        }
    }
    let Meta::LollI { var } = &cur.meta else {
        return Err(Error::Shape("quantifier chain does not cancel".into()));
    };
    let body = &*cur.premises[0];
    let reduced = subst_derivation(std::slice::from_ref(arg), body, std::slice::from_ref(var))?;
    counts.1 += 1;
    renaming.iter().try_fold(reduced, |acc, s| s.apply(acc))
}

/// Choice of redex at each step of typed normalization.
#[derive(Clone, Copy, Debug)]
pub enum Strategy {
    LeftmostOutermost,
    Random(u64),
}

/// One row per reduction step: the state after that step.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub step: u64,
    pub position: String,
    pub subject_size: u64,
    #[serde(serialize_with = "ser_bigs")]
    pub weights: Vec<BigUint>,
}

fn ser_bigs<S: serde::Serializer>(ns: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(|n| n.to_string()))
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub deriv: Derivation,
    pub steps: u64,
    /// Largest subject size met, the initial one included.
    pub max_size: u64,
    /// Weights of the initial derivation at the requested points.
    pub initial: Vec<BigUint>,
    pub trace: Vec<TraceRow>,
}

/// Normalize a derivation by repeated typed reduction, tracing weights at
/// the rank of the initial derivation.
pub fn normalize_typed(d: &Derivation, strategy: Strategy) -> Result<Normalization> {
    normalize_typed_with(d, strategy, &[rank(d)], u64::MAX)
}

/// As [`normalize_typed`], tracing weights at each of `rs` and stopping with
/// [`Error::Fuel`] after `fuel` steps.
pub fn normalize_typed_with(d: &Derivation, strategy: Strategy, rs: &[u64], fuel: u64) -> Result<Normalization> {
    check(d)?;
    let weights = |d: &Derivation| rs.iter().map(|&r| weight_at(d, r)).collect::<Vec<_>>();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(StdRng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut cur = d.clone();
    let mut out = Normalization {
        deriv: d.clone(),
        steps: 0,
        max_size: d.subject().size(),
        initial: weights(d),
        trace: Vec::new(),
    };
    loop {
        let pos = match &mut rng {
            None => leftmost_outermost(cur.subject()),
            Some(rng) => {
                let all = redex_positions(cur.subject());
                (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())].clone())
            }
        };
        let Some(pos) = pos else { break };
        if out.steps == fuel {
            return Err(Error::Fuel);
        }
        let (next, _) = reduce_checked(&cur, &pos)?;
        cur = next;
        out.steps += 1;
        let size = cur.subject().size();
        out.max_size = out.max_size.max(size);
        out.trace.push(TraceRow { step: out.steps, position: pos.to_string(), subject_size: size, weights: weights(&cur) });
    }
    debug_assert!(check(&cur).is_ok());
    out.deriv = cur;
    Ok(out)
}
