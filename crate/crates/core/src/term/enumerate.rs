use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use super::{Db, Term};
use crate::names::Name;

/// Largest size accepted by [`enumerate_closed_terms`]. Size 12 has a few
/// hundred thousand closed terms; beyond that memory use grows quickly.
pub const MAX_ENUM_SIZE: u64 = 13;

/// Number of terms of `size` whose free variables are among `depth` enclosing binders.
fn count(size: u64, depth: u64, memo: &mut HashMap<(u64, u64), u128>) -> u128 {
    if size == 0 {
        return 0;
    }
    if size == 1 {
        return depth as u128;
    }
    if let Some(&c) = memo.get(&(size, depth)) {
        return c;
    }
    let mut c = count(size - 1, depth + 1, memo);
    for i in 1..size - 1 {
        let left = count(i, depth, memo);
        if left != 0 {
            c = c.saturating_add(left.saturating_mul(count(size - 1 - i, depth, memo)));
        }
    }
    memo.insert((size, depth), c);
    c
}

/// Number of closed terms of exactly `size`, up to α.
pub fn count_closed_terms(size: u64) -> u128 {
    count(size, 0, &mut HashMap::new())
}

fn shapes(size: u64, depth: u64, memo: &mut HashMap<(u64, u64), Arc<Vec<Db>>>) -> Arc<Vec<Db>> {
    if let Some(v) = memo.get(&(size, depth)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.extend((0..depth as u32).map(Db::Bound));
    } else if size >= 2 {
        for b in shapes(size - 1, depth + 1, memo).iter() {
            out.push(Db::Abs(Arc::new(b.clone())));
        }
        for i in 1..size - 1 {
            let left = shapes(i, depth, memo);
            if left.is_empty() {
                continue;
            }
            let right = shapes(size - 1 - i, depth, memo);
            for f in left.iter() {
                for a in right.iter() {
                    out.push(Db::App(Arc::new(f.clone()), Arc::new(a.clone())));
                }
            }
        }
    }
    let out = Arc::new(out);
    memo.insert((size, depth), out.clone());
    out
}

fn binder_name(i: usize) -> Name {
    const BASE: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    if i < BASE.len() {
        BASE[i].into()
    } else {
        format!("{}{}", BASE[i % BASE.len()], i / BASE.len()).into()
    }
}

/// Name binders by their preorder index, so that all binders are distinct.
fn name_closed(db: &Db) -> Term {
    fn go(db: &Db, env: &mut Vec<Name>, next: &mut usize) -> Term {
        match db {
            Db::Bound(i) => Term::Var(env[env.len() - 1 - *i as usize].clone()),
            Db::Free(x) => Term::Var(x.clone()),
            Db::Abs(b) => {
                let x = binder_name(*next);
                *next += 1;
                env.push(x.clone());
                let body = go(b, env, next);
                env.pop();
                Term::abs(x, body)
            }
            Db::App(f, a) => {
                let f = go(f, env, next);
                Term::app(f, go(a, env, next))
            }
        }
    }
    go(db, &mut Vec::new(), &mut 0)
}

/// Closed terms by increasing size, each α-class exactly once.
pub struct ClosedTerms {
    max_size: u64,
    size: u64,
    batch: std::vec::IntoIter<Db>,
    memo: HashMap<(u64, u64), Arc<Vec<Db>>>,
}

impl Iterator for ClosedTerms {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            if let Some(db) = self.batch.next() {
                return Some(name_closed(&db));
            }
            if self.size >= self.max_size {
                return None;
            }
            self.size += 1;
            let v = shapes(self.size, 0, &mut self.memo);
            self.batch = (*v).clone().into_iter();
        }
    }
}

/// # Panics
/// If `max_size` exceeds [`MAX_ENUM_SIZE`].
pub fn enumerate_closed_terms(max_size: u64) -> ClosedTerms {
    assert!(max_size <= MAX_ENUM_SIZE, "enumeration limited to size {MAX_ENUM_SIZE}");
    ClosedTerms { max_size, size: 0, batch: Vec::new().into_iter(), memo: HashMap::new() }
}

/// Uniformly random closed term of exactly `size`, or `None` if there is none.
pub fn random_closed_term<R: Rng + ?Sized>(rng: &mut R, size: u64) -> Option<Term> {
    let mut memo = HashMap::new();
    let total = count(size, 0, &mut memo);
    if total == 0 {
        return None;
    }
    fn pick<R: Rng + ?Sized>(
        rng: &mut R,
        size: u64,
        depth: u64,
        memo: &mut HashMap<(u64, u64), u128>,
    ) -> Db {
        if size == 1 {
            return Db::Bound(rng.gen_range(0..depth as u32));
        }
        let total = count(size, depth, memo);
        let mut k = rng.gen_range(0..total);
        let abs = count(size - 1, depth + 1, memo);
        if k < abs {
            return Db::Abs(Arc::new(pick(rng, size - 1, depth + 1, memo)));
        }
        k -= abs;
        for i in 1..size - 1 {
            let c = count(i, depth, memo).saturating_mul(count(size - 1 - i, depth, memo));
            if k < c {
                let f = pick(rng, i, depth, memo);
                let a = pick(rng, size - 1 - i, depth, memo);
                return Db::App(Arc::new(f), Arc::new(a));
            }
            k -= c;
        }
        unreachable!("counts are consistent")
    }
    Some(name_closed(&pick(rng, size, 0, &mut memo)))
}
