use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::{reducts, Db, Term};

pub const DEFAULT_SN_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnVerdict {
    Yes,
    No,
    Unknown,
}

/// Structural hash of every subterm of `db`, pushed together with the node.
fn fingerprints<'a>(db: &'a Db, out: &mut Vec<(u64, &'a Db)>) -> u64 {
    let mut h = DefaultHasher::new();
    match db {
        Db::Free(x) => {
            0u8.hash(&mut h);
            x.hash(&mut h);
        }
        Db::Bound(i) => {
            1u8.hash(&mut h);
            i.hash(&mut h);
        }
        Db::Abs(b) => {
            2u8.hash(&mut h);
            fingerprints(b, out).hash(&mut h);
        }
        Db::App(f, a) => {
            3u8.hash(&mut h);
            fingerprints(f, out).hash(&mut h);
            fingerprints(a, out).hash(&mut h);
        }
    }
    let v = h.finish();
    out.push((v, db));
    v
}

fn fingerprint(db: &Db) -> u64 {
    let mut scratch = Vec::new();
    fingerprints(db, &mut scratch)
}

/// Ancestors on the current reduction path, indexed by fingerprint.
#[derive(Default)]
pub(crate) struct PathIndex {
    by_fp: HashMap<u64, Vec<Db>>,
}

impl PathIndex {
    pub(crate) fn push(&mut self, db: &Db) {
        self.by_fp.entry(fingerprint(db)).or_default().push(db.clone());
    }

    pub(crate) fn pop(&mut self, db: &Db) {
        let fp = fingerprint(db);
        if let Some(v) = self.by_fp.get_mut(&fp) {
            v.pop();
            if v.is_empty() {
                self.by_fp.remove(&fp);
            }
        }
    }

    /// Does some subterm of `db` coincide with a path ancestor? If `db` was
    /// reached from that ancestor by at least one step, it reduces to a term
    /// containing itself and so has an infinite reduction.
    pub(crate) fn embeds_ancestor(&self, db: &Db) -> bool {
        if self.by_fp.is_empty() {
            return false;
        }
        let mut subs = Vec::new();
        fingerprints(db, &mut subs);
        subs.iter().any(|(fp, s)| {
            self.by_fp
                .get(fp)
                .is_some_and(|v| v.iter().any(|a| a == *s))
        })
    }
}

/// Bounded strong-normalization oracle: depth-first search over all reducts.
pub fn is_sn(m: &Term, fuel: u64) -> SnVerdict {
    struct Frame {
        db: Db,
        pending: Vec<Term>,
    }
    let mut known: HashSet<Db> = HashSet::new();
    let mut path = PathIndex::default();
    let mut stack: Vec<Frame> = Vec::new();
    let mut expansions = 0u64;

    let root = m.to_db();
    let rs = reducts(m);
    if rs.is_empty() {
        return SnVerdict::Yes;
    }
    expansions += 1;
    path.push(&root);
    stack.push(Frame { db: root, pending: rs });

    while let Some(top) = stack.last_mut() {
        let Some(t) = top.pending.pop() else {
            let done = stack.pop().unwrap();
            path.pop(&done.db);
            known.insert(done.db);
            continue;
        };
        let db = t.to_db();
        if known.contains(&db) {
            continue;
        }
        if path.embeds_ancestor(&db) {
            return SnVerdict::No;
        }
        let rs = reducts(&t);
        if rs.is_empty() {
            known.insert(db);
            continue;
        }
        expansions += 1;
        if expansions > fuel {
            return SnVerdict::Unknown;
        }
        path.push(&db);
        stack.push(Frame { db, pending: rs });
    }
    SnVerdict::Yes
}
