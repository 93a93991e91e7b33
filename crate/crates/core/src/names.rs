//! Identifiers and the fresh-name supply.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub type Name = Arc<str>;

/// Prefix reserved for generated names. The surface parsers reject it.
pub const RESERVED_PREFIX: &str = "_g";

static NEXT: AtomicU64 = AtomicU64::new(0);

/// A name never produced before by this process.
pub fn fresh() -> Name {
    let n = NEXT.fetch_add(1, Ordering::Relaxed);
    format!("{RESERVED_PREFIX}{n}").into()
}

pub fn is_reserved(ident: &str) -> bool {
    ident.starts_with(RESERVED_PREFIX)
}

/// Make sure later calls to [`fresh`] cannot collide with `ident`, which was
/// read back from a serialized artifact.
pub fn reserve(ident: &str) {
    if let Some(n) = ident
        .strip_prefix(RESERVED_PREFIX)
        .and_then(|d| d.parse::<u64>().ok())
    {
        NEXT.fetch_max(n + 1, Ordering::Relaxed);
    }
}

pub fn name(s: &str) -> Name {
    Arc::from(s)
}
