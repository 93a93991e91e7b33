use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::{check, Derivation, Meta, Violation};

/// Subject size, rank, degree, and weights on demand.
#[derive(Clone, Debug)]
pub struct Measures {
    pub subject_size: u64,
    pub rank: u64,
    pub degree: u64,
    deriv: Arc<Derivation>,
}

impl Measures {
    pub fn weight_at(&self, r: u64) -> BigUint {
        weight_at(&self.deriv, r)
    }
}

/// Measures of a valid derivation.
pub fn measures(d: &Derivation) -> Result<Measures, Violation> {
    check(d)?;
    Ok(Measures {
        subject_size: d.subject().size(),
        rank: rank(d),
        degree: degree(d),
        deriv: Arc::new(d.clone()),
    })
}

/// Largest number of contracted variables free in the premise subject of a
/// multiplexor, and at least 1.
pub fn rank(d: &Derivation) -> u64 {
    fn go(d: &Derivation) -> u64 {
        let here = match &d.meta {
            Meta::M { domain, .. } => {
                let p = d.premises[0].subject();
                domain.iter().filter(|y| p.is_free(y)).count() as u64
            }
            _ => 0,
        };
        d.premises.iter().map(|p| go(p)).fold(here, u64::max)
    }
    go(d).max(1)
}

/// Maximal nesting of stratification nodes.
pub fn degree(d: &Derivation) -> u64 {
    let below = d.premises.iter().map(|p| degree(p)).max().unwrap_or(0);
    match d.meta {
        Meta::St => below + 1,
        _ => below,
    }
}

pub fn weight_at(d: &Derivation, r: u64) -> BigUint {
    match &d.meta {
        Meta::Ax { .. } => BigUint::one(),
        Meta::LollI { .. } => weight_at(&d.premises[0], r) + 1u32,
        Meta::LollE => weight_at(&d.premises[0], r) + weight_at(&d.premises[1], r) + 1u32,
        Meta::St => {
            let max = d.premises.iter().map(|p| weight_at(p, r)).max().unwrap_or_default();
            max * r
        }
        Meta::W { .. } | Meta::M { .. } | Meta::ForallI { .. } | Meta::ForallE { .. } => {
            weight_at(&d.premises[0], r)
        }
    }
}
