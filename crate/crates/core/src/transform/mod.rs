//! Derivation-level substitution and typed reduction.

mod reduce;
mod subst;

pub use reduce::{
    eliminate_forall_detour, normalize_typed, normalize_typed_with, reorder_renaming_quantifier,
    reorder_steps, subject_reduce, DetourReport, Normalization, Strategy, TraceRow,
};
pub use subst::{set_weight_checking, subst_derivation, subst_stats, SubstStats};
