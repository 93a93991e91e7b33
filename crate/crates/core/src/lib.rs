//! A workbench for stratified type assignment on the pure λ-calculus.

pub mod corpus;
pub mod derivation;
mod error;
pub mod inference;
pub mod inter;
pub mod names;
pub mod numerals;
pub mod sta;
pub mod term;
pub mod transform;
pub mod types;

pub use error::{Error, Result};
pub use names::Name;
