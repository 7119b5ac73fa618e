//! Generalized exchange statistics defined by a cross operator `T` and an
//! optional braid operator `B`.
//!
//! - [`operators`]: operator types, the operator-file format and the
//!   algebraic consistency checks.
//! - [`fock`]: Fock sectors, creation/annihilation matrices, Gram matrices,
//!   positivity and braid-ideal quotients.
//! - [`wick`]: symbolic Wick-algebra expressions and normal ordering.
//! - [`catalog`]: built-in presets.
//! - [`linalg`]: the dense complex linear algebra underneath.

pub mod catalog;
pub mod fock;
pub mod linalg;
pub mod operators;
pub mod wick;

pub use catalog::{make_preset, Preset, PresetKind};
pub use linalg::{Complex64, Matrix, Tolerance};
pub use operators::{validate_system, StatisticsSystem, ValidationReport};
