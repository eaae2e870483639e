//! Collisions of plane curve singularities.

pub mod algebra;
pub mod catalog;
pub mod collision;
pub mod error;
pub mod flatlimit;
pub mod invariants;
pub mod newton;
pub mod render;
pub mod tables;
pub mod trees;

pub use algebra::{Monomial, MonomialOrder, Polynomial, Rational, Var};
pub use error::{Error, Result};
