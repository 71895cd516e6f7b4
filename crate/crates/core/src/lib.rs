//! Exact computations on complex hyperplane arrangements: intersection lattices,
//! Orlik–Solomon algebras, Aomoto complexes, Massey products, bar constructions,
//! holonomy Lie algebras, plus numeric iterated integrals.

pub mod aomoto;
pub mod bar;
pub mod arrangement;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod holonomy;
pub mod itint;
pub mod laurent;
pub mod linalg;
pub mod massey;
pub mod os;
pub mod scalar;

pub use error::{Error, ParseError, Result};
