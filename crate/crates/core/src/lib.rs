//! Monomial crystals of type A_n^(1) (n odd), closedness tests, and explicit
//! extremal loop weight modules of the quantum toroidal algebra, with exact
//! arithmetic over Q(q) and over cyclotomic fields.

pub mod closedness;
pub mod crystal;
pub mod error;
pub mod lattice;
pub mod monomial;
pub mod qcoeff;
pub mod tableaux;
pub mod torep;
pub mod unity;

pub use error::{Error, Result};
