//! Factorization invariants of Puiseux-style monoids, monoid algebras and
//! `D+M` power-series rings, computed exactly at desk scale.

pub mod algebra;
pub mod catalog;
pub mod dplusm;
pub mod error;
pub mod monoid;
pub mod numtheory;

pub use error::{Error, Result};
pub use monoid::*;
pub use numtheory::Rational;
