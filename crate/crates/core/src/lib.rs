//! Jacobi sums of cyclotomic fields, p-adic logarithms of cyclotomic units,
//! and the p-part of Jacobians of Fermat quotient curves.

pub mod arith;
pub mod cache;
pub mod charpoly;
pub mod config;
pub mod curve;
pub mod criteria;
pub mod cyc;
pub mod error;
pub mod ff;
pub mod jacobi;
pub mod verify;

pub use error::{Error, Result};
