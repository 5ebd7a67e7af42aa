//! Exact-arithmetic workbench for rational elliptic surfaces, their
//! quadratic base changes to K3 surfaces with Enriques involutions, and the
//! genus and dimension bookkeeping of Severi varieties on them.

pub mod base_change;
pub mod curve;
pub mod error;
pub mod fiber_trace;
pub mod field;
pub mod io;
pub mod lattice;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod sections;
pub mod severi;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
