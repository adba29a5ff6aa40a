//! Generalized Weierstrass-type functions `W(x) = Σ λⁿ φ(bⁿx)` for ℤ-periodic
//! planar curves `φ`, together with the machinery needed to study the box
//! dimension of their graphs:
//!
//! - [`curve`]: periodic Lipschitz curves and their geometric constants
//!   (Lipschitz constant, oscillation, inscribed disc of a bounded
//!   complement component).
//! - [`series`]: truncated evaluation of `W`, exact b-adic evaluation and the
//!   first/second order telescoping residuals.
//! - [`cover`]: b-adic cube indexing and occupied-cube counting for graphs.
//! - [`dims`]: dimension formulas, threshold constants and log-log fits.
//! - [`inclusion`]: sampled verification of the covering and disc-in-image
//!   set inclusions.

pub mod cover;
pub mod curve;
pub mod dims;
pub mod error;
pub mod inclusion;
pub mod point;
pub mod series;
mod spatial;

pub use crate::error::{Error, Result};
pub use crate::point::Point2;
