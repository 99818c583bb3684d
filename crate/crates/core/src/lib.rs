//! Finite-scale entropy theory for shift actions of amenable groups.
//!
//! The crate computes topological entropy by cover counting, Bowen
//! (dimensional) entropy through Carathéodory outer measures of Bowen-ball
//! covers, its weighted (fractional) counterpart through an exact rational
//! LP, and Brin–Katok local entropy of shift-invariant measures. Symbolic
//! systems over ℤ^d and the discrete Heisenberg group make every Bowen ball
//! an exact cylinder, so all quantities are computed exactly at finite
//! scale and logarithms are taken only on output.

pub mod bowen;
pub mod combinatorics;
pub mod entropy_top;
pub mod error;
pub mod exec;
pub mod group;
pub mod measures;
pub mod numeric;
pub mod shift_space;

pub use error::{Error, Result};
pub use exec::Execution;
