//! Exact probability in λ-rings.
//!
//! The crate provides truncated symmetric series with exact coefficients, the
//! plethystic exponential and logarithm, truncated big Witt vectors with
//! admissible ℤ-sets, and three statistical engines built on them: random
//! matrix moment generating functions, Kummer character L-function statistics
//! over `F_q[x]`, and point-count statistics of smooth hypersurfaces. The
//! `report` module compares limits through congruences in the bounded Witt
//! ring and drives the `lamstat` command line tool.

pub mod arith;
pub mod charstat;
pub mod coeff;
pub mod error;
pub mod ff;
pub mod hyperstat;
pub mod par;
pub mod partition;
pub mod plethy;
pub mod randmat;
pub mod report;
pub mod symfunc;
pub mod witt;

pub use coeff::{CycloHalf, LambdaScalar, Rat};
pub use error::{Error, Result};
pub use partition::Partition;
