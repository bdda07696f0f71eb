//! Exact arithmetic for Schur Q-functions, Pfaffian point processes and
//! BKP-type Hirota identities.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system, the command line or JSON lives in the `pfafflow` crate.
//!
//! Module map:
//!
//! * [`series`]: truncated polynomials in odd times, Laurent windows, Miwa
//!   shifts and Hirota derivatives.
//! * [`pfaffian`]: skew matrices and Pfaffians (even, bordered, de Bruijn).
//! * [`schurq`]: `q_k`, `q_{a,b}`, Schur Q/P functions and vacuum
//!   expectations of neutral-fermion modes.
//! * [`measure`]: the shifted Schur measure and its Pfaffian kernel.
//! * [`matrixpp`]: Pfaffian point processes on finite measure spaces.
//! * [`bkp`]: tau functions from group-like elements and bilinear checks.
#![cfg_attr(not(test), no_std)]
// Matrix code reads more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod bkp;
pub mod error;
pub mod linalg;
pub mod matrixpp;
pub mod measure;
pub mod partition;
pub mod pfaffian;
pub mod rational;
pub mod schurq;
pub mod series;

pub use algebra::{Field, Ring, Sqrt2Scaled};
pub use error::{Error, Result};
pub use partition::StrictPartition;
pub use pfaffian::SkewMatrix;
pub use rational::Q;
pub use series::{Cap, LaurentSeries, OddPoly, TimeVector, Var, Window};
