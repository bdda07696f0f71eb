//! Truncated polynomials in the odd times `t_n` (and `t_{-n}`, and primed
//! copies), Laurent windows in a spectral parameter `z`, Miwa maps and
//! Hirota bilinear derivatives.
//!
//! Truncation is by weighted degree: `t_n` weighs `|n|`. Positive and
//! negative times are graded separately (see [`Cap`]).

mod hirota;
mod laurent;
mod miwa;
mod poly;

pub use hirota::{hirota, HirotaOp};
pub use laurent::{
    exp_xi, miwa_shift, miwa_shift_on, residue_z0, LaurentSeries, ShiftSign, Window,
};
pub use miwa::{miwa_times, Side, TimeVector};
pub use poly::{poly_exp, Cap, Monomial, OddPoly, Var, UNBOUNDED};
