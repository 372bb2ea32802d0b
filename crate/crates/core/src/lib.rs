//! Spectral analysis of one-sided tri-diagonal operator pencils L + zB
//! with quadratic diagonal q_k = k^2 and power-growth off-diagonals:
//! eigenvalue branches E_n(z) and their continuation, exact Taylor
//! coefficients of the branches at z = 0, regularized traces, and the
//! branch points and monodromy of the spectral Riemann surface.
//!
//! The built-in families are the Mathieu matrices (alpha = 0), the
//! simplified Jaynes-Cummings matrices (alpha = 1/2), the general power
//! family b_k = c_k = k^alpha, the Whittaker-Hill family b_k = t - k,
//! c_k = t + k, and custom sequences with an explicit growth certificate
//! |b_k|, |c_k| <= M k^alpha.

pub mod asympt;
pub mod dd;
pub mod eigen;
pub mod error;
pub mod family;
pub mod matrix;
pub mod regions;
pub mod series;
pub mod surface;
pub mod taylor;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use family::{Alpha, FamilySpec, OperatorFamily, Parity};
pub use matrix::{truncate, TruncatedMatrix};
pub use regions::{resolvent_norm_bound, Region, Regions};
