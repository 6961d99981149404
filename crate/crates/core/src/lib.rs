//! Principal spectrum and principal Lyapunov exponents of one-dimensional
//! nonautonomous and random linear parabolic equations
//!
//! ```text
//! u_t = a11(x) u_xx + a1(x) u_x + c(theta_t omega, x) u,   x in (0, L)
//! ```
//!
//! with Dirichlet, Neumann or time-dependent Robin boundary conditions, and
//! their comparison with the principal eigenvalue of time- or
//! ensemble-averaged elliptic problems.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod coefficients;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod harness;
pub mod operator;
pub mod spectrum;
pub mod tridiag;

pub use error::{Error, Result};
