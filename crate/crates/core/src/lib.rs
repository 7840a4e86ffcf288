//! Numerical toolkit for effective denseness of the Hurwitz zeta-function
//! ζ(s;α) with algebraic irrational parameter α.
//!
//! * [`zeta`]: reference evaluation of ζ^{(k)}(s;α) with error radii.
//! * [`afe`]: truncated Dirichlet sums near the line σ = 1.
//! * [`fit`]: twisted Dirichlet polynomials and target fitting.
//! * [`algebraic`]: exact algebraic parameters, Liouville bounds, twist families.
//! * [`kernel`]: mollifier kernels and kernel mass along the log-curve.
//! * [`effective`]: effective constants and the parameter budget.
//! * [`search`]: shift search and function approximation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod afe;
pub mod algebraic;
pub mod effective;
pub mod error;
pub mod fit;
pub mod kernel;
pub mod search;
pub mod zeta;

pub use error::{Error, Result};
