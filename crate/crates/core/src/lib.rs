//! Exact computations for chiral quadratic data on the affine line: Laurent
//! matrices over `Q[t, t^-1]`, quadratic duality, twisted pairs, and a small
//! vertex algebra engine for Maurer-Cartan checks.

// index loops mirror the tensor notation
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod datum;
pub mod laurent;
pub mod qls;
pub mod scalar;
pub mod vertex;
