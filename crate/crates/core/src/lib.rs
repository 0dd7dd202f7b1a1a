//! Numerical core for Lawlor necks, Joyce-Lee-Tsui expanders, asymptotic expander
//! modes, plumbing charts and graded Floer bookkeeping over GF(2).
//!
//! The crate is `no_std` (with `alloc`); IO and reporting live in the `slag` crate.
#![no_std]
// Guards like `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod cm;
pub mod error;
pub mod floer;
pub mod graphs;
pub mod jlt;
pub mod lawlor;
pub mod linalg;
pub mod neck;
pub mod ode;
pub mod plumbing;
pub mod quadrature;

pub use error::{Error, Result};
