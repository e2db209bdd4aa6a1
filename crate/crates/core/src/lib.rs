#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` guards reject NaN on purpose

pub mod analyzer;
pub mod coefficient;
pub mod error;
pub mod interp;
pub mod mollifier;
pub mod oracle;
pub mod quadrature;
pub mod runner;
pub mod transport;

pub use error::{Error, Result};
