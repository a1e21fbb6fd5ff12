// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circlecs;
pub mod cli;
pub mod error;
pub mod halfcircle;
pub mod linalg;
pub mod moments;
pub mod quadrature;
pub mod specfun;
pub mod whquant;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
