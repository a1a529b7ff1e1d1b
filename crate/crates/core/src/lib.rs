// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fueter;
pub mod quat;
pub mod rkhs;
pub mod ops;
pub mod sample;
pub mod schur;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use fueter::{MultiIndex, PointH};
pub use quat::{QMatrix, Quaternion};
pub use series::FueterSeries;
