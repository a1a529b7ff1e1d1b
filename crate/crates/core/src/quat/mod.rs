//! Quaternion scalars, small dense quaternionic matrices and their spectral
//! helpers.

mod matrix;
mod quaternion;
pub mod spectral;

pub use matrix::QMatrix;
pub use quaternion::{default_zero_eps, symmetric_product, Quaternion, SYMMETRIC_PRODUCT_CAP};
pub use spectral::{complexify, hermitian_eigenvalues, is_psd, min_eigenvalue, rank1_spectral, CMatrix};
