//! Max-plus scalars and dense matrices.

mod matrix;
mod scalar;

pub use matrix::{MaxPlusMatrix, LAMBDA_TOLERANCE};
pub use scalar::MaxPlus;

use crate::error::Result;

pub fn mp_multiply(a: &MaxPlusMatrix, b: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
    a.multiply(b)
}

pub fn mp_power(a: &MaxPlusMatrix, k: usize) -> Result<MaxPlusMatrix> {
    a.power(k)
}

pub fn kleene_star(a: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
    a.kleene_star()
}

pub fn metric_matrix(a: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
    a.metric_matrix()
}
