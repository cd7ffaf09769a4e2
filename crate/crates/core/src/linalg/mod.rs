//! Exact integer and rational matrix kernels.

mod diag;
mod hnf;
mod kernel;
mod matrix;
mod snf;

pub use diag::{congruence_diagonalize, inertia, Congruence, Inertia};
pub use hnf::{hermite_normal_form, Hermite};
pub use kernel::kernel_basis;
pub use matrix::{int_vec, rat_vec, IntMatrix, Matrix, RatMatrix};
#[allow(unused_imports)]
pub(crate) use matrix::{IntRow, IntValue};
pub use snf::{smith_normal_form, Smith};
