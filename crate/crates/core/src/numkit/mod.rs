//! Deterministic numerical substrate shared by every other module.
//!
//! Everything is 64-bit. Kernels come in forward/backward pairs; the backward
//! kernels are checked against [`finite_difference_check`] in the tests.

mod conv;
mod gradcheck;
mod matrix;
mod optim;
mod rng;
mod softmax;

pub use conv::{conv2d_backward, conv2d_forward, FeatureMaps, FilterBank};
pub use gradcheck::{finite_difference_check, DEFAULT_FD_STEP};
pub use matrix::{matmul, matmul_backward, DenseMatrix, Linear, LinearGrads};
pub use optim::{clip_params, AdagradState, RowGrads, ADAGRAD_EPSILON};
pub use rng::RngStream;
pub use softmax::{
    gumbel_from_uniform, gumbel_noise, softmax, softmax_backward, GUMBEL_UNIFORM_EPS,
};

/// Sum of squares, used for parameter norms in reports.
pub fn squared_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum()
}
