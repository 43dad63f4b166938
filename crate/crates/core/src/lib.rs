//! Singular integrals with homogeneous kernels on self-similar sets.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod ergodic;
pub mod geometry;
pub mod ifs;
pub mod kernels;
pub mod measure;
pub mod par;
pub mod presets;
pub mod rng;
pub mod sio;
pub mod symbolic;

pub use error::{Error, Result};
