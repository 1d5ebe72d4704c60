//! Spectral simulator and numerical-estimate laboratory for the
//! energy-critical (quintic) nonlinear Schrödinger equation on the
//! 3-sphere, restricted to zonal (rotationally symmetric) data.

// `!(x > a)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod spectral;
pub mod linear;
pub mod harness;
pub mod nls;
pub mod seed;
pub mod weyl;

pub use error::{Error, Result};
