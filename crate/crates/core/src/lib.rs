//! Bit-exact fixed-point 9/7 lifting wavelet transform, a cycle-accurate
//! simulator of five pipelined datapath designs, an area/critical-path
//! cost model, and a PSNR harness for coefficient-rounding error.

pub mod dwt2d;
pub mod error;
pub mod fir;
pub mod fixpoint;
pub mod lifting;
pub mod metrics;
pub mod rtlsim;
pub mod testimage;

pub use error::{Error, Result};
