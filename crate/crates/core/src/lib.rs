//! Exact and numeric computer algebra for the quantum groups `SU_q(2)` and `SL_q(2, C)`.

pub mod acceptance;
pub mod dkq;
pub mod double;
pub mod error;
pub mod linalg;
pub mod memo;
pub mod modules;
pub mod okq;
pub mod plancherel;
pub mod principal;
pub mod sample;
pub mod scalar;
pub mod uq;

pub use error::{Error, Result};
pub use linalg::Mat;
pub use scalar::{ExactCtx, HalfInt, Lambda, Num, NumericCtx, RatFunc, Scalar};
pub use uq::{Mono, Pbw};
