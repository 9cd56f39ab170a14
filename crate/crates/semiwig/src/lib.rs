// Negated comparisons are used on purpose so that NaN fails every range check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical_expansion;
pub mod duhamel;
pub mod error;
pub mod fourier;
pub mod harmonic_expansion;
pub mod phase_space;
pub mod quartic;
pub mod scalar;
pub mod schrodinger_oracle;
pub mod specfun;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};
