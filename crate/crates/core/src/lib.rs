//! Third-order tensors under the T-product: the Fourier-face algebra,
//! the compact T-SVD, generalized and standard tensor functions,
//! pseudoinverses and resolvents, and structure-preservation checks.
//!
//! Tensors are `m x n x p` arrays of complex numbers stored slice-major.
//! Real input stays real through every path that allows it.

pub mod algebra;
pub mod bench;
pub mod dense;
pub mod error;
pub mod examples;
pub mod genfun;
pub mod io;
pub mod random;
pub mod scalar;
pub mod solve;
pub mod spectral;
pub mod structure;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::{BlockSpec, Tensor3};
