//! Truncated H²_d space, the d-shift, and dilation theory for
//! commuting row contractions, at matrix scale.
//!
//! Modules, bottom up:
//!
//! * [`multiindex`]: exponent vectors and symmetric-space dimensions
//! * [`fock`]: symmetric tensors, monomial norms, creation adjoints
//! * [`h2space`]: polynomials, kernels, unitary symmetries, weight systems
//! * [`shift`]: compressed shift matrices and their relations
//! * [`numerics`]: operator norms, Hermitian eigenvalues, sphere maximization
//! * [`extremal`]: norm growth of `(z_1⋯z_d)^n` and energy sequences
//! * [`dilation`]: d-contractions, the dilation map `L`, model compressions
//! * [`zeta`]: traces of `(1 + N)^{-p}`

pub mod dilation;
pub mod error;
pub mod extremal;
pub mod fock;
pub mod h2space;
pub mod multiindex;
pub mod numerics;
pub mod shift;
pub mod zeta;

pub use error::{Error, Result};
