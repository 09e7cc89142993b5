//! Finite-dimensional laboratory for operator-space tensor norms,
//! elementary operators on Schatten classes, Hochschild cochains of
//! commutative algebras, and Fourier algebras of finite groups.
//!
//! Each module computes exact values where linear algebra allows it and
//! certified brackets (a provable lower bound and a provable upper bound)
//! where the underlying norm is an infimum or supremum without a closed form.

pub mod elementary;
pub mod error;
pub mod fourier_finite;
pub mod hochschild;
pub mod matcore;
pub mod optim;
pub mod ostensor;
pub mod random;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, C64};
