//! Hochschild cochains on finite-dimensional commutative algebras with
//! coefficients in bimodules, plus exact trigonometric-polynomial models of
//! the derivation and 2-cocycle on `C¹(𝕋)` and `C¹(𝕋²)`.

mod algebra;
mod cochain;
mod trig;

#[cfg(test)]
mod tests;

pub use algebra::{tensor_algebra, tensor_bimodule, Bimodule, CommutativeAlgebra, IDENTITY_TOL};
pub use cochain::{
    alternating_part, coboundary, derivation_space, is_alternating, is_symmetric, is_two_derivation,
    polarization_check, pullback, symmetric_part, wedge, Cochain, PolarizationReport, TensorCocycle, NULLSPACE_TOL,
    POLARIZATION_TOL,
};
pub use trig::{
    c1_cocycle_density, c1_cocycle_pairing, c1_derivation_pairing, trig_deriv, trig_integral, PlanePoly, TrigPoly,
};
