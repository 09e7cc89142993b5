//! Tensors `w = Σ aⱼ ⊗ bⱼ` in `B(E) ⊗ B(F)` and their norms.
//!
//! Exact quantities (spatial and twisted spatial norms) come from one SVD.
//! The Haagerup and projective norms are only bracketed: lower bounds are
//! certified by exact norms or by explicit feasible points, upper bounds by
//! explicit representations found through gauge optimization.

mod chain;
mod convex;
mod gauge;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matcore::{svd, ComplexMatrix, C64, ZERO};
use crate::random::ginibre;

pub use chain::{verify_twisted_chain, verify_twisted_chain_with, TwistedChainReport};
pub use gauge::{
    apply_gauge, haagerup_objective, haagerup_objective_with, haagerup_upper, haagerup_upper_with, projective_upper,
    GaugeOptions, HaagerupConvention,
};

/// Absolute tolerance on 4-tensor entries for semantic equality.
pub const SEMANTIC_TOL: f64 = 1e-10;
/// Slack allowed in certified inequality tests.
pub const INEQUALITY_SLACK: f64 = 1e-9;
/// Default number of random restarts for gauge searches.
pub const DEFAULT_GAUGE_RESTARTS: usize = 16;

/// One elementary tensor `a ⊗ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

/// A finite representation `Σⱼ aⱼ ⊗ bⱼ` with `aⱼ` square of size `dim_e`
/// and `bⱼ` square of size `dim_f`. The empty list is the zero tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor", into = "RawTensor")]
pub struct TensorElement {
    dim_e: usize,
    dim_f: usize,
    pairs: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct RawTensor {
    #[serde(rename = "dimE")]
    dim_e: usize,
    #[serde(rename = "dimF")]
    dim_f: usize,
    pairs: Vec<Pair>,
}

impl TryFrom<RawTensor> for TensorElement {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        TensorElement::new(raw.dim_e, raw.dim_f, raw.pairs)
    }
}

impl From<TensorElement> for RawTensor {
    fn from(w: TensorElement) -> Self {
        RawTensor { dim_e: w.dim_e, dim_f: w.dim_f, pairs: w.pairs }
    }
}

impl TensorElement {
    pub fn new(dim_e: usize, dim_f: usize, pairs: Vec<Pair>) -> Result<Self> {
        if dim_e == 0 || dim_f == 0 {
            return invalid("tensor dimensions must be positive");
        }
        for (j, p) in pairs.iter().enumerate() {
            if p.a.shape() != (dim_e, dim_e) {
                return invalid(format!("pairs[{j}].a is {}x{}, expected {dim_e}x{dim_e}", p.a.rows(), p.a.cols()));
            }
            if p.b.shape() != (dim_f, dim_f) {
                return invalid(format!("pairs[{j}].b is {}x{}, expected {dim_f}x{dim_f}", p.b.rows(), p.b.cols()));
            }
        }
        Ok(Self { dim_e, dim_f, pairs })
    }

    /// Builds from `(a, b)` tuples, inferring dimensions from the first pair.
    pub fn from_pairs(pairs: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        let Some((a, b)) = pairs.first() else {
            return invalid("cannot infer dimensions from an empty pair list");
        };
        let (de, df) = (a.rows(), b.rows());
        Self::new(de, df, pairs.into_iter().map(|(a, b)| Pair { a, b }).collect())
    }

    pub fn zero(dim_e: usize, dim_f: usize) -> Self {
        Self { dim_e, dim_f, pairs: Vec::new() }
    }

    pub fn elementary(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        Self::from_pairs(vec![(a, b)])
    }

    /// `Σᵢⱼ Eᵢⱼ ⊗ Eᵢⱼ` in `Mₙ ⊗ Mₙ`, whose elementary operator is the transpose.
    pub fn transpose_tensor(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = ComplexMatrix::unit(n, n, i, j);
                pairs.push(Pair { a: e.clone(), b: e });
            }
        }
        Self { dim_e: n, dim_f: n, pairs }
    }

    /// `len` pairs of independent Ginibre matrices.
    pub fn random(dim_e: usize, dim_f: usize, len: usize, rng: &mut impl rand::Rng) -> Self {
        let pairs = (0..len).map(|_| Pair { a: ginibre(dim_e, dim_e, rng), b: ginibre(dim_f, dim_f, rng) }).collect();
        Self { dim_e, dim_f, pairs }
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn dim_f(&self) -> usize {
        self.dim_f
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplies every a-side factor by `s`.
    pub fn scale(&self, s: C64) -> Self {
        self.map_pairs(|p| Pair { a: p.a.scale(s), b: p.b.clone() })
    }

    pub(crate) fn map_pairs(&self, f: impl Fn(&Pair) -> Pair) -> Self {
        Self { dim_e: self.dim_e, dim_f: self.dim_f, pairs: self.pairs.iter().map(f).collect() }
    }

    /// Concatenation of representations, i.e. the sum of tensors.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.dim_e, self.dim_f) != (other.dim_e, other.dim_f) {
            return invalid("adding tensors of different dimensions");
        }
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().cloned());
        Ok(Self { pairs, ..self.clone() })
    }

    /// The `dimE² × dimF²` matrix `Σⱼ vec(aⱼ) vec(bⱼ)^⊤` (row-major vec).
    /// Its entries are exactly the entries of the 4-tensor.
    pub fn realignment(&self) -> ComplexMatrix {
        let (m, n) = (self.dim_e * self.dim_e, self.dim_f * self.dim_f);
        let mut data = vec![ZERO; m * n];
        for p in &self.pairs {
            let a = p.a.as_slice();
            let b = p.b.as_slice();
            for (r, &x) in a.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (c, &y) in b.iter().enumerate() {
                    data[r * n + c] += x * y;
                }
            }
        }
        ComplexMatrix::from_vec(m, n, data)
    }

    /// `Σⱼ aⱼ ⊗ bⱼ` as an operator on `E ⊗ F`.
    pub fn operator(&self) -> ComplexMatrix {
        let d = self.dim_e * self.dim_f;
        let mut acc = ComplexMatrix::zeros(d, d);
        for p in &self.pairs {
            acc = &acc + &p.a.kron(&p.b);
        }
        acc
    }

    pub fn semantically_equal(&self, other: &Self) -> bool {
        (self.dim_e, self.dim_f) == (other.dim_e, other.dim_f)
            && self.realignment().max_abs_diff(&other.realignment()) <= SEMANTIC_TOL
    }

    /// Pairs `(aⱼ*, bⱼ*)`; the adjoint of the tensor.
    pub fn adjoint_pairs(&self) -> Self {
        self.map_pairs(|p| Pair { a: p.a.adjoint(), b: p.b.adjoint() })
    }

    /// Pairs `(aⱼ, bⱼ^⊤)`: the tensor viewed in `B(E) ⊗ B(F)` with the
    /// opposite structure on the second factor.
    pub fn twist(&self) -> Self {
        self.map_pairs(|p| Pair { a: p.a.clone(), b: p.b.transpose() })
    }
}

/// Certified interval for a norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: String,
    pub upper_method: String,
}

impl NormBracket {
    pub fn is_consistent(&self) -> bool {
        self.lower >= 0.0 && self.lower <= self.upper + INEQUALITY_SLACK
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Minimal-length representation with linearly independent a-side and
/// b-side factors, from the SVD of the realignment matrix.
pub fn reduce_representation(w: &TensorElement) -> TensorElement {
    if w.is_empty() {
        return TensorElement::zero(w.dim_e, w.dim_f);
    }
    let scale: f64 = w.pairs.iter().map(|p| p.a.frobenius_norm() * p.b.frobenius_norm()).sum();
    if scale == 0.0 {
        return TensorElement::zero(w.dim_e, w.dim_f);
    }
    let r = w.realignment();
    let s = svd(&r);
    let (de, df) = (w.dim_e, w.dim_f);
    let mut pairs = Vec::new();
    for (j, &sigma) in s.singular_values.iter().enumerate() {
        if sigma <= 1e-12 * scale {
            break;
        }
        let root = sigma.sqrt();
        let u = s.left_factors.column_vec(j);
        let v = s.right_factors.column_vec(j);
        let a = ComplexMatrix::from_vec(de, de, u.iter().map(|z| z * root).collect());
        let b = ComplexMatrix::from_vec(df, df, v.iter().map(|z| z.conj() * root).collect());
        pairs.push(Pair { a, b });
    }
    TensorElement { dim_e: de, dim_f: df, pairs }
}

/// Norm of `Σ aⱼ ⊗ bⱼ` in `B(E ⊗ F)`: the injective operator-space norm.
pub fn spatial_norm(w: &TensorElement) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    w.operator().spectral_norm()
}

/// Spatial norm after transposing every b-side factor.
pub fn twisted_spatial_norm(w: &TensorElement) -> f64 {
    spatial_norm(&w.twist())
}

/// `Σ bⱼ ⊗ aⱼ`.
pub fn flip(w: &TensorElement) -> TensorElement {
    TensorElement {
        dim_e: w.dim_f,
        dim_f: w.dim_e,
        pairs: w.pairs.iter().map(|p| Pair { a: p.b.clone(), b: p.a.clone() }).collect(),
    }
}

/// Certified lower bound for the Haagerup norm: the larger of the spatial
/// norm and a feasible value of the elementary operator on `S_∞`.
pub fn haagerup_lower(w: &TensorElement) -> f64 {
    haagerup_lower_with(w, crate::elementary::DEFAULT_ASCENT_RESTARTS, 0)
}

pub fn haagerup_lower_with(w: &TensorElement, restarts: usize, seed: u64) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    spatial_norm(w).max(crate::elementary::phi_inf_lower(w, restarts, seed))
}

/// Bracket for the operator-space projective norm.
pub fn projective_bracket(w: &TensorElement, restarts: usize, seed: u64) -> NormBracket {
    if w.is_empty() {
        return NormBracket {
            lower: 0.0,
            upper: 0.0,
            lower_method: "zero tensor".into(),
            upper_method: "zero tensor".into(),
        };
    }
    let asc = crate::elementary::DEFAULT_ASCENT_RESTARTS;
    let candidates = [
        (twisted_spatial_norm(w), "twisted spatial norm"),
        (haagerup_lower_with(w, asc, seed), "Haagerup lower bound"),
        (haagerup_lower_with(&flip(w), asc, seed), "Haagerup lower bound of flip"),
    ];
    let (lower, lower_method) =
        candidates.iter().copied().fold((0.0, ""), |best, c| if c.0 > best.0 { c } else { best });
    let upper = projective_upper(w, &GaugeOptions { restarts, seed, ..Default::default() });
    NormBracket {
        lower,
        upper,
        lower_method: lower_method.into(),
        upper_method: "gauge-minimized sum of cross norms".into(),
    }
}

/// `‖Σᵢ cᵢ ⊗ wᵢ‖` with `cᵢ` replaced by `cᵢ^⊤` when `opposite` is set: the
/// matrix-level norm in the given or opposite structure.
pub fn level_norm(coeffs: &[ComplexMatrix], elements: &[ComplexMatrix], opposite: bool) -> Result<f64> {
    if coeffs.len() != elements.len() {
        return invalid(format!("level_norm got {} coefficients and {} elements", coeffs.len(), elements.len()));
    }
    let Some((c0, e0)) = coeffs.first().zip(elements.first()) else {
        return Ok(0.0);
    };
    let c_shape = if opposite { (c0.cols(), c0.rows()) } else { c0.shape() };
    let mut acc = ComplexMatrix::zeros(c_shape.0 * e0.rows(), c_shape.1 * e0.cols());
    for (i, (c, e)) in coeffs.iter().zip(elements).enumerate() {
        if c.shape() != c0.shape() || e.shape() != e0.shape() {
            return invalid(format!("level_norm: entry {i} has inconsistent shape"));
        }
        let c = if opposite { c.transpose() } else { c.clone() };
        acc = &acc + &c.kron(e);
    }
    Ok(acc.spectral_norm())
}
