//! Fourier algebra `A(G)` and group von Neumann algebra `VN(G)` of a finite
//! group, with counting measure as Haar measure.

mod group;

#[cfg(test)]
mod tests;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use group::{FiniteGroup, Subgroup};

use crate::error::{invalid, Error, Result};
use crate::hochschild::{derivation_space, Bimodule, CommutativeAlgebra};
use crate::matcore::{schatten_norm, svd, transpose_map, ComplexMatrix, SchattenP, C64, ZERO};
use crate::ostensor::level_norm;
use crate::random::{complex_gaussian_vec, ginibre, rng_for};

/// Default iteration budget of the projected ascent oracles.
pub const DEFAULT_ORACLE_ITERATIONS: usize = 5000;
/// Accuracy the ascent step size is tuned for.
pub const ORACLE_TOL: f64 = 1e-6;
/// Tolerance of the Herz quotient equality.
pub const HERZ_TOL: f64 = 1e-5;
const PAIRING_TOL: f64 = 1e-10;

/// Function on a finite group, viewed as an element of `A(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AGFunction {
    group: FiniteGroup,
    values: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupRef {
    Name(String),
    Inline(FiniteGroup),
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    group: GroupRef,
    values: Vec<[f64; 2]>,
}

impl Serialize for AGFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let named = FiniteGroup::by_name(self.group.name()).is_ok_and(|g| g == self.group);
        let group =
            if named { GroupRef::Name(self.group.name().to_string()) } else { GroupRef::Inline(self.group.clone()) };
        RawFunction { group, values: self.values.iter().map(|z| [z.re, z.im]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AGFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFunction::deserialize(d)?;
        let group = match raw.group {
            GroupRef::Name(n) => FiniteGroup::by_name(&n).map_err(serde::de::Error::custom)?,
            GroupRef::Inline(g) => g,
        };
        let values = raw.values.iter().map(|z| C64::new(z[0], z[1])).collect();
        AGFunction::new(&group, values).map_err(serde::de::Error::custom)
    }
}

impl AGFunction {
    pub fn new(group: &FiniteGroup, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.order() {
            return invalid(format!("{} values for a group of order {}", values.len(), group.order()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("function values must be finite");
        }
        Ok(Self { group: group.clone(), values })
    }

    /// Indicator of `s`.
    pub fn delta(group: &FiniteGroup, s: usize) -> Result<Self> {
        group.check_element(s)?;
        let mut values = vec![ZERO; group.order()];
        values[s] = C64::new(1.0, 0.0);
        Ok(Self { group: group.clone(), values })
    }

    pub fn ones(group: &FiniteGroup) -> Self {
        Self { group: group.clone(), values: vec![C64::new(1.0, 0.0); group.order()] }
    }

    /// Standard complex Gaussian values.
    pub fn random(group: &FiniteGroup, rng: &mut impl Rng) -> Self {
        Self { group: group.clone(), values: complex_gaussian_vec(group.order(), rng) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return invalid("functions live on different groups");
        }
        Ok(Self {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }
}

/// `T = Σ_s c_s λ(s)` in `VN(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VNElement {
    group: FiniteGroup,
    coefficients: Vec<C64>,
}

impl VNElement {
    pub fn new(group: &FiniteGroup, coefficients: Vec<C64>) -> Result<Self> {
        if coefficients.len() != group.order() {
            return invalid(format!("{} coefficients for a group of order {}", coefficients.len(), group.order()));
        }
        Ok(Self { group: group.clone(), coefficients })
    }

    pub fn random(group: &FiniteGroup, rng: &mut impl Rng) -> Self {
        Self { group: group.clone(), coefficients: complex_gaussian_vec(group.order(), rng) }
    }

    /// Coefficients `c_s = (1/n)·tr(λ(s)*·m)`; fails unless `m` lies in `VN(G)`.
    pub fn from_matrix(group: &FiniteGroup, m: &ComplexMatrix) -> Result<Self> {
        let n = group.order();
        if m.shape() != (n, n) {
            return invalid(format!("expected a {n}x{n} matrix"));
        }
        let t = Self { group: group.clone(), coefficients: extract_coefficients(group, m, None) };
        let defect = t.matrix().max_abs_diff(m);
        if defect > PAIRING_TOL * m.max_abs().max(1.0) {
            return invalid(format!("matrix is not in the span of the translations (defect {defect:e})"));
        }
        Ok(t)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn matrix(&self) -> ComplexMatrix {
        combine(&self.group, &self.coefficients)
    }

    /// `⟨T, f⟩ = Σ_s c_s f(s)`.
    pub fn pair(&self, f: &AGFunction) -> Result<C64> {
        if self.group != f.group {
            return invalid("operator and function live on different groups");
        }
        Ok(self.coefficients.iter().zip(&f.values).map(|(c, v)| c * v).sum())
    }
}

fn combine(g: &FiniteGroup, c: &[C64]) -> ComplexMatrix {
    let n = g.order();
    let mut data = vec![ZERO; n * n];
    for (s, &cs) in c.iter().enumerate() {
        if cs == ZERO {
            continue;
        }
        for y in 0..n {
            data[g.mul(s, y) * n + y] += cs;
        }
    }
    ComplexMatrix::new(n, n, data).expect("square")
}

/// `(1/n)·tr(λ(s)*·m)` for `s` in `support` (all of `G` when `None`).
fn extract_coefficients(g: &FiniteGroup, m: &ComplexMatrix, support: Option<&[usize]>) -> Vec<C64> {
    let n = g.order();
    let coefficient = |s: usize| (0..n).map(|y| m.get(g.mul(s, y), y)).sum::<C64>() / n as f64;
    match support {
        None => (0..n).map(coefficient).collect(),
        Some(h) => {
            let mut c = vec![ZERO; n];
            for &s in h {
                c[s] = coefficient(s);
            }
            c
        }
    }
}

/// Permutation matrix of `[λ(s)f](x) = f(s⁻¹x)`.
pub fn regular_rep(g: &FiniteGroup, s: usize) -> Result<ComplexMatrix> {
    g.check_element(s)?;
    let mut c = vec![ZERO; g.order()];
    c[s] = C64::new(1.0, 0.0);
    Ok(combine(g, &c))
}

/// `Ψ(ξ ⊗ η)(x) = Σ_s ξ(x⁻¹s) η(s)`.
pub fn psi_coefficient(g: &FiniteGroup, xi: &[C64], eta: &[C64]) -> Result<AGFunction> {
    let n = g.order();
    if xi.len() != n || eta.len() != n {
        return invalid(format!("coefficient vectors must have length {n}"));
    }
    let values = (0..n).map(|x| (0..n).map(|s| xi[g.mul(g.inv(x), s)] * eta[s]).sum()).collect();
    AGFunction::new(g, values)
}

pub fn vn_norm(t: &VNElement) -> f64 {
    t.matrix().spectral_norm()
}

/// `M_f = (1/n)·Σ_t f(t⁻¹)·λ(t)`, the representative with `tr(λ(s)·M_f) = f(s)`.
pub fn trace_representative(f: &AGFunction) -> ComplexMatrix {
    let g = &f.group;
    let n = g.order() as f64;
    let c: Vec<C64> = (0..g.order()).map(|t| f.values[g.inv(t)] / n).collect();
    combine(g, &c)
}

/// `‖f‖_{A(G)} = ‖M_f‖_{S₁}`.
pub fn ag_norm(f: &AGFunction) -> Result<f64> {
    let m = trace_representative(f);
    let g = &f.group;
    let n = g.order();
    let scale = f.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for s in 0..n {
        let tr: C64 = (0..n).map(|y| m.get(g.mul(g.inv(s), y), y)).sum();
        if (tr - f.values[s]).norm() > PAIRING_TOL * scale {
            return Err(Error::CheckFailed(format!("tr(λ({s})·M_f) != f({s})")));
        }
    }
    Ok(schatten_norm(&m, SchattenP::One))
}

/// Outcome of a projected ascent over the unit ball of (a subspace of) `VN(G)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Best certified lower bound found.
    pub value: f64,
    pub iterations: usize,
    /// Unset when the iteration budget ran out before the value settled.
    pub converged: bool,
}

/// `sup{ Re Σ_{s∈S} c_s g(s) : ‖Σ_{s∈S} c_s λ(s)‖ ≤ 1 }` by projected
/// supergradient ascent with step `α₀/√k`; the projection clips singular
/// values at 1 and re-extracts coefficients on the support `S`.
fn dual_ascent(group: &FiniteGroup, support: &[usize], target: &[C64], iterations: usize) -> OracleResult {
    let n = group.order();
    let mut grad_c = vec![ZERO; n];
    for (&s, &v) in support.iter().zip(target) {
        grad_c[s] = v.conj() / n as f64;
    }
    let grad = combine(group, &grad_c);
    let gnorm = grad.frobenius_norm();
    if gnorm == 0.0 {
        return OracleResult { value: 0.0, iterations: 0, converged: true };
    }
    let alpha0 = 1.0 / (ORACLE_TOL * gnorm);
    let objective = |c: &[C64]| support.iter().zip(target).map(|(&s, &v)| c[s] * v).sum::<C64>().re;
    let mut t = ComplexMatrix::zeros(n, n);
    let mut best = 0.0f64;
    let mut last_gain = 0usize;
    for k in 1..=iterations {
        let step = grad.scale_real(alpha0 / (k as f64).sqrt());
        let moved = &t + &step;
        let d = svd(&moved);
        let clipped: Vec<f64> = d.singular_values.iter().map(|&s| s.min(1.0)).collect();
        let u = &d.left_factors;
        let v = &d.right_factors;
        let projected = ComplexMatrix::from_fn(n, n, |i, j| {
            clipped.iter().enumerate().map(|(r, &s)| u.get(i, r) * v.get(j, r).conj() * s).sum()
        });
        let mut c = extract_coefficients(group, &projected, Some(support));
        t = combine(group, &c);
        // Re-extraction can leave the ball by rounding; rescale to stay certified.
        let norm = t.spectral_norm();
        if norm > 1.0 {
            c.iter_mut().for_each(|z| *z /= norm);
            t = t.scale_real(1.0 / norm);
        }
        let value = objective(&c);
        if value > best * (1.0 + 1e-15) {
            best = value;
            last_gain = k;
        } else if k - last_gain >= 25 {
            return OracleResult { value: best, iterations: k, converged: true };
        }
    }
    OracleResult { value: best, iterations, converged: false }
}

/// `sup{ |⟨T, f⟩| : ‖T‖_{VN(G)} ≤ 1 }` by projected ascent, independent of
/// the trace-class formula in [`ag_norm`].
pub fn ag_norm_dual_oracle(f: &AGFunction, iterations: usize) -> OracleResult {
    let support: Vec<usize> = (0..f.group.order()).collect();
    dual_ascent(&f.group, &support, &f.values, iterations)
}

/// `f̌(x) = f(x⁻¹)`.
pub fn check_map(f: &AGFunction) -> AGFunction {
    let g = &f.group;
    AGFunction { group: g.clone(), values: (0..g.order()).map(|x| f.values[g.inv(x)]).collect() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransposeReport {
    pub group: String,
    pub trials: usize,
    /// `max |⟨T^⊤, f⟩ − ⟨T, f̌⟩|`.
    pub max_pairing_error: f64,
    /// `max ‖Σ c'_s λ(s) − T^⊤‖` after re-extracting `c'` from `T^⊤`.
    pub max_reextraction_error: f64,
    /// `max |‖[T_k^⊤]‖ − ‖[T_k]‖_op|` at matrix levels 1 to 3.
    pub max_level_norm_error: f64,
    pub passed: bool,
}

/// Checks that the transpose on `VN(G)` is the adjoint of the check map and
/// a complete isometry from the opposite structure, on random data.
pub fn check_adjoint_is_transpose(g: &FiniteGroup, trials: usize, seed: u64) -> Result<TransposeReport> {
    let mut max_pairing_error = 0.0f64;
    let mut max_reextraction_error = 0.0f64;
    let mut max_level_norm_error = 0.0f64;
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial as u64);
        let t = VNElement::random(g, &mut rng);
        let f = AGFunction::random(g, &mut rng);
        let tm = t.matrix();
        let transposed = transpose_map(&tm);
        let tt = VNElement::from_matrix(g, &transposed)?;
        max_reextraction_error = max_reextraction_error.max(tt.matrix().max_abs_diff(&transposed));
        let scale = tt.pair(&f)?.norm().max(1.0);
        max_pairing_error = max_pairing_error.max((tt.pair(&f)? - t.pair(&check_map(&f))?).norm() / scale);

        let level = 1 + trial % 3;
        let terms = 1 + trial % 2 + 1;
        let coeffs: Vec<ComplexMatrix> = (0..terms).map(|_| ginibre(level, level, &mut rng)).collect();
        let elements: Vec<ComplexMatrix> = (0..terms).map(|_| VNElement::random(g, &mut rng).matrix()).collect();
        let transposed: Vec<ComplexMatrix> = elements.iter().map(transpose_map).collect();
        let lhs = level_norm(&coeffs, &transposed, false)?;
        let rhs = level_norm(&coeffs, &elements, true)?;
        max_level_norm_error = max_level_norm_error.max((lhs - rhs).abs() / lhs.max(1.0));
    }
    let passed =
        max_pairing_error <= PAIRING_TOL && max_reextraction_error <= PAIRING_TOL && max_level_norm_error <= 1e-9;
    Ok(TransposeReport {
        group: g.name().to_string(),
        trials,
        max_pairing_error,
        max_reextraction_error,
        max_level_norm_error,
        passed,
    })
}

/// Values of `f` on the subgroup.
pub fn restrict(f: &AGFunction, h: &Subgroup) -> Result<AGFunction> {
    if f.group != *h.parent() {
        return invalid("function does not live on the subgroup's parent group");
    }
    AGFunction::new(h.group(), h.embedding().iter().map(|&s| f.values[s]).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerzReport {
    pub subgroup_norm: f64,
    /// Dual lower bound for the least `A(G)`-norm of an extension.
    pub minimal_extension_norm: f64,
    /// `A(G)`-norm of the extension by zero, an upper bound.
    pub zero_extension_norm: f64,
    pub zero_extension_attains: bool,
    pub iterations: usize,
    /// Set when the ascent hit its iteration budget.
    pub warning: bool,
    pub passed: bool,
}

/// Compares the least `A(G)`-norm over extensions of `g` with `‖g‖_{A(H)}`.
/// Functionals vanishing on `{f : f|_H = 0}` are supported on `H`, so the
/// minimal extension norm is the ascent value over `span{λ_G(s) : s ∈ H}`.
pub fn herz_quotient_check(g: &AGFunction, h: &Subgroup, iterations: usize) -> Result<HerzReport> {
    if g.group != *h.group() {
        return invalid("function does not live on the subgroup");
    }
    let parent = h.parent();
    let oracle = dual_ascent(parent, h.embedding(), &g.values, iterations);
    let subgroup_norm = ag_norm(g)?;
    let mut zero = vec![ZERO; parent.order()];
    for (&s, &v) in h.embedding().iter().zip(&g.values) {
        zero[s] = v;
    }
    let zero_extension_norm = ag_norm(&AGFunction::new(parent, zero)?)?;
    let scale = subgroup_norm.max(1.0);
    Ok(HerzReport {
        subgroup_norm,
        minimal_extension_norm: oracle.value,
        zero_extension_norm,
        zero_extension_attains: (zero_extension_norm - oracle.value).abs() <= HERZ_TOL * scale,
        iterations: oracle.iterations,
        warning: !oracle.converged,
        passed: (oracle.value - subgroup_norm).abs() <= HERZ_TOL * scale,
    })
}

pub fn product_group(g1: &FiniteGroup, g2: &FiniteGroup) -> FiniteGroup {
    FiniteGroup::product(g1, g2)
}

/// `(u ⊗ v)(x, y) = u(x)·v(y)` on `G₁ × G₂`.
pub fn ag_tensor(u: &AGFunction, v: &AGFunction) -> AGFunction {
    let group = product_group(&u.group, &v.group);
    let values = u.values.iter().flat_map(|a| v.values.iter().map(move |b| a * b)).collect();
    AGFunction { group, values }
}

/// `Σ c_s d_t λ(s, t)` on `G₁ × G₂`.
pub fn vn_tensor(s: &VNElement, t: &VNElement) -> VNElement {
    let group = product_group(&s.group, &t.group);
    let coefficients = s.coefficients.iter().flat_map(|a| t.coefficients.iter().map(move |b| a * b)).collect();
    VNElement { group, coefficients }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub group: String,
    pub dimension: usize,
    pub passed: bool,
}

/// `A(G)` as the pointwise algebra on indicators, with its dual bimodule.
pub fn fourier_algebra(g: &FiniteGroup) -> CommutativeAlgebra {
    CommutativeAlgebra::pointwise(g.order())
}

/// Dimension of the space of derivations `A(G) → A(G)*`.
pub fn derivations_vanish(g: &FiniteGroup) -> Result<DerivationReport> {
    let a = fourier_algebra(g);
    let dimension = derivation_space(&a, &Bimodule::dual(&a))?.len();
    Ok(DerivationReport { group: g.name().to_string(), dimension, passed: dimension == 0 })
}

/// `Σ_χ |f̂(χ)|` with `f̂(χ) = (1/n)·Σ_x f(x)·χ̄(x)`, for groups built as
/// products of cyclic groups (`Z/n x Z/m x …`); `None` for any other group.
pub fn cyclic_dft_l1(f: &AGFunction) -> Option<f64> {
    let g = &f.group;
    let radices: Vec<usize> =
        g.name().split(" x ").map(|p| p.trim().strip_prefix("Z/")?.parse().ok()).collect::<Option<_>>()?;
    if FiniteGroup::by_name(g.name()).ok()? != *g {
        return None;
    }
    let n = g.order();
    let digits = |mut x: usize| {
        let mut d = vec![0; radices.len()];
        for (slot, &r) in d.iter_mut().zip(&radices).rev() {
            *slot = x % r;
            x /= r;
        }
        d
    };
    let coords: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let total = coords
        .iter()
        .map(|j| {
            let coef: C64 = coords
                .iter()
                .zip(&f.values)
                .map(|(x, v)| {
                    let phase: f64 =
                        j.iter().zip(x).zip(&radices).map(|((a, b), &r)| (a * b % r) as f64 / r as f64).sum();
                    v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase)
                })
                .sum();
            coef.norm() / n as f64
        })
        .sum();
    Some(total)
}
