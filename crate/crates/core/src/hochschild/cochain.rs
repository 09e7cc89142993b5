use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::algebra::{max_diff, scale_of, Bimodule, CommutativeAlgebra, IDENTITY_TOL};
use crate::error::{invalid, Error, Result};
use crate::matcore::{svd, ComplexMatrix, C64, ZERO};

/// Relative SVD threshold for rank decisions on derivation systems.
pub const NULLSPACE_TOL: f64 = 1e-8;

/// Multilinear map `Aⁿ → X` stored densely on basis tuples. The coordinate of
/// `T(e_{i₁}, …, e_{iₙ})` along `x_p` sits at `((i₁·d + i₂)·d + …)·m + p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    algebra_dim: usize,
    module_dim: usize,
    coefficients: Vec<C64>,
}

impl Cochain {
    pub fn new(degree: usize, algebra_dim: usize, module_dim: usize, coefficients: Vec<C64>) -> Result<Self> {
        if degree > 3 {
            return invalid(format!("cochain degree {degree} is not supported"));
        }
        let expected = algebra_dim.pow(degree as u32) * module_dim;
        if coefficients.len() != expected {
            return invalid(format!("expected {expected} coefficients, got {}", coefficients.len()));
        }
        Ok(Self { degree, algebra_dim, module_dim, coefficients })
    }

    pub fn zero(degree: usize, algebra_dim: usize, module_dim: usize) -> Self {
        let len = algebra_dim.pow(degree as u32) * module_dim;
        Self { degree, algebra_dim, module_dim, coefficients: vec![ZERO; len] }
    }

    /// Coefficients from a function of the basis tuple and module index.
    pub fn from_fn(
        degree: usize,
        algebra_dim: usize,
        module_dim: usize,
        mut f: impl FnMut(&[usize], usize) -> C64,
    ) -> Self {
        let mut c = Self::zero(degree, algebra_dim, module_dim);
        let mut tuple = vec![0; degree];
        for t in 0..algebra_dim.pow(degree as u32) {
            decode(t, algebra_dim, &mut tuple);
            for p in 0..module_dim {
                c.coefficients[t * module_dim + p] = f(&tuple, p);
            }
        }
        c
    }

    /// Random cochain with standard complex Gaussian coefficients.
    pub fn random(degree: usize, algebra_dim: usize, module_dim: usize, rng: &mut impl rand::Rng) -> Self {
        let len = algebra_dim.pow(degree as u32) * module_dim;
        let coefficients = crate::random::complex_gaussian_vec(len, rng);
        Self { degree, algebra_dim, module_dim, coefficients }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// `T(e_{i₁}, …, e_{iₙ})` as module coordinates.
    pub fn value(&self, tuple: &[usize]) -> &[C64] {
        let t = encode(tuple, self.algebra_dim);
        &self.coefficients[t * self.module_dim..(t + 1) * self.module_dim]
    }

    /// Multilinear evaluation on algebra elements given in coordinates.
    pub fn evaluate(&self, args: &[&[C64]]) -> Result<Vec<C64>> {
        if args.len() != self.degree || args.iter().any(|a| a.len() != self.algebra_dim) {
            return invalid("arguments do not match the cochain degree and algebra dimension");
        }
        let mut out = vec![ZERO; self.module_dim];
        let mut tuple = vec![0; self.degree];
        for t in 0..self.algebra_dim.pow(self.degree as u32) {
            decode(t, self.algebra_dim, &mut tuple);
            let w: C64 = tuple.iter().zip(args).map(|(&i, a)| a[i]).product();
            if w == ZERO {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&self.coefficients[t * self.module_dim..]) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.coefficients, &other.coefficients)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let c = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        Ok(Self { coefficients: c, ..*self })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|z| z * s).collect(), ..*self }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.degree, self.algebra_dim, self.module_dim) != (other.degree, other.algebra_dim, other.module_dim) {
            return invalid("cochains have different shapes");
        }
        Ok(())
    }

    fn check_against(&self, a: &CommutativeAlgebra, x: &Bimodule) -> Result<()> {
        if self.algebra_dim != a.dim() || self.module_dim != x.dim() || x.algebra_dim() != a.dim() {
            return invalid(format!(
                "cochain on {}-dim algebra into {}-dim module used with {}-dim algebra and {}-dim module",
                self.algebra_dim,
                self.module_dim,
                a.dim(),
                x.dim()
            ));
        }
        Ok(())
    }

    fn swapped(&self) -> Self {
        let n = self.algebra_dim;
        Self::from_fn(2, n, self.module_dim, |t, p| self.value(&[t[1], t[0]])[p])
    }
}

fn decode(mut t: usize, d: usize, tuple: &mut [usize]) {
    for slot in tuple.iter_mut().rev() {
        *slot = t % d;
        t /= d;
    }
}

fn encode(tuple: &[usize], d: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * d + i)
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawCochain {
    degree: usize,
    algebra_dim: usize,
    module_dim: usize,
    coefficients: Value,
}

impl Serialize for Cochain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        fn nest(c: &Cochain, depth: usize, offset: usize) -> Value {
            if depth == c.degree {
                let row = &c.coefficients[offset * c.module_dim..(offset + 1) * c.module_dim];
                return Value::Array(row.iter().map(|z| serde_json::json!([z.re, z.im])).collect());
            }
            Value::Array((0..c.algebra_dim).map(|i| nest(c, depth + 1, offset * c.algebra_dim + i)).collect())
        }
        RawCochain {
            degree: self.degree,
            algebra_dim: self.algebra_dim,
            module_dim: self.module_dim,
            coefficients: nest(self, 0, 0),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cochain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCochain::deserialize(d)?;
        let mut flat = Vec::new();
        flatten(&raw.coefficients, raw.degree + 1, raw.algebra_dim, raw.module_dim, &mut flat)
            .map_err(serde::de::Error::custom)?;
        Cochain::new(raw.degree, raw.algebra_dim, raw.module_dim, flat).map_err(serde::de::Error::custom)
    }
}

fn flatten(v: &Value, levels: usize, d: usize, m: usize, out: &mut Vec<C64>) -> Result<()> {
    let arr = v.as_array().ok_or_else(|| Error::InvalidInput("coefficients must be nested arrays".into()))?;
    if levels == 1 {
        if arr.len() != m {
            return invalid(format!("module coordinate array has length {}, expected {m}", arr.len()));
        }
        for z in arr {
            let pair: [f64; 2] = serde_json::from_value(z.clone())
                .map_err(|e| Error::InvalidInput(format!("complex entry must be [re, im]: {e}")))?;
            out.push(C64::new(pair[0], pair[1]));
        }
        return Ok(());
    }
    if arr.len() != d {
        return invalid(format!("algebra index array has length {}, expected {d}", arr.len()));
    }
    arr.iter().try_for_each(|sub| flatten(sub, levels - 1, d, m, out))
}

fn identity_tol(a: &CommutativeAlgebra, x: &Bimodule, t: &Cochain) -> f64 {
    let module_scale = (0..x.dim())
        .flat_map(|p| {
            (0..a.dim()).flat_map(move |i| (0..x.dim()).map(move |q| x.l(i, p, q).norm().max(x.r(p, i, q).norm())))
        })
        .fold(1.0, f64::max);
    IDENTITY_TOL * scale_of(a.structure()) * module_scale * t.max_abs().max(1.0)
}

/// Hochschild coboundary `δⁿT` for `n ≤ 2`:
/// `δⁿT(a₀,…,aₙ) = a₀·T(a₁,…) + Σₖ (−1)ᵏ T(…, aₖ₋₁aₖ, …) + (−1)ⁿ⁺¹ T(a₀,…,aₙ₋₁)·aₙ`.
pub fn coboundary(t: &Cochain, a: &CommutativeAlgebra, x: &Bimodule) -> Result<Cochain> {
    if t.degree > 2 {
        return invalid(format!("coboundary of a degree {} cochain is not supported", t.degree));
    }
    t.check_against(a, x)?;
    let (n, d, m) = (t.degree, a.dim(), x.dim());
    let mut out = Cochain::zero(n + 1, d, m);
    let mut tuple = vec![0; n + 1];
    let mut inner = vec![0; n];
    for s in 0..d.pow(n as u32 + 1) {
        decode(s, d, &mut tuple);
        let mut acc = vec![ZERO; m];
        let head = t.value(&tuple[1..]);
        for (p, &v) in head.iter().enumerate() {
            for (q, o) in acc.iter_mut().enumerate() {
                *o += v * x.l(tuple[0], p, q);
            }
        }
        for k in 1..=n {
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            for r in 0..d {
                let c = a.c(tuple[k - 1], tuple[k], r);
                if c == ZERO {
                    continue;
                }
                inner[..k - 1].copy_from_slice(&tuple[..k - 1]);
                inner[k - 1] = r;
                inner[k..].copy_from_slice(&tuple[k + 1..]);
                for (o, v) in acc.iter_mut().zip(t.value(&inner)) {
                    *o += sign * c * v;
                }
            }
        }
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let tail = t.value(&tuple[..n]);
        for (p, &v) in tail.iter().enumerate() {
            for (q, o) in acc.iter_mut().enumerate() {
                *o += sign * v * x.r(p, tuple[n], q);
            }
        }
        out.coefficients[s * m..(s + 1) * m].copy_from_slice(&acc);
    }
    Ok(out)
}

fn require_degree_two(t: &Cochain) -> Result<()> {
    if t.degree != 2 {
        return invalid(format!("expected a degree 2 cochain, got degree {}", t.degree));
    }
    Ok(())
}

/// `½(T(a,b) − T(b,a))`.
pub fn alternating_part(t: &Cochain) -> Result<Cochain> {
    require_degree_two(t)?;
    Ok(t.add(&t.swapped().scale(C64::new(-1.0, 0.0)))?.scale(C64::new(0.5, 0.0)))
}

/// `½(T(a,b) + T(b,a))`.
pub fn symmetric_part(t: &Cochain) -> Result<Cochain> {
    require_degree_two(t)?;
    Ok(t.add(&t.swapped())?.scale(C64::new(0.5, 0.0)))
}

pub fn is_alternating(t: &Cochain, tol: f64) -> Result<bool> {
    Ok(symmetric_part(t)?.max_abs() <= tol * t.max_abs().max(1.0))
}

pub fn is_symmetric(t: &Cochain, tol: f64) -> Result<bool> {
    Ok(alternating_part(t)?.max_abs() <= tol * t.max_abs().max(1.0))
}

/// Whether a symmetric or alternating 2-cochain is a derivation in its first
/// variable. A positive answer is cross-checked against `δ²T = 0`.
pub fn is_two_derivation(t: &Cochain, a: &CommutativeAlgebra, x: &Bimodule) -> Result<bool> {
    require_degree_two(t)?;
    t.check_against(a, x)?;
    if !is_symmetric(t, IDENTITY_TOL)? && !is_alternating(t, IDENTITY_TOL)? {
        return invalid("2-derivation test needs a symmetric or alternating cochain");
    }
    let tol = identity_tol(a, x, t);
    let d = a.dim();
    for i in 0..d {
        for j in 0..d {
            let eij = a.basis_product(i, j);
            for k in 0..d {
                let lhs = t.evaluate(&[&eij, &a.basis(k)])?;
                let first = x.act_left(&a.basis(i), t.value(&[j, k]));
                let second = x.act_right(t.value(&[i, k]), &a.basis(j));
                let rhs: Vec<C64> = first.iter().zip(&second).map(|(u, v)| u + v).collect();
                if max_diff(&lhs, &rhs) > tol {
                    return Ok(false);
                }
            }
        }
    }
    let defect = coboundary(t, a, x)?.max_abs();
    if defect > tol {
        return Err(Error::CheckFailed(format!("2-derivation with nonzero coboundary ({defect:e})")));
    }
    Ok(true)
}

/// Basis of the derivations `A → X`, as the nullspace of `D ↦ δ¹D`.
pub fn derivation_space(a: &CommutativeAlgebra, x: &Bimodule) -> Result<Vec<Cochain>> {
    if x.algebra_dim() != a.dim() {
        return invalid("module is over an algebra of a different dimension");
    }
    let (d, m) = (a.dim(), x.dim());
    let unknowns = d * m;
    let columns: Vec<Cochain> = (0..unknowns)
        .map(|u| {
            let mut e = Cochain::zero(1, d, m);
            e.coefficients[u] = C64::new(1.0, 0.0);
            coboundary(&e, a, x)
        })
        .collect::<Result<_>>()?;
    let rows = d * d * m;
    let system = ComplexMatrix::from_fn(rows, unknowns, |r, u| columns[u].coefficients[r]);
    let decomposition = svd(&system);
    let rank = decomposition.rank(NULLSPACE_TOL);
    let v = &decomposition.right_factors;
    Ok((rank..unknowns)
        .map(|k| Cochain { degree: 1, algebra_dim: d, module_dim: m, coefficients: v.column_vec(k) })
        .collect())
}

/// A cochain together with the algebra and module it lives on.
#[derive(Debug, Clone)]
pub struct TensorCocycle {
    pub algebra: CommutativeAlgebra,
    pub module: Bimodule,
    pub cochain: Cochain,
}

/// The alternating 2-cocycle on `A ⊗ B` with values in `X ⊗ Y`:
/// `F(a₁⊗b₁, a₂⊗b₂) = [D_A(a₁)·a₂]⊗[b₁·D_B(b₂)] − [a₁·D_A(a₂)]⊗[D_B(b₁)·b₂]`.
pub fn wedge(
    da: &Cochain,
    a: &CommutativeAlgebra,
    x: &Bimodule,
    db: &Cochain,
    b: &CommutativeAlgebra,
    y: &Bimodule,
) -> Result<TensorCocycle> {
    for (dd, alg, module, side) in [(da, a, x, "first"), (db, b, y, "second")] {
        if dd.degree != 1 {
            return invalid(format!("{side} factor: expected a degree 1 cochain"));
        }
        dd.check_against(alg, module)?;
        if !module.is_symmetric() {
            return invalid(format!("{side} factor: module is not symmetric"));
        }
        if coboundary(dd, alg, module)?.max_abs() > identity_tol(alg, module, dd) {
            return invalid(format!("{side} factor: map is not a derivation"));
        }
    }
    let algebra = a.tensor(b);
    let module = x.tensor(y, &algebra)?;
    let (na, nb, mx, my) = (a.dim(), b.dim(), x.dim(), y.dim());
    let mut cochain = Cochain::zero(2, na * nb, mx * my);
    for i in 0..na {
        for k in 0..na {
            let da_i_k = x.act_right(da.value(&[i]), &a.basis(k));
            let i_da_k = x.act_left(&a.basis(i), da.value(&[k]));
            for j in 0..nb {
                let db_j = db.value(&[j]);
                for l in 0..nb {
                    let j_db_l = y.act_left(&b.basis(j), db.value(&[l]));
                    let db_j_l = y.act_right(db_j, &b.basis(l));
                    let s = encode(&[i * nb + j, k * nb + l], na * nb);
                    let slot = &mut cochain.coefficients[s * mx * my..(s + 1) * mx * my];
                    for p in 0..mx {
                        for q in 0..my {
                            slot[p * my + q] = da_i_k[p] * j_db_l[q] - i_da_k[p] * db_j_l[q];
                        }
                    }
                }
            }
        }
    }
    let tol = identity_tol(&algebra, &module, &cochain);
    if !is_alternating(&cochain, IDENTITY_TOL)? {
        return Err(Error::CheckFailed("wedge output is not alternating".into()));
    }
    let defect = coboundary(&cochain, &algebra, &module)?.max_abs();
    if defect > tol {
        return Err(Error::CheckFailed(format!("wedge output is not a 2-cocycle ({defect:e})")));
    }
    Ok(TensorCocycle { algebra, module, cochain })
}

/// `θ*F(a₁, a₂)(a₀) = F(θa₁, θa₂)(θa₀)` for `F` with values in `B*` (dual
/// coordinates) and `θ: A → B` given by the matrix whose columns are `θ(eᵢ)`.
pub fn pullback(f: &Cochain, theta: &ComplexMatrix, a: &CommutativeAlgebra, b: &CommutativeAlgebra) -> Result<Cochain> {
    require_degree_two(f)?;
    let (na, nb) = (a.dim(), b.dim());
    if f.algebra_dim != nb || f.module_dim != nb {
        return invalid("cochain must map B × B into B*");
    }
    if theta.shape() != (nb, na) {
        return invalid(format!("theta must be {nb}x{na}"));
    }
    let images: Vec<Vec<C64>> = (0..na).map(|i| theta.column_vec(i)).collect();
    let tol = IDENTITY_TOL * scale_of(a.structure()) * scale_of(b.structure()) * scale_of(theta.as_slice()).powi(2);
    for i in 0..na {
        for j in 0..na {
            let lhs = theta.apply(&a.basis_product(i, j));
            let rhs = b.mul(&images[i], &images[j]);
            if max_diff(&lhs, &rhs) > tol {
                return invalid(format!("theta is not multiplicative on (e{i}, e{j})"));
            }
        }
    }
    let out = Cochain::from_fn(2, na, na, |t, k| {
        let paired = f.evaluate(&[&images[t[0]], &images[t[1]]]).expect("shapes checked");
        paired.iter().zip(&images[k]).map(|(u, v)| u * v).sum()
    });

    let dual_b = Bimodule::dual(b);
    let input_tol = identity_tol(b, &dual_b, f);
    let input_cocycle = is_alternating(f, IDENTITY_TOL)? && coboundary(f, b, &dual_b)?.max_abs() <= input_tol;
    if input_cocycle {
        let dual_a = Bimodule::dual(a);
        let defect = coboundary(&out, a, &dual_a)?.max_abs();
        let scale = scale_of(theta.as_slice()).powi(3);
        if !is_alternating(&out, IDENTITY_TOL)? || defect > identity_tol(a, &dual_a, &out) * scale {
            return Err(Error::CheckFailed("pullback of an alternating 2-cocycle is not one".into()));
        }
    }
    let surjective = svd(theta).rank(NULLSPACE_TOL) == nb;
    if surjective && f.max_abs() > input_tol && out.max_abs() <= input_tol {
        return Err(Error::CheckFailed("pullback along a surjection killed a nonzero cochain".into()));
    }
    Ok(out)
}

/// Outcome of the polarization identities on random pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationReport {
    pub samples: usize,
    pub max_product_error: f64,
    pub max_quartic_error: f64,
    /// Dimension of the span of the sampled squares after each sample.
    pub square_span: Vec<usize>,
    /// Dimension of the span of the sampled fourth powers after each sample.
    pub fourth_power_span: Vec<usize>,
    /// Sample count after which the square span no longer grows.
    pub square_span_stable_from: Option<usize>,
    pub fourth_power_span_stable_from: Option<usize>,
    pub passed: bool,
}

pub const POLARIZATION_TOL: f64 = 1e-9;

/// Checks `ab = ¼[(a+b)² − (a−b)²]` and
/// `a²b² = (1/24)[(a+b)⁴ + (a−b)⁴ − (a+ib)⁴ − (a−ib)⁴]` on random unit pairs.
pub fn polarization_check(a: &CommutativeAlgebra, samples: usize, seed: u64) -> PolarizationReport {
    let mut max_product_error: f64 = 0.0;
    let mut max_quartic_error: f64 = 0.0;
    let mut squares = Vec::new();
    let mut fourths = Vec::new();
    let mut square_span = Vec::new();
    let mut fourth_power_span = Vec::new();
    let i = C64::new(0.0, 1.0);
    let pow4 = |v: &[C64]| {
        let s = a.mul(v, v);
        a.mul(&s, &s)
    };
    let comb = |u: &[C64], s: C64, v: &[C64]| -> Vec<C64> { u.iter().zip(v).map(|(p, q)| p + s * q).collect() };
    for n in 0..samples {
        let mut rng = crate::random::rng_for(seed, n as u64);
        let x = a.random_element(&mut rng);
        let y = a.random_element(&mut rng);
        let one = C64::new(1.0, 0.0);
        let (sum, diff) = (comb(&x, one, &y), comb(&x, -one, &y));
        let product = a.mul(&x, &y);
        let polarized: Vec<C64> =
            a.mul(&sum, &sum).iter().zip(&a.mul(&diff, &diff)).map(|(p, q)| (p - q) * 0.25).collect();
        max_product_error = max_product_error.max(max_diff(&product, &polarized));

        let x2 = a.mul(&x, &x);
        let y2 = a.mul(&y, &y);
        let lhs = a.mul(&x2, &y2);
        let terms = [pow4(&sum), pow4(&diff), pow4(&comb(&x, i, &y)), pow4(&comb(&x, -i, &y))];
        let rhs: Vec<C64> =
            (0..a.dim()).map(|k| (terms[0][k] + terms[1][k] - terms[2][k] - terms[3][k]) / 24.0).collect();
        max_quartic_error = max_quartic_error.max(max_diff(&lhs, &rhs));

        squares.push(x2);
        fourths.push(pow4(&x));
        square_span.push(span_dim(&squares));
        fourth_power_span.push(span_dim(&fourths));
    }
    let tol = POLARIZATION_TOL * scale_of(a.structure()).powi(3);
    PolarizationReport {
        samples,
        max_product_error,
        max_quartic_error,
        square_span_stable_from: stable_from(&square_span),
        fourth_power_span_stable_from: stable_from(&fourth_power_span),
        square_span,
        fourth_power_span,
        passed: max_product_error <= tol && max_quartic_error <= tol,
    }
}

fn span_dim(vectors: &[Vec<C64>]) -> usize {
    let m = ComplexMatrix::from_fn(vectors[0].len(), vectors.len(), |i, j| vectors[j][i]);
    svd(&m).rank(NULLSPACE_TOL)
}

fn stable_from(dims: &[usize]) -> Option<usize> {
    let last = *dims.last()?;
    Some(dims.iter().position(|&d| d == last).map_or(dims.len(), |p| p + 1))
}
