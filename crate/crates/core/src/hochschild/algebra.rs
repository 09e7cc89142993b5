use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matcore::{ComplexMatrix, C64, ONE, ZERO};
use crate::random::{complex_gaussian_vec, haar_isometry};

/// Absolute tolerance (scaled by the size of the structure constants) for
/// algebraic identities checked on basis tuples.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Finite-dimensional commutative algebra given by structure constants
/// `eᵢeⱼ = Σₖ c[i][j][k] eₖ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct CommutativeAlgebra {
    dim: usize,
    structure: Vec<C64>,
    unit: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    dim: usize,
    structure: Vec<Vec<Vec<[f64; 2]>>>,
    unit: Option<usize>,
}

impl TryFrom<RawAlgebra> for CommutativeAlgebra {
    type Error = Error;
    fn try_from(raw: RawAlgebra) -> Result<Self> {
        let n = raw.dim;
        if raw.structure.len() != n {
            return invalid(format!("structure has {} slices, expected dim = {n}", raw.structure.len()));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (i, plane) in raw.structure.iter().enumerate() {
            if plane.len() != n {
                return invalid(format!("structure[{i}] has {} rows, expected {n}", plane.len()));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return invalid(format!("structure[{i}][{j}] has {} entries, expected {n}", row.len()));
                }
                flat.extend(row.iter().map(|z| C64::new(z[0], z[1])));
            }
        }
        CommutativeAlgebra::new(n, flat, raw.unit)
    }
}

impl From<CommutativeAlgebra> for RawAlgebra {
    fn from(a: CommutativeAlgebra) -> Self {
        let n = a.dim;
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                let z = a.c(i, j, k);
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        RawAlgebra { dim: n, structure, unit: a.unit }
    }
}

pub(crate) fn scale_of(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

impl CommutativeAlgebra {
    /// Validates commutativity, associativity and the unit on basis tuples.
    pub fn new(dim: usize, structure: Vec<C64>, unit: Option<usize>) -> Result<Self> {
        if dim == 0 {
            return invalid("algebra dimension must be positive");
        }
        if structure.len() != dim * dim * dim {
            return invalid(format!("expected {} structure constants, got {}", dim * dim * dim, structure.len()));
        }
        if structure.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("structure constants must be finite");
        }
        let a = Self { dim, structure, unit };
        let scale = scale_of(&a.structure);
        let tol = IDENTITY_TOL * scale * scale;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if (a.c(i, j, k) - a.c(j, i, k)).norm() > tol {
                        return invalid(format!("not commutative: e{i}e{j} != e{j}e{i}"));
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let eij = a.basis_product(i, j);
                for k in 0..dim {
                    let left = a.mul(&eij, &a.basis(k));
                    let right = a.mul(&a.basis(i), &a.basis_product(j, k));
                    if max_diff(&left, &right) > tol * scale {
                        return invalid(format!("not associative on basis triple ({i}, {j}, {k})"));
                    }
                }
            }
        }
        if let Some(u) = unit {
            if u >= dim {
                return invalid(format!("unit index {u} out of range"));
            }
            for j in 0..dim {
                if max_diff(&a.basis_product(u, j), &a.basis(j)) > tol {
                    return invalid(format!("e{u} is not a unit"));
                }
            }
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> C64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure(&self) -> &[C64] {
        &self.structure
    }

    pub fn basis(&self, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        v[i] = ONE;
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<C64> {
        (0..self.dim).map(|k| self.c(i, j, k)).collect()
    }

    pub fn mul(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let s = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += s * self.c(i, j, k);
                }
            }
        }
        out
    }

    pub fn power(&self, x: &[C64], n: u32) -> Result<Vec<C64>> {
        if n == 0 {
            let Some(u) = self.unit else {
                return invalid("zeroth power needs a unit");
            };
            return Ok(self.basis(u));
        }
        let mut acc = x.to_vec();
        for _ in 1..n {
            acc = self.mul(&acc, x);
        }
        Ok(acc)
    }

    /// `ℂⁿ` with pointwise product on the standard basis of indicators.
    pub fn pointwise(n: usize) -> Self {
        let mut s = vec![ZERO; n * n * n];
        for i in 0..n {
            s[(i * n + i) * n + i] = ONE;
        }
        Self { dim: n, structure: s, unit: if n == 1 { Some(0) } else { None } }
    }

    pub fn scalars() -> Self {
        Self::pointwise(1)
    }

    /// `ℂ[x]/(x^m)` on the basis `1, x, …, x^{m−1}`.
    pub fn truncated_polynomial(m: usize) -> Self {
        let mut s = vec![ZERO; m * m * m];
        for i in 0..m {
            for j in 0..m {
                if i + j < m {
                    s[(i * m + j) * m + i + j] = ONE;
                }
            }
        }
        Self { dim: m, structure: s, unit: Some(0) }
    }

    /// `ℂ[ε]/(ε²)` on the basis `1, ε`.
    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(2)
    }

    /// `A ⊕ B` with componentwise product.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        let mut s = vec![ZERO; n * n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    s[(i * n + j) * n + k] = self.c(i, j, k);
                }
            }
        }
        let o = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    s[((o + i) * n + o + j) * n + o + k] = other.c(i, j, k);
                }
            }
        }
        Self { dim: n, structure: s, unit: None }
    }

    /// Structure constants in the basis `fᵢ = Σⱼ S[j][i] eⱼ` (columns of `S`).
    pub fn change_basis(&self, s: &ComplexMatrix) -> Result<Self> {
        let n = self.dim;
        if s.shape() != (n, n) {
            return invalid("change of basis must be square of the algebra dimension");
        }
        let sinv = s.inverse()?;
        let mut out = vec![ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let fi: Vec<C64> = (0..n).map(|p| s.get(p, i)).collect();
                let fj: Vec<C64> = (0..n).map(|q| s.get(q, j)).collect();
                let prod = self.mul(&fi, &fj);
                let coords = sinv.apply(&prod);
                for k in 0..n {
                    out[(i * n + j) * n + k] = coords[k];
                }
            }
        }
        Self::new(n, out, None)
    }

    /// A known algebra of dimension at most `max_dim` (semisimple, local,
    /// or mixed) under a well-conditioned random change of basis.
    pub fn random(max_dim: usize, rng: &mut impl Rng) -> Self {
        let max_dim = max_dim.max(1);
        let base = loop {
            let cand = match rng.random_range(0..5) {
                0 => Self::pointwise(rng.random_range(1..=max_dim)),
                1 => Self::truncated_polynomial(rng.random_range(1..=max_dim)),
                2 if max_dim >= 2 => {
                    let m = rng.random_range(1..max_dim);
                    Self::truncated_polynomial(m).direct_sum(&Self::pointwise(rng.random_range(1..=max_dim - m)))
                }
                3 if max_dim >= 4 => Self::dual_numbers().tensor(&Self::dual_numbers()),
                4 if max_dim >= 3 => {
                    let m = rng.random_range(2..=max_dim);
                    Self::truncated_polynomial(m - 1).direct_sum(&Self::scalars())
                }
                _ => continue,
            };
            break cand;
        };
        let n = base.dim;
        let u = haar_isometry(n, n, rng);
        let d: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(0.5..2.0), 0.0)).collect();
        let s = u.matmul(&ComplexMatrix::diag(&d));
        base.change_basis(&s).expect("well-conditioned change of basis")
    }

    /// Random element with unit Euclidean coordinate norm.
    pub fn random_element(&self, rng: &mut impl Rng) -> Vec<C64> {
        crate::random::unit_vector(self.dim, rng)
    }

    /// Random element with standard Gaussian coordinates.
    pub fn gaussian_element(&self, rng: &mut impl Rng) -> Vec<C64> {
        complex_gaussian_vec(self.dim, rng)
    }

    /// Algebraic tensor product on the basis `eᵢ ⊗ fⱼ ↦ i·dim(B) + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let d = n * m;
        let mut s = vec![ZERO; d * d * d];
        for i in 0..n {
            for k in 0..n {
                for p in 0..n {
                    let a = self.c(i, k, p);
                    if a == ZERO {
                        continue;
                    }
                    for j in 0..m {
                        for l in 0..m {
                            for q in 0..m {
                                s[((i * m + j) * d + k * m + l) * d + p * m + q] = a * other.c(j, l, q);
                            }
                        }
                    }
                }
            }
        }
        let unit = self.unit.zip(other.unit).map(|(u, v)| u * m + v);
        Self { dim: d, structure: s, unit }
    }
}

pub(crate) fn max_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Bimodule over a commutative algebra:
/// `eᵢ·x_p = Σ_q left[i][p][q] x_q` and `x_p·eᵢ = Σ_q right[p][i][q] x_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule {
    algebra_dim: usize,
    dim: usize,
    left: Vec<C64>,
    right: Vec<C64>,
    symmetric: bool,
}

impl Bimodule {
    /// Validates the module axioms on basis triples over `algebra`.
    pub fn new(algebra: &CommutativeAlgebra, dim: usize, left: Vec<C64>, right: Vec<C64>) -> Result<Self> {
        let n = algebra.dim();
        if dim == 0 {
            return invalid("module dimension must be positive");
        }
        if left.len() != n * dim * dim || right.len() != n * dim * dim {
            return invalid("action arrays have the wrong length");
        }
        let mut m = Self { algebra_dim: n, dim, left, right, symmetric: false };
        let scale = scale_of(&m.left).max(scale_of(&m.right)) * scale_of(algebra.structure());
        let tol = IDENTITY_TOL * scale * scale;
        for i in 0..n {
            for j in 0..n {
                let eij = algebra.basis_product(i, j);
                for p in 0..dim {
                    let x = m.basis(p);
                    let checks = [
                        (
                            m.act_left(&eij, &x),
                            m.act_left(&algebra.basis(i), &m.act_left(&algebra.basis(j), &x)),
                            "left",
                        ),
                        (
                            m.act_right(&x, &eij),
                            m.act_right(&m.act_right(&x, &algebra.basis(i)), &algebra.basis(j)),
                            "right",
                        ),
                        (
                            m.act_right(&m.act_left(&algebra.basis(i), &x), &algebra.basis(j)),
                            m.act_left(&algebra.basis(i), &m.act_right(&x, &algebra.basis(j))),
                            "bimodule",
                        ),
                    ];
                    for (l, r, what) in checks {
                        if max_diff(&l, &r) > tol {
                            return invalid(format!("{what} module axiom fails on (e{i}, e{j}, x{p})"));
                        }
                    }
                }
            }
        }
        if let Some(u) = algebra.unit() {
            for p in 0..dim {
                let x = m.basis(p);
                if max_diff(&m.act_left(&algebra.basis(u), &x), &x) > tol
                    || max_diff(&m.act_right(&x, &algebra.basis(u)), &x) > tol
                {
                    return invalid("the unit does not act as the identity");
                }
            }
        }
        m.symmetric = (0..n).all(|i| (0..dim).all(|p| (0..dim).all(|q| (m.l(i, p, q) - m.r(p, i, q)).norm() <= tol)));
        Ok(m)
    }

    /// The algebra acting on itself by multiplication.
    pub fn regular(a: &CommutativeAlgebra) -> Self {
        let n = a.dim();
        let mut left = vec![ZERO; n * n * n];
        let mut right = vec![ZERO; n * n * n];
        for i in 0..n {
            for p in 0..n {
                for q in 0..n {
                    left[(i * n + p) * n + q] = a.c(i, p, q);
                    right[(p * n + i) * n + q] = a.c(p, i, q);
                }
            }
        }
        Self::new(a, n, left, right).expect("regular module of a valid algebra")
    }

    /// The dual `A*` in the dual basis: `(a·φ)(b) = φ(ba)`, `(φ·a)(b) = φ(ab)`.
    pub fn dual(a: &CommutativeAlgebra) -> Self {
        let n = a.dim();
        let mut left = vec![ZERO; n * n * n];
        let mut right = vec![ZERO; n * n * n];
        for i in 0..n {
            for p in 0..n {
                for q in 0..n {
                    left[(i * n + p) * n + q] = a.c(q, i, p);
                    right[(p * n + i) * n + q] = a.c(i, q, p);
                }
            }
        }
        Self::new(a, n, left, right).expect("dual module of a valid algebra")
    }

    /// `X ⊗ Y` over `A ⊗ B` with componentwise actions.
    pub fn tensor(&self, other: &Self, over: &CommutativeAlgebra) -> Result<Self> {
        let (n, m) = (self.algebra_dim, other.algebra_dim);
        if over.dim() != n * m {
            return invalid("tensor bimodule needs the tensor product algebra");
        }
        let (dx, dy) = (self.dim, other.dim);
        let d = dx * dy;
        let mut left = vec![ZERO; n * m * d * d];
        let mut right = vec![ZERO; n * m * d * d];
        for i in 0..n {
            for j in 0..m {
                let a = i * m + j;
                for p in 0..dx {
                    for s in 0..dy {
                        for q in 0..dx {
                            for t in 0..dy {
                                left[(a * d + p * dy + s) * d + q * dy + t] = self.l(i, p, q) * other.l(j, s, t);
                                right[((p * dy + s) * n * m + a) * d + q * dy + t] = self.r(p, i, q) * other.r(s, j, t);
                            }
                        }
                    }
                }
            }
        }
        Self::new(over, d, left, right)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn l(&self, i: usize, p: usize, q: usize) -> C64 {
        self.left[(i * self.dim + p) * self.dim + q]
    }

    pub fn r(&self, p: usize, i: usize, q: usize) -> C64 {
        self.right[(p * self.algebra_dim + i) * self.dim + q]
    }

    pub fn basis(&self, p: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        v[p] = ONE;
        v
    }

    pub fn act_left(&self, a: &[C64], x: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == ZERO {
                continue;
            }
            for (p, &xp) in x.iter().enumerate() {
                if xp == ZERO {
                    continue;
                }
                for (q, o) in out.iter_mut().enumerate() {
                    *o += ai * xp * self.l(i, p, q);
                }
            }
        }
        out
    }

    pub fn act_right(&self, x: &[C64], a: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == ZERO {
                continue;
            }
            for (p, &xp) in x.iter().enumerate() {
                if xp == ZERO {
                    continue;
                }
                for (q, o) in out.iter_mut().enumerate() {
                    *o += ai * xp * self.r(p, i, q);
                }
            }
        }
        out
    }

    /// Action arrays agree entrywise.
    pub fn same_actions(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self.algebra_dim == other.algebra_dim
            && max_diff(&self.left, &other.left) <= tol
            && max_diff(&self.right, &other.right) <= tol
    }
}

/// `A ⊗ B`.
pub fn tensor_algebra(a: &CommutativeAlgebra, b: &CommutativeAlgebra) -> CommutativeAlgebra {
    a.tensor(b)
}

/// `X ⊗ Y` over `A ⊗ B`, where `X` is an `A`-bimodule and `Y` a `B`-bimodule.
pub fn tensor_bimodule(x: &Bimodule, a: &CommutativeAlgebra, y: &Bimodule, b: &CommutativeAlgebra) -> Result<Bimodule> {
    if x.algebra_dim() != a.dim() || y.algebra_dim() != b.dim() {
        return invalid("bimodule and algebra dimensions disagree");
    }
    x.tensor(y, &a.tensor(b))
}
