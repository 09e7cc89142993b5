//! Dense complex matrices and the handful of spectral tools the rest of the
//! crate is built on.
//!
//! Matrices are immutable values: every operation allocates its result.
//! The JSON form is a nested array of rows whose entries are `[re, im]`
//! pairs, and that encoding is shared by every other module.

mod svd;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

pub use svd::{svd, svd_checked, SvdResult};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid(format!("matrix shape {rows}x{cols} has a zero dimension"));
        }
        if data.len() != rows * cols {
            return invalid(format!("matrix {rows}x{cols} needs {} entries, got {}", rows * cols, data.len()));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid(format!("non-finite entry at ({}, {})", pos / cols, pos % cols));
        }
        Ok(Self { rows, cols, data })
    }

    /// Internal constructor for results of arithmetic on valid matrices.
    pub(crate) fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(rows > 0 && cols > 0);
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return invalid(format!("row {bad} has length {} but row 0 has {c}", rows[bad].len()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Matrix unit `E_ij` of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| if r == i && c == j { ONE } else { ZERO })
    }

    /// Column vector from a slice.
    pub fn column(v: &[C64]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vec(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_vec(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_vec(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self::from_vec(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; m * n];
        for i in 0..m {
            let row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[p * n..(p + 1) * n];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec(m, n, out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`; row index of the result is
    /// `i * rhs.rows + k` for entry `(i, j)` of `self` and `(k, l)` of `rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = rhs.shape();
        Self::from_fn(self.rows * p, self.cols * q, |r, c| self.get(r / p, c / q) * rhs.get(r % p, c % q))
    }

    /// Entrywise `self += s * other`, returning a new matrix.
    pub fn add_scaled(&self, other: &Self, s: C64) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_scaled");
        Self::from_vec(self.rows, self.cols, self.data.iter().zip(&other.data).map(|(a, b)| a + b * s).collect())
    }

    /// Row-major flattening as a vector.
    pub fn flatten(&self) -> Vec<C64> {
        self.data.clone()
    }

    /// Column-stacking vectorization.
    pub fn vec_cols(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Inverse of [`ComplexMatrix::vec_cols`].
    pub fn unvec_cols(rows: usize, cols: usize, v: &[C64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| v[j * rows + i])
    }

    pub fn singular_values(&self) -> Vec<f64> {
        svd(self).singular_values
    }

    /// Operator (spectral) norm.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Trace pairing `tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(i, k) * rhs.get(k, i);
            }
        }
        acc
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return invalid("inverse of a non-square matrix");
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap();
            if a[piv * n + col].norm() <= 1e-14 * scale {
                return invalid("matrix is numerically singular");
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let d = a[col * n + col].inv();
            for j in 0..n {
                a[col * n + j] *= d;
                inv[col * n + j] *= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * ac;
                    inv[r * n + j] -= f * ic;
                }
            }
        }
        Ok(Self::from_vec(n, n, inv))
    }

    /// Lower-triangular `L` with `self = L L*`, or `None` if `self` is not
    /// numerically Hermitian positive definite. Only the lower triangle is read.
    pub fn cholesky(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d.is_nan() || d <= 0.0 || d.is_infinite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = C64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Self::from_vec(n, n, l))
    }

    /// `(L L*)⁻¹` for a lower-triangular Cholesky factor `L` (`self`).
    pub fn cholesky_inverse(&self) -> Self {
        let n = self.rows;
        // Invert L by forward substitution, then form L⁻* L⁻¹.
        let mut linv = vec![ZERO; n * n];
        for c in 0..n {
            for i in c..n {
                let mut s = if i == c { ONE } else { ZERO };
                for k in c..i {
                    s -= self.get(i, k) * linv[k * n + c];
                }
                linv[i * n + c] = s / self.get(i, i);
            }
        }
        let linv = Self::from_vec(n, n, linv);
        linv.adjoint().matmul(&linv)
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    pub fn expm(&self) -> Self {
        assert!(self.is_square(), "expm of a non-square matrix");
        let n = self.rows;
        let norm = self.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = self.scale_real(0.5f64.powi(squarings as i32));
        let mut term = Self::identity(n);
        let mut sum = Self::identity(n);
        for k in 1..=18 {
            term = term.matmul(&a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(rhs, ONE)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(rhs, -ONE)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// Which Schatten class a norm is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchattenP {
    One,
    Two,
    Infinity,
}

impl SchattenP {
    /// Parses the exponent; only 1, 2 and infinity are supported.
    pub fn from_exponent(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Self::One)
        } else if p == 2.0 {
            Ok(Self::Two)
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            invalid(format!("unsupported Schatten exponent {p}; use 1, 2 or infinity"))
        }
    }
}

/// Schatten norm from the singular values.
pub fn schatten_norm(m: &ComplexMatrix, p: SchattenP) -> f64 {
    let s = m.singular_values();
    match p {
        SchattenP::One => s.iter().sum(),
        SchattenP::Two => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
        SchattenP::Infinity => s.first().copied().unwrap_or(0.0),
    }
}

/// Schatten norm for a numeric exponent, failing on unsupported `p`.
pub fn schatten_norm_p(m: &ComplexMatrix, p: f64) -> Result<f64> {
    Ok(schatten_norm(m, SchattenP::from_exponent(p)?))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// The transpose map `b ↦ b^⊤`, with `b^⊤ ξ = conj(b* conj(ξ))`. In the
/// standard basis this is the entrywise transpose with no conjugation.
pub fn transpose_map(b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose()
}

/// Banach-space adjoint `b^#` acting on the dual space, written in the dual
/// basis. Its matrix is the plain transpose, so this agrees with
/// [`transpose_map`]; the twisted spatial norm uses it to realize the
/// opposite structure on the second tensor factor.
pub fn banach_adjoint(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !b.is_square() {
        return invalid(format!("banach_adjoint expects a square matrix, got {}x{}", b.rows, b.cols));
    }
    Ok(b.transpose())
}

/// Serializes a complex scalar as `[re, im]`.
pub mod complex_serde {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }

    /// Same encoding for a vector of scalars.
    pub mod vec {
        use super::C64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
            let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
            pairs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
            let pairs = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..self.rows).map(|i| self.row_vec(i).iter().map(|z| [z.re, z.im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let rows: Vec<Vec<C64>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}
