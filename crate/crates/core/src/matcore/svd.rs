//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Columns are orthogonalized pairwise by complex plane rotations until every
//! pair is orthogonal to working precision.

use super::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 80;
const ORTH_TOL: f64 = 1e-15;

/// Thin singular value decomposition `M = U · diag(σ) · V*`.
///
/// For an `m×n` input with `k = min(m, n)`, `left_factors` is `m×k`,
/// `right_factors` is `n×k`, both with orthonormal columns, and the singular
/// values are sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    pub left_factors: ComplexMatrix,
    pub right_factors: ComplexMatrix,
}

impl SvdResult {
    /// `U · diag(σ) · V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.left_factors;
        let v = &self.right_factors;
        ComplexMatrix::from_fn(u.rows(), v.rows(), |i, j| {
            self.singular_values.iter().enumerate().map(|(k, &s)| u.get(i, k) * v.get(j, k).conj() * s).sum()
        })
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rel_tol * top).count()
    }

    /// Unitary polar factor `U V*` (a partial isometry for rectangular input).
    pub fn polar_factor(&self) -> ComplexMatrix {
        self.left_factors.matmul(&self.right_factors.adjoint())
    }
}

/// Checked entry point: rejects dimension-zero input.
pub fn svd_checked(rows: usize, cols: usize, data: Vec<C64>) -> Result<SvdResult> {
    if rows == 0 || cols == 0 {
        return invalid("svd of a dimension-zero matrix");
    }
    Ok(svd(&ComplexMatrix::new(rows, cols, data)?))
}

/// Thin SVD of `m`.
pub fn svd(m: &ComplexMatrix) -> SvdResult {
    if m.rows() >= m.cols() {
        tall_svd(m)
    } else {
        let t = tall_svd(&m.adjoint());
        SvdResult { singular_values: t.singular_values, left_factors: t.right_factors, right_factors: t.left_factors }
    }
}

fn tall_svd(m: &ComplexMatrix) -> SvdResult {
    let (rows, cols) = m.shape();
    // Column-major working copies so that column operations are contiguous.
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column_vec(j)).collect();
    let mut v: Vec<Vec<C64>> =
        (0..cols).map(|j| (0..cols).map(|i| if i == j { ONE } else { ZERO }).collect()).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, p, q, phase, cs, sn);
                rotate(&mut v, p, q, phase, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let top = norms[order[0]];
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut singular_values = Vec::with_capacity(cols);
    let mut v_cols = Vec::with_capacity(cols);
    for &j in &order {
        let s = norms[j];
        singular_values.push(s);
        v_cols.push(v[j].clone());
        if s > 1e-300 && s >= 1e-14 * top {
            u_cols.push(a[j].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(Vec::new());
        }
    }
    complete_orthonormal(&mut u_cols, rows);

    let u = ComplexMatrix::from_fn(rows, cols, |i, k| u_cols[k][i]);
    let vm = ComplexMatrix::from_fn(cols, cols, |i, k| v_cols[k][i]);
    SvdResult { singular_values, left_factors: u, right_factors: vm }
}

/// Applies `x_p ← c x_p − s e^{-iφ} x_q`, `x_q ← s x_p + c e^{-iφ} x_q`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    let ph = phase.conj();
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bp = *b * ph;
        let ap = *a;
        *a = ap * c - bp * s;
        *b = ap * s + bp * c;
    }
}

/// Fills empty columns (from zero singular values) with unit vectors
/// orthogonal to the rest, using Gram–Schmidt on the standard basis.
fn complete_orthonormal(cols: &mut [Vec<C64>], dim: usize) {
    let mut next_basis = 0usize;
    for k in 0..cols.len() {
        if !cols[k].is_empty() {
            continue;
        }
        loop {
            assert!(next_basis < dim, "ran out of basis vectors completing an orthonormal set");
            let mut cand: Vec<C64> = (0..dim).map(|i| if i == next_basis { ONE } else { ZERO }).collect();
            next_basis += 1;
            for _ in 0..2 {
                for other in cols.iter().filter(|c| !c.is_empty()) {
                    let proj: C64 = other.iter().zip(&cand).map(|(o, x)| o.conj() * x).sum();
                    for (x, o) in cand.iter_mut().zip(other) {
                        *x -= proj * o;
                    }
                }
            }
            let n = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-6 {
                cols[k] = cand.iter().map(|z| z / n).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, rng_for};

    fn unitary_defect(m: &ComplexMatrix) -> f64 {
        m.adjoint().matmul(m).max_abs_diff(&ComplexMatrix::identity(m.cols()))
    }

    #[test]
    fn identity_and_diagonal() {
        let s = svd(&ComplexMatrix::identity(3));
        assert_eq!(s.singular_values, vec![1.0, 1.0, 1.0]);

        let d = ComplexMatrix::diag(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        let s = svd(&d);
        assert!((s.singular_values[0] - 4.0).abs() < 1e-14);
        assert!((s.singular_values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ginibre_reconstruction() {
        let mut rng = rng_for(2024, 0);
        for (r, c) in [(5, 4), (4, 5), (1, 6), (6, 1), (7, 7), (12, 3)] {
            let m = ginibre(r, c, &mut rng);
            let s = svd(&m);
            let err = s.reconstruct().max_abs_diff(&m);
            assert!(err <= 1e-10 * m.frobenius_norm().max(1.0), "{r}x{c}: {err}");
            assert!(unitary_defect(&s.left_factors) < 1e-10);
            assert!(unitary_defect(&s.right_factors) < 1e-10);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_factors_stay_orthonormal() {
        let mut rng = rng_for(7, 0);
        let x = ginibre(6, 2, &mut rng);
        let y = ginibre(2, 5, &mut rng);
        let m = x.matmul(&y);
        let s = svd(&m);
        assert_eq!(s.rank(1e-10), 2);
        assert!(unitary_defect(&s.left_factors) < 1e-10);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-10 * m.frobenius_norm());

        let z = svd(&ComplexMatrix::zeros(3, 2));
        assert_eq!(z.singular_values, vec![0.0, 0.0]);
        assert!(unitary_defect(&z.left_factors) < 1e-12);
        assert_eq!(z.rank(1e-8), 0);
    }

    #[test]
    fn checked_rejects_empty() {
        assert!(svd_checked(0, 3, vec![]).is_err());
        assert!(svd_checked(1, 1, vec![ONE]).is_ok());
    }
}
