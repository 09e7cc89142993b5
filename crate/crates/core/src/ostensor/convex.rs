//! Log-barrier interior-point solve of the Haagerup gauge problem.
//!
//! The objective at a gauge `X` depends only on `P = XX*`, and
//! `‖w‖_h² = min λ` subject to
//! `λI − Σᵢₗ Pᵢₗ aᵢaₗ* ⪰ 0` and `[[I, B*], [B, P ⊗ I]] ⪰ 0`,
//! where `B` stacks the b-side factors. The second constraint is the Schur
//! complement form of `Σᵢₗ (P⁻¹)ᵢₗ bᵢ*bₗ ⪯ I`. Both are linear in `(λ, P)`.

use super::Pair;
use crate::matcore::{ComplexMatrix, C64, ZERO};

/// Representation lengths above this skip the convex solve; the dense
/// Newton system has `k² + 1` unknowns.
pub(super) const MAX_CONVEX_LEN: usize = 20;

const GAP_REL_TOL: f64 = 1e-12;
const MAX_OUTER: usize = 60;
const MAX_NEWTON: usize = 100;

struct Problem {
    k: usize,
    de: usize,
    df: usize,
    a: Vec<ComplexMatrix>,
    /// `aᵢ aₗ*` at index `i·k + l`.
    prods: Vec<ComplexMatrix>,
    b: Vec<ComplexMatrix>,
    /// Real coordinates of `P`: each is a list of `(i, l, coefficient)`.
    coords: Vec<Vec<(usize, usize, C64)>>,
}

impl Problem {
    fn new(pairs: &[Pair]) -> Self {
        let k = pairs.len();
        let alpha = pairs.iter().map(|p| p.a.frobenius_norm()).fold(0.0, f64::max);
        let beta = pairs.iter().map(|p| p.b.frobenius_norm()).fold(0.0, f64::max);
        let a: Vec<ComplexMatrix> = pairs.iter().map(|p| p.a.scale_real(1.0 / alpha)).collect();
        let b: Vec<ComplexMatrix> = pairs.iter().map(|p| p.b.scale_real(1.0 / beta)).collect();
        let mut prods = Vec::with_capacity(k * k);
        for ai in &a {
            for al in &a {
                prods.push(ai.matmul(&al.adjoint()));
            }
        }
        let one = C64::new(1.0, 0.0);
        let i_unit = C64::new(0.0, 1.0);
        let mut coords = Vec::with_capacity(k * k);
        for i in 0..k {
            coords.push(vec![(i, i, one)]);
        }
        for i in 0..k {
            for l in (i + 1)..k {
                coords.push(vec![(i, l, one), (l, i, one)]);
                coords.push(vec![(i, l, i_unit), (l, i, -i_unit)]);
            }
        }
        Self { k, de: a[0].rows(), df: b[0].rows(), a, prods, b, coords }
    }

    fn nu(&self) -> f64 {
        (self.de + self.df * (1 + self.k)) as f64
    }

    fn gram(&self, x: &[f64]) -> ComplexMatrix {
        let k = self.k;
        let mut p = vec![ZERO; k * k];
        for (m, list) in self.coords.iter().enumerate() {
            for &(i, l, c) in list {
                p[i * k + l] += c * x[m + 1];
            }
        }
        ComplexMatrix::from_fn(k, k, |i, l| p[i * k + l])
    }

    fn row_constraint(&self, lambda: f64, p: &ComplexMatrix) -> ComplexMatrix {
        let k = self.k;
        let mut s = ComplexMatrix::identity(self.de).scale_real(lambda);
        for i in 0..k {
            for l in 0..k {
                s = s.add_scaled(&self.prods[i * k + l], -p.get(i, l));
            }
        }
        s
    }

    fn column_constraint(&self, p: &ComplexMatrix) -> ComplexMatrix {
        let (k, df) = (self.k, self.df);
        let n = df * (1 + k);
        ComplexMatrix::from_fn(n, n, |r, c| match (r < df, c < df) {
            (true, true) => {
                if r == c {
                    C64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            }
            (false, true) => self.b[(r - df) / df].get((r - df) % df, c),
            (true, false) => self.b[(c - df) / df].get((c - df) % df, r).conj(),
            (false, false) => {
                let (bi, bl) = ((r - df) / df, (c - df) / df);
                if (r - df) % df == (c - df) % df {
                    p.get(bi, bl)
                } else {
                    ZERO
                }
            }
        })
    }

    /// `t·λ − log det S₁ − log det S₂`, or `None` outside the domain.
    fn value(&self, x: &[f64], t: f64) -> Option<f64> {
        let p = self.gram(x);
        let l1 = self.row_constraint(x[0], &p).cholesky()?;
        let l2 = self.column_constraint(&p).cholesky()?;
        Some(t * x[0] - log_det(&l1) - log_det(&l2))
    }

    fn gradient_hessian(&self, x: &[f64], t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let (k, df) = (self.k, self.df);
        let p = self.gram(x);
        let r = self.row_constraint(x[0], &p).cholesky()?.cholesky_inverse();
        let s2inv = self.column_constraint(&p).cholesky()?.cholesky_inverse();

        let ra: Vec<ComplexMatrix> = self.a.iter().map(|a| r.matmul(a)).collect();
        // u[x·k + y] = a_x* R a_y; q[x·k + y] = block (x, y) of the lower-right part of S₂⁻¹.
        let mut u = Vec::with_capacity(k * k);
        let mut q = Vec::with_capacity(k * k);
        for xi in 0..k {
            let ax = self.a[xi].adjoint();
            for (yi, ray) in ra.iter().enumerate() {
                u.push(ax.matmul(ray));
                q.push(ComplexMatrix::from_fn(df, df, |i, j| s2inv.get(df + xi * df + i, df + yi * df + j)));
            }
        }
        // Complex first and second derivatives in the entry directions E_il.
        let idx = |i: usize, l: usize| i * k + l;
        let mut g = vec![ZERO; k * k];
        let mut h_lam = vec![ZERO; k * k];
        for i in 0..k {
            for l in 0..k {
                g[idx(i, l)] = u[idx(l, i)].trace() - q[idx(l, i)].trace();
                h_lam[idx(i, l)] = -frob_inner(&ra[l], &ra[i]);
            }
        }
        let mut kernel = vec![ZERO; k * k * k * k];
        for a_ in 0..k * k {
            for b_ in 0..k * k {
                kernel[a_ * k * k + b_] = u[a_].trace_product(&u[b_]) + q[a_].trace_product(&q[b_]);
            }
        }
        // D²f[E_il, E_rs] = tr(V_si V_lr) for V = U and V = Q.
        let second = |i: usize, l: usize, r_: usize, s: usize| kernel[idx(s, i) * k * k + idx(l, r_)];

        let n = self.coords.len() + 1;
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        grad[0] = t - r.trace().re;
        hess[0] = r.frobenius_norm().powi(2);
        for (m, list) in self.coords.iter().enumerate() {
            let mut gm = ZERO;
            let mut hl = ZERO;
            for &(i, l, c) in list {
                gm += c * g[idx(i, l)];
                hl += c * h_lam[idx(i, l)];
            }
            grad[m + 1] = gm.re;
            hess[m + 1] = hl.re;
            hess[(m + 1) * n] = hl.re;
            for (m2, list2) in self.coords.iter().enumerate().skip(m) {
                let mut acc = ZERO;
                for &(i, l, c) in list {
                    for &(r_, s, c2) in list2 {
                        acc += c * c2 * second(i, l, r_, s);
                    }
                }
                hess[(m + 1) * n + m2 + 1] = acc.re;
                hess[(m2 + 1) * n + m + 1] = acc.re;
            }
        }
        Some((grad, hess))
    }
}

fn log_det(l: &ComplexMatrix) -> f64 {
    (0..l.rows()).map(|i| l.get(i, i).re.ln()).sum::<f64>() * 2.0
}

fn frob_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a.conj() * b).sum()
}

/// Solves `H d = −g` for symmetric positive definite `H`, adding a small
/// diagonal shift if the factorization breaks down.
fn newton_direction(hess: &[f64], grad: &[f64]) -> Option<Vec<f64>> {
    let n = grad.len();
    let diag_max = (0..n).map(|i| hess[i * n + i].abs()).fold(0.0, f64::max);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(l) = real_cholesky(hess, n, shift) {
            let mut y = vec![0.0; n];
            for i in 0..n {
                let s: f64 = (0..i).map(|j| l[i * n + j] * y[j]).sum();
                y[i] = (-grad[i] - s) / l[i * n + i];
            }
            let mut d = vec![0.0; n];
            for i in (0..n).rev() {
                let s: f64 = ((i + 1)..n).map(|j| l[j * n + i] * d[j]).sum();
                d[i] = (y[i] - s) / l[i * n + i];
            }
            return Some(d);
        }
        shift = if shift == 0.0 { 1e-14 * diag_max.max(1e-300) } else { shift * 100.0 };
    }
    None
}

fn real_cholesky(a: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d.is_nan() || d <= 0.0 || d.is_infinite() {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(l)
}

/// Near-optimal gauge for the row–column Haagerup objective of a minimal
/// representation, or `None` if the solve breaks down.
pub(super) fn haagerup_gauge(pairs: &[Pair]) -> Option<ComplexMatrix> {
    let prob = Problem::new(pairs);
    let k = prob.k;
    let n = prob.coords.len() + 1;

    // Strictly feasible start: P = c·I with the column constraint at half
    // capacity, λ at twice the row norm.
    let col0 = prob.b.iter().fold(ComplexMatrix::zeros(prob.df, prob.df), |acc, b| &acc + &b.adjoint().matmul(b));
    let c = 2.0 * col0.spectral_norm();
    let row0 = prob.prods.iter().step_by(k + 1).fold(ComplexMatrix::zeros(prob.de, prob.de), |acc, m| &acc + m);
    let mut x = vec![0.0; n];
    for xi in x.iter_mut().skip(1).take(k) {
        *xi = c;
    }
    x[0] = 2.0 * c * row0.spectral_norm() + 1e-12;

    let nu = prob.nu();
    let mut t = nu / x[0];
    for _ in 0..MAX_OUTER {
        for _ in 0..MAX_NEWTON {
            let (grad, hess) = prob.gradient_hessian(&x, t)?;
            let dir = newton_direction(&hess, &grad)?;
            let slope: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            if -slope / 2.0 <= 1e-12 {
                break;
            }
            let f0 = prob.value(&x, t)?;
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
                if let Some(f1) = prob.value(&trial, t) {
                    if f1 <= f0 + 0.25 * step * slope {
                        x = trial;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if nu / t <= GAP_REL_TOL * x[0] {
            break;
        }
        t *= 8.0;
    }
    prob.gram(&x).cholesky()
}
