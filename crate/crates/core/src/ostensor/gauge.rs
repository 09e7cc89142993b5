//! Gauge optimization over minimal representations.
//!
//! Any two minimal representations of the same tensor differ by an
//! invertible `k×k` gauge `X`: the a-side stack is multiplied by `X` on the
//! right and the b-side stack by `X⁻¹` on the left. Both the Haagerup
//! objective and the cross sum `Σ‖aⱼ‖‖bⱼ‖` are minimized over `X`.
//!
//! For the Haagerup objective the problem is convex in `XX*` and is solved
//! by an interior-point method; smoothed local searches from random gauges
//! supplement it and are the only method for the cross sum.
//!
//! Largest eigenvalues are smoothed by `tr(M^q)^{1/q}` and optimized in
//! stages of increasing `q`. The exact objective is evaluated at every
//! visited point and the best value is returned, so the result is always the
//! norm bound of an explicit representation.

use rayon::prelude::*;

use super::convex::{haagerup_gauge, MAX_CONVEX_LEN};
use super::{reduce_representation, Pair, TensorElement};
use crate::error::{invalid, Result};
use crate::matcore::{svd, ComplexMatrix, C64, ZERO};
use crate::optim::{minimize, LbfgsOptions};
use crate::random::{ginibre, rng_for};

const Q_STAGES: [f64; 6] = [20.0, 80.0, 320.0, 1280.0, 5120.0, 20480.0];
/// The cross sum is a coarse bound; fewer smoothing stages suffice.
const CROSS_SUM_STAGES: usize = 3;

/// Star placement in the Haagerup objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum HaagerupConvention {
    /// `‖Σ aⱼaⱼ*‖^{1/2} · ‖Σ bⱼ*bⱼ‖^{1/2}`.
    #[default]
    RowColumn,
    /// `‖Σ aⱼ*aⱼ‖^{1/2} · ‖Σ bⱼbⱼ*‖^{1/2}`.
    ColumnRow,
}

#[derive(Debug, Clone)]
pub struct GaugeOptions {
    pub restarts: usize,
    pub seed: u64,
    pub convention: HaagerupConvention,
    /// L-BFGS iterations per smoothing stage.
    pub iterations: usize,
}

impl Default for GaugeOptions {
    fn default() -> Self {
        Self {
            restarts: super::DEFAULT_GAUGE_RESTARTS,
            seed: 0,
            convention: HaagerupConvention::RowColumn,
            iterations: 150,
        }
    }
}

fn inner(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a.conj() * b).sum()
}

fn sum_products(pairs: &[Pair], f: impl Fn(&Pair) -> ComplexMatrix) -> ComplexMatrix {
    let mut it = pairs.iter().map(f);
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, m| &acc + &m)
}

/// The Haagerup objective of this particular representation.
pub fn haagerup_objective(w: &TensorElement) -> f64 {
    haagerup_objective_with(w, HaagerupConvention::RowColumn)
}

pub fn haagerup_objective_with(w: &TensorElement, convention: HaagerupConvention) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    let w = match convention {
        HaagerupConvention::RowColumn => w.clone(),
        HaagerupConvention::ColumnRow => w.adjoint_pairs(),
    };
    let rows = sum_products(w.pairs(), |p| p.a.matmul(&p.a.adjoint()));
    let cols = sum_products(w.pairs(), |p| p.b.adjoint().matmul(&p.b));
    (rows.spectral_norm() * cols.spectral_norm()).sqrt()
}

/// Representation `a′ = a-stack · X`, `b′ = X⁻¹ · b-stack`.
pub fn apply_gauge(w: &TensorElement, x: &ComplexMatrix) -> Result<TensorElement> {
    let k = w.len();
    if x.shape() != (k, k) {
        return invalid(format!("gauge must be {k}x{k}, got {}x{}", x.rows(), x.cols()));
    }
    if k == 0 {
        return Ok(w.clone());
    }
    let y = x.inverse()?;
    TensorElement::new(w.dim_e(), w.dim_f(), gauged_pairs(w.pairs(), x, &y))
}

fn gauged_pairs(pairs: &[Pair], x: &ComplexMatrix, y: &ComplexMatrix) -> Vec<Pair> {
    let k = pairs.len();
    let (de, df) = (pairs[0].a.rows(), pairs[0].b.rows());
    (0..k)
        .map(|j| {
            let mut a = ComplexMatrix::zeros(de, de);
            let mut b = ComplexMatrix::zeros(df, df);
            for (i, p) in pairs.iter().enumerate() {
                a = a.add_scaled(&p.a, x.get(i, j));
                b = b.add_scaled(&p.b, y.get(j, i));
            }
            Pair { a, b }
        })
        .collect()
}

/// Exact largest eigenvalue of a positive semidefinite `m`, the smoothed
/// `log tr(m^q)^{1/q}`, and its derivative with respect to `m`.
fn smoothed_log_max(m: &ComplexMatrix, q: f64) -> Option<(f64, f64, ComplexMatrix)> {
    let s = svd(m);
    let top = s.singular_values[0];
    if top.is_nan() || top <= 0.0 || top.is_infinite() {
        return None;
    }
    let rel: Vec<f64> = s.singular_values.iter().map(|r| r / top).collect();
    let power_sum: f64 = rel.iter().map(|r| r.powf(q)).sum();
    let log_s = top.ln() + power_sum.ln() / q;
    let u = &s.left_factors;
    let d = m.rows();
    let weights: Vec<f64> = rel.iter().map(|r| r.powf(q - 1.0) / (top * power_sum)).collect();
    let grad = ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|k| u.get(i, k) * u.get(j, k).conj() * weights[k]).sum());
    Some((top, log_s, grad))
}

/// What the gauge driver needs from an objective at a point `X`.
struct Evaluation {
    exact: f64,
    log_smooth: f64,
    /// `Z` with `d log_smooth = Re tr(dX · Z)`.
    z: ComplexMatrix,
}

fn haagerup_eval(pairs: &[Pair], x: &ComplexMatrix, q: f64) -> Option<Evaluation> {
    let y = x.inverse().ok()?;
    let g = gauged_pairs(pairs, x, &y);
    let k = pairs.len();
    let rows = sum_products(&g, |p| p.a.matmul(&p.a.adjoint()));
    let cols = sum_products(&g, |p| p.b.adjoint().matmul(&p.b));
    let (r_top, r_log, w1) = smoothed_log_max(&rows, q)?;
    let (c_top, c_log, w2) = smoothed_log_max(&cols, q)?;

    let w1a: Vec<ComplexMatrix> = pairs.iter().map(|p| w1.matmul(&p.a)).collect();
    let bw2: Vec<ComplexMatrix> = pairs.iter().map(|p| p.b.matmul(&w2)).collect();
    let z1 = ComplexMatrix::from_fn(k, k, |j, i| inner(&g[j].a, &w1a[i]));
    let c = ComplexMatrix::from_fn(k, k, |j, i| inner(&g[j].b, &bw2[i]));
    let z2 = y.matmul(&c.transpose()).matmul(&y);
    Some(Evaluation { exact: (r_top * c_top).sqrt(), log_smooth: 0.5 * (r_log + c_log), z: &z1 - &z2 })
}

fn cross_sum_eval(pairs: &[Pair], x: &ComplexMatrix, q: f64) -> Option<Evaluation> {
    let y = x.inverse().ok()?;
    let g = gauged_pairs(pairs, x, &y);
    let k = pairs.len();
    let mut exact = 0.0;
    let mut smooth = 0.0;
    let mut z1 = vec![ZERO; k * k];
    let mut c = vec![ZERO; k * k];
    for (j, p) in g.iter().enumerate() {
        let (ta, la, wa) = smoothed_log_max(&p.a.matmul(&p.a.adjoint()), q)?;
        let (tb, lb, wb) = smoothed_log_max(&p.b.adjoint().matmul(&p.b), q)?;
        exact += (ta * tb).sqrt();
        let term = (0.5 * (la + lb)).exp();
        smooth += term;
        for (i, orig) in pairs.iter().enumerate() {
            z1[j * k + i] = inner(&p.a, &wa.matmul(&orig.a)) * term;
            c[j * k + i] = inner(&p.b, &orig.b.matmul(&wb)) * term;
        }
    }
    let z1 = ComplexMatrix::from_vec(k, k, z1);
    let c = ComplexMatrix::from_vec(k, k, c);
    let z2 = y.matmul(&c.transpose()).matmul(&y);
    let z = (&z1 - &z2).scale_real(1.0 / smooth);
    Some(Evaluation { exact, log_smooth: smooth.ln(), z })
}

fn to_params(x: &ComplexMatrix) -> Vec<f64> {
    let s = x.as_slice();
    s.iter().map(|z| z.re).chain(s.iter().map(|z| z.im)).collect()
}

fn from_params(k: usize, p: &[f64]) -> ComplexMatrix {
    let n = k * k;
    ComplexMatrix::from_fn(k, k, |i, j| C64::new(p[i * k + j], p[n + i * k + j]))
}

/// Real gradient of `Re tr(dX · Z)` in the `(Re X, Im X)` coordinates.
fn grad_params(z: &ComplexMatrix) -> Vec<f64> {
    let zs = z.adjoint();
    let s = zs.as_slice();
    s.iter().map(|v| v.re).chain(s.iter().map(|v| v.im)).collect()
}

/// Minimizes the exact objective over gauges with restarts; returns the best
/// exact value seen.
fn gauge_search<F>(k: usize, opts: &GaugeOptions, stages: &[f64], eval: F) -> f64
where
    F: Fn(&ComplexMatrix, f64) -> Option<Evaluation> + Sync,
{
    let restarts = opts.restarts.max(1);
    let lbfgs = LbfgsOptions { max_iters: opts.iterations, ..Default::default() };
    (0..restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = if r == 0 {
                ComplexMatrix::identity(k)
            } else {
                let mut rng = rng_for(opts.seed, r as u64);
                ginibre(k, k, &mut rng).scale_real(0.5).expm()
            };
            let mut best = eval(&x0, stages[0]).map_or(f64::INFINITY, |e| e.exact);
            let mut params = to_params(&x0);
            for &q in stages {
                let res = minimize(
                    |p| match eval(&from_params(k, p), q) {
                        Some(e) => {
                            best = best.min(e.exact);
                            (e.log_smooth, grad_params(&e.z))
                        }
                        None => (f64::INFINITY, vec![0.0; p.len()]),
                    },
                    params,
                    &lbfgs,
                );
                params = res.x;
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Upper bound for the Haagerup norm from the best gauge found.
pub fn haagerup_upper(w: &TensorElement, restarts: usize, seed: u64) -> f64 {
    haagerup_upper_with(w, &GaugeOptions { restarts, seed, ..Default::default() })
}

pub fn haagerup_upper_with(w: &TensorElement, opts: &GaugeOptions) -> f64 {
    let w = match opts.convention {
        HaagerupConvention::RowColumn => reduce_representation(w),
        HaagerupConvention::ColumnRow => reduce_representation(&w.adjoint_pairs()),
    };
    if w.is_empty() {
        return 0.0;
    }
    let pairs = w.pairs().to_vec();
    let k = pairs.len();
    let convex = if k <= MAX_CONVEX_LEN {
        haagerup_gauge(&pairs).and_then(|x| haagerup_eval(&pairs, &x, Q_STAGES[0])).map(|e| e.exact)
    } else {
        None
    };
    let local = if opts.restarts > 0 || convex.is_none() {
        gauge_search(k, opts, &Q_STAGES, |x, q| haagerup_eval(&pairs, x, q))
    } else {
        f64::INFINITY
    };
    local.min(convex.unwrap_or(f64::INFINITY))
}

/// Upper bound `Σⱼ ‖aⱼ‖‖bⱼ‖` for the projective norm, minimized over gauges.
pub fn projective_upper(w: &TensorElement, opts: &GaugeOptions) -> f64 {
    let w = reduce_representation(w);
    if w.is_empty() {
        return 0.0;
    }
    let pairs = w.pairs().to_vec();
    gauge_search(pairs.len(), opts, &Q_STAGES[..CROSS_SUM_STAGES], |x, q| cross_sum_eval(&pairs, x, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_for;

    fn fd_check(eval: impl Fn(&ComplexMatrix, f64) -> Option<Evaluation>, k: usize, seed: u64) {
        let mut rng = rng_for(seed, 99);
        let x = &ComplexMatrix::identity(k) + &ginibre(k, k, &mut rng).scale_real(0.3);
        let q = 6.0;
        let base = eval(&x, q).unwrap();
        let g = grad_params(&base.z);
        let p = to_params(&x);
        let h = 1e-6;
        for idx in 0..p.len() {
            let mut pp = p.clone();
            pp[idx] += h;
            let mut pm = p.clone();
            pm[idx] -= h;
            let fp = eval(&from_params(k, &pp), q).unwrap().log_smooth;
            let fm = eval(&from_params(k, &pm), q).unwrap().log_smooth;
            let fd = (fp - fm) / (2.0 * h);
            assert!((fd - g[idx]).abs() < 1e-5 * (1.0 + fd.abs()), "param {idx}: fd {fd} vs {}", g[idx]);
        }
    }

    #[test]
    fn haagerup_gradient_matches_finite_differences() {
        let w = reduce_representation(&TensorElement::random(3, 2, 3, &mut rng_for(5, 0)));
        let pairs = w.pairs().to_vec();
        fd_check(|x, q| haagerup_eval(&pairs, x, q), pairs.len(), 1);
    }

    #[test]
    fn cross_sum_gradient_matches_finite_differences() {
        let w = reduce_representation(&TensorElement::random(2, 3, 3, &mut rng_for(6, 0)));
        let pairs = w.pairs().to_vec();
        fd_check(|x, q| cross_sum_eval(&pairs, x, q), pairs.len(), 2);
    }
}
