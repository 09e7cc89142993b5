//! Limited-memory BFGS with Armijo backtracking.
//!
//! Used by the gauge searches, whose objectives are smooth surrogates of
//! nonsmooth norms. Callers treat the optimizer as a heuristic: they record
//! the exact objective at every evaluated point and keep the best one.

#[derive(Debug, Clone)]
pub struct LbfgsOptions {
    pub max_iters: usize,
    pub memory: usize,
    /// Stop when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Stop when the relative decrease stays below this for a few steps.
    pub rel_tol: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { max_iters: 200, memory: 8, grad_tol: 1e-10, rel_tol: 1e-13 }
    }
}

#[derive(Debug, Clone)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f`, which returns the value and gradient at a point. A
/// non-finite value is treated as outside the domain and triggers
/// backtracking.
pub fn minimize<F>(mut f: F, x0: Vec<f64>, opts: &LbfgsOptions) -> LbfgsResult
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0;
    let (mut fx, mut g) = f(&x);
    if !fx.is_finite() {
        return LbfgsResult { x, value: fx, iterations: 0, converged: false };
    }
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut stalls = 0;

    for iter in 0..opts.max_iters {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= opts.grad_tol {
            return LbfgsResult { x, value: fx, iterations: iter, converged: true };
        }

        // Two-loop recursion for the search direction.
        let mut q = g.clone();
        let m = s_hist.len();
        let mut alpha = vec![0.0; m];
        for i in (0..m).rev() {
            let rho = 1.0 / dot(&y_hist[i], &s_hist[i]);
            alpha[i] = rho * dot(&s_hist[i], &q);
            for (qk, yk) in q.iter_mut().zip(&y_hist[i]) {
                *qk -= alpha[i] * yk;
            }
        }
        let gamma = if m > 0 {
            dot(&s_hist[m - 1], &y_hist[m - 1]) / dot(&y_hist[m - 1], &y_hist[m - 1])
        } else {
            1.0 / gnorm.max(1e-300)
        };
        for qk in q.iter_mut() {
            *qk *= gamma;
        }
        for i in 0..m {
            let rho = 1.0 / dot(&y_hist[i], &s_hist[i]);
            let beta = rho * dot(&y_hist[i], &q);
            for (qk, sk) in q.iter_mut().zip(&s_hist[i]) {
                *qk += (alpha[i] - beta) * sk;
            }
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            // Not a descent direction; reset to steepest descent.
            s_hist.clear();
            y_hist.clear();
            dir = g.iter().map(|v| -v / gnorm).collect();
            slope = -gnorm;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = f(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            return LbfgsResult { x, value: fx, iterations: iter, converged: true };
        };

        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s, &y) > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            s_hist.push(s);
            y_hist.push(y);
            if s_hist.len() > opts.memory {
                s_hist.remove(0);
                y_hist.remove(0);
            }
        }

        let decrease = fx - fn_;
        if decrease <= opts.rel_tol * fx.abs().max(1e-300) {
            stalls += 1;
        } else {
            stalls = 0;
        }
        x = xn;
        fx = fn_;
        g = gn;
        if stalls >= 3 {
            return LbfgsResult { x, value: fx, iterations: iter + 1, converged: true };
        }
    }
    debug_assert_eq!(x.len(), n);
    LbfgsResult { x, value: fx, iterations: opts.max_iters, converged: false }
}
