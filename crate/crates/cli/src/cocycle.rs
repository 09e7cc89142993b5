use std::f64::consts::PI;

use oslab::hochschild::{
    alternating_part, c1_cocycle_density, c1_cocycle_pairing, c1_derivation_pairing, coboundary, derivation_space,
    is_alternating, is_two_derivation, polarization_check, pullback, symmetric_part, tensor_algebra, wedge, Bimodule,
    Cochain, CommutativeAlgebra, PlanePoly, TrigPoly, IDENTITY_TOL, POLARIZATION_TOL,
};
use oslab::matcore::{ComplexMatrix, C64};
use oslab::random::rng_for;

use crate::report::{inputs_hash, Row};
use crate::Settings;

pub const COCHAINS_PER_ALGEBRA: usize = 20;
pub const POLARIZATION_SAMPLES: usize = 200;
const TRIG_TOL: f64 = 1e-10;

pub fn random_algebras(s: &Settings) -> Vec<CommutativeAlgebra> {
    (0..s.count).map(|i| CommutativeAlgebra::random(s.dims.0, &mut rng_for(s.seed, i as u64))).collect()
}

fn scaled(tol: f64, t: &Cochain) -> f64 {
    tol * t.max_abs().max(1.0)
}

/// Complex identities and polarization on one algebra.
pub fn algebra_rows(i: usize, a: &CommutativeAlgebra, s: &Settings, suite: &str) -> Vec<Row> {
    let h = inputs_hash(a);
    let tol = s.tol.unwrap_or(IDENTITY_TOL);
    let mut rows = Vec::new();
    if matches!(suite, "all" | "complex") {
        let mut rng = rng_for(s.seed ^ 0xc0c4a1, i as u64);
        for j in 0..COCHAINS_PER_ALGEBRA {
            let x = if j % 2 == 0 { Bimodule::regular(a) } else { Bimodule::dual(a) };
            let t = Cochain::random(1, a.dim(), x.dim(), &mut rng);
            let dt = coboundary(&t, a, &x).expect("shapes match");
            let ddt = coboundary(&dt, a, &x).expect("shapes match");
            rows.push(Row::within("d2(d1 T) = 0", i, &h, ddt.max_abs(), scaled(tol, &dt)));
            let alt = alternating_part(&dt).expect("degree 2");
            rows.push(Row::within("alternating part of d1 T = 0", i, &h, alt.max_abs(), scaled(tol, &dt)));
            let split = alt.add(&symmetric_part(&dt).expect("degree 2")).expect("same shape");
            rows.push(Row::within("sym + alt = T", i, &h, split.max_abs_diff(&dt), scaled(tol, &dt)));
        }
    }
    if matches!(suite, "all" | "derivations") {
        for (label, x) in [("regular", Bimodule::regular(a)), ("dual", Bimodule::dual(a))] {
            for d in derivation_space(a, &x).expect("module over a") {
                let err = coboundary(&d, a, &x).expect("shapes match").max_abs();
                rows.push(Row::within(format!("derivation basis into {label} module is closed"), i, &h, err, tol));
            }
        }
    }
    if matches!(suite, "all" | "polarization") {
        let r = polarization_check(a, POLARIZATION_SAMPLES, s.seed.wrapping_add(i as u64));
        let ptol = s.tol.unwrap_or(POLARIZATION_TOL);
        rows.push(Row::within("ab = ((a+b)^2 - (a-b)^2)/4", i, &h, r.max_product_error, ptol));
        rows.push(Row::within("a^2 b^2 = quartic polarization", i, &h, r.max_quartic_error, ptol));
    }
    rows
}

/// Euler derivation `xᵏ ↦ k·xᵏ` on `ℂ[x]/(x^m)`.
pub fn euler(m: usize) -> Cochain {
    Cochain::from_fn(1, m, m, |t, p| if t[0] == p { C64::new(p as f64, 0.0) } else { C64::new(0.0, 0.0) })
}

fn wedge_rows(
    name: &str,
    i: usize,
    h: &str,
    pieces: (&Cochain, &CommutativeAlgebra, &Cochain, &CommutativeAlgebra),
    tol: f64,
) -> Vec<Row> {
    let (da, a, db, b) = pieces;
    let (x, y) = (Bimodule::regular(a), Bimodule::regular(b));
    match wedge(da, a, &x, db, b, &y) {
        Ok(out) => {
            let f = &out.cochain;
            let alt = is_alternating(f, IDENTITY_TOL).unwrap_or(false);
            let two = is_two_derivation(f, &out.algebra, &out.module).unwrap_or(false);
            let closed = coboundary(f, &out.algebra, &out.module).map(|c| c.max_abs()).unwrap_or(f64::INFINITY);
            vec![
                Row::holds(format!("{name}: wedge is alternating"), i, h, alt),
                Row::holds(format!("{name}: wedge is a 2-derivation"), i, h, two),
                Row::within(format!("{name}: wedge is closed"), i, h, closed, scaled(tol, f)),
            ]
        }
        Err(e) => vec![Row::holds(format!("{name}: wedge"), i, h, false).warn(Some(e.to_string()))],
    }
}

/// Wedge on consecutive algebras using the first derivation into the regular module.
pub fn wedge_pair_rows(i: usize, a: &CommutativeAlgebra, b: &CommutativeAlgebra, s: &Settings) -> Vec<Row> {
    let h = inputs_hash(&(a, b));
    let first = |alg: &CommutativeAlgebra| {
        derivation_space(alg, &Bimodule::regular(alg))
            .ok()
            .and_then(|v| v.into_iter().next())
            .unwrap_or_else(|| Cochain::zero(1, alg.dim(), alg.dim()))
    };
    wedge_rows("random pair", i, &h, (&first(a), a, &first(b), b), s.tol.unwrap_or(IDENTITY_TOL))
}

fn kron(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// Dual-number wedge, the nonvanishing identity, pullback and the
/// derivation-space dimensions of the standard small algebras.
pub fn structured_rows(s: &Settings, suite: &str) -> Vec<Row> {
    let tol = s.tol.unwrap_or(IDENTITY_TOL);
    let mut rows = Vec::new();
    let d = CommutativeAlgebra::dual_numbers();
    let one = C64::new(1.0, 0.0);
    if matches!(suite, "all" | "wedge") {
        let h = inputs_hash(&d);
        let e = euler(2);
        rows.extend(wedge_rows("dual numbers", 0, &h, (&e, &d, &e, &d), tol));
        let x = Bimodule::regular(&d);
        if let Ok(out) = wedge(&e, &d, &x, &e, &d, &x) {
            let f = out.cochain.value(&[2, 1]);
            let target = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), one];
            let err = f.iter().zip(&target).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            rows.push(Row::within("F(e x 1, 1 x e) = e x e", 0, &h, err, tol));
        }
        for (k, (m, n)) in [(3, 3), (4, 2), (5, 3), (2, 4)].into_iter().enumerate() {
            let (a, b) = (CommutativeAlgebra::truncated_polynomial(m), CommutativeAlgebra::truncated_polynomial(n));
            let h = inputs_hash(&(&a, &b));
            let (da, db) = (euler(m), euler(n));
            rows.extend(wedge_rows("truncated polynomials", k, &h, (&da, &a, &db, &b), tol));
            let Ok(out) = wedge(&da, &a, &Bimodule::regular(&a), &db, &b, &Bimodule::regular(&b)) else { continue };
            let mut rng = rng_for(s.seed ^ 0x3ed6e, k as u64);
            for _ in 0..s.count.max(1) {
                let u = a.random_element(&mut rng);
                let v = b.random_element(&mut rng);
                let u3 = a.power(&u, 3).expect("positive power");
                let lhs = out.cochain.evaluate(&[&kron(&u3, &v), &kron(&u, &v)]).expect("shapes");
                let d4 = da.evaluate(&[&a.power(&u, 4).expect("positive power")]).expect("shapes");
                let d2 = db.evaluate(&[&b.power(&v, 2).expect("positive power")]).expect("shapes");
                let rhs = kron(&d4, &d2);
                let err = lhs.iter().zip(&rhs).map(|(p, q)| (p - q * 0.25).norm()).fold(0.0, f64::max);
                rows.push(Row::within("F(a^3 x b, a x b) = D(a^4) x D(b^2) / 4", k, &h, err, tol));
            }
        }
    }
    if matches!(suite, "all" | "pullback") {
        let dual = Bimodule::dual(&d);
        let der = Cochain::new(1, 2, 2, vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), one, C64::new(0.0, 0.0)])
            .expect("shape");
        if let Ok(out) = wedge(&der, &d, &dual, &der, &d, &dual) {
            let cubic = CommutativeAlgebra::truncated_polynomial(3);
            let a = tensor_algebra(&cubic, &cubic);
            let theta = ComplexMatrix::from_fn(4, 9, |r, col| {
                let (i, j) = (col / 3, col % 3);
                if i < 2 && j < 2 && r == i * 2 + j {
                    one
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let h = inputs_hash(&a);
            match pullback(&out.cochain, &theta, &a, &out.algebra) {
                Ok(g) => {
                    rows.push(Row::le("pullback along a surjection is nonzero", 0, &h, 0.5, g.max_abs(), 0.0));
                    rows.push(Row::holds("pullback is alternating", 0, &h, is_alternating(&g, tol).unwrap_or(false)));
                }
                Err(e) => rows.push(Row::holds("pullback", 0, &h, false).warn(Some(e.to_string()))),
            }
        }
    }
    if matches!(suite, "all" | "derivations") {
        let cases: Vec<(String, CommutativeAlgebra, usize)> = (1..=5)
            .map(|n| (format!("C^{n}"), CommutativeAlgebra::pointwise(n), 0))
            .chain([("dual numbers".to_string(), d.clone(), 1)])
            .collect();
        for (k, (label, a, expected)) in cases.into_iter().enumerate() {
            let dim = derivation_space(&a, &Bimodule::regular(&a)).map(|v| v.len()).unwrap_or(usize::MAX);
            let err = (dim as f64 - expected as f64).abs();
            rows.push(Row::within(format!("dim Der({label}) = {expected}"), k, &inputs_hash(&a), err, 0.0));
        }
    }
    if matches!(suite, "all" | "polarization") {
        for n in 1..=5 {
            let a = CommutativeAlgebra::pointwise(n);
            let r = polarization_check(&a, 4 * n, s.seed);
            let h = inputs_hash(&a);
            let last = |v: &[usize]| v.last().copied().unwrap_or(0) as f64;
            rows.push(Row::le(format!("span of squares in C^{n} is full"), n, &h, n as f64, last(&r.square_span), 0.0));
            rows.push(Row::le(
                format!("span of fourth powers in C^{n} is full"),
                n,
                &h,
                n as f64,
                last(&r.fourth_power_span),
                0.0,
            ));
        }
    }
    rows
}

fn close_row(name: &str, i: usize, h: &str, x: C64, y: C64) -> Row {
    let scale = x.norm().max(y.norm()).max(1.0);
    Row::within(name, i, h, (x - y).norm(), TRIG_TOL * scale)
}

/// Leibniz, alternation and first-variable cocycle identities for the `C¹`
/// pairings on one random triple of trigonometric polynomials.
pub fn trig_rows(i: usize, s: &Settings) -> Vec<Row> {
    let mut rng = rng_for(s.seed ^ 0x7419, i as u64);
    let mut rows = Vec::new();
    let [f, g, h] = [0; 3].map(|_| TrigPoly::random(1, 3, 4, &mut rng).expect("one variable"));
    let hash = inputs_hash(&(&f, &g, &h));
    let lhs = c1_derivation_pairing(&g.mul(&h).expect("same vars"), &f).expect("circle");
    let rhs = c1_derivation_pairing(&g, &h.mul(&f).expect("same vars")).expect("circle")
        + c1_derivation_pairing(&h, &g.mul(&f).expect("same vars")).expect("circle");
    rows.push(close_row("D(gh)(f) = D(g)(hf) + D(h)(gf)", i, &hash, lhs, rhs));

    let [f, g, h, u] = [0; 4].map(|_| TrigPoly::random(2, 2, 4, &mut rng).expect("two variables"));
    let hash = inputs_hash(&(&f, &g, &h, &u));
    let pair = |a: &TrigPoly, b: &TrigPoly, c: &TrigPoly| c1_cocycle_pairing(a, b, c).expect("torus");
    rows.push(close_row("F(g, u)(f) = -F(u, g)(f)", i, &hash, pair(&g, &u, &f), -pair(&u, &g, &f)));
    let gh = g.mul(&h).expect("same vars");
    let rhs = pair(&g, &u, &h.mul(&f).expect("same vars")) + pair(&h, &u, &g.mul(&f).expect("same vars"));
    rows.push(close_row("F(gh, u)(f) = F(g, u)(hf) + F(h, u)(gf)", i, &hash, pair(&gh, &u, &f), rhs));
    rows
}

/// `F(zᵃwᵇ, zᶜwᵈ)` on the torus against `4π²·zw·F₀` on `ℂ[z, w]`.
pub fn monomial_rows() -> Vec<Row> {
    let zw = PlanePoly::monomial(1, 1, C64::new(4.0 * PI * PI, 0.0));
    let mut rows = Vec::new();
    let mut k = 0;
    for a in 0..3u32 {
        for b in 0..3u32 {
            for (c, d) in [(1u32, 0u32), (0, 1), (2, 1), (1, 2)] {
                let f1 = PlanePoly::monomial(a, b, C64::new(1.0, 0.0));
                let f2 = PlanePoly::monomial(c, d, C64::new(1.0, 0.0));
                let density = c1_cocycle_density(&f1.to_trig(), &f2.to_trig()).expect("torus");
                let plane = zw.mul(&PlanePoly::cocycle(&f1, &f2)).to_trig();
                let err = density.sub(&plane).expect("same vars").max_abs();
                let hash = inputs_hash(&[a, b, c, d]);
                rows.push(Row::within(
                    "torus cocycle = 4 pi^2 zw F0",
                    k,
                    &hash,
                    err,
                    TRIG_TOL * density.max_abs().max(1.0),
                ));
                k += 1;
            }
        }
    }
    rows
}
