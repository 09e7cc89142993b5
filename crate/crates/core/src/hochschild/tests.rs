use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::matcore::{ComplexMatrix, C64};
use crate::random::rng_for;

const TOL: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn close(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

fn vclose(x: &[C64], y: &[C64], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| close(*a, *b, tol))
}

/// `D(1) = 0`, `D(ε) = ε` on the dual numbers, into the regular module.
fn euler_on_dual_numbers() -> Cochain {
    Cochain::new(1, 2, 2, vec![c(0.0), c(0.0), c(0.0), c(1.0)]).unwrap()
}

/// Euler derivation `xᵏ ↦ k xᵏ` on `ℂ[x]/(x^m)` into itself.
fn euler(m: usize) -> Cochain {
    Cochain::from_fn(1, m, m, |t, p| if t[0] == p { c(p as f64) } else { c(0.0) })
}

fn kron_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// Coboundary evaluated through algebra and module operations on basis
/// elements, independent of the index bookkeeping in `coboundary`.
fn coboundary_oracle(t: &Cochain, a: &CommutativeAlgebra, x: &Bimodule) -> Cochain {
    let d = a.dim();
    let e = |i: usize| a.basis(i);
    match t.degree() {
        1 => Cochain::from_fn(2, d, x.dim(), |ij, p| {
            let (i, j) = (ij[0], ij[1]);
            let first = x.act_left(&e(i), &t.evaluate(&[&e(j)]).unwrap());
            let middle = t.evaluate(&[&a.mul(&e(i), &e(j))]).unwrap();
            let last = x.act_right(&t.evaluate(&[&e(i)]).unwrap(), &e(j));
            first[p] - middle[p] + last[p]
        }),
        2 => Cochain::from_fn(3, d, x.dim(), |ijk, p| {
            let (i, j, k) = (ijk[0], ijk[1], ijk[2]);
            let first = x.act_left(&e(i), &t.evaluate(&[&e(j), &e(k)]).unwrap());
            let second = t.evaluate(&[&a.mul(&e(i), &e(j)), &e(k)]).unwrap();
            let third = t.evaluate(&[&e(i), &a.mul(&e(j), &e(k))]).unwrap();
            let last = x.act_right(&t.evaluate(&[&e(i), &e(j)]).unwrap(), &e(k));
            first[p] - second[p] + third[p] - last[p]
        }),
        _ => unreachable!(),
    }
}

#[test]
fn algebra_json_round_trip_and_validation() {
    let a = CommutativeAlgebra::truncated_polynomial(3);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"unit\":0"));
    let back: CommutativeAlgebra = serde_json::from_str(&json).unwrap();
    assert_eq!(a, back);

    let s = r#"{"dim":2,"structure":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[0,0],[0,0]],[[0,0],[0,0]]]],"unit":null}"#;
    let err = serde_json::from_str::<CommutativeAlgebra>(s).unwrap_err().to_string();
    assert!(err.contains("not commutative"), "{err}");
    let bad_unit = r#"{"dim":1,"structure":[[[[2,0]]]],"unit":0}"#;
    assert!(serde_json::from_str::<CommutativeAlgebra>(bad_unit).is_err());
    // e0e0 = e1, e0e1 = e1e0 = e0, e1e1 = 0: (e0e0)e1 = 0 but e0(e0e1) = e1.
    let mut s = vec![c(0.0); 8];
    s[1] = c(1.0);
    s[2] = c(1.0);
    s[4] = c(1.0);
    let err = CommutativeAlgebra::new(2, s, None).unwrap_err().to_string();
    assert!(err.contains("associative"), "{err}");
}

#[test]
fn cochain_json_round_trip_and_shape_checks() {
    let mut rng = rng_for(3, 0);
    for degree in 0..=3 {
        let t = Cochain::random(degree, 3, 2, &mut rng);
        let json = serde_json::to_string(&t).unwrap();
        let back: Cochain = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
    }
    let bad = r#"{"degree":1,"algebraDim":2,"moduleDim":1,"coefficients":[[[1,0]]]}"#;
    assert!(serde_json::from_str::<Cochain>(bad).is_err());
    assert!(Cochain::new(4, 1, 1, vec![c(0.0)]).is_err());
    assert!(Cochain::new(1, 2, 2, vec![c(0.0); 3]).is_err());
}

#[test]
fn trig_json_round_trip() {
    let json = r#"{"vars":2,"terms":[{"freq":[1,-2],"coef":[0.5,1]},{"freq":[0,0],"coef":[1,0]}]}"#;
    let p: TrigPoly = serde_json::from_str(json).unwrap();
    assert_eq!(p.coefficient((1, -2)), C64::new(0.5, 1.0));
    let back: TrigPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(p, back);
    assert!(serde_json::from_str::<TrigPoly>(r#"{"vars":1,"terms":[{"freq":[1,2],"coef":[1,0]}]}"#).is_err());
    assert!(serde_json::from_str::<TrigPoly>(r#"{"vars":3,"terms":[]}"#).is_err());
}

#[test]
fn dual_number_derivation_is_a_cocycle() {
    let a = CommutativeAlgebra::dual_numbers();
    let x = Bimodule::regular(&a);
    let d = euler_on_dual_numbers();
    assert!(coboundary(&d, &a, &x).unwrap().max_abs() <= TOL);
    assert!(x.is_symmetric());
    // D(ε) = 1 is not a derivation: D(ε²) = 0 but 2εD(ε) = 2ε.
    let bad = Cochain::new(1, 2, 2, vec![c(0.0), c(0.0), c(1.0), c(0.0)]).unwrap();
    let db = coboundary(&bad, &a, &x).unwrap();
    assert!(vclose(db.value(&[1, 1]), &[c(0.0), c(2.0)], TOL));
}

#[test]
fn coboundary_degrees() {
    let a = CommutativeAlgebra::dual_numbers();
    let x = Bimodule::regular(&a);
    let pt = Cochain::new(0, 2, 2, vec![c(1.0), c(2.0)]).unwrap();
    assert!(coboundary(&pt, &a, &x).unwrap().max_abs() <= TOL);
    let three = Cochain::zero(3, 2, 2);
    assert!(matches!(coboundary(&three, &a, &x), Err(crate::Error::InvalidInput(_))));
    let wrong = Cochain::zero(1, 3, 2);
    assert!(coboundary(&wrong, &a, &x).is_err());
}

#[test]
fn coboundary_matches_operational_oracle() {
    let mut rng = rng_for(11, 0);
    for n in 0..5 {
        let a = CommutativeAlgebra::random(4, &mut rng);
        let x = if n % 2 == 0 { Bimodule::regular(&a) } else { Bimodule::dual(&a) };
        for degree in 1..=2 {
            let t = Cochain::random(degree, a.dim(), x.dim(), &mut rng);
            let fast = coboundary(&t, &a, &x).unwrap();
            let slow = coboundary_oracle(&t, &a, &x);
            assert!(fast.max_abs_diff(&slow) <= 1e-10 * slow.max_abs().max(1.0));
        }
    }
}

#[test]
fn decomposition_of_derivation_times_element() {
    let a = CommutativeAlgebra::dual_numbers();
    let x = Bimodule::regular(&a);
    let d = euler_on_dual_numbers();
    // T(a, b) = D(a)·b: T(ε, 1) = ε and every other basis pair gives 0.
    let t = Cochain::from_fn(2, 2, 2, |ij, p| x.act_right(d.value(&[ij[0]]), &a.basis(ij[1]))[p]);
    assert!(vclose(t.value(&[1, 0]), &[c(0.0), c(1.0)], TOL));
    let alt = alternating_part(&t).unwrap();
    let sym = symmetric_part(&t).unwrap();
    assert!(vclose(alt.value(&[1, 0]), &[c(0.0), c(0.5)], TOL));
    assert!(vclose(alt.value(&[0, 1]), &[c(0.0), c(-0.5)], TOL));
    assert!(vclose(sym.value(&[1, 0]), &[c(0.0), c(0.5)], TOL));
    assert!(vclose(sym.value(&[0, 1]), &[c(0.0), c(0.5)], TOL));
    assert!(alt.value(&[1, 1]).iter().chain(sym.value(&[0, 0])).all(|z| z.norm() <= TOL));
    assert!(alternating_part(&d).is_err());
    assert!(symmetric_part(&sym).unwrap().max_abs_diff(&sym) <= TOL);
    assert!(alternating_part(&sym).unwrap().max_abs() <= TOL);
    assert!(symmetric_part(&alt).unwrap().max_abs() <= TOL);
}

#[test]
fn derivative_of_product_is_not_a_two_derivation() {
    let a = CommutativeAlgebra::dual_numbers();
    let x = Bimodule::regular(&a);
    let d = euler_on_dual_numbers();
    let t = Cochain::from_fn(2, 2, 2, |ij, p| d.evaluate(&[&a.basis_product(ij[0], ij[1])]).unwrap()[p]);
    assert!(is_symmetric(&t, TOL).unwrap());
    // T(1·1, ε) = ε while 1·T(1, ε) + T(1, ε)·1 = 2ε.
    assert!(!is_two_derivation(&t, &a, &x).unwrap());
    assert!(is_two_derivation(&Cochain::zero(2, 2, 2), &a, &x).unwrap());
    let mut rng = rng_for(5, 0);
    let generic = Cochain::random(2, 2, 2, &mut rng);
    assert!(matches!(is_two_derivation(&generic, &a, &x), Err(crate::Error::InvalidInput(_))));
}

#[test]
fn derivation_space_dimensions() {
    let dual = CommutativeAlgebra::dual_numbers();
    let basis = derivation_space(&dual, &Bimodule::regular(&dual)).unwrap();
    assert_eq!(basis.len(), 1);
    let v = &basis[0];
    assert!(v.value(&[0]).iter().all(|z| z.norm() <= 1e-12));
    assert!(v.value(&[1])[0].norm() <= 1e-12 && v.value(&[1])[1].norm() > 0.5);
    // Into the dual module the only derivation is D(ε) = 1*.
    let basis = derivation_space(&dual, &Bimodule::dual(&dual)).unwrap();
    assert_eq!(basis.len(), 1);
    assert!(basis[0].value(&[1])[1].norm() <= 1e-12 && basis[0].value(&[1])[0].norm() > 0.5);

    // ℂ[x]/(x³) into itself: D(x) ∈ span{x, x²}.
    let cubic = CommutativeAlgebra::truncated_polynomial(3);
    assert_eq!(derivation_space(&cubic, &Bimodule::regular(&cubic)).unwrap().len(), 2);

    for n in 1..=5 {
        let a = CommutativeAlgebra::pointwise(n);
        assert_eq!(derivation_space(&a, &Bimodule::regular(&a)).unwrap().len(), 0);
        assert_eq!(derivation_space(&a, &Bimodule::dual(&a)).unwrap().len(), 0);
    }
    let scalars = CommutativeAlgebra::scalars();
    assert_eq!(derivation_space(&scalars, &Bimodule::regular(&scalars)).unwrap().len(), 0);

    let mut rng = rng_for(8, 0);
    let s = crate::random::haar_isometry(2, 2, &mut rng);
    let moved = dual.change_basis(&s).unwrap();
    assert_eq!(derivation_space(&moved, &Bimodule::regular(&moved)).unwrap().len(), 1);
    let moved = CommutativeAlgebra::pointwise(3).change_basis(&crate::random::haar_isometry(3, 3, &mut rng)).unwrap();
    assert_eq!(derivation_space(&moved, &Bimodule::dual(&moved)).unwrap().len(), 0);

    for v in derivation_space(&cubic, &Bimodule::dual(&cubic)).unwrap() {
        assert!(coboundary(&v, &cubic, &Bimodule::dual(&cubic)).unwrap().max_abs() <= 1e-10);
    }
}

#[test]
fn tensor_products() {
    let a = CommutativeAlgebra::truncated_polynomial(3);
    let ca = tensor_algebra(&CommutativeAlgebra::scalars(), &a);
    assert_eq!(ca.structure(), a.structure());
    assert_eq!(ca.unit(), Some(0));

    let d = CommutativeAlgebra::dual_numbers();
    let dd = tensor_algebra(&d, &d);
    assert_eq!(dd.dim(), 4);
    // basis 1⊗1, 1⊗ε, ε⊗1, ε⊗ε
    let (e1, e2) = (dd.basis(2), dd.basis(1));
    assert!(vclose(&dd.mul(&e1, &e2), &dd.basis(3), TOL));
    assert!(dd.mul(&e1, &e1).iter().all(|z| z.norm() <= TOL));
    assert!(dd.mul(&e2, &e2).iter().all(|z| z.norm() <= TOL));
    assert!(CommutativeAlgebra::new(4, dd.structure().to_vec(), dd.unit()).is_ok());

    let xy = tensor_bimodule(&Bimodule::dual(&d), &d, &Bimodule::dual(&d), &d).unwrap();
    assert!(xy.is_symmetric());
    assert!(xy.same_actions(&Bimodule::dual(&dd), TOL));
    let reg = tensor_bimodule(&Bimodule::regular(&d), &d, &Bimodule::regular(&d), &d).unwrap();
    assert!(reg.same_actions(&Bimodule::regular(&dd), TOL));
    assert!(tensor_bimodule(&Bimodule::regular(&d), &a, &Bimodule::regular(&d), &d).is_err());
}

#[test]
fn wedge_on_dual_numbers() {
    let d = CommutativeAlgebra::dual_numbers();
    let x = Bimodule::regular(&d);
    let der = euler_on_dual_numbers();
    let out = wedge(&der, &d, &x, &der, &d, &x).unwrap();
    // F(ε⊗1, 1⊗ε) = [D(ε)·1]⊗[1·D(ε)] − [ε·D(1)]⊗[D(1)·ε] = ε⊗ε.
    let f = out.cochain.value(&[2, 1]);
    assert!(vclose(f, &[c(0.0), c(0.0), c(0.0), c(1.0)], TOL));
    assert!(is_alternating(&out.cochain, TOL).unwrap());
    assert!(is_two_derivation(&out.cochain, &out.algebra, &out.module).unwrap());

    let zero = Cochain::zero(1, 2, 2);
    assert_eq!(wedge(&zero, &d, &x, &der, &d, &x).unwrap().cochain.max_abs(), 0.0);

    let bad = Cochain::new(1, 2, 2, vec![c(0.0), c(0.0), c(1.0), c(0.0)]).unwrap();
    assert!(matches!(wedge(&bad, &d, &x, &der, &d, &x), Err(crate::Error::InvalidInput(_))));
}

#[test]
fn wedge_nonvanishing_identity() {
    let mut rng = rng_for(21, 0);
    for (m, n) in [(3, 3), (4, 2), (5, 3), (2, 4)] {
        let (a, b) = (CommutativeAlgebra::truncated_polynomial(m), CommutativeAlgebra::truncated_polynomial(n));
        let (x, y) = (Bimodule::regular(&a), Bimodule::regular(&b));
        let (da, db) = (euler(m), euler(n));
        let out = wedge(&da, &a, &x, &db, &b, &y).unwrap();
        for _ in 0..5 {
            let u = a.random_element(&mut rng);
            let v = b.random_element(&mut rng);
            let u3 = a.power(&u, 3).unwrap();
            let lhs = out.cochain.evaluate(&[&kron_vec(&u3, &v), &kron_vec(&u, &v)]).unwrap();
            let d4 = da.evaluate(&[&a.power(&u, 4).unwrap()]).unwrap();
            let d2 = db.evaluate(&[&b.power(&v, 2).unwrap()]).unwrap();
            let rhs: Vec<C64> = kron_vec(&d4, &d2).iter().map(|z| z * 0.25).collect();
            assert!(lhs.iter().zip(&rhs).all(|(p, q)| (p - q).norm() <= 1e-10), "{m} {n}");
            assert!(rhs.iter().any(|z| z.norm() > 1e-6));
        }
    }
}

/// Alternating 2-cocycle on `D⊗D` with values in `(D⊗D)*`, from the
/// derivation `ε ↦ 1*` on each factor.
fn dual_square_cocycle() -> (CommutativeAlgebra, Cochain) {
    let d = CommutativeAlgebra::dual_numbers();
    let dual = Bimodule::dual(&d);
    let der = Cochain::new(1, 2, 2, vec![c(0.0), c(0.0), c(1.0), c(0.0)]).unwrap();
    let out = wedge(&der, &d, &dual, &der, &d, &dual).unwrap();
    (out.algebra, out.cochain)
}

#[test]
fn pullback_examples() {
    let (b, f) = dual_square_cocycle();
    assert!(f.max_abs() > 0.5);
    let id = ComplexMatrix::identity(4);
    assert!(pullback(&f, &id, &b, &b).unwrap().max_abs_diff(&f) <= TOL);
    let zero = ComplexMatrix::zeros(4, 4);
    assert_eq!(pullback(&f, &zero, &b, &b).unwrap().max_abs(), 0.0);
    assert!(matches!(pullback(&f, &id.scale_real(2.0), &b, &b), Err(crate::Error::InvalidInput(_))));

    // ℂ[x]/(x³) ⊗ ℂ[y]/(y³) → D⊗D, x ↦ ε₁, y ↦ ε₂.
    let cubic = CommutativeAlgebra::truncated_polynomial(3);
    let a = tensor_algebra(&cubic, &cubic);
    let theta = ComplexMatrix::from_fn(4, 9, |r, col| {
        let (i, j) = (col / 3, col % 3);
        if i < 2 && j < 2 && r == i * 2 + j {
            c(1.0)
        } else {
            c(0.0)
        }
    });
    let g = pullback(&f, &theta, &a, &b).unwrap();
    assert!(g.max_abs() > 0.5);
    assert!(is_alternating(&g, TOL).unwrap());
    assert!(coboundary(&g, &a, &Bimodule::dual(&a)).unwrap().max_abs() <= TOL);
    // θ*F(x, y)(1) = F(ε₁, ε₂)(1⊗1).
    assert!(close(g.value(&[3, 1])[0], f.value(&[2, 1])[0], TOL));
}

#[test]
fn polarization_examples() {
    let s = CommutativeAlgebra::scalars();
    let (x, y) = ([c(2.0)], [c(3.0)]);
    let sum = [c(5.0)];
    let diff = [c(-1.0)];
    let pol = (s.mul(&sum, &sum)[0] - s.mul(&diff, &diff)[0]) * 0.25;
    assert_eq!(s.mul(&x, &y)[0], pol);
    assert_eq!(pol, c(6.0));

    let i = C64::new(0.0, 1.0);
    let (x, y) = (c(1.0), i);
    let p4 = |z: C64| z * z * z * z;
    let rhs = (p4(x + y) + p4(x - y) - p4(x + i * y) - p4(x - i * y)) / 24.0;
    assert!(close(x * x * y * y, c(-1.0), 1e-15));
    assert!(close(rhs, c(-1.0), 1e-15));
    assert!(close(p4(x + y), c(-4.0), 1e-15) && close(p4(x - i * y), c(16.0), 1e-15));

    let three = CommutativeAlgebra::pointwise(3);
    let r = polarization_check(&three, 6, 1);
    assert!(r.passed);
    assert_eq!(*r.square_span.last().unwrap(), 3);
    assert_eq!(*r.fourth_power_span.last().unwrap(), 3);
    assert_eq!(r.square_span, vec![1, 2, 3, 3, 3, 3]);
    assert_eq!(r.square_span_stable_from, Some(3));

    let mut rng = rng_for(4, 0);
    for n in 0..5 {
        let a = CommutativeAlgebra::random(5, &mut rng);
        let r = polarization_check(&a, 12, n);
        assert!(r.passed, "{r:?}");
        assert!(r.square_span.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn trig_calculus() {
    let e = TrigPoly::monomial(&[1], c(1.0)).unwrap();
    let de = trig_deriv(&e, 0).unwrap();
    assert_eq!(de.coefficient((1, 0)), C64::new(0.0, 2.0 * PI));
    assert_eq!(trig_integral(&e), c(0.0));
    assert_eq!(trig_integral(&TrigPoly::constant(1, c(1.0)).unwrap()), c(1.0));
    assert!(trig_deriv(&e, 1).is_err());

    let one = TrigPoly::constant(1, c(1.0)).unwrap();
    assert_eq!(c1_derivation_pairing(&one, &one).unwrap(), c(0.0));
    let back = TrigPoly::monomial(&[-1], c(1.0)).unwrap();
    assert!(close(c1_derivation_pairing(&e, &back).unwrap(), C64::new(0.0, 2.0 * PI), 1e-15));
    assert!(c1_derivation_pairing(&e, &TrigPoly::constant(2, c(1.0)).unwrap()).is_err());
}

#[test]
fn trig_integral_of_product_matches_quadrature() {
    let mut rng = rng_for(9, 0);
    for vars in 1..=2 {
        for _ in 0..5 {
            let f = TrigPoly::random(vars, 3, 5, &mut rng).unwrap();
            let g = TrigPoly::random(vars, 3, 5, &mut rng).unwrap();
            let conv: C64 = f.terms().map(|((k, l), a)| a * g.coefficient((-k, -l))).sum();
            let exact = trig_integral(&f.mul(&g).unwrap());
            assert!(close(exact, conv, 1e-14));
            // Uniform grid with 16 points per axis integrates frequencies below 16 exactly.
            let n = 16;
            let mut quad = c(0.0);
            let pts: Vec<Vec<f64>> = if vars == 1 {
                (0..n).map(|i| vec![i as f64 / n as f64]).collect()
            } else {
                (0..n * n).map(|i| vec![(i / n) as f64 / n as f64, (i % n) as f64 / n as f64]).collect()
            };
            for p in &pts {
                quad += f.evaluate(p).unwrap() * g.evaluate(p).unwrap();
            }
            quad /= pts.len() as f64;
            assert!(close(exact, quad, 1e-12));
        }
    }
}

#[test]
fn c1_identities_on_random_polynomials() {
    let mut rng = rng_for(13, 0);
    for _ in 0..10 {
        let [f, g, h] = [0; 3].map(|_| TrigPoly::random(1, 3, 4, &mut rng).unwrap());
        let lhs = c1_derivation_pairing(&g.mul(&h).unwrap(), &f).unwrap();
        let rhs = c1_derivation_pairing(&g, &h.mul(&f).unwrap()).unwrap()
            + c1_derivation_pairing(&h, &g.mul(&f).unwrap()).unwrap();
        assert!(close(lhs, rhs, 1e-10));

        let [f, g, h, u] = [0; 4].map(|_| TrigPoly::random(2, 2, 4, &mut rng).unwrap());
        let fg = c1_cocycle_pairing(&g, &u, &f).unwrap();
        assert!(close(fg, -c1_cocycle_pairing(&u, &g, &f).unwrap(), 1e-10));
        let lhs = c1_cocycle_pairing(&g.mul(&h).unwrap(), &u, &f).unwrap();
        let rhs = c1_cocycle_pairing(&g, &u, &h.mul(&f).unwrap()).unwrap()
            + c1_cocycle_pairing(&h, &u, &g.mul(&f).unwrap()).unwrap();
        assert!(close(lhs, rhs, 1e-10));
    }
}

#[test]
fn torus_cocycle_restricts_plane_cocycle() {
    // On monomials: density of F(zᵃwᵇ, zᶜwᵈ) is (2πi)²(ad − bc) z^{a+c} w^{b+d}, and the
    // plane cocycle is (bc − ad) z^{a+c−1} w^{b+d−1}, so density = 4π²·zw·F₀.
    let zw = PlanePoly::monomial(1, 1, c(4.0 * PI * PI));
    for (a, b, cc, d) in [(1, 0, 0, 1), (2, 1, 1, 3), (0, 2, 3, 0), (1, 1, 1, 1), (3, 0, 2, 0)] {
        let f1 = PlanePoly::monomial(a, b, c(1.0));
        let f2 = PlanePoly::monomial(cc, d, c(1.0));
        let density = c1_cocycle_density(&f1.to_trig(), &f2.to_trig()).unwrap();
        let plane = zw.mul(&PlanePoly::cocycle(&f1, &f2)).to_trig();
        let diff = density.sub(&plane).unwrap();
        assert!(diff.max_abs() <= 1e-12 * density.max_abs().max(1.0), "{a}{b}{cc}{d}");
        let expected = -4.0 * PI * PI * (a as f64 * d as f64 - b as f64 * cc as f64);
        assert!(close(density.coefficient(((a + cc) as i64, (b + d) as i64)), c(expected), 1e-14));
    }
    // F₀(z, w) = −1.
    let f0 = PlanePoly::cocycle(&PlanePoly::monomial(1, 0, c(1.0)), &PlanePoly::monomial(0, 1, c(1.0)));
    assert_eq!(f0, PlanePoly::monomial(0, 0, c(-1.0)));
}

fn small_algebra() -> impl Strategy<Value = CommutativeAlgebra> {
    any::<u64>().prop_map(|s| CommutativeAlgebra::random(4, &mut rng_for(s, 0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complex_property(a in small_algebra(), seed in any::<u64>(), dual in any::<bool>()) {
        let x = if dual { Bimodule::dual(&a) } else { Bimodule::regular(&a) };
        let t = Cochain::random(1, a.dim(), x.dim(), &mut rng_for(seed, 1));
        let dt = coboundary(&t, &a, &x).unwrap();
        prop_assert!(coboundary(&dt, &a, &x).unwrap().max_abs() <= 1e-10 * dt.max_abs().max(1.0));
        prop_assert!(alternating_part(&dt).unwrap().max_abs() <= 1e-10 * dt.max_abs().max(1.0));
    }

    #[test]
    fn splitting_is_exact(seed in any::<u64>(), d in 1usize..4, m in 1usize..4) {
        let t = Cochain::random(2, d, m, &mut rng_for(seed, 0));
        let alt = alternating_part(&t).unwrap();
        let sym = symmetric_part(&t).unwrap();
        prop_assert!(alt.add(&sym).unwrap().max_abs_diff(&t) <= 1e-12);
        prop_assert!(alternating_part(&alt).unwrap().max_abs_diff(&alt) <= 1e-12);
        prop_assert!(symmetric_part(&sym).unwrap().max_abs_diff(&sym) <= 1e-12);
        prop_assert!(is_alternating(&alt, 1e-12).unwrap() && is_symmetric(&sym, 1e-12).unwrap());
    }

    #[test]
    fn wedge_outputs_are_two_derivations(a in small_algebra(), b in small_algebra(), dual in any::<bool>()) {
        let (x, y) = if dual {
            (Bimodule::dual(&a), Bimodule::dual(&b))
        } else {
            (Bimodule::regular(&a), Bimodule::regular(&b))
        };
        let da = derivation_space(&a, &x).unwrap();
        let db = derivation_space(&b, &y).unwrap();
        let fa = da.first().cloned().unwrap_or_else(|| Cochain::zero(1, a.dim(), x.dim()));
        let fb = db.first().cloned().unwrap_or_else(|| Cochain::zero(1, b.dim(), y.dim()));
        let out = wedge(&fa, &a, &x, &fb, &b, &y).unwrap();
        prop_assert!(is_alternating(&out.cochain, 1e-10).unwrap());
        prop_assert!(is_two_derivation(&out.cochain, &out.algebra, &out.module).unwrap());
        prop_assert!(coboundary(&out.cochain, &out.algebra, &out.module).unwrap().max_abs() <= 1e-10);
    }
}
