use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::random::rng_for;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn element_order(g: &FiniteGroup, s: usize) -> usize {
    let mut x = s;
    let mut k = 1;
    while x != g.identity() {
        x = g.mul(x, s);
        k += 1;
    }
    k
}

/// `Σ_χ |f̂(χ)|` over the characters `(a, b) ↦ e^{2πi(ja/m + kb/n)}` of
/// `ℤ/m × ℤ/n`, with `f̂(χ) = (1/mn)Σ f·χ̄`, so that `‖δ_e‖ = 1`.
fn dft_l1(values: &[C64], m: usize, n: usize) -> f64 {
    let mut total = 0.0;
    for j in 0..m {
        for k in 0..n {
            let mut coef = c(0.0);
            for a in 0..m {
                for b in 0..n {
                    let phase = 2.0 * PI * (j as f64 * a as f64 / m as f64 + k as f64 * b as f64 / n as f64);
                    coef += values[a * n + b] * C64::from_polar(1.0, -phase);
                }
            }
            total += (coef / (m * n) as f64).norm();
        }
    }
    total
}

fn s3_rotations(g: &FiniteGroup) -> Subgroup {
    Subgroup::new(g, &[0, 3, 4]).unwrap()
}

#[test]
fn built_in_groups() {
    let cases = [
        (FiniteGroup::cyclic(5), 5, true),
        (FiniteGroup::dihedral(4), 8, false),
        (FiniteGroup::symmetric(3), 6, false),
        (FiniteGroup::symmetric(4), 24, false),
        (FiniteGroup::quaternion(), 8, false),
        (FiniteGroup::product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(4)), 12, true),
    ];
    for (g, order, abelian) in cases {
        assert_eq!(g.order(), order, "{}", g.name());
        assert_eq!(g.is_abelian(), abelian, "{}", g.name());
        assert_eq!(FiniteGroup::by_name(g.name()).unwrap(), g);
    }
    let involutions = |g: &FiniteGroup| (0..g.order()).filter(|&s| element_order(g, s) == 2).count();
    assert_eq!(involutions(&FiniteGroup::quaternion()), 1);
    assert_eq!(involutions(&FiniteGroup::dihedral(4)), 5);
    assert_eq!(involutions(&FiniteGroup::symmetric(3)), 3);
    assert_eq!(involutions(&FiniteGroup::symmetric(4)), 9);
    assert!(FiniteGroup::by_name("G7").is_err());
}

#[test]
fn group_json_and_validation() {
    let g = FiniteGroup::symmetric(3);
    let json = serde_json::to_string(&g).unwrap();
    let back: FiniteGroup = serde_json::from_str(&json).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.name(), "S3");
    let not_latin = r#"{"order":2,"table":[[0,1],[0,1]],"name":"bad"}"#;
    assert!(serde_json::from_str::<FiniteGroup>(not_latin).is_err());
    // Latin square without associativity: a loop of order 5.
    let table =
        [vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
    let err = FiniteGroup::from_table("loop", table.concat()).unwrap_err().to_string();
    assert!(err.contains("associative"), "{err}");
    assert!(FiniteGroup::from_table("ragged", vec![0, 1, 1]).is_err());
}

#[test]
fn function_json() {
    let g = FiniteGroup::cyclic(3);
    let f = AGFunction::new(&g, vec![c(1.0), C64::new(0.0, 2.0), c(-1.0)]).unwrap();
    let json = serde_json::to_string(&f).unwrap();
    assert!(json.contains("\"group\":\"Z/3\""));
    assert_eq!(serde_json::from_str::<AGFunction>(&json).unwrap(), f);
    let inline = r#"{"group":{"order":2,"table":[[0,1],[1,0]],"name":"custom"},"values":[[1,0],[3,0]]}"#;
    let f: AGFunction = serde_json::from_str(inline).unwrap();
    assert!((ag_norm(&f).unwrap() - 3.0).abs() < 1e-12);
    let json = serde_json::to_string(&f).unwrap();
    assert!(json.contains("\"table\""));
    assert!(serde_json::from_str::<AGFunction>(r#"{"group":"Z/2","values":[[1,0]]}"#).is_err());
}

#[test]
fn regular_representation() {
    let g = FiniteGroup::cyclic(3);
    assert_eq!(regular_rep(&g, 0).unwrap(), ComplexMatrix::identity(3));
    let shift = regular_rep(&g, 1).unwrap();
    let expected = ComplexMatrix::from_real(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
    assert_eq!(shift, expected);
    assert!(regular_rep(&g, 3).is_err());

    let s3 = FiniteGroup::symmetric(3);
    for s in 0..6 {
        for t in 0..6 {
            let lhs = regular_rep(&s3, s).unwrap().matmul(&regular_rep(&s3, t).unwrap());
            assert_eq!(lhs, regular_rep(&s3, s3.mul(s, t)).unwrap());
        }
        assert_eq!(regular_rep(&s3, s).unwrap().transpose(), regular_rep(&s3, s3.inv(s)).unwrap());
    }
}

#[test]
fn coefficient_functions() {
    let g = FiniteGroup::symmetric(3);
    let e = AGFunction::delta(&g, g.identity()).unwrap();
    let de = e.values().to_vec();
    assert_eq!(psi_coefficient(&g, &de, &de).unwrap(), e);
    let flat = vec![c(1.0 / 6f64.sqrt()); 6];
    let ones = psi_coefficient(&g, &flat, &flat).unwrap();
    assert!(ones.values().iter().all(|z| (z - c(1.0)).norm() < 1e-14));
    assert!(psi_coefficient(&g, &de[..3], &de).is_err());

    let mut rng = rng_for(1, 0);
    for _ in 0..100 {
        let xi = complex_gaussian_vec(6, &mut rng);
        let eta = complex_gaussian_vec(6, &mut rng);
        let bound =
            xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() * eta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(ag_norm(&psi_coefficient(&g, &xi, &eta).unwrap()).unwrap() <= bound + 1e-9);
    }
}

#[test]
fn von_neumann_norms() {
    let g = FiniteGroup::dihedral(4);
    for s in 0..8 {
        let mut cs = vec![c(0.0); 8];
        cs[s] = c(1.0);
        assert!((vn_norm(&VNElement::new(&g, cs).unwrap()) - 1.0).abs() < 1e-14);
    }
    let z2 = FiniteGroup::cyclic(2);
    assert!((vn_norm(&VNElement::new(&z2, vec![c(1.0), c(1.0)]).unwrap()) - 2.0).abs() < 1e-14);

    let mut rng = rng_for(2, 0);
    for _ in 0..20 {
        let s = VNElement::random(&g, &mut rng);
        let t = VNElement::random(&g, &mut rng);
        let sum: Vec<C64> = s.coefficients().iter().zip(t.coefficients()).map(|(a, b)| a + b).collect();
        assert!(vn_norm(&VNElement::new(&g, sum).unwrap()) <= vn_norm(&s) + vn_norm(&t) + 1e-12);
    }
    assert!(VNElement::from_matrix(&g, &ComplexMatrix::unit(8, 8, 0, 1)).is_err());
}

#[test]
fn fourier_norm_examples() {
    for g in [FiniteGroup::cyclic(7), FiniteGroup::symmetric(3), FiniteGroup::quaternion(), FiniteGroup::symmetric(4)] {
        let e = AGFunction::delta(&g, g.identity()).unwrap();
        assert!((ag_norm(&e).unwrap() - 1.0).abs() <= 1e-10);
        assert!((ag_norm(&AGFunction::ones(&g)).unwrap() - 1.0).abs() <= 1e-10);
        let oracle = ag_norm_dual_oracle(&e, DEFAULT_ORACLE_ITERATIONS);
        assert!(oracle.converged && (oracle.value - 1.0).abs() <= 1e-6);
    }
    let z2 = FiniteGroup::cyclic(2);
    let f = AGFunction::new(&z2, vec![c(1.0), c(3.0)]).unwrap();
    assert!((ag_norm(&f).unwrap() - 3.0).abs() < 1e-12);
    assert!((dft_l1(f.values(), 1, 2) - 3.0).abs() < 1e-12);
    assert!((ag_norm_dual_oracle(&f, DEFAULT_ORACLE_ITERATIONS).value - 3.0).abs() < 1e-6);
}

#[test]
fn abelian_norm_is_dft_l1() {
    let mut rng = rng_for(3, 0);
    for (m, n) in [(1, 1), (1, 5), (1, 12), (3, 4), (2, 6)] {
        let g = if m == 1 {
            FiniteGroup::cyclic(n)
        } else {
            product_group(&FiniteGroup::cyclic(m), &FiniteGroup::cyclic(n))
        };
        for _ in 0..10 {
            let f = AGFunction::random(&g, &mut rng);
            let l1 = dft_l1(f.values(), m, n);
            assert!((ag_norm(&f).unwrap() - l1).abs() <= 1e-8 * l1);
            assert!((cyclic_dft_l1(&f).unwrap() - l1).abs() <= 1e-12 * l1);
        }
    }
}

#[test]
fn dft_needs_cyclic_factors() {
    let mut rng = rng_for(10, 0);
    assert!(cyclic_dft_l1(&AGFunction::random(&FiniteGroup::symmetric(3), &mut rng)).is_none());
    let relabeled = FiniteGroup::from_table("Z/3", vec![2, 0, 1, 0, 1, 2, 1, 2, 0]).unwrap();
    assert!(cyclic_dft_l1(&AGFunction::random(&relabeled, &mut rng)).is_none());
    let g = product_group(&FiniteGroup::cyclic(2), &product_group(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)));
    let f = AGFunction::random(&g, &mut rng);
    assert!((cyclic_dft_l1(&f).unwrap() - ag_norm(&f).unwrap()).abs() <= 1e-10);
}

#[test]
fn dual_oracle_agrees_with_trace_formula() {
    let mut rng = rng_for(4, 0);
    for g in [FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::quaternion()] {
        for _ in 0..5 {
            let f = AGFunction::random(&g, &mut rng);
            let exact = ag_norm(&f).unwrap();
            let oracle = ag_norm_dual_oracle(&f, DEFAULT_ORACLE_ITERATIONS);
            assert!(oracle.converged);
            assert!(oracle.value <= exact + 1e-9);
            assert!((oracle.value - exact).abs() <= 1e-6, "{} {} {}", g.name(), oracle.value, exact);
        }
    }
    let tiny = ag_norm_dual_oracle(&AGFunction::random(&FiniteGroup::symmetric(3), &mut rng), 1);
    assert_eq!(tiny.iterations, 1);
    assert!(!tiny.converged);
    let zero = AGFunction::new(&FiniteGroup::cyclic(2), vec![c(0.0); 2]).unwrap();
    assert_eq!(ag_norm_dual_oracle(&zero, 10).value, 0.0);
}

#[test]
fn check_map_examples() {
    let g = FiniteGroup::symmetric(3);
    for s in 0..6 {
        let d = AGFunction::delta(&g, s).unwrap();
        assert_eq!(check_map(&d), AGFunction::delta(&g, g.inv(s)).unwrap());
    }
    let mut rng = rng_for(5, 0);
    for _ in 0..20 {
        let f = AGFunction::random(&g, &mut rng);
        let symmetric =
            AGFunction::new(&g, f.values().iter().zip(check_map(&f).values()).map(|(a, b)| a + b).collect()).unwrap();
        assert_eq!(check_map(&symmetric), symmetric);
        assert_eq!(check_map(&check_map(&f)), f);
        assert!((ag_norm(&check_map(&f)).unwrap() - ag_norm(&f).unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn transpose_is_adjoint_of_check() {
    for g in [FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::quaternion()] {
        let r = check_adjoint_is_transpose(&g, 30, 6).unwrap();
        assert!(r.passed, "{r:?}");
        let e = AGFunction::delta(&g, g.identity()).unwrap();
        let t = VNElement::random(&g, &mut rng_for(6, 99));
        assert_eq!(t.pair(&e).unwrap(), t.coefficients()[g.identity()]);
        assert_eq!(t.pair(&check_map(&e)).unwrap(), t.coefficients()[g.identity()]);
    }
}

#[test]
fn restriction() {
    let z4 = FiniteGroup::cyclic(4);
    let h = Subgroup::new(&z4, &[0, 2]).unwrap();
    assert_eq!(h.group(), &FiniteGroup::cyclic(2));
    let e = restrict(&AGFunction::delta(&z4, 0).unwrap(), &h).unwrap();
    assert_eq!(e, AGFunction::delta(h.group(), 0).unwrap());
    assert!((ag_norm(&e).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(restrict(&AGFunction::ones(&z4), &h).unwrap(), AGFunction::ones(h.group()));
    assert!(Subgroup::new(&z4, &[0, 1]).is_err());
    assert!(Subgroup::new(&z4, &[1, 3]).is_err());
    assert!(Subgroup::new(&z4, &[0, 0]).is_err());
    assert!(restrict(&AGFunction::ones(&FiniteGroup::cyclic(5)), &h).is_err());

    let mut rng = rng_for(7, 0);
    let s3 = FiniteGroup::symmetric(3);
    let z6 = FiniteGroup::cyclic(6);
    for (g, h) in [(z6.clone(), Subgroup::new(&z6, &[0, 2, 4]).unwrap()), (s3.clone(), s3_rotations(&s3))] {
        assert!(h.group().is_abelian());
        for _ in 0..20 {
            let f = AGFunction::random(&g, &mut rng);
            assert!(ag_norm(&restrict(&f, &h).unwrap()).unwrap() <= ag_norm(&f).unwrap() + 1e-9);
        }
    }
}

#[test]
fn herz_quotient() {
    let z4 = FiniteGroup::cyclic(4);
    let h = Subgroup::new(&z4, &[0, 2]).unwrap();
    let r = herz_quotient_check(&AGFunction::ones(h.group()), &h, DEFAULT_ORACLE_ITERATIONS).unwrap();
    assert!(r.passed && !r.warning, "{r:?}");
    assert!((r.minimal_extension_norm - 1.0).abs() <= 1e-5);
    let r = herz_quotient_check(&AGFunction::delta(h.group(), 0).unwrap(), &h, DEFAULT_ORACLE_ITERATIONS).unwrap();
    assert!(r.passed && r.zero_extension_attains && (r.zero_extension_norm - 1.0).abs() < 1e-12);

    let s3 = FiniteGroup::symmetric(3);
    let h = s3_rotations(&s3);
    let mut rng = rng_for(8, 0);
    for _ in 0..5 {
        let g = AGFunction::random(h.group(), &mut rng);
        let r = herz_quotient_check(&g, &h, DEFAULT_ORACLE_ITERATIONS).unwrap();
        assert!(r.passed && r.zero_extension_attains, "{r:?}");
    }
    assert!(herz_quotient_check(&AGFunction::ones(&s3), &h, 10).is_err());
}

#[test]
fn product_groups() {
    let (g1, g2) = (FiniteGroup::cyclic(3), FiniteGroup::cyclic(4));
    let e = ag_tensor(&AGFunction::delta(&g1, 0).unwrap(), &AGFunction::delta(&g2, 0).unwrap());
    assert_eq!(e, AGFunction::delta(&product_group(&g1, &g2), 0).unwrap());
    let mut rng = rng_for(9, 0);
    let f = AGFunction::random(&g2, &mut rng);
    let one_f = ag_tensor(&AGFunction::ones(&g1), &f);
    assert!((ag_norm(&one_f).unwrap() - ag_norm(&f).unwrap()).abs() <= 1e-10);

    let s3 = FiniteGroup::symmetric(3);
    let z2 = FiniteGroup::cyclic(2);
    for (a, b) in [(&g1, &g2), (&z2, &s3)] {
        for _ in 0..5 {
            let u = AGFunction::random(a, &mut rng);
            let v = AGFunction::random(b, &mut rng);
            let lhs = ag_norm(&ag_tensor(&u, &v)).unwrap();
            let rhs = ag_norm(&u).unwrap() * ag_norm(&v).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0));
            let s = VNElement::random(a, &mut rng);
            let t = VNElement::random(b, &mut rng);
            assert!(
                (vn_norm(&vn_tensor(&s, &t)) - vn_norm(&s) * vn_norm(&t)).abs() <= 1e-8 * vn_norm(&s) * vn_norm(&t)
            );
        }
    }
}

#[test]
fn derivations_on_fourier_algebras() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(5), FiniteGroup::symmetric(3)] {
        let r = derivations_vanish(&g).unwrap();
        assert_eq!(r.dimension, 0, "{}", g.name());
        assert!(r.passed);
    }
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=12).prop_map(FiniteGroup::cyclic),
        Just(FiniteGroup::symmetric(3)),
        Just(FiniteGroup::dihedral(4)),
        Just(FiniteGroup::quaternion()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fourier_norm_is_submultiplicative(g in small_group(), seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let f = AGFunction::random(&g, &mut rng);
        let h = AGFunction::random(&g, &mut rng);
        prop_assert!(ag_norm(&f.mul(&h).unwrap()).unwrap() <= ag_norm(&f).unwrap() * ag_norm(&h).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn psi_is_contractive(g in small_group(), seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let n = g.order();
        let xi = complex_gaussian_vec(n, &mut rng);
        let eta = complex_gaussian_vec(n, &mut rng);
        let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(ag_norm(&psi_coefficient(&g, &xi, &eta).unwrap()).unwrap() <= norm(&xi) * norm(&eta) + 1e-9);
    }

    #[test]
    fn check_is_isometric_involution(g in small_group(), seed in any::<u64>()) {
        let f = AGFunction::random(&g, &mut rng_for(seed, 0));
        prop_assert_eq!(check_map(&check_map(&f)), f.clone());
        prop_assert!((ag_norm(&check_map(&f)).unwrap() - ag_norm(&f).unwrap()).abs() <= 1e-9);
    }
}
