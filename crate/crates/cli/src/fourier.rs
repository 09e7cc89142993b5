use oslab::fourier_finite::{
    ag_norm, ag_norm_dual_oracle, ag_tensor, check_adjoint_is_transpose, check_map, cyclic_dft_l1, derivations_vanish,
    herz_quotient_check, product_group, psi_coefficient, restrict, vn_norm, vn_tensor, AGFunction, FiniteGroup,
    Subgroup, VNElement, DEFAULT_ORACLE_ITERATIONS, HERZ_TOL, ORACLE_TOL,
};
use oslab::random::{complex_gaussian_vec, rng_for};

use crate::report::{inputs_hash, Row};
use crate::Settings;

pub const DEFAULT_GROUPS: [&str; 14] =
    ["Z/2", "Z/3", "Z/4", "Z/5", "Z/6", "Z/7", "Z/8", "Z/9", "Z/10", "Z/11", "Z/12", "S3", "D4", "Q8"];
const EXACT_TOL: f64 = 1e-10;
const DFT_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-9;
const CROSS_TOL: f64 = 1e-8;

/// Cyclic subgroups other than the trivial one and the whole group.
pub fn cyclic_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for s in 0..g.order() {
        let mut elems = vec![g.identity()];
        let mut x = s;
        while x != g.identity() {
            elems.push(x);
            x = g.mul(x, s);
        }
        elems.sort_unstable();
        if elems.len() > 1 && elems.len() < g.order() && !seen.contains(&elems) {
            seen.push(elems);
        }
    }
    seen.iter().map(|e| Subgroup::new(g, e).expect("cyclic subgroups are subgroups")).collect()
}

fn name(g: &FiniteGroup, what: &str) -> String {
    format!("{}: {what}", g.name())
}

fn unwrap_or_fail(name: String, i: usize, h: &str, v: oslab::Result<f64>) -> Result<f64, Row> {
    v.map_err(|e| Row::holds(name, i, h, false).warn(Some(e.to_string())))
}

/// Norm identities for one function: duality oracle, DFT (abelian products of
/// cyclic groups) and the check map.
pub fn function_rows(i: usize, f: &AGFunction, s: &Settings) -> Vec<Row> {
    let g = f.group();
    let h = inputs_hash(f);
    let norm = match unwrap_or_fail(name(g, "ag_norm"), i, &h, ag_norm(f)) {
        Ok(v) => v,
        Err(row) => return vec![row],
    };
    let mut rows = Vec::new();
    let oracle = ag_norm_dual_oracle(f, s.iterations);
    let warning = (!oracle.converged).then(|| format!("oracle stopped after {} iterations", oracle.iterations));
    rows.push(
        Row::within(
            name(g, "|dual oracle - ag_norm|"),
            i,
            &h,
            (oracle.value - norm).abs(),
            s.tol.unwrap_or(ORACLE_TOL),
        )
        .warn(warning),
    );
    if let Some(l1) = cyclic_dft_l1(f) {
        rows.push(Row::within(name(g, "|ag_norm - l1(dft)|"), i, &h, (norm - l1).abs(), DFT_TOL * l1.max(1.0)));
    }
    let checked = check_map(f);
    let checked_norm = ag_norm(&checked).unwrap_or(f64::INFINITY);
    rows.push(Row::within(name(g, "check map is isometric"), i, &h, (checked_norm - norm).abs(), ISOMETRY_TOL));
    rows.push(Row::holds(name(g, "check map is an involution"), i, &h, check_map(&checked) == *f));
    rows
}

pub fn random_functions(g: &FiniteGroup, s: &Settings) -> Vec<AGFunction> {
    (0..s.count).map(|i| AGFunction::random(g, &mut rng_for(s.seed, i as u64))).collect()
}

/// All configured suites for one group.
pub fn group_rows(g: &FiniteGroup, s: &Settings, suite: &str) -> Vec<Row> {
    let mut rows = Vec::new();
    let h = inputs_hash(g);
    let run = |part: &str| suite == "all" || suite == part;
    if run("norms") {
        for (label, f) in
            [("delta_e", AGFunction::delta(g, g.identity()).expect("identity")), ("ones", AGFunction::ones(g))]
        {
            let v = ag_norm(&f).unwrap_or(f64::INFINITY);
            rows.push(Row::within(name(g, &format!("||{label}|| = 1")), 0, &h, (v - 1.0).abs(), EXACT_TOL));
        }
        for (i, f) in random_functions(g, s).iter().enumerate() {
            rows.extend(function_rows(i, f, s));
        }
        for i in 0..s.count {
            let mut rng = rng_for(s.seed ^ 0x951, i as u64);
            let xi = complex_gaussian_vec(g.order(), &mut rng);
            let eta = complex_gaussian_vec(g.order(), &mut rng);
            let l2 = |v: &[oslab::C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let psi = psi_coefficient(g, &xi, &eta).and_then(|f| ag_norm(&f)).unwrap_or(f64::INFINITY);
            rows.push(Row::le(name(g, "||psi(xi, eta)|| <= |xi| |eta|"), i, &h, psi, l2(&xi) * l2(&eta), 1e-9));
            let f = AGFunction::random(g, &mut rng);
            let k = AGFunction::random(g, &mut rng);
            let prod = f.mul(&k).and_then(|p| ag_norm(&p)).unwrap_or(f64::INFINITY);
            let bound = ag_norm(&f).unwrap_or(0.0) * ag_norm(&k).unwrap_or(0.0);
            rows.push(Row::le(name(g, "||fk|| <= ||f|| ||k||"), i, &h, prod, bound, 1e-12 * bound.max(1.0)));
        }
    }
    if run("check") {
        match check_adjoint_is_transpose(g, s.count.max(1), s.seed) {
            Ok(r) => {
                rows.push(Row::within(name(g, "<T^t, f> = <T, f check>"), 0, &h, r.max_pairing_error, EXACT_TOL));
                rows.push(Row::within(name(g, "transpose stays in VN(G)"), 0, &h, r.max_reextraction_error, EXACT_TOL));
                rows.push(Row::within(
                    name(g, "transpose is a complete isometry from the opposite"),
                    0,
                    &h,
                    r.max_level_norm_error,
                    1e-9,
                ));
            }
            Err(e) => rows.push(Row::holds(name(g, "transpose report"), 0, &h, false).warn(Some(e.to_string()))),
        }
    }
    if run("herz") {
        for (k, sub) in cyclic_subgroups(g).iter().enumerate() {
            let label = format!("H{k} of order {}", sub.group().order());
            for i in 0..s.count {
                let mut rng = rng_for(s.seed ^ 0x4e22, (k * 100_000 + i) as u64);
                let f = AGFunction::random(g, &mut rng);
                let fh = inputs_hash(&f);
                let rf = restrict(&f, sub).and_then(|r| ag_norm(&r)).unwrap_or(f64::INFINITY);
                let nf = ag_norm(&f).unwrap_or(0.0);
                rows.push(Row::le(name(g, &format!("restriction to {label} contracts")), i, &fh, rf, nf, 1e-9));
                let gfun = AGFunction::random(sub.group(), &mut rng);
                let gh = inputs_hash(&gfun);
                match herz_quotient_check(&gfun, sub, s.iterations) {
                    Ok(r) => {
                        let warning = r.warning.then(|| format!("ascent stopped after {} iterations", r.iterations));
                        let err = (r.minimal_extension_norm - r.subgroup_norm).abs();
                        let tol = HERZ_TOL * r.subgroup_norm.max(1.0);
                        rows.push(
                            Row::within(name(g, &format!("Herz quotient on {label}")), i, &gh, err, tol).warn(warning),
                        );
                    }
                    Err(e) => rows.push(Row::holds(name(g, "Herz quotient"), i, &gh, false).warn(Some(e.to_string()))),
                }
            }
        }
    }
    if run("products") {
        let z2 = FiniteGroup::cyclic(2);
        let prod = product_group(g, &z2);
        let ph = inputs_hash(&prod);
        for i in 0..s.count {
            let mut rng = rng_for(s.seed ^ 0x9a0d, i as u64);
            let u = AGFunction::random(g, &mut rng);
            let v = AGFunction::random(&z2, &mut rng);
            let lhs = ag_norm(&ag_tensor(&u, &v)).unwrap_or(f64::INFINITY);
            let rhs = ag_norm(&u).unwrap_or(0.0) * ag_norm(&v).unwrap_or(0.0);
            rows.push(Row::within(
                name(&prod, "||u x v|| = ||u|| ||v||"),
                i,
                &ph,
                (lhs - rhs).abs(),
                CROSS_TOL * rhs.max(1.0),
            ));
            let a = VNElement::random(g, &mut rng);
            let b = VNElement::random(&z2, &mut rng);
            let (na, nb) = (vn_norm(&a), vn_norm(&b));
            let err = (vn_norm(&vn_tensor(&a, &b)) - na * nb).abs();
            rows.push(Row::within(name(&prod, "||S x T|| = ||S|| ||T||"), i, &ph, err, CROSS_TOL * (na * nb).max(1.0)));
        }
    }
    if run("derivations") {
        match derivations_vanish(g) {
            Ok(r) => rows.push(Row::within(name(g, "dim Der(A(G), A(G)*) = 0"), 0, &h, r.dimension as f64, 0.0)),
            Err(e) => rows.push(Row::holds(name(g, "derivations"), 0, &h, false).warn(Some(e.to_string()))),
        }
    }
    rows
}

pub fn default_iterations() -> usize {
    DEFAULT_ORACLE_ITERATIONS
}
