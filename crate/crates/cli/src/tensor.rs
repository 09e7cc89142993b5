use oslab::elementary::{phi2_norm_exact, verify_rainwater_with, DEFAULT_ASCENT_RESTARTS, RAINWATER_SLACK};
use oslab::ostensor::{
    haagerup_lower_with, haagerup_upper, projective_bracket, spatial_norm, twisted_spatial_norm,
    verify_twisted_chain_with, GaugeOptions, TensorElement, INEQUALITY_SLACK,
};
use rand::Rng;

use crate::report::{inputs_hash, Row};
use crate::Settings;

/// Random instances draw their representation length from `1..=min(dimE·dimF, 6)`.
pub fn random_instances(s: &Settings) -> Vec<TensorElement> {
    let (de, df) = s.dims;
    (0..s.count)
        .map(|i| {
            let mut rng = oslab::random::rng_for(s.seed, i as u64);
            let len = rng.random_range(1..=(de * df).min(6));
            TensorElement::random(de, df, len, &mut rng)
        })
        .collect()
}

fn gauge(s: &Settings) -> GaugeOptions {
    GaugeOptions { restarts: s.restarts, seed: s.seed, ..Default::default() }
}

pub fn norms(i: usize, w: &TensorElement, s: &Settings) -> Vec<Row> {
    let h = inputs_hash(w);
    let slack = s.tol.unwrap_or(INEQUALITY_SLACK);
    let spatial = spatial_norm(w);
    let twisted = twisted_spatial_norm(w);
    let phi2 = phi2_norm_exact(w);
    let h_lower = haagerup_lower_with(w, DEFAULT_ASCENT_RESTARTS, s.seed);
    let h_upper = haagerup_upper(w, s.restarts, s.seed);
    let p = projective_bracket(w, s.restarts, s.seed);
    vec![
        Row::within("twisted = phi2", i, &h, (twisted - phi2).abs(), slack * twisted.max(1.0)),
        Row::le("spatial <= haagerup_upper", i, &h, spatial, h_upper, slack),
        Row::le("haagerup_lower <= haagerup_upper", i, &h, h_lower, h_upper, slack),
        Row::le("haagerup_lower <= projective_upper", i, &h, h_lower, p.upper, slack),
        Row::le("projective_lower <= projective_upper", i, &h, p.lower, p.upper, slack),
        Row::le("twisted <= projective_upper", i, &h, twisted, p.upper, slack),
    ]
}

pub fn twisted_chain(i: usize, w: &TensorElement, s: &Settings) -> Vec<Row> {
    let h = inputs_hash(w);
    let slack = s.tol.unwrap_or(INEQUALITY_SLACK);
    let r = verify_twisted_chain_with(w, &gauge(s));
    vec![
        Row::le("twisted <= sqrt(haagerup*haagerup_flip)", i, &h, r.twisted, r.geometric_mean, slack),
        Row::le("sqrt(haagerup*haagerup_flip) <= mean", i, &h, r.geometric_mean, r.arithmetic_mean, slack),
        Row::le("twisted <= projective_upper", i, &h, r.twisted, r.projective_upper, slack),
    ]
}

pub fn rainwater(i: usize, w: &TensorElement, s: &Settings) -> Vec<Row> {
    let h = inputs_hash(w);
    let slack = s.tol.unwrap_or(RAINWATER_SLACK);
    let r = verify_rainwater_with(w, &gauge(s), DEFAULT_ASCENT_RESTARTS);
    vec![
        Row::le("phi_inf <= haagerup", i, &h, r.phi_inf, r.haagerup, slack),
        Row::le("phi_one <= haagerup_flip", i, &h, r.phi_one, r.haagerup_flip, slack),
        Row::le("phi_two <= sqrt(haagerup*haagerup_flip)", i, &h, r.phi_two, r.geometric_mean, slack),
    ]
}
