use serde::{Deserialize, Serialize};

use super::{flip, gauge::projective_upper, haagerup_upper_with, twisted_spatial_norm, GaugeOptions};
use super::{TensorElement, INEQUALITY_SLACK};

/// Values and pass flags for
/// `twisted ≤ √(h₁h₂) ≤ ½(h₁ + h₂)` and `twisted ≤ projective upper bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedChainReport {
    pub twisted: f64,
    pub haagerup: f64,
    pub haagerup_flip: f64,
    pub projective_upper: f64,
    pub geometric_mean: f64,
    pub arithmetic_mean: f64,
    pub twisted_le_geometric: bool,
    pub geometric_le_arithmetic: bool,
    pub twisted_le_projective: bool,
}

impl TwistedChainReport {
    pub fn passed(&self) -> bool {
        self.twisted_le_geometric && self.geometric_le_arithmetic && self.twisted_le_projective
    }
}

pub fn verify_twisted_chain(w: &TensorElement) -> TwistedChainReport {
    verify_twisted_chain_with(w, &GaugeOptions::default())
}

pub fn verify_twisted_chain_with(w: &TensorElement, opts: &GaugeOptions) -> TwistedChainReport {
    let t = twisted_spatial_norm(w);
    let h1 = haagerup_upper_with(w, opts);
    let h2 = haagerup_upper_with(&flip(w), opts);
    let p = projective_upper(w, opts);
    let gm = (h1 * h2).sqrt();
    let am = 0.5 * (h1 + h2);
    TwistedChainReport {
        twisted: t,
        haagerup: h1,
        haagerup_flip: h2,
        projective_upper: p,
        geometric_mean: gm,
        arithmetic_mean: am,
        twisted_le_geometric: t <= gm + INEQUALITY_SLACK,
        geometric_le_arithmetic: gm <= am + INEQUALITY_SLACK,
        twisted_le_projective: t <= p + INEQUALITY_SLACK,
    }
}
