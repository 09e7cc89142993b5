use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matcore::{C64, ZERO};
use crate::random::complex_gaussian;

/// Trigonometric polynomial `Σ c_k e^{2πi k·θ}` on `𝕋` or `𝕋²`. Frequencies
/// of one-variable polynomials are stored as `(k, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrig", into = "RawTrig")]
pub struct TrigPoly {
    vars: usize,
    terms: BTreeMap<(i64, i64), C64>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    freq: Vec<i64>,
    coef: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct RawTrig {
    vars: usize,
    terms: Vec<RawTerm>,
}

impl TryFrom<RawTrig> for TrigPoly {
    type Error = Error;
    fn try_from(raw: RawTrig) -> Result<Self> {
        let mut p = TrigPoly::zero(raw.vars)?;
        for (n, t) in raw.terms.iter().enumerate() {
            if t.freq.len() != raw.vars {
                return invalid(format!("terms[{n}].freq has {} entries, expected {}", t.freq.len(), raw.vars));
            }
            if !t.coef.iter().all(|v| v.is_finite()) {
                return invalid(format!("terms[{n}].coef is not finite"));
            }
            p.add_term(&t.freq, C64::new(t.coef[0], t.coef[1]));
        }
        Ok(p)
    }
}

impl From<TrigPoly> for RawTrig {
    fn from(p: TrigPoly) -> Self {
        let terms = p
            .terms
            .iter()
            .map(|(&(k, l), c)| RawTerm { freq: if p.vars == 1 { vec![k] } else { vec![k, l] }, coef: [c.re, c.im] })
            .collect();
        RawTrig { vars: p.vars, terms }
    }
}

impl TrigPoly {
    pub fn zero(vars: usize) -> Result<Self> {
        if vars != 1 && vars != 2 {
            return invalid(format!("trigonometric polynomials have 1 or 2 variables, got {vars}"));
        }
        Ok(Self { vars, terms: BTreeMap::new() })
    }

    pub fn constant(vars: usize, c: C64) -> Result<Self> {
        let mut p = Self::zero(vars)?;
        p.add_term(&vec![0; vars], c);
        Ok(p)
    }

    /// `c·e^{2πi k·θ}`.
    pub fn monomial(freq: &[i64], c: C64) -> Result<Self> {
        let mut p = Self::zero(freq.len())?;
        p.add_term(freq, c);
        Ok(p)
    }

    /// Gaussian coefficients on `terms` frequencies drawn from `[-max_freq, max_freq]`.
    pub fn random(vars: usize, max_freq: i64, terms: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut p = Self::zero(vars)?;
        for _ in 0..terms {
            let freq: Vec<i64> = (0..vars).map(|_| rng.random_range(-max_freq..=max_freq)).collect();
            p.add_term(&freq, complex_gaussian(rng));
        }
        Ok(p)
    }

    fn add_term(&mut self, freq: &[i64], c: C64) {
        let key = (freq[0], freq.get(1).copied().unwrap_or(0));
        let entry = self.terms.entry(key).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&key);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), C64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coefficient(&self, freq: (i64, i64)) -> C64 {
        self.terms.get(&freq).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return invalid(format!("mixing polynomials in {} and {} variables", self.vars, other.vars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut p = self.clone();
        for (&(k, l), &c) in &other.terms {
            p.add_term(&[k, l], c);
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self { vars: self.vars, terms: BTreeMap::new() };
        for (&(k, l), &c) in &self.terms {
            p.add_term(&[k, l], c * s);
        }
        p
    }

    /// Product by convolution of coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut p = Self { vars: self.vars, terms: BTreeMap::new() };
        for (&(k1, l1), &c1) in &self.terms {
            for (&(k2, l2), &c2) in &other.terms {
                p.add_term(&[k1 + k2, l1 + l2], c1 * c2);
            }
        }
        Ok(p)
    }

    /// Point evaluation at `θ ∈ [0,1)^vars`.
    pub fn evaluate(&self, theta: &[f64]) -> Result<C64> {
        if theta.len() != self.vars {
            return invalid("evaluation point has the wrong number of coordinates");
        }
        let (t1, t2) = (theta[0], theta.get(1).copied().unwrap_or(0.0));
        Ok(self
            .terms
            .iter()
            .map(|(&(k, l), &c)| c * C64::from_polar(1.0, 2.0 * PI * (k as f64 * t1 + l as f64 * t2)))
            .sum())
    }
}

/// `∂f/∂θ_variable`: the coefficient at frequency `k` gains a factor `2πik`.
pub fn trig_deriv(f: &TrigPoly, variable: usize) -> Result<TrigPoly> {
    if variable >= f.vars {
        return invalid(format!("variable {variable} out of range for {} variables", f.vars));
    }
    let mut p = TrigPoly { vars: f.vars, terms: BTreeMap::new() };
    for (&(k, l), &c) in &f.terms {
        let m = if variable == 0 { k } else { l };
        p.add_term(&[k, l], c * C64::new(0.0, 2.0 * PI * m as f64));
    }
    Ok(p)
}

/// Integral against normalized Haar measure: the zero-frequency coefficient.
pub fn trig_integral(f: &TrigPoly) -> C64 {
    f.coefficient((0, 0))
}

/// `D(f₁)(f₀) = ∫_𝕋 (∂f₁/∂θ) f₀ dθ`.
pub fn c1_derivation_pairing(f1: &TrigPoly, f0: &TrigPoly) -> Result<C64> {
    if f1.vars != 1 || f0.vars != 1 {
        return invalid("the derivation pairing lives on the circle");
    }
    Ok(trig_integral(&trig_deriv(f1, 0)?.mul(f0)?))
}

/// Jacobian density `∂₁f₁∂₂f₂ − ∂₂f₁∂₁f₂`.
pub fn c1_cocycle_density(f1: &TrigPoly, f2: &TrigPoly) -> Result<TrigPoly> {
    if f1.vars != 2 || f2.vars != 2 {
        return invalid("the cocycle lives on the torus");
    }
    let a = trig_deriv(f1, 0)?.mul(&trig_deriv(f2, 1)?)?;
    let b = trig_deriv(f1, 1)?.mul(&trig_deriv(f2, 0)?)?;
    a.sub(&b)
}

/// `F(f₁, f₂)(f₀) = ∫_{𝕋²} (∂₁f₁∂₂f₂ − ∂₂f₁∂₁f₂) f₀`.
pub fn c1_cocycle_pairing(f1: &TrigPoly, f2: &TrigPoly, f0: &TrigPoly) -> Result<C64> {
    if f0.vars != 2 {
        return invalid("the cocycle lives on the torus");
    }
    Ok(trig_integral(&c1_cocycle_density(f1, f2)?.mul(f0)?))
}

/// Polynomial in `ℂ[z, w]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanePoly {
    terms: BTreeMap<(u32, u32), C64>,
}

impl PlanePoly {
    /// `c·zᵃwᵇ`.
    pub fn monomial(a: u32, b: u32, c: C64) -> Self {
        let mut p = Self::default();
        p.add_term(a, b, c);
        p
    }

    fn add_term(&mut self, a: u32, b: u32, c: C64) {
        let entry = self.terms.entry((a, b)).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&(a, b), &c) in &other.terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::default();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &other.terms {
                p.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        p
    }

    pub fn d_z(&self) -> Self {
        let mut p = Self::default();
        for (&(a, b), &c) in self.terms.iter().filter(|((a, _), _)| *a > 0) {
            p.add_term(a - 1, b, c * a as f64);
        }
        p
    }

    pub fn d_w(&self) -> Self {
        let mut p = Self::default();
        for (&(a, b), &c) in self.terms.iter().filter(|((_, b), _)| *b > 0) {
            p.add_term(a, b - 1, c * b as f64);
        }
        p
    }

    /// `∂_w f₁ ∂_z f₂ − ∂_w f₂ ∂_z f₁`.
    pub fn cocycle(f1: &Self, f2: &Self) -> Self {
        let a = f1.d_w().mul(&f2.d_z());
        let b = f2.d_w().mul(&f1.d_z());
        a.add(&b.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self::default();
        for (&(a, b), &c) in &self.terms {
            p.add_term(a, b, c * s);
        }
        p
    }

    /// Restriction to the torus via `z = e^{2πiθ₁}`, `w = e^{2πiθ₂}`.
    pub fn to_trig(&self) -> TrigPoly {
        let mut p = TrigPoly { vars: 2, terms: BTreeMap::new() };
        for (&(a, b), &c) in &self.terms {
            p.add_term(&[a as i64, b as i64], c);
        }
        p
    }
}
