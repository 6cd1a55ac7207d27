//! Column functions shared by the joint and marginal determinants.
//!
//! Every column belongs to one `σ_B` value and carries a derivative order `i`.
//! A value of multiplicity `r` contributes the orders `0..r`, which is the
//! limit of the distinct-value determinant under column divided differences
//! in the rate `c = 1/σ_A − 1/σ_B`.

use crate::ensemble::{DegeneracyProfile, EnsembleParams};
use crate::error::{Error, Result};
use crate::specfun::dd::{Dd, ScaledDd};
use crate::specfun::{hyp1f1_deriv_dd, hyp2f1_deriv_dd};

/// Maximum relative distance between a `σ_B` entry and the cluster value a
/// caller-supplied profile assigns to it.
const PROFILE_MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Column {
    pub sigma_b: f64,
    pub order: u32,
}

/// Shape parameters that every column function needs.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Exponents {
    pub n: usize,
    pub m: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub sigma_a: f64,
}

impl Exponents {
    pub fn of(params: &EnsembleParams) -> Self {
        Exponents {
            n: params.n() as usize,
            m: params.m(),
            alpha: f64::from(params.alpha()),
            gamma: f64::from(params.gamma()),
            sigma_a: params.sigma_a(),
        }
    }

    /// `c = 1/σ_A − 1/σ_B = (σ_B − σ_A)/(σ_A σ_B)`.
    pub fn rate_shift(&self, sigma_b: f64) -> Dd {
        let (a, b) = (Dd::from(self.sigma_a), Dd::from(sigma_b));
        (b - a) / (a * b)
    }

    /// `z = 1 − σ_A/σ_B` together with `1 − z = σ_A/σ_B`.
    pub fn h_argument(&self, sigma_b: f64) -> (Dd, Dd) {
        let (a, b) = (Dd::from(self.sigma_a), Dd::from(sigma_b));
        ((b - a) / b, a / b)
    }

    /// `λ^i · ₁F₁⁽ⁱ⁾(α; γ; cλ)`.
    pub fn f(&self, col: Column, lambda: f64) -> Result<ScaledDd> {
        let c = self.rate_shift(col.sigma_b);
        let v = hyp1f1_deriv_dd(col.order, self.alpha, self.gamma, c.mul_f64(lambda))?;
        Ok(ScaledDd::from_f64(lambda).powi(col.order as i32) * v)
    }

    /// `σ_A^{m+j+i} · ₂F₁⁽ⁱ⁾(α, m+j; γ; 1 − σ_A/σ_B)` for `j = 1..=n`, the
    /// moment `∫ λ^{j−1} · λ^m e^{−λ/σ_A} · f(λ) dλ` divided by `Γ(m+j)`.
    pub fn moment(&self, j: usize, col: Column) -> Result<ScaledDd> {
        let b = f64::from(self.m) + j as f64;
        let (z, one_minus_z) = self.h_argument(col.sigma_b);
        let v = hyp2f1_deriv_dd(col.order, self.alpha, b, self.gamma, z, one_minus_z)?;
        let power = self.m as i32 + j as i32 + col.order as i32;
        Ok(ScaledDd::from_f64(self.sigma_a).powi(power) * v)
    }

    /// `λ^m e^{−λ/σ_A}`.
    pub fn weight(&self, lambda: f64) -> ScaledDd {
        let rate = Dd::from(lambda) / Dd::from(self.sigma_a);
        ScaledDd::from_f64(lambda).powi(self.m as i32) * ScaledDd::exp(-rate)
    }
}

/// `Γ(k + 1) = k!` without overflow.
pub(crate) fn factorial(k: u32) -> ScaledDd {
    (2..=k).map(|i| ScaledDd::from_f64(f64::from(i))).product()
}

/// One order-0 column per `σ_B` entry.
pub(crate) fn plain_columns(params: &EnsembleParams) -> Vec<Column> {
    params.sigma_b().iter().map(|&s| Column { sigma_b: s, order: 0 }).collect()
}

/// Columns of a degeneracy profile, after checking that it describes `params`.
pub(crate) fn profile_columns(params: &EnsembleParams, profile: &DegeneracyProfile) -> Result<Vec<Column>> {
    if profile.total() != params.n() {
        return Err(Error::Shape(format!(
            "degeneracy profile covers {} values but n = {}",
            profile.total(),
            params.n()
        )));
    }
    let mut sorted = params.sigma_b().to_vec();
    sorted.sort_by(f64::total_cmp);
    let expanded = profile.clusters().iter().flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity as usize));
    for (want, got) in sorted.iter().zip(expanded) {
        if (want - got).abs() > PROFILE_MATCH_TOL * want.abs().max(got.abs()) {
            return Err(Error::Shape(format!(
                "degeneracy profile value {got} does not match sigma_B entry {want}"
            )));
        }
    }
    Ok(profile
        .clusters()
        .iter()
        .flat_map(|c| (0..c.multiplicity).map(move |i| Column { sigma_b: c.value, order: i }))
        .collect())
}
