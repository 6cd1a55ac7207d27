use rayon::prelude::*;

use super::columns::{factorial, plain_columns, profile_columns, Column, Exponents};
use super::curve::JointDensityGrid;
use super::{apply_floor, check_conditioning};
use crate::ensemble::{DegeneracyProfile, EnsembleParams, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::linalg::{determinant, determinant_with_condition};
use crate::specfun::dd::{Dd, ScaledDd};
use crate::specfun::LogValue;

/// Joint eigenvalue density
/// `P = C · Δ(λ) · Π λ_l^m e^{−λ_l/σ_A} · det[f_j(λ_k)]`
/// with the normalization `C` precomputed.
#[derive(Clone, Debug)]
pub struct JointDensity {
    ex: Exponents,
    columns: Vec<Column>,
    norm: ScaledDd,
}

impl JointDensity {
    /// Picks the derivative-column form when `σ_B` has repeated values.
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        let profile = params.detect_clusters(DEFAULT_CLUSTER_TOL);
        if profile.is_degenerate() {
            Self::with_profile(params, &profile)
        } else {
            Self::nondegenerate(params)
        }
    }

    pub fn nondegenerate(params: &EnsembleParams) -> Result<Self> {
        Self::from_columns(params, plain_columns(params))
    }

    pub fn with_profile(params: &EnsembleParams, profile: &DegeneracyProfile) -> Result<Self> {
        Self::from_columns(params, profile_columns(params, profile)?)
    }

    fn from_columns(params: &EnsembleParams, columns: Vec<Column>) -> Result<Self> {
        let ex = Exponents::of(params);
        let n = ex.n;
        // Andréief: ∫P = C · n! · det[Γ(m+j) · moment_jk]
        let moments = (1..=n)
            .map(|j| columns.iter().map(|&c| ex.moment(j, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let det = determinant_with_condition(&moments);
        check_conditioning("normalization", det.condition)?;
        let mut inv = det.value * factorial(n as u32);
        for j in 1..=n {
            inv = inv * factorial(ex.m + j as u32 - 1);
        }
        let norm = ScaledDd::ONE / inv;
        Ok(JointDensity { ex, columns, norm })
    }

    /// `C` in log form. It can be negative; the sign compensates that of the
    /// column determinant.
    pub fn log_norm(&self) -> LogValue {
        self.norm.to_log_value()
    }

    pub fn n(&self) -> usize {
        self.ex.n
    }

    /// `P(λ_1, …, λ_n)`; coincident arguments give 0.
    pub fn pdf(&self, lambdas: &[f64]) -> Result<f64> {
        let n = self.ex.n;
        if lambdas.len() != n {
            return Err(Error::Shape(format!("joint density needs {n} eigenvalues, got {}", lambdas.len())));
        }
        if let Some(bad) = lambdas.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Domain(format!("joint density needs positive eigenvalues, got {bad}")));
        }
        let mut vandermonde = ScaledDd::ONE;
        for j in 0..n {
            for k in 0..j {
                vandermonde = vandermonde * ScaledDd::from_dd(Dd::from(lambdas[j]) - Dd::from(lambdas[k]));
            }
        }
        if vandermonde.is_zero() {
            return Ok(0.0);
        }
        let rows = self
            .columns
            .iter()
            .map(|&c| lambdas.iter().map(|&x| self.ex.f(c, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let weight: ScaledDd = lambdas.iter().map(|&x| self.ex.weight(x)).product();
        let p = self.norm * vandermonde * weight * determinant(&rows);
        apply_floor(p.to_f64(), "joint density")
    }
}

/// `ln C`, see [`JointDensity::log_norm`].
pub fn joint_log_norm(params: &EnsembleParams) -> Result<LogValue> {
    Ok(JointDensity::new(params)?.log_norm())
}

/// Joint eigenvalue density at one point.
pub fn joint_pdf(params: &EnsembleParams, lambdas: &[f64]) -> Result<f64> {
    JointDensity::new(params)?.pdf(lambdas)
}

/// Evaluates the two-eigenvalue joint density on a product grid; points
/// with a zero coordinate evaluate to 0.
pub fn joint_grid(params: &EnsembleParams, axis1: &[f64], axis2: &[f64]) -> Result<JointDensityGrid> {
    if params.n() != 2 {
        return Err(Error::Dimension(format!("joint density grid requires n = 2, got n = {}", params.n())));
    }
    JointDensityGrid::check_axis(axis1)?;
    JointDensityGrid::check_axis(axis2)?;
    let density = JointDensity::new(params)?;
    let values = axis1
        .par_iter()
        .map(|&x| {
            axis2
                .iter()
                .map(|&y| if x == 0.0 || y == 0.0 { Ok(0.0) } else { density.pdf(&[x, y]) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    JointDensityGrid::new(axis1.to_vec(), axis2.to_vec(), values)
}
