use rayon::prelude::*;

use super::columns::{factorial, plain_columns, profile_columns, Column, Exponents};
use super::curve::DensityCurve;
use super::quadrature::integrate_density;
use super::{apply_floor, check_conditioning};
use crate::ensemble::{DegeneracyProfile, EnsembleParams, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::linalg::{determinant, determinant_with_condition};
use crate::specfun::dd::{Dd, ScaledDd};
use crate::specfun::LogValue;

/// Marginal eigenvalue density with its `h` matrix and normalization
/// precomputed, for repeated evaluation.
///
/// `p(λ) = c · λ^m e^{−λ/σ_A} · det[[0, f_k(λ)], [g_j(λ), h_jk]]` with
/// `c⁻¹ = −n · det h`.
#[derive(Clone, Debug)]
pub struct MarginalDensity {
    ex: Exponents,
    columns: Vec<Column>,
    h: Vec<Vec<ScaledDd>>,
    inv_gamma_g: Vec<ScaledDd>,
    norm: ScaledDd,
}

impl MarginalDensity {
    /// Chooses the distinct-value or the derivative-column form from the
    /// clusters found at [`DEFAULT_CLUSTER_TOL`].
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        let profile = params.detect_clusters(DEFAULT_CLUSTER_TOL);
        if profile.is_degenerate() {
            Self::with_profile(params, &profile)
        } else {
            Self::nondegenerate(params)
        }
    }

    /// Distinct-value formula, whatever the spacing of the `σ_B`.
    pub fn nondegenerate(params: &EnsembleParams) -> Result<Self> {
        Self::from_columns(params, plain_columns(params))
    }

    /// Derivative-column formula for the given clusters.
    pub fn with_profile(params: &EnsembleParams, profile: &DegeneracyProfile) -> Result<Self> {
        Self::from_columns(params, profile_columns(params, profile)?)
    }

    fn from_columns(params: &EnsembleParams, columns: Vec<Column>) -> Result<Self> {
        let ex = Exponents::of(params);
        let n = ex.n;
        let h = (1..=n)
            .map(|j| columns.iter().map(|&c| ex.moment(j, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let det = determinant_with_condition(&h);
        check_conditioning("h", det.condition)?;
        let norm = ScaledDd::ONE / (det.value * Dd::from(-(n as f64)));
        let inv_gamma_g = (1..=n).map(|j| ScaledDd::ONE / factorial(ex.m + j as u32 - 1)).collect();
        Ok(MarginalDensity { ex, columns, h, inv_gamma_g, norm })
    }

    /// The normalization `c` in log form.
    pub fn log_norm(&self) -> LogValue {
        self.norm.to_log_value()
    }

    /// `p(λ)` for `λ > 0`.
    pub fn pdf(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("marginal density needs lambda > 0, got {lambda}")));
        }
        let n = self.ex.n;
        let x = ScaledDd::from_f64(lambda);
        let mut rows = Vec::with_capacity(n + 1);
        let mut top = Vec::with_capacity(n + 1);
        top.push(ScaledDd::ZERO);
        for &c in &self.columns {
            top.push(self.ex.f(c, lambda)?);
        }
        rows.push(top);
        let mut power = ScaledDd::ONE;
        for j in 0..n {
            let mut row = Vec::with_capacity(n + 1);
            row.push(power * self.inv_gamma_g[j]);
            row.extend_from_slice(&self.h[j]);
            rows.push(row);
            power = power * x;
        }
        let p = self.norm * self.ex.weight(lambda) * determinant(&rows);
        apply_floor(p.to_f64(), "marginal density")
    }

    /// Like [`pdf`](Self::pdf) but also accepts `λ = 0`, where the density vanishes.
    pub fn pdf_or_zero(&self, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            Ok(0.0)
        } else {
            self.pdf(lambda)
        }
    }
}

/// Marginal density for distinct `σ_B` values.
pub fn marginal_pdf(params: &EnsembleParams, lambda: f64) -> Result<f64> {
    MarginalDensity::nondegenerate(params)?.pdf(lambda)
}

/// Marginal density with repeated `σ_B` values grouped by `profile`.
pub fn marginal_pdf_degenerate(params: &EnsembleParams, profile: &DegeneracyProfile, lambda: f64) -> Result<f64> {
    MarginalDensity::with_profile(params, profile)?.pdf(lambda)
}

/// Evaluates the marginal on a grid, choosing the degenerate form when
/// `σ_B` has repeated values. `λ = 0` evaluates to 0.
pub fn marginal_curve(params: &EnsembleParams, grid: &[f64]) -> Result<DensityCurve> {
    if grid.is_empty() {
        return Ok(DensityCurve::default());
    }
    DensityCurve::check_grid(grid)?;
    let density = MarginalDensity::new(params)?;
    let values = grid.par_iter().map(|&x| density.pdf_or_zero(x)).collect::<Result<Vec<_>>>()?;
    DensityCurve::new(grid.to_vec(), values)
}

/// `∫ λ p(λ) dλ` by quadrature.
pub fn mean_eigenvalue(params: &EnsembleParams) -> Result<f64> {
    let density = MarginalDensity::new(params)?;
    integrate_density(params, |x| Ok(x * density.pdf(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_density_anchor() {
        let p = EnsembleParams::new(1, 1, 1, 1.0, vec![1.0]).unwrap();
        for x in [0.1, 1.0, 5.0] {
            assert_relative_eq!(marginal_pdf(&p, x).unwrap(), x * (-x).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let p = EnsembleParams::new(1, 1, 1, 1.0, vec![1.0]).unwrap();
        assert!(matches!(marginal_pdf(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(marginal_pdf(&p, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_must_match() {
        let p = EnsembleParams::new(2, 3, 4, 1.0, vec![2.0, 2.0]).unwrap();
        let bad = DegeneracyProfile::from_values(&[2.0, 3.0], 1e-9);
        assert!(matches!(MarginalDensity::with_profile(&p, &bad), Err(Error::Shape(_))));
        let short = DegeneracyProfile::from_values(&[2.0], 1e-9);
        assert!(matches!(MarginalDensity::with_profile(&p, &short), Err(Error::Shape(_))));
    }

    #[test]
    fn exactly_equal_values_are_singular_without_profile() {
        let p = EnsembleParams::new(2, 3, 4, 1.0, vec![2.0, 2.0]).unwrap();
        assert!(matches!(MarginalDensity::nondegenerate(&p), Err(Error::Conditioning(_))));
        assert!(MarginalDensity::new(&p).is_ok());
    }

    #[test]
    fn empty_grid_gives_empty_curve() {
        let p = EnsembleParams::new(1, 1, 1, 1.0, vec![1.0]).unwrap();
        assert!(marginal_curve(&p, &[]).unwrap().is_empty());
    }
}
