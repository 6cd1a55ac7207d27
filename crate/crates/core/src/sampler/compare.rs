use serde::Serialize;

use super::histogram::SpectrumHistogram;
use crate::analytic::DensityCurve;
use crate::specfun::gamma_q;

/// Bins with at least this many expected counts enter the chi-square sum
/// and the maximum residual.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinComparison {
    pub bin_left: f64,
    pub bin_right: f64,
    pub observed_count: u64,
    pub expected_count: f64,
    pub observed_density: f64,
    pub expected_density: f64,
    /// `(observed − expected) / √max(expected, 1)`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub bins: Vec<BinComparison>,
    pub max_abs_residual: f64,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Histogram against the analytic curve. The expected count of a bin is the
/// total eigenvalue count times the integral of the piecewise-linear curve
/// over the bin.
pub fn compare(hist: &SpectrumHistogram, curve: &DensityCurve) -> ComparisonReport {
    let total = hist.total_eigenvalues() as f64;
    if hist.total_eigenvalues() == 0 {
        return ComparisonReport { bins: Vec::new(), max_abs_residual: 0.0, chi_square: 0.0, dof: 0, p_value: 1.0 };
    }
    let edges = hist.edges();
    let observed = hist.densities();
    let mut bins = Vec::with_capacity(hist.num_bins());
    let (mut chi_square, mut dof, mut max_abs_residual) = (0.0, 0usize, 0.0f64);
    for (i, &count) in hist.counts().iter().enumerate() {
        let (left, right) = (edges[i], edges[i + 1]);
        let mass = curve.integrate_between(left, right);
        let expected = total * mass;
        let diff = count as f64 - expected;
        let residual = diff / expected.max(1.0).sqrt();
        if expected >= MIN_EXPECTED {
            chi_square += diff * diff / expected;
            dof += 1;
            max_abs_residual = max_abs_residual.max(residual.abs());
        }
        bins.push(BinComparison {
            bin_left: left,
            bin_right: right,
            observed_count: count,
            expected_count: expected,
            observed_density: observed[i],
            expected_density: mass / (right - left),
            residual,
        });
    }
    let p_value = if dof == 0 { 1.0 } else { gamma_q(0.5 * dof as f64, 0.5 * chi_square).unwrap_or(0.0) };
    ComparisonReport { bins, max_abs_residual, chi_square, dof, p_value }
}
