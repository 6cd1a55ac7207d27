//! Self-test battery run by `wishart-sum check`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{integrate, integrate_density, lambda_max, mean_eigenvalue, MarginalDensity};
use crate::ensemble::{DegeneracyProfile, EnsembleParams, DEFAULT_CLUSTER_TOL};
use crate::error::Result;
use crate::specfun::{gamma, hyp1f1, hyp2f1};

pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const MEAN_REL_TOL: f64 = 1e-6;
pub const KUMMER_TOL: f64 = 1e-10;
pub const LAPLACE_TOL: f64 = 1e-8;
/// Largest deviation from the degenerate marginal at the smaller spread,
/// relative to the peak density.
pub const DEGENERATE_REL_TOL: f64 = 1e-5;
const SPREADS: [f64; 2] = [1e-2, 1e-3];
const LAPLACE_DRAWS: usize = 10;
const LAPLACE_SEED: u64 = 17;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn outcome(name: &'static str, r: Result<(bool, String)>) -> CheckOutcome {
    match r {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome { name, passed: false, detail: e.to_string() },
    }
}

/// Runs every check on `params`.
pub fn run_checks(params: &EnsembleParams) -> Vec<CheckOutcome> {
    vec![
        outcome("normalization", check_normalization(params)),
        outcome("mean", check_mean(params)),
        outcome("kummer", check_kummer(params)),
        outcome("laplace-identity", check_laplace()),
        outcome("degenerate-limit", check_degenerate_limit(params)),
    ]
}

pub fn check_normalization(params: &EnsembleParams) -> Result<(bool, String)> {
    let d = MarginalDensity::new(params)?;
    let total = integrate_density(params, |x| d.pdf_or_zero(x))?;
    let err = (total - 1.0).abs();
    Ok((err <= NORMALIZATION_TOL, format!("integral {total:.12} (|error| {err:.2e})")))
}

pub fn check_mean(params: &EnsembleParams) -> Result<(bool, String)> {
    let mean = mean_eigenvalue(params)?;
    let exact = params.mean_eigenvalue_exact();
    let rel = ((mean - exact) / exact).abs();
    Ok((rel <= MEAN_REL_TOL, format!("mean {mean:.10} vs {exact:.10} (relative error {rel:.2e})")))
}

/// Largest relative residual of `1F1(a; b; z) = e^z 1F1(b − a; b; −z)` over a
/// fixed grid plus the `(α, γ)` of `params`.
pub fn kummer_residual(params: &EnsembleParams) -> Result<f64> {
    let mut pairs = vec![(f64::from(params.alpha()), f64::from(params.gamma()))];
    for a in [0.5, 1.0, 2.5, 5.0] {
        for b in [1.5, 3.0, 8.0, 15.0] {
            pairs.push((a, b));
        }
    }
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        for z in [-30.0, -5.0, -0.5, 0.5, 5.0, 30.0] {
            let lhs = hyp1f1(a, b, z)?;
            let rhs = z.exp() * hyp1f1(b - a, b, -z)?;
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
    }
    Ok(worst)
}

pub fn check_kummer(params: &EnsembleParams) -> Result<(bool, String)> {
    let r = kummer_residual(params)?;
    Ok((r < KUMMER_TOL, format!("max relative residual {r:.2e}")))
}

/// Relative residual of
/// `∫₀^∞ λ^μ e^{−sλ} 1F1(a; b; cλ) dλ = Γ(μ+1) s^{−μ−1} 2F1(a, μ+1; b; c/s)`.
pub fn laplace_residual(mu: f64, s: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    let rate = s - c.max(0.0);
    let top = (60.0 + 4.0 * mu + 2.0 * (a - b).abs()) / rate;
    let exact = gamma(mu + 1.0)? * s.powf(-mu - 1.0) * hyp2f1(a, mu + 1.0, b, c / s)?;
    let tol = 1e-12 * exact.abs();
    let quad = integrate(|x| Ok(x.powf(mu) * (-s * x).exp() * hyp1f1(a, b, c * x)?), 0.0, top, tol)?;
    Ok(((quad - exact) / exact).abs())
}

/// The fixed case `(μ, s, a, b, c) = (5, 1, 3, 6, 3/4)` followed by
/// [`LAPLACE_DRAWS`] seeded random draws with `s > max(0, c)`.
pub fn laplace_cases() -> Vec<(f64, f64, f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(LAPLACE_SEED);
    let mut cases = vec![(5.0, 1.0, 3.0, 6.0, 0.75)];
    for _ in 0..LAPLACE_DRAWS {
        let mu = rng.random_range(0.0..6.0);
        let s = rng.random_range(0.5..2.0);
        let a = rng.random_range(0.5..4.0);
        let b = rng.random_range(0.5..8.0);
        let c = s * rng.random_range(-2.0..0.75);
        cases.push((mu, s, a, b, c));
    }
    cases
}

pub fn check_laplace() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (mu, s, a, b, c) in laplace_cases() {
        worst = worst.max(laplace_residual(mu, s, a, b, c)?);
    }
    Ok((worst < LAPLACE_TOL, format!("max relative residual {worst:.2e} over {} cases", LAPLACE_DRAWS + 1)))
}

/// Spreads each cluster of `profile` symmetrically by a relative `eps`:
/// `σ(1 + (k − (r−1)/2)·eps)` for `k = 0..r`.
pub fn spread_clusters(profile: &DegeneracyProfile, eps: f64) -> Vec<f64> {
    profile
        .clusters()
        .iter()
        .flat_map(|c| {
            let r = c.multiplicity as f64;
            (0..c.multiplicity).map(move |k| c.value * (1.0 + (f64::from(k) - 0.5 * (r - 1.0)) * eps))
        })
        .collect()
}

/// The non-degenerate marginal with spread clusters approaches the
/// derivative-column marginal. Non-degenerate inputs are first given a
/// double value by setting `σ_B2 = σ_B1`.
pub fn check_degenerate_limit(params: &EnsembleParams) -> Result<(bool, String)> {
    if params.n() == 1 {
        return Ok((true, "n = 1 has no repeated sigma_B values".into()));
    }
    let mut target = params.clone();
    let mut profile = target.detect_clusters(DEFAULT_CLUSTER_TOL);
    if !profile.is_degenerate() {
        let mut sb = params.sigma_b().to_vec();
        sb[1] = sb[0];
        target = params.with_sigma_b(sb)?;
        profile = target.detect_clusters(DEFAULT_CLUSTER_TOL);
    }
    let exact = MarginalDensity::with_profile(&target, &profile)?;
    let top = lambda_max(&target)?;
    let grid: Vec<f64> = (1..=8).map(|i| top * 0.06 * f64::from(i)).collect();
    let reference: Vec<f64> = grid.iter().map(|&x| exact.pdf(x)).collect::<Result<_>>()?;
    let peak = reference.iter().copied().fold(0.0, f64::max);
    let mut errs = Vec::new();
    for eps in SPREADS {
        let spread = MarginalDensity::nondegenerate(&target.with_sigma_b(spread_clusters(&profile, eps))?)?;
        let mut worst: f64 = 0.0;
        for (&x, &p) in grid.iter().zip(&reference) {
            worst = worst.max((spread.pdf(x)? - p).abs());
        }
        errs.push(worst / peak);
    }
    let (coarse, fine) = (errs[0], errs[1]);
    let order = (coarse / fine).log10() / (SPREADS[0] / SPREADS[1]).log10();
    let at_floor = fine < 1e-12;
    let passed = fine <= DEGENERATE_REL_TOL && (order >= 1.0 || at_floor);
    Ok((
        passed,
        format!("relative deviation {coarse:.2e} at spread {:e}, {fine:.2e} at {:e}, observed order {order:.2}", SPREADS[0], SPREADS[1]),
    ))
}
