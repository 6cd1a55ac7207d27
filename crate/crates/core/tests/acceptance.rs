//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::Instant;

use common::{central_difference, fixture, richardson, unit};
use wishart_sum::analytic::*;
use wishart_sum::check::{kummer_residual, laplace_cases, laplace_residual, spread_clusters};
use wishart_sum::ensemble::{EnsembleParams, DEFAULT_CLUSTER_TOL};
use wishart_sum::error::Result;
use wishart_sum::sampler::{self, compare, SampleConfig};
use wishart_sum::specfun::{hyp1f1_deriv, hyp2f1_deriv};

const FIXTURES: [&str; 3] = ["fig1", "fig2", "fig3"];

type Outcome = Result<(bool, String)>;

fn normalization() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in FIXTURES {
        let start = Instant::now();
        let p = fixture(name);
        let d = MarginalDensity::new(&p)?;
        let total = integrate_density(&p, |x| d.pdf_or_zero(x))?;
        let secs = start.elapsed().as_secs_f64();
        let err = (total - 1.0).abs();
        ok &= err <= 1e-6 && secs < 10.0;
        notes.push(format!("{name} |1-I|={err:.1e} in {secs:.2}s"));
    }
    Ok((ok, notes.join(", ")))
}

fn mean_identity() -> Outcome {
    let mut ok = (fixture("fig1").mean_eigenvalue_exact() - 23.0).abs() < 1e-12;
    let mut notes = Vec::new();
    for name in FIXTURES {
        let p = fixture(name);
        let exact = p.mean_eigenvalue_exact();
        let rel = ((mean_eigenvalue(&p)? - exact) / exact).abs();
        ok &= rel <= 1e-6;
        notes.push(format!("{name} rel={rel:.1e}"));
    }
    Ok((ok, notes.join(", ")))
}

fn monte_carlo() -> Outcome {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut ok = true;
    let mut notes = Vec::new();
    for (i, name) in FIXTURES.iter().enumerate() {
        let start = Instant::now();
        let p = fixture(name);
        let hist = sampler::run(&p, &SampleConfig::new(100_000, 1000 + i as u64, workers, None)?)?;
        let mut grid = Vec::new();
        for w in hist.edges().windows(2) {
            grid.extend((0..8).map(|k| w[0] + (w[1] - w[0]) * f64::from(k) / 8.0));
        }
        grid.extend(hist.edges().last());
        let report = compare(&hist, &marginal_curve(&p, &grid)?);
        let worst = report
            .bins
            .iter()
            .filter(|b| b.expected_count >= 50.0)
            .fold(0.0f64, |m, b| m.max(b.residual.abs()));
        let secs = start.elapsed().as_secs_f64();
        ok &= worst < 4.0 && secs < 60.0;
        notes.push(format!("{name} max|r|={worst:.2} in {secs:.1}s"));
    }
    Ok((ok, notes.join(", ")))
}

fn closed_form_anchor() -> Outcome {
    let d = MarginalDensity::new(&unit())?;
    let mut worst: f64 = 0.0;
    for x in [0.1, 1.0, 5.0] {
        worst = worst.max((d.pdf(x)? - x * (-x).exp()).abs());
    }
    Ok((worst <= 1e-12, format!("max |p - x e^-x| = {worst:.1e}")))
}

fn equal_covariance() -> Outcome {
    let p = EnsembleParams::isotropic(3, 4, 5, 1.0, 1.0)?;
    let d = MarginalDensity::new(&p)?;
    let mut worst: f64 = 0.0;
    for x in linspace(0.05, 30.0, 60) {
        worst = worst.max((d.pdf(x)? - lue_marginal_reference(3, 9, 1.0, x)?).abs());
    }
    Ok((worst <= 1e-8, format!("max deviation from the Laguerre kernel {worst:.1e}")))
}

fn degenerate_limit() -> Outcome {
    let p = fixture("fig3");
    let profile = p.detect_clusters(DEFAULT_CLUSTER_TOL);
    let exact = MarginalDensity::with_profile(&p, &profile)?;
    let eps = [1e-4, 1e-5, 1e-6];
    let split = eps
        .iter()
        .map(|&e| MarginalDensity::nondegenerate(&p.with_sigma_b(spread_clusters(&profile, e))?))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for x in linspace(0.5, 40.0, 20) {
        let values = split.iter().map(|d| d.pdf(x)).collect::<Result<Vec<_>>>()?;
        worst = worst.max((richardson(&eps, &values) - exact.pdf(x)?).abs());
    }
    Ok((worst <= 1e-6, format!("max |extrapolated - degenerate| = {worst:.1e}")))
}

fn joint_marginal_consistency() -> Outcome {
    let p = fixture("fig1");
    let top = lambda_max(&p)?;
    let joint = JointDensity::new(&p)?;
    let marginal = MarginalDensity::new(&p)?;
    let mut worst: f64 = 0.0;
    for x in linspace(1.0, 60.0, 20) {
        let f = |y: f64| if y <= 0.0 || y == x { Ok(0.0) } else { joint.pdf(&[x, y]) };
        let q = integrate(f, 0.0, x, 1e-12)? + integrate(f, x, top, 1e-12)?;
        worst = worst.max((q - marginal.pdf(x)?).abs());
    }
    Ok((worst <= 1e-6, format!("max |int P dl2 - p| = {worst:.1e}")))
}

fn special_functions() -> Outcome {
    let mut kummer: f64 = 0.0;
    for name in FIXTURES {
        kummer = kummer.max(kummer_residual(&fixture(name))?);
    }
    let mut laplace: f64 = 0.0;
    for (mu, s, a, b, c) in laplace_cases() {
        laplace = laplace.max(laplace_residual(mu, s, a, b, c)?);
    }
    let mut deriv: f64 = 0.0;
    for name in FIXTURES {
        let p = fixture(name);
        let (a, g, m) = (f64::from(p.alpha()), f64::from(p.gamma()), f64::from(p.m()));
        for k in 1..4u32 {
            for z in [-8.0, -1.5, 0.3, 2.0] {
                let fd = central_difference(|x| hyp1f1_deriv(k - 1, a, g, x).unwrap(), z, 1e-3);
                let exact = hyp1f1_deriv(k, a, g, z)?;
                deriv = deriv.max((fd - exact).abs() / exact.abs().max(1.0));
            }
            for z in [-5.0, -0.6, 0.2, 0.5] {
                let b = m + 2.0;
                let fd = central_difference(|x| hyp2f1_deriv(k - 1, a, b, g, x).unwrap(), z, 1e-4);
                let exact = hyp2f1_deriv(k, a, b, g, z)?;
                deriv = deriv.max((fd - exact).abs() / exact.abs().max(1.0));
            }
        }
    }
    Ok((
        kummer < 1e-10 && laplace < 1e-8 && deriv < 1e-6,
        format!("Kummer {kummer:.1e}, Laplace {laplace:.1e}, derivatives {deriv:.1e}"),
    ))
}

fn determinism() -> Outcome {
    let p = fixture("fig2");
    let edges = linspace(0.0, lambda_max(&p)?, 121);
    let csv = |workers: usize| -> Result<String> {
        Ok(sampler::run(&p, &SampleConfig::new(20_000, 77, workers, Some(edges.clone()))?)?.to_csv_string())
    };
    let (a, b, c) = (csv(1)?, csv(1)?, csv(4)?);
    let curve = |_: ()| -> Result<String> { Ok(marginal_curve(&p, &linspace(0.0, 80.0, 200))?.to_csv_string()) };
    let same_curve = curve(())? == curve(())?;
    Ok((a == b && a == c && same_curve, format!("repeat identical: {}, workers 1 vs 4 identical: {}, curve identical: {same_curve}", a == b, a == c)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 normalization", normalization),
        ("2 mean identity", mean_identity),
        ("3 Monte Carlo agreement", monte_carlo),
        ("4 closed-form anchor", closed_form_anchor),
        ("5 equal-covariance reduction", equal_covariance),
        ("6 degenerate limit", degenerate_limit),
        ("7 joint/marginal consistency", joint_marginal_consistency),
        ("8 special-function identities", special_functions),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("{} criterion {name}: {detail}", if passed { "PASS" } else { "FAIL" });
        failed += usize::from(!passed);
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
