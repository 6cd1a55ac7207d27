//! Samples spectra, bins them and compares with the analytic marginal.
//!
//!     cargo run --release --example monte_carlo -- 100000

use wishart_sum::analytic::marginal_curve;
use wishart_sum::ensemble::EnsembleParams;
use wishart_sum::sampler::{compare, run, SampleConfig};

fn main() -> wishart_sum::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let workers = std::thread::available_parallelism().map_or(1, usize::from);
    for name in ["fig1", "fig2", "fig3"] {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let params = EnsembleParams::from_json_file(path)?;
        let hist = run(&params, &SampleConfig::new(samples, 42, workers, None)?)?;
        let edges = hist.edges();
        let grid: Vec<f64> = edges
            .windows(2)
            .flat_map(|w| (0..8).map(move |k| w[0] + (w[1] - w[0]) * f64::from(k) / 8.0))
            .chain(edges.last().copied())
            .collect();
        let report = compare(&hist, &marginal_curve(&params, &grid)?);
        println!(
            "{name}: {} bins, sample mean {:.4} (exact {:.4}), chi-square {:.1} on {} bins, p = {:.3}, max |residual| {:.2}",
            hist.num_bins(),
            hist.mean().unwrap_or(f64::NAN),
            params.mean_eigenvalue_exact(),
            report.chi_square,
            report.dof,
            report.p_value,
            report.max_abs_residual
        );
    }
    Ok(())
}
