//! Repeated variances: the derivative-column marginal and its limit from
//! slightly split variances.
//!
//!     cargo run --release --example degenerate_marginal

use wishart_sum::analytic::{integrate_density, MarginalDensity};
use wishart_sum::check::spread_clusters;
use wishart_sum::ensemble::{EnsembleParams, DEFAULT_CLUSTER_TOL};

fn main() -> wishart_sum::Result<()> {
    let params = EnsembleParams::from_json_file(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig3.json"))?;
    let profile = params.detect_clusters(DEFAULT_CLUSTER_TOL);
    println!("{params}");
    println!("clusters: {:?}", profile.clusters());

    let exact = MarginalDensity::new(&params)?;
    println!("integral of p: {:.12}", integrate_density(&params, |x| exact.pdf_or_zero(x))?);

    println!("{:>6} {:>20} {:>12} {:>12} {:>12}", "lambda", "p(lambda)", "eps=1e-2", "eps=1e-3", "eps=1e-4");
    let split: Vec<MarginalDensity> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps| MarginalDensity::nondegenerate(&params.with_sigma_b(spread_clusters(&profile, eps))?))
        .collect::<wishart_sum::Result<_>>()?;
    for x in [2.0, 5.0, 10.0, 15.0, 25.0] {
        let p = exact.pdf(x)?;
        let diffs: Vec<String> = split.iter().map(|d| Ok(format!("{:12.3e}", d.pdf(x)? - p))).collect::<wishart_sum::Result<_>>()?;
        println!("{x:6} {p:20.15e} {}", diffs.join(" "));
    }
    Ok(())
}
