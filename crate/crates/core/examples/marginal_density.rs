//! Marginal eigenvalue density for the nine-variance fixture, printed as CSV.
//!
//!     cargo run --release --example marginal_density > fig2.csv

use wishart_sum::analytic::{integrate_density, linspace, marginal_curve, mean_eigenvalue, MarginalDensity};
use wishart_sum::ensemble::EnsembleParams;

fn main() -> wishart_sum::Result<()> {
    let params = EnsembleParams::from_json_file(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig2.json"))?;
    let curve = marginal_curve(&params, &linspace(0.0, 80.0, 400))?;
    curve.write_csv(std::io::stdout().lock())?;

    let density = MarginalDensity::new(&params)?;
    let total = integrate_density(&params, |x| density.pdf_or_zero(x))?;
    eprintln!("{params}");
    eprintln!("integral of p: {total:.12}");
    eprintln!("mean eigenvalue: {:.10} (exact {:.10})", mean_eigenvalue(&params)?, params.mean_eigenvalue_exact());
    Ok(())
}
