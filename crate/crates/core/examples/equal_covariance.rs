//! With all variances equal the sum is a single complex Wishart matrix; the
//! marginal then agrees with the Laguerre-ensemble density.
//!
//!     cargo run --release --example equal_covariance

use wishart_sum::analytic::{lue_marginal_reference, MarginalDensity};
use wishart_sum::ensemble::EnsembleParams;

fn main() -> wishart_sum::Result<()> {
    let (n, n_a, n_b, sigma) = (3, 4, 5, 1.5);
    let params = EnsembleParams::isotropic(n, n_a, n_b, sigma, sigma)?;
    let density = MarginalDensity::new(&params)?;
    println!("{:>6} {:>22} {:>22} {:>10}", "lambda", "sum of Wishart", "Laguerre ensemble", "rel diff");
    for x in [0.5, 2.0, 5.0, 10.0, 20.0, 35.0] {
        let p = density.pdf(x)?;
        let q = lue_marginal_reference(n, n_a + n_b, sigma, x)?;
        println!("{x:6} {p:22.15e} {q:22.15e} {:10.1e}", (p - q).abs() / q);
    }
    Ok(())
}
