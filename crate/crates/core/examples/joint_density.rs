//! Joint density of the two eigenvalues for the n = 2 fixture on a square grid.
//!
//!     cargo run --release --example joint_density > fig1.csv

use wishart_sum::analytic::{joint_grid, joint_log_norm, joint_pdf, linspace};
use wishart_sum::ensemble::EnsembleParams;

fn main() -> wishart_sum::Result<()> {
    let params = EnsembleParams::from_json_file(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1.json"))?;
    let axis = linspace(0.0, 40.0, 81);
    let grid = joint_grid(&params, &axis, &axis)?;
    grid.write_csv(std::io::stdout().lock())?;

    let c = joint_log_norm(&params)?;
    eprintln!("ln|C| = {:.12}, sign {}", c.log_abs(), c.sign());
    eprintln!("P(3, 7) = {:.15e}", joint_pdf(&params, &[3.0, 7.0])?);
    eprintln!("P(7, 3) = {:.15e}", joint_pdf(&params, &[7.0, 3.0])?);
    eprintln!("largest asymmetry on the grid: {:.1e}", grid.max_asymmetry().unwrap_or(0.0));
    Ok(())
}
