//! Runs the self-test battery on every fixture.
//!
//!     cargo run --release --example self_check

use wishart_sum::check::run_checks;
use wishart_sum::ensemble::EnsembleParams;

fn main() -> wishart_sum::Result<()> {
    let mut failed = 0;
    for name in ["fig1", "fig2", "fig3"] {
        let params = EnsembleParams::from_json_file(format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR")))?;
        println!("{name}: {params}");
        for outcome in run_checks(&params) {
            failed += usize::from(!outcome.passed);
            println!("  {outcome}");
        }
    }
    std::process::exit(i32::from(failed > 0));
}
