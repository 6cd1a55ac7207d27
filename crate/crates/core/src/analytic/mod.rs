//! Exact eigenvalue densities of `H = AA† + BB†`.
//!
//! * [`JointDensity`] / [`joint_pdf`]: density of all `n` eigenvalues.
//! * [`MarginalDensity`] / [`marginal_pdf`]: density of one eigenvalue, as an
//!   `(n+1)`-dimensional bordered determinant.
//! * Repeated `σ_B` values switch both to derivative columns
//!   ([`marginal_pdf_degenerate`]); the `new` constructors do this
//!   automatically.
//! * [`lue_marginal_reference`]: the equal-covariance density by an
//!   unrelated route, for testing.
//! * [`integrate_density`]: quadrature over `[0, ∞)`.
//!
//! Entries, determinants and normalizations are computed in double-double
//! arithmetic with a separate binary exponent and rounded to `f64` at the end.

mod columns;
mod curve;
mod joint;
mod lue;
mod marginal;
pub mod quadrature;

pub use curve::{linspace, DensityCurve, JointDensityGrid};
pub use joint::{joint_grid, joint_log_norm, joint_pdf, JointDensity};
pub use lue::lue_marginal_reference;
pub use marginal::{marginal_curve, marginal_pdf, marginal_pdf_degenerate, mean_eigenvalue, MarginalDensity};
pub use quadrature::{integrate, integrate_density, lambda_max};

use crate::error::{Error, Result};

/// Densities between this and zero are rounding noise and are clamped.
pub const NEGATIVE_FLOOR: f64 = -1e-13;

/// Largest 1-norm condition number accepted for the equilibrated `h` and
/// normalization matrices. Double-double carries about 32 digits, so this
/// leaves roughly 10 correct digits.
pub const MAX_CONDITION: f64 = 1e22;

pub(crate) fn apply_floor(v: f64, what: &str) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v > NEGATIVE_FLOOR {
        Ok(0.0)
    } else if v.is_nan() {
        Err(Error::Numerical(format!("{what} evaluated to NaN")))
    } else {
        Err(Error::Numerical(format!("{what} evaluated to {v:e}, below the rounding floor")))
    }
}

pub(crate) fn check_conditioning(what: &str, condition: f64) -> Result<()> {
    if !(condition <= MAX_CONDITION) {
        Err(Error::Conditioning(format!(
            "{what} matrix is numerically singular (condition number {condition:.1e}); \
             sigma_B values are nearly equal, use the degenerate form"
        )))
    } else {
        Ok(())
    }
}
