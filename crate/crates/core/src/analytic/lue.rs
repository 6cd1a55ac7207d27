use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// Marginal eigenvalue density of an `n × n` complex Wishart matrix with
/// `dof` degrees of freedom and covariance `σ·𝟙` (Laguerre unitary ensemble).
///
/// Uses the Christoffel–Darboux kernel on the diagonal,
/// `p₁(x) = (1/n) Σ_{k<n} k!/Γ(k+a+1) · x^a e^{−x} · L_k^{(a)}(x)²`, with
/// `a = dof − n`, then rescales `p(λ) = p₁(λ/σ)/σ`. Shares no code with the
/// determinantal formulas.
pub fn lue_marginal_reference(n: u32, dof: u32, sigma: f64, lambda: f64) -> Result<f64> {
    if n == 0 || dof < n {
        return Err(Error::Dimension(format!("LUE needs dof >= n >= 1, got n={n}, dof={dof}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("LUE scale must be positive, got {sigma}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("LUE density needs lambda > 0, got {lambda}")));
    }
    let a = f64::from(dof - n);
    let x = lambda / sigma;
    let ln_w = a * x.ln() - x;
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 0.0;
    for k in 0..n {
        let kf = f64::from(k);
        let ln_coef = ln_gamma(kf + 1.0)? - ln_gamma(kf + a + 1.0)?;
        sum += (ln_w + ln_coef).exp() * cur * cur;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(sum / f64::from(n) / sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_eigenvalue_is_gamma() {
        assert_relative_eq!(lue_marginal_reference(1, 2, 1.0, 1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
        let x: f64 = 2.7;
        let want = x.powi(4) * (-x).exp() / 24.0;
        assert_relative_eq!(lue_marginal_reference(1, 5, 1.0, x).unwrap(), want, max_relative = 1e-13);
        // scale
        assert_relative_eq!(
            lue_marginal_reference(1, 5, 2.0, 2.0 * x).unwrap(),
            want / 2.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn two_by_two_closed_form() {
        // n=2, a=0: p = (1/2) e^{-x} (1 + (1-x)^2)
        let x: f64 = 3.0;
        let want = 0.5 * (-x).exp() * (1.0 + (1.0 - x).powi(2));
        assert_relative_eq!(lue_marginal_reference(2, 2, 1.0, x).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn invalid() {
        assert!(matches!(lue_marginal_reference(3, 2, 1.0, 1.0), Err(Error::Dimension(_))));
        assert!(matches!(lue_marginal_reference(1, 2, 1.0, 0.0), Err(Error::Domain(_))));
    }
}
