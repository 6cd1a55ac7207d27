//! Double-double versions of the hypergeometric kernels used by the density
//! formulas. Parameters are `f64` values taken as exact; the ensemble only
//! produces small integers.

use super::dd::{Dd, ScaledDd};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const TAIL_TOL: f64 = 1e-33;
const RESCALE_POW2: i64 = 600;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn is_integer(x: f64) -> bool {
    x.is_finite() && x == x.floor()
}

/// `Σ_k Π(num_i)_k / Π(den_i)_k · z^k / k!` with a running power-of-two rescale.
pub(crate) fn series(num: &[f64], den: &[f64], z: Dd) -> Result<ScaledDd> {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut scale = 0i64;
    let limit = 2f64.powi(RESCALE_POW2 as i32);
    let zf = z.to_f64();
    let monotone_from = num
        .iter()
        .chain(den)
        .map(|&p| if p < 0.0 { (-p).ceil() as usize + 1 } else { 0 })
        .max()
        .unwrap_or(0);
    for k in 0..MAX_TERMS {
        let kf = Dd::from(k as f64);
        let mut numer = z;
        for &a in num {
            numer = numer * (Dd::from(a) + kf);
        }
        let mut denom = kf + Dd::ONE;
        for &b in den {
            denom = denom * (Dd::from(b) + kf);
        }
        term = term * numer / denom;
        if term.is_zero() {
            return Ok(ScaledDd::from_dd(sum).mul_pow2(scale));
        }
        sum = sum + term;
        if !sum.is_finite() {
            return Err(Error::Numerical(format!(
                "extended hypergeometric series overflow at term {k} (num={num:?}, den={den:?}, z={zf})"
            )));
        }
        if sum.hi().abs() > limit || term.hi().abs() > limit {
            term = term.mul_pow2(-RESCALE_POW2);
            sum = sum.mul_pow2(-RESCALE_POW2);
            scale += RESCALE_POW2;
        }
        if k + 1 >= monotone_from {
            let j = k as f64 + 1.0;
            let mut bound = zf.abs();
            for (i, slot) in den.iter().copied().chain(std::iter::once(1.0)).enumerate() {
                match num.get(i) {
                    Some(&a) => bound *= ((a + j).abs() / (slot + j).abs()).max(1.0),
                    None => bound /= (slot + j).abs(),
                }
            }
            if bound < 1.0 && term.hi().abs() * bound / (1.0 - bound) <= TAIL_TOL * sum.hi().abs() {
                return Ok(ScaledDd::from_dd(sum).mul_pow2(scale));
            }
        }
    }
    Err(Error::Numerical(format!(
        "extended hypergeometric series did not converge in {MAX_TERMS} terms (num={num:?}, den={den:?}, z={zf})"
    )))
}

/// `1F1(a; b; z)`; negative arguments go through Kummer's transformation.
pub fn hyp1f1_dd(a: f64, b: f64, z: Dd) -> Result<ScaledDd> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("1F1 requires b not a nonpositive integer, got b={b}")));
    }
    if !z.is_finite() || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("1F1 arguments must be finite".into()));
    }
    if z.is_zero() || a == 0.0 {
        return Ok(ScaledDd::ONE);
    }
    if z.hi() < 0.0 && !is_nonpositive_integer(a) {
        Ok(ScaledDd::exp(z) * series(&[b - a], &[b], -z)?)
    } else {
        series(&[a], &[b], z)
    }
}

/// `∂^k/∂z^k 1F1(a; b; z) = (a)_k/(b)_k · 1F1(a+k; b+k; z)`.
pub fn hyp1f1_deriv_dd(k: u32, a: f64, b: f64, z: Dd) -> Result<ScaledDd> {
    if k == 0 {
        return hyp1f1_dd(a, b, z);
    }
    let pre = Dd::pochhammer(a, k) / Dd::pochhammer(b, k);
    if pre.is_zero() {
        return Ok(ScaledDd::ZERO);
    }
    let kf = f64::from(k);
    Ok(hyp1f1_dd(a + kf, b + kf, z)? * pre)
}

/// `2F1(a, b; c; z)` for `z < 1`, given both `z` and `1 − z` so that neither
/// suffers cancellation.
///
/// Prefers a Pfaff form that terminates, then the direct series for
/// `0 < z < 1`, then a Pfaff form with positive terms. The Pfaff prefactor
/// `(1 − z)^{−p}` needs an integer `p`.
pub fn hyp2f1_dd(a: f64, b: f64, c: f64, z: Dd, one_minus_z: Dd) -> Result<ScaledDd> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 requires c not a nonpositive integer, got c={c}")));
    }
    if !(one_minus_z.hi() > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("2F1 requires z < 1, got z={}", z.to_f64())));
    }
    if z.is_zero() || a == 0.0 || b == 0.0 {
        return Ok(ScaledDd::ONE);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(&[a, b], &[c], z);
    }
    let w = -(z / one_minus_z);
    let pfaff = |p: f64, q: f64| -> Result<ScaledDd> {
        Ok(ScaledDd::from_dd(one_minus_z).powi(-(p as i32)) * series(&[p, c - q], &[c], w)?)
    };
    for (p, q) in [(a, b), (b, a)] {
        if is_nonpositive_integer(c - q) && is_integer(p) {
            return pfaff(p, q);
        }
    }
    if z.hi() > 0.0 {
        return series(&[a, b], &[c], z);
    }
    for (p, q) in [(a, b), (b, a)] {
        if p > 0.0 && c - q > 0.0 && c > 0.0 && is_integer(p) {
            return pfaff(p, q);
        }
    }
    Err(Error::Domain(format!(
        "extended-precision 2F1({a}, {b}; {c}; z<0) needs an integer Pfaff exponent"
    )))
}

/// `∂^k/∂z^k 2F1 = (a)_k (b)_k/(c)_k · 2F1(a+k, b+k; c+k; z)`.
pub fn hyp2f1_deriv_dd(k: u32, a: f64, b: f64, c: f64, z: Dd, one_minus_z: Dd) -> Result<ScaledDd> {
    if k == 0 {
        return hyp2f1_dd(a, b, c, z, one_minus_z);
    }
    let pre = Dd::pochhammer(a, k) * Dd::pochhammer(b, k) / Dd::pochhammer(c, k);
    if pre.is_zero() {
        return Ok(ScaledDd::ZERO);
    }
    let kf = f64::from(k);
    Ok(hyp2f1_dd(a + kf, b + kf, c + kf, z, one_minus_z)? * pre)
}

/// Lower incomplete gamma `γ(a, x)` for `x > 0` as `x^a e^{−x} Σ_j x^j/(a)_{j+1}`.
fn lower_gamma_dd(a: f64, x: Dd) -> Result<ScaledDd> {
    let sum = series(&[1.0], &[a + 1.0], x)?;
    Ok(ScaledDd::from_dd(x).powi(a as i32) * ScaledDd::exp(-x) * sum / ScaledDd::from_f64(a))
}

/// `1F1(α; α + n; z)` from incomplete gamma functions,
/// `(−z)^{−α}/B(α, n) · Σ_{k<n} binom(n−1, k) z^{−k} γ(α+k, −z)`, for `z < 0`.
/// Positive `z` goes through `e^z 1F1(n; α + n; −z)` first, which keeps the
/// alternating sum from cancelling.
pub(crate) fn hyp1f1_elementary_dd(alpha: u32, n: u32, z: Dd) -> Result<ScaledDd> {
    if z.hi() > 0.0 {
        return Ok(ScaledDd::exp(z) * hyp1f1_elementary_dd(n, alpha, -z)?);
    }
    let x = -z;
    let af = f64::from(alpha);
    let factorial = |k: u32| -> ScaledDd { (2..=k).map(|i| ScaledDd::from_f64(f64::from(i))).product() };
    let inv_beta = factorial(alpha + n - 1) / (factorial(alpha - 1) * factorial(n - 1));
    let mut sum = ScaledDd::ZERO;
    let mut binom = Dd::ONE;
    let inv_x = Dd::ONE / x;
    let mut power = Dd::ONE;
    for k in 0..n {
        if k > 0 {
            binom = binom.mul_f64(f64::from(n - k)) / Dd::from(f64::from(k));
            power = -(power * inv_x);
        }
        sum = sum.add(lower_gamma_dd(af + f64::from(k), x)? * (binom * power));
    }
    Ok(ScaledDd::from_dd(inv_x).powi(alpha as i32) * inv_beta * sum)
}
