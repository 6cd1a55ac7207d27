//! Confluent (`1F1`) and Gauss (`2F1`) hypergeometric functions of a real
//! argument, their derivatives and an elementary closed form for `1F1`.
//!
//! Every evaluation goes through a scaled power series that returns a
//! [`LogValue`], so `1F1` at arguments of several hundred stays representable.
//! Negative arguments are first mapped to positive ones (Kummer for `1F1`,
//! Pfaff for `2F1`), which keeps the summed series free of cancellation for
//! the parameter families that occur in the ensemble formulas.

use super::dd::Dd;
use super::gamma::pochhammer;
use super::hyper_dd::{hyp1f1_elementary_dd, series as series_dd};
use super::LogValue;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const TAIL_TOL: f64 = 1e-16;
const RESCALE_AT: f64 = 1e200;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Sum of `Σ_k Π(num_i)_k / Π(den_i)_k · z^k / k!` in scaled arithmetic.
///
/// Stops once the ratio bound on the remaining tail falls below
/// `TAIL_TOL` of the partial sum. Uses Neumaier compensated summation.
fn scaled_series(num: &[f64], den: &[f64], z: f64) -> Result<LogValue> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut scale = 0.0f64;
    // Factors pair up as (num_i + k)/(den_i + k); an unpaired den slot is the k! term.
    let monotone_from = num
        .iter()
        .chain(den)
        .map(|&p| if p < 0.0 { (-p).ceil() as usize + 1 } else { 0 })
        .max()
        .unwrap_or(0);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &a in num {
            ratio *= a + kf;
        }
        for &b in den {
            ratio /= b + kf;
        }
        term *= ratio;
        if term == 0.0 {
            return Ok(LogValue::from_f64(sum + comp) * LogValue::from_ln(scale));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if !sum.is_finite() || !term.is_finite() {
            return Err(Error::Numerical(format!(
                "hypergeometric series overflow at term {k} (num={num:?}, den={den:?}, z={z})"
            )));
        }
        if term.abs() > RESCALE_AT || sum.abs() > RESCALE_AT {
            term /= RESCALE_AT;
            sum /= RESCALE_AT;
            comp /= RESCALE_AT;
            scale += RESCALE_AT.ln();
        }
        if k + 1 >= monotone_from {
            // Bound every later term ratio: paired factors tend to 1 monotonically,
            // unpaired denominator slots only shrink the ratio further.
            let j = kf + 1.0;
            let mut bound = z.abs();
            for (i, slot) in den.iter().copied().chain(std::iter::once(1.0)).enumerate() {
                match num.get(i) {
                    Some(&a) => bound *= ((a + j).abs() / (slot + j).abs()).max(1.0),
                    None => bound /= (slot + j).abs(),
                }
            }
            if bound < 1.0 && term.abs() * bound / (1.0 - bound) <= TAIL_TOL * (sum + comp).abs() {
                return Ok(LogValue::from_f64(sum + comp) * LogValue::from_ln(scale));
            }
        }
    }
    Err(Error::Numerical(format!(
        "hypergeometric series did not converge in {MAX_TERMS} terms \
         (num={num:?}, den={den:?}, z={z}, last term={term:e}, partial sum={:e})",
        sum * scale.exp()
    )))
}

/// `1F1(a; b; z)` in log form.
pub fn hyp1f1_log(a: f64, b: f64, z: f64) -> Result<LogValue> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("1F1 requires b not a nonpositive integer, got b={b}")));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("1F1 arguments must be finite (a={a}, b={b}, z={z})")));
    }
    if z == 0.0 || a == 0.0 {
        return Ok(LogValue::ONE);
    }
    if z > 0.0 {
        scaled_series(&[a], &[b], z)
    } else {
        // Kummer: 1F1(a;b;z) = e^z 1F1(b-a;b;-z)
        Ok(LogValue::from_ln(z) * scaled_series(&[b - a], &[b], -z)?)
    }
}

/// Confluent hypergeometric function `1F1(a; b; z)`.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    finite(hyp1f1_log(a, b, z)?, "1F1")
}

/// `∂^k/∂z^k 1F1(a; b; z) = (a)_k/(b)_k · 1F1(a+k; b+k; z)`, in log form.
pub fn hyp1f1_deriv_log(k: u32, a: f64, b: f64, z: f64) -> Result<LogValue> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("1F1 requires b not a nonpositive integer, got b={b}")));
    }
    let kf = f64::from(k);
    let prefactor = LogValue::from_f64(pochhammer(a, k)) / LogValue::from_f64(pochhammer(b, k));
    if prefactor.is_zero() {
        return Ok(LogValue::ZERO);
    }
    Ok(prefactor * hyp1f1_log(a + kf, b + kf, z)?)
}

/// k-th derivative of `1F1` with respect to its argument.
pub fn hyp1f1_deriv(k: u32, a: f64, b: f64, z: f64) -> Result<f64> {
    finite(hyp1f1_deriv_log(k, a, b, z)?, "1F1 derivative")
}

/// `2F1(a, b; c; z)` in log form, for `z < 1`.
pub fn hyp2f1_log(a: f64, b: f64, c: f64, z: f64) -> Result<LogValue> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 requires c not a nonpositive integer, got c={c}")));
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("2F1 arguments must be finite (a={a}, b={b}, c={c}, z={z})")));
    }
    if z >= 1.0 {
        return Err(Error::Domain(format!("2F1 requires z < 1, got z={z}")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(LogValue::ONE);
    }
    if z > 0.0 {
        return scaled_series(&[a, b], &[c], z);
    }
    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)); the same with a <-> b.
    let w = z / (z - 1.0);
    let ln1mz = (-z).ln_1p();
    let variant = |p: f64, q: f64| -> Result<LogValue> {
        Ok(LogValue::from_ln(-p * ln1mz) * scaled_series(&[p, c - q], &[c], w)?)
    };
    // Prefer a variant whose terms are all positive (no cancellation); fall back
    // to a terminating one when the positive series is too slow.
    let positive = |p: f64, q: f64| p > 0.0 && c - q > 0.0 && c > 0.0;
    let mut order: Vec<(f64, f64)> = Vec::with_capacity(3);
    for (p, q) in [(a, b), (b, a)] {
        if positive(p, q) {
            order.push((p, q));
        }
    }
    if order.is_empty() {
        // every form alternates in sign: sum it in double-double, preferring
        // a terminating one
        let (p, q) = if is_nonpositive_integer(c - a) { (b, a) } else { (a, b) };
        let zd = Dd::from(z);
        let wd = zd / (zd - Dd::ONE);
        return Ok(LogValue::from_ln(-p * ln1mz) * series_dd(&[p, c - q], &[c], wd)?.to_log_value());
    }
    for (p, q) in [(a, b), (b, a)] {
        if is_nonpositive_integer(c - q) {
            order.push((p, q));
        }
    }
    order.push((a, b));
    let mut last_err = None;
    for (p, q) in order {
        match variant(p, q) {
            Ok(v) => return Ok(v),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one Pfaff variant is tried"))
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for `z < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    finite(hyp2f1_log(a, b, c, z)?, "2F1")
}

/// `∂^k/∂z^k 2F1(a,b;c;z) = (a)_k (b)_k/(c)_k · 2F1(a+k, b+k; c+k; z)`, in log form.
pub fn hyp2f1_deriv_log(k: u32, a: f64, b: f64, c: f64, z: f64) -> Result<LogValue> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 requires c not a nonpositive integer, got c={c}")));
    }
    let kf = f64::from(k);
    let prefactor = LogValue::from_f64(pochhammer(a, k))
        * LogValue::from_f64(pochhammer(b, k))
        / LogValue::from_f64(pochhammer(c, k));
    if prefactor.is_zero() {
        return Ok(LogValue::ZERO);
    }
    Ok(prefactor * hyp2f1_log(a + kf, b + kf, c + kf, z)?)
}

/// k-th derivative of `2F1` with respect to its argument.
pub fn hyp2f1_deriv(k: u32, a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    finite(hyp2f1_deriv_log(k, a, b, c, z)?, "2F1 derivative")
}

/// `1F1(α; α + n_A; z)` for integer `α ≥ 1` written with elementary functions
/// and lower incomplete gamma functions:
///
/// `(-z)^{-α} / B(α, n_A) · Σ_{k<n_A} binom(n_A-1, k) z^{-k} γ(α+k, -z)`.
///
/// For `α = 1` this is `n_A! z^{-n_A} (e^z - Σ_{k<n_A} z^k/k!)`. The sum is
/// evaluated in double-double arithmetic for `z < 0`, and positive `z` is
/// first mapped to `e^z 1F1(n_A; α+n_A; −z)`. This path shares no code with
/// [`hyp1f1`] and serves as a cross-check.
pub fn hyp1f1_elementary(alpha: u32, n_a: u32, z: f64) -> Result<f64> {
    if alpha == 0 || n_a == 0 {
        return Err(Error::Domain(format!(
            "elementary 1F1 form needs alpha >= 1 and n_A >= 1 (alpha={alpha}, n_A={n_a})"
        )));
    }
    if z == 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("elementary 1F1 form needs finite z != 0, got {z}")));
    }
    let v = hyp1f1_elementary_dd(alpha, n_a, Dd::from(z))?.to_f64();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("elementary 1F1({alpha}; {}; {z}) overflows f64", alpha + n_a)))
    }
}

fn finite(v: LogValue, what: &str) -> Result<f64> {
    let x = v.to_f64();
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numerical(format!("{what} overflows f64 ({v:?}); use the log form")))
    }
}
