#![allow(dead_code)]

use wishart_sum::ensemble::EnsembleParams;

pub fn fixture(name: &str) -> EnsembleParams {
    EnsembleParams::from_json_file(format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn unit() -> EnsembleParams {
    EnsembleParams::new(1, 1, 1, 1.0, vec![1.0]).unwrap()
}

/// Neville extrapolation to `ε = 0` of values taken at `eps`.
pub fn richardson(eps: &[f64], values: &[f64]) -> f64 {
    let mut t = values.to_vec();
    for k in 1..t.len() {
        for i in (k..t.len()).rev() {
            t[i] = (eps[i - k] * t[i] - eps[i] * t[i - 1]) / (eps[i - k] - eps[i]);
        }
    }
    t[t.len() - 1]
}

/// Fourth-order central difference of `f` at `x`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub mod oracle {
    //! Hypergeometric series in 256-bit floating point.
    use astro_float::{BigFloat, RoundingMode};

    const P: usize = 256;
    const RM: RoundingMode = RoundingMode::ToEven;

    fn big(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    /// `Σ_k Π(num)_k / Π(den)_k · z^k / k!` summed until terms drop below
    /// `2^-300` of the running sum.
    pub fn pfq(num: &[f64], den: &[f64], z: f64) -> f64 {
        let z = big(z);
        let mut term = big(1.0);
        let mut sum = big(1.0);
        let tiny = big(2f64.powi(-300));
        for k in 0..100_000u32 {
            let kf = big(f64::from(k));
            let mut ratio = z.clone();
            for &a in num {
                ratio = ratio.mul(&big(a).add(&kf, P, RM), P, RM);
            }
            let mut d = kf.add(&big(1.0), P, RM);
            for &b in den {
                d = d.mul(&big(b).add(&kf, P, RM), P, RM);
            }
            term = term.mul(&ratio, P, RM).div(&d, P, RM);
            sum = sum.add(&term, P, RM);
            if term.is_zero() || (k > 10 && term.abs().cmp(&sum.abs().mul(&tiny, P, RM)).unwrap_or(1) < 0) {
                break;
            }
        }
        sum.to_string().parse().unwrap()
    }
}
