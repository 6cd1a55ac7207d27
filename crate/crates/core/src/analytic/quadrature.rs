//! Adaptive panel Gauss–Legendre quadrature on finite intervals, plus the
//! truncation point used to integrate eigenvalue densities over `[0, ∞)`.

use std::sync::OnceLock;

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::specfun::gamma_q;

const GL_ORDER: usize = 20;
const INITIAL_PANELS: usize = 8;
const MAX_DEPTH: u32 = 40;
const MAX_INTERVALS: usize = 200_000;

/// Truncation target for the gamma-tail envelope.
pub const TAIL_MASS: f64 = 1e-12;

/// Default absolute accuracy of [`integrate_density`].
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn legendre_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`
/// (Newton iteration on `P_n` from Chebyshev starting guesses).
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let rule = legendre_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        s += w * f(mid + half * x)?;
    }
    Ok(s * half)
}

/// `∫_a^b f` to absolute accuracy `abs_tol` by recursive bisection of
/// Gauss–Legendre panels.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(b > a) {
        return if a == b { Ok(0.0) } else { Err(Error::Domain(format!("integrate: need a <= b, got [{a}, {b}]"))) };
    }
    let width = b - a;
    let h = width / INITIAL_PANELS as f64;
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    for i in (0..INITIAL_PANELS).rev() {
        let lo = a + h * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { a + h * (i + 1) as f64 };
        stack.push((lo, hi, panel(&mut f, lo, hi)?, 0));
    }
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut visited = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        visited += 1;
        if visited > MAX_INTERVALS {
            return Err(Error::Numerical(format!(
                "quadrature on [{a}, {b}] did not converge within {MAX_INTERVALS} panels"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let left = panel(&mut f, lo, mid)?;
        let right = panel(&mut f, mid, hi)?;
        let refined = left + right;
        let local_tol = abs_tol * (hi - lo) / width;
        if (refined - whole).abs() <= local_tol || (refined - whole).abs() <= 1e-15 * refined.abs() {
            let y = refined - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        } else if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "quadrature panel [{lo}, {hi}] still unresolved at depth {MAX_DEPTH}"
            )));
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::Numerical("quadrature produced a non-finite value".into()));
    }
    Ok(total)
}

/// Smallest `λ` at which the gamma envelope `Γ(m+n, λr)/Γ(m+n)` drops below
/// [`TAIL_MASS`], with `r` the slowest decay rate of the ensemble.
pub fn lambda_max(params: &EnsembleParams) -> Result<f64> {
    let shape = f64::from(params.m() + params.n());
    let rate = params.min_rate();
    let mut hi = shape.max(1.0);
    while gamma_q(shape, hi)? >= TAIL_MASS {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_q(shape, mid)? < TAIL_MASS {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(hi / rate)
}

/// `∫_0^∞ f(λ) dλ` for a density of the ensemble, truncated at [`lambda_max`].
pub fn integrate_density<F: FnMut(f64) -> Result<f64>>(params: &EnsembleParams, f: F) -> Result<f64> {
    integrate(f, 0.0, lambda_max(params)?, DEFAULT_ABS_TOL)
}
