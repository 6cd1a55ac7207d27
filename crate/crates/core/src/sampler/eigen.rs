//! Eigenvalues of small complex Hermitian matrices: Householder reduction to
//! a real tridiagonal matrix followed by implicit-shift QL.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`hermitian_eigenvalues`].
pub const MAX_DIM: usize = 64;

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues of the Hermitian matrix `h` (row-major, `h[i][j]`), ascending.
pub fn hermitian_eigenvalues(h: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = h.len();
    if n > MAX_DIM {
        return Err(Error::Dimension(format!("eigensolver supports n <= {MAX_DIM}, got {n}")));
    }
    if h.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("matrix must be square".into()));
    }
    let scale = h.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    for i in 0..n {
        for j in 0..=i {
            if (h[i][j] - h[j][i].conj()).norm() > HERMITIAN_TOL * scale {
                return Err(Error::Domain(format!("matrix is not Hermitian at ({i}, {j})")));
            }
        }
    }
    let mut a: Vec<Vec<Complex64>> = h.to_vec();
    let (mut d, mut e) = tridiagonalize(&mut a);
    tql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Reduces `a` in place to tridiagonal form and returns the diagonal and the
/// moduli of the subdiagonal (`e[i]` couples `i` and `i+1`). A diagonal
/// unitary similarity makes the subdiagonal real, so only moduli matter.
fn tridiagonalize(a: &mut [Vec<Complex64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for i in k + 1..n {
            v[i] = a[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // A <- A - v q† - q v†, q = p - (τ/2)(v†p) v, p = τ A v
        let p: Vec<Complex64> = (0..n).map(|i| (k + 1..n).map(|j| a[i][j] * v[j]).sum::<Complex64>() * tau).collect();
        let vp: Complex64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        let q: Vec<Complex64> = (0..n).map(|i| p[i] - v[i] * (0.5 * tau * vp.re)).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] -= v[i] * q[j].conj() + q[i] * v[j].conj();
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].re).collect();
    for i in 0..n.saturating_sub(1) {
        e[i] = a[i + 1][i].norm();
    }
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues are
/// left in `d`.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::Numerical("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
