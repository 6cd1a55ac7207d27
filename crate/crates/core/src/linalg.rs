//! Determinants of badly scaled matrices in double-double arithmetic.

use crate::specfun::dd::{Dd, ScaledDd};

/// Determinant with the 1-norm condition number of the equilibrated matrix
/// (`inf` when singular).
#[derive(Clone, Copy, Debug)]
pub struct Determinant {
    pub value: ScaledDd,
    pub condition: f64,
}

struct Lu {
    a: Vec<Vec<Dd>>,
    perm: Vec<usize>,
    det: ScaledDd,
    shift: i64,
    singular: bool,
}

/// Row and then column scaling by powers of two so that every row and
/// column has its largest entry in `[1, 2)`, followed by LU with partial
/// pivoting.
fn factor(rows: &[Vec<ScaledDd>]) -> Lu {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let singular = |n| Lu { a: Vec::new(), perm: (0..n).collect(), det: ScaledDd::ZERO, shift: 0, singular: true };
    let mut row_scale = vec![0i64; n];
    for (i, row) in rows.iter().enumerate() {
        match row.iter().filter_map(|v| v.exponent2()).max() {
            Some(e) => row_scale[i] = e,
            None => return singular(n),
        }
    }
    let mut col_scale = vec![i64::MIN; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let Some(e) = v.exponent2() {
                col_scale[j] = col_scale[j].max(e - row_scale[i]);
            }
        }
    }
    if col_scale.iter().any(|&c| c == i64::MIN) {
        return singular(n);
    }
    let mut a: Vec<Vec<Dd>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| v.to_dd_scaled(row_scale[i] + col_scale[j])).collect())
        .collect();
    let shift = row_scale.iter().sum::<i64>() + col_scale.iter().sum::<i64>();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut det = ScaledDd::ONE;
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].hi().abs().total_cmp(&a[y][k].hi().abs())).unwrap_or(k);
        if a[p][k].is_zero() {
            return Lu { a, perm, det: ScaledDd::ZERO, shift, singular: true };
        }
        if p != k {
            a.swap(p, k);
            perm.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k];
        det = det * pivot;
        for r in (k + 1)..n {
            let factor = a[r][k] / pivot;
            a[r][k] = factor;
            if !factor.is_zero() {
                for c in (k + 1)..n {
                    let t = factor * a[k][c];
                    a[r][c] = a[r][c] - t;
                }
            }
        }
    }
    Lu { a, perm, det, shift, singular: false }
}

impl Lu {
    /// Solves `A x = b` for the equilibrated matrix `A`.
    fn solve(&self, b: &[Dd]) -> Vec<Dd> {
        let n = self.a.len();
        let mut x: Vec<Dd> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i] - self.a[i][j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] = x[i] - self.a[i][j] * x[j];
            }
            x[i] = x[i] / self.a[i][i];
        }
        x
    }
}

/// Determinant of a square matrix.
pub fn determinant(rows: &[Vec<ScaledDd>]) -> ScaledDd {
    if rows.is_empty() {
        return ScaledDd::ONE;
    }
    let lu = factor(rows);
    lu.det.mul_pow2(lu.shift)
}

/// Determinant together with `κ₁ = ‖A‖₁ ‖A⁻¹‖₁` of the equilibrated matrix.
pub fn determinant_with_condition(rows: &[Vec<ScaledDd>]) -> Determinant {
    let n = rows.len();
    if n == 0 {
        return Determinant { value: ScaledDd::ONE, condition: 1.0 };
    }
    let lu = factor(rows);
    if lu.singular {
        return Determinant { value: ScaledDd::ZERO, condition: f64::INFINITY };
    }
    // rebuild the equilibrated matrix in its original row order for ‖A‖₁
    let mut original = vec![vec![0.0; n]; n];
    for (k, &p) in lu.perm.iter().enumerate() {
        for j in 0..n {
            // A = P⁻¹ L U; recompute row k of L U
            let mut s = Dd::ZERO;
            for t in 0..=k.min(j) {
                let l = if t == k { Dd::ONE } else { lu.a[k][t] };
                s = s + l * lu.a[t][j];
            }
            original[p][j] = s.to_f64();
        }
    }
    let norm_a = (0..n).map(|j| (0..n).map(|i| original[i][j].abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut norm_inv: f64 = 0.0;
    for j in 0..n {
        let mut e = vec![Dd::ZERO; n];
        e[j] = Dd::ONE;
        let col = lu.solve(&e);
        norm_inv = norm_inv.max(col.iter().map(|x| x.to_f64().abs()).sum());
    }
    Determinant { value: lu.det.mul_pow2(lu.shift), condition: norm_a * norm_inv }
}

/// Convenience wrapper for plain `f64` matrices.
pub fn determinant_f64(rows: &[Vec<f64>]) -> Determinant {
    let m: Vec<Vec<ScaledDd>> = rows.iter().map(|r| r.iter().map(|&x| ScaledDd::from_f64(x)).collect()).collect();
    determinant_with_condition(&m)
}
