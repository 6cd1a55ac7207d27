use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Density values on an increasing grid of eigenvalues.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DensityCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl DensityCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Shape(format!(
                "curve has {} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        Self::check_grid(&grid)?;
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!("density values must be finite and nonnegative, got {v}")));
        }
        Ok(DensityCurve { grid, values })
    }

    /// Grids must be finite, nonnegative and strictly increasing.
    pub fn check_grid(grid: &[f64]) -> Result<()> {
        if let Some(x) = grid.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain(format!("grid points must be finite and nonnegative, got {x}")));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Trapezoid-rule integral over the grid.
    pub fn trapezoid(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Piecewise-linear interpolant; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let g = &self.grid;
        if g.is_empty() || x < g[0] || x > g[g.len() - 1] {
            return 0.0;
        }
        let i = g.partition_point(|&t| t <= x).min(g.len() - 1);
        if i == 0 {
            return self.values[0];
        }
        let (x0, x1) = (g[i - 1], g[i]);
        let t = (x - x0) / (x1 - x0);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }

    /// Exact integral of the piecewise-linear interpolant over `[a, b]`.
    pub fn integrate_between(&self, a: f64, b: f64) -> f64 {
        let g = &self.grid;
        if g.len() < 2 || b <= a {
            return 0.0;
        }
        let lo = a.max(g[0]);
        let hi = b.min(g[g.len() - 1]);
        if hi <= lo {
            return 0.0;
        }
        let mut knots = vec![lo];
        knots.extend(g.iter().copied().filter(|&t| t > lo && t < hi));
        knots.push(hi);
        knots
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.interpolate(w[0]) + self.interpolate(w[1])))
            .sum()
    }

    /// CSV with header `lambda,density` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lambda,density")?;
        for (x, y) in self.grid.iter().zip(&self.values) {
            writeln!(out, "{x:.16e},{y:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Joint density of two eigenvalues on a product grid; `values[i][j]`
/// belongs to `(axis1[i], axis2[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDensityGrid {
    axis1: Vec<f64>,
    axis2: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl JointDensityGrid {
    pub fn new(axis1: Vec<f64>, axis2: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::check_axis(&axis1)?;
        Self::check_axis(&axis2)?;
        if values.len() != axis1.len() || values.iter().any(|r| r.len() != axis2.len()) {
            return Err(Error::Shape("joint grid values do not match the axes".into()));
        }
        if values.iter().flatten().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("joint density values must be finite and nonnegative".into()));
        }
        Ok(JointDensityGrid { axis1, axis2, values })
    }

    pub fn check_axis(axis: &[f64]) -> Result<()> {
        DensityCurve::check_grid(axis)
    }

    pub fn axes(&self) -> (&[f64], &[f64]) {
        (&self.axis1, &self.axis2)
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Largest relative asymmetry `|P_ij − P_ji| / max(|P_ij|, |P_ji|)`, or
    /// `None` when the axes differ.
    pub fn max_asymmetry(&self) -> Option<f64> {
        if self.axis1 != self.axis2 {
            return None;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.values.len() {
            for j in 0..i {
                let (a, b) = (self.values[i][j], self.values[j][i]);
                let scale = a.abs().max(b.abs());
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
        Some(worst)
    }

    /// CSV with header `lambda1,lambda2,density`, `lambda2` varying fastest.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lambda1,lambda2,density")?;
        for (x, row) in self.axis1.iter().zip(&self.values) {
            for (y, v) in self.axis2.iter().zip(row) {
                writeln!(out, "{x:.16e},{y:.16e},{v:.16e}")?;
            }
        }
        Ok(())
    }
}

/// `points` equally spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (points - 1) as f64;
            (0..points).map(|i| if i + 1 == points { max } else { min + step * i as f64 }).collect()
        }
    }
}
