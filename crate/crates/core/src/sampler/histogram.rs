use std::io::Write;

use crate::error::{Error, Result};

/// Fractional bits of the fixed-point moment sums. Integer sums make
/// merging exact, so results do not depend on the order of merging.
const FIXED_BITS: i32 = 32;

fn to_fixed(x: f64) -> i128 {
    (x * 2f64.powi(FIXED_BITS)).round() as i128
}

fn from_fixed(x: i128) -> f64 {
    x as f64 * 2f64.powi(-FIXED_BITS)
}

/// Histogram of sampled eigenvalues with first and second moment sums.
///
/// Bins are half-open `[left, right)` except the last, which also holds its
/// right edge. Eigenvalues outside the edges count towards
/// `total_eigenvalues` and the moments but not towards any bin.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumHistogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
    sum: i128,
    sum_sq: i128,
}

impl SpectrumHistogram {
    pub fn check_edges(edges: &[f64]) -> Result<()> {
        if edges.len() < 2 {
            return Err(Error::Shape(format!("need at least 2 bin edges, got {}", edges.len())));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Shape("bin edges must be finite and strictly increasing".into()));
        }
        Ok(())
    }

    /// Empty histogram on `edges`.
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        Self::check_edges(&edges)?;
        let bins = edges.len() - 1;
        Ok(SpectrumHistogram {
            edges,
            counts: vec![0; bins],
            total: 0,
            sum: 0,
            sum_sq: 0,
        })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    fn edge(&self, i: usize) -> f64 {
        self.edges[i]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total_eigenvalues(&self) -> u64 {
        self.total
    }

    pub fn sum_lambda(&self) -> f64 {
        from_fixed(self.sum)
    }

    pub fn sum_lambda_sq(&self) -> f64 {
        from_fixed(self.sum_sq)
    }

    /// Sample mean of all recorded eigenvalues, `None` if empty.
    pub fn mean(&self) -> Option<f64> {
        (self.total > 0).then(|| self.sum_lambda() / self.total as f64)
    }

    pub fn add(&mut self, x: f64) {
        self.total += 1;
        self.sum += to_fixed(x);
        self.sum_sq += to_fixed(x * x);
        let last = self.counts.len();
        if x < self.edge(0) || x > self.edge(last) {
            return;
        }
        let i = self.edges.partition_point(|&e| e <= x).min(last) - 1;
        self.counts[i] += 1;
    }

    pub fn add_spectrum(&mut self, xs: &[f64]) {
        for &x in xs {
            self.add(x);
        }
    }

    /// Bin-wise and moment-wise sum.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.edges != other.edges {
            return Err(Error::Shape("cannot merge histograms with different edges".into()));
        }
        Ok(SpectrumHistogram {
            edges: self.edges.clone(),
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            total: self.total + other.total,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        })
    }

    /// `counts / (total · width)`; zero when empty.
    pub fn densities(&self) -> Vec<f64> {
        (0..self.counts.len())
            .map(|i| {
                if self.total == 0 {
                    0.0
                } else {
                    self.counts[i] as f64 / (self.total as f64 * (self.edge(i + 1) - self.edge(i)))
                }
            })
            .collect()
    }

    /// CSV with header `bin_left,bin_right,count,density`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin_left,bin_right,count,density")?;
        for (i, d) in self.densities().iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{},{d:.16e}", self.edge(i), self.edge(i + 1), self.counts[i])?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}
