//! Parameters of the ensemble `H = AA† + BB†` with `Σ_A = σ_A·1` and
//! `Σ_B = diag(σ_B1, ..., σ_Bn)`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance below which two `σ_B` values are treated as equal.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Validated ensemble parameters.
///
/// The derived exponents `m = n_A + n_B - n`, `α = n_B - n + 1` and
/// `γ = m + 1 = α + n_A` are exposed as methods so there is a single place
/// that defines them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleParams {
    n: u32,
    #[serde(rename = "n_A")]
    n_a: u32,
    #[serde(rename = "n_B")]
    n_b: u32,
    sigma_a: f64,
    sigma_b: Vec<f64>,
}

impl EnsembleParams {
    /// Validates and builds the parameter set.
    pub fn new(n: u32, n_a: u32, n_b: u32, sigma_a: f64, sigma_b: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("n must be at least 1".into()));
        }
        if n_a < n || n_b < n {
            return Err(Error::Dimension(format!(
                "degrees of freedom must satisfy n_A >= n and n_B >= n (n={n}, n_A={n_a}, n_B={n_b})"
            )));
        }
        if sigma_b.len() != n as usize {
            return Err(Error::Shape(format!(
                "sigma_B has {} entries, expected n = {n}",
                sigma_b.len()
            )));
        }
        if !(sigma_a > 0.0 && sigma_a.is_finite()) {
            return Err(Error::Domain(format!("sigma_A must be positive and finite, got {sigma_a}")));
        }
        if let Some(bad) = sigma_b.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::Domain(format!("sigma_B entries must be positive and finite, got {bad}")));
        }
        Ok(EnsembleParams { n, n_a, n_b, sigma_a, sigma_b })
    }

    /// All `σ_B` equal to `sigma_b`.
    pub fn isotropic(n: u32, n_a: u32, n_b: u32, sigma_a: f64, sigma_b: f64) -> Result<Self> {
        Self::new(n, n_a, n_b, sigma_a, vec![sigma_b; n as usize])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_a(&self) -> u32 {
        self.n_a
    }

    pub fn n_b(&self) -> u32 {
        self.n_b
    }

    pub fn sigma_a(&self) -> f64 {
        self.sigma_a
    }

    pub fn sigma_b(&self) -> &[f64] {
        &self.sigma_b
    }

    /// `m = n_A + n_B - n`, the exponent of `det H`.
    pub fn m(&self) -> u32 {
        self.n_a + self.n_b - self.n
    }

    /// `α = n_B - n + 1`.
    pub fn alpha(&self) -> u32 {
        self.n_b - self.n + 1
    }

    /// `γ = n_A + n_B - n + 1`.
    pub fn gamma(&self) -> u32 {
        self.m() + 1
    }

    /// Expected eigenvalue, `E[tr H] / n = (n_A n σ_A + n_B Σ σ_Bk) / n`.
    pub fn mean_eigenvalue_exact(&self) -> f64 {
        let n = f64::from(self.n);
        (f64::from(self.n_a) * n * self.sigma_a + f64::from(self.n_b) * self.sigma_b.iter().sum::<f64>()) / n
    }

    /// Slowest exponential decay rate of the eigenvalue density, `min(1/σ_A, 1/σ_Bk)`.
    pub fn min_rate(&self) -> f64 {
        let max_sigma = self.sigma_b.iter().copied().fold(self.sigma_a, f64::max);
        1.0 / max_sigma
    }

    /// The same ensemble with every variance multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.n_a,
            self.n_b,
            self.sigma_a * t,
            self.sigma_b.iter().map(|s| s * t).collect(),
        )
    }

    /// The same ensemble with a different `σ_B` diagonal.
    pub fn with_sigma_b(&self, sigma_b: Vec<f64>) -> Result<Self> {
        Self::new(self.n, self.n_a, self.n_b, self.sigma_a, sigma_b)
    }

    /// Parses the JSON parameter document
    /// `{"n", "n_A", "n_B", "sigma_A", "sigma_B"}`. Variances may be numbers or
    /// strings holding a decimal or a rational such as `"5/7"`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawParams = serde_json::from_str(s)?;
        raw.validate()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// Groups equal `σ_B` values; see [`DegeneracyProfile`].
    pub fn detect_clusters(&self, rel_tol: f64) -> DegeneracyProfile {
        DegeneracyProfile::from_values(&self.sigma_b, rel_tol)
    }
}

impl fmt::Display for EnsembleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}, n_A={}, n_B={}, sigma_A={}, sigma_B={:?}",
            self.n, self.n_a, self.n_b, self.sigma_a, self.sigma_b
        )
    }
}

/// A variance as it appears in a parameter file.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

/// Unvalidated parameter document.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub n: u32,
    #[serde(rename = "n_A")]
    pub n_a: u32,
    #[serde(rename = "n_B")]
    pub n_b: u32,
    #[serde(rename = "sigma_A")]
    pub sigma_a: Scalar,
    #[serde(rename = "sigma_B")]
    pub sigma_b: Vec<Scalar>,
}

impl RawParams {
    pub fn validate(&self) -> Result<EnsembleParams> {
        let sigma_b = self.sigma_b.iter().map(Scalar::to_f64).collect::<Result<Vec<_>>>()?;
        EnsembleParams::new(self.n, self.n_a, self.n_b, self.sigma_a.to_f64()?, sigma_b)
    }
}

/// Parses `"p/q"`, an integer, or a decimal literal.
///
/// Integer numerators and denominators below 2^53 are represented exactly, so
/// the quotient is the correctly rounded value of the rational.
pub fn parse_rational(s: &str) -> Result<f64> {
    let s = s.trim();
    let parse_part = |t: &str| -> Result<f64> {
        let t = t.trim();
        if let Ok(i) = t.parse::<i64>() {
            if i.unsigned_abs() <= 1u64 << 53 {
                return Ok(i as f64);
            }
        }
        t.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {t:?}")))
    };
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_part(den)?;
            if d == 0.0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            parse_part(num)? / d
        }
        None => parse_part(s)?,
    };
    if !value.is_finite() {
        return Err(Error::Parse(format!("not a finite number: {s:?}")));
    }
    Ok(value)
}

/// One group of equal `σ_B` values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: u32,
}

/// Partition of the `σ_B` values into groups of (numerically) equal values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyProfile {
    clusters: Vec<Cluster>,
}

impl DegeneracyProfile {
    /// Sorts the values and merges neighbours whose relative gap is at most
    /// `rel_tol`. The representative of a group is the mean of its members.
    pub fn from_values(values: &[f64], rel_tol: f64) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut clusters = Vec::new();
        let mut members: Vec<f64> = Vec::new();
        for v in sorted {
            if let Some(&last) = members.last() {
                if (v - last).abs() > rel_tol * v.abs().max(last.abs()) {
                    clusters.push(Self::close(&members));
                    members.clear();
                }
            }
            members.push(v);
        }
        if !members.is_empty() {
            clusters.push(Self::close(&members));
        }
        DegeneracyProfile { clusters }
    }

    fn close(members: &[f64]) -> Cluster {
        Cluster {
            value: members.iter().sum::<f64>() / members.len() as f64,
            multiplicity: members.len() as u32,
        }
    }

    /// Builds a profile from explicit clusters, checking the ordering invariant.
    pub fn from_clusters(clusters: Vec<Cluster>) -> Result<Self> {
        if clusters.iter().any(|c| c.multiplicity == 0 || !(c.value > 0.0)) {
            return Err(Error::Shape("clusters need positive values and multiplicities".into()));
        }
        if clusters.windows(2).any(|w| w[0].value >= w[1].value) {
            return Err(Error::Shape("cluster values must be strictly increasing".into()));
        }
        Ok(DegeneracyProfile { clusters })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u32 {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|c| c.multiplicity > 1)
    }
}
