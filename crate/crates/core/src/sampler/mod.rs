//! Monte Carlo sampling of `H = AA† + BB†`.
//!
//! Entries of `A` are independent complex normals with `E|A_jk|² = σ_A`
//! (real and imaginary parts each of variance `σ_A/2`); row `j` of `B` has
//! `E|B_jk|² = σ_Bj`.
//!
//! Sample `i` draws from its own ChaCha8 stream, seeded with `seed` and
//! positioned on stream `i`. Results therefore do not depend on how samples
//! are spread over workers: worker `w` of `W` handles indices
//! `w, w + W, w + 2W, …` and the integer-valued per-worker histograms are
//! summed at the end.

mod compare;
mod eigen;
mod histogram;

pub use compare::{compare, BinComparison, ComparisonReport};
pub use eigen::{hermitian_eigenvalues, MAX_DIM};
pub use histogram::SpectrumHistogram;

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::analytic::{lambda_max, linspace};
use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};

/// Pilot size for automatic binning.
pub const PILOT_SAMPLES: u64 = 10_000;
/// Pilot samples use streams `PILOT_STREAM_OFFSET + i`, disjoint from the
/// streams of the main run.
pub const PILOT_STREAM_OFFSET: u64 = 1 << 63;
pub const MIN_AUTO_BINS: usize = 50;
pub const MAX_AUTO_BINS: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub num_samples: u64,
    pub seed: u64,
    pub workers: usize,
    /// Histogram edges; chosen from a pilot run when `None`.
    pub bin_edges: Option<Vec<f64>>,
}

impl SampleConfig {
    pub fn new(num_samples: u64, seed: u64, workers: usize, bin_edges: Option<Vec<f64>>) -> Result<Self> {
        let c = SampleConfig { num_samples, seed, workers, bin_edges };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::Domain("num_samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be at least 1".into()));
        }
        if let Some(edges) = &self.bin_edges {
            SpectrumHistogram::check_edges(edges)?;
        }
        Ok(())
    }
}

/// The generator for sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, sd: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// The matrix `H = AA† + BB†` for one draw.
pub fn sample_matrix<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Vec<Vec<Complex64>> {
    let n = params.n() as usize;
    let sd_a = (0.5 * params.sigma_a()).sqrt();
    let a: Vec<Vec<Complex64>> =
        (0..n).map(|_| (0..params.n_a()).map(|_| complex_normal(rng, sd_a)).collect()).collect();
    let b: Vec<Vec<Complex64>> = params
        .sigma_b()
        .iter()
        .map(|&s| {
            let sd = (0.5 * s).sqrt();
            (0..params.n_b()).map(|_| complex_normal(rng, sd)).collect()
        })
        .collect();
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in 0..=j {
            let s: Complex64 = a[j].iter().zip(&a[k]).map(|(x, y)| x * y.conj()).sum::<Complex64>()
                + b[j].iter().zip(&b[k]).map(|(x, y)| x * y.conj()).sum::<Complex64>();
            h[j][k] = s;
            h[k][j] = s.conj();
        }
        h[j][j].im = 0.0;
    }
    h
}

/// Eigenvalues of one draw of `H`, ascending.
pub fn sample_spectrum<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<Vec<f64>> {
    hermitian_eigenvalues(&sample_matrix(params, rng))
}

/// Runs `job(index, &mut acc)` for every index in `range`, strided over
/// `workers` threads, and returns the per-worker accumulators in worker order.
fn strided<T, F>(range: Range<u64>, workers: usize, init: impl Fn() -> T + Sync, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut T) -> Result<()> + Sync,
{
    let workers = workers.max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let (job, init, range) = (&job, &init, range.clone());
                scope.spawn(move || -> Result<T> {
                    let mut acc = init();
                    let mut i = range.start + w;
                    while i < range.end {
                        job(i, &mut acc)?;
                        i += workers as u64;
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler worker panicked")).collect()
    })
}

/// Histogram edges from a pilot run: Freedman–Diaconis width over
/// `[0, λ_max]`, clipped to between 50 and 400 bins.
pub fn auto_edges(params: &EnsembleParams, seed: u64, workers: usize) -> Result<Vec<f64>> {
    let top = lambda_max(params)?;
    let parts = strided(0..PILOT_SAMPLES, workers, Vec::new, |i, acc: &mut Vec<f64>| {
        let mut rng = sample_rng(seed, PILOT_STREAM_OFFSET + i);
        acc.extend(sample_spectrum(params, &mut rng)?);
        Ok(())
    })?;
    let mut pilot: Vec<f64> = parts.into_iter().flatten().collect();
    pilot.sort_by(f64::total_cmp);
    let quantile = |q: f64| {
        let pos = q * (pilot.len() - 1) as f64;
        let (i, t) = (pos.floor() as usize, pos.fract());
        pilot[i] + t * (pilot[(i + 1).min(pilot.len() - 1)] - pilot[i])
    };
    let iqr = quantile(0.75) - quantile(0.25);
    let width = 2.0 * iqr / (pilot.len() as f64).cbrt();
    let bins = if width > 0.0 { (top / width).ceil() as usize } else { MAX_AUTO_BINS };
    let bins = bins.clamp(MIN_AUTO_BINS, MAX_AUTO_BINS);
    log::debug!("auto-binning: IQR {iqr:.4}, FD width {width:.4}, {bins} bins over [0, {top:.4}]");
    Ok(linspace(0.0, top, bins + 1))
}

/// Histogram of the samples with indices in `range`; `config.num_samples` is
/// ignored. Edges are taken from `config` or chosen by [`auto_edges`].
pub fn run_range(params: &EnsembleParams, config: &SampleConfig, range: Range<u64>) -> Result<SpectrumHistogram> {
    config.validate()?;
    let edges = match &config.bin_edges {
        Some(e) => e.clone(),
        None => auto_edges(params, config.seed, config.workers)?,
    };
    let empty = SpectrumHistogram::new(edges)?;
    let parts = strided(range, config.workers, || empty.clone(), |i, hist: &mut SpectrumHistogram| {
        let mut rng = sample_rng(config.seed, i);
        hist.add_spectrum(&sample_spectrum(params, &mut rng)?);
        Ok(())
    })?;
    parts.iter().try_fold(empty, |acc, h| acc.merge(h))
}

/// Histogram of `config.num_samples` draws.
pub fn run(params: &EnsembleParams, config: &SampleConfig) -> Result<SpectrumHistogram> {
    config.validate()?;
    log::info!("sampling {} spectra with {} workers (seed {})", config.num_samples, config.workers, config.seed);
    run_range(params, config, 0..config.num_samples)
}

/// `merge(a, b)` as a free function.
pub fn merge(a: &SpectrumHistogram, b: &SpectrumHistogram) -> Result<SpectrumHistogram> {
    a.merge(b)
}
