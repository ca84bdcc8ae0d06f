//! Sampled `S_z(n dt)` series, histograms and the fitted densities.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::bloch::BlochVector;
use crate::error::{invalid, JcmError, Result};
use crate::evolution::MapEvaluator;
use crate::params::ModelParams;

/// `S_z` sampled on `n dt`, `n = 0..n_samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub delta_t: f64,
    pub beta: f64,
    pub values: Vec<f64>,
}

/// Uniform-width histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_left_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub class_interval: f64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_left_edges
            .iter()
            .map(move |e| e + 0.5 * self.class_interval)
    }
}

/// Population mean and variance (`1 / (N + 1)` normalization).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentStats {
    pub mu: f64,
    pub sigma2: f64,
}

/// Least-squares amplitude of a fixed density shape against bin counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityFit {
    pub amplitude: f64,
    /// RMS of `count - amplitude * shape` over the fitted bins.
    pub residual: f64,
    pub bins_used: usize,
}

/// Normal-density fit with moments taken from the samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFit {
    /// Multiplier of the unit-area normal density.
    pub amplitude: f64,
    /// Fitted count at `y = mu`, `amplitude / (sqrt(2 pi) sigma)`.
    pub peak_height: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub residual: f64,
}

/// `sigma^2(beta) = c1 beta^c2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub c1: f64,
    pub c2: f64,
    pub beta_range: RangeInclusive<f64>,
    /// RMS residual of `ln sigma^2` about the fitted line.
    pub log_rms_residual: f64,
    pub points_used: usize,
}

/// Samples `S_z(n delta_t)` for `n = 0..n_samples` (so `n_samples = N + 1`).
pub fn sample_series(
    p: &ModelParams,
    s0: &BlochVector,
    delta_t: f64,
    n_samples: usize,
) -> Result<SampleSeries> {
    if !(delta_t > 0.0) || !delta_t.is_finite() {
        return Err(invalid("delta_t", format!("must be > 0, got {delta_t}")));
    }
    if n_samples == 0 {
        return Err(invalid("n_samples", "must be >= 1"));
    }
    let evaluator = MapEvaluator::new(p)?;
    let values = (0..n_samples)
        .into_par_iter()
        .map(|n| evaluator.sz(s0.sz, n as f64 * delta_t))
        .collect();
    Ok(SampleSeries {
        delta_t,
        beta: p.beta(),
        values,
    })
}

/// Bins `s.values` on `[min, max]` with half-open bins and a closed last bin.
pub fn build_histogram(s: &SampleSeries, class_interval: f64) -> Result<Histogram> {
    histogram_of(&s.values, class_interval)
}

pub(crate) fn histogram_of(values: &[f64], class_interval: f64) -> Result<Histogram> {
    if !(class_interval > 0.0) || !class_interval.is_finite() {
        return Err(invalid(
            "class_interval",
            format!("must be > 0, got {class_interval}"),
        ));
    }
    if values.is_empty() {
        return Err(JcmError::InsufficientData("empty sample series".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(JcmError::Degenerate("non-finite sample".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = (((hi - lo) / class_interval).ceil() as usize).max(1);
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = (((v - lo) / class_interval).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram {
        bin_left_edges: (0..bins).map(|i| lo + i as f64 * class_interval).collect(),
        counts,
        class_interval,
    })
}

/// Occupation density of `y = -(1 - cos 2t) / 2`, `1 / sqrt(1 - (2y + 1)^2)`.
pub fn arcsine_density(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 0.0) {
        return Err(JcmError::ArcsineDomain(y));
    }
    let u = 2.0 * y + 1.0;
    Ok(1.0 / (1.0 - u * u).sqrt())
}

fn check_support(h: &Histogram) -> Result<()> {
    let first = *h.bin_left_edges.first().unwrap_or(&0.0);
    let last = h
        .bin_left_edges
        .last()
        .map(|e| e + h.class_interval)
        .unwrap_or(0.0);
    if first < -1.0 - 1e-9 || last > h.class_interval + 1e-9 {
        return Err(invalid("histogram", "support must lie within [-1, 0]"));
    }
    Ok(())
}

// Density at the midpoint of the part of the bin inside [-1, 0].
fn bin_density(left: f64, width: f64) -> Result<f64> {
    let lo = left.max(-1.0);
    let hi = (left + width).min(0.0);
    arcsine_density(0.5 * (lo + hi))
}

/// `(density, count)` for every bin.
fn all_bins(h: &Histogram) -> Result<Vec<(f64, f64)>> {
    check_support(h)?;
    if h.counts.len() < 3 {
        return Err(JcmError::InsufficientData(format!(
            "{} bins, need at least 3",
            h.counts.len()
        )));
    }
    h.bin_left_edges
        .iter()
        .zip(&h.counts)
        .map(|(&e, &k)| Ok((bin_density(e, h.class_interval)?, k as f64)))
        .collect()
}

/// `(density, count)` without the two endpoint bins.
fn interior_bins(h: &Histogram) -> Result<Vec<(f64, f64)>> {
    check_support(h)?;
    let n = h.counts.len();
    if n < 5 {
        return Err(JcmError::InsufficientData(format!(
            "{} interior bins, need at least 3",
            n.saturating_sub(2)
        )));
    }
    h.bin_centers()
        .zip(&h.counts)
        .skip(1)
        .take(n - 2)
        .map(|(c, &k)| Ok((arcsine_density(c)?, k as f64)))
        .collect()
}

fn least_squares_amplitude(pairs: &[(f64, f64)]) -> DensityFit {
    let num: f64 = pairs.iter().map(|(d, k)| d * k).sum();
    let den: f64 = pairs.iter().map(|(d, _)| d * d).sum();
    let amplitude = num / den;
    let sse: f64 = pairs.iter().map(|(d, k)| (k - amplitude * d).powi(2)).sum();
    DensityFit {
        amplitude,
        residual: (sse / pairs.len() as f64).sqrt(),
        bins_used: pairs.len(),
    }
}

/// Least-squares fit of `a / sqrt(1 - (2y + 1)^2)` to the counts of every
/// bin, the density taken at bin centers. The endpoint bins hold the
/// integrated singularity and pull `a` above the interior-only value.
pub fn fit_arcsine_amplitude(h: &Histogram) -> Result<DensityFit> {
    Ok(least_squares_amplitude(&all_bins(h)?))
}

/// Same fit restricted to interior bins.
pub fn fit_arcsine_amplitude_interior(h: &Histogram) -> Result<DensityFit> {
    Ok(least_squares_amplitude(&interior_bins(h)?))
}

/// L1 distance between the interior-bin histogram and the arcsine density,
/// both normalized to unit sum over the same bins.
pub fn arcsine_l1_distance(h: &Histogram) -> Result<f64> {
    let pairs = interior_bins(h)?;
    let dsum: f64 = pairs.iter().map(|(d, _)| d).sum();
    let ksum: f64 = pairs.iter().map(|(_, k)| k).sum();
    if ksum == 0.0 {
        return Err(JcmError::InsufficientData(
            "no samples in interior bins".into(),
        ));
    }
    Ok(pairs.iter().map(|(d, k)| (k / ksum - d / dsum).abs()).sum())
}

/// Mean and variance with `1 / (N + 1)` normalization.
pub fn sample_moments(s: &SampleSeries) -> Result<MomentStats> {
    moments_of(&s.values)
}

pub(crate) fn moments_of(values: &[f64]) -> Result<MomentStats> {
    if values.is_empty() {
        return Err(JcmError::InsufficientData("empty sample series".into()));
    }
    let n = values.len() as f64;
    let mu = crate::summation::pairwise_sum(values) / n;
    let dev: Vec<f64> = values.iter().map(|v| (mu - v) * (mu - v)).collect();
    Ok(MomentStats {
        mu,
        sigma2: crate::summation::pairwise_sum(&dev) / n,
    })
}

/// Standardized third moment. Zero for a constant series.
pub fn sample_skewness(s: &SampleSeries) -> Result<f64> {
    let m = sample_moments(s)?;
    if m.sigma2 == 0.0 {
        return Ok(0.0);
    }
    let n = s.values.len() as f64;
    let third: Vec<f64> = s.values.iter().map(|v| (v - m.mu).powi(3)).collect();
    Ok(crate::summation::pairwise_sum(&third) / n / m.sigma2.powf(1.5))
}

pub fn normal_density(y: f64, mu: f64, sigma2: f64) -> f64 {
    (-(y - mu) * (y - mu) / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt()
}

/// Fits `a * N(y; mu, sigma2)` to the counts with `mu`, `sigma2` held at `m`.
pub fn fit_normal(h: &Histogram, m: &MomentStats) -> Result<NormalFit> {
    if !(m.sigma2 > 0.0) {
        return Err(JcmError::Degenerate("zero sample variance".into()));
    }
    let pairs: Vec<(f64, f64)> = h
        .bin_centers()
        .zip(&h.counts)
        .map(|(c, &k)| (normal_density(c, m.mu, m.sigma2), k as f64))
        .collect();
    let fit = least_squares_amplitude(&pairs);
    Ok(NormalFit {
        amplitude: fit.amplitude,
        peak_height: fit.amplitude / (2.0 * PI * m.sigma2).sqrt(),
        mu: m.mu,
        sigma2: m.sigma2,
        residual: fit.residual,
    })
}

/// Sample moments for every `beta` in `betas`, sharing `delta_t` and `n_samples`.
/// The template supplies everything but `beta`; `S(0) = 0`.
pub fn variance_scan(
    betas: &[f64],
    template: &ModelParams,
    delta_t: f64,
    n_samples: usize,
) -> Result<Vec<(f64, MomentStats)>> {
    if betas.is_empty() {
        return Err(JcmError::InsufficientData("empty beta grid".into()));
    }
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0)) {
        return Err(invalid("beta", format!("scan values must be > 0, got {b}")));
    }
    betas
        .par_iter()
        .map(|&beta| {
            let p = template.with_beta(beta)?;
            let s = sample_series(&p, &BlochVector::ZERO, delta_t, n_samples)?;
            Ok((beta, sample_moments(&s)?))
        })
        .collect()
}

/// `count` points spaced evenly in `ln beta` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || count == 0 {
        return Err(invalid(
            "grid",
            format!("need 0 < lo <= hi and count >= 1, got [{lo}, {hi}] x {count}"),
        ));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else if k == 0 {
                lo
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Ordinary least squares of `ln sigma^2` on `ln beta` over `fit_range`.
pub fn power_law_fit(
    scan: &[(f64, MomentStats)],
    fit_range: RangeInclusive<f64>,
) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = scan
        .iter()
        .filter(|(b, _)| fit_range.contains(b))
        .map(|(b, m)| (*b, m.sigma2))
        .collect();
    if pts.len() < 3 {
        return Err(JcmError::InsufficientData(format!(
            "{} points in [{}, {}], need at least 3",
            pts.len(),
            fit_range.start(),
            fit_range.end()
        )));
    }
    if let Some((b, _)) = pts.iter().find(|(_, s)| !(*s > 0.0)) {
        return Err(JcmError::Degenerate(format!("zero variance at beta = {b}")));
    }
    let xy: Vec<(f64, f64)> = pts.iter().map(|(b, s)| (b.ln(), s.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(JcmError::Degenerate("all beta values coincide".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(PowerLawFit {
        c1: intercept.exp(),
        c2: slope,
        beta_range: fit_range,
        log_rms_residual: (sse / n).sqrt(),
        points_used: xy.len(),
    })
}
