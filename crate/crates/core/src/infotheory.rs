//! Classical information-theory kernel: entropies, mutual information,
//! AWGN capacity, signal-counting geometry, and MMSE linear estimation.
//!
//! All public results are in bits (base 2). Natural-log intermediates are
//! converted at the boundary.

use crate::error::{Error, Result};

/// Tolerance on probability normalization checks.
pub const PROB_TOL: f64 = 1e-12;

/// A discrete probability distribution over finitely many symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl DiscreteDistribution {
    /// Validates that entries are nonnegative and sum to 1 within [`PROB_TOL`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_labels(probs, None)
    }

    pub fn with_labels(probs: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::validation("distribution must have at least one entry"));
        }
        if let Some(ref l) = labels {
            if l.len() != probs.len() {
                return Err(Error::validation("label count does not match entry count"));
            }
        }
        if let Some(p) = probs.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::validation(format!("entry {p} is negative or non-finite")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::validation(format!(
                "entries sum to {sum}, expected 1 within {PROB_TOL}"
            )));
        }
        Ok(Self { probs, labels })
    }

    /// Like [`new`](Self::new) but divides by the sum instead of rejecting,
    /// for vectors carrying accumulated float error.
    pub fn renormalized(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::validation("distribution must have at least one entry"));
        }
        if let Some(p) = probs.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::validation(format!("entry {p} is negative or non-finite")));
        }
        let sum: f64 = probs.iter().sum();
        if sum <= 0.0 {
            return Err(Error::validation("entries sum to zero"));
        }
        for p in &mut probs {
            *p /= sum;
        }
        Ok(Self { probs, labels: None })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// A joint distribution p(input, output); rows index inputs, columns outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    /// `p` is row-major with `rows * cols` entries, nonnegative, total 1
    /// within [`PROB_TOL`].
    pub fn new(rows: usize, cols: usize, p: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation("joint distribution must be non-empty"));
        }
        if p.len() != rows * cols {
            return Err(Error::validation(format!(
                "expected {} entries for a {rows}x{cols} joint, got {}",
                rows * cols,
                p.len()
            )));
        }
        if let Some(v) = p.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::validation(format!("entry {v} is negative or non-finite")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::validation(format!(
                "entries sum to {sum}, expected 1 within {PROB_TOL}"
            )));
        }
        Ok(Self { rows, cols, p })
    }

    /// Like [`new`](Self::new) but divides by the total instead of
    /// rejecting small normalization drift.
    pub fn renormalized(rows: usize, cols: usize, mut p: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || p.len() != rows * cols {
            return Err(Error::validation("joint distribution shape mismatch"));
        }
        if let Some(v) = p.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::validation(format!("entry {v} is negative or non-finite")));
        }
        let sum: f64 = p.iter().sum();
        if sum <= 0.0 {
            return Err(Error::validation("entries sum to zero"));
        }
        for v in &mut p {
            *v /= sum;
        }
        Ok(Self { rows, cols, p })
    }

    /// Builds the joint from an input distribution and a row-stochastic
    /// channel matrix p(output | input).
    pub fn from_channel(input: &DiscreteDistribution, channel: &[Vec<f64>]) -> Result<Self> {
        let rows = input.len();
        if channel.len() != rows {
            return Err(Error::validation("channel row count does not match input size"));
        }
        let cols = channel[0].len();
        let mut p = Vec::with_capacity(rows * cols);
        for (px, row) in input.probs().iter().zip(channel) {
            if row.len() != cols {
                return Err(Error::validation("channel rows have unequal lengths"));
            }
            let row_sum: f64 = row.iter().sum();
            if (row_sum - 1.0).abs() > 1e-10 {
                return Err(Error::validation(format!(
                    "channel row sums to {row_sum}, expected 1"
                )));
            }
            for &c in row {
                p.push(px * c);
            }
        }
        Self::new(rows, cols, p)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.p[row * self.cols + col]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Marginal over columns: the input distribution.
    pub fn input_marginal(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.p[r * self.cols..(r + 1) * self.cols].iter().sum())
            .collect()
    }

    /// Marginal over rows: the output distribution.
    pub fn output_marginal(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[c] += self.get(r, c);
            }
        }
        m
    }
}

/// How the noise of an AWGN channel is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    /// Noise variance (or total noise power) N.
    Variance(f64),
    /// One-sided spectral density N0; the variance is N0 * W.
    SpectralDensity(f64),
}

/// Parameters of an additive white Gaussian noise channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnParams {
    /// Average signal power P (signal-units squared).
    pub signal_power: f64,
    pub noise: NoiseSpec,
    /// Bandwidth W in Hz.
    pub bandwidth: f64,
    /// Duration T in seconds.
    pub duration: f64,
}

impl AwgnParams {
    pub fn new(signal_power: f64, noise: NoiseSpec, bandwidth: f64, duration: f64) -> Result<Self> {
        let params = Self { signal_power, noise, bandwidth, duration };
        if signal_power < 0.0 {
            return Err(Error::domain("signal power must be nonnegative"));
        }
        if bandwidth <= 0.0 {
            return Err(Error::domain("bandwidth must be positive"));
        }
        if duration <= 0.0 {
            return Err(Error::domain("duration must be positive"));
        }
        if params.noise_variance() <= 0.0 {
            return Err(Error::domain("noise variance must be positive"));
        }
        Ok(params)
    }

    /// The resolved noise variance N.
    pub fn noise_variance(&self) -> f64 {
        match self.noise {
            NoiseSpec::Variance(n) => n,
            NoiseSpec::SpectralDensity(n0) => n0 * self.bandwidth,
        }
    }
}

/// Data rate of a source emitting one of `messages` equiprobable messages
/// every `duration` seconds, in bits per second.
pub fn data_rate(messages: u64, duration: f64) -> Result<f64> {
    if messages == 0 {
        return Err(Error::domain("message count must be at least 1"));
    }
    if duration <= 0.0 {
        return Err(Error::domain("duration must be positive"));
    }
    Ok((messages as f64).log2() / duration)
}

/// Shannon entropy in bits, with the 0 log 0 = 0 convention.
pub fn shannon_entropy(p: &DiscreteDistribution) -> f64 {
    entropy_bits(p.probs())
}

pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    let nats: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    nats / std::f64::consts::LN_2
}

/// Mutual information of a joint distribution, in bits. Zero-probability
/// terms are skipped.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let px = joint.input_marginal();
    let py = joint.output_marginal();
    let mut nats = 0.0;
    for r in 0..joint.rows() {
        for c in 0..joint.cols() {
            let pxy = joint.get(r, c);
            if pxy > 0.0 {
                nats += pxy * (pxy / (px[r] * py[c])).ln();
            }
        }
    }
    // Tiny negatives from cancellation of an exactly-independent joint.
    (nats / std::f64::consts::LN_2).max(0.0)
}

/// Shannon capacity W log2(1 + P/N) of an AWGN channel, in bits per second.
pub fn awgn_capacity(params: &AwgnParams) -> Result<f64> {
    let n = params.noise_variance();
    if n <= 0.0 {
        return Err(Error::domain("noise variance must be positive"));
    }
    Ok(params.bandwidth * (1.0 + params.signal_power / n).log2())
}

/// Number of well-distinguished signals in duration `t` and bandwidth `w`,
/// and the corresponding rate in bits per second.
///
/// The count is `[k sqrt((P+N)/N)]^(2 T W)` kept as a real number; the rate
/// is computed in closed form as `W log2(k^2 (P+N)/N)` so it stays finite
/// when the count overflows.
pub fn distinguishable_signals(p: f64, n: f64, t: f64, w: f64, k: f64) -> Result<(f64, f64)> {
    if p < 0.0 {
        return Err(Error::domain("signal power must be nonnegative"));
    }
    if n <= 0.0 {
        return Err(Error::domain("noise power must be positive"));
    }
    if t <= 0.0 || w <= 0.0 {
        return Err(Error::domain("duration and bandwidth must be positive"));
    }
    if k <= 0.0 {
        return Err(Error::domain("distinguishability constant must be positive"));
    }
    let per_dim = k * ((p + n) / n).sqrt();
    let count = per_dim.powf(2.0 * t * w);
    let rate = w * (k * k * (p + n) / n).log2();
    Ok((count, rate))
}

/// Number of distinguishable levels for a signal confined to an interval of
/// length `l` under bounded noise of width `delta`, including edge effects.
pub fn noise_interval_levels(l: f64, delta: f64) -> Result<f64> {
    if l < 0.0 {
        return Err(Error::domain("interval length must be nonnegative"));
    }
    if delta <= 0.0 {
        return Err(Error::domain("noise width must be positive"));
    }
    Ok((l + delta) / delta)
}

/// Ratio of the signal-plus-noise sphere volume to the noise sphere volume
/// in `d` dimensions, from the radii sqrt(D(P+N)) and sqrt(DN).
///
/// The radius ratio raised to D gives ((P+N)/N)^(D/2).
pub fn sphere_volume_ratio(p: f64, n: f64, d: u32) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::domain("signal power must be nonnegative"));
    }
    if n <= 0.0 {
        return Err(Error::domain("noise power must be positive"));
    }
    if d < 1 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let radius_ratio = ((p + n) / n).sqrt();
    Ok(radius_ratio.powi(d as i32))
}

/// Minimum-mean-square-error linear estimate of a zero-mean Gaussian
/// parameter with prior variance `sigma2`, observed as `y = A u + n` with
/// noise variance `n`. Returns (estimate, error variance).
pub fn mmse_estimate(a: f64, sigma2: f64, n: f64, y: f64) -> Result<(f64, f64)> {
    if sigma2 <= 0.0 {
        return Err(Error::domain("prior variance must be positive"));
    }
    if n <= 0.0 {
        return Err(Error::domain("noise variance must be positive"));
    }
    if a == 0.0 {
        // Uninformative observation: fall back to the prior mean.
        return Ok((0.0, sigma2));
    }
    let estimate = (y / a) / (1.0 + n / (sigma2 * a * a));
    let error_variance = sigma2 / (1.0 + sigma2 * a * a / n);
    Ok((estimate, error_variance))
}
