//! Rate-distortion functions, the capacity-inversion bound on measurement
//! accuracy, and a Monte Carlo demonstration of the multimode
//! frequency-modulation threshold effect.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::capacities::g_entropy_nats;
use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;
const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Shannon upper-bound constant for the uniform-phase rate-distortion
/// curve: R(d) <= log(PHASE_RD_CONSTANT / sqrt(d)).
pub const PHASE_RD_CONSTANT: f64 = 1.35;

/// Source models with known (or bounded) rate-distortion curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RdSource {
    /// Zero-mean Gaussian under mean-square error.
    GaussianMeanSquare { sigma: f64 },
    /// Phase uniform on [-pi, pi); the Shannon upper bound serves as the
    /// working curve, so inverted values are upper-side estimates.
    UniformPhase,
}

impl RdSource {
    fn validate(&self) -> Result<()> {
        if let RdSource::GaussianMeanSquare { sigma } = self {
            if *sigma <= 0.0 || !sigma.is_finite() {
                return Err(Error::domain("prior standard deviation must be positive"));
            }
        }
        Ok(())
    }

    /// Scale that multiplies e^{-C} in the inverted bound.
    fn rms_scale(&self) -> f64 {
        match self {
            RdSource::GaussianMeanSquare { sigma } => *sigma,
            RdSource::UniformPhase => PHASE_RD_CONSTANT,
        }
    }
}

/// Rate-distortion function in bits per symbol, clamped at zero.
pub fn rd_function(source: &RdSource, d: f64) -> Result<f64> {
    source.validate()?;
    if d <= 0.0 || !d.is_finite() {
        return Err(Error::domain("distortion must be positive and finite"));
    }
    let bits = match source {
        RdSource::GaussianMeanSquare { sigma } => 0.5 * (sigma * sigma / d).log2(),
        RdSource::UniformPhase => (PHASE_RD_CONSTANT / d.sqrt()).log2(),
    };
    Ok(bits.max(0.0))
}

/// The distortion floor implied by a rate budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdInverse {
    /// Mean-square distortion lower bound.
    pub distortion: f64,
    /// Root-mean-square bound, sqrt of the distortion.
    pub rms: f64,
}

/// Inverts the rate-distortion curve at `c_bits`: the least distortion
/// representable with that many bits.
pub fn rd_invert(source: &RdSource, c_bits: f64) -> Result<RdInverse> {
    source.validate()?;
    if c_bits < 0.0 || !c_bits.is_finite() {
        return Err(Error::domain("rate must be nonnegative and finite"));
    }
    let rms = source.rms_scale() * (-c_bits * LN_2).exp();
    Ok(RdInverse { distortion: rms * rms, rms })
}

/// State families whose capacities drive the measurement bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Number states with photon counting: the ultimate capacity.
    Optimal,
    /// Squeezed single-quadrature signaling with homodyne detection.
    Tcs,
    /// Coherent states with heterodyne detection.
    CoherentHeterodyne,
}

impl StateKind {
    pub fn name(&self) -> &'static str {
        match self {
            StateKind::Optimal => "optimal",
            StateKind::Tcs => "tcs",
            StateKind::CoherentHeterodyne => "coherent",
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(StateKind::Optimal),
            "tcs" => Ok(StateKind::Tcs),
            "coherent" => Ok(StateKind::CoherentHeterodyne),
            other => Err(Error::validation(format!(
                "unknown state kind {other:?}; valid kinds: optimal, tcs, coherent"
            ))),
        }
    }
}

/// A measurement-accuracy query: total energy `total_photons` spread over
/// `modes` modes, state family, and source model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementLimitQuery {
    pub source: RdSource,
    pub state_kind: StateKind,
    pub total_photons: f64,
    pub modes: u64,
}

/// Lower bound on the root-mean-square measurement error: the source
/// rate-distortion curve inverted at the channel capacity.
///
/// The capacity is accumulated in nats over `modes` modes of energy S/m
/// each, and the bound is scale * e^{-C}.
pub fn measurement_limit(query: &MeasurementLimitQuery) -> Result<f64> {
    query.source.validate()?;
    if query.total_photons < 0.0 || !query.total_photons.is_finite() {
        return Err(Error::domain("total photon number must be nonnegative and finite"));
    }
    if query.modes == 0 {
        return Err(Error::domain("mode count must be at least 1"));
    }
    let m = query.modes as f64;
    let per_mode = query.total_photons / m;
    let capacity_nats = match query.state_kind {
        StateKind::Optimal => m * g_entropy_nats(per_mode),
        StateKind::Tcs => m * (2.0 * per_mode).ln_1p(),
        StateKind::CoherentHeterodyne => m * per_mode.ln_1p(),
    };
    Ok(query.source.rms_scale() * (-capacity_nats).exp())
}

/// Configuration of the pulse-frequency-modulation Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmSimConfig {
    /// Total signal energy (photons) in the pulse.
    pub total_energy: f64,
    /// Number of orthogonal frequency bins (modes).
    pub bins: usize,
    pub trials: usize,
    pub seed: u64,
    /// Per-quadrature noise variance in every bin; 1 is the
    /// coherent-state heterodyne convention.
    pub noise_var: f64,
}

impl FmSimConfig {
    pub fn new(total_energy: f64, bins: usize, trials: usize, seed: u64) -> Result<Self> {
        let cfg = Self { total_energy, bins, trials, seed, noise_var: 1.0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_energy < 0.0 || !self.total_energy.is_finite() {
            return Err(Error::validation("total energy must be nonnegative and finite"));
        }
        if self.bins < 2 {
            return Err(Error::validation("need at least 2 frequency bins"));
        }
        if self.trials < 100 {
            return Err(Error::validation("need at least 100 trials"));
        }
        if self.noise_var <= 0.0 {
            return Err(Error::validation("noise variance must be positive"));
        }
        Ok(())
    }
}

/// Empirical outcome of the FM threshold simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmSimResult {
    /// Root-mean-square phase error over all trials, in radians.
    pub rms_error: f64,
    /// Fraction of trials decoded into a bin carrying no signal energy.
    pub anomaly_rate: f64,
}

/// Pulse-frequency-modulation receiver trial: a uniform phase maps to a
/// continuous position across `bins` orthogonal frequency bins; the signal
/// energy splits between the two straddled bins and every bin sees complex
/// Gaussian noise. The receiver picks the strongest bin and refines inside
/// it with noise-floor-subtracted energy weights.
///
/// Deterministic for a fixed seed: each trial derives its own generator
/// from (seed, trial index), so the result is independent of scheduling.
pub fn fm_threshold_sim(cfg: &FmSimConfig) -> Result<FmSimResult> {
    cfg.validate()?;
    let m = cfg.bins;
    let noise_sd = cfg.noise_var.sqrt();
    let mut sum_sq = 0.0f64;
    let mut anomalies = 0usize;
    let mut energies = vec![0.0f64; m];

    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, trial as u64));
        let phase = TAU * rng.gen::<f64>() - std::f64::consts::PI;
        let position = (phase + std::f64::consts::PI) / TAU * m as f64;
        let bin = (position as usize).min(m - 1);
        let offset = position - bin as f64;
        let next = (bin + 1) % m;

        let amp_lo = ((1.0 - offset) * cfg.total_energy).sqrt();
        let amp_hi = (offset * cfg.total_energy).sqrt();
        for (j, e) in energies.iter_mut().enumerate() {
            let signal = if j == bin {
                amp_lo
            } else if j == next {
                amp_hi
            } else {
                0.0
            };
            let re: f64 = signal + noise_sd * normal(&mut rng);
            let im: f64 = noise_sd * normal(&mut rng);
            *e = re * re + im * im;
        }

        let best = (0..m)
            .max_by(|&a, &b| energies[a].total_cmp(&energies[b]))
            .expect("bins is nonzero");
        if best != bin && best != next {
            anomalies += 1;
        }

        // Refine within the winning bin pair using energies with the known
        // noise mean removed.
        let weight = |j: usize| (energies[j] - 2.0 * cfg.noise_var).max(0.0);
        let w_center = weight(best);
        let w_right = weight((best + 1) % m);
        let w_left = weight((best + m - 1) % m);
        let estimate = if w_right >= w_left {
            let denom = w_center + w_right;
            let frac = if denom > 0.0 { w_right / denom } else { 0.0 };
            best as f64 + frac
        } else {
            let denom = w_center + w_left;
            let frac = if denom > 0.0 { w_left / denom } else { 0.0 };
            best as f64 - frac
        };

        let est_phase = estimate / m as f64 * TAU - std::f64::consts::PI;
        let err = wrap_angle(est_phase - phase);
        sum_sq += err * err;
    }

    Ok(FmSimResult {
        rms_error: (sum_sq / cfg.trials as f64).sqrt(),
        anomaly_rate: anomalies as f64 / cfg.trials as f64,
    })
}

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Wraps an angle difference into [-pi, pi).
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = (x + std::f64::consts::PI).rem_euclid(TAU);
    if y < 0.0 {
        y += TAU;
    }
    y - std::f64::consts::PI
}

/// SplitMix64 step, used to derive independent per-trial seeds.
fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    const GAUSS_UNIT: RdSource = RdSource::GaussianMeanSquare { sigma: 1.0 };

    #[test]
    fn rd_function_examples() {
        close(rd_function(&GAUSS_UNIT, 1.0).unwrap(), 0.0, 0.0);
        close(rd_function(&GAUSS_UNIT, 0.25).unwrap(), 1.0, 1e-15);
        close(
            rd_function(&RdSource::UniformPhase, PHASE_RD_CONSTANT * PHASE_RD_CONSTANT).unwrap(),
            0.0,
            0.0,
        );
        assert!(rd_function(&GAUSS_UNIT, 0.0).is_err());
        assert!(rd_function(&RdSource::GaussianMeanSquare { sigma: -1.0 }, 0.5).is_err());
    }

    #[test]
    fn rd_invert_examples() {
        let zero = rd_invert(&GAUSS_UNIT, 0.0).unwrap();
        close(zero.rms, 1.0, 0.0);
        let one = rd_invert(&GAUSS_UNIT, 1.0).unwrap();
        close(one.distortion, 0.25, 1e-15);
        let phase = rd_invert(&RdSource::UniformPhase, 0.0).unwrap();
        close(phase.rms, PHASE_RD_CONSTANT, 0.0);
    }

    #[test]
    fn rd_round_trip_on_open_interval() {
        for &d in &[1e-6, 1e-3, 0.1, 0.5, 0.999] {
            let r = rd_function(&GAUSS_UNIT, d).unwrap();
            let back = rd_invert(&GAUSS_UNIT, r).unwrap();
            close(back.distortion, d, 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn rd_limit_matches_mmse_error() {
        // Inverting the one-use Gaussian channel capacity reproduces the
        // linear-estimation error exactly, with S = A^2 sigma^2.
        use crate::infotheory::mmse_estimate;
        for &(a, sigma2, n) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 0.3), (0.7, 3.0, 2.2)] {
            let snr = a * a * sigma2 / n;
            let c_bits = 0.5 * (1.0 + snr).log2();
            let inv = rd_invert(
                &RdSource::GaussianMeanSquare { sigma: sigma2.sqrt() },
                c_bits,
            )
            .unwrap();
            let (_, err) = mmse_estimate(a, sigma2, n, 0.0).unwrap();
            close(inv.distortion, err, 1e-12);
        }
    }

    #[test]
    fn measurement_limit_closed_forms() {
        let q = |state_kind, s, m| MeasurementLimitQuery {
            source: GAUSS_UNIT,
            state_kind,
            total_photons: s,
            modes: m,
        };
        close(measurement_limit(&q(StateKind::Optimal, 1.0, 1)).unwrap(), 0.25, 1e-10);
        close(measurement_limit(&q(StateKind::Tcs, 1.0, 1)).unwrap(), 1.0 / 3.0, 1e-10);
        close(
            measurement_limit(&q(StateKind::CoherentHeterodyne, 1.0, 1)).unwrap(),
            0.5,
            1e-10,
        );
        close(measurement_limit(&q(StateKind::Optimal, 2.0, 2)).unwrap(), 1.0 / 16.0, 1e-10);
        let phase = MeasurementLimitQuery {
            source: RdSource::UniformPhase,
            state_kind: StateKind::Optimal,
            total_photons: 1.0,
            modes: 1,
        };
        close(measurement_limit(&phase).unwrap(), 0.3375, 1e-10);
    }

    #[test]
    fn measurement_limit_single_mode_ratio() {
        for &s in &[0.3, 1.0, 4.0, 20.0] {
            let tcs = measurement_limit(&MeasurementLimitQuery {
                source: GAUSS_UNIT,
                state_kind: StateKind::Tcs,
                total_photons: s,
                modes: 1,
            })
            .unwrap();
            let cs = measurement_limit(&MeasurementLimitQuery {
                source: GAUSS_UNIT,
                state_kind: StateKind::CoherentHeterodyne,
                total_photons: s,
                modes: 1,
            })
            .unwrap();
            close(tcs / cs, (s + 1.0) / (2.0 * s + 1.0), 1e-12);
        }
    }

    #[test]
    fn measurement_limit_ordering_and_monotonicity() {
        for &s in &[0.5, 2.0, 10.0] {
            let mut prev_tcs = f64::INFINITY;
            for &m in &[1u64, 2, 4, 16, 256, 65536] {
                let q = |state_kind| MeasurementLimitQuery {
                    source: GAUSS_UNIT,
                    state_kind,
                    total_photons: s,
                    modes: m,
                };
                let opt = measurement_limit(&q(StateKind::Optimal)).unwrap();
                let tcs = measurement_limit(&q(StateKind::Tcs)).unwrap();
                let cs = measurement_limit(&q(StateKind::CoherentHeterodyne)).unwrap();
                assert!(opt <= tcs + 1e-15 && tcs <= cs + 1e-15);
                assert!(tcs <= prev_tcs + 1e-15);
                prev_tcs = tcs;
            }
        }
    }

    #[test]
    fn measurement_limit_many_mode_exponentials() {
        for &s in &[0.5, 1.0, 3.0] {
            let q = |state_kind| MeasurementLimitQuery {
                source: GAUSS_UNIT,
                state_kind,
                total_photons: s,
                modes: 1_000_000,
            };
            let tcs = measurement_limit(&q(StateKind::Tcs)).unwrap();
            let cs = measurement_limit(&q(StateKind::CoherentHeterodyne)).unwrap();
            assert!((tcs - (-2.0 * s).exp()).abs() / (-2.0 * s).exp() < 1e-4);
            assert!((cs - (-s).exp()).abs() / (-s).exp() < 1e-4);
        }
    }

    #[test]
    fn fm_sim_no_signal_is_uniform_guessing() {
        let cfg = FmSimConfig::new(0.0, 16, 4000, 11).unwrap();
        let out = fm_threshold_sim(&cfg).unwrap();
        let uniform_rms = TAU / 12f64.sqrt();
        assert!((out.rms_error - uniform_rms).abs() / uniform_rms < 0.05);
    }

    #[test]
    fn fm_sim_reproducible_for_fixed_seed() {
        let cfg = FmSimConfig::new(50.0, 32, 500, 7).unwrap();
        let a = fm_threshold_sim(&cfg).unwrap();
        let b = fm_threshold_sim(&cfg).unwrap();
        assert_eq!(a.rms_error.to_bits(), b.rms_error.to_bits());
        assert_eq!(a.anomaly_rate.to_bits(), b.anomaly_rate.to_bits());
    }

    #[test]
    fn fm_sim_error_scales_inversely_with_bins() {
        let rms = |m| {
            fm_threshold_sim(&FmSimConfig::new(100.0, m, 10_000, 3).unwrap())
                .unwrap()
                .rms_error
        };
        let ratio = rms(16) / rms(64);
        assert!((ratio - 4.0).abs() / 4.0 < 0.2, "ratio {ratio} not within 20% of 4");
    }

    #[test]
    fn fm_sim_threshold_effect_below_energy_budget() {
        let low = fm_threshold_sim(&FmSimConfig::new(2.0, 64, 2000, 9).unwrap()).unwrap();
        assert!(low.anomaly_rate > 0.1, "anomaly rate {}", low.anomaly_rate);
        let high = fm_threshold_sim(&FmSimConfig::new(100.0, 64, 2000, 9).unwrap()).unwrap();
        assert!(high.anomaly_rate < 0.01, "anomaly rate {}", high.anomaly_rate);
    }

    #[test]
    fn fm_sim_config_validation() {
        assert!(FmSimConfig::new(1.0, 1, 1000, 0).is_err());
        assert!(FmSimConfig::new(1.0, 8, 10, 0).is_err());
        assert!(FmSimConfig::new(-1.0, 8, 1000, 0).is_err());
    }
}
