//! Quantum amplifier models as statistics transforms, the photon-number
//! duplicator, and the error laws of repeated amplifier chains.

use rand::Rng;

use crate::error::{Error, Result};
use crate::photon::PhotonDistribution;
use crate::states::GaussianModeState;

/// The amplifier families. Each is noiseless for its matched detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplifierKind {
    /// Phase-insensitive linear amplifier; acts on Gaussian states.
    Pia,
    /// Phase-sensitive linear amplifier; acts on Gaussian states.
    Psa,
    /// Photon-number amplifier (integer gain); acts on count statistics.
    Pna,
    /// Photon on-off amplifier; acts on count statistics. Its parameter is
    /// the restored on-pulse mean photon number rather than a gain.
    Poa,
}

impl AmplifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            AmplifierKind::Pia => "pia",
            AmplifierKind::Psa => "psa",
            AmplifierKind::Pna => "pna",
            AmplifierKind::Poa => "poa",
        }
    }
}

impl std::str::FromStr for AmplifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pia" => Ok(AmplifierKind::Pia),
            "psa" => Ok(AmplifierKind::Psa),
            "pna" => Ok(AmplifierKind::Pna),
            "poa" => Ok(AmplifierKind::Poa),
            other => Err(Error::validation(format!(
                "unknown amplifier kind {other:?}; valid kinds: pia, psa, pna, poa"
            ))),
        }
    }
}

/// A single-mode signal in whichever representation an amplifier needs.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeRepr {
    Gaussian(GaussianModeState),
    Counts(PhotonDistribution),
}

/// Applies the amplifier to a compatible representation. `param` is the
/// power gain G for PIA/PSA/PNA and the on-pulse energy for POA.
pub fn amplify(kind: AmplifierKind, param: f64, input: &ModeRepr) -> Result<ModeRepr> {
    match (kind, input) {
        (AmplifierKind::Pia, ModeRepr::Gaussian(s)) => Ok(ModeRepr::Gaussian(pia(param, s)?)),
        (AmplifierKind::Psa, ModeRepr::Gaussian(s)) => Ok(ModeRepr::Gaussian(psa(param, s)?)),
        (AmplifierKind::Pna, ModeRepr::Counts(d)) => {
            if param < 1.0 || param.fract().abs() > 1e-9 {
                return Err(Error::domain(format!(
                    "photon-number amplifier gain must be a positive integer, got {param}"
                )));
            }
            Ok(ModeRepr::Counts(pna(param as usize, d)))
        }
        (AmplifierKind::Poa, ModeRepr::Counts(d)) => Ok(ModeRepr::Counts(poa(param, d)?)),
        (AmplifierKind::Pia | AmplifierKind::Psa, ModeRepr::Counts(_)) => Err(Error::domain(
            "linear amplifiers act on the Gaussian representation",
        )),
        (AmplifierKind::Pna | AmplifierKind::Poa, ModeRepr::Gaussian(_)) => Err(Error::domain(
            "count amplifiers act on the photon-number representation",
        )),
    }
}

/// Phase-insensitive amplification: means scale by sqrt(G) and both
/// quadratures gain (G - 1) units of added noise.
pub fn pia(gain: f64, state: &GaussianModeState) -> Result<GaussianModeState> {
    if gain < 1.0 {
        return Err(Error::domain(format!("PIA gain {gain} must be at least 1")));
    }
    let root = gain.sqrt();
    Ok(GaussianModeState {
        mean_x: state.mean_x * root,
        mean_y: state.mean_y * root,
        vxx: gain * state.vxx + (gain - 1.0),
        vyy: gain * state.vyy + (gain - 1.0),
        vxy: gain * state.vxy,
    })
}

/// Phase-sensitive amplification: one quadrature scales up by sqrt(G), the
/// other down, with no added noise.
pub fn psa(gain: f64, state: &GaussianModeState) -> Result<GaussianModeState> {
    if gain <= 0.0 {
        return Err(Error::domain(format!("PSA gain {gain} must be positive")));
    }
    let root = gain.sqrt();
    Ok(GaussianModeState {
        mean_x: state.mean_x * root,
        mean_y: state.mean_y / root,
        vxx: gain * state.vxx,
        vyy: state.vyy / gain,
        vxy: state.vxy,
    })
}

/// Photon-number amplification: every count n maps to G n.
pub fn pna(gain: usize, dist: &PhotonDistribution) -> PhotonDistribution {
    let gain = gain.max(1);
    let probs_in = dist.probs();
    let mut out = vec![0.0; (probs_in.len() - 1) * gain + 1];
    for (n, &p) in probs_in.iter().enumerate() {
        out[n * gain] += p;
    }
    PhotonDistribution::new(out).expect("relabeling counts preserves normalization")
}

/// Photon on-off amplification: vacuum passes through, everything else is
/// restored to a coherent pulse of the given mean photon number.
pub fn poa(on_energy: f64, dist: &PhotonDistribution) -> Result<PhotonDistribution> {
    if on_energy < 0.0 {
        return Err(Error::domain("on-pulse energy must be nonnegative"));
    }
    let p_vacuum = dist.prob(0);
    let p_on = 1.0 - p_vacuum;
    let pulse = PhotonDistribution::poisson(on_energy)?;
    let len = pulse.len().max(1);
    let mut out = vec![0.0; len];
    out[0] = p_vacuum;
    for (n, &p) in pulse.probs().iter().enumerate() {
        out[n] += p_on * p;
    }
    PhotonDistribution::new(out)
}

/// Photon-number duplication: both outputs carry the input counting
/// statistics, perfectly correlated.
pub fn duplicate_counts(input: &PhotonDistribution) -> (PhotonDistribution, PhotonDistribution) {
    (input.clone(), input.clone())
}

/// One correlated sample pair from the duplicator outputs.
pub fn sample_duplicated(input: &PhotonDistribution, rng: &mut impl Rng) -> (usize, usize) {
    let n = input.sample(rng);
    (n, n)
}

/// The PNA chain functions f_n(G): f_0 = 0 and
/// f_{k+1} = (1 - 1/G)^G [1 + f_k/(G - 1)]^G.
/// Returns (f_n, 1 - f_n); the error exponent of the n-stage chain is the
/// second component. Evaluated through logs so large G cannot overflow.
pub fn pna_chain_exponent(gain: f64, stages: usize) -> Result<(f64, f64)> {
    if gain <= 1.0 {
        return Err(Error::domain(format!("chain gain {gain} must exceed 1")));
    }
    let mut f = 0.0f64;
    for _ in 0..stages {
        let log_f =
            gain * (-1.0 / gain).ln_1p() + gain * (f / (gain - 1.0)).ln_1p();
        f = log_f.exp();
    }
    Ok((f, 1.0 - f))
}

/// Error probability of an n-stage PNA chain with on-off signaling at
/// source energy `s`: P_e = exp(-s (1 - f_n)) / 2.
pub fn pna_chain_error(s: f64, gain: f64, stages: usize) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::domain("source energy must be nonnegative"));
    }
    let (_, exponent) = pna_chain_exponent(gain, stages)?;
    Ok(0.5 * (-s * exponent).exp())
}

/// Error probability of an n-stage POA chain with on-off signaling:
/// P_e = [1 - (1 - e^{-s})^n] / 2, identical to an n-stage repeater.
pub fn poa_chain_error(s: f64, stages: usize) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::domain("source energy must be nonnegative"));
    }
    let log_success = stages as f64 * (-(-s).exp()).ln_1p();
    Ok(0.5 * (-log_success.exp_m1()))
}

/// Error exponent of an n-stage PIA chain under the Gaussian
/// approximation for direct detection: 1/(4n).
pub fn pia_chain_exponent(stages: usize) -> Result<f64> {
    if stages == 0 {
        return Err(Error::domain("PIA chain needs at least one stage"));
    }
    Ok(1.0 / (4.0 * stages as f64))
}

/// One row of the chain comparison: normalized exponents ln(2 P_e)/S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainComparisonRow {
    pub stages: usize,
    pub pia: f64,
    pub pna: f64,
    pub poa: f64,
}

/// Normalized error exponents ln(2 P_e)/S for chains of 1..=n_max stages.
/// The PIA column is independent of S and G, the PNA column independent of
/// S, and the POA column independent of G.
pub fn chain_comparison(s: f64, gain: f64, n_max: usize) -> Result<Vec<ChainComparisonRow>> {
    if s <= 0.0 {
        return Err(Error::domain("source energy must be positive"));
    }
    if n_max == 0 {
        return Err(Error::domain("need at least one stage"));
    }
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (_, pna_exp) = pna_chain_exponent(gain, n)?;
        // ln(2 P_e)/S for the POA chain, evaluated without forming P_e.
        let log_success = n as f64 * (-(-s).exp()).ln_1p();
        let poa = (-log_success.exp_m1()).ln() / s;
        rows.push(ChainComparisonRow {
            stages: n,
            pia: -pia_chain_exponent(n)?,
            pna: -pna_exp,
            poa,
        });
    }
    Ok(rows)
}

/// Description of an amplifier chain in the canonical configuration where
/// each stage's loss cancels its gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub kind: AmplifierKind,
    pub gain: f64,
    pub stages: usize,
    /// On-pulse mean photon number at the source.
    pub source_energy: f64,
    /// Transmittance between adjacent amplifiers.
    pub interstage_loss: f64,
}

impl ChainSpec {
    /// Canonical chain: interstage transmittance G^{-1} exactly cancels
    /// the gain.
    pub fn canonical(kind: AmplifierKind, gain: f64, stages: usize, source_energy: f64) -> Result<Self> {
        if gain <= 1.0 {
            return Err(Error::domain(format!("chain gain {gain} must exceed 1")));
        }
        if source_energy < 0.0 {
            return Err(Error::domain("source energy must be nonnegative"));
        }
        Ok(Self { kind, gain, stages, source_energy, interstage_loss: 1.0 / gain })
    }

    /// Error probability of on-off signaling through the chain with the
    /// matched detection, where the chain law is known in closed form.
    pub fn error_probability(&self) -> Result<f64> {
        match self.kind {
            AmplifierKind::Pna => pna_chain_error(self.source_energy, self.gain, self.stages),
            AmplifierKind::Poa => poa_chain_error(self.source_energy, self.stages),
            AmplifierKind::Pia => {
                let exponent = if self.stages == 0 {
                    return Ok(0.0);
                } else {
                    pia_chain_exponent(self.stages)?
                };
                Ok(0.5 * (-self.source_energy * exponent).exp())
            }
            AmplifierKind::Psa => Err(Error::config(
                "no closed-form chain error law for the PSA with direct detection",
            )),
        }
    }
}
