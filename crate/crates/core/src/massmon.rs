//! Gaussian-state simulation of repeated free-mass position measurements:
//! the standard quantum limit, contractive-state evolution, reference-state
//! measurement statistics, and a force-monitoring protocol.
//!
//! Readings live in the dimensionless plane alpha = (alpha1, alpha2) with
//! alpha1 = x sqrt(m omega / 2 hbar) and alpha2 = p / sqrt(2 hbar m omega).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::states::SQUEEZE_NORM_TOL;

/// Unit system of the simulated mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    /// Angular frequency of the reading map between (x, p) and alpha.
    pub omega: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, omega: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        if hbar <= 0.0 || mass <= 0.0 || omega <= 0.0 {
            return Err(Error::domain("physical constants must be positive"));
        }
        Ok(Self { hbar, mass, omega })
    }

    /// Scale factors (a, b) of the reading map alpha1 = a x, alpha2 = b p.
    fn alpha_scales(&self) -> (f64, f64) {
        (
            (self.mass * self.omega / (2.0 * self.hbar)).sqrt(),
            1.0 / (2.0 * self.hbar * self.mass * self.omega).sqrt(),
        )
    }
}

/// Gaussian state of a free mass: means and the (Vxx, Vxp, Vpp) triple,
/// where Vxp is the symmetrized covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassGaussianState {
    pub mean_x: f64,
    pub mean_p: f64,
    pub vxx: f64,
    pub vxp: f64,
    pub vpp: f64,
}

impl MassGaussianState {
    /// Validates positivity and Vxx Vpp - Vxp^2 >= hbar^2/4.
    pub fn new(
        mean_x: f64,
        mean_p: f64,
        vxx: f64,
        vxp: f64,
        vpp: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        if vxx <= 0.0 || vpp <= 0.0 {
            return Err(Error::validation("position and momentum variances must be positive"));
        }
        let det = vxx * vpp - vxp * vxp;
        let floor = consts.hbar * consts.hbar / 4.0;
        if det < floor * (1.0 - 1e-9) {
            return Err(Error::validation(format!(
                "covariance determinant {det} violates the uncertainty floor {floor}"
            )));
        }
        Ok(Self { mean_x, mean_p, vxx, vxp, vpp })
    }

    pub fn covariance_det(&self) -> f64 {
        self.vxx * self.vpp - self.vxp * self.vxp
    }

    /// Position variance after free evolution for time `t`.
    pub fn position_variance_at(&self, t: f64, consts: &PhysicalConstants) -> f64 {
        let tau = t / consts.mass;
        self.vxx + 2.0 * tau * self.vxp + tau * tau * self.vpp
    }

    /// Time of minimum position variance under free evolution, if the
    /// state contracts (Vxp < 0).
    pub fn contraction_time(&self, consts: &PhysicalConstants) -> Option<f64> {
        if self.vxp < 0.0 {
            Some(-consts.mass * self.vxp / self.vpp)
        } else {
            None
        }
    }
}

/// Squeeze parameters, mode frequency, and reading of a generalized
/// minimum-uncertainty wave packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractiveParams {
    pub mu: Complex64,
    pub nu: Complex64,
    /// Mode frequency of the wave packet.
    pub omega: f64,
    /// Reading that displaces the packet, in alpha units.
    pub alpha: Complex64,
}

impl ContractiveParams {
    pub fn new(mu: Complex64, nu: Complex64, omega: f64, alpha: Complex64) -> Result<Self> {
        let norm = mu.norm_sqr() - nu.norm_sqr();
        if (norm - 1.0).abs() > SQUEEZE_NORM_TOL {
            return Err(Error::validation(format!(
                "|mu|^2 - |nu|^2 = {norm}, expected 1 within {SQUEEZE_NORM_TOL}"
            )));
        }
        if omega <= 0.0 {
            return Err(Error::domain("mode frequency must be positive"));
        }
        Ok(Self { mu, nu, omega, alpha })
    }

    /// Ground-state wave packet of the given frequency.
    pub fn ground(omega: f64) -> Self {
        Self {
            mu: Complex64::new(1.0, 0.0),
            nu: Complex64::new(0.0, 0.0),
            omega,
            alpha: Complex64::new(0.0, 0.0),
        }
    }

    /// Real squeeze of parameter r: position spread scaled by e^{-r}.
    pub fn position_squeezed(r: f64, omega: f64) -> Self {
        Self {
            mu: Complex64::new(r.cosh(), 0.0),
            nu: Complex64::new(r.sinh(), 0.0),
            omega,
            alpha: Complex64::new(0.0, 0.0),
        }
    }

    /// Solves for the packet that realizes a pure covariance triple
    /// (requires Vxx Vpp - Vxp^2 = hbar^2/4) with the given means.
    pub fn from_moments(
        vxx: f64,
        vxp: f64,
        vpp: f64,
        mean_x: f64,
        mean_p: f64,
        omega: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        if vxx <= 0.0 || vpp <= 0.0 || omega <= 0.0 {
            return Err(Error::domain("variances and frequency must be positive"));
        }
        let hbar = consts.hbar;
        let det = vxx * vpp - vxp * vxp;
        if (det - hbar * hbar / 4.0).abs() > 1e-9 * hbar * hbar {
            return Err(Error::validation(format!(
                "covariance determinant {det} is not hbar^2/4; only pure packets are representable"
            )));
        }
        let m = consts.mass;
        let a = 2.0 * m * omega * vxx / hbar; // |mu - nu|^2
        let b = 2.0 * vpp / (hbar * m * omega); // |mu + nu|^2
        let c = vxp / hbar; // Im(mu conj(nu))
        let cosh2r = 0.5 * (a + b);
        let sinh2r = (cosh2r * cosh2r - 1.0).max(0.0).sqrt();
        let (mu, nu) = if sinh2r < 1e-12 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            let cos_t = 0.5 * (b - a) / sinh2r;
            let sin_t = -2.0 * c / sinh2r;
            let r = 0.5 * (cosh2r + sinh2r).ln();
            (
                Complex64::new(r.cosh(), 0.0),
                Complex64::new(cos_t, sin_t) * r.sinh(),
            )
        };
        let alpha = Complex64::new(
            mean_x * (m * omega / (2.0 * hbar)).sqrt(),
            mean_p / (2.0 * hbar * m * omega).sqrt(),
        );
        Self::new(mu, nu, omega, alpha)
    }
}

/// Standard quantum limit on the position variance a time `t` after a
/// position measurement: hbar t / m.
pub fn sql_bound(t: f64, consts: &PhysicalConstants) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::domain("elapsed time must be nonnegative"));
    }
    Ok(consts.hbar * t / consts.mass)
}

/// Moments of the wave packet |mu nu alpha omega>. The sign of Vxp is such
/// that packets with negative Im(mu conj(nu)) contract under free
/// evolution, and the determinant identity Vxx Vpp - Vxp^2 = hbar^2/4
/// holds exactly.
pub fn tcs_to_moments(
    params: &ContractiveParams,
    consts: &PhysicalConstants,
) -> Result<MassGaussianState> {
    let norm = params.mu.norm_sqr() - params.nu.norm_sqr();
    if (norm - 1.0).abs() > SQUEEZE_NORM_TOL {
        return Err(Error::validation(format!(
            "|mu|^2 - |nu|^2 = {norm}, expected 1 within {SQUEEZE_NORM_TOL}"
        )));
    }
    let hbar = consts.hbar;
    let m = consts.mass;
    let omega = params.omega;
    let diff = params.mu - params.nu;
    let sum = params.mu + params.nu;
    let vxx = hbar / (2.0 * m * omega) * diff.norm_sqr();
    let vpp = hbar * m * omega / 2.0 * sum.norm_sqr();
    let vxp = hbar * (params.mu * params.nu.conj()).im;
    let mean_x = params.alpha.re * (2.0 * hbar / (m * omega)).sqrt();
    let mean_p = params.alpha.im * (2.0 * hbar * m * omega).sqrt();
    MassGaussianState::new(mean_x, mean_p, vxx, vxp, vpp, consts)
}

/// A piecewise-constant force: a list of (duration, value) segments starting
/// at time zero; zero force beyond the last segment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseForce {
    segments: Vec<(f64, f64)>,
}

impl PiecewiseForce {
    pub fn zero() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn constant(value: f64, duration: f64) -> Result<Self> {
        Self::from_segments(vec![(duration, value)])
    }

    pub fn from_segments(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.iter().any(|&(d, _)| d <= 0.0 || !d.is_finite()) {
            return Err(Error::validation("segment durations must be positive and finite"));
        }
        Ok(Self { segments })
    }

    /// Equal-duration samples, each lasting `dt`.
    pub fn from_samples(values: &[f64], dt: f64) -> Result<Self> {
        if dt <= 0.0 {
            return Err(Error::validation("sample spacing must be positive"));
        }
        Self::from_segments(values.iter().map(|&v| (dt, v)).collect())
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Force value at absolute time `t` (zero past the end).
    pub fn value_at(&self, t: f64) -> f64 {
        let mut elapsed = 0.0;
        for &(duration, value) in &self.segments {
            elapsed += duration;
            if t < elapsed {
                return value;
            }
        }
        0.0
    }

    /// Breakpoints of the profile that fall strictly inside (0, horizon).
    fn breakpoints_within(&self, horizon: f64, out: &mut Vec<f64>) {
        let mut elapsed = 0.0;
        for &(duration, _) in &self.segments {
            elapsed += duration;
            if elapsed >= horizon {
                break;
            }
            out.push(elapsed);
        }
    }

    /// The restriction to [start, start + duration), re-based at zero.
    pub fn window(&self, start: f64, duration: f64) -> Self {
        let mut segments = Vec::new();
        let mut elapsed = 0.0;
        let end = start + duration;
        for &(seg_dur, value) in &self.segments {
            let seg_start = elapsed;
            let seg_end = elapsed + seg_dur;
            elapsed = seg_end;
            let lo = seg_start.max(start);
            let hi = seg_end.min(end);
            if hi > lo {
                segments.push((hi - lo, value));
            }
            if seg_end >= end {
                break;
            }
        }
        Self { segments }
    }
}

/// Free evolution for time `t` under classical forces f1 (coupled to
/// position) and f2 (coupled to momentum). Means integrate the forces
/// exactly per piecewise-constant segment; the covariance shears with no
/// force contribution.
pub fn free_evolve(
    state: &MassGaussianState,
    t: f64,
    f1: &PiecewiseForce,
    f2: &PiecewiseForce,
    consts: &PhysicalConstants,
) -> Result<MassGaussianState> {
    if t < 0.0 {
        return Err(Error::domain("evolution time must be nonnegative"));
    }
    if t == 0.0 {
        return Ok(*state);
    }
    let m = consts.mass;

    let mut cuts = vec![0.0, t];
    f1.breakpoints_within(t, &mut cuts);
    f2.breakpoints_within(t, &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut x = state.mean_x;
    let mut p = state.mean_p;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let dt = b - a;
        let mid = 0.5 * (a + b);
        let g1 = f1.value_at(mid);
        let g2 = f2.value_at(mid);
        x += p * dt / m + g2 * dt - g1 * dt * dt / (2.0 * m);
        p -= g1 * dt;
    }

    let tau = t / m;
    Ok(MassGaussianState {
        mean_x: x,
        mean_p: p,
        vxx: state.vxx + 2.0 * tau * state.vxp + tau * tau * state.vpp,
        vxp: state.vxp + tau * state.vpp,
        vpp: state.vpp,
    })
}

/// How the post-measurement packet is recentered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetMode {
    /// The packet is displaced to the reading.
    ReadingDependent,
    /// The packet always returns to zero mean.
    ZeroMean,
}

/// One measurement outcome in the alpha plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading {
    pub alpha1: f64,
    pub alpha2: f64,
}

/// Reference-state measurement of the mass: the reading is Gaussian with
/// mean at the state mean (alpha units) and covariance equal to the state
/// covariance plus the reference-packet covariance. The post-measurement
/// state is the reset packet recentered per `mode`.
pub fn measure_gl(
    state: &MassGaussianState,
    reference: &ContractiveParams,
    reset: &ContractiveParams,
    mode: ResetMode,
    consts: &PhysicalConstants,
    rng: &mut impl Rng,
) -> Result<(Reading, MassGaussianState)> {
    let reference_zero = ContractiveParams { alpha: Complex64::new(0.0, 0.0), ..*reference };
    let ref_moments = tcs_to_moments(&reference_zero, consts)?;
    let (a, b) = consts.alpha_scales();

    let mean1 = a * state.mean_x;
    let mean2 = b * state.mean_p;
    let c11 = a * a * (state.vxx + ref_moments.vxx);
    let c22 = b * b * (state.vpp + ref_moments.vpp);
    let c12 = a * b * (state.vxp + ref_moments.vxp);

    // Cholesky factor of the 2x2 reading covariance.
    let l11 = c11.sqrt();
    let l21 = c12 / l11;
    let l22 = (c22 - l21 * l21).max(0.0).sqrt();
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    let reading = Reading {
        alpha1: mean1 + l11 * z1,
        alpha2: mean2 + l21 * z1 + l22 * z2,
    };

    let mut post = tcs_to_moments(reset, consts)?;
    match mode {
        ResetMode::ReadingDependent => {
            post.mean_x = reading.alpha1 / a;
            post.mean_p = reading.alpha2 / b;
        }
        ResetMode::ZeroMean => {
            post.mean_x = 0.0;
            post.mean_p = 0.0;
        }
    }
    Ok((reading, post))
}

/// A monitoring schedule: measurement intervals, the reference and reset
/// packets, the recentering mode, and the position-coupled force to
/// estimate (the momentum-coupled force is held at zero).
#[derive(Debug, Clone, PartialEq)]
pub struct MonitoringPlan {
    pub intervals: Vec<f64>,
    pub reference: ContractiveParams,
    pub reset: ContractiveParams,
    pub reset_mode: ResetMode,
    pub force: PiecewiseForce,
    pub seed: u64,
}

impl MonitoringPlan {
    pub fn validate(&self) -> Result<()> {
        if self.intervals.is_empty() {
            return Err(Error::validation("monitoring plan needs at least one interval"));
        }
        if self.intervals.iter().any(|&t| t <= 0.0 || !t.is_finite()) {
            return Err(Error::validation("intervals must be positive and finite"));
        }
        Ok(())
    }
}

/// One measurement record of a monitoring run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorStep {
    /// Absolute time of the measurement.
    pub time: f64,
    pub reading1: f64,
    pub reading2: f64,
    /// Zero-force propagation of the previous post-measurement mean, in
    /// alpha units; the known part subtracted from the reading.
    pub predicted1: f64,
    /// reading1 - predicted1: force signal plus measurement noise.
    pub residual: f64,
    /// Constant-force estimate for the elapsed interval, -2 m r_x / t^2
    /// with the residual converted to position units.
    pub force_estimate: f64,
}

/// Runs the alternating evolve/measure protocol and returns one record per
/// measurement. Deterministic for a fixed plan seed.
pub fn run_monitoring(
    plan: &MonitoringPlan,
    consts: &PhysicalConstants,
) -> Result<Vec<MonitorStep>> {
    plan.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let (a, _) = consts.alpha_scales();
    let m = consts.mass;
    let zero_force = PiecewiseForce::zero();

    let mut state = tcs_to_moments(&plan.reset, consts)?;
    let mut known_x = state.mean_x;
    let mut known_p = state.mean_p;
    let mut now = 0.0f64;
    let mut steps = Vec::with_capacity(plan.intervals.len());

    for &dt in &plan.intervals {
        let window = plan.force.window(now, dt);
        state = free_evolve(&state, dt, &window, &zero_force, consts)?;
        let predicted_x = known_x + known_p * dt / m;
        let predicted1 = a * predicted_x;

        let (reading, post) =
            measure_gl(&state, &plan.reference, &plan.reset, plan.reset_mode, consts, &mut rng)?;
        let residual = reading.alpha1 - predicted1;
        let residual_x = residual / a;
        let force_estimate = -2.0 * m * residual_x / (dt * dt);

        now += dt;
        steps.push(MonitorStep {
            time: now,
            reading1: reading.alpha1,
            reading2: reading.alpha2,
            predicted1,
            residual,
            force_estimate,
        });

        state = post;
        known_x = post.mean_x;
        known_p = post.mean_p;
    }
    Ok(steps)
}
