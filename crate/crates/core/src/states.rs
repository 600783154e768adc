//! Single-mode Gaussian state numerics: quadrature statistics of squeezed
//! and coherent states, the fixed-energy SNR optimum, and the loss channel.
//!
//! Quadrature convention: a = (x + iy)/2, so a coherent state has unit
//! variance in both quadratures.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the squeeze-parameter normalization |mu|^2 - |nu|^2 = 1.
pub const SQUEEZE_NORM_TOL: f64 = 1e-10;

/// One bosonic mode as quadrature means plus a 2x2 symmetric covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianModeState {
    pub mean_x: f64,
    pub mean_y: f64,
    pub vxx: f64,
    pub vyy: f64,
    pub vxy: f64,
}

impl GaussianModeState {
    /// Validates positivity and the uncertainty relation
    /// vxx vyy - vxy^2 >= 1 (equality for pure Gaussian states).
    pub fn new(mean_x: f64, mean_y: f64, vxx: f64, vyy: f64, vxy: f64) -> Result<Self> {
        if vxx <= 0.0 || vyy <= 0.0 {
            return Err(Error::validation("quadrature variances must be positive"));
        }
        let det = vxx * vyy - vxy * vxy;
        if det < 1.0 - 1e-9 {
            return Err(Error::validation(format!(
                "covariance determinant {det} violates the uncertainty relation"
            )));
        }
        Ok(Self { mean_x, mean_y, vxx, vyy, vxy })
    }

    /// Coherent state: unit variance in both quadratures.
    pub fn coherent(mean_x: f64, mean_y: f64) -> Self {
        Self { mean_x, mean_y, vxx: 1.0, vyy: 1.0, vxy: 0.0 }
    }

    /// Principal-axis Gaussian state of a two-photon coherent state.
    pub fn from_tcs(params: &TcsParams) -> Self {
        let stats = tcs_stats_unchecked(params);
        Self {
            mean_x: stats.mean_x,
            mean_y: stats.mean_y,
            vxx: stats.var_x,
            vyy: stats.var_y,
            vxy: 0.0,
        }
    }

    pub fn covariance_det(&self) -> f64 {
        self.vxx * self.vyy - self.vxy * self.vxy
    }

    /// Loss channel with transmittance `eta`: means scale by sqrt(eta) and
    /// the covariance relaxes toward the coherent-state identity,
    /// V -> eta V + (1 - eta) I.
    pub fn with_loss(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!("transmittance {eta} outside [0, 1]")));
        }
        let root = eta.sqrt();
        Ok(Self {
            mean_x: self.mean_x * root,
            mean_y: self.mean_y * root,
            vxx: eta * self.vxx + (1.0 - eta),
            vyy: eta * self.vyy + (1.0 - eta),
            vxy: eta * self.vxy,
        })
    }
}

/// Squeeze and displacement parameters of a two-photon coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcsParams {
    pub mu: Complex64,
    pub nu: Complex64,
    pub alpha: Complex64,
}

impl TcsParams {
    pub fn new(mu: Complex64, nu: Complex64, alpha: Complex64) -> Result<Self> {
        let norm = mu.norm_sqr() - nu.norm_sqr();
        if (norm - 1.0).abs() > SQUEEZE_NORM_TOL {
            return Err(Error::validation(format!(
                "|mu|^2 - |nu|^2 = {norm}, expected 1 within {SQUEEZE_NORM_TOL}"
            )));
        }
        Ok(Self { mu, nu, alpha })
    }

    /// Real squeeze parameters: mu = sqrt(1 + nu^2).
    pub fn real(nu: f64, alpha: f64) -> Self {
        Self {
            mu: Complex64::new((1.0 + nu * nu).sqrt(), 0.0),
            nu: Complex64::new(nu, 0.0),
            alpha: Complex64::new(alpha, 0.0),
        }
    }

    /// Coherent state as the nu = 0 special case.
    pub fn coherent(alpha: Complex64) -> Self {
        Self { mu: Complex64::new(1.0, 0.0), nu: Complex64::new(0.0, 0.0), alpha }
    }
}

/// Quadrature statistics of a two-photon coherent state, in the rotated
/// frame that diagonalizes the squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcsStats {
    pub mean_x: f64,
    pub mean_y: f64,
    /// Squeezed-quadrature variance (|mu| - |nu|)^2.
    pub var_x: f64,
    /// Anti-squeezed-quadrature variance (|mu| + |nu|)^2.
    pub var_y: f64,
    /// Mean photon number |alpha|^2 + |nu|^2.
    pub mean_photons: f64,
}

/// Means, principal-axis variances, and energy of a TCS.
pub fn tcs_stats(params: &TcsParams) -> Result<TcsStats> {
    let norm = params.mu.norm_sqr() - params.nu.norm_sqr();
    if (norm - 1.0).abs() > SQUEEZE_NORM_TOL {
        return Err(Error::validation(format!(
            "|mu|^2 - |nu|^2 = {norm}, expected 1 within {SQUEEZE_NORM_TOL}"
        )));
    }
    Ok(tcs_stats_unchecked(params))
}

fn tcs_stats_unchecked(params: &TcsParams) -> TcsStats {
    let mu = params.mu.norm();
    let nu = params.nu.norm();
    TcsStats {
        mean_x: 2.0 * params.alpha.re,
        mean_y: 2.0 * params.alpha.im,
        var_x: (mu - nu) * (mu - nu),
        var_y: (mu + nu) * (mu + nu),
        mean_photons: params.alpha.norm_sqr() + params.nu.norm_sqr(),
    }
}

/// Result of the fixed-energy single-quadrature SNR optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrOptimum {
    /// Optimal squeeze parameter nu = S / sqrt(2S + 1).
    pub nu_opt: f64,
    /// Optimal SNR 4S(S+1), attained by a TCS.
    pub snr_opt: f64,
    /// Coherent-state baseline 4S.
    pub snr_coherent: f64,
}

/// Maximizes the quadrature SNR <x>^2 / Var(x) over states of mean photon
/// number at most `s`. The optimum is a TCS with the energy split between
/// displacement and squeezing.
pub fn optimize_snr(s: f64) -> Result<SnrOptimum> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::domain("energy bound must be nonnegative and finite"));
    }
    let optimum = SnrOptimum {
        nu_opt: s / (2.0 * s + 1.0).sqrt(),
        snr_opt: 4.0 * s * (s + 1.0),
        snr_coherent: 4.0 * s,
    };
    debug_assert!(
        snr_grid_gap(s, optimum.snr_opt) <= 1e-4 * (1.0 + optimum.snr_opt),
        "closed-form SNR disagrees with grid search at S = {s}"
    );
    Ok(optimum)
}

/// SNR of a real TCS with squeeze nu under energy bound s; the remaining
/// energy s - nu^2 goes into displacement.
pub fn snr_objective(s: f64, nu: f64) -> f64 {
    let mu = (1.0 + nu * nu).sqrt();
    4.0 * (s - nu * nu) * (mu + nu) * (mu + nu)
}

#[allow(dead_code)]
fn snr_grid_gap(s: f64, closed_form: f64) -> f64 {
    let nu_hi = s.sqrt();
    let steps = (nu_hi / 1e-3).ceil() as usize;
    let mut best = 0.0f64;
    for i in 0..=steps {
        let nu = nu_hi * i as f64 / steps.max(1) as f64;
        best = best.max(snr_objective(s, nu));
    }
    (best - closed_form).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn coherent_case_is_unit_variance() {
        let p = TcsParams::real(0.0, 1.0);
        let s = tcs_stats(&p).unwrap();
        close(s.var_x, 1.0, 0.0);
        close(s.var_y, 1.0, 0.0);
        close(s.mean_x, 2.0, 0.0);
        close(s.mean_photons, 1.0, 0.0);
    }

    #[test]
    fn squeezed_stats_example() {
        let p = TcsParams::new(
            Complex64::new(1.25, 0.0),
            Complex64::new(0.75, 0.0),
            Complex64::new(2.0, 0.0),
        )
        .unwrap();
        let s = tcs_stats(&p).unwrap();
        close(s.var_x, 0.25, 1e-15);
        close(s.var_y, 4.0, 1e-15);
        close(s.var_x * s.var_y, 1.0, 1e-15);
        close(s.mean_x, 4.0, 0.0);
        close(s.mean_photons, 4.5625, 1e-15);
    }

    #[test]
    fn squeezed_vacuum_energy_is_nu_squared() {
        let p = TcsParams::new(
            Complex64::new(1.25, 0.0),
            Complex64::new(0.75, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        close(tcs_stats(&p).unwrap().mean_photons, 0.5625, 1e-15);
    }

    #[test]
    fn tcs_params_rejects_unnormalized() {
        assert!(TcsParams::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .is_err());
    }

    #[test]
    fn snr_optimum_examples() {
        let z = optimize_snr(0.0).unwrap();
        close(z.snr_opt, 0.0, 0.0);
        let one = optimize_snr(1.0).unwrap();
        close(one.nu_opt, 1.0 / 3.0f64.sqrt(), 1e-15);
        close(one.snr_opt, 8.0, 1e-12);
        close(one.snr_coherent, 4.0, 0.0);
        let two = optimize_snr(2.0).unwrap();
        close(two.snr_opt, 24.0, 1e-12);
    }

    #[test]
    fn snr_closed_form_matches_fine_grid_search() {
        // Independent brute-force oracle on the constrained objective.
        for &s in &[0.5, 1.0, 2.0] {
            let opt = optimize_snr(s).unwrap();
            let nu_hi = s.sqrt();
            let steps = (nu_hi / 1e-5).ceil() as usize;
            let mut best = f64::MIN;
            for i in 0..=steps {
                let nu = nu_hi * i as f64 / steps as f64;
                best = best.max(snr_objective(s, nu));
            }
            assert!((best - opt.snr_opt).abs() / opt.snr_opt <= 1e-6);
            assert!(best <= opt.snr_opt + 1e-12);
        }
    }

    #[test]
    fn snr_beats_coherent_strictly_for_positive_energy() {
        for &s in &[0.1, 1.0, 5.0, 50.0] {
            let opt = optimize_snr(s).unwrap();
            assert!(opt.snr_opt > opt.snr_coherent);
        }
        let zero = optimize_snr(0.0).unwrap();
        close(zero.snr_opt, zero.snr_coherent, 0.0);
    }

    #[test]
    fn loss_keeps_coherent_states_coherent() {
        let c = GaussianModeState::coherent(2.0, -1.0);
        for &eta in &[0.0, 0.3, 1.0] {
            let out = c.with_loss(eta).unwrap();
            close(out.vxx, 1.0, 1e-15);
            close(out.vyy, 1.0, 1e-15);
            close(out.mean_x, 2.0 * eta.sqrt(), 1e-15);
        }
    }

    #[test]
    fn loss_on_squeezed_variance_example() {
        let state = GaussianModeState::new(0.0, 0.0, 0.1, 10.0, 0.0).unwrap();
        let out = state.with_loss(0.5).unwrap();
        close(out.vxx, 0.55, 1e-15);
        close(out.vyy, 5.5, 1e-15);
    }

    #[test]
    fn loss_composes_as_semigroup() {
        let state = GaussianModeState::new(1.0, -2.0, 0.2, 5.0, 0.1).unwrap();
        let a = state.with_loss(0.7).unwrap().with_loss(0.4).unwrap();
        let b = state.with_loss(0.28).unwrap();
        close(a.mean_x, b.mean_x, 1e-12);
        close(a.mean_y, b.mean_y, 1e-12);
        close(a.vxx, b.vxx, 1e-12);
        close(a.vyy, b.vyy, 1e-12);
        close(a.vxy, b.vxy, 1e-12);
    }

    #[test]
    fn loss_covariance_floor() {
        // || V(eta) - I || <= eta || V(1) - I ||, entrywise here.
        let state = GaussianModeState::new(0.0, 0.0, 0.1, 10.0, 0.0).unwrap();
        for &eta in &[0.9, 0.5, 0.1] {
            let out = state.with_loss(eta).unwrap();
            assert!((out.vxx - 1.0).abs() <= eta * (state.vxx - 1.0).abs() + 1e-12);
            assert!((out.vyy - 1.0).abs() <= eta * (state.vyy - 1.0).abs() + 1e-12);
        }
    }

    #[test]
    fn state_validation_rejects_bad_covariance() {
        assert!(GaussianModeState::new(0.0, 0.0, 0.5, 0.5, 0.0).is_err());
        assert!(GaussianModeState::new(0.0, 0.0, -1.0, 2.0, 0.0).is_err());
    }
}
