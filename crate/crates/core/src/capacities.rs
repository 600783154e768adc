//! Narrowband boson-channel capacities under an average-photon-number
//! constraint, and the lossy-channel upper bound.
//!
//! Four of the five capacities are closed forms; the coherent-state
//! photon-counting capacity is computed numerically as the constrained
//! capacity of a discrete Poisson channel.

use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// The five narrowband capacities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityKind {
    /// Number states with photon counting: the ultimate rate W g(S).
    NumberState,
    /// Squeezed states on one quadrature with homodyne detection.
    TcsHomodyne,
    /// Coherent states with heterodyne detection (both quadratures).
    CoherentHeterodyne,
    /// Coherent states with homodyne detection (one quadrature).
    CoherentHomodyne,
    /// Coherent states with photon counting (Poisson channel, numerical).
    CoherentPhotonCounting,
}

impl CapacityKind {
    pub const ALL: [CapacityKind; 5] = [
        CapacityKind::NumberState,
        CapacityKind::TcsHomodyne,
        CapacityKind::CoherentHeterodyne,
        CapacityKind::CoherentHomodyne,
        CapacityKind::CoherentPhotonCounting,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CapacityKind::NumberState => "number",
            CapacityKind::TcsHomodyne => "tcs-homodyne",
            CapacityKind::CoherentHeterodyne => "coherent-heterodyne",
            CapacityKind::CoherentHomodyne => "coherent-homodyne",
            CapacityKind::CoherentPhotonCounting => "coherent-counting",
        }
    }
}

impl std::str::FromStr for CapacityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CapacityKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = CapacityKind::ALL.iter().map(|k| k.name()).collect();
                Error::validation(format!(
                    "unknown capacity kind {s:?}; valid kinds: {}",
                    names.join(", ")
                ))
            })
    }
}

/// One sampled capacity curve: (photons per mode, bits per second) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCurve {
    pub kind: CapacityKind,
    /// Modes per second; 1 for per-mode curves.
    pub bandwidth: f64,
    /// Transmittance applied to the source energy; 1 = lossless.
    pub eta: f64,
    samples: Vec<(f64, f64)>,
}

impl CapacityCurve {
    /// Requires strictly increasing energies and nonnegative, nondecreasing
    /// capacities.
    pub fn new(
        kind: CapacityKind,
        bandwidth: f64,
        eta: f64,
        samples: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::validation("capacity curve must have at least one sample"));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::validation("energy grid must be strictly increasing"));
            }
            if w[1].1 + 1e-9 < w[0].1 {
                return Err(Error::validation(format!(
                    "capacity decreases from {} to {} along the grid",
                    w[0].1, w[1].1
                )));
            }
        }
        if samples.iter().any(|&(_, c)| c < 0.0) {
            return Err(Error::validation("capacities must be nonnegative"));
        }
        Ok(Self { kind, bandwidth, eta, samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }
}

/// Options for the numerical Poisson-channel capacity solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonSolverOptions {
    /// Number of points on the input-intensity grid.
    pub grid_points: usize,
    /// Grid upper bound is `lambda_max_factor * (S + 1)`.
    pub lambda_max_factor: f64,
    /// Output count truncation; resolved from the grid bound when `None`.
    pub n_max: Option<usize>,
    /// Convergence tolerance on successive capacity iterates, in bits.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PoissonSolverOptions {
    fn default() -> Self {
        Self {
            grid_points: 201,
            lambda_max_factor: 10.0,
            n_max: None,
            tol: 1e-6,
            max_iters: 5000,
        }
    }
}

impl PoissonSolverOptions {
    /// The same options with a doubled grid and output truncation, for
    /// refinement studies.
    pub fn refined(&self, s: f64) -> Self {
        Self {
            grid_points: self.grid_points * 2,
            lambda_max_factor: self.lambda_max_factor,
            n_max: Some(self.resolved_n_max(s) * 2),
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }

    pub fn lambda_max(&self, s: f64) -> f64 {
        self.lambda_max_factor * (s + 1.0)
    }

    pub fn resolved_n_max(&self, s: f64) -> usize {
        self.n_max.unwrap_or_else(|| {
            let lm = self.lambda_max(s);
            (lm + 10.0 * lm.sqrt() + 30.0).ceil() as usize
        })
    }

    fn validate(&self, s: f64) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::validation("intensity grid needs at least 2 points"));
        }
        if self.lambda_max_factor <= 0.0 {
            return Err(Error::validation("lambda_max_factor must be positive"));
        }
        if self.tol <= 0.0 {
            return Err(Error::validation("tolerance must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::validation("iteration budget must be positive"));
        }
        let tail = poisson_tail_mass(self.lambda_max(s), self.resolved_n_max(s));
        if tail > 1e-10 {
            return Err(Error::validation(format!(
                "Poisson tail mass {tail:.2e} beyond n_max at the grid top exceeds 1e-10"
            )));
        }
        Ok(())
    }
}

/// Maximum entropy of a photon-number distribution with mean `s`:
/// g(S) = (S+1) log2(S+1) - S log2 S, in bits per mode.
pub fn g_entropy(s: f64) -> Result<f64> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::domain("mean photon number must be nonnegative and finite"));
    }
    Ok(g_entropy_nats(s) / LN_2)
}

pub(crate) fn g_entropy_nats(s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    (s + 1.0) * s.ln_1p() - s * s.ln()
}

/// Capacity of the given kind at `s` photons per mode and `bandwidth` modes
/// per second, in bits per second. `CoherentPhotonCounting` requires solver
/// options.
pub fn capacity(
    kind: CapacityKind,
    s: f64,
    bandwidth: f64,
    opts: Option<&PoissonSolverOptions>,
) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::domain("mean photon number must be nonnegative"));
    }
    if bandwidth <= 0.0 {
        return Err(Error::domain("bandwidth must be positive"));
    }
    let per_mode = match kind {
        CapacityKind::NumberState => g_entropy(s)?,
        CapacityKind::TcsHomodyne => (2.0 * s).ln_1p() / LN_2,
        CapacityKind::CoherentHeterodyne => s.ln_1p() / LN_2,
        CapacityKind::CoherentHomodyne => 0.5 * (4.0 * s).ln_1p() / LN_2,
        CapacityKind::CoherentPhotonCounting => {
            let opts = opts.ok_or_else(|| {
                Error::config("photon-counting capacity requires PoissonSolverOptions")
            })?;
            poisson_capacity(s, opts)?
        }
    };
    Ok(bandwidth * per_mode)
}

/// Upper bound on the capacity of a lossy channel of transmittance `eta`:
/// the lossless optimum evaluated at the surviving energy, W g(eta S).
pub fn lossy_upper_bound(s: f64, eta: f64, bandwidth: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!("transmittance {eta} outside [0, 1]")));
    }
    capacity(CapacityKind::NumberState, eta * s, bandwidth, None)
}

/// Samples one curve per kind on the energy grid. Each capacity is
/// evaluated at the surviving energy `eta * s`.
pub fn capacity_table(
    kinds: &[CapacityKind],
    s_grid: &[f64],
    bandwidth: f64,
    eta: f64,
    opts: Option<&PoissonSolverOptions>,
) -> Result<Vec<CapacityCurve>> {
    if s_grid.is_empty() {
        return Err(Error::validation("energy grid must be non-empty"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!("transmittance {eta} outside [0, 1]")));
    }
    kinds
        .iter()
        .map(|&kind| {
            let samples = s_grid
                .iter()
                .map(|&s| Ok((s, capacity(kind, eta * s, bandwidth, opts)?)))
                .collect::<Result<Vec<_>>>()?;
            CapacityCurve::new(kind, bandwidth, eta, samples)
        })
        .collect()
}

/// Capacity in bits per mode of the discrete channel intensity -> Poisson
/// counts under the average-intensity constraint E[lambda] <= s.
///
/// Alternating maximization over the input distribution on a fixed
/// intensity grid; the energy constraint enters through an exponential
/// multiplier found by bisection at every update. Converged when
/// successive capacity iterates differ by less than `opts.tol`.
pub fn poisson_capacity(s: f64, opts: &PoissonSolverOptions) -> Result<f64> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::domain("mean photon number must be nonnegative and finite"));
    }
    opts.validate(s)?;
    if s == 0.0 {
        // Only the zero-intensity letter is affordable.
        return Ok(0.0);
    }

    let k = opts.grid_points;
    let n_out = opts.resolved_n_max(s) + 1;
    let lambda_max = opts.lambda_max(s);
    let lambdas: Vec<f64> = (0..k)
        .map(|i| lambda_max * i as f64 / (k - 1) as f64)
        .collect();

    // Row-normalized transition matrix p(n | lambda_i).
    let mut pmf = vec![0.0f64; k * n_out];
    for (i, &lambda) in lambdas.iter().enumerate() {
        let row = &mut pmf[i * n_out..(i + 1) * n_out];
        if lambda == 0.0 {
            row[0] = 1.0;
            continue;
        }
        let ln_lambda = lambda.ln();
        let mut log_p = -lambda;
        row[0] = log_p.exp();
        for n in 1..n_out {
            log_p += ln_lambda - (n as f64).ln();
            row[n] = log_p.exp();
        }
        let total: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= total;
        }
    }

    let tol_nats = opts.tol * LN_2;
    let mean_tol = 1e-6 * s;
    let mut log_p_in = vec![-(k as f64).ln(); k];
    let mut q = vec![0.0f64; n_out];
    let mut divergence = vec![0.0f64; k];
    let mut info_prev = f64::NAN;
    let mut multiplier = 0.0f64;

    for _ in 0..opts.max_iters {
        let p_in: Vec<f64> = log_p_in.iter().map(|&lp| lp.exp()).collect();

        q.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..k {
            let pi = p_in[i];
            if pi == 0.0 {
                continue;
            }
            let row = &pmf[i * n_out..(i + 1) * n_out];
            for (qn, &pn) in q.iter_mut().zip(row) {
                *qn += pi * pn;
            }
        }

        for i in 0..k {
            let row = &pmf[i * n_out..(i + 1) * n_out];
            divergence[i] = row
                .iter()
                .zip(&q)
                .filter(|(&pn, _)| pn > 0.0)
                .map(|(&pn, &qn)| pn * (pn / qn).ln())
                .sum();
        }

        let info: f64 = p_in.iter().zip(&divergence).map(|(p, d)| p * d).sum();
        if (info - info_prev).abs() < tol_nats {
            return Ok(info / LN_2);
        }
        info_prev = info;

        // Reweight p_i by exp(D_i - s_mult * lambda_i); pick the smallest
        // multiplier that keeps the mean intensity within the budget.
        let reweighted_mean = |mult: f64| -> f64 {
            let mut z = 0.0;
            let mut mean = 0.0;
            let shift = log_p_in
                .iter()
                .zip(&divergence)
                .zip(&lambdas)
                .map(|((lp, d), l)| lp + d - mult * l)
                .fold(f64::MIN, f64::max);
            for i in 0..k {
                let w = (log_p_in[i] + divergence[i] - mult * lambdas[i] - shift).exp();
                z += w;
                mean += w * lambdas[i];
            }
            mean / z
        };

        if reweighted_mean(0.0) > s + mean_tol {
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            while reweighted_mean(hi) > s && hi < 1e12 {
                hi *= 2.0;
            }
            multiplier = hi;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let mean = reweighted_mean(mid);
                multiplier = mid;
                if (mean - s).abs() <= mean_tol {
                    break;
                }
                if mean > s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        } else {
            multiplier = 0.0;
        }

        for i in 0..k {
            log_p_in[i] += divergence[i] - multiplier * lambdas[i];
        }
        let shift = log_p_in.iter().cloned().fold(f64::MIN, f64::max);
        let log_z = shift
            + log_p_in
                .iter()
                .map(|&lp| (lp - shift).exp())
                .sum::<f64>()
                .ln();
        for lp in &mut log_p_in {
            *lp -= log_z;
        }
    }

    // Dual bound on the constrained capacity with the last multiplier.
    let upper = divergence
        .iter()
        .zip(&lambdas)
        .map(|(d, l)| d - multiplier * l)
        .fold(f64::MIN, f64::max)
        + multiplier * s;
    Err(Error::NonConvergence {
        last: info_prev / LN_2,
        gap: (upper - info_prev).max(0.0) / LN_2,
        iters: opts.max_iters,
    })
}

fn poisson_tail_mass(lambda: f64, n_max: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let ln_lambda = lambda.ln();
    let mut log_p = -lambda;
    let mut cumulative = log_p.exp();
    for n in 1..=n_max {
        log_p += ln_lambda - (n as f64).ln();
        cumulative += log_p.exp();
    }
    (1.0 - cumulative).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn g_entropy_examples() {
        close(g_entropy(0.0).unwrap(), 0.0, 0.0);
        close(g_entropy(1.0).unwrap(), 2.0, 1e-14);
        let g3 = 4.0 * 4.0f64.log2() - 3.0 * 3.0f64.log2();
        close(g_entropy(3.0).unwrap(), g3, 1e-14);
        close(g3, 3.2451, 1e-4);
        assert!(g_entropy(-0.1).is_err());
    }

    #[test]
    fn closed_form_capacity_examples() {
        close(capacity(CapacityKind::TcsHomodyne, 1.5, 1.0, None).unwrap(), 2.0, 1e-14);
        close(capacity(CapacityKind::CoherentHeterodyne, 1.0, 1.0, None).unwrap(), 1.0, 1e-14);
        let hom = capacity(CapacityKind::CoherentHomodyne, 2.0, 1.0, None).unwrap();
        let het = capacity(CapacityKind::CoherentHeterodyne, 2.0, 1.0, None).unwrap();
        close(hom, 3.0f64.log2(), 1e-14);
        close(hom, het, 1e-14);
    }

    #[test]
    fn photon_counting_requires_options() {
        assert!(matches!(
            capacity(CapacityKind::CoherentPhotonCounting, 1.0, 1.0, None),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn tcs_capacity_is_heterodyne_at_doubled_energy() {
        for &s in &[0.01, 0.5, 1.0, 7.3, 42.0] {
            let tcs = capacity(CapacityKind::TcsHomodyne, s, 1.0, None).unwrap();
            let het2 = capacity(CapacityKind::CoherentHeterodyne, 2.0 * s, 1.0, None).unwrap();
            close(tcs, het2, 1e-12);
        }
    }

    #[test]
    fn strict_capacity_ordering_on_dense_grid() {
        // C_op > C_TCS > C_het for all S > 0.
        for i in 1..=200 {
            let s = 10f64.powf(-3.0 + 5.0 * i as f64 / 200.0);
            let op = capacity(CapacityKind::NumberState, s, 1.0, None).unwrap();
            let tcs = capacity(CapacityKind::TcsHomodyne, s, 1.0, None).unwrap();
            let het = capacity(CapacityKind::CoherentHeterodyne, s, 1.0, None).unwrap();
            assert!(op > tcs && tcs > het, "ordering violated at S = {s}");
        }
    }

    #[test]
    fn homodyne_heterodyne_crossover_at_two() {
        // C_hom > C_het below S = 2, equal at 2, below above 2.
        let diff = |s: f64| {
            capacity(CapacityKind::CoherentHomodyne, s, 1.0, None).unwrap()
                - capacity(CapacityKind::CoherentHeterodyne, s, 1.0, None).unwrap()
        };
        assert!(diff(0.5) > 0.0);
        assert!(diff(5.0) < 0.0);
        let mut lo = 0.5;
        let mut hi = 5.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if diff(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        close(0.5 * (lo + hi), 2.0, 1e-9);
    }

    #[test]
    fn lossy_bound_examples() {
        let s = 3.0;
        close(
            lossy_upper_bound(s, 1.0, 1.0).unwrap(),
            capacity(CapacityKind::NumberState, s, 1.0, None).unwrap(),
            0.0,
        );
        close(lossy_upper_bound(s, 0.0, 1.0).unwrap(), 0.0, 0.0);
        close(lossy_upper_bound(3.0, 1.0 / 3.0, 1.0).unwrap(), 2.0, 1e-12);
        assert!(lossy_upper_bound(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn g_matches_max_entropy_over_constrained_distributions() {
        // Independent oracle: maximize entropy over photon distributions of
        // mean <= S by bisecting the exponential-family parameter on a
        // 201-point support.
        for &s in &[0.5, 1.0, 2.0, 4.0] {
            let oracle = max_entropy_bisection(s, 200);
            close(g_entropy(s).unwrap(), oracle, 1e-4);
        }
    }

    fn max_entropy_bisection(s: f64, n_max: usize) -> f64 {
        let mean_of = |beta: f64| -> (f64, f64) {
            let weights: Vec<f64> = (0..=n_max).map(|n| (-beta * n as f64).exp()).collect();
            let z: f64 = weights.iter().sum();
            let mean: f64 = weights
                .iter()
                .enumerate()
                .map(|(n, w)| n as f64 * w / z)
                .sum();
            let entropy: f64 = weights
                .iter()
                .map(|w| {
                    let p = w / z;
                    if p > 0.0 {
                        -p * p.log2()
                    } else {
                        0.0
                    }
                })
                .sum();
            (mean, entropy)
        };
        let mut lo = 1e-6;
        let mut hi = 50.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mean_of(mid).0 > s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mean_of(0.5 * (lo + hi)).1
    }

    #[test]
    fn poisson_capacity_zero_energy() {
        close(poisson_capacity(0.0, &PoissonSolverOptions::default()).unwrap(), 0.0, 0.0);
    }

    #[test]
    fn poisson_capacity_below_entropy_bound() {
        let opts = PoissonSolverOptions::default();
        for &s in &[0.25, 1.0, 4.0] {
            let c = poisson_capacity(s, &opts).unwrap();
            assert!(c > 0.0);
            assert!(c <= g_entropy(s).unwrap() + 1e-9, "bound violated at S = {s}");
        }
    }

    #[test]
    fn poisson_capacity_nondecreasing_in_energy() {
        let opts = PoissonSolverOptions::default();
        let mut prev = 0.0;
        for &s in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let c = poisson_capacity(s, &opts).unwrap();
            assert!(c + 1e-5 >= prev, "capacity dropped at S = {s}");
            prev = c;
        }
    }

    #[test]
    fn solver_options_reject_thin_truncation() {
        let opts = PoissonSolverOptions { n_max: Some(5), ..Default::default() };
        assert!(opts.validate(1.0).is_err());
    }

    #[test]
    fn capacity_table_shapes_and_ordering() {
        let grid: Vec<f64> = (0..20).map(|i| 0.1 * 10f64.powf(2.0 * i as f64 / 19.0)).collect();
        let kinds = [
            CapacityKind::NumberState,
            CapacityKind::TcsHomodyne,
            CapacityKind::CoherentHeterodyne,
        ];
        let curves = capacity_table(&kinds, &grid, 1.0, 1.0, None).unwrap();
        assert_eq!(curves.len(), 3);
        for window in curves.windows(2) {
            for (a, b) in window[0].samples().iter().zip(window[1].samples()) {
                assert!(a.1 > b.1);
            }
        }
    }
}
