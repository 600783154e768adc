//! Truncated photon-number distributions and the transforms that act on
//! them: binomial thinning (loss), number amplification, and on-off
//! restoration.

use rand::Rng;

use crate::error::{Error, Result};
use crate::infotheory::PROB_TOL;

/// A probability distribution over photon number 0..len-1.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
}

impl PhotonDistribution {
    /// Validates nonnegativity and normalization within [`PROB_TOL`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::validation("photon distribution must be non-empty"));
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
        Ok(Self { probs })
    }

    /// Vacuum state: all mass on zero photons.
    pub fn vacuum() -> Self {
        Self { probs: vec![1.0] }
    }

    /// Number state |n>: unit mass at photon number `n`.
    pub fn fock(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    /// Poisson distribution of the given mean, truncated where the tail
    /// mass drops below 1e-14 and renormalized.
    pub fn poisson(mean: f64) -> Result<Self> {
        if mean < 0.0 || !mean.is_finite() {
            return Err(Error::domain("Poisson mean must be nonnegative and finite"));
        }
        if mean == 0.0 {
            return Ok(Self::vacuum());
        }
        let mut log_p = -mean; // ln pmf(0)
        let mut probs = vec![log_p.exp()];
        let mut cumulative = probs[0];
        let mut n = 0usize;
        while 1.0 - cumulative > 1e-14 {
            n += 1;
            log_p += mean.ln() - (n as f64).ln();
            let p = log_p.exp();
            probs.push(p);
            cumulative += p;
            if n > 10_000_000 {
                return Err(Error::domain("Poisson mean too large to truncate"));
            }
        }
        let sum: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= sum;
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of counting exactly `n` photons (zero beyond truncation).
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - m).powi(2) * p)
            .sum()
    }

    /// Loss channel by binomial thinning:
    /// p_b(k) = sum_{n >= k} p_a(n) C(n,k) eta^k (1-eta)^(n-k).
    pub fn thinned(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!("transmittance {eta} outside [0, 1]")));
        }
        if eta == 1.0 {
            return Ok(self.clone());
        }
        let mut out = vec![0.0; self.probs.len()];
        for (n, &pn) in self.probs.iter().enumerate() {
            if pn == 0.0 {
                continue;
            }
            // Binomial(n, eta) pmf by the ratio recurrence.
            let mut b = (1.0 - eta).powi(n as i32); // k = 0
            for k in 0..=n {
                out[k] += pn * b;
                if k < n {
                    b *= (n - k) as f64 / (k + 1) as f64 * eta / (1.0 - eta);
                }
            }
        }
        Ok(Self { probs: out })
    }

    /// Draws a photon count by inverse-CDF sampling.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (n, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return n;
            }
        }
        self.probs.len() - 1
    }
}
