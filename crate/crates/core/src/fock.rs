//! Truncated-Fock-space ensembles: von Neumann entropy, the entropy
//! (Holevo) bound, and generalized-measurement statistics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::infotheory::{mutual_information, DiscreteDistribution, JointDistribution};

/// Tolerance on Hermiticity and unit-trace checks of density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as exact zeros in entropies.
pub const EIGENVALUE_CLAMP: f64 = 1e-12;
/// Tolerance on POM completeness (sum of elements = identity).
pub const POM_COMPLETENESS_TOL: f64 = 1e-8;
/// Tail mass allowed beyond a Fock-space truncation.
pub const TRUNCATION_GUARD: f64 = 1e-10;

/// An ensemble of density matrices on a common truncated Fock space,
/// drawn with the given priors.
#[derive(Debug, Clone)]
pub struct FockEnsemble {
    priors: DiscreteDistribution,
    states: Vec<DMatrix<Complex64>>,
}

impl FockEnsemble {
    pub fn new(priors: DiscreteDistribution, states: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::validation(format!(
                "{} priors for {} states",
                priors.len(),
                states.len()
            )));
        }
        let dim = states
            .first()
            .ok_or_else(|| Error::validation("ensemble must contain at least one state"))?
            .nrows();
        for (i, rho) in states.iter().enumerate() {
            validate_density_matrix(rho).map_err(|e| {
                Error::validation(format!("state {i}: {e}"))
            })?;
            if rho.nrows() != dim {
                return Err(Error::validation("ensemble states have mixed dimensions"));
            }
        }
        Ok(Self { priors, states })
    }

    pub fn priors(&self) -> &DiscreteDistribution {
        &self.priors
    }

    pub fn states(&self) -> &[DMatrix<Complex64>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].nrows()
    }

    /// The prior-weighted average state.
    pub fn average_state(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut avg = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, rho) in self.priors.probs().iter().zip(&self.states) {
            avg += rho * Complex64::new(*p, 0.0);
        }
        avg
    }
}

fn validate_density_matrix(rho: &DMatrix<Complex64>) -> Result<()> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(Error::validation("density matrix must be square and non-empty"));
    }
    let herm_err = (rho - rho.adjoint()).norm();
    if herm_err > DENSITY_TOL {
        return Err(Error::validation(format!(
            "not Hermitian (deviation {herm_err:.2e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::validation(format!("trace {tr} differs from 1")));
    }
    let eigs = rho.clone().symmetric_eigen().eigenvalues;
    if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
        if min < -DENSITY_TOL {
            return Err(Error::validation(format!(
                "negative eigenvalue {min:.2e}"
            )));
        }
    }
    Ok(())
}

/// A positive operator-valued measure on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct Pom {
    elements: Vec<DMatrix<Complex64>>,
}

impl Pom {
    /// Validates Hermiticity, positivity, and completeness of the elements.
    pub fn new(elements: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::validation("POM must contain at least one element"))?
            .nrows();
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for (i, el) in elements.iter().enumerate() {
            if el.nrows() != dim || el.ncols() != dim {
                return Err(Error::validation("POM elements have mixed dimensions"));
            }
            let herm_err = (el - el.adjoint()).norm();
            if herm_err > DENSITY_TOL {
                return Err(Error::validation(format!(
                    "element {i} not Hermitian (deviation {herm_err:.2e})"
                )));
            }
            let eigs = el.clone().symmetric_eigen().eigenvalues;
            if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
                if min < -POM_COMPLETENESS_TOL {
                    return Err(Error::validation(format!(
                        "element {i} has negative eigenvalue {min:.2e}"
                    )));
                }
            }
            sum += el;
        }
        let identity_err = (&sum - DMatrix::<Complex64>::identity(dim, dim)).norm();
        if identity_err > POM_COMPLETENESS_TOL {
            return Err(Error::validation(format!(
                "elements sum to identity only within {identity_err:.2e}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[DMatrix<Complex64>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    /// Photon-counting measurement: number-state projectors.
    pub fn photon_counting(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|n| {
                let mut m = DMatrix::<Complex64>::zeros(dim, dim);
                m[(n, n)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { elements }
    }
}

/// Von Neumann entropy -tr(rho log2 rho) in bits, by Hermitian
/// eigendecomposition with eigenvalues clamped at zero.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> f64 {
    let eigs = rho.clone().symmetric_eigen().eigenvalues;
    let nats: f64 = eigs
        .iter()
        .filter(|&&l| l > EIGENVALUE_CLAMP)
        .map(|&l| -l * l.ln())
        .sum();
    nats / std::f64::consts::LN_2
}

/// Entropy bound chi = S(rho_avg) - sum_k p_k S(rho_k), in bits. Bounds the
/// mutual information extractable by any measurement on the ensemble.
pub fn holevo_chi(ensemble: &FockEnsemble) -> f64 {
    let avg_entropy = von_neumann_entropy(&ensemble.average_state());
    let member_entropy: f64 = ensemble
        .priors
        .probs()
        .iter()
        .zip(&ensemble.states)
        .map(|(p, rho)| p * von_neumann_entropy(rho))
        .sum();
    (avg_entropy - member_entropy).max(0.0)
}

/// Mutual information between the ensemble label and the measurement
/// outcome, from the joint p(k, outcome) = p_k tr(rho_k O_outcome).
pub fn pom_mutual_information(ensemble: &FockEnsemble, pom: &Pom) -> Result<f64> {
    if ensemble.dim() != pom.dim() {
        return Err(Error::validation(format!(
            "ensemble dimension {} does not match POM dimension {}",
            ensemble.dim(),
            pom.dim()
        )));
    }
    let rows = ensemble.priors.len();
    let cols = pom.elements.len();
    let mut joint = Vec::with_capacity(rows * cols);
    for (p, rho) in ensemble.priors.probs().iter().zip(&ensemble.states) {
        for el in &pom.elements {
            let prob = trace_product(rho, el).re;
            if prob < -POM_COMPLETENESS_TOL {
                return Err(Error::validation(format!(
                    "outcome probability {prob:.2e} is negative"
                )));
            }
            joint.push(p * prob.max(0.0));
        }
    }
    let joint = JointDistribution::renormalized(rows, cols, joint)?;
    Ok(mutual_information(&joint))
}

/// tr(a b) without forming the product matrix.
pub fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t
}

/// Density matrix |psi><psi| of a normalized amplitude vector.
pub fn pure_state(amplitudes: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq <= 0.0 {
        return Err(Error::validation("state vector has zero norm"));
    }
    let dim = amplitudes.len();
    let norm = norm_sq.sqrt();
    let psi: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            rho[(i, j)] = psi[i] * psi[j].conj();
        }
    }
    Ok(rho)
}

/// Density matrix of the number state |n> on a space of dimension `dim`.
pub fn fock_density(dim: usize, n: usize) -> Result<DMatrix<Complex64>> {
    if n >= dim {
        return Err(Error::validation(format!(
            "number state {n} does not fit a dimension-{dim} space"
        )));
    }
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    rho[(n, n)] = Complex64::new(1.0, 0.0);
    Ok(rho)
}

/// Number-state ensemble with geometric priors of mean `s`, truncated at
/// `n_max` photons. Rejected if the discarded tail mass exceeds the
/// truncation guard.
pub fn number_state_ensemble_geometric(s: f64, n_max: usize) -> Result<FockEnsemble> {
    if s < 0.0 {
        return Err(Error::domain("mean photon number must be nonnegative"));
    }
    let dim = n_max + 1;
    let mut probs = Vec::with_capacity(dim);
    if s == 0.0 {
        probs.push(1.0);
        probs.resize(dim, 0.0);
    } else {
        let ratio = s / (1.0 + s);
        let mut p = 1.0 / (1.0 + s);
        for _ in 0..dim {
            probs.push(p);
            p *= ratio;
        }
        let tail = ratio.powi(dim as i32);
        if tail > TRUNCATION_GUARD {
            return Err(Error::validation(format!(
                "geometric tail mass {tail:.2e} beyond n_max = {n_max} exceeds the \
                 truncation guard {TRUNCATION_GUARD:.0e}; increase n_max"
            )));
        }
    }
    let priors = DiscreteDistribution::renormalized(probs)?;
    let states = (0..dim).map(|n| fock_density(dim, n).unwrap()).collect();
    FockEnsemble::new(priors, states)
}

/// Random mixed state from the Ginibre construction G G^dag / tr.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m / Complex64::new(tr, 0.0)
}

/// Random ensemble of `n_states` mixed states with a random prior.
pub fn random_ensemble(dim: usize, n_states: usize, rng: &mut impl Rng) -> Result<FockEnsemble> {
    let raw: Vec<f64> = (0..n_states).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let priors = DiscreteDistribution::renormalized(raw)?;
    let states = (0..n_states)
        .map(|_| random_density_matrix(dim, rng))
        .collect();
    FockEnsemble::new(priors, states)
}

/// Random POM: positive blocks B_k B_k^dag whitened by the inverse square
/// root of their sum, so the elements add to the identity.
pub fn random_pom(dim: usize, n_elements: usize, rng: &mut impl Rng) -> Result<Pom> {
    if n_elements == 0 {
        return Err(Error::validation("POM must contain at least one element"));
    }
    let blocks: Vec<DMatrix<Complex64>> = (0..n_elements)
        .map(|_| {
            let b = ginibre(dim, rng);
            &b * b.adjoint()
        })
        .collect();
    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for b in &blocks {
        total += b;
    }
    let whiten = inverse_sqrt_hermitian(&total)?;
    let elements = blocks.iter().map(|b| &whiten * b * &whiten).collect();
    Pom::new(elements)
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    })
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    use rand_distr::Distribution;
    rand_distr::StandardNormal.sample(rng)
}

fn inverse_sqrt_hermitian(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = m.clone().symmetric_eigen();
    let dim = m.nrows();
    let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= 0.0 {
            return Err(Error::validation("matrix is not positive definite"));
        }
        diag[(i, i)] = Complex64::new(1.0 / l.sqrt(), 0.0);
    }
    Ok(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())
}
