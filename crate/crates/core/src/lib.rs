//! Numerics for communication and measurement at the quantum limit of a
//! bosonic mode: channel capacities under photon-number constraints,
//! entropy bounds on measurement information, amplifier-chain error laws,
//! rate-distortion accuracy limits, and free-mass position monitoring with
//! contractive states.
//!
//! All capacities and entropies are reported in bits; internal
//! accumulation is in nats. Every operation is a pure function of its
//! inputs and safe to call concurrently; the Monte Carlo routines are
//! deterministic for a fixed seed.

pub mod amplifiers;
pub mod capacities;
pub mod error;
pub mod fock;
pub mod infotheory;
pub mod massmon;
pub mod photon;
pub mod ratedist;
pub mod states;

pub use amplifiers::{AmplifierKind, ChainComparisonRow, ChainSpec, ModeRepr};
pub use capacities::{CapacityCurve, CapacityKind, PoissonSolverOptions};
pub use error::{Error, Result};
pub use fock::{FockEnsemble, Pom};
pub use infotheory::{AwgnParams, DiscreteDistribution, JointDistribution, NoiseSpec};
pub use massmon::{
    ContractiveParams, MassGaussianState, MonitorStep, MonitoringPlan, PhysicalConstants,
    PiecewiseForce, Reading, ResetMode,
};
pub use photon::PhotonDistribution;
pub use ratedist::{
    FmSimConfig, FmSimResult, MeasurementLimitQuery, RdInverse, RdSource, StateKind,
};
pub use states::{GaussianModeState, SnrOptimum, TcsParams, TcsStats};
