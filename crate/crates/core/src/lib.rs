//! Remote binary Gaussian detection under a likelihood-ratio-based (LRB)
//! transmission scheduler.
//!
//! A sensor observes `y_i = θ + v_i` with `v_i ~ N(0, σ²)` and must decide
//! between `H0: θ = θ0` and `H1: θ = θ1` at a remote tester, subject to a
//! transmission-rate budget and, on non-secure channels, to deceptive signals
//! injected by an attacker. The scheduler transmits a measurement only when
//! its likelihood ratio is far from one, i.e. when `y` falls outside a
//! censoring interval `(a, b)` symmetric about `(θ0 + θ1) / 2`.
//!
//! The crate provides:
//!
//! - [`numerics`] — standard-normal pdf/cdf/quantile and the first moment of
//!   a Gaussian over a censored region, accurate into the far tails;
//! - [`model`] — hypothesis pairs, LRB and random schedulers, likelihood
//!   ratios, censoring probabilities and transmission rates;
//! - [`exponent`] — closed-form asymptotic error exponents (relative
//!   entropies) with and without injection attacks;
//! - [`solver`] — optimal scheduler thresholds under a rate constraint and
//!   the optimal rate under attack;
//! - [`channel`] — reproducible sample generation, attack injection, and the
//!   tester-side measurement-discrimination protocol;
//! - [`tester`] — Neyman-Pearson statistics, Monte Carlo threshold
//!   calibration and Type I/II error estimation.
//!
//! All exponents are reported in nats per sample.

// Frozen oracle values and the erfc rational coefficients are kept at full
// published precision; the compiler rounds them to the nearest f64.
#![allow(clippy::excessive_precision)]

pub mod channel;
pub mod exponent;
pub mod model;
pub mod numerics;
pub mod solver;
pub mod tester;

use thiserror::Error;

/// Errors raised by invalid inputs or (extraordinarily) failed numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument that must be finite was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// A probability-valued argument fell outside its admissible range.
    #[error("{what} must lie in {range}, got {value}")]
    ProbabilityRange {
        what: &'static str,
        range: &'static str,
        value: f64,
    },

    /// Hypothesis means must satisfy `theta0 < theta1`.
    #[error("hypothesis means must satisfy theta0 < theta1, got theta0={theta0}, theta1={theta1}")]
    UnorderedMeans { theta0: f64, theta1: f64 },

    /// The noise variance must be strictly positive.
    #[error("{what} must be strictly positive, got {value}")]
    NonPositiveVariance { what: &'static str, value: f64 },

    /// Censoring thresholds must satisfy `a <= b`.
    #[error("censoring thresholds must satisfy a <= b, got a={a}, b={b}")]
    InvertedThresholds { a: f64, b: f64 },

    /// Censoring thresholds must be symmetric about the hypothesis midpoint.
    #[error(
        "censoring thresholds must satisfy a + b = theta0 + theta1 \
         (got a+b={sum}, theta0+theta1={expected})"
    )]
    AsymmetricThresholds { sum: f64, expected: f64 },

    /// The scheduling parameter of the likelihood-ratio band must be >= 1.
    #[error("schedule alpha must be >= 1, got {0}")]
    ScheduleAlphaBelowOne(f64),

    /// A grid argument that must be non-empty was empty.
    #[error("{0} must be non-empty")]
    EmptyGrid(&'static str),

    /// The measurement-discrimination protocol is defined only for the LRB
    /// scheduler.
    #[error("the measurement-discrimination protocol is not defined for the {0} scheduler")]
    UnsupportedProtocol(&'static str),

    /// Threshold calibration does not cover the requested run length.
    #[error("no calibrated threshold for N={0}")]
    MissingCalibration(usize),

    /// Too few Monte Carlo samples for a meaningful empirical quantile.
    #[error("sample count must be >= {min}, got {got}")]
    SampleCountTooSmall { min: usize, got: usize },

    /// Calibration run lengths must be at least one tick.
    #[error("calibration run lengths must be >= 1")]
    ZeroRunLength,

    /// A zero error exponent means no finite sample size suffices.
    #[error("error exponent is zero: no finite number of samples suffices")]
    ZeroExponent,

    /// A root-finder failed to meet its tolerance. Indicates a numerics bug
    /// rather than bad input.
    #[error("{what} failed to converge (residual {residual})")]
    NonConvergence { what: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub use channel::{
    attacker_inject, discriminate, generate_sample, transmit, ChannelObservation,
    DiscriminationOutcome, RngStream, SensorSample,
};
pub use exponent::{
    attack_eta, attacked_exponent, dominance_gap, full_exponent, lrb_exponent, random_exponent,
    sample_complexity, AttackModel, ErrorExponent,
};
pub use model::{HypothesisPair, LrbScheduler, RandomScheduler, SchedulerSpec};
pub use numerics::{
    censored_region_first_moment, std_normal_cdf, std_normal_pdf, std_normal_quantile,
};
pub use solver::{solve_optimal_rate_under_attack, solve_optimal_thresholds, OptimalDesign, RateConstraint};
pub use tester::{
    calibrate_threshold, estimate_errors, simulate_statistic, CalibrationResult, Decision,
    ErrorCurve, ErrorCurveRow, TestStatistic, TestThreshold,
};
