//! Closed-form asymptotic error exponents.
//!
//! By Stein's lemma the Type II error of a Type-I-constrained N-P test decays
//! as `exp(-N D)` where `D` is the relative entropy from the null to the
//! alternative observation law. Under the LRB scheduler the discrete
//! censoring atom contributes nothing (its probability is equal under both
//! hypotheses thanks to the threshold symmetry), leaving
//!
//! ```text
//! L1(a, b) = -((theta1 - theta0) / sigma^2) * integral_U y p_theta0(y) dy
//!          + ((theta1^2 - theta0^2) / (2 sigma^2)) * P_theta0{gamma = 1}.
//! ```
//!
//! The random scheduler gives `L2 = (theta1 - theta0)^2 R / (2 sigma^2)`, and
//! an injection attack of intensity `P` multiplies the LRB exponent by
//! `eta = 1 - P * Pr{q in U}`.

use crate::model::{HypothesisPair, LrbScheduler};
use crate::numerics;
use crate::solver::{solve_optimal_thresholds, RateConstraint};
use crate::{Error, Result};

/// An asymptotic error exponent in nats per sample; non-negative and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ErrorExponent(f64);

impl ErrorExponent {
    /// Wraps a computed exponent, flushing the sub-ulp negatives that exact
    /// cancellation can leave behind.
    pub(crate) fn new(value: f64) -> Self {
        debug_assert!(value.is_finite() && value > -1e-12, "exponent {value}");
        Self(value.max(0.0))
    }

    /// The exponent in nats per sample.
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for ErrorExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Injection attack: with probability `intensity` per tick the attacker puts
/// a deceptive signal `q ~ N(q_mean, q_var)` on the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackModel {
    intensity: f64,
    q_mean: f64,
    q_var: f64,
}

impl AttackModel {
    pub fn new(intensity: f64, q_mean: f64, q_var: f64) -> Result<Self> {
        if !(intensity.is_finite() && (0.0..=1.0).contains(&intensity)) {
            return Err(Error::ProbabilityRange {
                what: "attack intensity",
                range: "[0, 1]",
                value: intensity,
            });
        }
        if !q_mean.is_finite() {
            return Err(Error::NonFinite {
                what: "q_mean",
                value: q_mean,
            });
        }
        if !(q_var.is_finite() && q_var > 0.0) {
            return Err(Error::NonPositiveVariance {
                what: "q_var",
                value: q_var,
            });
        }
        Ok(Self {
            intensity,
            q_mean,
            q_var,
        })
    }

    /// The canonical adversary: fabricate a false alarm by drawing deceptive
    /// signals from the alternative law `q ~ N(theta1, sigma^2)`.
    pub fn mimicking_alternative(intensity: f64, pair: &HypothesisPair) -> Result<Self> {
        Self::new(intensity, pair.theta1(), pair.sigma2())
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn q_mean(&self) -> f64 {
        self.q_mean
    }

    pub fn q_var(&self) -> f64 {
        self.q_var
    }

    /// Probability that a deceptive signal lands in the transmit region
    /// `U = (-inf, a] u [b, inf)`.
    pub fn q_in_transmit_region(&self, sched: &LrbScheduler) -> f64 {
        let sq = self.q_var.sqrt();
        numerics::cdf((sched.lower() - self.q_mean) / sq)
            + numerics::cdf(-(sched.upper() - self.q_mean) / sq)
    }
}

/// Relative entropy from the null to the alternative observation law under
/// the LRB scheduler (the secure-channel error exponent).
pub fn lrb_exponent(pair: &HypothesisPair, sched: &LrbScheduler) -> ErrorExponent {
    let sigma2 = pair.sigma2();
    let moment = numerics::censored_region_first_moment(
        sched.lower(),
        sched.upper(),
        pair.theta0(),
        pair.sigma(),
    )
    .expect("scheduler and pair are validated at construction");
    let transmit_mass = 1.0 - sched.censoring_probability(pair.theta0(), pair);
    let d = pair.theta1() - pair.theta0();
    let value = -(d / sigma2) * moment
        + (pair.theta1() * pair.theta1() - pair.theta0() * pair.theta0()) / (2.0 * sigma2)
            * transmit_mass;
    ErrorExponent::new(value)
}

/// Maximum relative entropy achievable by the random scheduler at rate `R`:
/// `L2 = (theta1 - theta0)^2 R / (2 sigma^2)`, linear in `R`.
pub fn random_exponent(pair: &HypothesisPair, rate: f64) -> Result<ErrorExponent> {
    if !(rate.is_finite() && (0.0..=1.0).contains(&rate)) {
        return Err(Error::ProbabilityRange {
            what: "transmission rate",
            range: "[0, 1]",
            value: rate,
        });
    }
    let d = pair.theta1() - pair.theta0();
    Ok(ErrorExponent::new(d * d * rate / (2.0 * pair.sigma2())))
}

/// Exponent of the full-measurement N-P test,
/// `(theta1 - theta0)^2 / (2 sigma^2)`.
pub fn full_exponent(pair: &HypothesisPair) -> ErrorExponent {
    let d = pair.theta1() - pair.theta0();
    ErrorExponent::new(d * d / (2.0 * pair.sigma2()))
}

/// Survival probability of a transmitted measurement under attack:
/// `eta = 1 - intensity * Pr{q in U}`.
pub fn attack_eta(sched: &LrbScheduler, attack: &AttackModel) -> f64 {
    1.0 - attack.intensity() * attack.q_in_transmit_region(sched)
}

/// Error exponent over the attacked channel: exactly `eta` times the secure
/// LRB exponent.
pub fn attacked_exponent(
    pair: &HypothesisPair,
    sched: &LrbScheduler,
    attack: &AttackModel,
) -> ErrorExponent {
    ErrorExponent::new(attack_eta(sched, attack) * lrb_exponent(pair, sched).value())
}

/// Approximate number of samples needed to push the Type II error below
/// `delta`: `n = ln(1/delta) / D`. Callers round up.
pub fn sample_complexity(exponent: ErrorExponent, delta: f64) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
        return Err(Error::ProbabilityRange {
            what: "delta",
            range: "(0, 1]",
            value: delta,
        });
    }
    if exponent.value() == 0.0 {
        return Err(Error::ZeroExponent);
    }
    Ok(-delta.ln() / exponent.value())
}

/// How much the optimal LRB scheduler beats the random scheduler at rate `R`:
/// `L1(a*, b*) - L2`, strictly positive for `R in (0, 1)` and zero at `R = 1`.
pub fn dominance_gap(pair: &HypothesisPair, rate: f64) -> Result<f64> {
    let constraint = RateConstraint::new(rate)?;
    let design = solve_optimal_thresholds(pair, constraint)?;
    Ok(design.exponent().value() - random_exponent(pair, rate)?.value())
}
