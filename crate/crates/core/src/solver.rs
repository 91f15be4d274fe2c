//! Optimal scheduler thresholds under a transmission-rate constraint.
//!
//! The optimal censoring interval is symmetric about the hypothesis midpoint
//! `m`, so both rate constraints (under `theta0` and under `theta1`) collapse
//! to the single scalar equation in the half-width `t`:
//!
//! ```text
//! Phi((m + t - theta0)/sigma) - Phi((m - t - theta0)/sigma) = 1 - R,
//! ```
//!
//! solved by bracketing bisection. The constraint is treated as active: the
//! exponent increases as the censoring interval shrinks, so the optimum always
//! exhausts the rate budget.

use crate::exponent::{attacked_exponent, lrb_exponent, AttackModel, ErrorExponent};
use crate::model::{HypothesisPair, LrbScheduler, SchedulerSpec};
use crate::numerics;
use crate::{Error, Result};

/// Tolerance, in probability, on the censoring-mass equation.
const MASS_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Upper bound `R` on the scheduled transmission rate, `0 < R <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstraint {
    rate: f64,
}

impl RateConstraint {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0 && rate <= 1.0) {
            return Err(Error::ProbabilityRange {
                what: "rate constraint R",
                range: "(0, 1]",
                value: rate,
            });
        }
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// A solved rate-constrained design: the thresholds, the rate they achieve,
/// and the error exponent they deliver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDesign {
    scheduler: LrbScheduler,
    achieved_rate: f64,
    exponent: ErrorExponent,
}

impl OptimalDesign {
    pub fn scheduler(&self) -> &LrbScheduler {
        &self.scheduler
    }

    pub fn achieved_rate(&self) -> f64 {
        self.achieved_rate
    }

    /// Secure-channel error exponent `L1(a*, b*)` of the design.
    pub fn exponent(&self) -> ErrorExponent {
        self.exponent
    }
}

/// Censoring mass of the symmetric interval of half-width `t` under `theta0`.
fn censoring_mass(t: f64, pair: &HypothesisPair) -> f64 {
    let m = pair.midpoint();
    let sigma = pair.sigma();
    numerics::cdf((m + t - pair.theta0()) / sigma) - numerics::cdf((m - t - pair.theta0()) / sigma)
}

/// Solve for the thresholds `a* = m - t`, `b* = m + t` whose censoring mass
/// equals `1 - R` (tolerance 1e-12 in probability). `R = 1` degenerates to
/// `a* = b* = m`, the full-measurement test.
pub fn solve_optimal_thresholds(
    pair: &HypothesisPair,
    constraint: RateConstraint,
) -> Result<OptimalDesign> {
    let target = 1.0 - constraint.rate();
    let t = if target <= 0.0 {
        0.0
    } else {
        bisect_half_width(target, pair)?
    };
    let scheduler = LrbScheduler::from_half_width(t, pair)?;
    let achieved_rate =
        SchedulerSpec::Lrb(scheduler).transmission_rate(pair.theta0(), pair);
    Ok(OptimalDesign {
        scheduler,
        achieved_rate,
        exponent: lrb_exponent(pair, &scheduler),
    })
}

fn bisect_half_width(target: f64, pair: &HypothesisPair) -> Result<f64> {
    // Bracket: censoring mass is 0 at t = 0 and saturates to 1, so doubling
    // the width must eventually cover any target < 1.
    let mut hi = pair.sigma();
    let mut doublings = 0;
    while censoring_mass(hi, pair) < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 100 {
            return Err(Error::NonConvergence {
                what: "censoring-mass bracket",
                residual: target - censoring_mass(hi, pair),
            });
        }
    }
    // Run the bracket all the way down: where the mass curve is nearly flat
    // (deep-tail rates) a loose half-width could satisfy the probability
    // tolerance while sitting far from the true crossing.
    let mut lo = 0.0_f64;
    let mut t = 0.5 * hi;
    for _ in 0..MAX_BISECTIONS {
        let mass = censoring_mass(t, pair);
        if mass == target {
            return Ok(t);
        }
        if mass < target {
            lo = t;
        } else {
            hi = t;
        }
        let next = 0.5 * (lo + hi);
        if next == t || next == lo || next == hi {
            break;
        }
        t = next;
    }
    let residual = (censoring_mass(t, pair) - target).abs();
    if residual <= MASS_TOL {
        Ok(t)
    } else {
        Err(Error::NonConvergence {
            what: "censoring-mass bisection",
            residual,
        })
    }
}

/// Pick the transmission rate from `rate_grid` whose optimal design maximizes
/// the attacked exponent `eta * L1`. Ties break toward the smaller rate.
/// Returns the winning rate and its exponent.
pub fn solve_optimal_rate_under_attack(
    pair: &HypothesisPair,
    attack: &AttackModel,
    rate_grid: &[f64],
) -> Result<(f64, ErrorExponent)> {
    if rate_grid.is_empty() {
        return Err(Error::EmptyGrid("rate grid"));
    }
    let mut best: Option<(f64, ErrorExponent)> = None;
    for &rate in rate_grid {
        let design = solve_optimal_thresholds(pair, RateConstraint::new(rate)?)?;
        let exp = attacked_exponent(pair, design.scheduler(), attack);
        best = match best {
            None => Some((rate, exp)),
            Some((br, be)) => {
                if exp.value() > be.value() || (exp.value() == be.value() && rate < br) {
                    Some((rate, exp))
                } else {
                    Some((br, be))
                }
            }
        };
    }
    Ok(best.expect("grid is non-empty"))
}
