//! The binary Gaussian testing problem and the two transmission schedulers.
//!
//! Measurements are `y = theta + v` with `v ~ N(0, sigma^2)` and
//! `theta in {theta0, theta1}`, `theta0 < theta1`. The likelihood ratio
//!
//! ```text
//! g(y) = p_theta1(y) / p_theta0(y)
//!      = exp(y (theta1 - theta0) / sigma^2) * exp((theta0^2 - theta1^2) / (2 sigma^2))
//! ```
//!
//! is strictly increasing in `y`, so censoring the band `1/alpha < g < alpha`
//! is the same as censoring an interval `(a, b)` with `a + b = theta0 +
//! theta1`. A measurement is transmitted exactly when it falls in the closed
//! complement `U = (-inf, a] u [b, inf)`.

use crate::numerics;
use crate::{Error, Result};

/// Tolerance on the threshold symmetry `a + b = theta0 + theta1`.
const SYMMETRY_TOL: f64 = 1e-12;

/// The Gaussian binary hypothesis pair `(theta0, theta1, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisPair {
    theta0: f64,
    theta1: f64,
    sigma2: f64,
}

impl HypothesisPair {
    /// Requires `theta0 < theta1` and `sigma2 > 0`, all finite.
    pub fn new(theta0: f64, theta1: f64, sigma2: f64) -> Result<Self> {
        for (what, v) in [("theta0", theta0), ("theta1", theta1), ("sigma2", sigma2)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: v });
            }
        }
        if theta0 >= theta1 {
            return Err(Error::UnorderedMeans { theta0, theta1 });
        }
        if sigma2 <= 0.0 {
            return Err(Error::NonPositiveVariance {
                what: "sigma2",
                value: sigma2,
            });
        }
        Ok(Self {
            theta0,
            theta1,
            sigma2,
        })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Midpoint `(theta0 + theta1) / 2` of the two means.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.theta0 + self.theta1)
    }

    /// Likelihood ratio `g(y) = p_theta1(y) / p_theta0(y)`, strictly positive
    /// and strictly increasing in `y`.
    pub fn likelihood_ratio(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::NonFinite {
                what: "measurement y",
                value: y,
            });
        }
        let d = self.theta1 - self.theta0;
        let shift = (self.theta0 * self.theta0 - self.theta1 * self.theta1) / (2.0 * self.sigma2);
        Ok((y * d / self.sigma2).exp() * shift.exp())
    }

    /// Gaussian density of a measurement under mean `theta`.
    pub(crate) fn density(&self, y: f64, theta: f64) -> f64 {
        numerics::pdf((y - theta) / self.sigma()) / self.sigma()
    }
}

/// Likelihood-ratio-based scheduler: censor `y in (a, b)`, transmit the
/// closed complement. Thresholds are symmetric about the hypothesis midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrbScheduler {
    a: f64,
    b: f64,
}

impl LrbScheduler {
    /// Requires `a <= b` and `a + b = theta0 + theta1` (tolerance 1e-12).
    /// Asymmetric thresholds are rejected rather than projected: every
    /// closed-form result on the censoring probability assumes the symmetry.
    pub fn new(a: f64, b: f64, pair: &HypothesisPair) -> Result<Self> {
        for (what, v) in [("lower threshold a", a), ("upper threshold b", b)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: v });
            }
        }
        if a > b {
            return Err(Error::InvertedThresholds { a, b });
        }
        let expected = pair.theta0() + pair.theta1();
        if ((a + b) - expected).abs() > SYMMETRY_TOL {
            return Err(Error::AsymmetricThresholds {
                sum: a + b,
                expected,
            });
        }
        Ok(Self { a, b })
    }

    /// Build the scheduler from the likelihood-ratio band `(1/alpha, alpha)`,
    /// `alpha >= 1`:
    ///
    /// ```text
    /// a = m - sigma^2 ln(alpha) / (theta1 - theta0),
    /// b = m + sigma^2 ln(alpha) / (theta1 - theta0),   m = (theta0 + theta1) / 2,
    /// ```
    ///
    /// so `g(a) = 1/alpha` and `g(b) = alpha`.
    pub fn from_alpha(alpha: f64, pair: &HypothesisPair) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::ScheduleAlphaBelowOne(alpha));
        }
        let half_width = pair.sigma2() * alpha.ln() / (pair.theta1() - pair.theta0());
        Self::from_half_width(half_width, pair)
    }

    /// Build the scheduler censoring `(m - t, m + t)` around the hypothesis
    /// midpoint `m`, `t >= 0`. The upper threshold is derived as
    /// `(theta0 + theta1) - a` so the symmetry holds to rounding error.
    pub fn from_half_width(t: f64, pair: &HypothesisPair) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::NonFinite {
                what: "censoring half-width",
                value: t,
            });
        }
        let sum = pair.theta0() + pair.theta1();
        let a = pair.midpoint() - t;
        Self::new(a, sum - a, pair)
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    /// Half-width of the censoring interval.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// Scheduler state for a measurement: `true` (transmit) iff `y` lies in
    /// `U = (-inf, a] u [b, inf)`. Boundary values transmit; `U` is closed.
    pub fn decide(&self, y: f64) -> bool {
        !(self.a < y && y < self.b)
    }

    /// Membership in the transmit region `U` (same closed-endpoint rule as
    /// [`Self::decide`], applied by the tester to received payloads).
    pub fn transmit_region_contains(&self, v: f64) -> bool {
        self.decide(v)
    }

    /// Unnormalized truncated Gaussian mass `p_T(y) = N(y; theta, sigma^2) *
    /// 1{y in U}`; integrates to the transmission rate, not to one.
    pub fn truncated_pdf(&self, y: f64, theta: f64, pair: &HypothesisPair) -> f64 {
        if self.decide(y) {
            pair.density(y, theta)
        } else {
            0.0
        }
    }

    /// `P_theta{gamma = 0} = Phi((b - theta)/sigma) - Phi((a - theta)/sigma)`.
    pub fn censoring_probability(&self, theta: f64, pair: &HypothesisPair) -> f64 {
        let sigma = pair.sigma();
        numerics::cdf((self.b - theta) / sigma) - numerics::cdf((self.a - theta) / sigma)
    }
}

/// Random scheduler: transmit each sample independently with probability `p`,
/// regardless of its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomScheduler {
    p: f64,
}

impl RandomScheduler {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::ProbabilityRange {
                what: "transmit probability p",
                range: "[0, 1]",
                value: p,
            });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Either scheduler, as configured for an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchedulerSpec {
    Lrb(LrbScheduler),
    Random(RandomScheduler),
}

impl SchedulerSpec {
    /// Probability that a sample is censored under state `theta`.
    pub fn censoring_probability(&self, theta: f64, pair: &HypothesisPair) -> f64 {
        match self {
            SchedulerSpec::Lrb(s) => s.censoring_probability(theta, pair),
            SchedulerSpec::Random(s) => 1.0 - s.p(),
        }
    }

    /// Scheduled transmission rate `R_theta = P_theta{gamma = 1}`. For an LRB
    /// scheduler the symmetry `a + b = theta0 + theta1` makes the rate equal
    /// under both hypotheses.
    pub fn transmission_rate(&self, theta: f64, pair: &HypothesisPair) -> f64 {
        match self {
            // Complementary form: Phi(z1) + Phi(-z2) stays accurate when the
            // censoring interval swallows most of the mass.
            SchedulerSpec::Lrb(s) => {
                let sigma = pair.sigma();
                numerics::cdf((s.lower() - theta) / sigma)
                    + numerics::cdf(-(s.upper() - theta) / sigma)
            }
            SchedulerSpec::Random(s) => s.p(),
        }
    }
}
