//! Neyman-Pearson testing over the scheduled (and possibly attacked) channel:
//! the running log-likelihood-ratio statistic, Monte Carlo calibration of the
//! decision threshold, and Type I/II error estimation.
//!
//! The statistic after `N` ticks is
//!
//! ```text
//! T_N = -((theta1^2 - theta0^2) / (2 sigma^2)) * sum_i delta_i gamma_i
//!     + ((theta1 - theta0) / sigma^2)          * sum_i delta_i gamma_i y_i,
//! ```
//!
//! with `delta_i = 1` whenever no discrimination protocol is in play. The
//! null is rejected when `T_N > ln k`; `ln k` is calibrated per `N` as an
//! empirical quantile of simulated null statistics. Everything is tracked in
//! the log domain, and the two sums are carried separately so a recursive
//! update and a one-pass batch evaluation agree bit for bit.
//!
//! Calibration and estimation trials each run on their own random substream
//! keyed by `(phase, N, trial)`, so the results do not depend on worker count
//! or execution order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::channel::{
    attacker_inject, discriminate_lrb, generate_sample, transmit, DiscriminationOutcome, RngStream,
};
use crate::exponent::AttackModel;
use crate::model::{HypothesisPair, SchedulerSpec};
use crate::{Error, Result};

const MIN_CALIBRATION_SAMPLES: usize = 100;

/// Substream phase tags.
const PHASE_CALIBRATE: u64 = 0;
const PHASE_TYPE2: u64 = 1;
const PHASE_TYPE1: u64 = 2;

/// Running N-P test statistic. Carries the identified-transmission count and
/// the payload sum separately; the value is assembled on demand, which keeps
/// recursive accumulation exactly equal to a batch evaluation of the same
/// stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestStatistic {
    coef_count: f64,
    coef_sum: f64,
    n: u64,
    transmissions: u64,
    identified: u64,
    weighted_sum: f64,
}

impl TestStatistic {
    /// Fresh statistic for a hypothesis pair; value is 0 at `n = 0`.
    pub fn new(pair: &HypothesisPair) -> Self {
        let (t0, t1, s2) = (pair.theta0(), pair.theta1(), pair.sigma2());
        Self {
            coef_count: -(t1 * t1 - t0 * t0) / (2.0 * s2),
            coef_sum: (t1 - t0) / s2,
            n: 0,
            transmissions: 0,
            identified: 0,
            weighted_sum: 0.0,
        }
    }

    /// Consume one tick. The value grows by
    /// `delta gamma (-(theta1^2 - theta0^2)/(2 sigma^2) + (theta1 - theta0) y / sigma^2)`,
    /// i.e. not at all on censored or discarded ticks.
    pub fn update(&mut self, outcome: &DiscriminationOutcome) {
        self.n += 1;
        if outcome.gamma() {
            self.transmissions += 1;
        }
        if outcome.delta() {
            self.identified += 1;
            self.weighted_sum += outcome
                .recovered()
                .expect("delta = 1 always carries a recovered measurement");
        }
    }

    /// Current statistic value (log-likelihood ratio of the observed stream).
    pub fn value(&self) -> f64 {
        self.coef_count * self.identified as f64 + self.coef_sum * self.weighted_sum
    }

    /// Ticks consumed.
    pub fn ticks(&self) -> u64 {
        self.n
    }

    /// Ticks on which the scheduler transmitted.
    pub fn transmissions(&self) -> u64 {
        self.transmissions
    }

    /// Ticks whose measurement survived discrimination.
    pub fn identified(&self) -> u64 {
        self.identified
    }
}

/// Decision threshold in the log domain (`ln k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestThreshold {
    log_k: f64,
}

impl TestThreshold {
    pub fn new(log_k: f64) -> Result<Self> {
        if !log_k.is_finite() {
            return Err(Error::NonFinite {
                what: "log threshold",
                value: log_k,
            });
        }
        Ok(Self { log_k })
    }

    pub fn log_k(&self) -> f64 {
        self.log_k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    RejectNull,
    AcceptNull,
}

/// Reject iff the statistic strictly exceeds `ln k`; a tie accepts. The
/// statistic is continuous, so the tie rule is a deterministic convention,
/// not a randomized boundary.
pub fn decide(stat: &TestStatistic, threshold: &TestThreshold) -> Decision {
    if stat.value() > threshold.log_k() {
        Decision::RejectNull
    } else {
        Decision::AcceptNull
    }
}

/// Calibrated per-`N` thresholds: `ln k_N` is an empirical `(1 - alpha)`
/// quantile of simulated null statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    thresholds: BTreeMap<usize, f64>,
    sample_count: usize,
    significance: f64,
}

impl CalibrationResult {
    /// Assemble a calibration by hand (used to test edge cases and to replay
    /// stored thresholds).
    pub fn from_parts(
        thresholds: BTreeMap<usize, f64>,
        sample_count: usize,
        significance: f64,
    ) -> Result<Self> {
        validate_significance(significance)?;
        if sample_count == 0 {
            return Err(Error::SampleCountTooSmall {
                min: 1,
                got: sample_count,
            });
        }
        Ok(Self {
            thresholds,
            sample_count,
            significance,
        })
    }

    /// `ln k_N` for a run length, or a usage error if `N` was not calibrated.
    pub fn log_k(&self, n: usize) -> Result<f64> {
        self.thresholds
            .get(&n)
            .copied()
            .ok_or(Error::MissingCalibration(n))
    }

    pub fn threshold(&self, n: usize) -> Result<TestThreshold> {
        TestThreshold::new(self.log_k(n)?)
    }

    /// Calibrated `(N, ln k_N)` pairs in increasing `N`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.thresholds.iter().map(|(&n, &k)| (n, k))
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn significance(&self) -> f64 {
        self.significance
    }
}

/// One row of an estimated error curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCurveRow {
    /// Run length `N`.
    pub n: usize,
    /// Calibrated `ln k_N` used for the decisions.
    pub log_k: f64,
    /// Estimated Type I error (fraction rejecting under the null).
    pub type1: f64,
    /// Estimated Type II error (fraction accepting under the alternative).
    pub type2: f64,
    /// Binomial standard error of `type1`.
    pub se_type1: f64,
    /// Binomial standard error of `type2`.
    pub se_type2: f64,
    /// Mean number of transmitted measurements per run (alternative runs).
    pub mean_transmissions: f64,
    /// Number of accepting runs behind `type2`; zero flags an estimate that
    /// fell below Monte Carlo resolution.
    pub accepting_runs: usize,
}

impl ErrorCurveRow {
    pub fn type2_is_zero(&self) -> bool {
        self.accepting_runs == 0
    }
}

/// Estimated Type I/II error curve over the calibrated run lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    rows: Vec<ErrorCurveRow>,
    sample_count: usize,
}

impl ErrorCurve {
    pub fn rows(&self) -> &[ErrorCurveRow] {
        &self.rows
    }

    pub fn row_for(&self, n: usize) -> Option<&ErrorCurveRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Trials per estimate.
    pub fn sample_count(&self) -> usize {
        self.sample_count
    }
}

fn validate_significance(significance: f64) -> Result<()> {
    if !(significance.is_finite() && significance > 0.0 && significance < 0.5) {
        return Err(Error::ProbabilityRange {
            what: "significance",
            range: "(0, 0.5)",
            value: significance,
        });
    }
    Ok(())
}

/// Random-scheduler runs carry no discrimination protocol, so they only make
/// sense without an active attack.
fn validate_scheduler_attack(sched: &SchedulerSpec, attack: Option<&AttackModel>) -> Result<()> {
    if matches!(sched, SchedulerSpec::Random(_)) {
        if let Some(a) = attack {
            if a.intensity() > 0.0 {
                return Err(Error::UnsupportedProtocol("random"));
            }
        }
    }
    Ok(())
}

/// Simulate one run of `n_ticks` ticks under state `theta` and return the
/// final statistic. For the LRB scheduler the full channel is simulated
/// (injection, transmission, discrimination); the random scheduler counts
/// every transmitted measurement (`delta = 1`).
pub fn simulate_statistic(
    pair: &HypothesisPair,
    sched: &SchedulerSpec,
    attack: Option<&AttackModel>,
    theta: f64,
    n_ticks: usize,
    rng: &mut RngStream,
) -> Result<TestStatistic> {
    if !theta.is_finite() {
        return Err(Error::NonFinite {
            what: "theta",
            value: theta,
        });
    }
    validate_scheduler_attack(sched, attack)?;
    let mut stat = TestStatistic::new(pair);
    match sched {
        SchedulerSpec::Lrb(lrb) => {
            for _ in 0..n_ticks {
                let sample = generate_sample(rng, theta, pair);
                let injected = attack.and_then(|a| attacker_inject(rng, a));
                let obs = transmit(&sample, sched, injected, rng);
                stat.update(&discriminate_lrb(&obs, lrb));
            }
        }
        SchedulerSpec::Random(_) => {
            for _ in 0..n_ticks {
                let sample = generate_sample(rng, theta, pair);
                let obs = transmit(&sample, sched, None, rng);
                stat.update(&DiscriminationOutcome::pass_through(
                    obs.gamma(),
                    sample.value(),
                ));
            }
        }
    }
    Ok(stat)
}

/// The `ceil(S (1 - alpha))`-th order statistic of the sorted sample: the
/// smallest value whose empirical distribution function reaches `1 - alpha`.
fn empirical_log_threshold(sorted: &[f64], significance: f64) -> f64 {
    let s = sorted.len();
    // Nudge below the product so float drift cannot push an exact integer
    // rank over the next ceiling.
    let rank = (s as f64 * (1.0 - significance) - 1e-9).ceil() as usize;
    sorted[rank.clamp(1, s) - 1]
}

/// Calibrate `ln k_N` for each requested run length by simulating
/// `sample_count` independent null-hypothesis runs per `N` and taking the
/// empirical `(1 - significance)` quantile of their statistics.
pub fn calibrate_threshold(
    pair: &HypothesisPair,
    sched: &SchedulerSpec,
    attack: Option<&AttackModel>,
    n_list: &[usize],
    sample_count: usize,
    significance: f64,
    rng: &RngStream,
) -> Result<CalibrationResult> {
    validate_significance(significance)?;
    if sample_count < MIN_CALIBRATION_SAMPLES {
        return Err(Error::SampleCountTooSmall {
            min: MIN_CALIBRATION_SAMPLES,
            got: sample_count,
        });
    }
    if n_list.is_empty() {
        return Err(Error::EmptyGrid("run-length list"));
    }
    if n_list.contains(&0) {
        return Err(Error::ZeroRunLength);
    }
    validate_scheduler_attack(sched, attack)?;

    let mut thresholds = BTreeMap::new();
    for &n in n_list {
        let mut values: Vec<f64> = (0..sample_count)
            .into_par_iter()
            .map(|trial| {
                let mut stream =
                    rng.substream(&[PHASE_CALIBRATE, n as u64, trial as u64]);
                simulate_statistic(pair, sched, attack, pair.theta0(), n, &mut stream)
                    .expect("inputs validated above")
                    .value()
            })
            .collect();
        values.sort_unstable_by(f64::total_cmp);
        thresholds.insert(n, empirical_log_threshold(&values, significance));
    }
    Ok(CalibrationResult {
        thresholds,
        sample_count,
        significance,
    })
}

/// Estimate the Type I and Type II error at every calibrated run length by
/// simulating `sample_count` fresh runs under each hypothesis and applying
/// the calibrated thresholds.
pub fn estimate_errors(
    pair: &HypothesisPair,
    sched: &SchedulerSpec,
    attack: Option<&AttackModel>,
    calibration: &CalibrationResult,
    sample_count: usize,
    rng: &RngStream,
) -> Result<ErrorCurve> {
    if sample_count == 0 {
        return Err(Error::SampleCountTooSmall {
            min: 1,
            got: sample_count,
        });
    }
    validate_scheduler_attack(sched, attack)?;

    let s = sample_count as f64;
    let binom_se = |p: f64| (p * (1.0 - p) / s).sqrt();
    let mut rows = Vec::new();
    for (n, log_k) in calibration.entries() {
        let threshold = TestThreshold::new(log_k)?;

        let alternative: Vec<(f64, u64)> = (0..sample_count)
            .into_par_iter()
            .map(|trial| {
                let mut stream = rng.substream(&[PHASE_TYPE2, n as u64, trial as u64]);
                let stat =
                    simulate_statistic(pair, sched, attack, pair.theta1(), n, &mut stream)
                        .expect("inputs validated above");
                (stat.value(), stat.transmissions())
            })
            .collect();
        let accepting_runs = alternative
            .iter()
            .filter(|(v, _)| *v <= threshold.log_k())
            .count();
        let type2 = accepting_runs as f64 / s;
        let total_transmissions: u64 = alternative.iter().map(|(_, t)| t).sum();
        let mean_transmissions = total_transmissions as f64 / s;

        let rejecting_nulls = (0..sample_count)
            .into_par_iter()
            .map(|trial| {
                let mut stream = rng.substream(&[PHASE_TYPE1, n as u64, trial as u64]);
                let stat =
                    simulate_statistic(pair, sched, attack, pair.theta0(), n, &mut stream)
                        .expect("inputs validated above");
                u64::from(stat.value() > threshold.log_k())
            })
            .sum::<u64>();
        let type1 = rejecting_nulls as f64 / s;

        rows.push(ErrorCurveRow {
            n,
            log_k,
            type1,
            type2,
            se_type1: binom_se(type1),
            se_type2: binom_se(type2),
            mean_transmissions,
            accepting_runs,
        });
    }
    Ok(ErrorCurve {
        rows,
        sample_count,
    })
}
