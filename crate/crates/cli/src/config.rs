//! Experiment configuration: a single strict JSON document, with CLI flags
//! overriding file fields and `LRB_DETECT_SEED` as the seed fallback.

use std::path::{Path, PathBuf};

use lrb_detect::{AttackModel, HypothesisPair};
use serde::Deserialize;

use crate::CliError;

/// Name of the environment variable consulted for the seed when neither the
/// `--seed` flag nor the config file provides one.
pub const SEED_ENV_VAR: &str = "LRB_DETECT_SEED";

/// `theta1 = sqrt(sigma2 * 10^(snr_db / 10))`, the alternative mean of a
/// signal-detection problem (`theta0 = 0`) at the given signal-to-noise
/// ratio in dB. Round-trips through `10 log10(theta1^2 / sigma2)` to 1e-12.
pub fn snr_to_theta1(snr_db: f64, sigma2: f64) -> f64 {
    (sigma2 * 10f64.powf(snr_db / 10.0)).sqrt()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    theta0: f64,
    theta1: Option<f64>,
    snr_db: Option<f64>,
    sigma2: f64,
    scheduler: Option<RawScheduler>,
    attack: Option<RawAttack>,
    #[serde(default)]
    n_list: Vec<usize>,
    sample_count: Option<usize>,
    significance: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    rate_grid: Option<Vec<f64>>,
    intensity_grid: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum RawScheduler {
    Lrb { rate: f64 },
    Random { p: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttack {
    intensity: f64,
    q_mean: Option<f64>,
    q_var: Option<f64>,
}

/// The scheduler requested in a config: an LRB scheduler specified by its
/// rate budget (thresholds are solved on demand) or a random scheduler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchedulerChoice {
    LrbRate(f64),
    RandomP(f64),
}

/// A validated experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub pair: HypothesisPair,
    pub scheduler: Option<SchedulerChoice>,
    pub attack: Option<AttackModel>,
    pub n_list: Vec<usize>,
    pub sample_count: usize,
    pub significance: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub rate_grid: Option<Vec<f64>>,
    pub intensity_grid: Option<Vec<f64>>,
}

impl ExperimentConfig {
    /// An attack is "active" when present with nonzero intensity; a zero
    /// intensity is indistinguishable from a secure channel.
    pub fn active_attack(&self) -> Option<&AttackModel> {
        self.attack.as_ref().filter(|a| a.intensity() > 0.0)
    }
}

fn config_err(msg: String) -> CliError {
    CliError::Config(msg)
}

/// Load and validate a config file, applying the flag overrides and the
/// documented seed precedence (flag, then file, then `LRB_DETECT_SEED`,
/// then 0).
pub fn load_config(
    path: &Path,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    let raw: RawConfig = serde_json::from_str(&text)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    resolve(raw, seed_flag, out_flag)
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV_VAR) {
        Ok(s) => s
            .parse::<u64>()
            .map(Some)
            .map_err(|_| config_err(format!("{SEED_ENV_VAR} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn resolve(
    raw: RawConfig,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> Result<ExperimentConfig, CliError> {
    let theta1 = match (raw.theta1, raw.snr_db) {
        (Some(t1), None) => t1,
        (None, Some(snr)) => {
            if raw.theta0 != 0.0 {
                return Err(config_err(format!(
                    "field `theta0` must be 0 when `snr_db` is given, got {}",
                    raw.theta0
                )));
            }
            snr_to_theta1(snr, raw.sigma2)
        }
        (Some(_), Some(_)) => {
            return Err(config_err(
                "fields `theta1` and `snr_db` are mutually exclusive; give exactly one".into(),
            ))
        }
        (None, None) => {
            return Err(config_err(
                "one of the fields `theta1` or `snr_db` is required".into(),
            ))
        }
    };
    let pair = HypothesisPair::new(raw.theta0, theta1, raw.sigma2)
        .map_err(|e| config_err(format!("fields `theta0`/`theta1`/`sigma2`: {e}")))?;

    let scheduler = match raw.scheduler {
        None => None,
        Some(RawScheduler::Lrb { rate }) => {
            if !(rate.is_finite() && rate > 0.0 && rate <= 1.0) {
                return Err(config_err(format!(
                    "field `scheduler.lrb.rate` must lie in (0, 1], got {rate}"
                )));
            }
            Some(SchedulerChoice::LrbRate(rate))
        }
        Some(RawScheduler::Random { p }) => {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(config_err(format!(
                    "field `scheduler.random.p` must lie in [0, 1], got {p}"
                )));
            }
            Some(SchedulerChoice::RandomP(p))
        }
    };

    let attack = match raw.attack {
        None => None,
        Some(a) => Some(
            AttackModel::new(
                a.intensity,
                a.q_mean.unwrap_or(pair.theta1()),
                a.q_var.unwrap_or(pair.sigma2()),
            )
            .map_err(|e| config_err(format!("field `attack`: {e}")))?,
        ),
    };

    let sample_count = raw.sample_count.unwrap_or(5000);
    if sample_count < 100 {
        return Err(config_err(format!(
            "field `sample_count` must be >= 100, got {sample_count}"
        )));
    }
    let significance = raw.significance.unwrap_or(0.05);
    if !(significance.is_finite() && significance > 0.0 && significance < 0.5) {
        return Err(config_err(format!(
            "field `significance` must lie in (0, 0.5), got {significance}"
        )));
    }
    if let Some(grid) = &raw.rate_grid {
        for &r in grid {
            if !(r.is_finite() && r > 0.0 && r <= 1.0) {
                return Err(config_err(format!(
                    "field `rate_grid` entries must lie in (0, 1], got {r}"
                )));
            }
        }
    }
    if let Some(grid) = &raw.intensity_grid {
        for &p in grid {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(config_err(format!(
                    "field `intensity_grid` entries must lie in [0, 1], got {p}"
                )));
            }
        }
    }
    for &n in &raw.n_list {
        if n == 0 {
            return Err(config_err(
                "field `n_list` entries must be >= 1, got 0".into(),
            ));
        }
    }

    let seed = match seed_flag {
        Some(s) => s,
        None => match raw.seed {
            Some(s) => s,
            None => env_seed()?.unwrap_or(0),
        },
    };

    Ok(ExperimentConfig {
        pair,
        scheduler,
        attack,
        n_list: raw.n_list,
        sample_count,
        significance,
        seed,
        out: out_flag.or(raw.out),
        rate_grid: raw.rate_grid,
        intensity_grid: raw.intensity_grid,
    })
}
