//! The four experiment runners behind the CLI subcommands. Each produces a
//! [`CsvTable`] whose bytes depend only on the (config, seed) pair.

use lrb_detect::{
    attacked_exponent, calibrate_threshold, estimate_errors, random_exponent,
    solve_optimal_rate_under_attack, solve_optimal_thresholds, AttackModel, Error as LibError,
    HypothesisPair, OptimalDesign, RandomScheduler, RateConstraint, RngStream, SchedulerSpec,
};

use crate::config::{ExperimentConfig, SchedulerChoice};
use crate::csv::{cell, CsvTable};
use crate::CliError;

/// Rate grid used when the config gives none: 0.01 through 1.00 in steps of
/// 0.01.
pub fn default_rate_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 / 100.0).collect()
}

/// Intensity grid used when the config gives none: 0.0 through 1.0 in steps
/// of 0.1.
pub fn default_intensity_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn lib_err(e: LibError) -> CliError {
    match e {
        LibError::NonConvergence { .. } => CliError::Numeric(e),
        other => CliError::Config(other.to_string()),
    }
}

fn solve_design(pair: &HypothesisPair, rate: f64) -> Result<OptimalDesign, CliError> {
    let constraint = RateConstraint::new(rate).map_err(lib_err)?;
    solve_optimal_thresholds(pair, constraint).map_err(lib_err)
}

/// The deceptive-signal law for attacked columns: the configured one, or
/// `q ~ N(theta1, sigma2)` when the config only names intensities.
fn q_law(cfg: &ExperimentConfig) -> (f64, f64) {
    match &cfg.attack {
        Some(a) => (a.q_mean(), a.q_var()),
        None => (cfg.pair.theta1(), cfg.pair.sigma2()),
    }
}

/// Exponent sweep over transmission rates: the LRB and random exponents,
/// attacked exponents for each requested intensity, and the solved
/// thresholds.
pub fn run_exponent_sweep(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    let rates = cfg.rate_grid.clone().unwrap_or_else(default_rate_grid);
    let intensities: Vec<f64> = match (&cfg.intensity_grid, &cfg.attack) {
        (Some(grid), _) => grid.clone(),
        (None, Some(a)) => vec![a.intensity()],
        (None, None) => Vec::new(),
    };
    let (q_mean, q_var) = q_law(cfg);

    let mut header = vec!["R".to_string(), "lrb_exponent".into(), "random_exponent".into()];
    for p in &intensities {
        header.push(format!("attacked_exponent_p{}", cell(*p)));
    }
    header.extend(["a_star".to_string(), "b_star".into()]);
    let mut table = CsvTable::new(header);

    for &rate in &rates {
        let design = solve_design(&cfg.pair, rate)?;
        let mut row = vec![
            cell(rate),
            cell(design.exponent().value()),
            cell(random_exponent(&cfg.pair, rate).map_err(lib_err)?.value()),
        ];
        for &p in &intensities {
            let attack = AttackModel::new(p, q_mean, q_var).map_err(lib_err)?;
            row.push(cell(
                attacked_exponent(&cfg.pair, design.scheduler(), &attack).value(),
            ));
        }
        row.push(cell(design.scheduler().lower()));
        row.push(cell(design.scheduler().upper()));
        table.push_row(row);
    }
    Ok(table)
}

/// Solved rate-constrained designs, one row per rate.
pub fn run_thresholds(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    let rates = cfg.rate_grid.clone().unwrap_or_else(default_rate_grid);
    let mut table = CsvTable::new(["R", "a_star", "b_star", "achieved_rate", "exponent"]);
    for &rate in &rates {
        let design = solve_design(&cfg.pair, rate)?;
        table.push_row([
            cell(rate),
            cell(design.scheduler().lower()),
            cell(design.scheduler().upper()),
            cell(design.achieved_rate()),
            cell(design.exponent().value()),
        ]);
    }
    Ok(table)
}

/// The best transmission rate (and its exponent) per attack intensity.
pub fn run_attack_optimum(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    let rates = cfg.rate_grid.clone().unwrap_or_else(default_rate_grid);
    let intensities = cfg
        .intensity_grid
        .clone()
        .unwrap_or_else(default_intensity_grid);
    if rates.is_empty() {
        return Err(CliError::Config("field `rate_grid` must be non-empty".into()));
    }
    if intensities.is_empty() {
        return Err(CliError::Config(
            "field `intensity_grid` must be non-empty".into(),
        ));
    }
    let (q_mean, q_var) = q_law(cfg);
    let mut table = CsvTable::new(["intensity", "best_rate", "best_exponent"]);
    for &p in &intensities {
        let attack = AttackModel::new(p, q_mean, q_var).map_err(lib_err)?;
        let (best_rate, best_exponent) =
            solve_optimal_rate_under_attack(&cfg.pair, &attack, &rates).map_err(lib_err)?;
        table.push_row([cell(p), cell(best_rate), cell(best_exponent.value())]);
    }
    Ok(table)
}

struct McSeries {
    label: &'static str,
    rate: f64,
    spec: SchedulerSpec,
    attack: Option<AttackModel>,
}

/// The two-step Monte Carlo experiment: calibrate `ln k_N` per run length at
/// the configured significance, then estimate Type I/II errors. One series
/// per configured scheduler (or per rate-grid entry), plus a full-measurement
/// reference series when the channel is secure.
pub fn run_mc_experiment(cfg: &ExperimentConfig) -> Result<CsvTable, CliError> {
    if cfg.n_list.is_empty() {
        return Err(CliError::Config(
            "field `n_list` is required for simulate".into(),
        ));
    }
    let attack = cfg.active_attack().copied();

    let mut series: Vec<McSeries> = Vec::new();
    match (&cfg.rate_grid, &cfg.scheduler) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "fields `scheduler` and `rate_grid` are mutually exclusive for simulate".into(),
            ))
        }
        (Some(grid), None) => {
            for &rate in grid {
                series.push(McSeries {
                    label: "lrb",
                    rate,
                    spec: SchedulerSpec::Lrb(*solve_design(&cfg.pair, rate)?.scheduler()),
                    attack,
                });
            }
        }
        (None, Some(SchedulerChoice::LrbRate(rate))) => {
            series.push(McSeries {
                label: "lrb",
                rate: *rate,
                spec: SchedulerSpec::Lrb(*solve_design(&cfg.pair, *rate)?.scheduler()),
                attack,
            });
        }
        (None, Some(SchedulerChoice::RandomP(p))) => {
            if attack.is_some() {
                return Err(CliError::Config(
                    "field `scheduler`: the random scheduler cannot be combined with an active attack"
                        .into(),
                ));
            }
            series.push(McSeries {
                label: "random",
                rate: *p,
                spec: SchedulerSpec::Random(RandomScheduler::new(*p).map_err(lib_err)?),
                attack: None,
            });
        }
        (None, None) => {
            return Err(CliError::Config(
                "one of the fields `scheduler` or `rate_grid` is required for simulate".into(),
            ))
        }
    }
    if attack.is_none() {
        series.push(McSeries {
            label: "full",
            rate: 1.0,
            spec: SchedulerSpec::Lrb(*solve_design(&cfg.pair, 1.0)?.scheduler()),
            attack: None,
        });
    }

    let mut table = CsvTable::new([
        "N",
        "scheduler",
        "R",
        "attack_intensity",
        "log_k",
        "type1_hat",
        "type2_hat",
        "se_type2",
    ]);
    for (index, s) in series.iter().enumerate() {
        let rng = RngStream::new(cfg.seed, index as u64);
        let calibration = calibrate_threshold(
            &cfg.pair,
            &s.spec,
            s.attack.as_ref(),
            &cfg.n_list,
            cfg.sample_count,
            cfg.significance,
            &rng,
        )
        .map_err(lib_err)?;
        let curve = estimate_errors(
            &cfg.pair,
            &s.spec,
            s.attack.as_ref(),
            &calibration,
            cfg.sample_count,
            &rng,
        )
        .map_err(lib_err)?;
        let intensity = s.attack.as_ref().map_or(0.0, |a| a.intensity());
        for row in curve.rows() {
            table.push_row([
                row.n.to_string(),
                s.label.to_string(),
                cell(s.rate),
                cell(intensity),
                cell(row.log_k),
                cell(row.type1),
                cell(row.type2),
                cell(row.se_type2),
            ]);
        }
    }
    Ok(table)
}
