//! Monte Carlo harness: detection probability, delay NMSE, the method
//! baselines, and the exhaustive least-squares oracle.
//!
//! Every trial derives its own random streams from
//! (master_seed, method, snr, trial, purpose), so reports are a pure
//! function of the sweep configuration regardless of thread count or
//! execution order.

use num_complex::Complex64;
#[cfg(not(target_arch = "wasm32"))]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::channel::{generate_channel, MultipathChannel, ScenarioSpec};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimator::{successive_estimate, BankSet, DelayEstimate, MatchedFilterBank, StopRule};
use crate::rng::Rng;
use crate::tsde::{run_tsde_with_banks, EstimatorConfig, SimulatedUplink};

/// Estimation method under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Two-stage estimation with the configured k1.
    Tsde,
    /// Conventional single-pass estimation with collocated subcarriers
    /// (eta = 1) at the configured k1.
    Collocated,
    /// Single-pass estimation with the whole grid allocated (k1 = k).
    Fullband,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Tsde => "tsde",
            Method::Collocated => "collocated",
            Method::Fullband => "fullband",
        }
    }

    fn stream_id(&self) -> u64 {
        match self {
            Method::Tsde => 1,
            Method::Collocated => 2,
            Method::Fullband => 3,
        }
    }

    /// The numerology this method actually runs with.
    pub fn system_config(&self, base: &SystemConfig) -> Result<SystemConfig> {
        match self {
            Method::Tsde | Method::Collocated => Ok(*base),
            Method::Fullband => SystemConfig::new(base.delta_f_hz, base.k, base.k, base.n_cp),
        }
    }
}

/// Full description of one Monte Carlo sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub system: SystemConfig,
    /// Scenario template. Its `snr_db` and `seed` fields are ignored here:
    /// the sweep grid supplies the SNR and `master_seed` the randomness.
    pub scenario: ScenarioSpec,
    pub estimator: EstimatorConfig,
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.scenario.validate(&self.system)?;
        if self.trials < 1 {
            return Err(Error::InvalidSweep("trials must be >= 1".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidSweep("snr grid must be nonempty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidSweep("method list must be nonempty".into()));
        }
        if !(self.estimator.gamma_th > 0.0 && self.estimator.gamma_th < 1.0) {
            return Err(Error::InvalidSweep(format!(
                "gamma_th must lie in (0, 1), got {}",
                self.estimator.gamma_th
            )));
        }
        for method in &self.methods {
            method.system_config(&self.system)?;
        }
        Ok(())
    }
}

/// Aggregated results for one (method, SNR) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: Method,
    pub snr_db: f64,
    pub trials: usize,
    /// Fraction of trials with the path count detected exactly
    /// (threshold stopping; flagged runs count as incorrect).
    pub pd: f64,
    /// Mean per-trial NMSE over the trials included in `nmse_trials`
    /// (fixed-count stopping with the true path count). NaN when no trial
    /// qualified.
    pub nmse: f64,
    /// Sample variance of the per-trial NMSE, for statistical margins.
    pub nmse_var: f64,
    /// Mean detected path count from the threshold-stopping runs.
    pub mean_l_hat: f64,
    /// Trials contributing to `nmse` (failed runs are excluded).
    pub nmse_trials: usize,
    /// Trials with an estimator failure flag in either measurement.
    pub failed_trials: usize,
    /// Wall-clock seconds spent on this point (informational only; never
    /// part of deterministic output).
    pub runtime_s: f64,
}

impl ReportRow {
    /// The deterministic content of the row, for reproducibility checks.
    #[allow(clippy::type_complexity)]
    pub fn stable_fields(&self) -> (&'static str, u64, usize, u64, u64, u64, u64, usize, usize) {
        (
            self.method.label(),
            self.snr_db.to_bits(),
            self.trials,
            self.pd.to_bits(),
            self.nmse.to_bits(),
            self.nmse_var.to_bits(),
            self.mean_l_hat.to_bits(),
            self.nmse_trials,
            self.failed_trials,
        )
    }
}

/// One row per (method, SNR) pair, in configuration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub rows: Vec<ReportRow>,
}

impl MonteCarloReport {
    /// Renders the data table: header plus one newline-terminated row per
    /// (method, snr) point, fixed-precision decimals, `.` separator. The
    /// output is a pure function of the deterministic row fields, so equal
    /// sweep configurations produce byte-identical tables.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,snr_db,trials,pd,nmse\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.9}\n",
                row.method.label(),
                row.snr_db,
                row.trials,
                row.pd,
                row.nmse
            ));
        }
        out
    }
}

/// P_d: fraction of (l_hat, l_true) outcomes with the count detected
/// exactly.
pub fn detection_probability(outcomes: &[(usize, usize)]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::InvalidMetricInput("empty outcome list".into()));
    }
    let correct = outcomes.iter().filter(|(hat, truth)| hat == truth).count();
    Ok(correct as f64 / outcomes.len() as f64)
}

/// Per-trial NMSE: (1/L) sum |tau_l - tau_hat_l|^2 / |tau_l|^2, pairing the
/// two lists by ascending sort. True delays must be strictly positive.
pub fn nmse(true_delays_s: &[f64], estimated_delays_s: &[f64]) -> Result<f64> {
    if true_delays_s.is_empty() {
        return Err(Error::InvalidMetricInput("empty delay list".into()));
    }
    if true_delays_s.len() != estimated_delays_s.len() {
        return Err(Error::LengthMismatch {
            expected: true_delays_s.len(),
            actual: estimated_delays_s.len(),
        });
    }
    if true_delays_s.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidMetricInput(
            "true delays must be strictly positive for the normalized error".into(),
        ));
    }
    let mut truth = true_delays_s.to_vec();
    let mut estimate = estimated_delays_s.to_vec();
    truth.sort_by(|a, b| a.partial_cmp(b).unwrap());
    estimate.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sum: f64 = truth
        .iter()
        .zip(&estimate)
        .map(|(t, e)| {
            let d = t - e;
            d * d / (t * t)
        })
        .sum();
    Ok(sum / truth.len() as f64)
}

const ORACLE_DOMAIN_LIMIT: usize = 256;

/// Exhaustive least-squares delay search: over all index subsets of size
/// `l_true` (at most 2), minimize the residual of projecting `r` onto the
/// selected columns. Ground truth for small-instance equivalence tests;
/// independent of the successive estimator.
pub fn oracle_exhaustive(
    r: &[Complex64],
    bank: &MatchedFilterBank,
    l_true: usize,
) -> Result<Vec<usize>> {
    if l_true == 0 || l_true > 2 {
        return Err(Error::OraclePathCount(l_true));
    }
    if bank.len() > ORACLE_DOMAIN_LIMIT {
        return Err(Error::OracleDomainTooLarge {
            domain: bank.len(),
            limit: ORACLE_DOMAIN_LIMIT,
        });
    }
    if r.len() != bank.k1() {
        return Err(Error::LengthMismatch {
            expected: bank.k1(),
            actual: r.len(),
        });
    }

    let k1 = bank.k1() as f64;
    let correlations: Vec<Complex64> = (0..bank.len()).map(|p| bank.correlate(p, r)).collect();

    if l_true == 1 {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (p, corr) in correlations.iter().enumerate() {
            let energy = corr.norm_sqr() / k1;
            if energy > best.1 {
                best = (p, energy);
            }
        }
        return Ok(vec![best.0]);
    }

    let mut best: Option<(usize, usize, f64)> = None;
    for p in 0..bank.len() {
        for q in (p + 1)..bank.len() {
            // Projected energy onto span{f_p, f_q}: b^H G^{-1} b with
            // G = [[k1, g], [conj g, k1]], b = [corr_p, corr_q].
            let g: Complex64 = bank
                .column(p)
                .iter()
                .zip(bank.column(q))
                .map(|(a, b)| a.conj() * b)
                .sum();
            let det = k1 * k1 - g.norm_sqr();
            if det.abs() < 1e-9 * k1 * k1 {
                // Collinear columns (aliases); a 2-path fit is meaningless.
                continue;
            }
            let bp = correlations[p];
            let bq = correlations[q];
            let c1 = (bp * k1 - g * bq) / det;
            let c2 = (bq * k1 - g.conj() * bp) / det;
            let energy = (bp.conj() * c1 + bq.conj() * c2).re;
            if best.is_none() || energy > best.unwrap().2 {
                best = Some((p, q, energy));
            }
        }
    }
    let (p, q, _) = best.ok_or(Error::EmptyRegion)?;
    Ok(vec![p, q])
}

struct TrialOutcome {
    pd_l_hat: Option<usize>,
    pd_correct: bool,
    nmse_value: Option<f64>,
    failed: bool,
}

/// Runs the configured sweep. The output is a pure function of the
/// configuration: trials parallelize over the current rayon pool, and
/// aggregation folds them in trial order.
pub fn run_sweep(sc: &SweepConfig) -> Result<MonteCarloReport> {
    sc.validate()?;
    let mut rows = Vec::with_capacity(sc.methods.len() * sc.snr_grid_db.len());
    for &method in &sc.methods {
        let cfg = method.system_config(&sc.system)?;
        let banks = BankSet::build_all(&cfg)?;
        for &snr_db in &sc.snr_grid_db {
            let start = Instant::now();
            // Trials run in parallel where rayon is available; collecting
            // by trial index keeps aggregation order-independent either way.
            #[cfg(not(target_arch = "wasm32"))]
            let outcomes: Vec<TrialOutcome> = (0..sc.trials)
                .into_par_iter()
                .map(|trial| run_trial(sc, method, &cfg, &banks, snr_db, trial as u64))
                .collect();
            #[cfg(target_arch = "wasm32")]
            let outcomes: Vec<TrialOutcome> = (0..sc.trials)
                .map(|trial| run_trial(sc, method, &cfg, &banks, snr_db, trial as u64))
                .collect();
            rows.push(aggregate(
                method,
                snr_db,
                &outcomes,
                start.elapsed().as_secs_f64(),
            ));
        }
    }
    Ok(MonteCarloReport { rows })
}

fn run_trial(
    sc: &SweepConfig,
    method: Method,
    cfg: &SystemConfig,
    banks: &BankSet,
    snr_db: f64,
    trial: u64,
) -> TrialOutcome {
    let base_tags = [method.stream_id(), snr_db.to_bits(), trial];
    let stream = |purpose: u64| {
        let mut tags = base_tags.to_vec();
        tags.push(purpose);
        Rng::from_stream(sc.master_seed, &tags)
    };

    let mut channel_rng = stream(0);
    let channel = match generate_channel(&sc.scenario, cfg, &mut channel_rng) {
        Ok(ch) => ch,
        Err(_) => {
            return TrialOutcome {
                pd_l_hat: None,
                pd_correct: false,
                nmse_value: None,
                failed: true,
            }
        }
    };
    let l_true = channel.path_count();

    // Detection leg: threshold stopping; flagged runs are incorrect.
    let mut failed = false;
    let pd_run = StopRule::threshold(sc.estimator.gamma_th)
        .and_then(|stop| execute(method, cfg, banks, &channel, snr_db, &sc.estimator, &stop, stream(1)));
    let (pd_l_hat, pd_correct) = match pd_run {
        Ok(est) => {
            let ok = !est.capped && est.l_hat() == l_true;
            if est.capped {
                failed = true;
            }
            (Some(est.l_hat()), ok)
        }
        Err(_) => {
            failed = true;
            (None, false)
        }
    };

    // NMSE leg: fixed-count stopping with the true path count; flagged
    // runs are excluded from the average.
    let nmse_run = StopRule::fixed_count(l_true)
        .and_then(|stop| execute(method, cfg, banks, &channel, snr_db, &sc.estimator, &stop, stream(2)));
    let nmse_value = match nmse_run {
        Ok(est) if !est.capped => nmse(&channel.delays_s(), &est.delays_s).ok(),
        _ => None,
    };
    if nmse_value.is_none() {
        failed = true;
    }

    TrialOutcome {
        pd_l_hat,
        pd_correct,
        nmse_value,
        failed,
    }
}

#[allow(clippy::too_many_arguments)]
fn execute(
    method: Method,
    cfg: &SystemConfig,
    banks: &BankSet,
    channel: &MultipathChannel,
    snr_db: f64,
    est_cfg: &EstimatorConfig,
    stop: &StopRule,
    rng: Rng,
) -> Result<DelayEstimate> {
    let mut link = SimulatedUplink::new(cfg, channel, Some(snr_db), rng);
    match method {
        Method::Tsde => {
            run_tsde_with_banks(&mut link, cfg, banks, est_cfg, stop).map(|r| r.estimate)
        }
        Method::Collocated | Method::Fullband => {
            use crate::tsde::UplinkLink;
            let r = link.transmit(1)?;
            successive_estimate(&r, banks.bank(1)?, stop, None, est_cfg.joint_refit)
        }
    }
}

fn aggregate(method: Method, snr_db: f64, outcomes: &[TrialOutcome], runtime_s: f64) -> ReportRow {
    let trials = outcomes.len();
    let pd = outcomes.iter().filter(|o| o.pd_correct).count() as f64 / trials as f64;
    let l_hat_count = outcomes.iter().filter(|o| o.pd_l_hat.is_some()).count();
    let mean_l_hat = if l_hat_count > 0 {
        outcomes
            .iter()
            .filter_map(|o| o.pd_l_hat)
            .map(|l| l as f64)
            .sum::<f64>()
            / l_hat_count as f64
    } else {
        f64::NAN
    };
    let nmse_trials = outcomes.iter().filter(|o| o.nmse_value.is_some()).count();
    let nmse = if nmse_trials > 0 {
        outcomes.iter().filter_map(|o| o.nmse_value).sum::<f64>() / nmse_trials as f64
    } else {
        f64::NAN
    };
    let nmse_var = if nmse_trials > 1 {
        outcomes
            .iter()
            .filter_map(|o| o.nmse_value)
            .map(|v| (v - nmse) * (v - nmse))
            .sum::<f64>()
            / (nmse_trials - 1) as f64
    } else {
        0.0
    };
    let failed_trials = outcomes.iter().filter(|o| o.failed).count();
    ReportRow {
        method,
        snr_db,
        trials,
        pd,
        nmse,
        nmse_var,
        mean_l_hat,
        nmse_trials,
        failed_trials,
        runtime_s,
    }
}
