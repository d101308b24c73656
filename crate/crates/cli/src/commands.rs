//! The three subcommands: trade-off analysis, a single two-stage run, and
//! the Monte Carlo sweep.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::Path;

use tsde_core::{
    generate_channel, run_tsde, tradeoff_table, DelayEstimate, Rng, SimulatedUplink, StopRule,
    SystemConfig,
};

use crate::config::{Manifest, RunConfigFile};

/// Renders the eta -> (tau_res, tau_u) table for the configured numerology.
pub fn analyze(config: &RunConfigFile) -> Result<String> {
    let system = config.system_config()?;
    let table = tradeoff_table(&system)?;
    let mut out = String::from("eta,tau_res_ns,tau_u_ns\n");
    for row in table {
        out.push_str(&format!(
            "{},{:.6},{:.6}\n",
            row.eta,
            row.tau_res_s * 1e9,
            row.tau_u_s * 1e9
        ));
    }
    Ok(out)
}

/// Everything a single two-stage run produced, for external plotting.
#[derive(Debug, Serialize)]
pub struct EstimateRecord {
    pub seed: u64,
    pub system: SystemConfig,
    pub snr_db: Option<f64>,
    pub true_delays_s: Vec<f64>,
    pub true_gains: Vec<(f64, f64)>,
    pub stage1: DelayEstimate,
    pub bins: Vec<usize>,
    pub eta_star: u32,
    pub bin_span: usize,
    pub protection_width_s: f64,
    pub omega: Vec<usize>,
    pub stage2_ran: bool,
    pub estimate: DelayEstimate,
}

/// One seeded end-to-end run: draw a channel from the `[channel]` section,
/// execute both stages, and report every intermediate the method produced.
pub fn estimate(config: &RunConfigFile, seed: u64) -> Result<EstimateRecord> {
    let system = config.system_config()?;
    let scenario = config.scenario(seed)?;
    let est_cfg = config.estimator_config();

    let mut channel_rng = Rng::from_stream(seed, &[0]);
    let channel = generate_channel(&scenario, &system, &mut channel_rng)?;
    let link_rng = Rng::from_stream(seed, &[1]);
    let mut link = SimulatedUplink::new(&system, &channel, scenario.snr_db, link_rng);

    let stop = StopRule::threshold(est_cfg.gamma_th)?;
    let result = run_tsde(&mut link, &system, &est_cfg, &stop)?;

    Ok(EstimateRecord {
        seed,
        system,
        snr_db: scenario.snr_db,
        true_delays_s: channel.delays_s(),
        true_gains: channel
            .paths()
            .iter()
            .map(|p| (p.gain.re, p.gain.im))
            .collect(),
        stage1: result.stage1,
        bins: result.region.bins().to_vec(),
        eta_star: result.choice.eta_star,
        bin_span: result.choice.bin_span,
        protection_width_s: result.choice.protection_width_s,
        omega: result.region.omega_indices(system.n_cp),
        stage2_ran: result.stage2_ran,
        estimate: result.estimate,
    })
}

/// Runs the configured sweep and writes the data table plus the
/// reproducibility manifest next to it.
pub fn sweep(config: &RunConfigFile, output: &Path) -> Result<String> {
    let sc = config.sweep_config()?;
    let report = tsde_core::run_sweep(&sc)?;

    let csv = report.to_csv();
    std::fs::write(output, &csv)
        .with_context(|| format!("cannot write results to {}", output.display()))?;

    let manifest = Manifest::new(config)?;
    let manifest_path = output.with_extension("manifest.toml");
    let manifest_text =
        toml::to_string_pretty(&manifest).context("cannot serialize manifest")?;
    std::fs::write(&manifest_path, manifest_text)
        .with_context(|| format!("cannot write manifest to {}", manifest_path.display()))?;

    let mut summary = format!(
        "wrote {} rows to {} (manifest: {})\n",
        report.rows.len(),
        output.display(),
        manifest_path.display()
    );
    for row in &report.rows {
        summary.push_str(&format!(
            "  {:10} snr {:>6} dB: pd {:.4}, nmse {:.3e}, mean_l_hat {:.2}, failed {}\n",
            row.method.label(),
            row.snr_db,
            row.pd,
            row.nmse,
            row.mean_l_hat,
            row.failed_trials
        ));
    }
    Ok(summary)
}
