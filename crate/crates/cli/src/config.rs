//! Run configuration files: TOML with explicitly unit-suffixed keys,
//! unknown keys rejected, parse errors reported with their location.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

use tsde_core::{
    EstimatorConfig, GainModel, Method, ScenarioSpec, SweepConfig, SystemConfig,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub system: SystemSection,
    pub channel: Option<ChannelSection>,
    #[serde(default)]
    pub estimator: EstimatorSection,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub delta_f_hz: f64,
    pub k: usize,
    pub k1: usize,
    pub n_cp: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub l: usize,
    #[serde(default)]
    pub delay_min_s: f64,
    pub delay_spread_max_s: f64,
    pub on_grid: bool,
    #[serde(default)]
    pub min_separation_s: f64,
    #[serde(default)]
    pub gain_model: GainModelSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainModelSection {
    pub magnitude_min: f64,
    pub magnitude_max: f64,
}

impl Default for GainModelSection {
    fn default() -> Self {
        let gm = GainModel::default();
        GainModelSection {
            magnitude_min: gm.magnitude_min,
            magnitude_max: gm.magnitude_max,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSection {
    pub gamma_th: f64,
    pub joint_refit: bool,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        let cfg = EstimatorConfig::default();
        EstimatorSection {
            gamma_th: cfg.gamma_th,
            joint_refit: cfg.joint_refit,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let parsed: RunConfigFile = toml::from_str(&text)
            .map_err(|e| anyhow!("{}: {e}", path.display()))?;
        parsed.system_config()?; // surface numerology problems at parse time
        Ok(parsed)
    }

    pub fn system_config(&self) -> Result<SystemConfig> {
        SystemConfig::new(
            self.system.delta_f_hz,
            self.system.k,
            self.system.k1,
            self.system.n_cp,
        )
        .map_err(|e| anyhow!("[system]: {e}"))
    }

    pub fn estimator_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            gamma_th: self.estimator.gamma_th,
            joint_refit: self.estimator.joint_refit,
        }
    }

    /// The channel section as a scenario, with the seed supplied by the
    /// caller (CLI flag or sweep master seed).
    pub fn scenario(&self, seed: u64) -> Result<ScenarioSpec> {
        let ch = self
            .channel
            .as_ref()
            .ok_or_else(|| anyhow!("missing [channel] section"))?;
        let spec = ScenarioSpec {
            l: ch.l,
            delay_min_s: ch.delay_min_s,
            delay_spread_max_s: ch.delay_spread_max_s,
            on_grid: ch.on_grid,
            min_separation_s: ch.min_separation_s,
            gain_model: GainModel {
                magnitude_min: ch.gain_model.magnitude_min,
                magnitude_max: ch.gain_model.magnitude_max,
            },
            snr_db: ch.snr_db,
            seed,
        };
        spec.validate(&self.system_config()?)
            .map_err(|e| anyhow!("[channel]: {e}"))?;
        Ok(spec)
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| anyhow!("missing [sweep] section"))?;
        if sweep.methods.is_empty() {
            bail!("[sweep]: methods list is empty");
        }
        let sc = SweepConfig {
            system: self.system_config()?,
            scenario: self.scenario(sweep.master_seed)?,
            estimator: self.estimator_config(),
            snr_grid_db: sweep.snr_db.clone(),
            trials: sweep.trials,
            methods: sweep.methods.clone(),
            master_seed: sweep.master_seed,
        };
        sc.validate().map_err(|e| anyhow!("[sweep]: {e}"))?;
        Ok(sc)
    }
}

/// Reproducibility manifest written next to sweep results: the resolved
/// configuration plus the library version. Re-parsing it reproduces the
/// exact sweep configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub meta: ManifestMeta,
    pub system: SystemSection,
    pub channel: ChannelSection,
    pub estimator: EstimatorSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestMeta {
    pub version: String,
    pub master_seed: u64,
}

impl Manifest {
    pub fn new(config: &RunConfigFile) -> Result<Self> {
        let sweep = config
            .sweep
            .clone()
            .ok_or_else(|| anyhow!("missing [sweep] section"))?;
        let channel = config
            .channel
            .clone()
            .ok_or_else(|| anyhow!("missing [channel] section"))?;
        Ok(Manifest {
            meta: ManifestMeta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                master_seed: sweep.master_seed,
            },
            system: config.system.clone(),
            channel,
            estimator: config.estimator.clone(),
            sweep,
        })
    }

    pub fn to_run_config(&self) -> RunConfigFile {
        RunConfigFile {
            system: self.system.clone(),
            channel: Some(self.channel.clone()),
            estimator: self.estimator.clone(),
            sweep: Some(self.sweep.clone()),
        }
    }
}
