//! System numerology: subcarrier grid, cyclic prefix, derived quantities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// OFDM numerology shared by every stage of the chain.
///
/// `k` is the total subcarrier count of the system grid, `k1` the count
/// allocated to the sensing user, `n_cp` the cyclic-prefix length in
/// samples, and `delta_f_hz` the subcarrier spacing. Everything else
/// (bandwidths, sample period, the maximum decimation factor) derives
/// from these four.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub delta_f_hz: f64,
    pub k: usize,
    pub k1: usize,
    pub n_cp: usize,
}

impl SystemConfig {
    /// Validates the numerology.
    ///
    /// `k1` must divide `k` so the decimation factor grid is integral.
    /// `k1 == k` is accepted: it is the full-band allocation used as a
    /// reference baseline, with `eta_max == 1`.
    pub fn new(delta_f_hz: f64, k: usize, k1: usize, n_cp: usize) -> Result<Self> {
        let cfg = SystemConfig {
            delta_f_hz,
            k,
            k1,
            n_cp,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_f_hz.is_finite() && self.delta_f_hz > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "subcarrier spacing must be positive, got {}",
                self.delta_f_hz
            )));
        }
        if self.k1 < 2 {
            return Err(Error::InvalidConfig(format!(
                "k1 must be at least 2, got {}",
                self.k1
            )));
        }
        if self.k1 > self.k {
            return Err(Error::InvalidConfig(format!(
                "k1 ({}) must not exceed k ({})",
                self.k1, self.k
            )));
        }
        if !self.k.is_multiple_of(self.k1) {
            return Err(Error::InvalidConfig(format!(
                "k1 ({}) must divide k ({})",
                self.k1, self.k
            )));
        }
        if self.n_cp == 0 || self.n_cp >= self.k {
            return Err(Error::InvalidConfig(format!(
                "n_cp must satisfy 0 < n_cp < k, got {} (k = {})",
                self.n_cp, self.k
            )));
        }
        Ok(())
    }

    /// Full system bandwidth B = delta_f * k, in Hz.
    pub fn bandwidth_hz(&self) -> f64 {
        self.delta_f_hz * self.k as f64
    }

    /// Allocated bandwidth B1 = delta_f * k1, in Hz.
    pub fn allocated_bandwidth_hz(&self) -> f64 {
        self.delta_f_hz * self.k1 as f64
    }

    /// Sample period T_s = 1/B, in seconds.
    pub fn sample_period_s(&self) -> f64 {
        1.0 / self.bandwidth_hz()
    }

    /// Cyclic prefix duration T_cp = n_cp * T_s, in seconds.
    pub fn cp_duration_s(&self) -> f64 {
        self.n_cp as f64 * self.sample_period_s()
    }

    /// Largest usable decimation factor, eta_max = k / k1.
    pub fn eta_max(&self) -> u32 {
        (self.k / self.k1) as u32
    }

    /// Checks a decimation factor against [1, eta_max].
    pub fn check_eta(&self, eta: u32) -> Result<()> {
        if eta < 1 || eta > self.eta_max() {
            return Err(Error::EtaOutOfRange {
                eta,
                eta_max: self.eta_max(),
            });
        }
        Ok(())
    }
}
