//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the sensing chain and the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("decimation factor {eta} outside [1, {eta_max}]")]
    EtaOutOfRange { eta: u32, eta_max: u32 },

    #[error("subcarrier map overflow: eta {eta} maps index {index} beyond k = {k}")]
    MapOverflow { eta: u32, index: usize, k: usize },

    #[error("zero symbol at index {0}: block unusable for snapshot division")]
    ZeroDivisor(usize),

    #[error("zero channel coefficient at subcarrier {0}")]
    ZeroChannelCoefficient(usize),

    #[error("path delay {delay_s} s outside [0, {t_cp} s) cyclic prefix window")]
    DelayOutOfCpWindow { delay_s: f64, t_cp: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("invalid stop rule: {0}")]
    InvalidStopRule(String),

    #[error("zero input vector")]
    ZeroInput,

    #[error("empty search region")]
    EmptyRegion,

    #[error("region index {index} outside filter bank domain [0, {n_cp})")]
    RegionOutOfDomain { index: usize, n_cp: usize },

    #[error("empty delay estimate: {0}")]
    EmptyEstimate(String),

    #[error("invalid metric input: {0}")]
    InvalidMetricInput(String),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),

    #[error("oracle domain too large: {domain} indices (limit {limit})")]
    OracleDomainTooLarge { domain: usize, limit: usize },

    #[error("oracle path count {0} unsupported (limit 2)")]
    OraclePathCount(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
