//! Uplink DFT-s-OFDM sensing chain with two-stage multipath delay
//! estimation.
//!
//! A user allocated only `k1` of the grid's `k` subcarriers faces a
//! resolution/ambiguity trade-off: spacing its subcarriers `eta` apart
//! sharpens the delay resolution to 1/(delta_f * k1 * eta) but shrinks the
//! unambiguous range to 1/(delta_f * eta). The two-stage method first
//! estimates coarsely with collocated subcarriers (eta = 1, full range),
//! pins the paths into delay bins, then retransmits with the largest
//! decimation factor whose grating lobes stay clear of the occupied bins.
//! With k1 >= sqrt(k * xi) occupied-bin span xi, the refined pass reaches
//! the full-bandwidth resolution 1/B from a fraction of the bandwidth.
//!
//! Module map:
//! - [`config`]: numerology and derived quantities.
//! - [`dsp`]: transforms, the delay-domain kernel, resolution/range forms.
//! - [`waveform`]: transmit chain and receiver front end.
//! - [`channel`]: multipath model, noise, scenario generation.
//! - [`estimator`]: matched-filter bank and successive estimation.
//! - [`tsde`]: the two-stage protocol.
//! - [`eval`]: Monte Carlo metrics, baselines, and the exhaustive oracle.

pub mod channel;
pub mod config;
pub mod dsp;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod rng;
pub mod tsde;
pub mod waveform;

pub use num_complex::Complex64;

pub use channel::{
    apply_channel_awgn, frequency_response, generate_channel, GainModel, MultipathChannel,
    PathComponent, ScenarioSpec,
};
pub use config::SystemConfig;
pub use dsp::{
    delay_resolution, dft, dirichlet_gain, idft, tradeoff_table, unambiguous_range, TradeoffRow,
};
pub use error::{Error, Result};
pub use estimator::{
    mf_spectrum, successive_estimate, BankSet, DelayEstimate, MatchedFilterBank, StopRule,
};
pub use eval::{
    detection_probability, nmse, oracle_exhaustive, run_sweep, Method, MonteCarloReport,
    ReportRow, SweepConfig,
};
pub use rng::Rng;
pub use tsde::{
    bin_set, run_tsde, run_tsde_with_banks, select_decimation, DecimationChoice, EstimatorConfig,
    Pilot, SearchRegion, SimulatedUplink, TsdeResult, UplinkLink,
};
pub use waveform::{
    equalize_despread, map_subcarriers, rx_front_end, sensing_snapshot, spread, strip_cp_dft,
    to_time_with_cp, SubcarrierMap, SymbolBlock,
};
