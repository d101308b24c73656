//! Multipath frequency-selective channel, additive noise, and randomized
//! scenario generation for Monte Carlo runs.
//!
//! The channel is applied multiplicatively on the used subcarriers, which
//! is exact for delays inside the cyclic prefix; a time-domain convolution
//! oracle in the test suite pins that equivalence down.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// One propagation path: complex gain (post receive beamforming) and delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathComponent {
    pub gain: Complex64,
    pub delay_s: f64,
}

/// A set of discrete propagation paths with distinct delays inside the CP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipathChannel {
    paths: Vec<PathComponent>,
}

impl MultipathChannel {
    /// Validates L >= 1, every delay in [0, T_cp), and pairwise-distinct
    /// delays; delays at or beyond the CP would break the multiplicative
    /// per-subcarrier model.
    pub fn new(paths: Vec<PathComponent>, cfg: &SystemConfig) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidChannel("at least one path required".into()));
        }
        let t_cp = cfg.cp_duration_s();
        for p in &paths {
            if !(0.0..t_cp).contains(&p.delay_s) {
                return Err(Error::DelayOutOfCpWindow {
                    delay_s: p.delay_s,
                    t_cp,
                });
            }
        }
        for i in 0..paths.len() {
            for j in (i + 1)..paths.len() {
                if paths[i].delay_s == paths[j].delay_s {
                    return Err(Error::InvalidChannel(format!(
                        "duplicate path delay {} s",
                        paths[i].delay_s
                    )));
                }
            }
        }
        Ok(MultipathChannel { paths })
    }

    pub fn paths(&self) -> &[PathComponent] {
        &self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Delays in seconds, in path order.
    pub fn delays_s(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.delay_s).collect()
    }

    pub fn min_delay_s(&self) -> f64 {
        self.paths.iter().map(|p| p.delay_s).fold(f64::INFINITY, f64::min)
    }

    pub fn max_delay_s(&self) -> f64 {
        self.paths.iter().map(|p| p.delay_s).fold(0.0, f64::max)
    }

    /// Delay spread tau_d = tau_max - tau_min.
    pub fn delay_spread_s(&self) -> f64 {
        self.max_delay_s() - self.min_delay_s()
    }
}

/// Path-gain magnitude model: |gain| uniform in [magnitude_min, magnitude_max],
/// phase uniform over the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainModel {
    pub magnitude_min: f64,
    pub magnitude_max: f64,
}

impl Default for GainModel {
    fn default() -> Self {
        GainModel {
            magnitude_min: 0.5,
            magnitude_max: 1.0,
        }
    }
}

/// Randomized scenario description for Monte Carlo trials.
///
/// Delays are drawn uniformly in [delay_min_s, delay_min_s + delay_spread_max_s]
/// subject to the pairwise `min_separation_s`, and snapped to the T_s grid
/// when `on_grid`. `snr_db` is the per-used-subcarrier SNR; `None` means
/// noiseless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub l: usize,
    #[serde(default)]
    pub delay_min_s: f64,
    pub delay_spread_max_s: f64,
    pub on_grid: bool,
    #[serde(default)]
    pub min_separation_s: f64,
    #[serde(default)]
    pub gain_model: GainModel,
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if self.l < 1 {
            return Err(Error::InfeasibleScenario("path count must be >= 1".into()));
        }
        if self.delay_min_s < 0.0 || self.min_separation_s < 0.0 {
            return Err(Error::InfeasibleScenario(
                "delay offsets and separations must be nonnegative".into(),
            ));
        }
        let t_cp = cfg.cp_duration_s();
        let window_end = self.delay_min_s + self.delay_spread_max_s;
        if window_end >= t_cp || window_end.is_nan() {
            return Err(Error::InfeasibleScenario(format!(
                "delay window [{}, {window_end}] s must end below T_cp = {t_cp} s",
                self.delay_min_s
            )));
        }
        if self.l > 1 && (self.l - 1) as f64 * self.min_separation_s > self.delay_spread_max_s {
            return Err(Error::InfeasibleScenario(format!(
                "cannot place {} delays with separation {} s inside a {} s window",
                self.l, self.min_separation_s, self.delay_spread_max_s
            )));
        }
        if !(self.gain_model.magnitude_min > 0.0
            && self.gain_model.magnitude_max >= self.gain_model.magnitude_min)
        {
            return Err(Error::InfeasibleScenario(
                "gain magnitudes must satisfy 0 < min <= max".into(),
            ));
        }
        Ok(())
    }
}

/// Channel frequency response on the used subcarriers:
/// `H[k] = sum_l gain_l * e^{-j 2 pi delta_f eta k tau_l}`, k = 0..k1-1.
///
/// With a full-band configuration (k1 = k) and eta = 1 this is the complete
/// grid response.
pub fn frequency_response(
    ch: &MultipathChannel,
    eta: u32,
    cfg: &SystemConfig,
) -> Result<Vec<Complex64>> {
    cfg.check_eta(eta)?;
    let t_cp = cfg.cp_duration_s();
    for p in ch.paths() {
        if p.delay_s >= t_cp {
            return Err(Error::DelayOutOfCpWindow {
                delay_s: p.delay_s,
                t_cp,
            });
        }
    }
    let mut response = vec![Complex64::new(0.0, 0.0); cfg.k1];
    for path in ch.paths() {
        // Phase step per used subcarrier for this path.
        let step = -TAU * cfg.delta_f_hz * eta as f64 * path.delay_s;
        for (k, h) in response.iter_mut().enumerate() {
            let angle = step * k as f64;
            *h += path.gain * Complex64::new(angle.cos(), angle.sin());
        }
    }
    Ok(response)
}

/// Applies the channel and additive noise on the used subcarriers:
/// `Y[k] = H[k] X[k] + w[k]`, with w circularly-symmetric complex Gaussian of
/// total variance 10^(-snr_db/10) per sample (unit-power symbols assumed).
/// `None` gives the noiseless product.
pub fn apply_channel_awgn(
    x_used: &[Complex64],
    ch: &MultipathChannel,
    eta: u32,
    snr_db: Option<f64>,
    cfg: &SystemConfig,
    rng: &mut Rng,
) -> Result<Vec<Complex64>> {
    if x_used.len() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: x_used.len(),
        });
    }
    let h = frequency_response(ch, eta, cfg)?;
    let mut y: Vec<Complex64> = x_used.iter().zip(&h).map(|(x, h)| x * h).collect();
    if let Some(snr) = snr_db {
        let variance = 10f64.powf(-snr / 10.0);
        for sample in &mut y {
            *sample += rng.complex_gaussian(variance);
        }
    }
    Ok(y)
}

const MAX_DRAW_ATTEMPTS: usize = 10_000;

/// Draws a random multipath channel per the scenario spec.
///
/// Rejection sampling keeps redrawing the delay set until all pairwise gaps
/// meet `min_separation_s` (and, on the grid, until all snapped delays are
/// distinct). Gains are drawn from the gain model.
pub fn generate_channel(
    spec: &ScenarioSpec,
    cfg: &SystemConfig,
    rng: &mut Rng,
) -> Result<MultipathChannel> {
    spec.validate(cfg)?;
    let t_s = cfg.sample_period_s();
    let lo = spec.delay_min_s;
    let hi = spec.delay_min_s + spec.delay_spread_max_s;

    let mut delays = Vec::with_capacity(spec.l);
    'attempts: for attempt in 0.. {
        if attempt >= MAX_DRAW_ATTEMPTS {
            return Err(Error::InfeasibleScenario(format!(
                "gave up placing {} delays with separation {} s after {} attempts",
                spec.l, spec.min_separation_s, MAX_DRAW_ATTEMPTS
            )));
        }
        delays.clear();
        for _ in 0..spec.l {
            let mut tau = rng.uniform(lo, hi);
            if spec.on_grid {
                tau = (tau / t_s).round() * t_s;
            }
            delays.push(tau);
        }
        for i in 0..delays.len() {
            for j in (i + 1)..delays.len() {
                let gap = (delays[i] - delays[j]).abs();
                if gap < spec.min_separation_s || delays[i] == delays[j] {
                    continue 'attempts;
                }
            }
        }
        break;
    }

    let paths = delays
        .into_iter()
        .map(|delay_s| {
            let magnitude = rng.uniform(spec.gain_model.magnitude_min, spec.gain_model.magnitude_max);
            let phase = rng.uniform(0.0, TAU);
            PathComponent {
                gain: Complex64::from_polar(magnitude, phase),
                delay_s,
            }
        })
        .collect();
    MultipathChannel::new(paths, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SystemConfig {
        SystemConfig::new(120e3, 1024, 32, 128).unwrap()
    }

    fn single_path(gain: Complex64, delay_s: f64) -> Vec<PathComponent> {
        vec![PathComponent { gain, delay_s }]
    }

    #[test]
    fn zero_delay_path_gives_flat_response() {
        let c = cfg();
        let ch = MultipathChannel::new(single_path(Complex64::new(1.0, 0.0), 0.0), &c).unwrap();
        let h = frequency_response(&ch, 1, &c).unwrap();
        assert_eq!(h.len(), c.k1);
        for v in h {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn integer_delay_closed_form_on_full_grid() {
        // Full-band config: H[k] = e^{-j 2 pi k p / K} for a path at p*T_s.
        let c = SystemConfig::new(120e3, 64, 64, 8).unwrap();
        let p = 5usize;
        let ch = MultipathChannel::new(
            single_path(Complex64::new(1.0, 0.0), p as f64 * c.sample_period_s()),
            &c,
        )
        .unwrap();
        let h = frequency_response(&ch, 1, &c).unwrap();
        for (k, v) in h.iter().enumerate() {
            let expected = Complex64::from_polar(1.0, -TAU * (k * p) as f64 / 64.0);
            assert!((v - expected).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn response_is_linear_in_paths() {
        let c = cfg();
        let g1 = Complex64::new(0.8, -0.2);
        let g2 = Complex64::new(-0.4, 0.6);
        let t1 = 13.0 * c.sample_period_s();
        let t2 = 57.0 * c.sample_period_s();
        let ch1 = MultipathChannel::new(single_path(g1, t1), &c).unwrap();
        let ch2 = MultipathChannel::new(single_path(g2, t2), &c).unwrap();
        let both = MultipathChannel::new(
            vec![
                PathComponent { gain: g1, delay_s: t1 },
                PathComponent { gain: g2, delay_s: t2 },
            ],
            &c,
        )
        .unwrap();
        let h1 = frequency_response(&ch1, 3, &c).unwrap();
        let h2 = frequency_response(&ch2, 3, &c).unwrap();
        let h = frequency_response(&both, 3, &c).unwrap();
        for k in 0..c.k1 {
            assert!((h[k] - (h1[k] + h2[k])).norm() < 1e-12);
        }
    }

    #[test]
    fn decimated_response_subsamples_unit_factor_response() {
        // Response at factor eta equals the eta=1 full-band response read
        // out at indices eta*k: consistency between the grid channel and
        // the demapped channel.
        let full = SystemConfig::new(120e3, 1024, 1024, 128).unwrap();
        let c = cfg();
        let ch = MultipathChannel::new(
            vec![
                PathComponent {
                    gain: Complex64::new(0.9, 0.1),
                    delay_s: 100.0 * c.sample_period_s(),
                },
                PathComponent {
                    gain: Complex64::new(-0.3, 0.5),
                    delay_s: 38.5 * c.sample_period_s(),
                },
            ],
            &c,
        )
        .unwrap();
        let h_full = frequency_response(&ch, 1, &full).unwrap();
        for eta in [1u32, 2, 8, 32] {
            let h = frequency_response(&ch, eta, &c).unwrap();
            for k in 0..c.k1 {
                let expected = h_full[eta as usize * k];
                assert!((h[k] - expected).norm() < 1e-10, "eta {eta}, k {k}");
            }
        }
    }

    #[test]
    fn noiseless_apply_is_pure_product() {
        let c = cfg();
        let ch = MultipathChannel::new(single_path(Complex64::new(1.0, 0.0), 0.0), &c).unwrap();
        let x: Vec<Complex64> = (0..c.k1)
            .map(|k| Complex64::from_polar(1.0, 0.1 * k as f64))
            .collect();
        let mut rng = Rng::seed_from(1);
        let y = apply_channel_awgn(&x, &ch, 1, None, &c, &mut rng).unwrap();
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn integer_delay_phase_ramp_composition() {
        let c = cfg();
        let p = 7usize;
        let ch = MultipathChannel::new(
            single_path(Complex64::new(1.0, 0.0), p as f64 * c.sample_period_s()),
            &c,
        )
        .unwrap();
        let mut rng = Rng::seed_from(3);
        let x: Vec<Complex64> = (0..c.k1)
            .map(|_| Complex64::from_polar(1.0, rng.uniform(0.0, TAU)))
            .collect();
        for eta in [1u32, 4] {
            let y = apply_channel_awgn(&x, &ch, eta, None, &c, &mut rng).unwrap();
            for k in 0..c.k1 {
                let ramp = Complex64::from_polar(
                    1.0,
                    -TAU * c.delta_f_hz * eta as f64 * k as f64 * p as f64 * c.sample_period_s(),
                );
                assert!((y[k] - x[k] * ramp).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn noise_variance_matches_snr() {
        // Statistical oracle: sample variance of w over 1e5 draws must sit
        // within 2% of 10^(-snr/10).
        let c = SystemConfig::new(120e3, 1024, 512, 128).unwrap();
        let ch = MultipathChannel::new(single_path(Complex64::new(1.0, 0.0), 0.0), &c).unwrap();
        let x = vec![Complex64::new(1.0, 0.0); c.k1];
        let snr_db = 7.0;
        let sigma_sq = 10f64.powf(-snr_db / 10.0);
        let mut rng = Rng::seed_from(99);
        let mut acc = 0.0;
        let mut count = 0usize;
        while count < 100_000 {
            let y = apply_channel_awgn(&x, &ch, 1, Some(snr_db), &c, &mut rng).unwrap();
            for (yy, xx) in y.iter().zip(&x) {
                acc += (yy - xx).norm_sqr();
            }
            count += c.k1;
        }
        let sample_var = acc / count as f64;
        assert!(
            (sample_var - sigma_sq).abs() / sigma_sq < 0.02,
            "sample variance {sample_var} vs {sigma_sq}"
        );
    }

    #[test]
    fn high_snr_converges_to_noiseless() {
        let c = cfg();
        let ch = MultipathChannel::new(
            single_path(Complex64::new(0.7, -0.7), 11.0 * c.sample_period_s()),
            &c,
        )
        .unwrap();
        let x = vec![Complex64::new(1.0, 0.0); c.k1];
        let mut rng = Rng::seed_from(5);
        let clean = apply_channel_awgn(&x, &ch, 1, None, &c, &mut rng).unwrap();
        let mut rng = Rng::seed_from(5);
        let nearly = apply_channel_awgn(&x, &ch, 1, Some(200.0), &c, &mut rng).unwrap();
        for (a, b) in nearly.iter().zip(&clean) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    fn base_spec() -> ScenarioSpec {
        ScenarioSpec {
            l: 3,
            delay_min_s: 0.0,
            delay_spread_max_s: 120.0 * 8.138020833333333e-9,
            on_grid: false,
            min_separation_s: 0.0,
            gain_model: GainModel::default(),
            snr_db: None,
            seed: 0,
        }
    }

    #[test]
    fn single_path_generation_in_window() {
        let c = cfg();
        let spec = ScenarioSpec {
            l: 1,
            ..base_spec()
        };
        let mut rng = Rng::seed_from(7);
        let ch = generate_channel(&spec, &c, &mut rng).unwrap();
        assert_eq!(ch.path_count(), 1);
        let tau = ch.paths()[0].delay_s;
        assert!(tau >= 0.0 && tau <= spec.delay_spread_max_s);
    }

    #[test]
    fn on_grid_delays_are_integer_samples() {
        let c = cfg();
        let spec = ScenarioSpec {
            on_grid: true,
            min_separation_s: 2.0 * c.sample_period_s(),
            ..base_spec()
        };
        let mut rng = Rng::seed_from(21);
        for _ in 0..200 {
            let ch = generate_channel(&spec, &c, &mut rng).unwrap();
            for p in ch.paths() {
                let ratio = p.delay_s / c.sample_period_s();
                assert!((ratio - ratio.round()).abs() < 1e-9, "delay {}", p.delay_s);
            }
        }
    }

    #[test]
    fn min_separation_respected_over_seeds() {
        let c = cfg();
        let spec = ScenarioSpec {
            l: 4,
            min_separation_s: 2.0 * c.sample_period_s(),
            ..base_spec()
        };
        for seed in 0..1000 {
            let mut rng = Rng::seed_from(seed);
            let ch = generate_channel(&spec, &c, &mut rng).unwrap();
            let delays = ch.delays_s();
            for i in 0..delays.len() {
                for j in (i + 1)..delays.len() {
                    assert!(
                        (delays[i] - delays[j]).abs() >= spec.min_separation_s,
                        "seed {seed}: gap violated"
                    );
                }
            }
        }
    }

    #[test]
    fn generated_channels_satisfy_invariants() {
        let c = cfg();
        let spec = ScenarioSpec {
            l: 3,
            on_grid: true,
            min_separation_s: c.sample_period_s(),
            gain_model: GainModel::default(),
            ..base_spec()
        };
        for seed in 0..10_000u64 {
            let mut rng = Rng::seed_from(seed.wrapping_mul(0x9e3779b97f4a7c15));
            let ch = generate_channel(&spec, &c, &mut rng).unwrap();
            assert!(ch.path_count() >= 1);
            for p in ch.paths() {
                assert!(p.delay_s >= 0.0 && p.delay_s < c.cp_duration_s());
                let mag = p.gain.norm();
                assert!((0.5..=1.0 + 1e-12).contains(&mag));
            }
        }
    }

    #[test]
    fn infeasible_separation_rejected() {
        let c = cfg();
        let spec = ScenarioSpec {
            l: 8,
            delay_spread_max_s: 4.0 * c.sample_period_s(),
            min_separation_s: 2.0 * c.sample_period_s(),
            ..base_spec()
        };
        let mut rng = Rng::seed_from(1);
        assert!(generate_channel(&spec, &c, &mut rng).is_err());
    }

    #[test]
    fn delay_beyond_cp_rejected() {
        let c = cfg();
        let too_late = c.cp_duration_s();
        assert!(MultipathChannel::new(single_path(Complex64::new(1.0, 0.0), too_late), &c).is_err());
    }

    #[test]
    fn duplicate_delays_rejected() {
        let c = cfg();
        let tau = 5.0 * c.sample_period_s();
        let paths = vec![
            PathComponent { gain: Complex64::new(1.0, 0.0), delay_s: tau },
            PathComponent { gain: Complex64::new(0.5, 0.0), delay_s: tau },
        ];
        assert!(MultipathChannel::new(paths, &c).is_err());
    }

    #[test]
    fn delay_spread_accessors() {
        let c = cfg();
        let ts = c.sample_period_s();
        let ch = MultipathChannel::new(
            vec![
                PathComponent { gain: Complex64::new(1.0, 0.0), delay_s: 10.0 * ts },
                PathComponent { gain: Complex64::new(1.0, 0.0), delay_s: 25.0 * ts },
            ],
            &c,
        )
        .unwrap();
        assert!((ch.delay_spread_s() - 15.0 * ts).abs() < 1e-18);
        assert_eq!(ch.min_delay_s(), 10.0 * ts);
        assert_eq!(ch.max_delay_s(), 25.0 * ts);
    }
}
