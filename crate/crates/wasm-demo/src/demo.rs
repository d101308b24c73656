//! Host-testable demo logic behind the wasm exports.

use serde::Serialize;
use tsde_core::{
    dirichlet_gain, generate_channel, run_tsde, tradeoff_table, DelayEstimate, EstimatorConfig,
    GainModel, MultipathChannel, PathComponent, Rng, ScenarioSpec, SimulatedUplink, StopRule,
    SystemConfig,
};

type DemoResult<T> = Result<T, String>;

fn system(delta_f_hz: f64, k: usize, k1: usize, n_cp: usize) -> DemoResult<SystemConfig> {
    SystemConfig::new(delta_f_hz, k, k1, n_cp).map_err(|e| e.to_string())
}

/// |G(dt; eta)| sampled over one full eta = 1 unambiguous span
/// [0, 1/delta_f), which shows the eta grating lobes in a fixed frame.
pub fn ambiguity_profile(
    delta_f_hz: f64,
    k: usize,
    k1: usize,
    n_cp: usize,
    eta: u32,
    points: usize,
) -> DemoResult<Vec<f64>> {
    let cfg = system(delta_f_hz, k, k1, n_cp)?;
    if points < 2 {
        return Err("need at least 2 sample points".into());
    }
    let span = 1.0 / cfg.delta_f_hz;
    (0..points)
        .map(|i| {
            let dt = span * i as f64 / points as f64;
            dirichlet_gain(dt, eta, &cfg)
                .map(|g| g.norm())
                .map_err(|e| e.to_string())
        })
        .collect()
}

pub fn tradeoff_json(delta_f_hz: f64, k: usize, k1: usize, n_cp: usize) -> DemoResult<String> {
    let cfg = system(delta_f_hz, k, k1, n_cp)?;
    let table = tradeoff_table(&cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&table).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct StageView {
    indices: Vec<usize>,
    delays_samples: Vec<f64>,
    residual_ratio: f64,
    capped: bool,
    /// (delay index, |Gamma|) pairs over the searched indices.
    spectrum: Vec<(usize, f64)>,
}

fn stage_view(est: &DelayEstimate, t_s: f64) -> StageView {
    StageView {
        indices: est.indices.clone(),
        delays_samples: est.delays_s.iter().map(|d| d / t_s).collect(),
        residual_ratio: est.residual_ratio,
        capped: est.capped,
        spectrum: est.spectrum.clone().unwrap_or_default(),
    }
}

#[derive(Serialize)]
struct TwoStageView {
    t_s_ns: f64,
    true_delays_samples: Vec<f64>,
    bins: Vec<usize>,
    bin_width: usize,
    eta_star: u32,
    bin_span: usize,
    omega: Vec<usize>,
    stage2_ran: bool,
    stage1: StageView,
    estimate: StageView,
}

/// Runs the two-stage protocol on a channel with the given path delays (in
/// sample units; fractional values allowed). Gains are drawn from the
/// seeded stream, as is the noise when `snr_db` is given.
#[allow(clippy::too_many_arguments)]
pub fn two_stage_demo_json(
    delta_f_hz: f64,
    k: usize,
    k1: usize,
    n_cp: usize,
    delay_samples: &[f64],
    snr_db: Option<f64>,
    gamma_th: f64,
    seed: u64,
) -> DemoResult<String> {
    let cfg = system(delta_f_hz, k, k1, n_cp)?;
    let t_s = cfg.sample_period_s();

    let mut gain_rng = Rng::from_stream(seed, &[0]);
    let channel = if delay_samples.is_empty() {
        // No delays given: draw a two-path scenario inside the CP.
        let spec = ScenarioSpec {
            l: 2,
            delay_min_s: 0.1 * cfg.cp_duration_s(),
            delay_spread_max_s: 0.3 * cfg.cp_duration_s(),
            on_grid: true,
            min_separation_s: t_s,
            gain_model: GainModel::default(),
            snr_db,
            seed,
        };
        generate_channel(&spec, &cfg, &mut gain_rng).map_err(|e| e.to_string())?
    } else {
        let paths = delay_samples
            .iter()
            .map(|&s| PathComponent {
                gain: complex_gain(&mut gain_rng),
                delay_s: s * t_s,
            })
            .collect();
        MultipathChannel::new(paths, &cfg).map_err(|e| e.to_string())?
    };

    let link_rng = Rng::from_stream(seed, &[1]);
    let mut link = SimulatedUplink::new(&cfg, &channel, snr_db, link_rng);
    let est_cfg = EstimatorConfig {
        gamma_th,
        joint_refit: false,
    };
    let stop = StopRule::threshold(gamma_th).map_err(|e| e.to_string())?;
    let result = run_tsde(&mut link, &cfg, &est_cfg, &stop).map_err(|e| e.to_string())?;

    let view = TwoStageView {
        t_s_ns: t_s * 1e9,
        true_delays_samples: channel.delays_s().iter().map(|d| d / t_s).collect(),
        bins: result.region.bins().to_vec(),
        bin_width: result.region.bin_width(),
        eta_star: result.choice.eta_star,
        bin_span: result.choice.bin_span,
        omega: result.region.omega_indices(cfg.n_cp),
        stage2_ran: result.stage2_ran,
        stage1: stage_view(&result.stage1, t_s),
        estimate: stage_view(&result.estimate, t_s),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

fn complex_gain(rng: &mut Rng) -> tsde_core::Complex64 {
    let magnitude = rng.uniform(0.5, 1.0);
    let phase = rng.uniform(0.0, std::f64::consts::TAU);
    tsde_core::Complex64::from_polar(magnitude, phase)
}
