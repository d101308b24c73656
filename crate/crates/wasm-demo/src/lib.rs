//! Browser demo bindings: three interactive views over the sensing core.
//!
//! - the matched-filter ambiguity profile |G(dt; eta)|, showing the main
//!   lobe sharpen and grating lobes appear as eta grows;
//! - the resolution/unambiguous-range trade-off table;
//! - a full two-stage estimation run on a user-defined channel, with both
//!   stage spectra, the search region, and the recovered delays.
//!
//! The logic lives in [`demo`]; the `#[wasm_bindgen]` exports are thin
//! wrappers so the same code paths are testable on the host.

use wasm_bindgen::prelude::*;

pub mod demo;

#[wasm_bindgen]
pub fn ambiguity_profile(
    delta_f_hz: f64,
    k: u32,
    k1: u32,
    n_cp: u32,
    eta: u32,
    points: u32,
) -> Result<Vec<f64>, JsError> {
    demo::ambiguity_profile(delta_f_hz, k as usize, k1 as usize, n_cp as usize, eta, points as usize)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tradeoff_json(delta_f_hz: f64, k: u32, k1: u32, n_cp: u32) -> Result<String, JsError> {
    demo::tradeoff_json(delta_f_hz, k as usize, k1 as usize, n_cp as usize)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn two_stage_demo_json(
    delta_f_hz: f64,
    k: u32,
    k1: u32,
    n_cp: u32,
    delay_samples: Vec<f64>,
    snr_db: Option<f64>,
    gamma_th: f64,
    seed: u64,
) -> Result<String, JsError> {
    demo::two_stage_demo_json(
        delta_f_hz,
        k as usize,
        k1 as usize,
        n_cp as usize,
        &delay_samples,
        snr_db,
        gamma_th,
        seed,
    )
    .map_err(|e| JsError::new(&e))
}
