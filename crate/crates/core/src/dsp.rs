//! Transforms and the closed-form delay-domain kernel.
//!
//! The forward DFT is unnormalized and the inverse carries the 1/n factor,
//! matching the transmit/receive chain conventions used everywhere else in
//! the crate. `dirichlet_gain` is the analytic matched-filter response of a
//! single path; `delay_resolution` and `unambiguous_range` are its main-lobe
//! half width and grating-lobe spacing.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Unnormalized forward DFT: `X[k] = sum_n x[n] e^{-j 2 pi n k / n_len}`.
///
/// `n` is the expected length of `v`; a mismatch is an error. Power-of-two
/// lengths take an O(n log n) path, the rest fall back to the direct sum.
pub fn dft(v: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    Ok(transform(v, Direction::Forward))
}

/// Inverse DFT with 1/n normalization: `x[n] = (1/n_len) sum_k X[k] e^{+j 2 pi k n / n_len}`.
pub fn idft(v: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    let mut out = transform(v, Direction::Inverse);
    let scale = 1.0 / n as f64;
    for x in &mut out {
        *x *= scale;
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

fn transform(v: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = v.len();
    if n <= 1 {
        return v.to_vec();
    }
    if n.is_power_of_two() {
        let mut buf = v.to_vec();
        fft_radix2(&mut buf, dir);
        buf
    } else {
        direct_dft(v, dir)
    }
}

fn direct_dft(v: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = v.len();
    let sign = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let base = sign * 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &x) in v.iter().enumerate() {
                let angle = base * (k as f64) * (idx as f64);
                acc += x * Complex64::new(angle.cos(), angle.sin());
            }
            acc
        })
        .collect()
}

/// In-place iterative radix-2 Cooley-Tukey.
fn fft_radix2(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    let levels = n.trailing_zeros();

    // Bit-reversal permutation.
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - levels);
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let mut len = 2;
    while len <= n {
        let angle_step = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for offset in 0..half {
                let angle = angle_step * offset as f64;
                let w = Complex64::new(angle.cos(), angle.sin());
                let a = buf[start + offset];
                let b = buf[start + offset + half] * w;
                buf[start + offset] = a + b;
                buf[start + offset + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Matched-filter gain of a path offset `delta_tau` seconds from the probed
/// delay, under decimation factor `eta`:
///
/// G(dt; eta) = e^{-j pi (k1-1) x} * sin(pi k1 x) / (k1 sin(pi x)),
/// with x = delta_f * eta * dt.
///
/// The kernel has period 1 in x, so x is reduced modulo 1 before
/// evaluation; at the removable singularities (x integral, both sines
/// vanishing) the analytic limit is exactly 1, which is where the
/// unit-magnitude grating lobes come from.
pub fn dirichlet_gain(delta_tau_s: f64, eta: u32, cfg: &SystemConfig) -> Result<Complex64> {
    cfg.check_eta(eta)?;
    let k1 = cfg.k1 as f64;
    let x = cfg.delta_f_hz * eta as f64 * delta_tau_s;
    let frac = x - x.round();
    if frac == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ratio = (PI * k1 * frac).sin() / (k1 * (PI * frac).sin());
    let phase = -PI * (k1 - 1.0) * frac;
    Ok(Complex64::new(phase.cos(), phase.sin()) * ratio)
}

/// Delay resolution tau_res(eta) = 1 / (delta_f * k1 * eta), the half
/// main-lobe width of |G|.
pub fn delay_resolution(eta: u32, cfg: &SystemConfig) -> Result<f64> {
    cfg.check_eta(eta)?;
    Ok(1.0 / (cfg.delta_f_hz * cfg.k1 as f64 * eta as f64))
}

/// Unambiguous delay range tau_u(eta) = 1 / (delta_f * eta), the spacing
/// between grating lobes of |G|.
pub fn unambiguous_range(eta: u32, cfg: &SystemConfig) -> Result<f64> {
    cfg.check_eta(eta)?;
    Ok(1.0 / (cfg.delta_f_hz * eta as f64))
}

/// One line of the resolution/range trade-off table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TradeoffRow {
    pub eta: u32,
    pub tau_res_s: f64,
    pub tau_u_s: f64,
}

/// The full trade-off table over eta = 1..=eta_max: how the delay
/// resolution sharpens and the unambiguous range shrinks as the allocated
/// subcarriers spread out.
pub fn tradeoff_table(cfg: &SystemConfig) -> Result<Vec<TradeoffRow>> {
    (1..=cfg.eta_max())
        .map(|eta| {
            Ok(TradeoffRow {
                eta,
                tau_res_s: delay_resolution(eta, cfg)?,
                tau_u_s: unambiguous_range(eta, cfg)?,
            })
        })
        .collect()
}
