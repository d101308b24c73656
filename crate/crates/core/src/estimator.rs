//! Matched-filter bank over the delay grid and successive delay estimation.
//!
//! The bank probes every candidate delay p*T_s inside the cyclic prefix
//! with the column `f_p(eta)[k] = e^{-j 2 pi k p eta / K}`. Estimation picks
//! the strongest matched-filter output, subtracts that column's projection
//! from the residual, and repeats until the residual power ratio drops
//! below the threshold (or a known path count is reached).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Bank of n_cp matched filters, one per candidate delay sample.
#[derive(Debug, Clone)]
pub struct MatchedFilterBank {
    eta: u32,
    k1: usize,
    n_cp: usize,
    t_s: f64,
    /// Column-major: columns[p * k1 .. (p+1) * k1] is f_p.
    columns: Vec<Complex64>,
}

impl MatchedFilterBank {
    /// Builds the bank for decimation factor `eta`.
    ///
    /// Each entry's phase index k*p*eta is reduced modulo K in integer
    /// arithmetic before the trig call, so the columns are exact to ulp.
    pub fn build(eta: u32, cfg: &SystemConfig) -> Result<Self> {
        cfg.check_eta(eta)?;
        let k1 = cfg.k1;
        let n_cp = cfg.n_cp;
        let k = cfg.k;
        let mut columns = Vec::with_capacity(n_cp * k1);
        for p in 0..n_cp {
            for idx in 0..k1 {
                let phase_idx = (idx * p * eta as usize) % k;
                let angle = -TAU * phase_idx as f64 / k as f64;
                columns.push(Complex64::new(angle.cos(), angle.sin()));
            }
        }
        Ok(MatchedFilterBank {
            eta,
            k1,
            n_cp,
            t_s: cfg.sample_period_s(),
            columns,
        })
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    /// Number of filters, i.e. the delay-grid extent n_cp.
    pub fn len(&self) -> usize {
        self.n_cp
    }

    pub fn is_empty(&self) -> bool {
        self.n_cp == 0
    }

    /// Probed delay for column p, tau_p = p * T_s.
    pub fn delay_s(&self, p: usize) -> f64 {
        p as f64 * self.t_s
    }

    pub fn column(&self, p: usize) -> &[Complex64] {
        &self.columns[p * self.k1..(p + 1) * self.k1]
    }

    /// f_p^H v.
    pub fn correlate(&self, p: usize, v: &[Complex64]) -> Complex64 {
        self.column(p)
            .iter()
            .zip(v)
            .map(|(f, x)| f.conj() * x)
            .sum()
    }
}

/// All banks for a configuration, indexed by decimation factor.
///
/// Bank construction is trig-heavy; Monte Carlo loops build the set once
/// per configuration and share it across trials.
#[derive(Debug, Clone)]
pub struct BankSet {
    banks: Vec<MatchedFilterBank>,
}

impl BankSet {
    pub fn build_all(cfg: &SystemConfig) -> Result<Self> {
        let banks = (1..=cfg.eta_max())
            .map(|eta| MatchedFilterBank::build(eta, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(BankSet { banks })
    }

    pub fn bank(&self, eta: u32) -> Result<&MatchedFilterBank> {
        self.banks
            .get(eta as usize - 1)
            .filter(|b| b.eta() == eta)
            .ok_or(Error::EtaOutOfRange {
                eta,
                eta_max: self.banks.len() as u32,
            })
    }
}

/// Loop-termination rule for the successive estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopRule {
    /// Stop once the residual power ratio falls to `gamma_th` or below.
    Threshold { gamma_th: f64 },
    /// Stop after exactly `count` selections (path count known a priori).
    FixedCount { count: usize },
}

impl StopRule {
    pub fn threshold(gamma_th: f64) -> Result<Self> {
        if !(gamma_th > 0.0 && gamma_th < 1.0) {
            return Err(Error::InvalidStopRule(format!(
                "gamma_th must lie in (0, 1), got {gamma_th}"
            )));
        }
        Ok(StopRule::Threshold { gamma_th })
    }

    pub fn fixed_count(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidStopRule("count must be >= 1".into()));
        }
        Ok(StopRule::FixedCount { count })
    }
}

/// Output of the successive estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayEstimate {
    /// Selected delay indices, in selection order.
    pub indices: Vec<usize>,
    /// Estimated delays tau_hat = p * T_s, matching `indices`.
    pub delays_s: Vec<f64>,
    /// Final residual power ratio gamma.
    pub residual_ratio: f64,
    /// Set when the iteration cap was reached before the stop rule was
    /// satisfied; downstream consumers treat such runs as failed detections.
    pub capped: bool,
    /// First-pass |Gamma(tau_p)| trace over the searched indices, for
    /// diagnostics and plotting.
    pub spectrum: Option<Vec<(usize, f64)>>,
}

impl DelayEstimate {
    /// Estimated path count L-hat.
    pub fn l_hat(&self) -> usize {
        self.indices.len()
    }

    /// Indices sorted ascending (the estimate as a set).
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut out = self.indices.clone();
        out.sort_unstable();
        out
    }
}

/// Matched-filter spectrum Gamma(tau_p; eta) = f_p^H r / ||f_p||^2 over the
/// given region (the whole bank domain when `region` is `None`).
pub fn mf_spectrum(
    r: &[Complex64],
    bank: &MatchedFilterBank,
    region: Option<&[usize]>,
) -> Result<Vec<(usize, Complex64)>> {
    check_snapshot(r, bank)?;
    let indices = resolve_region(region, bank)?;
    let norm = bank.k1 as f64;
    Ok(indices
        .iter()
        .map(|&p| (p, bank.correlate(p, r) / norm))
        .collect())
}

/// Successive delay estimation over the bank.
///
/// Per iteration: select the in-region index maximizing |f_p^H r| (lowest
/// index wins ties, and previously selected indices are excluded), subtract
/// the selected column's projection from the residual, and update
/// gamma = ||r||^2 / phi. The loop ends when the stop rule is met or when
/// min(k1, region size) selections have been made; hitting that cap without
/// satisfying a threshold rule sets the `capped` flag rather than erroring.
///
/// `joint_refit` replaces the single-column deflation with a least-squares
/// re-fit over all selected columns after each pick.
pub fn successive_estimate(
    r: &[Complex64],
    bank: &MatchedFilterBank,
    stop: &StopRule,
    region: Option<&[usize]>,
    joint_refit: bool,
) -> Result<DelayEstimate> {
    check_snapshot(r, bank)?;
    let indices = resolve_region(region, bank)?;
    let phi: f64 = r.iter().map(|x| x.norm_sqr()).sum();
    if phi == 0.0 {
        return Err(Error::ZeroInput);
    }
    if let StopRule::Threshold { gamma_th } = stop {
        if !(*gamma_th > 0.0 && *gamma_th < 1.0) {
            return Err(Error::InvalidStopRule(format!(
                "gamma_th must lie in (0, 1), got {gamma_th}"
            )));
        }
    }

    let cap = bank.k1.min(indices.len());
    let norm = bank.k1 as f64;
    let mut residual = r.to_vec();
    let mut taken = vec![false; bank.len()];
    let mut selected: Vec<usize> = Vec::new();
    let mut gamma = 1.0f64;
    let mut trace: Option<Vec<(usize, f64)>> = None;
    let mut capped = false;

    loop {
        // Line 5: argmax over the region, skipping already-selected indices.
        let mut best: Option<(usize, Complex64, f64)> = None;
        let mut pass: Vec<(usize, f64)> = Vec::new();
        let record_trace = trace.is_none();
        for &p in &indices {
            if taken[p] {
                continue;
            }
            let corr = bank.correlate(p, &residual);
            let mag = corr.norm();
            if record_trace {
                pass.push((p, mag / norm));
            }
            if best.is_none_or(|(_, _, best_mag)| mag > best_mag) {
                best = Some((p, corr, mag));
            }
        }
        if record_trace {
            trace = Some(pass);
        }
        let Some((p_sel, corr, _)) = best else {
            // Region exhausted before the stop rule was met.
            capped = true;
            break;
        };

        // Line 6: record the selection.
        taken[p_sel] = true;
        selected.push(p_sel);

        // Line 7: deflate by the selected column's projection.
        let coeff = corr / norm;
        for (res, f) in residual.iter_mut().zip(bank.column(p_sel)) {
            *res -= f * coeff;
        }
        if joint_refit && selected.len() > 1 {
            residual = refit_residual(r, bank, &selected);
        }

        // Line 8: residual power ratio.
        gamma = (residual.iter().map(|x| x.norm_sqr()).sum::<f64>() / phi).clamp(0.0, 1.0);

        match stop {
            StopRule::Threshold { gamma_th } => {
                if gamma <= *gamma_th {
                    break;
                }
            }
            StopRule::FixedCount { count } => {
                if selected.len() >= *count {
                    break;
                }
            }
        }
        if selected.len() >= cap {
            capped = true;
            break;
        }
    }

    let delays_s = selected.iter().map(|&p| bank.delay_s(p)).collect();
    Ok(DelayEstimate {
        indices: selected,
        delays_s,
        residual_ratio: gamma,
        capped,
        spectrum: trace,
    })
}

fn check_snapshot(r: &[Complex64], bank: &MatchedFilterBank) -> Result<()> {
    if r.len() != bank.k1 {
        return Err(Error::LengthMismatch {
            expected: bank.k1,
            actual: r.len(),
        });
    }
    Ok(())
}

fn resolve_region(region: Option<&[usize]>, bank: &MatchedFilterBank) -> Result<Vec<usize>> {
    match region {
        None => Ok((0..bank.len()).collect()),
        Some(indices) => {
            if indices.is_empty() {
                return Err(Error::EmptyRegion);
            }
            for &p in indices {
                if p >= bank.len() {
                    return Err(Error::RegionOutOfDomain {
                        index: p,
                        n_cp: bank.len(),
                    });
                }
            }
            Ok(indices.to_vec())
        }
    }
}

/// Residual of the least-squares fit of `r` on the selected columns:
/// r - F_S (F_S^H F_S)^{-1} F_S^H r.
fn refit_residual(r: &[Complex64], bank: &MatchedFilterBank, selected: &[usize]) -> Vec<Complex64> {
    let m = selected.len();
    let mut gram = vec![Complex64::new(0.0, 0.0); m * m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for (i, &pi) in selected.iter().enumerate() {
        rhs[i] = bank.correlate(pi, r);
        for (j, &pj) in selected.iter().enumerate() {
            gram[i * m + j] = bank
                .column(pi)
                .iter()
                .zip(bank.column(pj))
                .map(|(a, b)| a.conj() * b)
                .sum();
        }
    }
    let coeffs = solve_dense(&mut gram, &mut rhs, m);
    let mut residual = r.to_vec();
    for (coeff, &p) in coeffs.iter().zip(selected) {
        for (res, f) in residual.iter_mut().zip(bank.column(p)) {
            *res -= f * coeff;
        }
    }
    residual
}

/// Gaussian elimination with partial pivoting on an m-by-m complex system.
/// Near-singular pivots are nudged; the caller only uses the result through
/// the residual, where a rank-deficient fit degrades gracefully.
fn solve_dense(a: &mut [Complex64], b: &mut [Complex64], m: usize) -> Vec<Complex64> {
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r1, &r2| {
                a[r1 * m + col]
                    .norm_sqr()
                    .partial_cmp(&a[r2 * m + col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if pivot_row != col {
            for j in 0..m {
                a.swap(col * m + j, pivot_row * m + j);
            }
            b.swap(col, pivot_row);
        }
        let mut pivot = a[col * m + col];
        if pivot.norm_sqr() < 1e-300 {
            pivot = Complex64::new(1e-150, 0.0);
            a[col * m + col] = pivot;
        }
        for row in (col + 1)..m {
            let factor = a[row * m + col] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..m {
                let v = a[col * m + j];
                a[row * m + j] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for col in (0..m).rev() {
        let mut acc = b[col];
        for j in (col + 1)..m {
            acc -= a[col * m + j] * x[j];
        }
        x[col] = acc / a[col * m + col];
    }
    x
}
