//! DFT-s-OFDM transmit chain and receiver front end.
//!
//! Transmit: spread the k1 information symbols with a k1-point DFT, map
//! them onto every eta-th subcarrier of the k-point grid, convert to time
//! domain with a k-point IDFT, prepend the cyclic prefix. Receive: strip
//! the CP, k-point DFT, demap the used subcarriers, divide out the known
//! symbols to leave the pure channel snapshot.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::dsp::{dft, idft};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Subcarrier allocation: indices {eta * k1_idx} for k1_idx = 0..k1-1.
///
/// eta = 1 is the localized (collocated) mapping, eta > 1 the distributed
/// mapping with evenly decimated subcarriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubcarrierMap {
    eta: u32,
    k1: usize,
}

impl SubcarrierMap {
    pub fn new(eta: u32, cfg: &SystemConfig) -> Result<Self> {
        cfg.check_eta(eta)?;
        let top = eta as usize * (cfg.k1 - 1);
        if top >= cfg.k {
            return Err(Error::MapOverflow {
                eta,
                index: top,
                k: cfg.k,
            });
        }
        Ok(SubcarrierMap { eta, k1: cfg.k1 })
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn is_localized(&self) -> bool {
        self.eta == 1
    }

    /// Mapped subcarrier indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k1).map(move |i| self.eta as usize * i)
    }
}

/// A block of k1 information-bearing symbols, nominally unit average power.
///
/// Every entry must be nonzero so the snapshot division is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock(Vec<Complex64>);

impl SymbolBlock {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                actual: 0,
            });
        }
        if let Some(idx) = values.iter().position(|x| x.norm_sqr() == 0.0) {
            return Err(Error::ZeroDivisor(idx));
        }
        Ok(SymbolBlock(values))
    }

    /// Random QPSK block (unit modulus, never zero).
    pub fn random_qpsk(k1: usize, rng: &mut Rng) -> Self {
        use std::f64::consts::FRAC_1_SQRT_2 as R;
        let points = [
            Complex64::new(R, R),
            Complex64::new(-R, R),
            Complex64::new(-R, -R),
            Complex64::new(R, -R),
        ];
        SymbolBlock((0..k1).map(|_| points[rng.below(4) as usize]).collect())
    }

    /// Zadoff-Chu block of the given root (coprime with `k1`).
    ///
    /// Constant amplitude with an exactly flat spread spectrum
    /// (`|X[k]| = sqrt(k1)` for every k), so the snapshot division neither
    /// amplifies nor colors the receiver noise. The usual pilot choice for
    /// sensing transmissions.
    pub fn zadoff_chu(k1: usize, root: u32) -> Self {
        use std::f64::consts::PI;
        let n_f = k1 as f64;
        let values = (0..k1)
            .map(|n| {
                let quad = if k1.is_multiple_of(2) {
                    (n * n) as f64
                } else {
                    (n * (n + 1)) as f64
                };
                Complex64::from_polar(1.0, -PI * root as f64 * quad / n_f)
            })
            .collect();
        SymbolBlock(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }
}

/// DFT spreading: the k1-point forward transform of the symbol block.
pub fn spread(block: &SymbolBlock, cfg: &SystemConfig) -> Result<Vec<Complex64>> {
    if block.len() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: block.len(),
        });
    }
    dft(block.values(), cfg.k1)
}

/// Maps the k1 spread symbols onto the k-point grid at indices eta * k1_idx,
/// zero elsewhere.
pub fn map_subcarriers(
    spread_symbols: &[Complex64],
    map: &SubcarrierMap,
    cfg: &SystemConfig,
) -> Result<Vec<Complex64>> {
    if spread_symbols.len() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: spread_symbols.len(),
        });
    }
    if map.k1() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: map.k1(),
        });
    }
    let mut grid = vec![Complex64::new(0.0, 0.0); cfg.k];
    for (i, &value) in spread_symbols.iter().enumerate() {
        grid[map.eta() as usize * i] = value;
    }
    Ok(grid)
}

/// k-point IDFT followed by cyclic-prefix insertion: the emitted samples are
/// x[(n - n_cp) mod k] for n = 0..k+n_cp-1.
pub fn to_time_with_cp(grid: &[Complex64], cfg: &SystemConfig) -> Result<Vec<Complex64>> {
    if grid.len() != cfg.k {
        return Err(Error::LengthMismatch {
            expected: cfg.k,
            actual: grid.len(),
        });
    }
    let body = idft(grid, cfg.k)?;
    let mut out = Vec::with_capacity(cfg.k + cfg.n_cp);
    out.extend_from_slice(&body[cfg.k - cfg.n_cp..]);
    out.extend_from_slice(&body);
    Ok(out)
}

/// CP removal plus k-point DFT: recovers the frequency-domain grid from the
/// received time-domain samples.
pub fn strip_cp_dft(rx_time: &[Complex64], cfg: &SystemConfig) -> Result<Vec<Complex64>> {
    if rx_time.len() != cfg.k + cfg.n_cp {
        return Err(Error::LengthMismatch {
            expected: cfg.k + cfg.n_cp,
            actual: rx_time.len(),
        });
    }
    dft(&rx_time[cfg.n_cp..], cfg.k)
}

/// Subcarrier demapping: selects the used subcarriers from the length-k
/// frequency-domain vector, yielding `Y[k1_idx] = Y_grid[eta * k1_idx]`.
pub fn rx_front_end(
    y_freq: &[Complex64],
    map: &SubcarrierMap,
    cfg: &SystemConfig,
) -> Result<Vec<Complex64>> {
    if y_freq.len() != cfg.k {
        return Err(Error::LengthMismatch {
            expected: cfg.k,
            actual: y_freq.len(),
        });
    }
    if map.k1() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: map.k1(),
        });
    }
    Ok(map.indices().map(|idx| y_freq[idx]).collect())
}

/// Element-wise division `Y[k]/X[k]`: removes the known symbols and leaves the
/// multipath phase superposition used for sensing.
pub fn sensing_snapshot(y_used: &[Complex64], x_used: &[Complex64]) -> Result<Vec<Complex64>> {
    if y_used.len() != x_used.len() {
        return Err(Error::LengthMismatch {
            expected: x_used.len(),
            actual: y_used.len(),
        });
    }
    if let Some(idx) = x_used.iter().position(|x| x.norm_sqr() == 0.0) {
        return Err(Error::ZeroDivisor(idx));
    }
    Ok(y_used.iter().zip(x_used).map(|(y, x)| y / x).collect())
}

/// Zero-forcing equalization on the used subcarriers followed by the
/// k1-point IDFT, recovering the information symbols. Loopback correctness
/// check for the communication side; sensing does not use it.
pub fn equalize_despread(
    y_used: &[Complex64],
    h_used: &[Complex64],
    cfg: &SystemConfig,
) -> Result<SymbolBlock> {
    if y_used.len() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: y_used.len(),
        });
    }
    if h_used.len() != cfg.k1 {
        return Err(Error::LengthMismatch {
            expected: cfg.k1,
            actual: h_used.len(),
        });
    }
    if let Some(idx) = h_used.iter().position(|h| h.norm_sqr() == 0.0) {
        return Err(Error::ZeroChannelCoefficient(idx));
    }
    let equalized: Vec<Complex64> = y_used.iter().zip(h_used).map(|(y, h)| y / h).collect();
    let symbols = idft(&equalized, cfg.k1)?;
    SymbolBlock::new(symbols)
}
