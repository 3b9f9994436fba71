//! AWGN and block-Rayleigh flat fading for the two source-to-destination
//! links, plus an additive-Gaussian model of channel-estimation error.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::modem::{ComplexSymbol, SymbolFrame};

/// Additive white Gaussian noise; `sigma2` is `N₀/2`, the variance per real
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    sigma2: f64,
}

impl NoiseParams {
    pub fn new(sigma2: f64) -> Result<Self> {
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(invalid(format!("noise variance must be finite and >= 0, got {sigma2}")));
        }
        Ok(Self { sigma2 })
    }

    pub fn noiseless() -> Self {
        Self { sigma2: 0.0 }
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Noise level for a given `Eb/N₀` in dB when `info_bits` information bits
    /// ride on `symbols` channel symbols of unit average energy.
    ///
    /// `Eb = symbols / info_bits`, `σ² = N₀/2 = Eb / (2·10^(Eb/N₀ / 10))`.
    /// An infinite `Eb/N₀` gives the noiseless channel.
    pub fn from_ebn0_db(ebn0_db: f64, info_bits: usize, symbols: usize) -> Result<Self> {
        if info_bits == 0 || symbols == 0 {
            return Err(invalid("bit and symbol counts must be positive"));
        }
        if ebn0_db.is_nan() {
            return Err(invalid("Eb/N0 is NaN"));
        }
        if ebn0_db == f64::INFINITY {
            return Ok(Self::noiseless());
        }
        let eb = symbols as f64 / info_bits as f64;
        let ebn0 = libm::pow(10.0, ebn0_db / 10.0);
        Self::new(eb / (2.0 * ebn0))
    }
}

fn gaussian_per_dim<R: Rng + ?Sized>(rng: &mut R, var_per_dim: f64) -> Complex64 {
    let sd = libm::sqrt(var_per_dim);
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(sd * re, sd * im)
}

/// Circularly-symmetric complex Gaussian with `E|z|² = var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    gaussian_per_dim(rng, var / 2.0)
}

/// Adds i.i.d. Gaussian noise of variance `σ²` to each real dimension.
pub fn awgn<R: Rng + ?Sized>(x: &SymbolFrame, noise: NoiseParams, rng: &mut R) -> SymbolFrame {
    if noise.sigma2 == 0.0 {
        return x.clone();
    }
    let symbols = x
        .symbols
        .iter()
        .map(|&s| s + gaussian_per_dim(rng, noise.sigma2))
        .collect();
    SymbolFrame::new(symbols, x.source)
}

/// Gains of the two source links during one fading block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingGains {
    pub h1: ComplexSymbol,
    pub h2: ComplexSymbol,
}

impl FadingGains {
    pub const UNIT: FadingGains = FadingGains {
        h1: Complex64::new(1.0, 0.0),
        h2: Complex64::new(1.0, 0.0),
    };
}

/// Piecewise-constant gains: slot `t` sees `blocks[t / block_len]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    block_len: usize,
    blocks: Vec<FadingGains>,
}

impl ChannelRealization {
    pub fn new(block_len: usize, blocks: Vec<FadingGains>) -> Result<Self> {
        if block_len == 0 || blocks.is_empty() {
            return Err(invalid("realization needs a positive block length and at least one block"));
        }
        Ok(Self { block_len, blocks })
    }

    /// Unit gains on both links, i.e. the plain AWGN channel.
    pub fn unit(block_len: usize, n_blocks: usize) -> Result<Self> {
        Self::new(block_len, alloc::vec![FadingGains::UNIT; n_blocks])
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn blocks(&self) -> &[FadingGains] {
        &self.blocks
    }

    /// Number of slots covered.
    pub fn span(&self) -> usize {
        self.block_len * self.blocks.len()
    }

    pub fn block_of(&self, slot: usize) -> usize {
        slot / self.block_len
    }

    pub fn gains_at(&self, slot: usize) -> FadingGains {
        self.blocks[self.block_of(slot)]
    }
}

/// Draws `n_blocks` independent blocks of i.i.d. `CN(0, 1)` gains per link.
pub fn rayleigh_draw<R: Rng + ?Sized>(
    n_blocks: usize,
    block_len: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if n_blocks == 0 {
        return Err(invalid("need at least one fading block"));
    }
    let blocks = (0..n_blocks)
        .map(|_| FadingGains {
            h1: complex_gaussian(rng, 1.0),
            h2: complex_gaussian(rng, 1.0),
        })
        .collect();
    ChannelRealization::new(block_len, blocks)
}

/// Receiver-side gain estimates with the same block layout as the truth.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiEstimate {
    pub estimate: ChannelRealization,
    pub error_var: f64,
}

impl CsiEstimate {
    /// Exact knowledge of the channel.
    pub fn perfect(truth: &ChannelRealization) -> Self {
        Self {
            estimate: truth.clone(),
            error_var: 0.0,
        }
    }
}

/// `ĥ = h + e` with `e ~ CN(0, error_var)` independently per gain.
pub fn estimate_csi<R: Rng + ?Sized>(
    truth: &ChannelRealization,
    error_var: f64,
    rng: &mut R,
) -> Result<CsiEstimate> {
    if !error_var.is_finite() || error_var < 0.0 {
        return Err(invalid(format!("CSI error variance must be >= 0, got {error_var}")));
    }
    if error_var == 0.0 {
        return Ok(CsiEstimate::perfect(truth));
    }
    let blocks = truth
        .blocks
        .iter()
        .map(|g| FadingGains {
            h1: g.h1 + complex_gaussian(rng, error_var),
            h2: g.h2 + complex_gaussian(rng, error_var),
        })
        .collect();
    Ok(CsiEstimate {
        estimate: ChannelRealization::new(truth.block_len, blocks)?,
        error_var,
    })
}

/// Noise-free received signal `h₁(t)·x₁[t] + h₂(t)·x₂[t]` for two node transmissions.
pub fn transmit(
    node1: &SymbolFrame,
    node2: &SymbolFrame,
    channel: &ChannelRealization,
) -> Result<SymbolFrame> {
    if node1.len() != node2.len() {
        return Err(invalid("node transmissions differ in length"));
    }
    if node1.len() > channel.span() {
        return Err(invalid(format!(
            "transmission of {} slots exceeds channel span {}",
            node1.len(),
            channel.span()
        )));
    }
    Ok(SymbolFrame::received(
        node1
            .symbols
            .iter()
            .zip(&node2.symbols)
            .enumerate()
            .map(|(t, (a, b))| {
                let g = channel.gains_at(t);
                g.h1 * a + g.h2 * b
            })
            .collect(),
    ))
}
