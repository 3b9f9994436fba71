//! One frame through the whole chain: encode, map, optional Alamouti
//! scheduling, fading and noise, optional combining, demapping and decoding.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{self, ChannelRealization, NoiseParams};
use crate::codes::PlotkinCode;
use crate::decoder::{PlotkinDecoder, DEFAULT_MAX_ITER};
use crate::error::{invalid, Result};
use crate::gf2::BitVector;
use crate::modem::{self, DemapMethod, Observation, SignalSet, SymbolFrame};
use crate::stbc::{self, Pairing};

/// Noise variance handed to the demapper when the channel is noiseless.
pub const NOISELESS_DEMAP_VAR: f64 = 1e-9;

/// Amplitude scaling applied per node when Alamouti is on, so a frame costs
/// the same energy whether it occupies `L` or `2L` slots.
pub const ALAMOUTI_AMPLITUDE: f64 = FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    #[default]
    Awgn,
    Rayleigh,
}

/// What is transmitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Plotkin-coded superposition.
    #[default]
    Superposition,
    /// Random uncoded bits on both axes, one bit per source per symbol.
    UncodedQpsk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub mode: Mode,
    pub channel: ChannelKind,
    pub alamouti: bool,
    pub pairing: Pairing,
    /// Variance of the additive CSI error; 0 means perfect CSI.
    pub csi_error_var: f64,
    /// Slots per fading block; `None` means one block per frame transmission.
    pub block_len: Option<usize>,
    pub max_iter: usize,
    pub demap: DemapMethod,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Superposition,
            channel: ChannelKind::Awgn,
            alamouti: false,
            pairing: Pairing::OffsetN,
            csi_error_var: 0.0,
            block_len: None,
            max_iter: DEFAULT_MAX_ITER,
            demap: DemapMethod::Exact,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        if !self.csi_error_var.is_finite() || self.csi_error_var < 0.0 {
            return Err(invalid("CSI error variance must be finite and >= 0"));
        }
        if let Some(b) = self.block_len {
            if b == 0 {
                return Err(invalid("block length must be positive"));
            }
            if self.alamouti && (b < 2 || b % 2 != 0) {
                return Err(invalid("with Alamouti the block length must be even and >= 2"));
            }
        }
        Ok(())
    }

    /// Slots per fading block for a transmission of `slots` slots.
    fn block_len_for(&self, slots: usize) -> usize {
        self.block_len.unwrap_or(slots).min(slots).max(1)
    }
}

/// Error counts of one frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    /// Bit errors in the strongly protected class (`msg2`, or the Q axis uncoded).
    pub errors_high: usize,
    /// Bit errors in the weakly protected class (`msg1`, or the I axis uncoded).
    pub errors_low: usize,
    pub block_error: bool,
    pub iterations: usize,
    pub converged: bool,
}

/// A code with its decoder, ready to push frames through.
#[derive(Debug, Clone)]
pub struct System {
    decoder: PlotkinDecoder,
    set: SignalSet,
}

impl System {
    pub fn new(code: PlotkinCode) -> Result<Self> {
        Ok(Self {
            decoder: PlotkinDecoder::new(code)?,
            set: SignalSet::qpsk_partition(),
        })
    }

    pub fn code(&self) -> &PlotkinCode {
        self.decoder.code()
    }

    pub fn decoder(&self) -> &PlotkinDecoder {
        &self.decoder
    }

    /// Superposed symbols per frame (`2n`).
    pub fn frame_symbols(&self) -> usize {
        2 * self.code().half_len()
    }

    /// `(info bits, symbols)` per frame for `Eb/N₀` accounting under `mode`.
    pub fn bits_and_symbols(&self, mode: Mode) -> (usize, usize) {
        let symbols = self.frame_symbols();
        match mode {
            Mode::Superposition => (self.code().inner().k(), symbols),
            Mode::UncodedQpsk => (2 * symbols, symbols),
        }
    }

    /// `(high, low)` class sizes in bits.
    pub fn class_bits(&self, mode: Mode) -> (usize, usize) {
        match mode {
            Mode::Superposition => (self.code().c2().k(), self.code().c1().k()),
            Mode::UncodedQpsk => (self.frame_symbols(), self.frame_symbols()),
        }
    }

    pub fn simulate_frame<R: Rng + ?Sized>(
        &self,
        cfg: &LinkConfig,
        noise: NoiseParams,
        rng: &mut R,
    ) -> Result<FrameOutcome> {
        match cfg.mode {
            Mode::Superposition => {
                let msg1 = random_bits(rng, self.code().c1().k());
                let msg2 = random_bits(rng, self.code().c2().k());
                self.run_superposition(cfg, noise, &msg2, &msg1, rng)
            }
            Mode::UncodedQpsk => self.run_uncoded(cfg, noise, rng),
        }
    }

    /// Runs the coded chain for a given message pair.
    pub fn run_superposition<R: Rng + ?Sized>(
        &self,
        cfg: &LinkConfig,
        noise: NoiseParams,
        msg2: &BitVector,
        msg1: &BitVector,
        rng: &mut R,
    ) -> Result<FrameOutcome> {
        let (v1, v2) = self.code().encode_parts(msg2, msg1)?;
        let (f1, f2) = self.set.map_sources(&v1, &v2)?;
        let obs = self.propagate(cfg, noise, &f1, &f2, rng)?;
        let llr = modem::demap_observations(&self.set, &obs, cfg.demap)?;
        let decoded = self.decoder.decode(&llr, cfg.max_iter)?;
        let errors_high = count_errors(&decoded.msg2, msg2);
        let errors_low = count_errors(&decoded.msg1, msg1);
        Ok(FrameOutcome {
            errors_high,
            errors_low,
            block_error: errors_high + errors_low > 0,
            iterations: decoded.iterations,
            converged: decoded.converged,
        })
    }

    fn run_uncoded<R: Rng + ?Sized>(
        &self,
        cfg: &LinkConfig,
        noise: NoiseParams,
        rng: &mut R,
    ) -> Result<FrameOutcome> {
        let len = self.frame_symbols();
        let a = random_bits(rng, len);
        let b = random_bits(rng, len);
        let f1 = SymbolFrame::received(a.iter().map(|x| self.set.point1(x)).collect());
        let f2 = SymbolFrame::received(b.iter().map(|x| self.set.point2(x)).collect());
        let obs = self.propagate(cfg, noise, &f1, &f2, rng)?;
        let mut errors_low = 0;
        let mut errors_high = 0;
        for (i, o) in obs.iter().enumerate() {
            let j = modem::demap_second_half(&self.set, o, cfg.demap);
            errors_low += usize::from((j.v1 < 0.0) != a.get(i));
            errors_high += usize::from((j.v2 < 0.0) != b.get(i));
        }
        Ok(FrameOutcome {
            errors_high,
            errors_low,
            block_error: errors_high + errors_low > 0,
            iterations: 0,
            converged: true,
        })
    }

    /// Sends the two source frames over the configured channel and returns one
    /// demapper observation per frame position.
    fn propagate<R: Rng + ?Sized>(
        &self,
        cfg: &LinkConfig,
        noise: NoiseParams,
        f1: &SymbolFrame,
        f2: &SymbolFrame,
        rng: &mut R,
    ) -> Result<Vec<Observation>> {
        let demap_var = if noise.sigma2() > 0.0 {
            noise.sigma2()
        } else {
            NOISELESS_DEMAP_VAR
        };
        let (node1, node2) = if cfg.alamouti {
            let tx = stbc::alamouti_schedule(
                &f1.scaled(ALAMOUTI_AMPLITUDE),
                &f2.scaled(ALAMOUTI_AMPLITUDE),
                cfg.pairing,
            )?;
            (tx.node1_tx, tx.node2_tx)
        } else {
            (f1.clone(), f2.clone())
        };
        let slots = node1.len();
        let block_len = cfg.block_len_for(slots);
        let truth = match cfg.channel {
            ChannelKind::Awgn => ChannelRealization::unit(block_len, slots.div_ceil(block_len))?,
            ChannelKind::Rayleigh => {
                channel::rayleigh_draw(slots.div_ceil(block_len), block_len, rng)?
            }
        };
        let clean = channel::transmit(&node1, &node2, &truth)?;
        let y = channel::awgn(&clean, noise, rng);
        // Drawn last so runs differing only in CSI quality share everything else.
        let csi = channel::estimate_csi(&truth, cfg.csi_error_var, rng)?;

        if cfg.alamouti {
            let combined = stbc::mrc_combine(&y, &csi, cfg.pairing)?;
            Ok(combined
                .s1_tilde
                .iter()
                .zip(&combined.s2_tilde)
                .zip(&combined.effective_gain)
                .map(|((s1, s2), &gain)| {
                    // Source 1 lives on the real axis of s̃₁, source 2 on the
                    // imaginary axis of s̃₂; the other components carry only noise.
                    let g = Complex64::new(gain * ALAMOUTI_AMPLITUDE, 0.0);
                    Observation {
                        y: Complex64::new(s1.re, s2.im),
                        g1: g,
                        g2: g,
                        noise_var: (gain * demap_var).max(NOISELESS_DEMAP_VAR),
                    }
                })
                .collect())
        } else {
            Ok(y.symbols
                .iter()
                .enumerate()
                .map(|(t, &y)| {
                    let g = csi.estimate.gains_at(t);
                    Observation {
                        y,
                        g1: g.h1,
                        g2: g.h2,
                        noise_var: demap_var,
                    }
                })
                .collect())
        }
    }
}

/// Uniform random bits.
pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, len: usize) -> BitVector {
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        if rng.random::<bool>() {
            v.set(i, true);
        }
    }
    v
}

fn count_errors(a: &BitVector, b: &BitVector) -> usize {
    a.xor(b).weight()
}
