//! Alamouti transmit diversity with the two source nodes acting as the two
//! transmit antennas, and the matching combiner at a single receive antenna.
//!
//! Pair `i` carries the simultaneous symbols `(s₁, s₂) = (f₁[i], f₂[i])`.
//! In its first slot node 1 sends `s₁` and node 2 sends `s₂`; in its second
//! slot node 1 sends `−s₂*` and node 2 sends `s₁*`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::CsiEstimate;
use crate::error::{invalid, Result};
use crate::modem::{ComplexSymbol, SourceId, SymbolFrame};

/// Where the second slot of each pair is placed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// Slots `2i` and `2i + 1`.
    Adjacent,
    /// Slots `i` and `i + L` for a frame of `L` symbols: the conjugated copy
    /// of the frame follows the whole frame.
    #[default]
    OffsetN,
}

impl Pairing {
    /// The two slot indices of pair `i` in a schedule of `pairs` pairs.
    #[inline]
    pub fn slots(self, i: usize, pairs: usize) -> (usize, usize) {
        match self {
            Pairing::Adjacent => (2 * i, 2 * i + 1),
            Pairing::OffsetN => (i, i + pairs),
        }
    }
}

/// Transmit sequences of both nodes, each `2 · pairs` slots long.
#[derive(Debug, Clone, PartialEq)]
pub struct AlamoutiFrame {
    pub node1_tx: SymbolFrame,
    pub node2_tx: SymbolFrame,
    pub pairing: Pairing,
}

impl AlamoutiFrame {
    pub fn pairs(&self) -> usize {
        self.node1_tx.len() / 2
    }
}

pub fn alamouti_schedule(f1: &SymbolFrame, f2: &SymbolFrame, pairing: Pairing) -> Result<AlamoutiFrame> {
    if f1.len() != f2.len() || f1.is_empty() {
        return Err(invalid("Alamouti pairing needs two nonempty frames of equal length"));
    }
    let pairs = f1.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut n1 = alloc::vec![zero; 2 * pairs];
    let mut n2 = alloc::vec![zero; 2 * pairs];
    for (i, (&s1, &s2)) in f1.symbols.iter().zip(&f2.symbols).enumerate() {
        let (a, b) = pairing.slots(i, pairs);
        n1[a] = s1;
        n2[a] = s2;
        n1[b] = -s2.conj();
        n2[b] = s1.conj();
    }
    Ok(AlamoutiFrame {
        node1_tx: SymbolFrame::new(n1, Some(SourceId::One)),
        node2_tx: SymbolFrame::new(n2, Some(SourceId::Two)),
        pairing,
    })
}

/// Inverse of [`alamouti_schedule`]: reads `(f₁, f₂)` from the first slots.
pub fn deschedule(frame: &AlamoutiFrame) -> Result<(SymbolFrame, SymbolFrame)> {
    let total = frame.node1_tx.len();
    if total != frame.node2_tx.len() || total == 0 || !total.is_multiple_of(2) {
        return Err(invalid("malformed Alamouti frame"));
    }
    let pairs = total / 2;
    let (f1, f2) = (0..pairs)
        .map(|i| {
            let (a, _) = frame.pairing.slots(i, pairs);
            (frame.node1_tx.symbols[a], frame.node2_tx.symbols[a])
        })
        .unzip();
    Ok((
        SymbolFrame::new(f1, Some(SourceId::One)),
        SymbolFrame::new(f2, Some(SourceId::Two)),
    ))
}

/// Combiner output per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedFrame {
    pub s1_tilde: Vec<ComplexSymbol>,
    pub s2_tilde: Vec<ComplexSymbol>,
    /// `|ĥ₁|² + |ĥ₂|²` per pair.
    pub effective_gain: Vec<f64>,
}

/// Per pair with received `(y_a, y_b)`:
/// `s̃₁ = ĥ₁*·y_a + ĥ₂·y_b*`, `s̃₂ = ĥ₂*·y_a − ĥ₁·y_b*`.
///
/// With exact CSI and no noise, `s̃ᵢ = (|h₁|² + |h₂|²)·sᵢ`; the noise on each
/// output has variance `(|ĥ₁|² + |ĥ₂|²)·σ²` per real dimension.
pub fn mrc_combine(y: &SymbolFrame, csi: &CsiEstimate, pairing: Pairing) -> Result<CombinedFrame> {
    if y.is_empty() || !y.len().is_multiple_of(2) {
        return Err(invalid("received Alamouti frame must have an even, nonzero length"));
    }
    let est = &csi.estimate;
    if y.len() > est.span() {
        return Err(invalid("received frame extends past the channel estimate"));
    }
    let pairs = y.len() / 2;
    let mut out = CombinedFrame {
        s1_tilde: Vec::with_capacity(pairs),
        s2_tilde: Vec::with_capacity(pairs),
        effective_gain: Vec::with_capacity(pairs),
    };
    for i in 0..pairs {
        let (a, b) = pairing.slots(i, pairs);
        if est.block_of(a) != est.block_of(b) {
            return Err(invalid(alloc::format!(
                "pair {i} spans fading blocks (slots {a} and {b}, block length {})",
                est.block_len()
            )));
        }
        let g = est.gains_at(a);
        let (ya, yb) = (y.symbols[a], y.symbols[b]);
        out.s1_tilde.push(g.h1.conj() * ya + g.h2 * yb.conj());
        out.s2_tilde.push(g.h2.conj() * ya - g.h1 * yb.conj());
        out.effective_gain.push(g.h1.norm_sqr() + g.h2.norm_sqr());
    }
    Ok(out)
}
