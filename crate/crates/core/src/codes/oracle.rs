//! Exhaustive enumeration oracles. Codewords are visited in Gray-code order so
//! each step costs one row addition.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{LinearCode, PlotkinCode, SeparationVector};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::modem::SignalSet;

/// Default enumeration cap: `2^26` items, enough for the full (40,26) code.
pub const DEFAULT_ENUMERATION_CAP_LOG2: u32 = 26;

fn check_cap(log2_required: u32, log2_cap: u32) -> Result<()> {
    if log2_required > log2_cap {
        return Err(Error::CapacityExceeded {
            log2_required,
            log2_cap,
        });
    }
    Ok(())
}

/// Visits every nonzero codeword `m·G`, passing the message index (Gray code)
/// and the packed codeword words.
fn for_each_codeword(g: &BinaryMatrix, mut visit: impl FnMut(u64, &[u64])) {
    let k = g.rows();
    assert!(k < 64);
    let rows: Vec<&[u64]> = g.row_iter().map(BitVector::words).collect();
    let mut word = alloc::vec![0u64; rows[0].len()];
    let mut msg = 0u64;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        msg ^= 1 << bit;
        for (w, r) in word.iter_mut().zip(rows[bit]) {
            *w ^= r;
        }
        visit(msg, &word);
    }
}

fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Exact minimum distance with the default cap.
pub fn min_distance(code: &LinearCode) -> Result<usize> {
    min_distance_capped(code, DEFAULT_ENUMERATION_CAP_LOG2)
}

/// Exact minimum nonzero weight, refusing codes with `k > cap_log2`.
pub fn min_distance_capped(code: &LinearCode, cap_log2: u32) -> Result<usize> {
    check_cap(code.k() as u32, cap_log2)?;
    let mut best = usize::MAX;
    for_each_codeword(code.generator(), |_, w| best = best.min(weight(w)));
    Ok(best)
}

/// Per-class minimum codeword weights with the default cap.
pub fn separation_vector(code: &PlotkinCode) -> Result<SeparationVector> {
    separation_vector_capped(code, DEFAULT_ENUMERATION_CAP_LOG2)
}

/// Enumerates the composite code and returns, for each message class, the
/// minimum weight over codewords whose message is nonzero in that class. By
/// linearity this is the minimum distance between codewords whose messages
/// differ in that class.
pub fn separation_vector_capped(code: &PlotkinCode, cap_log2: u32) -> Result<SeparationVector> {
    let inner = code.inner();
    check_cap(inner.k() as u32, cap_log2)?;
    let k1 = code.c1().k();
    let low_mask = (1u64 << k1) - 1;
    let mut high = usize::MAX;
    let mut low = usize::MAX;
    for_each_codeword(inner.generator(), |msg, w| {
        let wt = weight(w);
        if msg & low_mask != 0 {
            low = low.min(wt);
        }
        if msg >> k1 != 0 {
            high = high.min(wt);
        }
    });
    Ok(SeparationVector { high, low })
}

/// Maximum-likelihood codeword for per-bit LLRs (positive favours 0): the
/// codeword maximizing `Σ (1 − 2cᵢ)·Lᵢ`. Ties keep the earliest codeword in
/// enumeration order, starting from all-zero.
pub fn ml_decode(code: &LinearCode, llr: &[f64]) -> Result<BitVector> {
    ml_decode_capped(code, llr, DEFAULT_ENUMERATION_CAP_LOG2)
}

pub fn ml_decode_capped(code: &LinearCode, llr: &[f64], cap_log2: u32) -> Result<BitVector> {
    if llr.len() != code.n() {
        return Err(crate::error::invalid("LLR length does not match the code length"));
    }
    check_cap(code.k() as u32, cap_log2)?;
    let base: f64 = llr.iter().sum();
    let mut best = (base, 0u64);
    for_each_codeword(code.generator(), |msg, w| {
        let mut score = base;
        for (wi, word) in w.iter().enumerate() {
            let mut bits = *word;
            while bits != 0 {
                let j = wi * 64 + bits.trailing_zeros() as usize;
                score -= 2.0 * llr[j];
                bits &= bits - 1;
            }
        }
        if score > best.0 {
            best = (score, msg);
        }
    });
    code.encode(&BitVector::from_u64(best.1, code.k()))
}

/// Minimum Euclidean distances between superposed signal sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanSeparations {
    /// Over pairs differing only in `v₂`.
    pub s2: f64,
    /// Over pairs differing only in `v₁`.
    pub s1: f64,
}

/// All codewords of `code`, as bit vectors.
fn codewords(code: &LinearCode) -> Vec<BitVector> {
    let g = code.generator();
    let mut out = Vec::with_capacity(1 << code.k());
    out.push(BitVector::zeros(code.n()));
    let mut cur = BitVector::zeros(code.n());
    for step in 1u64..(1u64 << code.k()) {
        cur.xor_assign(g.row(step.trailing_zeros() as usize));
        out.push(cur.clone());
    }
    out
}

fn modulate_halves(set: &SignalSet, v1: &BitVector, v2: &BitVector) -> Vec<Complex64> {
    let (f1, f2) = set
        .map_sources(v1, v2)
        .expect("constituent words share a length");
    f1.symbols
        .iter()
        .zip(&f2.symbols)
        .map(|(a, b)| a + b)
        .collect()
}

fn sq_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// Exhaustive pair search with the default cap.
pub fn euclidean_separations(code: &PlotkinCode, set: &SignalSet) -> Result<EuclideanSeparations> {
    euclidean_separations_capped(code, set, DEFAULT_ENUMERATION_CAP_LOG2)
}

/// Exhaustive search over all ordered pairs of superposed sequences that differ
/// in exactly one source word. Refuses when the pair count exceeds `2^cap_log2`.
pub fn euclidean_separations_capped(
    code: &PlotkinCode,
    set: &SignalSet,
    cap_log2: u32,
) -> Result<EuclideanSeparations> {
    let (k1, k2) = (code.c1().k() as u32, code.c2().k() as u32);
    // Pairs: 2^k2·2^k1·(2^k1 − 1) + 2^k1·2^k2·(2^k2 − 1) < 2^(k1 + k2 + max(k1, k2) + 1).
    check_cap(k1 + k2 + k1.max(k2) + 1, cap_log2)?;
    let words1 = codewords(code.c1());
    let words2 = codewords(code.c2());
    let signals: Vec<Vec<Vec<Complex64>>> = words1
        .iter()
        .map(|v1| words2.iter().map(|v2| modulate_halves(set, v1, v2)).collect())
        .collect();

    let mut s1 = f64::INFINITY;
    let mut s2 = f64::INFINITY;
    for (i, row) in signals.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            for (i2, other) in signals.iter().enumerate() {
                if i2 != i {
                    s1 = s1.min(sq_distance(x, &other[j]));
                }
            }
            for (j2, y) in row.iter().enumerate() {
                if j2 != j {
                    s2 = s2.min(sq_distance(x, y));
                }
            }
        }
    }
    Ok(EuclideanSeparations {
        s2: libm::sqrt(s2),
        s1: libm::sqrt(s1),
    })
}

/// Pair search anchored at `references` random superposed sequences: each
/// anchor is compared against every sequence that differs from it in exactly
/// one source word. Each anchor enumerates `2^k₁ + 2^k₂` alternatives.
pub fn euclidean_separations_sampled<R: Rng>(
    code: &PlotkinCode,
    set: &SignalSet,
    references: usize,
    rng: &mut R,
) -> Result<EuclideanSeparations> {
    let (k1, k2) = (code.c1().k() as u32, code.c2().k() as u32);
    check_cap(k1.max(k2), DEFAULT_ENUMERATION_CAP_LOG2)?;
    if references == 0 {
        return Err(crate::error::invalid("need at least one reference"));
    }
    let words1 = codewords(code.c1());
    let words2 = codewords(code.c2());
    let mut s1 = f64::INFINITY;
    let mut s2 = f64::INFINITY;
    for _ in 0..references {
        let i = rng.random_range(0..words1.len());
        let j = rng.random_range(0..words2.len());
        let anchor = modulate_halves(set, &words1[i], &words2[j]);
        for (i2, v1) in words1.iter().enumerate() {
            if i2 != i {
                s1 = s1.min(sq_distance(&anchor, &modulate_halves(set, v1, &words2[j])));
            }
        }
        for (j2, v2) in words2.iter().enumerate() {
            if j2 != j {
                s2 = s2.min(sq_distance(&anchor, &modulate_halves(set, &words1[i], v2)));
            }
        }
    }
    Ok(EuclideanSeparations {
        s2: libm::sqrt(s2),
        s1: libm::sqrt(s1),
    })
}
