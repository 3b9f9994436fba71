use alloc::format;

use super::LinearCode;
use crate::error::{invalid, Result};
use crate::gf2::{BinaryMatrix, BitVector};

/// Per-class minimum distances of a two-level LUEP code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationVector {
    /// Distance protecting the `C₂` message bits.
    pub high: usize,
    /// Distance protecting the `C₁` message bits.
    pub low: usize,
}

/// The code `{ |v₁|v₁+v₂| : v₁ ∈ C₁, v₂ ∈ C₂ }`.
///
/// Generator rows `0..k₁` are `[G₁ G₁]` (message class 1), rows `k₁..k₁+k₂`
/// are `[0 G₂]` (message class 2). The parity-check matrix is
/// `[[H₁ 0], [H₂ H₂]]`: a word `|a|b|` belongs to the code iff `a ∈ C₁` and
/// `a ⊕ b ∈ C₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotkinCode {
    inner: LinearCode,
    c1: LinearCode,
    c2: LinearCode,
    separation: SeparationVector,
    luep: bool,
}

/// Combines two equal-length codes with known minimum distances.
pub fn plotkin_combine(c1: &LinearCode, c2: &LinearCode) -> Result<PlotkinCode> {
    if c1.n() != c2.n() {
        return Err(invalid(format!(
            "constituent lengths differ: {} vs {}",
            c1.n(),
            c2.n()
        )));
    }
    let (Some(d1), Some(d2)) = (c1.min_distance(), c2.min_distance()) else {
        return Err(invalid("constituent minimum distances must be known"));
    };
    if c1.info_positions().is_none() || c2.info_positions().is_none() {
        return Err(invalid("constituent generators must be systematic"));
    }
    let n = c1.n();
    let (g1, g2) = (c1.generator(), c2.generator());
    let (h1, h2) = (c1.parity_check(), c2.parity_check());

    let g = g1
        .hstack(g1)
        .vstack(&BinaryMatrix::zeros(c2.k(), n).hstack(g2));
    let h = h1
        .hstack(&BinaryMatrix::zeros(h1.rows(), n))
        .vstack(&h2.hstack(h2));
    let inner = LinearCode::from_matrices(g, h)?.with_min_distance((2 * d1).min(d2));

    Ok(PlotkinCode {
        inner,
        c1: c1.clone(),
        c2: c2.clone(),
        separation: SeparationVector {
            high: d2,
            low: 2 * d1,
        },
        luep: 2 * d1 < d2,
    })
}

impl PlotkinCode {
    /// The composite `(2n, k₁ + k₂)` code.
    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    /// Constituent block length `n`.
    pub fn half_len(&self) -> usize {
        self.c1.n()
    }

    /// `(d₂, 2d₁)` from the constituent distances.
    pub fn separation(&self) -> SeparationVector {
        self.separation
    }

    /// Whether `2d₁ < d₂`, i.e. the two classes get distinct protection.
    pub fn is_luep(&self) -> bool {
        self.luep
    }

    /// Encodes `(msg2, msg1)` into the constituent words `(v₁, v₂)`.
    pub fn encode_parts(&self, msg2: &BitVector, msg1: &BitVector) -> Result<(BitVector, BitVector)> {
        if msg2.len() != self.c2.k() || msg1.len() != self.c1.k() {
            return Err(invalid(format!(
                "message lengths ({}, {}) do not match (k2, k1) = ({}, {})",
                msg2.len(),
                msg1.len(),
                self.c2.k(),
                self.c1.k()
            )));
        }
        Ok((self.c1.encode(msg1)?, self.c2.encode(msg2)?))
    }

    /// Encodes `(msg2, msg1)` into `|v₁|v₁+v₂|`.
    pub fn encode(&self, msg2: &BitVector, msg1: &BitVector) -> Result<BitVector> {
        let (v1, v2) = self.encode_parts(msg2, msg1)?;
        Ok(v1.concat(&v1.xor(&v2)))
    }

    /// Splits a length-`2n` word into `(v₁, v₂) = (u, u ⊕ w)`.
    pub fn split(&self, codeword: &BitVector) -> Result<(BitVector, BitVector)> {
        let n = self.half_len();
        if codeword.len() != 2 * n {
            return Err(invalid("codeword length mismatch"));
        }
        let u = codeword.slice(0, n);
        let w = codeword.slice(n, n);
        let v2 = u.xor(&w);
        Ok((u, v2))
    }

    /// Recovers `(msg2, msg1)` positionally from the systematic constituents.
    pub fn extract_messages(&self, codeword: &BitVector) -> Result<(BitVector, BitVector)> {
        let (v1, v2) = self.split(codeword)?;
        Ok((self.c2.extract_message(&v2)?, self.c1.extract_message(&v1)?))
    }
}
