//! Binary linear codes: single-parity-check, repetition, sparse random LDPC and
//! the Plotkin `|u|u+v|` combination, plus exhaustive distance oracles.

mod ldpc;
mod oracle;
mod plotkin;

use alloc::format;
use alloc::vec::Vec;

pub use ldpc::{gallager_ldpc, gallager_ldpc_with, LdpcSearch};
pub use oracle::{
    euclidean_separations, euclidean_separations_capped, euclidean_separations_sampled,
    min_distance, min_distance_capped, ml_decode, ml_decode_capped, separation_vector, separation_vector_capped,
    EuclideanSeparations, DEFAULT_ENUMERATION_CAP_LOG2,
};
pub use plotkin::{plotkin_combine, PlotkinCode, SeparationVector};

use crate::error::{invalid, Result};
use crate::gf2::{BinaryMatrix, BitVector};

/// An `(n, k, d)` binary linear code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BinaryMatrix,
    parity_check: BinaryMatrix,
    info_positions: Option<Vec<usize>>,
    min_distance: Option<usize>,
}

impl LinearCode {
    /// Code defined as the null space of a full-row-rank parity-check matrix.
    ///
    /// The generator is systematic: it carries an identity on
    /// [`info_positions`](Self::info_positions), chosen as far left as possible.
    pub fn from_parity_check(h: BinaryMatrix) -> Result<Self> {
        let n = h.cols();
        let m = h.rows();
        if h.rank() != m {
            return Err(invalid(format!("parity-check matrix has rank {} < {m} rows", h.rank())));
        }
        if m >= n {
            return Err(invalid("parity-check matrix leaves no information bits"));
        }
        // Eliminate from the right so pivots land on the trailing columns and
        // the free (information) columns come first.
        let reversed = reverse_columns(&h);
        let (basis, free) = reversed
            .null_space()
            .expect("rank < n implies a nontrivial null space");
        let generator = reverse_columns(&basis);
        let mut info: Vec<usize> = free.iter().map(|&c| n - 1 - c).collect();
        // Keep row i of G aligned with info position i.
        let mut order: Vec<usize> = (0..info.len()).collect();
        order.sort_by_key(|&i| info[i]);
        let rows = order.iter().map(|&i| generator.row(i).clone()).collect();
        let generator = BinaryMatrix::from_rows(rows)?;
        info.sort_unstable();
        Ok(Self {
            n,
            k: n - m,
            generator,
            parity_check: h,
            info_positions: Some(info),
            min_distance: None,
        })
    }

    /// Code from an explicit generator/parity-check pair, checked for
    /// `G·Hᵀ = 0`, `rank(G) = k` and `rank(H) = n − k`.
    pub fn from_matrices(generator: BinaryMatrix, parity_check: BinaryMatrix) -> Result<Self> {
        let n = generator.cols();
        if parity_check.cols() != n {
            return Err(invalid("generator and parity-check lengths differ"));
        }
        let k = generator.rows();
        if generator.rank() != k {
            return Err(invalid("generator rows are not independent"));
        }
        if parity_check.rank() != parity_check.rows() || parity_check.rows() + k != n {
            return Err(invalid("parity-check rank does not equal n - k"));
        }
        if !generator.mul(&parity_check.transpose()).is_zero() {
            return Err(invalid("G * H^T is not zero"));
        }
        let info_positions = systematic_positions(&generator);
        Ok(Self {
            n,
            k,
            generator,
            parity_check,
            info_positions,
            min_distance: None,
        })
    }

    /// Records a minimum distance established elsewhere (construction theorem or oracle).
    pub fn with_min_distance(mut self, d: usize) -> Self {
        self.min_distance = Some(d);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &BinaryMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BinaryMatrix {
        &self.parity_check
    }

    /// Known minimum distance, if any.
    pub fn min_distance(&self) -> Option<usize> {
        self.min_distance
    }

    /// Positions where the generator restricts to the identity, when it does.
    pub fn info_positions(&self) -> Option<&[usize]> {
        self.info_positions.as_deref()
    }

    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        if msg.len() != self.k {
            return Err(invalid(format!("message length {} != k = {}", msg.len(), self.k)));
        }
        Ok(self.generator.vec_mul(msg))
    }

    /// Reads the message off a codeword of a systematic code.
    pub fn extract_message(&self, codeword: &BitVector) -> Result<BitVector> {
        let info = self
            .info_positions
            .as_deref()
            .ok_or_else(|| invalid("generator is not systematic"))?;
        if codeword.len() != self.n {
            return Err(invalid("codeword length mismatch"));
        }
        Ok(codeword.select(info))
    }

    pub fn syndrome(&self, word: &BitVector) -> BitVector {
        self.parity_check.mul_vec(word)
    }

    pub fn is_codeword(&self, word: &BitVector) -> bool {
        word.len() == self.n && self.syndrome(word).is_zero()
    }
}

fn reverse_columns(m: &BinaryMatrix) -> BinaryMatrix {
    let n = m.cols();
    let mut out = BinaryMatrix::zeros(m.rows(), n);
    for r in 0..m.rows() {
        for c in m.row(r).support() {
            out.set(r, n - 1 - c, true);
        }
    }
    out
}

/// Columns `c_0 < c_1 < …` with `G[:, c_i] = e_i`, if such a set exists.
fn systematic_positions(g: &BinaryMatrix) -> Option<Vec<usize>> {
    let k = g.rows();
    let mut positions = Vec::with_capacity(k);
    for i in 0..k {
        let mut unit = BitVector::zeros(k);
        unit.set(i, true);
        let c = (0..g.cols()).find(|&c| g.column(c) == unit)?;
        positions.push(c);
    }
    Some(positions)
}

/// The `(n, n−1, 2)` single-parity-check code with `G = [I | 1]`.
pub fn spc_code(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(invalid(format!("SPC length must be >= 2, got {n}")));
    }
    let mut h = BinaryMatrix::zeros(1, n);
    for c in 0..n {
        h.set(0, c, true);
    }
    let mut g = BinaryMatrix::zeros(n - 1, n);
    for r in 0..n - 1 {
        g.set(r, r, true);
        g.set(r, n - 1, true);
    }
    Ok(LinearCode::from_matrices(g, h)?.with_min_distance(2))
}

/// The `(n, 1, n)` repetition code with a bidiagonal parity-check matrix.
pub fn repetition_code(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(invalid(format!("repetition length must be >= 2, got {n}")));
    }
    let mut h = BinaryMatrix::zeros(n - 1, n);
    for r in 0..n - 1 {
        h.set(r, r, true);
        h.set(r, r + 1, true);
    }
    let mut g = BinaryMatrix::zeros(1, n);
    for c in 0..n {
        g.set(0, c, true);
    }
    Ok(LinearCode::from_matrices(g, h)?.with_min_distance(n))
}
