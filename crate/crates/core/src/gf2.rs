//! Dense GF(2) vectors and matrices, bit-packed into `u64` words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A binary vector of fixed, nonzero length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// All-zero vector of length `len`. Panics when `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "BitVector length must be positive");
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Builds a vector from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(invalid("bit vector must be nonempty"));
        }
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i, true),
                other => return Err(invalid(alloc::format!("bit value {other} at index {i}"))),
            }
        }
        Ok(v)
    }

    /// Vector of length `len` whose low bits are taken from `value` (bit `i` of
    /// `value` becomes position `i`).
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
        v.words[0] = value & mask;
        v
    }

    /// Packs positions `0..len` into a `u64`; only valid for `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD);
        self.words[0]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// In-place addition over GF(2). Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The bits as a `Vec<u8>` of zeros and ones.
    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Positions holding a one.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + tail.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in tail.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copy of positions `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Bits at the given positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, ")")
    }
}

/// A dense binary matrix with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows: (0..rows).map(|_| BitVector::zeros(cols)).collect(),
            cols,
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(invalid("matrix needs at least one row"));
        };
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("matrix rows differ in length"));
        }
        Ok(Self { rows, cols })
    }

    /// Parses rows of 0/1 values, e.g. `&[&[1, 1, 0], &[0, 1, 1]]`.
    pub fn from_bit_rows(rows: &[&[u8]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitVector::from_bits(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut out = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.support() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · vᵀ`, e.g. the syndrome of `v` when `self` is a parity-check matrix.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "matrix/vector dimension mismatch");
        let mut out = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// Row vector times matrix: `m · self`, where `m` has one bit per row.
    pub fn vec_mul(&self, m: &BitVector) -> BitVector {
        assert_eq!(self.rows(), m.len(), "vector/matrix dimension mismatch");
        let mut out = BitVector::zeros(self.cols);
        for r in m.support() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, other.rows(), "matrix dimension mismatch");
        let rows = self.rows.iter().map(|row| other.vec_mul(row)).collect();
        BinaryMatrix {
            rows,
            cols: other.cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Reduced row echelon form; returns the reduced matrix (zero rows dropped,
    /// unless the matrix is entirely zero) and the pivot column of each row.
    pub fn rref(&self) -> (BinaryMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        if next == 0 {
            return (self.clone(), pivots);
        }
        rows.truncate(next);
        (
            BinaryMatrix {
                rows,
                cols: self.cols,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self · xᵀ = 0}` in systematic form.
    ///
    /// Returns `None` when the null space is trivial. The second value lists the
    /// free (information) columns; the basis vector `i` is the unit vector on
    /// free column `i` completed by the pivot columns.
    pub fn null_space(&self) -> Option<(BinaryMatrix, Vec<usize>)> {
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return None;
        }
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.get(r, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Some((
            BinaryMatrix {
                rows: basis,
                cols: self.cols,
            },
            free,
        ))
    }

    /// `[self | right]`.
    pub fn hstack(&self, right: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.rows(), right.rows(), "hstack row mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&right.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        BinaryMatrix {
            rows,
            cols: self.cols + right.cols,
        }
    }

    /// `self` stacked on top of `below`.
    pub fn vstack(&self, below: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, below.cols, "vstack column mismatch");
        let mut rows = self.rows.clone();
        rows.extend(below.rows.iter().cloned());
        BinaryMatrix {
            rows,
            cols: self.cols,
        }
    }

    /// Column weights.
    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for c in row.support() {
                w[c] += 1;
            }
        }
        w
    }

    /// Row weights.
    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows(), self.cols)?;
        for row in &self.rows {
            write!(f, "  ")?;
            for b in row.iter() {
                write!(f, "{}", u8::from(b))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
