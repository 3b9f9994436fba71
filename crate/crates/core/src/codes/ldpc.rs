//! Rejection-sampled sparse parity-check codes with an exact distance target.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{min_distance_capped, LinearCode, DEFAULT_ENUMERATION_CAP_LOG2};
use crate::error::{invalid, Error, Result};
use crate::gf2::BinaryMatrix;

/// Search parameters for [`gallager_ldpc_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcSearch {
    pub n: usize,
    pub k: usize,
    pub target_distance: usize,
    pub seed: u64,
    /// Ones per column. `None` picks 3 when there are at least 6 check rows,
    /// otherwise a per-column weight drawn from `1..m`.
    pub column_weight: Option<usize>,
    pub max_attempts: usize,
}

impl LdpcSearch {
    pub fn new(n: usize, k: usize, target_distance: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            target_distance,
            seed,
            column_weight: None,
            max_attempts: 200_000,
        }
    }
}

/// Samples sparse `(n − k) × n` parity-check matrices from a ChaCha stream
/// seeded by `seed` until one has full rank and exhaustive minimum distance
/// exactly `target_d`.
pub fn gallager_ldpc(n: usize, k: usize, target_d: usize, seed: u64) -> Result<LinearCode> {
    gallager_ldpc_with(&LdpcSearch::new(n, k, target_d, seed))
}

pub fn gallager_ldpc_with(search: &LdpcSearch) -> Result<LinearCode> {
    let LdpcSearch { n, k, target_distance, .. } = *search;
    if k == 0 || k >= n {
        return Err(invalid(format!("need 0 < k < n, got n={n}, k={k}")));
    }
    if target_distance == 0 || target_distance > n - k + 1 {
        return Err(invalid(format!(
            "target distance {target_distance} violates the Singleton bound for ({n},{k})"
        )));
    }
    if k as u32 > DEFAULT_ENUMERATION_CAP_LOG2 {
        return Err(Error::CapacityExceeded {
            log2_required: k as u32,
            log2_cap: DEFAULT_ENUMERATION_CAP_LOG2,
        });
    }
    let m = n - k;
    if let Some(w) = search.column_weight {
        if w == 0 || w > m {
            return Err(invalid(format!("column weight {w} not in 1..={m}")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for _ in 0..search.max_attempts {
        let h = sample_sparse(&mut rng, m, n, search.column_weight);
        if h.rank() != m {
            continue;
        }
        if has_repeated_column(&h) && target_distance > 2 {
            continue;
        }
        let code = LinearCode::from_parity_check(h)?;
        if min_distance_capped(&code, DEFAULT_ENUMERATION_CAP_LOG2)? == target_distance {
            return Ok(code.with_min_distance(target_distance));
        }
    }
    Err(Error::ConstructionFailure {
        attempts: search.max_attempts,
    })
}

fn sample_sparse<R: Rng>(rng: &mut R, m: usize, n: usize, weight: Option<usize>) -> BinaryMatrix {
    let mut h = BinaryMatrix::zeros(m, n);
    for c in 0..n {
        let w = match weight {
            Some(w) => w,
            None if m >= 6 => 3,
            None => rng.random_range(1..m.max(2)).min(m),
        };
        for r in sample(rng, m, w).iter() {
            h.set(r, c, true);
        }
    }
    h
}

fn has_repeated_column(h: &BinaryMatrix) -> bool {
    let cols: Vec<_> = (0..h.cols()).map(|c| h.column(c)).collect();
    cols.iter()
        .enumerate()
        .any(|(i, a)| cols[i + 1..].iter().any(|b| a == b))
}
