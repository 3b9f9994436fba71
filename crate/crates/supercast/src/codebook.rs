//! Loading the shipped constituent codes.

use std::path::Path;

use anyhow::{ensure, Context, Result};
use supercast_core::codes::{self, plotkin_combine, LinearCode, PlotkinCode};

use crate::alist;

/// File name of the (20,7,6) LDPC parity-check matrix inside a code directory.
pub const LDPC_20_7_6_FILE: &str = "ldpc_20_7_6.alist";

/// Reads a parity-check matrix and attaches its exhaustively computed
/// minimum distance.
pub fn load_code(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let h = alist::read(path)?;
    let code = LinearCode::from_parity_check(h)
        .with_context(|| format!("{} is not a usable parity-check matrix", path.display()))?;
    let d = codes::min_distance(&code)?;
    Ok(code.with_min_distance(d))
}

/// The (40,26) code: SPC(20,19,2) combined with the (20,7,6) LDPC from
/// `code_dir`.
pub fn load_composite(code_dir: impl AsRef<Path>) -> Result<PlotkinCode> {
    let path = code_dir.as_ref().join(LDPC_20_7_6_FILE);
    let c2 = load_code(&path)?;
    ensure!(
        (c2.n(), c2.k(), c2.min_distance()) == (20, 7, Some(6)),
        "{} holds a ({},{},{:?}) code, expected (20,7,6)",
        path.display(),
        c2.n(),
        c2.k(),
        c2.min_distance()
    );
    Ok(plotkin_combine(&codes::spc_code(20)?, &c2)?)
}

/// The (40,26) code built directly from the seeded search.
pub fn composite_from_seed(seed: u64) -> Result<PlotkinCode> {
    let c2 = codes::gallager_ldpc(20, 7, 6, seed)?;
    Ok(plotkin_combine(&codes::spc_code(20)?, &c2)?)
}
