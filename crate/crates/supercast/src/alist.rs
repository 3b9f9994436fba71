//! Sparse parity-check matrices in alist format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines: 1-based row indices of each column, zero padded to max_col_weight
//! m lines: 1-based column indices of each row, zero padded to max_row_weight
//! ```
//!
//! The reader accepts both padded and unpadded index lists.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use supercast_core::gf2::BinaryMatrix;

#[derive(Debug, thiserror::Error)]
pub enum AlistError {
    #[error("unexpected end of input while reading {0}")]
    Truncated(&'static str),
    #[error("bad integer {token:?} while reading {what}")]
    BadInteger { what: &'static str, token: String },
    #[error("{0}")]
    Inconsistent(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

struct Tokens<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().peekable(),
        }
    }

    /// Next non-blank line as integers.
    fn line(&mut self, what: &'static str) -> Result<Vec<usize>, AlistError> {
        loop {
            let line = self.lines.next().ok_or(AlistError::Truncated(what))?;
            if line.trim().is_empty() {
                continue;
            }
            return line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| AlistError::BadInteger {
                        what,
                        token: t.to_string(),
                    })
                })
                .collect();
        }
    }
}

fn expect_len(v: &[usize], len: usize, what: &str) -> Result<(), AlistError> {
    if v.len() != len {
        return Err(AlistError::Inconsistent(format!(
            "{what}: expected {len} values, found {}",
            v.len()
        )));
    }
    Ok(())
}

/// Parses alist text. Column and row lists must describe the same matrix.
pub fn parse(text: &str) -> Result<BinaryMatrix, AlistError> {
    let mut t = Tokens::new(text);
    let dims = t.line("dimensions")?;
    expect_len(&dims, 2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(AlistError::Inconsistent("empty matrix".into()));
    }
    let maxw = t.line("maximum weights")?;
    expect_len(&maxw, 2, "maximum weights")?;
    let col_w = t.line("column weights")?;
    expect_len(&col_w, n, "column weights")?;
    let row_w = t.line("row weights")?;
    expect_len(&row_w, m, "row weights")?;

    let mut h = BinaryMatrix::zeros(m, n);
    for (c, &w) in col_w.iter().enumerate() {
        let idx = t.line("column lists")?;
        let nz: Vec<usize> = idx.into_iter().filter(|&i| i != 0).collect();
        if nz.len() != w {
            return Err(AlistError::Inconsistent(format!(
                "column {} lists {} entries, weight says {w}",
                c + 1,
                nz.len()
            )));
        }
        for r in nz {
            if r > m {
                return Err(AlistError::Inconsistent(format!(
                    "column {} references row {r} of {m}",
                    c + 1
                )));
            }
            if h.get(r - 1, c) {
                return Err(AlistError::Inconsistent(format!(
                    "column {} lists row {r} twice",
                    c + 1
                )));
            }
            h.set(r - 1, c, true);
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let idx = t.line("row lists")?;
        let nz: Vec<usize> = idx.into_iter().filter(|&i| i != 0).collect();
        if nz.len() != w {
            return Err(AlistError::Inconsistent(format!(
                "row {} lists {} entries, weight says {w}",
                r + 1,
                nz.len()
            )));
        }
        for c in nz {
            if c == 0 || c > n || !h.get(r, c - 1) {
                return Err(AlistError::Inconsistent(format!(
                    "row {} entry {c} disagrees with the column lists",
                    r + 1
                )));
            }
        }
    }
    if maxw[0] != col_w.iter().copied().max().unwrap_or(0)
        || maxw[1] != row_w.iter().copied().max().unwrap_or(0)
    {
        return Err(AlistError::Inconsistent("maximum weights do not match".into()));
    }
    Ok(h)
}

/// Formats `h` as padded alist text.
pub fn format(h: &BinaryMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let col_w = h.column_weights();
    let row_w = h.row_weights();
    let max_c = col_w.iter().copied().max().unwrap_or(0);
    let max_r = row_w.iter().copied().max().unwrap_or(0);

    let join = |v: &[usize]| {
        v.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let padded = |mut v: Vec<usize>, width: usize| {
        v.resize(width, 0);
        join(&v)
    };

    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_c} {max_r}");
    let _ = writeln!(out, "{}", join(&col_w));
    let _ = writeln!(out, "{}", join(&row_w));
    for c in 0..n {
        let rows = (0..m).filter(|&r| h.get(r, c)).map(|r| r + 1).collect();
        let _ = writeln!(out, "{}", padded(rows, max_c));
    }
    for r in 0..m {
        let cols = h.row(r).support().into_iter().map(|c| c + 1).collect();
        let _ = writeln!(out, "{}", padded(cols, max_r));
    }
    out
}

pub fn read(path: impl AsRef<Path>) -> Result<BinaryMatrix, AlistError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| AlistError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn write(path: impl AsRef<Path>, h: &BinaryMatrix) -> Result<(), AlistError> {
    let path = path.as_ref();
    fs::write(path, format(h)).map_err(|source| AlistError::Io {
        path: path.display().to_string(),
        source,
    })
}
