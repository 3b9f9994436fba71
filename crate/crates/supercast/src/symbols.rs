//! Symbol frames as `re,im` text, one symbol per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use supercast_core::modem::{ComplexSymbol, SymbolFrame};

pub fn format_csv(frame: &SymbolFrame) -> String {
    let mut out = String::with_capacity(frame.len() * 40);
    for s in &frame.symbols {
        let _ = writeln!(out, "{},{}", s.re, s.im);
    }
    out
}

pub fn parse_csv(text: &str) -> Result<SymbolFrame> {
    let mut symbols = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((re, im)) = line.split_once(',') else {
            bail!("line {}: expected re,im", i + 1);
        };
        let re: f64 = re.trim().parse().with_context(|| format!("line {}: real part", i + 1))?;
        let im: f64 = im.trim().parse().with_context(|| format!("line {}: imaginary part", i + 1))?;
        symbols.push(ComplexSymbol::new(re, im));
    }
    Ok(SymbolFrame::received(symbols))
}

pub fn write_csv(path: impl AsRef<Path>, frame: &SymbolFrame) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_csv(frame)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<SymbolFrame> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_csv(&text).with_context(|| format!("parsing {}", path.display()))
}
