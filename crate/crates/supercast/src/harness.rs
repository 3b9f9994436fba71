//! Seeded, parallel Monte-Carlo sweeps over Eb/N0.
//!
//! Frame `f` of sweep point `p` draws from its own ChaCha8 stream
//! `(p << 40) | f` under the master seed, so results do not depend on how
//! frames are spread over worker threads.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use supercast_core::channel::NoiseParams;
use supercast_core::codes::PlotkinCode;
use supercast_core::link::{ChannelKind, LinkConfig, Mode, System};
use supercast_core::modem::DemapMethod;
use supercast_core::stbc::Pairing;

pub const CSV_HEADER: &str = "ebn0_db,ber_high,ber_low,bler,frames,mean_iter";

pub const DEFAULT_FRAMES: usize = 10_000;

/// Error count a point needs in a class before it enters ordering or slope
/// comparisons.
pub const ERROR_FLOOR: u64 = 100;

const FRAME_INDEX_BITS: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub link: LinkConfig,
    pub ebn0_db: Vec<f64>,
    pub frames: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            link: LinkConfig::default(),
            ebn0_db: vec![0.0, 2.0, 4.0, 6.0],
            frames: DEFAULT_FRAMES,
            master_seed: 1,
            threads: None,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.frames >= 1, "frames must be at least 1");
        ensure!(self.frames < 1 << FRAME_INDEX_BITS, "too many frames per point");
        ensure!(!self.ebn0_db.is_empty(), "the Eb/N0 sweep is empty");
        ensure!(
            self.ebn0_db.len() < 1 << (64 - FRAME_INDEX_BITS),
            "too many sweep points"
        );
        for &e in &self.ebn0_db {
            ensure!(!e.is_nan() && e != f64::NEG_INFINITY, "invalid Eb/N0 value {e}");
        }
        if self.threads == Some(0) {
            bail!("thread count must be at least 1");
        }
        self.link.validate()?;
        Ok(())
    }
}

/// One CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerRecord {
    pub ebn0_db: f64,
    pub ber_high: f64,
    pub ber_low: f64,
    pub bler: f64,
    pub frames: usize,
    pub mean_iter: f64,
}

/// Raw counters behind a [`BerRecord`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PointCounts {
    pub frames: u64,
    pub bits_high: u64,
    pub bits_low: u64,
    pub errors_high: u64,
    pub errors_low: u64,
    /// Frames with at least one error in the high class.
    pub frame_errors_high: u64,
    pub frame_errors_low: u64,
    pub block_errors: u64,
    pub iterations: u64,
    pub unconverged: u64,
}

impl PointCounts {
    fn merge(self, o: Self) -> Self {
        Self {
            frames: self.frames + o.frames,
            bits_high: self.bits_high + o.bits_high,
            bits_low: self.bits_low + o.bits_low,
            errors_high: self.errors_high + o.errors_high,
            errors_low: self.errors_low + o.errors_low,
            frame_errors_high: self.frame_errors_high + o.frame_errors_high,
            frame_errors_low: self.frame_errors_low + o.frame_errors_low,
            block_errors: self.block_errors + o.block_errors,
            iterations: self.iterations + o.iterations,
            unconverged: self.unconverged + o.unconverged,
        }
    }

    fn record(&self, ebn0_db: f64) -> BerRecord {
        let rate = |e: u64, n: u64| if n == 0 { 0.0 } else { e as f64 / n as f64 };
        BerRecord {
            ebn0_db,
            ber_high: rate(self.errors_high, self.bits_high),
            ber_low: rate(self.errors_low, self.bits_low),
            bler: rate(self.block_errors, self.frames),
            frames: self.frames as usize,
            mean_iter: rate(self.iterations, self.frames),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub record: BerRecord,
    pub counts: PointCounts,
}

impl PointResult {
    /// Both classes reached [`ERROR_FLOOR`] errors.
    pub fn above_floor(&self) -> bool {
        self.counts.errors_high >= ERROR_FLOOR && self.counts.errors_low >= ERROR_FLOOR
    }
}

/// The RNG of one frame.
pub fn frame_rng(master_seed: u64, point: usize, frame: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << FRAME_INDEX_BITS) | frame as u64);
    rng
}

pub fn run_scenario(code: &PlotkinCode, s: &Scenario) -> Result<Vec<BerRecord>> {
    Ok(run_scenario_detailed(code, s)?
        .into_iter()
        .map(|p| p.record)
        .collect())
}

pub fn run_scenario_detailed(code: &PlotkinCode, s: &Scenario) -> Result<Vec<PointResult>> {
    s.validate()?;
    let system = System::new(code.clone())?;
    let run = || sweep(&system, s);
    match s.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("building the worker pool")?
            .install(run),
        None => run(),
    }
}

fn sweep(system: &System, s: &Scenario) -> Result<Vec<PointResult>> {
    let (info_bits, symbols) = system.bits_and_symbols(s.link.mode);
    let (k_high, k_low) = system.class_bits(s.link.mode);
    s.ebn0_db
        .iter()
        .enumerate()
        .map(|(p, &ebn0)| {
            let noise = NoiseParams::from_ebn0_db(ebn0, info_bits, symbols)?;
            let counts = (0..s.frames)
                .into_par_iter()
                .map(|f| -> Result<PointCounts> {
                    let mut rng = frame_rng(s.master_seed, p, f);
                    let out = system.simulate_frame(&s.link, noise, &mut rng)?;
                    Ok(PointCounts {
                        frames: 1,
                        bits_high: k_high as u64,
                        bits_low: k_low as u64,
                        errors_high: out.errors_high as u64,
                        errors_low: out.errors_low as u64,
                        frame_errors_high: u64::from(out.errors_high > 0),
                        frame_errors_low: u64::from(out.errors_low > 0),
                        block_errors: u64::from(out.block_error),
                        iterations: out.iterations as u64,
                        unconverged: u64::from(!out.converged),
                    })
                })
                .try_reduce(PointCounts::default, |a, b| Ok(a.merge(b)))?;
            Ok(PointResult {
                record: counts.record(ebn0),
                counts,
            })
        })
        .collect()
}

pub fn format_results(records: &[BerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.ebn0_db, r.ber_high, r.ber_low, r.bler, r.frames, r.mean_iter
        );
    }
    out
}

pub fn emit_results(records: &[BerRecord], path: impl AsRef<Path>) -> Result<()> {
    ensure!(!records.is_empty(), "no records to write");
    let path = path.as_ref();
    fs::write(path, format_results(records))
        .with_context(|| format!("cannot write results to {}", path.display()))
}

pub fn parse_results(text: &str) -> Result<Vec<BerRecord>> {
    let mut lines = text.lines();
    ensure!(lines.next() == Some(CSV_HEADER), "missing or wrong CSV header");
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            ensure!(f.len() == 6, "row {}: expected 6 fields", i + 1);
            let num = |j: usize| -> Result<f64> {
                f[j].parse()
                    .with_context(|| format!("row {}: field {}", i + 1, j + 1))
            };
            Ok(BerRecord {
                ebn0_db: num(0)?,
                ber_high: num(1)?,
                ber_low: num(2)?,
                bler: num(3)?,
                frames: f[4]
                    .parse()
                    .with_context(|| format!("row {}: frames", i + 1))?,
                mean_iter: num(5)?,
            })
        })
        .collect()
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<BerRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_results(&text)
}

/// Least-squares slope of `log10(rate)` against Eb/N0 over points with a
/// nonzero rate.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|&(x, r)| (x, r.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn parse_channel(s: &str) -> Result<ChannelKind> {
    Ok(match s {
        "awgn" => ChannelKind::Awgn,
        "rayleigh" => ChannelKind::Rayleigh,
        _ => bail!("unknown channel {s:?} (awgn, rayleigh)"),
    })
}

pub fn parse_pairing(s: &str) -> Result<Pairing> {
    Ok(match s {
        "adjacent" => Pairing::Adjacent,
        "offset-n" => Pairing::OffsetN,
        _ => bail!("unknown pairing {s:?} (adjacent, offset-n)"),
    })
}

pub fn parse_mode(s: &str) -> Result<Mode> {
    Ok(match s {
        "superposition" => Mode::Superposition,
        "uncoded-qpsk" => Mode::UncodedQpsk,
        _ => bail!("unknown mode {s:?} (superposition, uncoded-qpsk)"),
    })
}

pub fn parse_demap(s: &str) -> Result<DemapMethod> {
    Ok(match s {
        "exact" => DemapMethod::Exact,
        "max-log" => DemapMethod::MaxLog,
        _ => bail!("unknown demapper {s:?} (exact, max-log)"),
    })
}

pub fn parse_on_off(s: &str) -> Result<bool> {
    Ok(match s {
        "on" | "true" | "1" => true,
        "off" | "false" | "0" => false,
        _ => bail!("expected on or off, got {s:?}"),
    })
}

/// Comma-separated dB values; `inf` selects the noiseless channel.
pub fn parse_ebn0_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("bad Eb/N0 value {t:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use supercast_core::codes::{plotkin_combine, repetition_code, spc_code};

    fn toy() -> PlotkinCode {
        plotkin_combine(&spc_code(8).unwrap(), &repetition_code(8).unwrap()).unwrap()
    }

    fn quick(ebn0: Vec<f64>) -> Scenario {
        Scenario {
            ebn0_db: ebn0,
            frames: 200,
            ..Scenario::default()
        }
    }

    #[test]
    fn noiseless_points_are_error_free() {
        let recs = run_scenario(&toy(), &quick(vec![f64::INFINITY])).unwrap();
        assert_eq!(recs.len(), 1);
        let r = recs[0];
        assert_eq!((r.ber_high, r.ber_low, r.bler, r.frames), (0.0, 0.0, 0.0, 200));
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let code = toy();
        assert!(run_scenario(&code, &quick(vec![])).is_err());
        assert!(run_scenario(&code, &Scenario { frames: 0, ..quick(vec![1.0]) }).is_err());
        assert!(run_scenario(&code, &quick(vec![f64::NAN])).is_err());
        let mut s = quick(vec![1.0]);
        s.link.csi_error_var = -0.5;
        assert!(run_scenario(&code, &s).is_err());
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let recs = run_scenario(&toy(), &quick(vec![0.0, 3.0])).unwrap();
        let text = format_results(&recs);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert_eq!(parse_results(&text).unwrap(), recs);

        let one = format_results(&recs[..1]);
        assert_eq!(one.lines().count(), 2);
    }

    #[test]
    fn full_precision_floats_survive() {
        let r = BerRecord {
            ebn0_db: 1.0 / 3.0,
            ber_high: 1e-7 / 3.0,
            ber_low: 0.1 + 0.2,
            bler: 0.0,
            frames: 7,
            mean_iter: std::f64::consts::PI,
        };
        assert_eq!(parse_results(&format_results(&[r])).unwrap(), vec![r]);
    }

    #[test]
    fn emit_reports_the_path() {
        let r = run_scenario(&toy(), &quick(vec![1.0])).unwrap();
        let err = emit_results(&r, "/nonexistent-dir/x.csv").unwrap_err();
        assert!(format!("{err:#}").contains("/nonexistent-dir/x.csv"));
        assert!(emit_results(&[], "x.csv").is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64 * 5.0, 10f64.powf(-0.2 * i as f64 * 5.0))).collect();
        assert!((log_slope(&pts).unwrap() + 0.2).abs() < 1e-12);
        assert_eq!(log_slope(&[(1.0, 0.0), (2.0, 0.1)]), None);
    }

    #[test]
    fn flag_values() {
        assert_eq!(parse_ebn0_list("0, 4,8").unwrap(), vec![0.0, 4.0, 8.0]);
        assert_eq!(parse_ebn0_list("inf").unwrap(), vec![f64::INFINITY]);
        assert!(parse_ebn0_list("x").is_err());
        assert!(parse_channel("rician").is_err());
        assert_eq!(parse_pairing("offset-n").unwrap(), Pairing::OffsetN);
        assert!(parse_on_off("maybe").is_err());
    }
}
