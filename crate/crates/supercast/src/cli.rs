//! Command-line front end. A flat `key = value` config file supplies defaults
//! for any flag (keys are flag names without the leading dashes); flags given
//! on the command line win.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use supercast_core::link::LinkConfig;

use crate::codebook;
use crate::harness::{self, Scenario};

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "supercast", version, about = "Monte-Carlo BER sweeps for two-level superposition coding")]
pub struct Args {
    /// awgn or rayleigh
    #[arg(long)]
    pub channel: Option<String>,
    /// on or off
    #[arg(long)]
    pub alamouti: Option<String>,
    /// adjacent or offset-n
    #[arg(long)]
    pub pairing: Option<String>,
    /// Comma-separated Eb/N0 points in dB (`inf` for noiseless)
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0: Option<String>,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub csi_error_var: Option<f64>,
    /// Slots per fading block (default: one block per frame)
    #[arg(long)]
    pub block_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub code_dir: Option<PathBuf>,
    /// superposition or uncoded-qpsk
    #[arg(long)]
    pub mode: Option<String>,
    /// exact or max-log
    #[arg(long)]
    pub demap: Option<String>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the decoder's Tanner graph in Graphviz dot format
    #[arg(long)]
    pub emit_tanner: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Everything a run needs, after merging file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub scenario: Scenario,
    pub out: Option<PathBuf>,
    pub code_dir: PathBuf,
    pub emit_tanner: Option<PathBuf>,
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let key = k.trim().replace('_', "-");
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            bail!("config line {}: duplicate key {key:?}", i + 1);
        }
    }
    Ok(map)
}

fn apply_config(args: &mut Args, map: BTreeMap<String, String>) -> Result<()> {
    fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T>
    where
        T::Err: std::error::Error + Send + Sync + 'static,
    {
        v.parse().with_context(|| format!("config key {k}: bad value {v:?}"))
    }
    for (k, v) in map {
        match k.as_str() {
            "channel" => { args.channel.get_or_insert(v); }
            "alamouti" => { args.alamouti.get_or_insert(v); }
            "pairing" => { args.pairing.get_or_insert(v); }
            "ebn0" => { args.ebn0.get_or_insert(v); }
            "mode" => { args.mode.get_or_insert(v); }
            "demap" => { args.demap.get_or_insert(v); }
            "frames" => { args.frames.get_or_insert(num(&k, &v)?); }
            "max-iter" => { args.max_iter.get_or_insert(num(&k, &v)?); }
            "csi-error-var" => { args.csi_error_var.get_or_insert(num(&k, &v)?); }
            "block-len" => { args.block_len.get_or_insert(num(&k, &v)?); }
            "seed" => { args.seed.get_or_insert(num(&k, &v)?); }
            "threads" => { args.threads.get_or_insert(num(&k, &v)?); }
            "out" => { args.out.get_or_insert(v.into()); }
            "code-dir" => { args.code_dir.get_or_insert(v.into()); }
            "emit-tanner" => { args.emit_tanner.get_or_insert(v.into()); }
            _ => bail!("unknown config key {k:?}"),
        }
    }
    Ok(())
}

impl Args {
    /// Merges the config file (if any) under the flags and validates the result.
    pub fn plan(mut self) -> Result<RunPlan> {
        if let Some(path) = self.config.take() {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let map = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
            apply_config(&mut self, map)?;
        }
        let d = Scenario::default();
        let dl = LinkConfig::default();
        let link = LinkConfig {
            mode: self.mode.as_deref().map(harness::parse_mode).transpose()?.unwrap_or(dl.mode),
            channel: self
                .channel
                .as_deref()
                .map(harness::parse_channel)
                .transpose()?
                .unwrap_or(dl.channel),
            alamouti: self
                .alamouti
                .as_deref()
                .map(harness::parse_on_off)
                .transpose()?
                .unwrap_or(dl.alamouti),
            pairing: self
                .pairing
                .as_deref()
                .map(harness::parse_pairing)
                .transpose()?
                .unwrap_or(dl.pairing),
            csi_error_var: self.csi_error_var.unwrap_or(dl.csi_error_var),
            block_len: self.block_len.or(dl.block_len),
            max_iter: self.max_iter.unwrap_or(dl.max_iter),
            demap: self.demap.as_deref().map(harness::parse_demap).transpose()?.unwrap_or(dl.demap),
        };
        let scenario = Scenario {
            link,
            ebn0_db: self
                .ebn0
                .as_deref()
                .map(harness::parse_ebn0_list)
                .transpose()?
                .unwrap_or(d.ebn0_db),
            frames: self.frames.unwrap_or(d.frames),
            master_seed: self.seed.unwrap_or(d.master_seed),
            threads: self.threads.or(d.threads),
        };
        scenario.validate()?;
        Ok(RunPlan {
            scenario,
            out: self.out,
            code_dir: self.code_dir.unwrap_or_else(|| PathBuf::from("codes")),
            emit_tanner: self.emit_tanner,
        })
    }
}

/// Runs a plan, writing results to `plan.out` or stdout.
pub fn execute(plan: &RunPlan) -> Result<()> {
    let code = codebook::load_composite(&plan.code_dir)?;
    if let Some(path) = &plan.emit_tanner {
        let graph = supercast_core::decoder::build_tanner(code.inner().parity_check())?;
        write_file(path, &graph.to_dot())?;
    }
    let records = harness::run_scenario(&code, &plan.scenario)?;
    match &plan.out {
        Some(path) => harness::emit_results(&records, path)?,
        None => print!("{}", harness::format_results(&records)),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use supercast_core::link::{ChannelKind, Mode};
    use supercast_core::stbc::Pairing;

    #[test]
    fn config_parsing() {
        let m = parse_config("# sweep\nchannel = rayleigh\nmax_iter=20  # fewer\n\n").unwrap();
        assert_eq!(m["channel"], "rayleigh");
        assert_eq!(m["max-iter"], "20");
        assert!(parse_config("channel rayleigh").is_err());
        assert!(parse_config("seed=1\nseed=2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "channel = rayleigh\nframes = 10\nebn0 = 1,2\npairing = adjacent\n").unwrap();
        let args = Args::parse_from([
            "supercast",
            "--config",
            cfg.to_str().unwrap(),
            "--frames",
            "30",
            "--mode",
            "uncoded-qpsk",
        ]);
        let plan = args.plan().unwrap();
        assert_eq!(plan.scenario.frames, 30);
        assert_eq!(plan.scenario.ebn0_db, vec![1.0, 2.0]);
        assert_eq!(plan.scenario.link.channel, ChannelKind::Rayleigh);
        assert_eq!(plan.scenario.link.pairing, Pairing::Adjacent);
        assert_eq!(plan.scenario.link.mode, Mode::UncodedQpsk);
    }

    #[test]
    fn bad_values_fail_validation() {
        for argv in [
            &["supercast", "--channel", "rician"][..],
            &["supercast", "--frames", "0"],
            &["supercast", "--alamouti", "on", "--block-len", "3"],
            &["supercast", "--ebn0", ""],
        ] {
            assert!(Args::parse_from(argv).plan().is_err(), "{argv:?}");
        }
    }

    #[test]
    fn negative_ebn0_is_a_value_not_a_flag() {
        let plan = Args::parse_from(["supercast", "--ebn0", "-2,0"]).plan().unwrap();
        assert_eq!(plan.scenario.ebn0_db, vec![-2.0, 0.0]);
    }
}
