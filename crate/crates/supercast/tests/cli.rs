use std::path::PathBuf;
use std::process::Command;

use supercast::codebook::{self, LDPC_20_7_6_FILE};
use supercast::harness::{self, Scenario};
use supercast_core::link::{ChannelKind, LinkConfig};
use supercast_core::GOLDEN_LDPC_SEED;

fn code_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../codes")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supercast"))
}

#[test]
fn golden_file_matches_the_seeded_search() {
    let shipped = supercast::alist::read(code_dir().join(LDPC_20_7_6_FILE)).unwrap();
    let searched = codebook::composite_from_seed(GOLDEN_LDPC_SEED).unwrap();
    assert_eq!(&shipped, searched.c2().parity_check());
    assert_eq!(codebook::load_composite(code_dir()).unwrap(), searched);
}

#[test]
fn worker_count_does_not_change_results() {
    let code = codebook::load_composite(code_dir()).unwrap();
    let mut s = Scenario {
        link: LinkConfig {
            channel: ChannelKind::Rayleigh,
            alamouti: true,
            csi_error_var: 0.01,
            ..LinkConfig::default()
        },
        ebn0_db: vec![5.0, 10.0],
        frames: 1500,
        master_seed: 99,
        threads: Some(1),
    };
    let one = harness::format_results(&harness::run_scenario(&code, &s).unwrap());
    s.threads = Some(3);
    let three = harness::format_results(&harness::run_scenario(&code, &s).unwrap());
    assert_eq!(one, three);
    s.master_seed = 100;
    assert_ne!(one, harness::format_results(&harness::run_scenario(&code, &s).unwrap()));
}

#[test]
fn cli_writes_csv_and_tanner_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let dot = dir.path().join("g.dot");
    let status = bin()
        .args(["--ebn0", "2,inf", "--frames", "50", "--seed", "4"])
        .arg("--code-dir")
        .arg(code_dir())
        .arg("--out")
        .arg(&out)
        .arg("--emit-tanner")
        .arg(&dot)
        .status()
        .unwrap();
    assert!(status.success());
    let recs = harness::read_results(&out).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!((recs[1].ber_high, recs[1].ber_low, recs[1].bler), (0.0, 0.0, 0.0));
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("graph"));
}

#[test]
fn cli_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "channel = rayleigh\nalamouti = on\nebn0 = 0,5,10\nframes = 10\ncode-dir = {}\n",
            code_dir().display()
        ),
    )
    .unwrap();
    let output = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["--ebn0", "3"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let recs = harness::parse_results(&String::from_utf8(output.stdout).unwrap()).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!((recs[0].ebn0_db, recs[0].frames), (3.0, 10));
}

#[test]
fn cli_rejects_bad_input_with_a_diagnostic() {
    for args in [
        vec!["--frames", "0"],
        vec!["--channel", "rician"],
        vec!["--pairing", "diagonal"],
        vec!["--code-dir", "/nonexistent"],
    ] {
        let output = bin().args(&args).arg("--ebn0").arg("1").output().unwrap();
        assert!(!output.status.success(), "{args:?}");
        assert!(!output.stderr.is_empty(), "{args:?}");
    }
}
