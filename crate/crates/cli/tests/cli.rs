use std::path::PathBuf;
use std::process::{Command, Output};

fn scfdma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scfdma")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scfdma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn caf_theory_csv() {
    let out = scfdma(&["caf-theory", "--tau", "510:514:1", "--beta", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "beta_norm,tau_samples,re,im,magnitude");
    let peak: Vec<f64> = lines.nth(2).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(peak[1], 512.0);
    assert!((peak[4] - 0.0125).abs() < 1e-6, "{}", peak[4]);
}

#[test]
fn generate_then_detect_file() {
    let iq = scratch("frame.cf32");
    let iq_arg = iq.to_str().unwrap();
    assert!(scfdma(&["generate", "--out", iq_arg, "--duration", "0.004"]).status.success());
    assert!(iq.with_extension("cf32.meta").exists());
    let out = scfdma(&["detect", "--input", iq_arg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("decision=H1_present"), "{text}");
    assert!(text.contains("u_s=30720"), "{text}");
}

#[test]
fn sweep_writes_csv() {
    let cfg = scratch("sweep.cfg");
    std::fs::write(&cfg, "channel = awgn\nobservation_s = 0.004\n").unwrap();
    let csv = scratch("sweep.csv");
    let out = scfdma(&[
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "4",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
        "sweep",
        "--axis",
        "snr",
        "--values",
        "-10,10",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().last().unwrap().starts_with("10,1,"), "{text}");
}

#[test]
fn configuration_errors_exit_with_two() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "warp_factor = 9\n").unwrap();
    let out = scfdma(&["--config", cfg.to_str().unwrap(), "caf-theory"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warp_factor"));

    let out = scfdma(&["sweep", "--axis", "velocity", "--values", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_record_exits_with_three() {
    let iq = scratch("zeros.cf32");
    std::fs::write(&iq, vec![0u8; 8 * 4000]).unwrap();
    std::fs::write(iq.with_extension("cf32.meta"), "sample_rate_hz = 7680000\n").unwrap();
    let out = scfdma(&["detect", "--input", iq.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
