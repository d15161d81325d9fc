//! End-to-end checks of the charsense binary: subcommand surface, file
//! formats, exit codes, and manifest emission.

use std::path::Path;
use std::process::{Command, Output};

fn charsense(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charsense"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn matrix_build_reports_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &["matrix", "build", "--family", "power-residue", "-p", "47", "-M", "46"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("K=47 N=2115 M=46"), "{text}");
    assert!(text.contains("alpha=5"), "{text}");
}

#[test]
fn matrix_export_verify_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &[
            "matrix", "export", "--family", "sidelnikov", "-p", "3", "-m", "2", "-M", "8",
            "--out", "mat.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let verify = charsense(&["matrix", "verify", "--file", "mat.csv"], dir.path());
    assert!(verify.status.success());
    assert!(stdout(&verify).starts_with("ok:"));

    // Flip one exponent; verification must fail with exit code 3.
    let path = dir.path().join("mat.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut row: Vec<String> = lines[1].split(',').map(String::from).collect();
    let old: u32 = row[0].parse().unwrap();
    row[0] = ((old + 1) % 8).to_string();
    lines[1] = row.join(",");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let tampered = charsense(&["matrix", "verify", "--file", "mat.csv"], dir.path());
    assert_eq!(tampered.status.code(), Some(3));
}

#[test]
fn seq_dumps_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &["seq", "--family", "power-residue", "-p", "7", "-M", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let symbols: Vec<u32> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(symbols, vec![0, 0, 2, 1, 1, 2, 0]);
}

#[test]
fn analyze_emits_metrics_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &["analyze", "--family", "power-residue", "-p", "7", "-M", "6"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["K"], 7);
    assert_eq!(v["N"], 35);
    let coherence = v["coherence"].as_f64().unwrap();
    let closed = v["coherence_closed_form"].as_f64().unwrap();
    assert!(coherence <= closed + 1e-9);
    assert_eq!(v["sparsity_bound"], 1);
}

#[test]
fn analyze_orthonormal_square_fourier() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &[
            "analyze", "--family", "partial-fourier", "-K", "8", "-N", "8",
            "--matrix-seed", "1",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(v["coherence"].as_f64().unwrap() < 1e-12);
    assert!((v["spectral_norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn cond_stats_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(
        &[
            "cond-stats", "--family", "sidelnikov", "-p", "3", "-m", "2", "-M", "8",
            "--s", "1..3", "--trials", "50", "--seed", "9", "--out", "stats.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,K,N,M,s,trials,mean,std,infinite_count,seed"
    );
    assert_eq!(lines.clone().count(), 3);
    assert!(lines.next().unwrap().starts_with("sidelnikov,8,56,8,1,50,"));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("stats.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["master_seed"], 9);
    assert_eq!(manifest["outputs"][0]["path"], "stats.csv");
    assert_eq!(
        manifest["outputs"][0]["sha256"].as_str().unwrap().len(),
        64
    );
}

#[test]
fn recover_noiseless_csv_schema_and_rerun_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "recover", "--family", "power-residue", "-p", "13", "-M", "12",
        "--s", "1,2", "--trials", "25", "--seed", "11", "--out", "rates.csv",
    ];
    let out = charsense(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    let mut lines = first.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,K,N,M,algorithm,s,snr_db,trials,successes,rate,threshold,master_seed"
    );
    assert!(lines.next().unwrap().starts_with("power-residue,13,143,12,mp,1,,25,"));

    // Re-running with a different thread count reproduces the bytes.
    let rerun = charsense(
        &[
            "--threads", "2",
            "recover", "--family", "power-residue", "-p", "13", "-M", "12",
            "--s", "1,2", "--trials", "25", "--seed", "11", "--out", "rates2.csv",
        ],
        dir.path(),
    );
    assert!(rerun.status.success());
    let second = std::fs::read_to_string(dir.path().join("rates2.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn recover_noisy_with_config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.conf"),
        "family=power-residue\np=13\nalphabet=12\ns=1\ntrials=999\nsnr-db=20,inf\nseed=3\n",
    )
    .unwrap();
    let out = charsense(
        &[
            "recover", "--config", "exp.conf", "--trials", "20", "--out", "noisy.csv",
            "--per-trial",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("noisy.csv")).unwrap();
    // Flag overrides the file's trial count; both SNR cells appear.
    assert!(csv.contains(",mp,1,20,20,"), "{csv}");
    assert!(csv.contains(",mp,1,inf,20,"), "{csv}");
    assert!(dir.path().join("noisy.trials.json").exists());
    let records: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("noisy.trials.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(records.as_array().unwrap().len(), 40);
}

#[test]
fn recover_rejects_bad_config_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "family power-residue\n").unwrap();
    let out = charsense(&["recover", "--config", "bad.conf"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown subcommand.
    let out = charsense(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Missing required family parameters.
    let out = charsense(&["matrix", "build", "--family", "power-residue"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // Non-prime p.
    let out = charsense(
        &["matrix", "build", "--family", "power-residue", "-p", "15", "-M", "7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_table1_passes() {
    // The full reference table takes a while; keep it in one spot and let the
    // acceptance suite own the strict-tolerance version.
    let dir = tempfile::tempdir().unwrap();
    let out = charsense(&["analyze", "--table1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.matches(",PASS").count(), 10, "{text}");
}
