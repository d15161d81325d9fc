//! Matrix file export and verification: a JSON header line followed by the
//! integer exponent table (deterministic families) or 17-significant-digit
//! re/im pairs (baselines). Deterministic imports re-derive the table from
//! the header and must match it exactly; tampering is detected.
//!
//! Run with: cargo run --release --example export_roundtrip

use charsense::error::Error;
use charsense::sensing::{
    build_partial_fourier_matrix, build_sidelnikov_matrix, export_matrix, import_matrix,
};

fn main() {
    let dir = std::env::temp_dir().join("charsense_export_demo");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let mat = build_sidelnikov_matrix(3, 2, 8).expect("build");
    let path = dir.join("sidelnikov_8x56.csv");
    export_matrix(&mat, &path).expect("export");
    let size = std::fs::metadata(&path).expect("written").len();
    println!("exported {} ({size} bytes)", path.display());

    let back = import_matrix(&path).expect("import passes");
    assert_eq!(back.exponents(), mat.exponents());
    assert_eq!(back.dense(), mat.dense());
    println!("import round-trips exactly (exponents and dense entries)");

    // Corrupt one exponent and watch the verification fail.
    let text = std::fs::read_to_string(&path).expect("read back");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut row: Vec<String> = lines[1].split(',').map(String::from).collect();
    let old: u32 = row[3].parse().unwrap();
    row[3] = ((old + 1) % mat.m_ary()).to_string();
    lines[1] = row.join(",");
    let tampered = dir.join("tampered.csv");
    std::fs::write(&tampered, lines.join("\n") + "\n").expect("write");
    match import_matrix(&tampered) {
        Err(Error::VerifyMismatch(msg)) => println!("tampered file rejected: {msg}"),
        other => panic!("tampering not detected: {other:?}"),
    }

    // Baselines round-trip through 17-significant-digit decimals.
    let fourier = build_partial_fourier_matrix(12, 64, 5).expect("build");
    let fpath = dir.join("fourier_12x64.csv");
    export_matrix(&fourier, &fpath).expect("export");
    let fback = import_matrix(&fpath).expect("import");
    assert_eq!(fback.dense(), fourier.dense());
    println!("partial Fourier baseline round-trips bit-exactly");
}
