//! Reproduces the built-in reference table of spectral norms: ten canonical
//! parameter sets, five per deterministic family. For each matrix the largest
//! singular value is computed from the K x K Gram and compared against the
//! golden value (tolerance 5e-4), and sqrt(N/K) against the quoted tight-frame
//! floor (tolerance 5e-5).
//!
//! Run with: cargo run --release --example spectral_norms

use charsense::analysis::{spectral_norm, SPECTRAL_REFERENCE};

fn main() {
    println!(
        "{:<14} {:>4} {:>6} {:>4} | {:>9} {:>9} {:>8} | {:>8} {:>8} | status",
        "family", "K", "N", "M", "measured", "golden", "delta", "sqrt(N/K)", "floor"
    );
    let mut failures = 0;
    for row in &SPECTRAL_REFERENCE {
        let mat = row.build().expect("reference parameters build");
        let measured = spectral_norm(&mat);
        let delta = (measured - row.spectral_norm).abs();
        let floor = (row.n as f64 / row.k as f64).sqrt();
        let ok = delta <= 5e-4 && (floor - row.tight_frame_floor).abs() <= 5e-5;
        failures += !ok as u32;
        println!(
            "{:<14} {:>4} {:>6} {:>4} | {:>9.4} {:>9.4} {:>8.1e} | {:>8.4} {:>8.4} | {}",
            row.family.name(),
            row.k,
            row.n,
            row.m_ary,
            measured,
            row.spectral_norm,
            delta,
            floor,
            row.tight_frame_floor,
            if ok { "ok" } else { "MISMATCH" }
        );
    }
    if failures > 0 {
        println!("{failures} row(s) off the reference values");
        std::process::exit(3);
    }
    println!("all ten spectral norms match the reference table");
}
