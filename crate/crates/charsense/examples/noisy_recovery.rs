//! Matching-pursuit recovery from noisy measurements y = Ax + z across an
//! SNR sweep, for s = 1, 2, 3. The noise is circularly-symmetric complex
//! Gaussian calibrated so that SNR = ||Ax||^2 / (K sigma^2); a trial succeeds
//! when the squared error after 100 iterations is below 1e-2.
//!
//! Run with: cargo run --release --example noisy_recovery [trials]

use charsense::recovery::{run_noisy_experiment, ExperimentConfig, MatrixSpec};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("trial count"))
        .unwrap_or(200);
    let snr_db: Vec<f64> = vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
    let seed = 2024;
    let config = ExperimentConfig::noisy(
        MatrixSpec::PowerResidue { p: 47, m_ary: 46 },
        vec![1, 2, 3],
        snr_db.clone(),
        trials,
        seed,
    );
    let report = run_noisy_experiment(&config).expect("sweep runs");
    println!("power residue (47, 2115, 46), {trials} trials per cell, threshold 1e-2");
    print!("{:>8}", "SNR dB");
    for db in &snr_db {
        print!("{db:>8.0}");
    }
    println!();
    for s in [1usize, 2, 3] {
        print!("  s = {s}  ");
        for row in report.rows.iter().filter(|r| r.s == s) {
            print!("{:>7.1}%", 100.0 * row.rate);
        }
        println!();
    }
}
