//! Condition-number statistics of random column submatrices: the ratio of
//! extreme singular values of K x s submatrices, sampled over seeded trials.
//! Compares the two deterministic matrices against a Gaussian baseline that
//! draws a fresh K x s matrix (unit-norm columns) on every trial.
//!
//! Run with: cargo run --release --example condition_numbers [trials]

use charsense::analysis::condition_number_stats;
use charsense::sensing::{
    build_gaussian_matrix, build_power_residue_matrix, build_sidelnikov_matrix,
};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("trial count"))
        .unwrap_or(1000);
    let seed = 7;
    let power = build_power_residue_matrix(47, 46).expect("build");
    let sidel = build_sidelnikov_matrix(7, 2, 48).expect("build");
    // Template for the per-trial Gaussian draws; only K and the seed matter.
    let gauss = build_gaussian_matrix(48, 48, seed).expect("build");

    println!("mean (std) of condition numbers, {trials} trials per cell");
    println!(
        "{:>4} | {:>22} | {:>22} | {:>22}",
        "s", "power residue 47x2115", "sidelnikov 48x2256", "gaussian 48xs fresh"
    );
    for s in [2usize, 5, 10, 15, 20] {
        let a = condition_number_stats(&power, s, trials, seed).expect("stats");
        let b = condition_number_stats(&sidel, s, trials, seed).expect("stats");
        let g = condition_number_stats(&gauss, s, trials, seed).expect("stats");
        println!(
            "{:>4} | {:>13.4} ({:.3}) | {:>13.4} ({:.3}) | {:>13.4} ({:.3})",
            s, a.mean, a.std_dev, b.mean, b.std_dev, g.mean, g.std_dev
        );
    }
}
