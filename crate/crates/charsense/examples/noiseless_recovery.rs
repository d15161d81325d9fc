//! Matching-pursuit success rates on noiseless measurements, swept over the
//! sparsity level for a power residue matrix, a Sidelnikov matrix, and the
//! per-trial partial Fourier baseline. A trial succeeds when the squared
//! error of the 100-iteration MP estimate drops below 1e-4.
//!
//! The defaults use desk-scale trial counts; pass a trial count as the first
//! argument to change it (e.g. 2000 for the full experiment).
//!
//! Run with: cargo run --release --example noiseless_recovery [trials]

use charsense::recovery::{run_noiseless_experiment, ExperimentConfig, MatrixSpec};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("trial count"))
        .unwrap_or(400);
    let seed = 2024;
    let sweeps = [
        (
            "power residue (47, 2115, 46)",
            MatrixSpec::PowerResidue { p: 47, m_ary: 46 },
        ),
        (
            "sidelnikov (48, 2256, 48)",
            MatrixSpec::Sidelnikov {
                p: 7,
                m: 2,
                m_ary: 48,
            },
        ),
        (
            "partial fourier 48 x 2256, fresh per trial",
            MatrixSpec::PartialFourier {
                k: 48,
                n: 2256,
                regenerate: true,
            },
        ),
    ];
    for (label, spec) in sweeps {
        let config = ExperimentConfig::noiseless(spec, (1..=6).collect(), trials, seed);
        let report = run_noiseless_experiment(&config).expect("sweep runs");
        println!("{label}: {trials} trials per s, threshold 1e-4");
        for row in &report.rows {
            println!(
                "  s = {}: {:>5}/{:<5} recovered ({:.1}%)",
                row.s,
                row.successes,
                row.trials,
                100.0 * row.rate
            );
        }
    }
}
