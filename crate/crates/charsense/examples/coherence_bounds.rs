//! Coherence of the deterministic matrices against the closed forms
//! (sqrt(K)+2)/K (power residue) and (sqrt(K+1)+3)/K (Sidelnikov), and the
//! Welch lower bound. The structured scan exploits the cyclic column
//! structure; for the smaller cases the exhaustive pair scan cross-checks it.
//!
//! Run with: cargo run --release --example coherence_bounds

use charsense::analysis::{
    coherence_bruteforce, coherence_closed_form, coherence_structured, sparsity_bound, welch_bound,
};
use charsense::sensing::{build_power_residue_matrix, build_sidelnikov_matrix, SensingMatrix};

fn main() {
    let cases: Vec<(String, SensingMatrix, bool)> = vec![
        (label(7, None, 6), build_power_residue_matrix(7, 6).unwrap(), true),
        (label(23, None, 22), build_power_residue_matrix(23, 22).unwrap(), true),
        (label(47, None, 46), build_power_residue_matrix(47, 46).unwrap(), true),
        (label(3, Some(2), 8), build_sidelnikov_matrix(3, 2, 8).unwrap(), true),
        (label(3, Some(3), 26), build_sidelnikov_matrix(3, 3, 26).unwrap(), true),
        (label(7, Some(2), 48), build_sidelnikov_matrix(7, 2, 48).unwrap(), false),
    ];
    println!(
        "{:<26} | {:>10} {:>11} {:>10} | {:>9} | s*",
        "matrix", "welch", "measured", "closed", "scan diff"
    );
    for (name, mat, crosscheck) in cases {
        let fast = coherence_structured(&mat).expect("deterministic");
        let diff = if crosscheck {
            (coherence_bruteforce(&mat) - fast).abs()
        } else {
            f64::NAN
        };
        let wb = welch_bound(mat.k_rows(), mat.n_cols()).unwrap();
        let cf = coherence_closed_form(mat.k_rows(), mat.family()).unwrap();
        let s = sparsity_bound(mat.k_rows(), mat.family()).unwrap();
        assert!(wb <= fast + 1e-12 && fast <= cf + 1e-9);
        println!(
            "{name:<26} | {wb:>10.6} {fast:>11.6} {cf:>10.6} | {diff:>9.2e} | {s}",
        );
    }
    println!("every measured coherence lies between the Welch bound and the closed form");
}

fn label(p: u64, m: Option<u32>, m_ary: u32) -> String {
    match m {
        Some(m) => format!("sidelnikov p={p} m={m} M={m_ary}"),
        None => format!("power residue p={p} M={m_ary}"),
    }
}
