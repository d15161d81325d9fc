//! Builds the two deterministic matrix families at desk scale and shows how
//! every column is a constant multiple of a cyclic shift of one base
//! sequence: column n = (c-1)K + b applies multiplier c and shift b, so the
//! whole K x N matrix needs only the length-K symbol vector as storage.
//!
//! Run with: cargo run --release --example build_matrix

use charsense::sensing::{build_power_residue_matrix, build_sidelnikov_matrix, ColumnIndex};

fn main() {
    let power = build_power_residue_matrix(7, 3).expect("build");
    let prov = power.provenance();
    println!(
        "power residue: K={} N={} M={} over GF({}) with alpha={}",
        power.k_rows(),
        power.n_cols(),
        power.m_ary(),
        prov.p.unwrap(),
        prov.alpha.unwrap()
    );
    println!(
        "  base sequence: {:?}",
        power.base_sequence().unwrap().symbols()
    );
    for n in [0usize, 7, 10] {
        let idx = ColumnIndex::from_column(n, power.k_rows());
        let col = power.column(n).expect("column rebuilds");
        let pretty: Vec<String> = col
            .iter()
            .map(|z| format!("{:+.3}{:+.3}j", z.re, z.im))
            .collect();
        println!("  column {n} = (shift b={}, multiplier c={}):", idx.b, idx.c);
        println!("    [{}]", pretty.join(", "));
        assert_eq!(col.as_slice(), power.col(n), "reconstruction is exact");
    }

    let sidel = build_sidelnikov_matrix(3, 2, 4).expect("build");
    let prov = sidel.provenance();
    println!(
        "\nsidelnikov: K={} N={} M={} over GF({}^{}) modulus {:?} alpha={}",
        sidel.k_rows(),
        sidel.n_cols(),
        sidel.m_ary(),
        prov.p.unwrap(),
        prov.m.unwrap(),
        prov.modulus_poly.as_ref().unwrap(),
        prov.alpha.unwrap()
    );
    println!(
        "  base sequence: {:?}",
        sidel.base_sequence().unwrap().symbols()
    );
    let mut rebuilt_all = true;
    for n in 0..sidel.n_cols() {
        rebuilt_all &= sidel.column(n).unwrap().as_slice() == sidel.col(n);
    }
    println!(
        "  all {} columns rebuild exactly from the base sequence: {}",
        sidel.n_cols(),
        rebuilt_all
    );
    assert!(rebuilt_all);
}
