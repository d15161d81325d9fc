//! K x N sensing matrices built from character sequences, plus the Gaussian
//! and partial Fourier baselines.
//!
//! Deterministic families are stored as an integer exponent table mod M with
//! a 1/sqrt(K) scale; the dense complex form is derived on demand. Column n
//! decomposes as n = (c-1)K + b: a cyclic shift b and a constant multiplier c
//! applied to a single base sequence, which is all the storage the matrix
//! fundamentally needs.

use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand::seq::index::sample as sample_indices;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::charseq::{
    modulate, power_residue_sequence, roots_of_unity, sidelnikov_sequence, SymbolSequence,
};
use crate::error::{Error, Result};
use crate::galois::FieldContext;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixFamily {
    #[serde(rename = "power-residue")]
    PowerResidue,
    #[serde(rename = "sidelnikov")]
    Sidelnikov,
    #[serde(rename = "gaussian")]
    Gaussian,
    #[serde(rename = "partial-fourier")]
    PartialFourier,
}

impl MatrixFamily {
    pub fn is_deterministic(self) -> bool {
        matches!(self, MatrixFamily::PowerResidue | MatrixFamily::Sidelnikov)
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixFamily::PowerResidue => "power-residue",
            MatrixFamily::Sidelnikov => "sidelnikov",
            MatrixFamily::Gaussian => "gaussian",
            MatrixFamily::PartialFourier => "partial-fourier",
        }
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Decomposition of a column index into shift and multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnIndex {
    pub n: usize,
    /// Cyclic shift, `n mod K`.
    pub b: usize,
    /// Constant multiplier, `floor(n / K) + 1`.
    pub c: u32,
}

impl ColumnIndex {
    pub fn from_column(n: usize, k: usize) -> Self {
        ColumnIndex {
            n,
            b: n % k,
            c: (n / k) as u32 + 1,
        }
    }

    pub fn to_column(self, k: usize) -> usize {
        (self.c as usize - 1) * k + self.b
    }
}

/// Construction parameters retained for exports and reproducibility.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub alpha: Option<u64>,
    pub modulus_poly: Option<Vec<u64>>,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct SensingMatrix {
    family: MatrixFamily,
    k_rows: usize,
    n_cols: usize,
    /// Alphabet size M; 0 for the random baselines.
    m_ary: u32,
    /// 1/sqrt(K).
    scale: f64,
    /// Column-major K x N exponent table mod M, deterministic families only.
    exponents: Option<Vec<u32>>,
    base: Option<SymbolSequence>,
    dense: OnceLock<Vec<Complex64>>,
    provenance: Provenance,
}

impl SensingMatrix {
    pub fn family(&self) -> MatrixFamily {
        self.family
    }

    pub fn k_rows(&self) -> usize {
        self.k_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn m_ary(&self) -> u32 {
        self.m_ary
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn base_sequence(&self) -> Option<&SymbolSequence> {
        self.base.as_ref()
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    /// Dense entries in column-major order, materialized on first use.
    pub fn dense(&self) -> &[Complex64] {
        self.dense.get_or_init(|| {
            let exps = self
                .exponents
                .as_ref()
                .expect("baseline matrices are materialized at construction");
            let roots = roots_of_unity(self.m_ary);
            exps.iter().map(|&e| roots[e as usize] * self.scale).collect()
        })
    }

    /// Column n as a slice of the dense storage.
    pub fn col(&self, n: usize) -> &[Complex64] {
        &self.dense()[n * self.k_rows..(n + 1) * self.k_rows]
    }

    /// Rebuilds column n from the base sequence alone (shift, multiply,
    /// modulate, scale). Equals the dense column exactly.
    pub fn column(&self, n: usize) -> Result<Vec<Complex64>> {
        let base = self.base.as_ref().ok_or(Error::FamilyMismatch {
            expected: "deterministic",
            found: self.family.name(),
        })?;
        if n >= self.n_cols {
            return Err(Error::RangeError(format!(
                "column {n} outside [0, {})",
                self.n_cols
            )));
        }
        let idx = ColumnIndex::from_column(n, self.k_rows);
        let mut v = modulate(base, idx.c, idx.b)?;
        for x in &mut v {
            *x *= self.scale;
        }
        Ok(v)
    }
}

fn deterministic_matrix(base: SymbolSequence, family: MatrixFamily) -> SensingMatrix {
    let k = base.period();
    let m_ary = base.m_ary();
    let n = (m_ary as usize - 1) * k;
    let symbols = base.symbols();
    let mut exponents = Vec::with_capacity(k * n);
    for n_idx in 0..n {
        let ColumnIndex { b, c, .. } = ColumnIndex::from_column(n_idx, k);
        for k_idx in 0..k {
            let sym = symbols[(k_idx + b) % k] as u64;
            exponents.push(((c as u64 * sym) % m_ary as u64) as u32);
        }
    }
    let field = base.field();
    let provenance = Provenance {
        p: Some(field.p()),
        m: Some(field.m()),
        alpha: Some(field.alpha()),
        modulus_poly: Some(field.modulus_poly().to_vec()),
        seed: None,
    };
    SensingMatrix {
        family,
        k_rows: k,
        n_cols: n,
        m_ary,
        scale: 1.0 / (k as f64).sqrt(),
        exponents: Some(exponents),
        base: Some(base),
        dense: OnceLock::new(),
        provenance,
    }
}

/// K x N matrix from a power residue sequence: K = p, N = (M-1)K.
pub fn build_power_residue_matrix(p: u64, m_ary: u32) -> Result<SensingMatrix> {
    let field = Arc::new(FieldContext::prime_field(p)?);
    power_residue_matrix_from_field(&field, m_ary)
}

/// Same construction over a caller-supplied prime field (any primitive root).
pub fn power_residue_matrix_from_field(
    field: &Arc<FieldContext>,
    m_ary: u32,
) -> Result<SensingMatrix> {
    let base = power_residue_sequence(field, m_ary)?;
    Ok(deterministic_matrix(base, MatrixFamily::PowerResidue))
}

/// K x N matrix from a Sidelnikov sequence: K = p^m - 1, N = (M-1)K.
pub fn build_sidelnikov_matrix(p: u64, m: u32, m_ary: u32) -> Result<SensingMatrix> {
    let field = Arc::new(FieldContext::extension_field(p, m)?);
    sidelnikov_matrix_from_field(&field, m_ary)
}

/// Same construction over a caller-supplied field.
pub fn sidelnikov_matrix_from_field(
    field: &Arc<FieldContext>,
    m_ary: u32,
) -> Result<SensingMatrix> {
    let base = sidelnikov_sequence(field, m_ary)?;
    Ok(deterministic_matrix(base, MatrixFamily::Sidelnikov))
}

/// Real Gaussian baseline: i.i.d. N(0, 1/K) entries, columns normalized to
/// unit l2 norm afterwards.
pub fn build_gaussian_matrix(k: usize, num_cols: usize, seed: u64) -> Result<SensingMatrix> {
    if k == 0 || num_cols == 0 {
        return Err(Error::RangeError("matrix dimensions must be >= 1".into()));
    }
    let mut rng: ChaCha8Rng = rng::stream_rng(seed, &[rng::stream::GAUSSIAN]);
    let normal = Normal::new(0.0, (1.0 / k as f64).sqrt()).expect("valid std dev");
    let mut dense = Vec::with_capacity(k * num_cols);
    for _ in 0..num_cols {
        let start = dense.len();
        for _ in 0..k {
            dense.push(Complex64::new(normal.sample(&mut rng), 0.0));
        }
        let norm = dense[start..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut dense[start..] {
            *z /= norm;
        }
    }
    let cell = OnceLock::new();
    cell.set(dense).expect("fresh cell");
    Ok(SensingMatrix {
        family: MatrixFamily::Gaussian,
        k_rows: k,
        n_cols: num_cols,
        m_ary: 0,
        scale: 1.0 / (k as f64).sqrt(),
        exponents: None,
        base: None,
        dense: cell,
        provenance: Provenance {
            seed: Some(seed),
            ..Provenance::default()
        },
    })
}

/// Partial Fourier baseline: K distinct rows of the N x N DFT, drawn
/// uniformly without replacement, scaled by 1/sqrt(K). Columns come out
/// unit-norm automatically.
pub fn build_partial_fourier_matrix(k: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    if k == 0 || k > n {
        return Err(Error::RangeError(format!(
            "need 1 <= K <= N, got K = {k}, N = {n}"
        )));
    }
    let mut rng: ChaCha8Rng = rng::stream_rng(seed, &[rng::stream::MATRIX]);
    let rows: Vec<usize> = sample_indices(&mut rng, n, k).into_vec();
    let scale = 1.0 / (k as f64).sqrt();
    // Conjugated roots: entry (k, n) = scale * exp(-j 2 pi row_k n / N).
    let roots: Vec<Complex64> = roots_of_unity(n as u32).iter().map(|z| z.conj()).collect();
    let mut dense = Vec::with_capacity(k * n);
    for col in 0..n {
        for &row in &rows {
            let e = (row * col) % n;
            dense.push(roots[e] * scale);
        }
    }
    let cell = OnceLock::new();
    cell.set(dense).expect("fresh cell");
    Ok(SensingMatrix {
        family: MatrixFamily::PartialFourier,
        k_rows: k,
        n_cols: n,
        m_ary: 0,
        scale,
        exponents: None,
        base: None,
        dense: cell,
        provenance: Provenance {
            seed: Some(seed),
            ..Provenance::default()
        },
    })
}

/// Header record preceding the table in the export format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportHeader {
    pub family: MatrixFamily,
    pub p: Option<u64>,
    pub m: Option<u32>,
    #[serde(rename = "M")]
    pub m_ary: u32,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: Option<u64>,
    pub modulus_poly: Option<Vec<u64>>,
    pub seed: Option<u64>,
}

impl ExportHeader {
    pub fn of(mat: &SensingMatrix) -> Self {
        ExportHeader {
            family: mat.family,
            p: mat.provenance.p,
            m: mat.provenance.m,
            m_ary: mat.m_ary,
            k: mat.k_rows,
            n: mat.n_cols,
            alpha: mat.provenance.alpha,
            modulus_poly: mat.provenance.modulus_poly.clone(),
            seed: mat.provenance.seed,
        }
    }
}

/// Writes the header line followed by K rows: integer exponents for
/// deterministic families, 17-significant-digit re/im pairs for baselines.
pub fn export_matrix(mat: &SensingMatrix, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &ExportHeader::of(mat))?;
    writeln!(w)?;
    let (k, n) = (mat.k_rows, mat.n_cols);
    if let Some(exps) = &mat.exponents {
        for row in 0..k {
            let mut line = String::with_capacity(n * 3);
            for col in 0..n {
                if col > 0 {
                    line.push(',');
                }
                line.push_str(&exps[col * k + row].to_string());
            }
            writeln!(w, "{line}")?;
        }
    } else {
        let dense = mat.dense();
        for row in 0..k {
            let mut line = String::new();
            for col in 0..n {
                if col > 0 {
                    line.push(',');
                }
                let z = dense[col * k + row];
                line.push_str(&format!("{:.16e},{:.16e}", z.re, z.im));
            }
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix export. Deterministic families are rebuilt from the header
/// parameters and must match the stored exponent table exactly; baselines are
/// taken from the stored entries.
pub fn import_matrix(path: &Path) -> Result<SensingMatrix> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header_line = lines.next().ok_or_else(|| Error::ParseError {
        line: 1,
        msg: "missing header".into(),
    })??;
    let header: ExportHeader =
        serde_json::from_str(&header_line).map_err(|e| Error::ParseError {
            line: 1,
            msg: format!("bad header: {e}"),
        })?;

    if header.family.is_deterministic() {
        let mat = rebuild_from_header(&header)?;
        let exps = mat.exponents.as_ref().expect("deterministic");
        let (k, n) = (mat.k_rows, mat.n_cols);
        for row in 0..k {
            let line_no = row + 2;
            let line = lines.next().ok_or_else(|| Error::ParseError {
                line: line_no,
                msg: "missing table row".into(),
            })??;
            let mut count = 0;
            for (col, tok) in line.split(',').enumerate() {
                let v: u32 = tok.trim().parse().map_err(|e| Error::ParseError {
                    line: line_no,
                    msg: format!("bad exponent: {e}"),
                })?;
                if col >= n {
                    return Err(Error::ParseError {
                        line: line_no,
                        msg: "too many columns".into(),
                    });
                }
                if exps[col * k + row] != v {
                    return Err(Error::VerifyMismatch(format!(
                        "exponent ({row}, {col}) is {v}, rebuilt table has {}",
                        exps[col * k + row]
                    )));
                }
                count += 1;
            }
            if count != n {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: format!("expected {n} columns, found {count}"),
                });
            }
        }
        Ok(mat)
    } else {
        let (k, n) = (header.k, header.n);
        let mut dense = vec![Complex64::new(0.0, 0.0); k * n];
        for row in 0..k {
            let line_no = row + 2;
            let line = lines.next().ok_or_else(|| Error::ParseError {
                line: line_no,
                msg: "missing table row".into(),
            })??;
            let toks: Vec<&str> = line.split(',').collect();
            if toks.len() != 2 * n {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: format!("expected {} values, found {}", 2 * n, toks.len()),
                });
            }
            for col in 0..n {
                let re: f64 = toks[2 * col].trim().parse().map_err(|e| Error::ParseError {
                    line: line_no,
                    msg: format!("bad value: {e}"),
                })?;
                let im: f64 =
                    toks[2 * col + 1]
                        .trim()
                        .parse()
                        .map_err(|e| Error::ParseError {
                            line: line_no,
                            msg: format!("bad value: {e}"),
                        })?;
                dense[col * k + row] = Complex64::new(re, im);
            }
        }
        let cell = OnceLock::new();
        cell.set(dense).expect("fresh cell");
        Ok(SensingMatrix {
            family: header.family,
            k_rows: k,
            n_cols: n,
            m_ary: 0,
            scale: 1.0 / (k as f64).sqrt(),
            exponents: None,
            base: None,
            dense: cell,
            provenance: Provenance {
                seed: header.seed,
                ..Provenance::default()
            },
        })
    }
}

/// Rebuilds a deterministic matrix from an export header, checking that the
/// canonical construction reproduces the recorded alpha and modulus.
pub fn rebuild_from_header(header: &ExportHeader) -> Result<SensingMatrix> {
    let p = header.p.ok_or_else(|| Error::ParseError {
        line: 1,
        msg: "deterministic header needs p".into(),
    })?;
    let m = header.m.unwrap_or(1);
    let mat = match header.family {
        MatrixFamily::PowerResidue => build_power_residue_matrix(p, header.m_ary)?,
        MatrixFamily::Sidelnikov => build_sidelnikov_matrix(p, m, header.m_ary)?,
        other => {
            return Err(Error::FamilyMismatch {
                expected: "deterministic",
                found: other.name(),
            })
        }
    };
    if let Some(alpha) = header.alpha {
        if mat.provenance.alpha != Some(alpha) {
            return Err(Error::VerifyMismatch(format!(
                "header alpha {alpha} differs from canonical {:?}",
                mat.provenance.alpha
            )));
        }
    }
    if let Some(poly) = &header.modulus_poly {
        if mat.provenance.modulus_poly.as_deref() != Some(poly.as_slice()) {
            return Err(Error::VerifyMismatch("modulus polynomial differs".into()));
        }
    }
    if mat.k_rows != header.k || mat.n_cols != header.n {
        return Err(Error::VerifyMismatch(format!(
            "dimensions {}x{} differ from header {}x{}",
            mat.k_rows, mat.n_cols, header.k, header.n
        )));
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::build_field;
    use proptest::prelude::*;

    #[test]
    fn column_index_round_trip() {
        for k in [7usize, 47, 48] {
            for n in 0..6 * k {
                let idx = ColumnIndex::from_column(n, k);
                assert!(idx.b < k);
                assert!(idx.c >= 1);
                assert_eq!(idx.to_column(k), n);
            }
        }
    }

    proptest! {
        #[test]
        fn column_index_round_trip_prop(k in 1usize..500, n in 0usize..100_000) {
            let idx = ColumnIndex::from_column(n, k);
            prop_assert_eq!(idx.to_column(k), n);
            prop_assert!(idx.b < k);
        }
    }

    #[test]
    fn power_residue_dimensions() {
        let mat = build_power_residue_matrix(47, 46).unwrap();
        assert_eq!((mat.k_rows(), mat.n_cols()), (47, 2115));
        let mat = build_power_residue_matrix(7, 3).unwrap();
        assert_eq!((mat.k_rows(), mat.n_cols()), (7, 14));
    }

    #[test]
    fn sidelnikov_dimensions() {
        let mat = build_sidelnikov_matrix(7, 2, 48).unwrap();
        assert_eq!((mat.k_rows(), mat.n_cols()), (48, 2256));
        let mat = build_sidelnikov_matrix(3, 3, 26).unwrap();
        assert_eq!((mat.k_rows(), mat.n_cols()), (26, 650));
    }

    #[test]
    fn entries_with_zero_symbol_hit_scale_exactly() {
        let mat = build_power_residue_matrix(7, 3).unwrap();
        let seq = mat.base_sequence().unwrap();
        let dense = mat.dense();
        // Column 0 has b=0, c=1: anywhere the base symbol is 0 the entry is
        // exactly 1/sqrt(K).
        for (row, &s) in seq.symbols().iter().enumerate() {
            if s == 0 {
                assert_eq!(dense[row], Complex64::new(mat.scale(), 0.0));
            }
        }
    }

    #[test]
    fn second_block_uses_doubled_multiplier() {
        // Column n = K has (b, c) = (0, 2).
        let mat = build_power_residue_matrix(7, 3).unwrap();
        let k = mat.k_rows();
        let idx = ColumnIndex::from_column(k, k);
        assert_eq!((idx.b, idx.c), (0, 2));
        let seq = mat.base_sequence().unwrap();
        let roots = roots_of_unity(3);
        for (row, &s) in seq.symbols().iter().enumerate() {
            let expect = roots[(2 * s % 3) as usize] * mat.scale();
            assert_eq!(mat.col(k)[row], expect);
        }
    }

    #[test]
    fn single_base_sequence_reconstructs_every_column() {
        for mat in [
            build_power_residue_matrix(7, 3).unwrap(),
            build_power_residue_matrix(7, 6).unwrap(),
            build_sidelnikov_matrix(3, 2, 4).unwrap(),
            build_sidelnikov_matrix(3, 2, 8).unwrap(),
        ] {
            for n in 0..mat.n_cols() {
                let rebuilt = mat.column(n).unwrap();
                assert_eq!(rebuilt.as_slice(), mat.col(n), "column {n}");
            }
        }
    }

    #[test]
    fn sidelnikov_small_case_matches_hand_sequence() {
        let mat = build_sidelnikov_matrix(3, 2, 4).unwrap();
        assert_eq!((mat.k_rows(), mat.n_cols()), (8, 24));
        assert_eq!(
            mat.base_sequence().unwrap().symbols(),
            &[0, 3, 3, 1, 0, 2, 1, 2]
        );
        // Column 0: exponents are the symbols themselves.
        let exps = mat.exponents().unwrap();
        assert_eq!(&exps[0..8], &[0, 3, 3, 1, 0, 2, 1, 2]);
    }

    #[test]
    fn unit_entry_magnitude_and_column_norms() {
        let mats = [
            build_power_residue_matrix(47, 46).unwrap(),
            build_sidelnikov_matrix(3, 2, 8).unwrap(),
            build_gaussian_matrix(48, 100, 7).unwrap(),
            build_partial_fourier_matrix(48, 200, 7).unwrap(),
        ];
        for mat in &mats {
            let k = mat.k_rows();
            let dense = mat.dense();
            if mat.family().is_deterministic() || mat.family() == MatrixFamily::PartialFourier {
                for z in dense {
                    assert!((z.norm() - mat.scale()).abs() < 1e-15);
                }
            }
            for n in 0..mat.n_cols() {
                let norm: f64 = dense[n * k..(n + 1) * k]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!((norm - 1.0).abs() < 1e-12, "{} column {n}", mat.family());
            }
        }
    }

    #[test]
    fn gaussian_rebuild_is_identical() {
        let a = build_gaussian_matrix(48, 64, 123).unwrap();
        let b = build_gaussian_matrix(48, 64, 123).unwrap();
        assert_eq!(a.dense(), b.dense());
        let c = build_gaussian_matrix(48, 64, 124).unwrap();
        assert_ne!(a.dense(), c.dense());
    }

    #[test]
    fn partial_fourier_needs_k_at_most_n() {
        assert!(build_partial_fourier_matrix(10, 8, 0).is_err());
        let square = build_partial_fourier_matrix(8, 8, 0).unwrap();
        // Square case is unitary up to scale: columns orthonormal.
        let dense = square.dense();
        for a in 0..8 {
            for b in 0..8 {
                let dot: Complex64 = (0..8)
                    .map(|r| dense[a * 8 + r].conj() * dense[b * 8 + r])
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_rebuild_identical_exponents() {
        let a = build_sidelnikov_matrix(7, 2, 48).unwrap();
        let b = build_sidelnikov_matrix(7, 2, 48).unwrap();
        assert_eq!(a.exponents().unwrap(), b.exponents().unwrap());
    }

    #[test]
    fn alpha_choice_permutes_columns_only() {
        let canonical = Arc::new(build_field(7, 1).unwrap());
        assert_eq!(canonical.alpha(), 3);
        let other = Arc::new(FieldContext::prime_field_with_root(7, 5).unwrap());
        let a = power_residue_matrix_from_field(&canonical, 3).unwrap();
        let b = power_residue_matrix_from_field(&other, 3).unwrap();
        let k = a.k_rows();
        let col_vec = |mat: &SensingMatrix, n: usize| {
            let exps = mat.exponents().unwrap();
            exps[n * k..(n + 1) * k].to_vec()
        };
        let mut cols_a: Vec<Vec<u32>> = (0..a.n_cols()).map(|n| col_vec(&a, n)).collect();
        let mut cols_b: Vec<Vec<u32>> = (0..b.n_cols()).map(|n| col_vec(&b, n)).collect();
        cols_a.sort();
        cols_b.sort();
        assert_eq!(cols_a, cols_b);
        // Permuting columns leaves the scalar geometry unchanged.
        let norm_a = crate::analysis::spectral_norm(&a);
        let norm_b = crate::analysis::spectral_norm(&b);
        assert!((norm_a - norm_b).abs() <= 1e-12);
        let mu_a = crate::analysis::coherence_bruteforce(&a);
        let mu_b = crate::analysis::coherence_bruteforce(&b);
        assert!((mu_a - mu_b).abs() <= 1e-12);
    }

    #[test]
    fn export_import_round_trip_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mat.csv");
        let mat = build_sidelnikov_matrix(3, 2, 4).unwrap();
        export_matrix(&mat, &path).unwrap();
        let back = import_matrix(&path).unwrap();
        assert_eq!(back.exponents().unwrap(), mat.exponents().unwrap());
        assert_eq!(back.dense(), mat.dense());
    }

    #[test]
    fn export_import_round_trip_baseline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gauss.csv");
        let mat = build_gaussian_matrix(12, 30, 99).unwrap();
        export_matrix(&mat, &path).unwrap();
        let back = import_matrix(&path).unwrap();
        assert_eq!(back.dense(), mat.dense());
    }

    #[test]
    fn import_rejects_tampered_exponent() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mat.csv");
        let mat = build_power_residue_matrix(7, 3).unwrap();
        export_matrix(&mat, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // Flip the first exponent of the second row.
        let mut row: Vec<String> = lines[2].split(',').map(String::from).collect();
        let old: u32 = row[0].parse().unwrap();
        row[0] = ((old + 1) % 3).to_string();
        lines[2] = row.join(",");
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();
        assert!(matches!(
            import_matrix(&path),
            Err(Error::VerifyMismatch(_))
        ));
    }
}
