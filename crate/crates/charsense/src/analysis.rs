//! Geometric quantities of a sensing matrix: coherence (exhaustive scan and a
//! shift-structured fast path), Welch bound, closed-form coherence and
//! sparsity bounds for the deterministic families, spectral norm and
//! redundancy, and condition-number statistics of random column submatrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::charseq::roots_of_unity;
use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::sensing::{build_gaussian_matrix, MatrixFamily, SensingMatrix};

/// Singular values below this are treated as zero when forming condition
/// numbers; such draws are reported separately instead of poisoning the mean.
pub const SINGULAR_FLOOR: f64 = 1e-13;

/// Summary of the geometry of one matrix.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixMetrics {
    pub family: MatrixFamily,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m_ary: u32,
    pub coherence: f64,
    /// Universal lower bound on coherence; 0 when N <= K.
    pub welch_bound: f64,
    /// Closed-form coherence for the deterministic families.
    pub coherence_closed_form: Option<f64>,
    pub spectral_norm: f64,
    /// Squared spectral norm.
    pub redundancy: f64,
    /// sqrt(N/K); the redundancy of a tight frame with these dimensions.
    pub tight_frame_floor: f64,
    pub sparsity_bound: Option<u32>,
}

impl MatrixMetrics {
    /// Computes every metric. Deterministic families use the structured
    /// coherence scan; baselines fall back to the exhaustive one.
    pub fn compute(mat: &SensingMatrix) -> MatrixMetrics {
        let (k, n) = (mat.k_rows(), mat.n_cols());
        let coherence = if mat.family().is_deterministic() {
            coherence_structured(mat).expect("deterministic family")
        } else {
            coherence_bruteforce(mat)
        };
        let spectral = spectral_norm(mat);
        MatrixMetrics {
            family: mat.family(),
            k,
            n,
            m_ary: mat.m_ary(),
            coherence,
            welch_bound: if n > k { welch_bound(k, n).unwrap() } else { 0.0 },
            coherence_closed_form: coherence_closed_form(k, mat.family()).ok(),
            spectral_norm: spectral,
            redundancy: spectral * spectral,
            tight_frame_floor: (n as f64 / k as f64).sqrt(),
            sparsity_bound: sparsity_bound(k, mat.family()).ok(),
        }
    }
}

/// Maximum |inner product| over all unordered pairs of distinct columns,
/// by exhaustive scan.
pub fn coherence_bruteforce(mat: &SensingMatrix) -> f64 {
    let k = mat.k_rows();
    let n = mat.n_cols();
    let dense = mat.dense();
    let best_sqr = (0..n.saturating_sub(1))
        .into_par_iter()
        .map(|a| {
            let ca = &dense[a * k..(a + 1) * k];
            let mut best = 0.0f64;
            for b in a + 1..n {
                let cb = &dense[b * k..(b + 1) * k];
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (x, y) in ca.iter().zip(cb.iter()) {
                    re += x.re * y.re + x.im * y.im;
                    im += x.re * y.im - x.im * y.re;
                }
                let mag = re * re + im * im;
                if mag > best {
                    best = mag;
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    best_sqr.sqrt()
}

/// Coherence of a deterministic family using the cyclic structure: the inner
/// product of columns (b1, c1) and (b2, c2) depends only on (b2 - b1 mod K,
/// c1, c2), so the scan covers O(K M^2) classes with a length-K sum each
/// instead of all column pairs.
pub fn coherence_structured(mat: &SensingMatrix) -> Result<f64> {
    let base = mat.base_sequence().ok_or(Error::FamilyMismatch {
        expected: "deterministic",
        found: mat.family().name(),
    })?;
    let symbols = base.symbols();
    let k = base.period();
    let m = base.m_ary() as u64;
    let roots = roots_of_unity(base.m_ary());
    // scaled[c][i] = (c * symbols[i]) mod M for c in 1..M.
    let scaled: Vec<Vec<u32>> = (1..base.m_ary())
        .map(|c| {
            symbols
                .iter()
                .map(|&s| ((c as u64 * s as u64) % m) as u32)
                .collect()
        })
        .collect();

    let best_sqr = (0..k)
        .into_par_iter()
        .map(|delta| {
            let mut best = 0.0f64;
            for (i1, t1) in scaled.iter().enumerate() {
                for (i2, t2) in scaled.iter().enumerate() {
                    if delta == 0 && i1 == i2 {
                        continue; // identical columns
                    }
                    let (mut re, mut im) = (0.0f64, 0.0f64);
                    for i in 0..k {
                        let e1 = t1[i] as u64;
                        let e2 = t2[(i + delta) % k] as u64;
                        let w = roots[((e2 + m - e1) % m) as usize];
                        re += w.re;
                        im += w.im;
                    }
                    let mag = re * re + im * im;
                    if mag > best {
                        best = mag;
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best_sqr.sqrt() / k as f64)
}

/// Welch lower bound sqrt((N-K) / (K(N-1))) on the coherence of a K x N
/// unit-norm frame.
pub fn welch_bound(k: usize, n: usize) -> Result<f64> {
    if k == 0 || n <= k {
        return Err(Error::RangeError(format!(
            "Welch bound needs N > K >= 1, got K = {k}, N = {n}"
        )));
    }
    Ok((((n - k) as f64) / ((k * (n - 1)) as f64)).sqrt())
}

/// Closed-form coherence of the deterministic families:
/// (sqrt(K)+2)/K for power residue, (sqrt(K+1)+3)/K for Sidelnikov.
pub fn coherence_closed_form(k: usize, family: MatrixFamily) -> Result<f64> {
    let k = k as f64;
    match family {
        MatrixFamily::PowerResidue => Ok((k.sqrt() + 2.0) / k),
        MatrixFamily::Sidelnikov => Ok(((k + 1.0).sqrt() + 3.0) / k),
        other => Err(Error::FamilyMismatch {
            expected: "deterministic",
            found: other.name(),
        }),
    }
}

/// Largest sparsity level with a guaranteed unique solution: the greatest
/// integer strictly below (K/(sqrt(K)+2) + 1)/2 for power residue, or
/// (K/(sqrt(K+1)+3) + 1)/2 for Sidelnikov.
pub fn sparsity_bound(k: usize, family: MatrixFamily) -> Result<u32> {
    let kf = k as f64;
    let threshold = match family {
        MatrixFamily::PowerResidue => 0.5 * (kf / (kf.sqrt() + 2.0) + 1.0),
        MatrixFamily::Sidelnikov => 0.5 * (kf / ((kf + 1.0).sqrt() + 3.0) + 1.0),
        other => {
            return Err(Error::FamilyMismatch {
                expected: "deterministic",
                found: other.name(),
            })
        }
    };
    let floor = threshold.floor();
    let s = if floor == threshold { floor - 1.0 } else { floor };
    Ok(s.max(0.0) as u32)
}

/// K x K Gram A A^H accumulated column by column in a fixed order.
fn row_gram(mat: &SensingMatrix) -> DMatrix<Complex64> {
    let k = mat.k_rows();
    let dense = mat.dense();
    let mut g = vec![Complex64::new(0.0, 0.0); k * k];
    for col in dense.chunks_exact(k) {
        for i in 0..k {
            let ci = col[i];
            for j in 0..=i {
                g[i * k + j] += ci * col[j].conj();
            }
        }
    }
    // Mirror the strict lower triangle.
    for i in 0..k {
        for j in i + 1..k {
            g[i * k + j] = g[j * k + i].conj();
        }
    }
    DMatrix::from_fn(k, k, |i, j| g[i * k + j])
}

/// Gram of the selected columns: entry (u, v) = <a_{idx[u]}, a_{idx[v]}>.
fn column_gram(mat: &SensingMatrix, idx: &[usize]) -> DMatrix<Complex64> {
    let k = mat.k_rows();
    let s = idx.len();
    let mut g = DMatrix::from_element(s, s, Complex64::new(0.0, 0.0));
    for u in 0..s {
        let cu = mat.col(idx[u]);
        for v in 0..=u {
            let cv = mat.col(idx[v]);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..k {
                acc += cu[i].conj() * cv[i];
            }
            g[(u, v)] = acc;
            g[(v, u)] = acc.conj();
        }
    }
    g
}

/// Largest singular value, as the square root of the top eigenvalue of the
/// K x K Gram A A^H (never the N x N one).
pub fn spectral_norm(mat: &SensingMatrix) -> f64 {
    let gram = row_gram(mat);
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
        .max(0.0)
        .sqrt()
}

/// Condition-number statistics over random s-column submatrices.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionStats {
    pub s: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// Draws whose smallest singular value fell below [`SINGULAR_FLOOR`];
    /// excluded from mean and standard deviation.
    pub infinite_count: usize,
    pub seed: u64,
}

/// For each trial draws s distinct columns (uniform, seeded per trial), forms
/// the K x s submatrix and records the ratio of its extreme singular values
/// through the s x s Gram. The Gaussian baseline draws a fresh K x s matrix
/// every trial instead of reusing one.
pub fn condition_number_stats(
    mat: &SensingMatrix,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<ConditionStats> {
    if s < 1 || s > mat.k_rows() {
        return Err(Error::RangeError(format!(
            "sparsity s = {s} outside [1, K = {}]",
            mat.k_rows()
        )));
    }
    if trials < 1 {
        return Err(Error::RangeError("trials must be >= 1".into()));
    }
    let conds: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let gram = if mat.family() == MatrixFamily::Gaussian {
                let fresh_seed = rng::derive_seed(seed, &[stream::GAUSSIAN, s as u64, t as u64]);
                let fresh = build_gaussian_matrix(mat.k_rows(), s, fresh_seed)
                    .expect("dimensions already validated");
                let idx: Vec<usize> = (0..s).collect();
                column_gram(&fresh, &idx)
            } else {
                let mut trial_rng = rng::stream_rng(seed, &[stream::COLUMNS, s as u64, t as u64]);
                let idx = rand::seq::index::sample(&mut trial_rng, mat.n_cols(), s).into_vec();
                column_gram(mat, &idx)
            };
            let eig = SymmetricEigen::new(gram);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &l in eig.eigenvalues.iter() {
                lo = lo.min(l);
                hi = hi.max(l);
            }
            let smin = lo.max(0.0).sqrt();
            let smax = hi.max(0.0).sqrt();
            if smin < SINGULAR_FLOOR {
                None
            } else {
                Some(smax / smin)
            }
        })
        .collect();

    let finite: Vec<f64> = conds.iter().flatten().copied().collect();
    let infinite_count = trials - finite.len();
    let (mean, std_dev) = if finite.is_empty() {
        (f64::INFINITY, 0.0)
    } else {
        let mean = finite.iter().sum::<f64>() / finite.len() as f64;
        let var = finite.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / finite.len() as f64;
        (mean, var.sqrt())
    };
    Ok(ConditionStats {
        s,
        trials,
        mean,
        std_dev,
        infinite_count,
        seed,
    })
}

/// Canonical CSV for a condition-number sweep, one row per sparsity level:
/// `family,K,N,M,s,trials,mean,std,infinite_count,seed`.
pub fn condition_stats_csv(
    mat: &SensingMatrix,
    sparsities: &[usize],
    trials: usize,
    seed: u64,
) -> Result<String> {
    let mut out = String::from("family,K,N,M,s,trials,mean,std,infinite_count,seed\n");
    for &s in sparsities {
        let st = condition_number_stats(mat, s, trials, seed)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            mat.family(),
            mat.k_rows(),
            mat.n_cols(),
            mat.m_ary(),
            st.s,
            st.trials,
            st.mean,
            st.std_dev,
            st.infinite_count,
            st.seed
        ));
    }
    Ok(out)
}

/// One row of the built-in reference table of spectral norms.
#[derive(Debug, Clone, Copy)]
pub struct SpectralReference {
    pub family: MatrixFamily,
    pub p: u64,
    pub m: u32,
    pub m_ary: u32,
    pub k: usize,
    pub n: usize,
    pub spectral_norm: f64,
    pub tight_frame_floor: f64,
}

/// Golden spectral norms for ten canonical parameter sets (five per family),
/// quoted to four decimals; `analyze --table1` and the acceptance suite
/// check measured values against these.
pub const SPECTRAL_REFERENCE: [SpectralReference; 10] = [
    SpectralReference { family: MatrixFamily::PowerResidue, p: 43, m: 1, m_ary: 42, k: 43, n: 1763, spectral_norm: 6.6282, tight_frame_floor: 6.4031 },
    SpectralReference { family: MatrixFamily::PowerResidue, p: 59, m: 1, m_ary: 58, k: 59, n: 3363, spectral_norm: 7.7431, tight_frame_floor: 7.5498 },
    SpectralReference { family: MatrixFamily::PowerResidue, p: 67, m: 1, m_ary: 66, k: 67, n: 4355, spectral_norm: 8.2439, tight_frame_floor: 8.0623 },
    SpectralReference { family: MatrixFamily::PowerResidue, p: 83, m: 1, m_ary: 82, k: 83, n: 6723, spectral_norm: 9.1635, tight_frame_floor: 9.0 },
    SpectralReference { family: MatrixFamily::PowerResidue, p: 97, m: 1, m_ary: 96, k: 97, n: 9215, spectral_norm: 9.8982, tight_frame_floor: 9.7468 },
    SpectralReference { family: MatrixFamily::Sidelnikov, p: 3, m: 3, m_ary: 26, k: 26, n: 650, spectral_norm: 5.0990, tight_frame_floor: 5.0 },
    SpectralReference { family: MatrixFamily::Sidelnikov, p: 7, m: 2, m_ary: 48, k: 48, n: 2256, spectral_norm: 6.9282, tight_frame_floor: 6.8557 },
    SpectralReference { family: MatrixFamily::Sidelnikov, p: 3, m: 4, m_ary: 80, k: 80, n: 6320, spectral_norm: 8.9443, tight_frame_floor: 8.8882 },
    SpectralReference { family: MatrixFamily::Sidelnikov, p: 5, m: 3, m_ary: 124, k: 124, n: 15252, spectral_norm: 11.1355, tight_frame_floor: 11.0905 },
    SpectralReference { family: MatrixFamily::Sidelnikov, p: 13, m: 2, m_ary: 168, k: 168, n: 28056, spectral_norm: 12.9615, tight_frame_floor: 12.9228 },
];

impl SpectralReference {
    /// Builds the matrix this row describes.
    pub fn build(&self) -> Result<SensingMatrix> {
        match self.family {
            MatrixFamily::PowerResidue => {
                crate::sensing::build_power_residue_matrix(self.p, self.m_ary)
            }
            MatrixFamily::Sidelnikov => {
                crate::sensing::build_sidelnikov_matrix(self.p, self.m, self.m_ary)
            }
            _ => unreachable!("reference table only lists deterministic families"),
        }
    }
}
