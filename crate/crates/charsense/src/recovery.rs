//! Matching-pursuit sparse recovery and the seeded Monte-Carlo experiment
//! harness for noiseless and noisy measurements.
//!
//! Every trial derives its generators from the master seed and the trial
//! coordinates, never from shared state, so sweeps are reproducible and
//! independent of the parallelism degree. Signal and matrix streams exclude
//! the SNR from their derivation: an infinite-SNR noisy sweep replays the
//! noiseless sweep exactly.

use std::sync::Arc;

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{self, stream};
use crate::sensing::{
    build_gaussian_matrix, build_partial_fourier_matrix, build_power_residue_matrix,
    build_sidelnikov_matrix, MatrixFamily, SensingMatrix,
};

/// Early-stop residual norm for the greedy loops; small enough that stopping
/// never changes a success decision at the experiment thresholds.
pub const RESIDUAL_TOL: f64 = 1e-7;

/// An s-sparse signal with unit-magnitude entries of random sign.
#[derive(Debug, Clone)]
pub struct SparseSignal {
    pub length: usize,
    /// Strictly increasing support positions.
    pub support: Vec<usize>,
    /// +1 or -1 per support position.
    pub values: Vec<f64>,
}

impl SparseSignal {
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }
}

/// Uniform support without replacement, independent +/-1 values.
pub fn generate_sparse_signal(n: usize, s: usize, seed: u64) -> Result<SparseSignal> {
    if s > n {
        return Err(Error::RangeError(format!("sparsity {s} exceeds length {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = rand::seq::index::sample(&mut rng, n, s).into_vec();
    support.sort_unstable();
    let values = (0..s)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect();
    Ok(SparseSignal {
        length: n,
        support,
        values,
    })
}

/// y = A x.
pub fn measure(mat: &SensingMatrix, x: &SparseSignal) -> Vec<Complex64> {
    assert_eq!(x.length, mat.n_cols(), "signal length must match columns");
    let k = mat.k_rows();
    let mut y = vec![Complex64::new(0.0, 0.0); k];
    for (&n, &v) in x.support.iter().zip(&x.values) {
        for (yi, &ai) in y.iter_mut().zip(mat.col(n)) {
            *yi += ai * v;
        }
    }
    y
}

/// Per-component noise variance for a target SNR: the SNR definition
/// ||Ax||^2 / (K sigma^2) solved for sigma^2. Infinite SNR yields 0.
pub fn awgn_variance(y: &[Complex64], snr_db: f64) -> Result<f64> {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return Ok(0.0);
    }
    let energy: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let snr = 10f64.powf(snr_db / 10.0);
    Ok(energy / (y.len() as f64 * snr))
}

/// Adds circularly-symmetric complex Gaussian noise calibrated to the SNR;
/// the variance splits equally between real and imaginary parts.
pub fn add_awgn(y: &[Complex64], snr_db: f64, seed: u64) -> Result<Vec<Complex64>> {
    let variance = awgn_variance(y, snr_db)?;
    if variance == 0.0 {
        return Ok(y.to_vec());
    }
    let normal = Normal::new(0.0, (variance / 2.0).sqrt()).expect("positive std dev");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(y.iter()
        .map(|&z| z + Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect())
}

/// Greedy estimate before it is compared against a ground truth.
#[derive(Debug, Clone)]
pub struct GreedyEstimate {
    pub estimate: Vec<Complex64>,
    pub iterations_used: usize,
    /// l2 norms of the residual, starting with ||y||; non-increasing.
    pub residual_norm_history: Vec<f64>,
}

impl GreedyEstimate {
    /// Scores the estimate against the true signal: squared error with
    /// complex magnitudes, success iff it is below the threshold.
    pub fn judged(self, truth: &SparseSignal, threshold: f64) -> RecoveryResult {
        let mut err = 0.0;
        let mut truth_dense = vec![0.0f64; truth.length];
        for (&n, &v) in truth.support.iter().zip(&truth.values) {
            truth_dense[n] = v;
        }
        for (est, &t) in self.estimate.iter().zip(&truth_dense) {
            err += (est - t).norm_sqr();
        }
        RecoveryResult {
            estimate: self.estimate,
            iterations_used: self.iterations_used,
            residual_norm_history: self.residual_norm_history,
            squared_error: err,
            success: err < threshold,
        }
    }
}

/// A judged recovery.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub estimate: Vec<Complex64>,
    pub iterations_used: usize,
    pub residual_norm_history: Vec<f64>,
    pub squared_error: f64,
    pub success: bool,
}

#[inline]
fn conj_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b.iter()) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex64::new(re, im)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Classic matching pursuit: repeatedly subtracts the projection onto the
/// column best correlated with the residual. Coefficients stay complex; ties
/// in the argmax go to the smallest column index. Stops after
/// `max_iterations` or once the residual norm drops below `residual_tol`.
pub fn matching_pursuit(
    mat: &SensingMatrix,
    y: &[Complex64],
    max_iterations: usize,
    residual_tol: f64,
) -> GreedyEstimate {
    let k = mat.k_rows();
    let n = mat.n_cols();
    assert_eq!(y.len(), k, "measurement length must match rows");
    let dense = mat.dense();
    let mut residual = y.to_vec();
    let mut estimate = vec![Complex64::new(0.0, 0.0); n];
    let mut history = Vec::with_capacity(max_iterations + 1);
    history.push(norm(&residual));
    let mut iterations = 0;
    while iterations < max_iterations {
        if *history.last().unwrap() < residual_tol {
            break;
        }
        let mut best_n = 0usize;
        let mut best_mag = f64::NEG_INFINITY;
        let mut best_coef = Complex64::new(0.0, 0.0);
        for (col_idx, col) in dense.chunks_exact(k).enumerate() {
            let coef = conj_dot(col, &residual);
            let mag = coef.norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best_n = col_idx;
                best_coef = coef;
            }
        }
        estimate[best_n] += best_coef;
        let col = &dense[best_n * k..(best_n + 1) * k];
        for (ri, &ai) in residual.iter_mut().zip(col) {
            *ri -= best_coef * ai;
        }
        iterations += 1;
        history.push(norm(&residual));
    }
    GreedyEstimate {
        estimate,
        iterations_used: iterations,
        residual_norm_history: history,
    }
}

/// Orthogonal matching pursuit: like MP but re-solves the least squares
/// problem on the active set each iteration, so the residual stays orthogonal
/// to every selected column.
pub fn orthogonal_matching_pursuit(
    mat: &SensingMatrix,
    y: &[Complex64],
    max_iterations: usize,
    residual_tol: f64,
) -> GreedyEstimate {
    use nalgebra::{DMatrix, DVector};

    let k = mat.k_rows();
    let n = mat.n_cols();
    assert_eq!(y.len(), k, "measurement length must match rows");
    let dense = mat.dense();
    let mut residual = y.to_vec();
    let mut estimate = vec![Complex64::new(0.0, 0.0); n];
    let mut history = Vec::with_capacity(max_iterations + 1);
    history.push(norm(&residual));
    let mut active: Vec<usize> = Vec::new();
    let mut iterations = 0;
    while iterations < max_iterations && active.len() < k {
        if *history.last().unwrap() < residual_tol {
            break;
        }
        let mut best_n = 0usize;
        let mut best_mag = f64::NEG_INFINITY;
        for (col_idx, col) in dense.chunks_exact(k).enumerate() {
            let mag = conj_dot(col, &residual).norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best_n = col_idx;
            }
        }
        if !active.contains(&best_n) {
            active.push(best_n);
        }
        // Least squares on the active set via the normal equations.
        let s = active.len();
        let mut gram = DMatrix::from_element(s, s, Complex64::new(0.0, 0.0));
        let mut rhs = DVector::from_element(s, Complex64::new(0.0, 0.0));
        for (u, &nu) in active.iter().enumerate() {
            let cu = &dense[nu * k..(nu + 1) * k];
            rhs[u] = conj_dot(cu, y);
            for (v, &nv) in active.iter().enumerate().take(u + 1) {
                let cv = &dense[nv * k..(nv + 1) * k];
                let g = conj_dot(cu, cv);
                gram[(u, v)] = g;
                gram[(v, u)] = g.conj();
            }
        }
        let Some(chol) = gram.cholesky() else {
            break; // dependent columns; keep the last consistent estimate
        };
        let coefs = chol.solve(&rhs);
        for z in &mut estimate {
            *z = Complex64::new(0.0, 0.0);
        }
        for (u, &nu) in active.iter().enumerate() {
            estimate[nu] = coefs[u];
        }
        residual.copy_from_slice(y);
        for (u, &nu) in active.iter().enumerate() {
            let col = &dense[nu * k..(nu + 1) * k];
            for (ri, &ai) in residual.iter_mut().zip(col) {
                *ri -= coefs[u] * ai;
            }
        }
        iterations += 1;
        history.push(norm(&residual));
    }
    GreedyEstimate {
        estimate,
        iterations_used: iterations,
        residual_norm_history: history,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    #[serde(rename = "mp")]
    MatchingPursuit,
    #[serde(rename = "omp")]
    OrthogonalMatchingPursuit,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MatchingPursuit => "mp",
            Algorithm::OrthogonalMatchingPursuit => "omp",
        }
    }
}

/// Which matrix an experiment measures with, and whether a fresh instance is
/// drawn for every trial (the partial Fourier baseline does by default).
#[derive(Debug, Clone, Serialize)]
pub enum MatrixSpec {
    PowerResidue { p: u64, m_ary: u32 },
    Sidelnikov { p: u64, m: u32, m_ary: u32 },
    Gaussian { k: usize, n: usize, regenerate: bool },
    PartialFourier { k: usize, n: usize, regenerate: bool },
}

impl MatrixSpec {
    pub fn family(&self) -> MatrixFamily {
        match self {
            MatrixSpec::PowerResidue { .. } => MatrixFamily::PowerResidue,
            MatrixSpec::Sidelnikov { .. } => MatrixFamily::Sidelnikov,
            MatrixSpec::Gaussian { .. } => MatrixFamily::Gaussian,
            MatrixSpec::PartialFourier { .. } => MatrixFamily::PartialFourier,
        }
    }

    pub fn regenerates_per_trial(&self) -> bool {
        match *self {
            MatrixSpec::Gaussian { regenerate, .. } => regenerate,
            MatrixSpec::PartialFourier { regenerate, .. } => regenerate,
            _ => false,
        }
    }

    /// Builds the matrix; the seed only matters for the random baselines.
    pub fn build(&self, seed: u64) -> Result<SensingMatrix> {
        match *self {
            MatrixSpec::PowerResidue { p, m_ary } => build_power_residue_matrix(p, m_ary),
            MatrixSpec::Sidelnikov { p, m, m_ary } => build_sidelnikov_matrix(p, m, m_ary),
            MatrixSpec::Gaussian { k, n, .. } => build_gaussian_matrix(k, n, seed),
            MatrixSpec::PartialFourier { k, n, .. } => build_partial_fourier_matrix(k, n, seed),
        }
    }
}

/// A full sweep definition.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub matrix: MatrixSpec,
    pub sparsities: Vec<usize>,
    pub trials: usize,
    pub max_iterations: usize,
    pub success_threshold: f64,
    /// Noisy sweeps only; infinite entries replay the noiseless path.
    pub snr_db: Vec<f64>,
    pub master_seed: u64,
    /// Disables the early residual stop so every trial runs the full
    /// iteration budget.
    pub strict_iterations: bool,
    pub algorithm: Algorithm,
    /// Keep per-trial squared errors in the report.
    pub record_trials: bool,
}

impl ExperimentConfig {
    /// Noiseless defaults: 100 iterations, success threshold 1e-4.
    pub fn noiseless(
        matrix: MatrixSpec,
        sparsities: Vec<usize>,
        trials: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentConfig {
            matrix,
            sparsities,
            trials,
            max_iterations: 100,
            success_threshold: 1e-4,
            snr_db: Vec::new(),
            master_seed,
            strict_iterations: false,
            algorithm: Algorithm::MatchingPursuit,
            record_trials: false,
        }
    }

    /// Noisy defaults: 100 iterations, success threshold 1e-2.
    pub fn noisy(
        matrix: MatrixSpec,
        sparsities: Vec<usize>,
        snr_db: Vec<f64>,
        trials: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentConfig {
            success_threshold: 1e-2,
            snr_db,
            ..ExperimentConfig::noiseless(matrix, sparsities, trials, master_seed)
        }
    }
}

/// Aggregated outcome of one (s, snr) cell.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: MatrixFamily,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m_ary: u32,
    pub algorithm: Algorithm,
    pub s: usize,
    pub snr_db: Option<f64>,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub threshold: f64,
    pub master_seed: u64,
}

/// One trial's outcome, kept when `record_trials` is set.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub s: usize,
    pub snr_db: Option<f64>,
    pub trial: usize,
    pub squared_error: f64,
    pub iterations_used: usize,
    pub success: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<SweepRow>,
    pub trial_records: Option<Vec<TrialRecord>>,
}

impl ExperimentReport {
    /// Canonical CSV:
    /// `family,K,N,M,algorithm,s,snr_db,trials,successes,rate,threshold,master_seed`.
    /// The snr_db field is empty for noiseless rows and `inf` at the
    /// infinite-SNR sentinel.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("family,K,N,M,algorithm,s,snr_db,trials,successes,rate,threshold,master_seed\n");
        for r in &self.rows {
            let snr = match r.snr_db {
                None => String::new(),
                Some(db) if db.is_infinite() => "inf".to_string(),
                Some(db) => format!("{db}"),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.family,
                r.k,
                r.n,
                r.m_ary,
                r.algorithm.name(),
                r.s,
                snr,
                r.trials,
                r.successes,
                r.rate,
                r.threshold,
                r.master_seed
            ));
        }
        out
    }
}

/// Success rates per sparsity level on exact measurements.
pub fn run_noiseless_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_sweep(config, &[None])
}

/// Success rates per (sparsity, SNR) cell on noisy measurements.
pub fn run_noisy_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.snr_db.is_empty() {
        return Err(Error::RangeError(
            "noisy experiment needs at least one SNR".into(),
        ));
    }
    let snrs: Vec<Option<f64>> = config.snr_db.iter().map(|&db| Some(db)).collect();
    run_sweep(config, &snrs)
}

fn run_sweep(config: &ExperimentConfig, snrs: &[Option<f64>]) -> Result<ExperimentReport> {
    if config.trials < 1 {
        return Err(Error::RangeError("trials must be >= 1".into()));
    }
    if !(config.success_threshold > 0.0) {
        return Err(Error::RangeError("success threshold must be > 0".into()));
    }
    let fixed: Option<Arc<SensingMatrix>> = if config.matrix.regenerates_per_trial() {
        None
    } else {
        let seed = rng::derive_seed(config.master_seed, &[stream::MATRIX]);
        Some(Arc::new(config.matrix.build(seed)?))
    };
    let mut rows = Vec::new();
    let mut trial_records = config.record_trials.then(Vec::new);
    for &s in &config.sparsities {
        for &snr in snrs {
            let outcomes: Result<Vec<TrialRecord>> = (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(config, fixed.as_ref(), s, snr, t))
                .collect();
            let outcomes = outcomes?;
            let successes = outcomes.iter().filter(|r| r.success).count();
            let (k, n, m_ary, family) = match &fixed {
                Some(m) => (m.k_rows(), m.n_cols(), m.m_ary(), m.family()),
                None => match config.matrix {
                    MatrixSpec::Gaussian { k, n, .. } => (k, n, 0, config.matrix.family()),
                    MatrixSpec::PartialFourier { k, n, .. } => (k, n, 0, config.matrix.family()),
                    _ => unreachable!("deterministic matrices are always fixed"),
                },
            };
            rows.push(SweepRow {
                family,
                k,
                n,
                m_ary,
                algorithm: config.algorithm,
                s,
                snr_db: snr,
                trials: config.trials,
                successes,
                rate: successes as f64 / config.trials as f64,
                threshold: config.success_threshold,
                master_seed: config.master_seed,
            });
            if let Some(records) = &mut trial_records {
                records.extend(outcomes);
            }
        }
    }
    Ok(ExperimentReport {
        rows,
        trial_records,
    })
}

fn run_trial(
    config: &ExperimentConfig,
    fixed: Option<&Arc<SensingMatrix>>,
    s: usize,
    snr: Option<f64>,
    trial: usize,
) -> Result<TrialRecord> {
    let master = config.master_seed;
    let mat: Arc<SensingMatrix> = match fixed {
        Some(m) => Arc::clone(m),
        None => {
            let seed = rng::derive_seed(master, &[stream::MATRIX, s as u64, trial as u64]);
            Arc::new(config.matrix.build(seed)?)
        }
    };
    let x = generate_sparse_signal(
        mat.n_cols(),
        s,
        rng::derive_seed(master, &[stream::SIGNAL, s as u64, trial as u64]),
    )?;
    let mut y = measure(&mat, &x);
    if let Some(db) = snr {
        if db.is_finite() {
            let noise_seed =
                rng::derive_seed(master, &[stream::NOISE, s as u64, db.to_bits(), trial as u64]);
            y = add_awgn(&y, db, noise_seed)?;
        }
    }
    let tol = if config.strict_iterations {
        0.0
    } else {
        RESIDUAL_TOL
    };
    let est = match config.algorithm {
        Algorithm::MatchingPursuit => matching_pursuit(&mat, &y, config.max_iterations, tol),
        Algorithm::OrthogonalMatchingPursuit => {
            orthogonal_matching_pursuit(&mat, &y, config.max_iterations, tol)
        }
    };
    let judged = est.judged(&x, config.success_threshold);
    Ok(TrialRecord {
        s,
        snr_db: snr,
        trial,
        squared_error: judged.squared_error,
        iterations_used: judged.iterations_used,
        success: judged.success,
    })
}
