//! Acceptance suite: eight criteria, one test each, every test printing a
//! single pass/fail line (run with `--nocapture` to see them on success).
//!
//! The recovery and condition-number sweeps are executed twice, under worker
//! pools of 1 and 3 threads; the first run feeds the rate assertions and the
//! pair feeds the byte-identity criterion. Set CHARSENSE_SMOKE=1 to shrink
//! criterion 5 to 500 trials with 3-point-wider rate tolerances.

use std::sync::LazyLock;
use std::time::Instant;

use charsense::analysis::{
    coherence_bruteforce, coherence_closed_form, coherence_structured, condition_stats_csv,
    sparsity_bound, spectral_norm, SPECTRAL_REFERENCE,
};
use charsense::charseq::WeilOracle;
use charsense::error::Error;
use charsense::galois::{build_field, is_prime};
use charsense::recovery::{
    run_noiseless_experiment, run_noisy_experiment, ExperimentConfig, ExperimentReport, MatrixSpec,
};
use charsense::sensing::{
    build_gaussian_matrix, build_power_residue_matrix, build_sidelnikov_matrix, MatrixFamily,
    SensingMatrix,
};

const MASTER_SEED: u64 = 7;
const SNR_GRID_DB: [f64; 7] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];

fn smoke() -> bool {
    std::env::var("CHARSENSE_SMOKE").map_or(false, |v| v == "1")
}

fn recovery_trials() -> usize {
    if smoke() {
        500
    } else {
        2000
    }
}

fn rate_slack() -> f64 {
    if smoke() {
        0.03
    } else {
        0.0
    }
}

fn report_line(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn run_in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("pool builds")
        .install(job)
}

/// One experiment executed under two different worker pools.
struct DualRun {
    report: ExperimentReport,
    csv_single: String,
    csv_multi: String,
}

fn dual_run(config: &ExperimentConfig, noisy: bool) -> DualRun {
    let exec = || {
        if noisy {
            run_noisy_experiment(config).expect("sweep runs")
        } else {
            run_noiseless_experiment(config).expect("sweep runs")
        }
    };
    let report = run_in_pool(1, exec);
    let csv_single = report.to_csv();
    let csv_multi = run_in_pool(3, exec).to_csv();
    DualRun {
        report,
        csv_single,
        csv_multi,
    }
}

static C5_POWER: LazyLock<DualRun> = LazyLock::new(|| {
    let config = ExperimentConfig::noiseless(
        MatrixSpec::PowerResidue { p: 47, m_ary: 46 },
        vec![3, 4],
        recovery_trials(),
        MASTER_SEED,
    );
    dual_run(&config, false)
});

static C5_SIDELNIKOV: LazyLock<DualRun> = LazyLock::new(|| {
    let config = ExperimentConfig::noiseless(
        MatrixSpec::Sidelnikov {
            p: 7,
            m: 2,
            m_ary: 48,
        },
        vec![2],
        recovery_trials(),
        MASTER_SEED,
    );
    dual_run(&config, false)
});

static C7_NOISY: LazyLock<DualRun> = LazyLock::new(|| {
    let config = ExperimentConfig::noisy(
        MatrixSpec::PowerResidue { p: 47, m_ary: 46 },
        vec![1],
        SNR_GRID_DB.to_vec(),
        1000,
        MASTER_SEED,
    );
    dual_run(&config, true)
});

/// Condition-number CSVs for the three matrices of the comparison, each
/// produced under both pools.
static C6_RUNS: LazyLock<Vec<(MatrixFamily, String, String)>> = LazyLock::new(|| {
    let sparsities = [5usize, 10, 15, 20];
    let matrices: Vec<SensingMatrix> = vec![
        build_power_residue_matrix(47, 46).expect("build"),
        build_sidelnikov_matrix(7, 2, 48).expect("build"),
        // Template for per-trial K x s Gaussian draws; K=48 is what matters.
        build_gaussian_matrix(48, 48, MASTER_SEED).expect("build"),
    ];
    matrices
        .into_iter()
        .map(|mat| {
            let single = run_in_pool(1, || {
                condition_stats_csv(&mat, &sparsities, 1000, MASTER_SEED).expect("stats run")
            });
            let multi = run_in_pool(3, || {
                condition_stats_csv(&mat, &sparsities, 1000, MASTER_SEED).expect("stats run")
            });
            (mat.family(), single, multi)
        })
        .collect()
});

#[test]
fn criterion_1_spectral_norms_match_golden_table() {
    let start = Instant::now();
    let mut pass = true;
    let mut worst_norm = 0.0f64;
    let mut worst_floor = 0.0f64;
    for row in &SPECTRAL_REFERENCE {
        let mat = row.build().expect("reference parameters build");
        assert_eq!((mat.k_rows(), mat.n_cols()), (row.k, row.n));
        let delta = (spectral_norm(&mat) - row.spectral_norm).abs();
        let floor_delta = ((row.n as f64 / row.k as f64).sqrt() - row.tight_frame_floor).abs();
        worst_norm = worst_norm.max(delta);
        worst_floor = worst_floor.max(floor_delta);
        pass &= delta <= 5e-4 && floor_delta <= 5e-5;
    }
    report_line(
        1,
        pass,
        &format!(
            "ten spectral norms within 5e-4 of golden values (worst {worst_norm:.1e}), \
             sqrt(N/K) within 5e-5 (worst {worst_floor:.1e}), {:.0?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_coherence_bounds_hold() {
    let start = Instant::now();
    let matrices = [
        build_power_residue_matrix(7, 6).unwrap(),
        build_power_residue_matrix(43, 42).unwrap(),
        build_power_residue_matrix(47, 46).unwrap(),
        build_power_residue_matrix(59, 58).unwrap(),
        build_power_residue_matrix(97, 96).unwrap(),
        build_sidelnikov_matrix(3, 2, 8).unwrap(),
        build_sidelnikov_matrix(3, 3, 26).unwrap(),
        build_sidelnikov_matrix(7, 2, 48).unwrap(),
    ];
    let mut pass = true;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_scan = 0.0f64;
    for mat in &matrices {
        let fast = coherence_structured(mat).unwrap();
        let brute = coherence_bruteforce(mat);
        let closed = coherence_closed_form(mat.k_rows(), mat.family()).unwrap();
        worst_scan = worst_scan.max((fast - brute).abs());
        worst_gap = worst_gap.max(brute - closed);
        pass &= (fast - brute).abs() <= 1e-12 && brute <= closed + 1e-9;
    }
    report_line(
        2,
        pass,
        &format!(
            "8 matrices: coherence <= closed form (worst margin {worst_gap:.1e}), \
             structured vs brute force <= 1e-12 (worst {worst_scan:.1e}), {:.0?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_weil_oracle_exhaustive() {
    let start = Instant::now();
    let mut checked = 0u64;
    let mut trivial = 0u64;
    let mut pass = true;
    for q in 3u64..=64 {
        let Some((p, m)) = prime_power(q) else {
            continue;
        };
        let alphabets: Vec<u32> = (3..=(q - 1) as u32)
            .filter(|&d| (q - 1) % d as u64 == 0)
            .collect();
        if alphabets.is_empty() {
            continue;
        }
        let field = build_field(p, m).expect("desk-scale field");
        for m_ary in alphabets {
            let oracle = WeilOracle::new(&field, m_ary).expect("valid alphabet");
            for c1 in 0..m_ary {
                for c2 in 0..m_ary {
                    for b1 in 0..q {
                        for b2 in 0..q {
                            let canonical_trivial = (c1 % m_ary == 0 && c2 % m_ary == 0)
                                || (b1 == b2 && (c1 + c2) % m_ary == 0);
                            match oracle.check(c1, c2, b1, b2) {
                                Ok(result) => {
                                    pass &= result.holds && !canonical_trivial;
                                    checked += 1;
                                }
                                Err(Error::TrivialCharacter) => trivial += 1,
                                Err(_) => pass = false,
                            }
                        }
                    }
                }
            }
        }
    }
    report_line(
        3,
        pass,
        &format!(
            "character-sum bound holds for all {checked} nontrivial combinations over \
             every GF(q), q <= 64 ({trivial} trivial rejected), {:.0?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|&d| is_prime(d) && q % d == 0)?;
    let mut m = 0;
    let mut v = q;
    while v % p == 0 {
        v /= p;
        m += 1;
    }
    (v == 1).then_some((p, m))
}

#[test]
fn criterion_4_sparsity_bounds() {
    let power = sparsity_bound(47, MatrixFamily::PowerResidue).unwrap();
    let sidel = sparsity_bound(48, MatrixFamily::Sidelnikov).unwrap();
    let pass = power == 3 && sidel == 2;
    report_line(
        4,
        pass,
        &format!("power residue K=47 guarantees s={power} (want 3), Sidelnikov K=48 s={sidel} (want 2)"),
    );
    assert!(pass);
}

fn rate_of(report: &ExperimentReport, s: usize, snr_db: Option<f64>) -> f64 {
    report
        .rows
        .iter()
        .find(|r| r.s == s && r.snr_db == snr_db)
        .expect("row exists")
        .rate
}

#[test]
fn criterion_5_noiseless_recovery_rates() {
    let start = Instant::now();
    let trials = recovery_trials();
    let slack = rate_slack();
    let pr3 = rate_of(&C5_POWER.report, 3, None);
    let pr4 = rate_of(&C5_POWER.report, 4, None);
    let sid2 = rate_of(&C5_SIDELNIKOV.report, 2, None);
    let pass = pr3 >= 0.98 - slack && pr4 >= 0.93 - slack && sid2 >= 0.98 - slack;
    report_line(
        5,
        pass,
        &format!(
            "{trials} trials: power residue s=3 {:.2}% (>= {:.0}%), s=4 {:.2}% (>= {:.0}%), \
             Sidelnikov s=2 {:.2}% (>= {:.0}%), {:.0?}",
            100.0 * pr3,
            100.0 * (0.98 - slack),
            100.0 * pr4,
            100.0 * (0.93 - slack),
            100.0 * sid2,
            100.0 * (0.98 - slack),
            start.elapsed()
        ),
    );
    assert!(pass);
}

fn mean_by_s(csv: &str) -> Vec<(usize, f64)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            (cols[4].parse().unwrap(), cols[6].parse().unwrap())
        })
        .collect()
}

#[test]
fn criterion_6_condition_numbers_beat_gaussian() {
    let start = Instant::now();
    let runs = &*C6_RUNS;
    let gaussian: Vec<(usize, f64)> = mean_by_s(
        &runs
            .iter()
            .find(|(f, _, _)| *f == MatrixFamily::Gaussian)
            .unwrap()
            .1,
    );
    let mut pass = true;
    let mut detail = String::new();
    for (family, csv, _) in runs {
        if *family == MatrixFamily::Gaussian {
            continue;
        }
        for ((s, mean), (gs, gmean)) in mean_by_s(csv).iter().zip(&gaussian) {
            assert_eq!(s, gs);
            pass &= mean <= gmean;
            detail.push_str(&format!(" {family} s={s}: {mean:.3} vs {gmean:.3};"));
        }
    }
    report_line(
        6,
        pass,
        &format!(
            "mean condition number <= fresh Gaussian K=48 at every s in {{5,10,15,20}} \
             (1000 trials):{detail} {:.0?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_noisy_recovery_monotone_in_snr() {
    let start = Instant::now();
    let rates: Vec<f64> = SNR_GRID_DB
        .iter()
        .map(|&db| rate_of(&C7_NOISY.report, 1, Some(db)))
        .collect();
    let mut pass = true;
    for pair in rates.windows(2) {
        pass &= pair[1] >= pair[0] - 0.02;
    }
    // The top of the sweep must agree with the noiseless rate (same seeds).
    let noiseless_config = ExperimentConfig::noiseless(
        MatrixSpec::PowerResidue { p: 47, m_ary: 46 },
        vec![1],
        1000,
        MASTER_SEED,
    );
    let noiseless = run_in_pool(1, || {
        run_noiseless_experiment(&noiseless_config).expect("sweep runs")
    });
    // Noiseless rate is judged at its own stricter 1e-4 threshold.
    let noiseless_rate = rate_of(&noiseless, 1, None);
    let top = *rates.last().unwrap();
    pass &= (top - noiseless_rate).abs() <= 0.02;
    let pretty: Vec<String> = SNR_GRID_DB
        .iter()
        .zip(&rates)
        .map(|(db, r)| format!("{db:.0}dB {:.1}%", 100.0 * r))
        .collect();
    report_line(
        7,
        pass,
        &format!(
            "s=1 rates non-decreasing within 2 points [{}], 30dB vs noiseless: \
             {:.1}% vs {:.1}%, {:.0?}",
            pretty.join(", "),
            100.0 * top,
            100.0 * noiseless_rate,
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_csv_outputs_thread_count_invariant() {
    let start = Instant::now();
    let mut pass = C5_POWER.csv_single == C5_POWER.csv_multi;
    pass &= C5_SIDELNIKOV.csv_single == C5_SIDELNIKOV.csv_multi;
    pass &= C7_NOISY.csv_single == C7_NOISY.csv_multi;
    for (_, single, multi) in C6_RUNS.iter() {
        pass &= single == multi;
    }
    report_line(
        8,
        pass,
        &format!(
            "recovery and condition-number CSVs byte-identical under 1- and 3-thread pools \
             (criteria 5-7 workloads, same master seed), {:.0?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}
