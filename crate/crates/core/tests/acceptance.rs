//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.
//!
//! The bound constants are calibrated quantities, so the tail criteria are
//! property-based: domination of held-out ensembles by the calibrated bound
//! plus regime-shape checks, never reproduction of specific constants.

use specbound::bounds::{calibrate_constants, BoundConstants};
use specbound::chaining::{
    approximate, build_greedy_net, contraction_check, quadform_decomposition, smallest_l,
};
use specbound::dist::{psi_norm, DistributionSpec};
use specbound::ensemble::{Profile, ProfileKind};
use specbound::experiment::{
    domination_check, mean_norm_estimate, run_tail_experiment, run_tail_experiment_resumable,
    write_csv, ExperimentConfig, GridSpec,
};
use specbound::matrix::SymMatrix;
use specbound::order_stats::{
    chi2_gof, harmonic, maxima_law_ratio, renyi_transform, WeightPattern,
};
use specbound::{Real, Stream};

fn pass(criterion: u32, what: &str) {
    println!("[acceptance] criterion {criterion}: PASS — {what}");
}

fn laplace() -> DistributionSpec<Real> {
    DistributionSpec::Laplace { scale: 1.0 }
}

fn wigner_laplace(n: usize) -> Profile<Real> {
    Profile::new(ProfileKind::Wigner, n, 1.0, laplace(), 1.0).unwrap()
}

/// Criterion 1: psi-norm exactness and scaling homogeneity.
#[test]
fn criterion_01_psi_norm_exactness() {
    let tol = 1e-10;
    let p = psi_norm(&laplace(), 1.0, tol).unwrap();
    assert!(
        (p.value - 2.0).abs() < 1e-8,
        "psi_1(Laplace(1)) = {} (closed-form oracle K/(K-1) = 2 gives K = 2)",
        p.value
    );
    for c in [0.5, 2.0, 10.0] {
        let scaled = psi_norm(&DistributionSpec::Laplace { scale: c }, 1.0, tol).unwrap();
        assert!(
            (scaled.value - c * p.value).abs() <= 2.0 * tol * (1.0 + c),
            "homogeneity at c = {c}: {} vs {}",
            scaled.value,
            c * p.value
        );
    }
    pass(1, "psi_1(Laplace(1)) = 2 within 1e-8; homogeneity within 2 tol for c in {0.5, 2, 10}");
}

/// Criterion 2: spacing transform of exponential order statistics.
#[test]
fn criterion_02_renyi_spacings() {
    let n = 50usize;
    let trials = 100_000usize;
    let mut pooled = Vec::with_capacity(n * trials);
    let mut maxima = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let mut stream = Stream::keyed(&[0x52454e, t]);
        let samples: Vec<Real> = (0..n).map(|_| -stream.open01::<Real>().ln()).collect();
        let tr = renyi_transform(&samples).unwrap();
        maxima.push(*tr.sorted.last().unwrap());
        pooled.extend(tr.spacings);
    }
    let gof = chi2_gof(&pooled, 0.01).unwrap();
    assert!(
        gof.pass,
        "pooled spacings rejected: KS {} > {} at 1%",
        gof.statistic, gof.threshold
    );
    let mean = maxima.iter().sum::<Real>() / trials as Real;
    let var = maxima.iter().map(|x| (x - mean) * (x - mean)).sum::<Real>() / (trials - 1) as Real;
    let se = (var / trials as Real).sqrt();
    let h50: Real = harmonic(n);
    assert!(
        (mean - h50).abs() <= 3.0 * se,
        "mean max {mean} vs H_50 = {h50} (3 SE = {})",
        3.0 * se
    );
    pass(2, "pooled spacings pass KS vs Exp(mean 2) at 1%; mean of the maximum within 3 SE of H_50");
}

/// Criterion 3: diagonal ensemble expectation identity E‖Y‖ = H_n.
#[test]
fn criterion_03_diagonal_harmonic_identity() {
    for n in [16usize, 256] {
        // base scale 2 with Laplace(1) entries makes each diagonal entry
        // exactly Laplace(1), whose absolute value is Exp(1)
        let profile = Profile::new(ProfileKind::Diagonal, n, 2.0, laplace(), 1.0).unwrap();
        let cfg = ExperimentConfig::new(profile, 10_000, 0xd1a6);
        let est = mean_norm_estimate(&cfg).unwrap();
        let h: Real = harmonic(n);
        assert_eq!(est.failed, 0);
        assert!(
            (est.mean - h).abs() <= 3.0 * est.std_err,
            "n = {n}: mean {} vs H_n = {h} (3 SE = {})",
            est.mean,
            3.0 * est.std_err
        );
    }
    pass(3, "diagonal Laplace(1) ensemble mean norm within 3 SE of H_n for n in {16, 256}");
}

/// Criterion 4: chaining depth values and minimality.
#[test]
fn criterion_04_chaining_depth() {
    assert_eq!(smallest_l(4096).unwrap().l, 5);
    assert_eq!(smallest_l(16).unwrap().l, 3);
    let condition = |n: f64, l: u32| {
        let pow = 4f64.powi(l as i32);
        (n / pow) * (96.0 * std::f64::consts::E * pow).ln() <= n.sqrt()
    };
    let mut n = 2usize;
    while n <= 4096 {
        let l = smallest_l(n).unwrap().l;
        assert!(condition(n as f64, l), "condition fails at returned depth for n = {n}");
        assert!(!condition(n as f64, l - 1), "depth not minimal for n = {n}");
        n *= 2;
    }
    pass(4, "smallest_l(4096) = 5, smallest_l(16) = 3; minimality verified at l-1 for all tested n");
}

/// Criterion 5: approximant error budget and memberships.
#[test]
fn criterion_05_approximant_budget() {
    let mut stream = Stream::new(0xa99);
    let budget = (1.0f64 / 256.0 + 1.0 / 15.0).sqrt(); // ~ 0.26566
    for n in [16usize, 64, 256] {
        for _ in 0..100 {
            let z: Vec<Real> = stream.unit_vector(n);
            let a = approximate(&z).unwrap();
            assert!(a.total_error <= 0.3, "n = {n}: total error {}", a.total_error);
            assert!(a.total_error <= budget + 1e-9);
            assert!(a.norm <= 2.0, "n = {n}: |x| = {}", a.norm);
            assert!(a.block_in_slice.iter().all(|&b| b), "n = {n}: a block left its slice");
            for (k, block) in a.partition.blocks.iter().enumerate() {
                for &i in block {
                    assert!(a.x[i].abs() <= a.partition.caps[k] + 1e-12);
                }
            }
        }
    }
    pass(5, "100 random unit z per n in {16, 64, 256}: error <= 0.3, |x| <= 2, per-block caps honored");
}

/// Criterion 6: contraction inequality on Wigner-Laplace samples.
#[test]
fn criterion_06_contraction_inequality() {
    for n in [8usize, 16, 32, 64] {
        let profile = wigner_laplace(n);
        for trial in 0..100u64 {
            let sample = profile.sample_matrix(0xc0, trial).unwrap();
            let rep = contraction_check(&sample.matrix)
                .unwrap_or_else(|e| panic!("n = {n}, trial {trial}: {e}"));
            assert!(rep.contraction_ratio <= 10.0);
        }
    }
    pass(6, "‖X‖ <= 10 max(⟨Xx,x⟩, ⟨-Xx',x'⟩) on 100 Wigner-Laplace samples per n in {8, 16, 32, 64}");
}

/// Criterion 7: greedy net cardinality bound and covering certificates.
#[test]
fn criterion_07_net_cardinality_and_covering() {
    let probes = 10_000usize;
    for dim in 1usize..=6 {
        for eps in [1.0, 0.25] {
            for alpha in [1.0, 0.5] {
                let mut stream = Stream::keyed(&[0x6e65, dim as u64, (eps * 100.0) as u64, (alpha * 2.0) as u64]);
                let net = build_greedy_net::<Real>(dim, eps, alpha, probes, &mut stream)
                    .unwrap_or_else(|e| panic!("dim {dim} eps {eps} alpha {alpha}: {e}"));
                let bound = (3.0 / eps).powi(dim as i32);
                assert!(
                    (net.points.len() as f64) <= bound,
                    "dim {dim} eps {eps} alpha {alpha}: {} points > bound {bound}",
                    net.points.len()
                );
                assert_eq!(net.cover_probes, probes);
                assert_eq!(
                    net.cover_failures, 0,
                    "dim {dim} eps {eps} alpha {alpha}: covering certificate not clean"
                );
            }
        }
    }
    pass(7, "nets for dim <= 6, eps in {1, 1/4}, alpha in {1, 1/2}: cardinality <= (3/eps)^dim, 10^4 covering probes clean");
}

/// Criterion 8: quadratic-form decomposition identities.
#[test]
fn criterion_08_quadform_identities() {
    let mut stream = Stream::new(0x9f);
    for case in 0..1000 {
        let n = 4 + (stream.next_u64() % 13) as usize; // 4..=16
        let mut x = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                x.set_sym(i, j, stream.standard_normal::<Real>());
            }
        }
        // random partition into 1..=3 blocks covering 0..n
        let nblocks = 1 + (stream.next_u64() % 3) as usize;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nblocks];
        for i in 0..n {
            blocks[(stream.next_u64() % nblocks as u64) as usize].push(i);
        }
        let v: Vec<Real> = (0..n).map(|_| stream.standard_normal()).collect();
        let parts = quadform_decomposition(&x, &v, &blocks).unwrap();

        // brute-force double-loop oracle
        let mut quad = 0.0;
        let mut diag = 0.0;
        let mut within = 0.0;
        let mut cross = 0.0;
        let owner: Vec<usize> = (0..n)
            .map(|i| blocks.iter().position(|b| b.contains(&i)).unwrap())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let term = v[i] * v[j] * x.get(i, j);
                quad += term;
                if i == j {
                    diag += term;
                } else if owner[i] == owner[j] {
                    within += term;
                } else {
                    cross += term;
                }
            }
        }
        assert!((parts.diag - diag).abs() <= 1e-10, "case {case}: diagonal part");
        assert!((parts.within - within).abs() <= 1e-10, "case {case}: within-block part");
        assert!((parts.cross - cross).abs() <= 1e-10, "case {case}: cross-block part");
        assert!((parts.diag + parts.off_diag - quad).abs() <= 1e-10, "case {case}: total identity");
        assert!((parts.within + parts.cross - parts.off_diag).abs() <= 1e-10, "case {case}: split identity");
    }
    pass(8, "decomposition identities hold to 1e-10 against the double-loop oracle on 1000 random triples");
}

/// Criterion 9: tail domination with constants calibrated on one ensemble
/// and checked on held-out ensembles, plus the regime-shape R² check.
#[test]
fn criterion_09_tail_domination() {
    // calibration ensemble: Wigner Laplace n = 64, 1e5 trials; the grid
    // extends below the default threshold so the median is bracketed
    let mut cal_cfg = ExperimentConfig::new(wigner_laplace(64), 100_000, 20260810);
    cal_cfg.grid = GridSpec::Relative {
        values: (0..=24).map(|i| -2.0 + 0.25 * i as Real).collect(),
    };
    let cal_curve = run_tail_experiment(&cal_cfg).unwrap();
    let params = cal_cfg.profile.struct_params();
    let cal = calibrate_constants(&cal_curve, 64, &params, "wigner-laplace-n64").unwrap();
    assert!(
        cal.r_squared >= 0.95,
        "regime-shape fit R² = {} < 0.95 on the calibration ensemble",
        cal.r_squared
    );
    let consts: BoundConstants<Real> = cal.constants.clone();

    // held-out ensembles at n in {64, 128}, 1e4 trials each
    let held_out = |n: usize| -> Vec<(&'static str, Profile<Real>)> {
        vec![
            ("diagonal", Profile::new(ProfileKind::Diagonal, n, 1.0, laplace(), 1.0).unwrap()),
            ("band(3)", Profile::new(ProfileKind::Band { width: 3 }, n, 1.0, laplace(), 1.0).unwrap()),
            (
                "sparse(0.1)",
                Profile::new(ProfileKind::Sparse { p: 0.1, seed: 11 }, n, 1.0, laplace(), 1.0).unwrap(),
            ),
            (
                "block",
                Profile::new(
                    ProfileKind::Block {
                        sizes: vec![n / 4; 4],
                        scales: vec![1.0, 0.5, 0.25, 1.0],
                    },
                    n,
                    1.0,
                    laplace(),
                    1.0,
                )
                .unwrap(),
            ),
        ]
    };
    for n in [64usize, 128] {
        for (name, profile) in held_out(n) {
            let mut cfg = ExperimentConfig::new(profile, 10_000, 0xb0b + n as u64);
            cfg.constants = Some(consts.clone());
            let curve = run_tail_experiment(&cfg).unwrap();
            let rep = domination_check(&curve);
            assert!(
                rep.pass(),
                "{name} at n = {n}: bound dips below the CI lower endpoint at {:?}",
                rep.violations
            );
        }
    }
    pass(9, "R² >= 0.95 on the calibration fit; all held-out ensembles dominated at every grid point");
}

/// Criterion 10: weighted-maxima law ratios inside one fixed band.
#[test]
fn criterion_10_maxima_law_band() {
    // band recorded at first calibration of this suite (Exp(1) magnitudes,
    // alpha = 1), then regression-tested
    let (r_lo, r_hi) = (0.85, 3.6);
    let spec = laplace();
    for n in [16usize, 1000] {
        for pattern in WeightPattern::ALL {
            let weights: Vec<Real> = pattern.build(n);
            let r = maxima_law_ratio(&weights, &spec, 1.0, 4000, 0x3ab).unwrap();
            assert!(
                r.ratio >= r_lo && r.ratio <= r_hi,
                "{pattern:?} at n = {n}: ratio {} outside [{r_lo}, {r_hi}]",
                r.ratio
            );
        }
        // constant-weight case matches H_n / ln(n+1) within 3 SE
        let w = vec![1.0 as Real; n];
        let r = maxima_law_ratio(&w, &spec, 1.0, 4000, 0x3ac).unwrap();
        let expect: Real = harmonic::<Real>(n) / ((n + 1) as Real).ln();
        let slack = 3.0 * r.estimate.std_err / r.denominator;
        assert!(
            (r.ratio - expect).abs() <= slack,
            "constant weights at n = {n}: ratio {} vs {expect} (3 SE = {slack})",
            r.ratio
        );
    }
    pass(10, "maxima-law ratios inside the recorded band for all patterns and n in {16, 1000}");
}

/// Criterion 11: engine determinism across workers and interrupt/resume.
#[test]
fn criterion_11_engine_determinism() {
    let mut cfg = ExperimentConfig::new(wigner_laplace(16), 400, 0xdef);
    let mut csv = Vec::new();
    cfg.workers = 1;
    write_csv(&mut csv, &run_tail_experiment(&cfg).unwrap()).unwrap();
    let mut csv4 = Vec::new();
    cfg.workers = 4;
    write_csv(&mut csv4, &run_tail_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(csv, csv4, "curves differ between 1 and 4 workers");

    let dir = std::env::temp_dir().join(format!("specbound-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ckpt = dir.join("acceptance.ckpt");
    let _ = std::fs::remove_file(&ckpt);
    let staged = run_tail_experiment_resumable(&cfg, &ckpt, Some(200)).unwrap();
    assert!(staged.is_none(), "staged run should stop early");
    let resumed = run_tail_experiment_resumable(&cfg, &ckpt, None).unwrap().unwrap();
    let mut resumed_csv = Vec::new();
    write_csv(&mut resumed_csv, &resumed).unwrap();
    assert_eq!(csv, resumed_csv, "interrupt/resume changed the curve");
    std::fs::remove_file(&ckpt).unwrap();

    pass(11, "curves bit-identical across worker counts {1, 4} and across checkpoint interrupt/resume");
}
