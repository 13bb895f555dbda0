//! Monte Carlo tail-estimation engine: ties ensembles, norms, and bound
//! evaluators together with exact binomial confidence intervals, CSV/JSONL
//! output, and resumable checkpointed runs.
//!
//! Trials are pure functions of `(config, trial index)`, so curves are
//! bit-identical across worker counts and across interrupt/resume, and the
//! aggregation is an ordered fold over trial index regardless of completion
//! order.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{sym_tail, sym_threshold, BoundConstants};
use crate::ensemble::Profile;
use crate::error::{Error, Result};
use crate::math;
use crate::rng::Stream;
use crate::scalar::{cast, cast_usize, Scalar};
use crate::specnorm::{spectral_norm_exact, spectral_norm_iter, NormMethod, NormResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Threshold grid: excess values `t` relative to the calibrated threshold
/// (in units of sigma1), or absolute norm thresholds `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
#[serde(bound = "F: Scalar")]
pub enum GridSpec<F: Scalar> {
    Relative { values: Vec<F> },
    Absolute { values: Vec<F> },
}

impl<F: Scalar> GridSpec<F> {
    /// The default grid `t/σ₁ ∈ {0, 0.25, …, 4}` covers both regimes of
    /// `min(t²/σ₁², t/σ₁)` around the crossover at `t = σ₁`.
    pub fn default_relative() -> Self {
        GridSpec::Relative { values: (0..=16).map(|i| cast::<F>(i as f64 * 0.25)).collect() }
    }

    fn values(&self) -> &[F] {
        match self {
            GridSpec::Relative { values } | GridSpec::Absolute { values } => values,
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.values();
        if v.is_empty() {
            return Err(Error::Config("threshold grid is empty".into()));
        }
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("threshold grid must be sorted ascending".into()));
        }
        Ok(())
    }
}

/// Norm computation choice for the trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct NormSpec<F: Scalar> {
    pub method: NormMethod,
    pub tol: F,
    pub max_iter: usize,
}

impl<F: Scalar> Default for NormSpec<F> {
    fn default() -> Self {
        NormSpec { method: NormMethod::Exact, tol: cast(1e-10), max_iter: 100_000 }
    }
}

/// A full experiment description; serializes to the versioned config format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct ExperimentConfig<F: Scalar> {
    pub schema: u32,
    pub profile: Profile<F>,
    pub trials: usize,
    pub seed: u64,
    pub grid: GridSpec<F>,
    pub norm: NormSpec<F>,
    /// Bound constants; the shipped default table when absent.
    pub constants: Option<BoundConstants<F>>,
    /// Worker threads; 0 means the global default.
    pub workers: usize,
}

impl<F: Scalar> ExperimentConfig<F> {
    pub fn new(profile: Profile<F>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            profile,
            trials,
            seed,
            grid: GridSpec::default_relative(),
            norm: NormSpec::default(),
            constants: None,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "config schema {} does not match supported version {SCHEMA_VERSION}",
                self.schema
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trial count must be >= 1".into()));
        }
        self.profile.validate()?;
        self.grid.validate()?;
        if let Some(k) = &self.constants {
            k.validate()?;
        }
        if self.norm.tol <= F::zero() {
            return Err(Error::Config("norm tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Content hash of the canonical serialized form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn bound_constants(&self) -> BoundConstants<F> {
        self.constants.clone().unwrap_or_else(BoundConstants::default_table)
    }
}

/// One per-trial record, the JSONL row format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TrialRecord<F: Scalar> {
    pub trial: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<NormMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One grid row of a tail curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct CurveRow<F: Scalar> {
    /// Excess over the calibrated threshold (may be negative in absolute mode).
    pub t: F,
    /// Absolute norm threshold.
    pub s: F,
    pub exceed: usize,
    pub n: usize,
    pub p_hat: F,
    pub ci_low: F,
    pub ci_high: F,
    pub bound: F,
}

/// Empirical exceedance curve with confidence intervals and bound values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TailCurve<F: Scalar> {
    pub rows: Vec<CurveRow<F>>,
    pub trials: usize,
    /// Trials excluded for norm-convergence failure (always 0 on the exact path).
    pub failed: usize,
}

/// Exact (conservative) binomial confidence interval from Beta quantiles.
pub fn clopper_pearson(k: usize, n: usize, level: f64) -> Result<(f64, f64)> {
    if n == 0 || k > n {
        return Err(Error::Domain(format!("clopper_pearson(k={k}, n={n})")));
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    let a = (1.0 - level) / 2.0;
    let low = if k == 0 {
        0.0
    } else {
        math::beta_quantile(a, k as f64, (n - k + 1) as f64)?
    };
    let high = if k == n {
        1.0
    } else {
        math::beta_quantile(1.0 - a, (k + 1) as f64, (n - k) as f64)?
    };
    Ok((low, high))
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn run_one_trial<F: Scalar>(cfg: &ExperimentConfig<F>, trial: u64) -> TrialRecord<F> {
    let outcome: Result<NormResult<F>> = cfg.profile.sample_matrix(cfg.seed, trial).and_then(|s| {
        match cfg.norm.method {
            NormMethod::Exact => spectral_norm_exact(&s.matrix),
            NormMethod::Iterative => {
                let mut stream = Stream::keyed(&[cfg.seed, trial, u64::from_le_bytes(*b"normiter")]);
                spectral_norm_iter(&s.matrix, cfg.norm.tol, cfg.norm.max_iter, &mut stream)
            }
        }
    });
    match outcome {
        Ok(r) => TrialRecord {
            trial,
            norm: Some(r.value),
            method: Some(r.method),
            residual: Some(r.residual),
            error: None,
        },
        Err(e) => TrialRecord { trial, norm: None, method: None, residual: None, error: Some(e.to_string()) },
    }
}

fn compute_trials<F: Scalar>(cfg: &ExperimentConfig<F>, indices: &[u64]) -> Result<Vec<TrialRecord<F>>> {
    with_pool(cfg.workers, || {
        indices.par_iter().map(|&i| run_one_trial(cfg, i)).collect::<Vec<_>>()
    })
}

/// Build the curve from a complete, trial-ordered record set.
fn curve_from_records<F: Scalar>(
    cfg: &ExperimentConfig<F>,
    records: &[TrialRecord<F>],
) -> Result<TailCurve<F>> {
    let norms: Vec<F> = records.iter().filter_map(|r| r.norm).collect();
    let failed = records.len() - norms.len();
    if norms.is_empty() {
        return Err(Error::Numerical("every trial failed to produce a norm".into()));
    }
    let n_eff = norms.len();
    let params = cfg.profile.struct_params();
    let consts = cfg.bound_constants();
    let threshold = sym_threshold(cfg.profile.n, &params, &consts);
    let mut rows = Vec::new();
    for &g in cfg.grid.values() {
        let (t, s) = match &cfg.grid {
            GridSpec::Relative { .. } => {
                let t = g * params.sigma1;
                (t, threshold + t)
            }
            GridSpec::Absolute { .. } => (g - threshold, g),
        };
        let exceed = norms.iter().filter(|&&v| v >= s).count();
        let (lo, hi) = clopper_pearson(exceed, n_eff, 0.95)?;
        rows.push(CurveRow {
            t,
            s,
            exceed,
            n: n_eff,
            p_hat: cast_usize::<F>(exceed) / cast_usize::<F>(n_eff),
            ci_low: cast(lo),
            ci_high: cast(hi),
            bound: sym_tail(t.max(F::zero()), params.sigma1, &consts),
        });
    }
    Ok(TailCurve { rows, trials: n_eff, failed })
}

/// Run the full experiment in memory.
pub fn run_tail_experiment<F: Scalar>(cfg: &ExperimentConfig<F>) -> Result<TailCurve<F>> {
    cfg.validate()?;
    let indices: Vec<u64> = (0..cfg.trials as u64).collect();
    let records = compute_trials(cfg, &indices)?;
    curve_from_records(cfg, &records)
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    schema: u32,
    config: String,
}

/// Load trial records from a checkpoint file, verifying schema and config hash.
fn load_checkpoint<F: Scalar>(path: &Path, cfg: &ExperimentConfig<F>) -> Result<Vec<TrialRecord<F>>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = std::fs::File::open(path)?;
    let mut reader = std::io::BufReader::new(file);
    let mut header_line = String::new();
    reader.read_line(&mut header_line)?;
    let header: CheckpointHeader = serde_json::from_str(header_line.trim_end())
        .map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
    if header.schema != SCHEMA_VERSION {
        return Err(Error::Checkpoint(format!(
            "checkpoint schema {} does not match {SCHEMA_VERSION}",
            header.schema
        )));
    }
    if header.config != cfg.hash() {
        return Err(Error::Checkpoint(
            "checkpoint was produced by a different configuration".into(),
        ));
    }
    let mut records = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TrialRecord<F> = serde_json::from_str(&line)
            .map_err(|e| Error::Checkpoint(format!("corrupt record at line {}: {e}", lineno + 2)))?;
        if rec.trial >= cfg.trials as u64 {
            return Err(Error::Checkpoint(format!("record for out-of-range trial {}", rec.trial)));
        }
        records.push(rec);
    }
    Ok(records)
}

/// Atomically write the checkpoint (write-temp-then-rename).
fn save_checkpoint<F: Scalar>(
    path: &Path,
    cfg: &ExperimentConfig<F>,
    records: &[TrialRecord<F>],
) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        serde_json::to_writer(&mut w, &CheckpointHeader { schema: SCHEMA_VERSION, config: cfg.hash() })?;
        writeln!(w)?;
        for rec in records {
            serde_json::to_writer(&mut w, rec)?;
            writeln!(w)?;
        }
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Run with checkpointing. Computes at most `stop_after` new trials when
/// given (for staged runs), persists, and returns the finished curve once all
/// trials are present; per-trial seeding makes the result identical to an
/// uninterrupted run.
pub fn run_tail_experiment_resumable<F: Scalar>(
    cfg: &ExperimentConfig<F>,
    checkpoint: &Path,
    stop_after: Option<usize>,
) -> Result<Option<TailCurve<F>>> {
    cfg.validate()?;
    let mut records = load_checkpoint(checkpoint, cfg)?;
    let have: std::collections::HashSet<u64> = records.iter().map(|r| r.trial).collect();
    let mut missing: Vec<u64> = (0..cfg.trials as u64).filter(|i| !have.contains(i)).collect();
    if let Some(cap) = stop_after {
        missing.truncate(cap);
    }
    if !missing.is_empty() {
        let fresh = compute_trials(cfg, &missing)?;
        records.extend(fresh);
        records.sort_by_key(|r| r.trial);
        save_checkpoint(checkpoint, cfg, &records)?;
    }
    if records.len() == cfg.trials {
        Ok(Some(curve_from_records(cfg, &records)?))
    } else {
        Ok(None)
    }
}

/// Monte Carlo estimate of `E‖X‖` with a standard-error interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeanEstimate<F> {
    pub mean: F,
    pub std_err: F,
    pub trials: usize,
    pub failed: usize,
}

pub fn mean_norm_estimate<F: Scalar>(cfg: &ExperimentConfig<F>) -> Result<MeanEstimate<F>> {
    cfg.validate()?;
    let indices: Vec<u64> = (0..cfg.trials as u64).collect();
    let records = compute_trials(cfg, &indices)?;
    let norms: Vec<F> = records.iter().filter_map(|r| r.norm).collect();
    if norms.is_empty() {
        return Err(Error::Numerical("every trial failed to produce a norm".into()));
    }
    let n = cast_usize::<F>(norms.len());
    let mean = math::pairwise_sum(&norms) / n;
    let sq: Vec<F> = norms.iter().map(|&v| (v - mean) * (v - mean)).collect();
    let var = math::pairwise_sum(&sq) / (n - F::one()).max(F::one());
    Ok(MeanEstimate {
        mean,
        std_err: (var / n).sqrt(),
        trials: norms.len(),
        failed: records.len() - norms.len(),
    })
}

/// Domination report: the theoretical bound must sit above the lower
/// confidence endpoint at every grid threshold.
#[derive(Clone, Debug, Serialize)]
pub struct DominationReport<F> {
    pub points: usize,
    pub violations: Vec<(F, F, F)>,
    pub fraction_ok: f64,
}

impl<F> DominationReport<F> {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn domination_check<F: Scalar>(curve: &TailCurve<F>) -> DominationReport<F> {
    let mut violations = Vec::new();
    for r in &curve.rows {
        if r.ci_low > r.bound {
            violations.push((r.t, r.ci_low, r.bound));
        }
    }
    let points = curve.rows.len();
    let ok = points - violations.len();
    DominationReport { points, violations, fraction_ok: ok as f64 / points.max(1) as f64 }
}

/// Exact CSV format: `t,s,exceed,N,p_hat,ci_low,ci_high,bound` with floats
/// printed as shortest round-trip decimals.
pub fn write_csv<F: Scalar, W: Write>(w: &mut W, curve: &TailCurve<F>) -> Result<()> {
    writeln!(w, "t,s,exceed,N,p_hat,ci_low,ci_high,bound")?;
    for r in &curve.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.t, r.s, r.exceed, r.n, r.p_hat, r.ci_low, r.ci_high, r.bound
        )?;
    }
    Ok(())
}

/// Per-trial JSONL rows.
pub fn write_jsonl<F: Scalar, W: Write>(w: &mut W, records: &[TrialRecord<F>]) -> Result<()> {
    for rec in records {
        serde_json::to_writer(&mut *w, rec)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Recompute and expose the per-trial records of a config (for JSONL output).
pub fn trial_records<F: Scalar>(cfg: &ExperimentConfig<F>) -> Result<Vec<TrialRecord<F>>> {
    cfg.validate()?;
    let indices: Vec<u64> = (0..cfg.trials as u64).collect();
    compute_trials(cfg, &indices)
}

/// Records already persisted in a checkpoint (trial-sorted; possibly partial).
pub fn checkpoint_records<F: Scalar>(
    cfg: &ExperimentConfig<F>,
    checkpoint: &Path,
) -> Result<Vec<TrialRecord<F>>> {
    cfg.validate()?;
    let mut records = load_checkpoint(checkpoint, cfg)?;
    records.sort_by_key(|r| r.trial);
    Ok(records)
}
