//! Order statistics of exponential samples and weighted-maxima laws: the
//! spacing transform to i.i.d. chi-square(2) variables, harmonic-sum
//! identities for expected maxima, goodness-of-fit checks, and Monte Carlo
//! estimators for `E max_i c_i |ξ_i|` against `max_i c*_i (ln(i+1))^{1/α}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::math;
use crate::rng::Stream;
use crate::scalar::{cast, cast_usize, Scalar};

/// The spacing transform of exponential order statistics.
#[derive(Clone, Debug, Serialize)]
pub struct RenyiTransform<F> {
    /// Input order statistics, ascending.
    pub sorted: Vec<F>,
    /// `T_i = 2(n−i+1)(η_(i) − η_(i−1))` with `η_(0) = 0`; i.i.d. chi-square
    /// with 2 degrees of freedom when the inputs are i.i.d. Exp(1).
    pub spacings: Vec<F>,
}

impl<F: Scalar> RenyiTransform<F> {
    /// Telescoping identity: `Σ T_i / (2(n−i+1)) = η_(n)`.
    pub fn reconstruct_max(&self) -> F {
        let n = self.spacings.len();
        self.spacings
            .iter()
            .enumerate()
            .map(|(idx, &t)| t / (cast::<F>(2.0) * cast_usize::<F>(n - idx)))
            .fold(F::zero(), |a, b| a + b)
    }
}

/// Sort, difference, and scale a nonnegative sample.
pub fn renyi_transform<F: Scalar>(samples: &[F]) -> Result<RenyiTransform<F>> {
    if samples.is_empty() {
        return Err(Error::Validation("renyi transform needs n >= 1 samples".into()));
    }
    if samples.iter().any(|&x| x < F::zero() || !x.is_finite()) {
        return Err(Error::Validation("renyi transform needs nonnegative finite samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len();
    let mut spacings = Vec::with_capacity(n);
    let mut prev = F::zero();
    for (idx, &x) in sorted.iter().enumerate() {
        let factor = cast::<F>(2.0) * cast_usize::<F>(n - idx);
        spacings.push(factor * (x - prev));
        prev = x;
    }
    Ok(RenyiTransform { sorted, spacings })
}

/// Two-sided Kolmogorov-Smirnov distance of a sample against a CDF.
pub fn ks_statistic<F: Scalar>(samples: &[F], cdf: impl Fn(F) -> F) -> F {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = cast_usize::<F>(sorted.len());
    let mut d = F::zero();
    for (idx, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = cast_usize::<F>(idx) / n;
        let hi = cast_usize::<F>(idx + 1) / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Asymptotic two-sided KS critical distance `c(level)/√n`,
/// `c = sqrt(−ln(level/2)/2)`.
pub fn ks_critical(level: f64, n: usize) -> f64 {
    (-(level / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GofReport<F> {
    pub statistic: F,
    pub threshold: F,
    pub n: usize,
    pub level: f64,
    pub pass: bool,
}

/// KS goodness-of-fit of a sample against chi-square with 2 degrees of
/// freedom, i.e. the exponential law of mean 2 (`CDF 1 − e^{−x/2}`).
pub fn chi2_gof<F: Scalar>(samples: &[F], level: f64) -> Result<GofReport<F>> {
    if samples.len() < 100 {
        return Err(Error::Validation(format!(
            "goodness-of-fit needs at least 100 samples, got {}",
            samples.len()
        )));
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::Domain(format!("level {level} outside (0, 1)")));
    }
    let stat = ks_statistic(samples, |x: F| {
        if x <= F::zero() {
            F::zero()
        } else {
            F::one() - (-x / cast::<F>(2.0)).exp()
        }
    });
    let threshold = cast::<F>(ks_critical(level, samples.len()));
    Ok(GofReport { statistic: stat, threshold, n: samples.len(), level, pass: stat <= threshold })
}

/// `H_n = Σ_{i=1..n} 1/i`, summed smallest-first.
pub fn harmonic<F: Scalar>(n: usize) -> F {
    let mut acc = F::zero();
    for i in (1..=n).rev() {
        acc += F::one() / cast_usize::<F>(i);
    }
    acc
}

/// Multiset-preserving nonincreasing sort.
pub fn decreasing_rearrangement<F: Scalar>(v: &[F]) -> Vec<F> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    out
}

/// Monte Carlo mean with standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeanCi<F> {
    pub mean: F,
    pub std_err: F,
    pub trials: usize,
}

/// Estimate `E max_i c_i |ξ_i|` by Monte Carlo; deterministic per seed,
/// trial-parallel with pairwise-sum reduction.
pub fn empirical_weighted_max<F: Scalar>(
    weights: &[F],
    spec: &DistributionSpec<F>,
    trials: usize,
    seed: u64,
) -> Result<MeanCi<F>> {
    spec.validate()?;
    if weights.iter().any(|&w| w < F::zero()) {
        return Err(Error::Domain("weights must be nonnegative".into()));
    }
    if trials < 1 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let maxima: Vec<F> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut stream = Stream::keyed(&[seed, t]);
            weights
                .iter()
                .map(|&c| c * spec.sample(&mut stream).abs())
                .fold(F::zero(), |a, b| a.max(b))
        })
        .collect();
    let n = cast_usize::<F>(trials);
    let mean = math::pairwise_sum(&maxima) / n;
    let sq: Vec<F> = maxima.iter().map(|&v| (v - mean) * (v - mean)).collect();
    let var = math::pairwise_sum(&sq) / (n - F::one()).max(F::one());
    Ok(MeanCi { mean, std_err: (var / n).sqrt(), trials })
}

/// Ratio of the empirical weighted maximum to the maxima-law scale
/// `max_i c*_i (ln(i+1))^{1/α}` (i is 1-based over the decreasing
/// rearrangement of the weights).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RatioEstimate<F> {
    pub estimate: MeanCi<F>,
    pub denominator: F,
    pub ratio: F,
}

pub fn maxima_law_scale<F: Scalar>(weights: &[F], alpha: F) -> F {
    decreasing_rearrangement(weights)
        .iter()
        .enumerate()
        .map(|(i, &c)| c * cast_usize::<F>(i + 2).ln().powf(F::one() / alpha))
        .fold(F::zero(), |a, b| a.max(b))
}

pub fn maxima_law_ratio<F: Scalar>(
    weights: &[F],
    spec: &DistributionSpec<F>,
    alpha: F,
    trials: usize,
    seed: u64,
) -> Result<RatioEstimate<F>> {
    if alpha <= F::zero() || alpha > cast(2.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0, 2]")));
    }
    let estimate = empirical_weighted_max(weights, spec, trials, seed)?;
    let denominator = maxima_law_scale(weights, alpha);
    if denominator == F::zero() {
        return Err(Error::Domain("maxima-law scale is zero (all weights zero)".into()));
    }
    Ok(RatioEstimate { estimate, denominator, ratio: estimate.mean / denominator })
}

/// Standard weight patterns for the maxima-law regression band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPattern {
    Constant,
    Geometric,
    Spike,
    Linear,
}

impl WeightPattern {
    pub const ALL: [WeightPattern; 4] =
        [WeightPattern::Constant, WeightPattern::Geometric, WeightPattern::Spike, WeightPattern::Linear];

    pub fn build<F: Scalar>(self, n: usize) -> Vec<F> {
        match self {
            WeightPattern::Constant => vec![F::one(); n],
            WeightPattern::Geometric => {
                (0..n).map(|i| cast::<F>(0.5f64.powi(i.min(1020) as i32))).collect()
            }
            WeightPattern::Spike => {
                let mut v = vec![F::zero(); n];
                v[0] = F::one();
                v
            }
            WeightPattern::Linear => {
                (0..n).map(|i| F::one() - cast_usize::<F>(i) / cast_usize::<F>(n.max(1))).collect()
            }
        }
    }
}

/// Ratios `(E|g g'|^p)^{1/p} / (p!)^{1/p} = (E|g|^p)^{2/p} / (p!)^{1/p}`
/// computed in log space from `E|g|^p = 2^{p/2} Γ((p+1)/2)/√π`.
pub fn gaussian_product_moment_check<F: Scalar>(p_max: u32) -> Result<Vec<(u32, F)>> {
    if !(1..=40).contains(&p_max) {
        return Err(Error::Domain(format!("p_max = {p_max} outside 1..=40")));
    }
    let half_ln_pi = cast::<F>(std::f64::consts::PI).ln() / cast(2.0);
    let ln2 = cast::<F>(2.0).ln();
    let mut out = Vec::with_capacity(p_max as usize);
    for p in 1..=p_max {
        let pf = cast::<F>(p as f64);
        let ln_abs_moment = pf / cast(2.0) * ln2 + math::ln_gamma((pf + F::one()) / cast(2.0)) - half_ln_pi;
        let ln_ratio = cast::<F>(2.0) * ln_abs_moment / pf - math::ln_factorial::<F>(p) / pf;
        out.push((p, ln_ratio.exp()));
    }
    Ok(out)
}

/// Standardized third central moment of a sample (qualitative diagnostic for
/// the non-Gaussian tail of centered exponential maxima).
pub fn skewness<F: Scalar>(samples: &[F]) -> F {
    let n = cast_usize::<F>(samples.len().max(1));
    let mean = math::pairwise_sum(samples) / n;
    let m2: Vec<F> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let m3: Vec<F> = samples.iter().map(|&x| (x - mean) * (x - mean) * (x - mean)).collect();
    let var = math::pairwise_sum(&m2) / n;
    let third = math::pairwise_sum(&m3) / n;
    if var == F::zero() {
        F::zero()
    } else {
        third / var.powf(cast(1.5))
    }
}
