//! Closed-form tail-bound evaluators, the literature comparison bounds, and
//! empirical calibration of the otherwise unspecified constants.
//!
//! Every bound has the shape `P{‖X‖ ≥ threshold + t} ≤ C0·exp(−C1·m(t))`
//! with a regime function `m`; the constants ship with provenance because the
//! theory leaves them as unspecified universal constants.

use serde::{Deserialize, Serialize};

use crate::ensemble::StructParams;
use crate::error::{Error, Result};
use crate::experiment::TailCurve;
use crate::math;
use crate::matrix::SymMatrix;
use crate::scalar::{cast, cast_usize, Scalar};

/// Where a constants table came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "snake_case")]
pub enum Provenance {
    Default,
    Calibrated { ensemble: String },
}

/// The constant family `(C, C0, C1)` of the symmetric-matrix tail bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct BoundConstants<F: Scalar> {
    /// Threshold multiplier: threshold = `C·(b + σ₂√n)`.
    pub c: F,
    /// Tail prefactor, at least 1.
    pub c0: F,
    /// Tail rate.
    pub c1: F,
    #[serde(flatten)]
    pub provenance: Provenance,
}

impl<F: Scalar> BoundConstants<F> {
    pub fn new(c: F, c0: F, c1: F, provenance: Provenance) -> Result<Self> {
        let k = BoundConstants { c, c0, c1, provenance };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > F::zero() && self.c1 > F::zero()) || self.c0 < F::one() {
            return Err(Error::Config(format!(
                "constants must satisfy C > 0, C0 >= 1, C1 > 0; got ({}, {}, {})",
                self.c, self.c0, self.c1
            )));
        }
        Ok(())
    }

    /// Constants from the build-time calibration run on the Wigner-Laplace
    /// n = 64 ensemble (1e5 trials, seed 20260810, R² = 0.988); see the
    /// `calibrate` CLI subcommand for regenerating them.
    pub fn default_table() -> Self {
        BoundConstants {
            c: cast(0.918_588_885_607_704),
            c0: cast(1.0),
            c1: cast(3.227_549_597_204_345),
            provenance: Provenance::Default,
        }
    }
}

/// Regime function `min(t²/σ², t/σ)` shared by the two-regime bounds.
pub fn regime_min<F: Scalar>(t: F, sigma: F) -> F {
    let lin = t / sigma;
    (lin * lin).min(lin)
}

/// Threshold `C·(b + σ₂·√n)` of the symmetric-matrix bound.
pub fn sym_threshold<F: Scalar>(n: usize, params: &StructParams<F>, k: &BoundConstants<F>) -> F {
    k.c * (params.b + params.sigma2 * cast_usize::<F>(n).sqrt())
}

/// Tail value `min(1, C0·exp(−C1·min(t²/σ₁², t/σ₁)))` at excess `t ≥ 0`.
pub fn sym_tail<F: Scalar>(t: F, sigma1: F, k: &BoundConstants<F>) -> F {
    if sigma1 <= F::zero() {
        // degenerate matrix: almost surely bounded by the threshold
        return if t > F::zero() { F::zero() } else { F::one() };
    }
    let t = t.max(F::zero());
    (k.c0 * (-k.c1 * regime_min(t, sigma1)).exp()).min(F::one())
}

/// A grid of `(t, s = threshold + t, bound value)` rows for the symmetric
/// ensemble bound; values are nonincreasing in `t` and lie in `(0, C0]`.
pub fn bound_curve<F: Scalar>(
    n: usize,
    params: &StructParams<F>,
    k: &BoundConstants<F>,
    excesses: &[F],
) -> Vec<(F, F, F)> {
    let thr = sym_threshold(n, params, k);
    excesses
        .iter()
        .map(|&t| (t, thr + t, sym_tail(t, params.sigma1, k)))
        .collect()
}

/// Diagonal-case threshold `C·maxψ·log n`.
pub fn diag_threshold<F: Scalar>(max_psi: F, n: usize, k: &BoundConstants<F>) -> F {
    k.c * max_psi * cast_usize::<F>(n).ln()
}

/// Diagonal-case tail, same two-regime shape in `maxψ`.
pub fn diag_tail<F: Scalar>(t: F, max_psi: F, k: &BoundConstants<F>) -> F {
    sym_tail(t, max_psi, k)
}

/// Expectation bound for diagonal matrices: `max_i scales*_i · ln(i+1)` over
/// the decreasing rearrangement of the scales (i is 1-based).
pub fn expectation_bound_diag<F: Scalar>(scales: &[F]) -> F {
    let mut sorted = scales.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite scales"));
    sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| s * cast_usize::<F>(i + 2).ln())
        .fold(F::zero(), |a, b| a.max(b))
}

/// Threshold `C(α)·(b(α) + σ₂(α)·√n)` of the ψ_α generalization; only the
/// range α ∈ [1, 2] is supported.
pub fn sym_threshold_alpha<F: Scalar>(n: usize, params: &StructParams<F>, k: &BoundConstants<F>) -> Result<F> {
    check_alpha(params.alpha)?;
    Ok(k.c * (params.b + params.sigma2 * cast_usize::<F>(n).sqrt()))
}

/// ψ_α tail: purely linear regime `C4·exp(−C5·t/σ₁(α))`.
pub fn sym_tail_alpha<F: Scalar>(t: F, sigma1_alpha: F, alpha: F, k: &BoundConstants<F>) -> Result<F> {
    check_alpha(alpha)?;
    if sigma1_alpha <= F::zero() {
        return Ok(if t > F::zero() { F::zero() } else { F::one() });
    }
    let t = t.max(F::zero());
    Ok((k.c0 * (-k.c1 * t / sigma1_alpha).exp()).min(F::one()))
}

/// Diagonal ψ_α threshold `C(α)·maxψ·(ln n)^{1/α}`.
pub fn diag_threshold_alpha<F: Scalar>(max_psi: F, n: usize, alpha: F, k: &BoundConstants<F>) -> Result<F> {
    check_alpha(alpha)?;
    Ok(k.c * max_psi * cast_usize::<F>(n).ln().powf(F::one() / alpha))
}

fn check_alpha<F: Scalar>(alpha: F) -> Result<()> {
    if alpha < F::one() || alpha > cast(2.0) {
        return Err(Error::Domain(format!(
            "tail class alpha = {alpha} outside the supported range [1, 2]"
        )));
    }
    Ok(())
}

/// Scalar Bernstein tail `exp(−c·min(t²/(K²‖a‖₂²), t/(K‖a‖_∞)))` for the
/// weighted sum `Σ a_i η_i` of centered variables with `max psi₁ = K`.
pub fn bernstein_tail<F: Scalar>(a: &[F], psi: F, t: F, c: F) -> Result<F> {
    if psi <= F::zero() || c <= F::zero() {
        return Err(Error::Domain("bernstein needs psi > 0 and c > 0".into()));
    }
    if t < F::zero() {
        return Err(Error::Domain(format!("bernstein needs t >= 0, got {t}")));
    }
    let l2 = a.iter().map(|&x| x * x).fold(F::zero(), |s, v| s + v).sqrt();
    let linf = a.iter().map(|&x| x.abs()).fold(F::zero(), |s, v| s.max(v));
    if l2 == F::zero() {
        return Err(Error::Domain("bernstein needs a nonzero weight vector".into()));
    }
    let quad = t * t / (psi * psi * l2 * l2);
    let lin = t / (psi * linf);
    Ok((-c * quad.min(lin)).exp())
}

/// The three literature comparison bounds for a standard-deviation profile.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LiteratureBounds<F> {
    /// `max b_ij · √n`.
    pub vershynin: F,
    /// `max_i √(Σ_j b_ij²) + √(ln n)·max b_ij`.
    pub bvh: F,
    /// `max_i √(Σ_j b_ij²) + max_i rowmax*_i·√(ln i)` with rows permuted so
    /// the row maxima are nonincreasing (i is 1-based).
    pub lvy: F,
}

pub fn literature_bounds<F: Scalar>(b: &SymMatrix<F>) -> LiteratureBounds<F> {
    let n = b.n();
    let nf = cast_usize::<F>(n);
    let max_b = b.max_abs();
    let row_l2 = (0..n)
        .map(|i| b.row(i).iter().map(|&x| x * x).fold(F::zero(), |s, v| s + v).sqrt())
        .fold(F::zero(), |a, v| a.max(v));
    let vershynin = max_b * nf.sqrt();
    let bvh = row_l2 + nf.ln().sqrt() * max_b;
    let mut row_max: Vec<F> = (0..n)
        .map(|i| b.row(i).iter().fold(F::zero(), |s, &v| s.max(v.abs())))
        .collect();
    row_max.sort_by(|a, b| b.partial_cmp(a).expect("finite scales"));
    let rearranged = row_max
        .iter()
        .enumerate()
        .map(|(i, &m)| m * cast_usize::<F>(i + 1).ln().sqrt())
        .fold(F::zero(), |a, v| a.max(v));
    LiteratureBounds { vershynin, bvh, lvy: row_l2 + rearranged }
}

/// Result of fitting constants against an empirical tail curve.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration<F: Scalar> {
    pub constants: BoundConstants<F>,
    /// R² of the `−ln p` versus `m(t)` fit.
    pub r_squared: F,
    /// Number of qualifying grid points used in the fit.
    pub points: usize,
}

/// Qualifying window for the rate fit: `p̂` strictly inside this range.
pub const CALIBRATION_P_RANGE: (f64, f64) = (1e-4, 0.5);

/// Fit `(C, C0, C1)` to an empirical tail curve:
/// `C` from the interpolated median of `‖X‖`, `(C0, C1)` from a least-squares
/// fit of `−ln(upper CI)` against `m(t) = min(t²/σ₁², t/σ₁)` over the grid
/// points whose `p̂` lies in the qualifying window. The upper CI (rather
/// than the point estimate) biases the fit toward conservative constants.
pub fn calibrate_constants<F: Scalar>(
    curve: &TailCurve<F>,
    n: usize,
    params: &StructParams<F>,
    ensemble: &str,
) -> Result<Calibration<F>> {
    let mut rows: Vec<_> = curve.rows.iter().collect();
    if rows.is_empty() {
        return Err(Error::Calibration("empty curve".into()));
    }
    rows.sort_by(|a, b| a.s.partial_cmp(&b.s).expect("finite thresholds"));

    // median of ‖X‖ by linear interpolation of the exceedance curve at 1/2
    let half = cast::<F>(0.5);
    let mut median = None;
    for w in rows.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo.p_hat >= half && hi.p_hat < half {
            let span = lo.p_hat - hi.p_hat;
            let frac = if span == F::zero() { F::zero() } else { (lo.p_hat - half) / span };
            median = Some(lo.s + (hi.s - lo.s) * frac);
            break;
        }
    }
    let median = median.ok_or_else(|| {
        Error::Calibration("curve does not bracket the median (no p_hat crossing of 1/2)".into())
    })?;

    let denom = params.b + params.sigma2 * cast_usize::<F>(n).sqrt();
    if denom <= F::zero() {
        return Err(Error::Calibration("degenerate structure parameters: b + sigma2*sqrt(n) = 0".into()));
    }
    let c = median / denom;

    let (p_lo, p_hi) = CALIBRATION_P_RANGE;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in &rows {
        let p = r.p_hat.to_f64().unwrap_or(f64::NAN);
        if p > p_lo && p < p_hi && r.ci_high > F::zero() {
            xs.push(regime_min(r.t.max(F::zero()), params.sigma1));
            ys.push(-(r.ci_high.ln()));
        }
    }
    if xs.len() < 5 {
        return Err(Error::Calibration(format!(
            "only {} qualifying grid points with p_hat in ({p_lo}, {p_hi}); need at least 5",
            xs.len()
        )));
    }
    let (slope, intercept, r2) = math::linear_fit(&xs, &ys)?;
    if slope <= F::zero() {
        return Err(Error::Calibration(format!("nonpositive fitted rate C1 = {slope}")));
    }
    let c0 = (-intercept).exp().max(F::one());
    let constants = BoundConstants::new(
        c,
        c0,
        slope,
        Provenance::Calibrated { ensemble: ensemble.to_string() },
    )?;
    Ok(Calibration { constants, r_squared: r2, points: xs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::CurveRow;

    fn consts(c: f64, c0: f64, c1: f64) -> BoundConstants<f64> {
        BoundConstants::new(c, c0, c1, Provenance::Default).unwrap()
    }

    fn params(alpha: f64, b: f64, s1: f64, s2: f64) -> StructParams<f64> {
        StructParams { alpha, b, sigma1: s1, sigma2: s2, max_diag: b }
    }

    #[test]
    fn threshold_examples() {
        let k = consts(1.0, 1.0, 1.0);
        assert_eq!(sym_threshold(16, &params(1.0, 0.0, 0.0, 0.0), &k), 0.0);
        assert!((sym_threshold(16, &params(1.0, 2.0, 1.0, 1.0), &k) - 6.0).abs() < 1e-12);
        // diagonal collapse: sigma2 = 0
        assert!((sym_threshold(16, &params(1.0, 2.0, 2.0, 0.0), &k) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tail_examples() {
        let k = consts(1.0, 1.0, 1.0);
        assert_eq!(sym_tail(0.0, 1.0, &k), 1.0);
        // crossover point: both regimes agree at t = sigma
        assert!((sym_tail(1.0, 1.0, &k) - (-1.0f64).exp()).abs() < 1e-12);
        // linear regime wins at t = 2 sigma
        assert!((sym_tail(2.0, 1.0, &k) - (-2.0f64).exp()).abs() < 1e-12);
        // degenerate sigma
        assert_eq!(sym_tail(0.5, 0.0, &k), 0.0);
        assert_eq!(sym_tail(0.0, 0.0, &k), 1.0);
        // clipping at 1
        let k2 = consts(1.0, 5.0, 1.0);
        assert_eq!(sym_tail(0.0, 1.0, &k2), 1.0);
    }

    #[test]
    fn tail_monotone_and_continuous_at_crossover() {
        let k = consts(1.0, 2.0, 0.7);
        let mut prev = f64::INFINITY;
        for i in 0..400 {
            let t = i as f64 * 0.01;
            let v = sym_tail(t, 1.3, &k);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        let eps = 1e-9;
        let a = sym_tail(1.3 - eps, 1.3, &k);
        let b = sym_tail(1.3 + eps, 1.3, &k);
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn bound_curve_shape() {
        let k = consts(0.9, 1.3, 2.0);
        let p = params(1.0, 1.2, 1.0, 0.7);
        let ts: Vec<f64> = (0..=16).map(|i| i as f64 * 0.25).collect();
        let curve = bound_curve(64, &p, &k, &ts);
        let thr = sym_threshold(64, &p, &k);
        let mut prev = f64::INFINITY;
        for &(t, s, v) in &curve {
            assert!((s - (thr + t)).abs() < 1e-12);
            assert!(v > 0.0 && v <= k.c0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn thresholds_are_one_homogeneous() {
        let k = consts(0.9, 1.2, 2.0);
        let p1 = params(1.0, 1.5, 1.0, 0.8);
        let p2 = params(1.0, 3.0, 2.0, 1.6);
        assert!((2.0 * sym_threshold(64, &p1, &k) - sym_threshold(64, &p2, &k)).abs() < 1e-12);
        assert!((sym_tail(0.7, 1.0, &k) - sym_tail(1.4, 2.0, &k)).abs() < 1e-15);
    }

    #[test]
    fn diagonal_case_values() {
        let k = consts(1.0, 1.0, 1.0);
        assert_eq!(diag_threshold(1.0, 1, &k), 0.0);
        assert!((diag_threshold(1.0, 8, &k) - 8f64.ln()).abs() < 1e-12);
        // expectation bound uses the decreasing rearrangement; for scales
        // (3, 1, 2) the maximum of {3 ln 2, 2 ln 3, 1 ln 4} is 2 ln 3
        let v = expectation_bound_diag(&[3.0f64, 1.0, 2.0]);
        assert!((v - 2.0 * 3f64.ln()).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn psi_alpha_variants() {
        let k = consts(1.0, 1.0, 1.0);
        // alpha = 1 reduces to the linear branch
        let p = params(1.0, 1.0, 1.0, 1.0);
        let thr5 = sym_threshold_alpha(16, &p, &k).unwrap();
        assert!((thr5 - sym_threshold(16, &p, &k)).abs() < 1e-12);
        assert!((sym_tail_alpha(2.0, 1.0, 1.0, &k).unwrap() - (-2.0f64).exp()).abs() < 1e-12);
        // t = 0 gives C4 (clipped)
        assert_eq!(sym_tail_alpha(0.0, 1.0, 1.5, &k).unwrap(), 1.0);
        // alpha = 2, n = 16, max psi = 1: diagonal threshold sqrt(ln 16)
        let thr = diag_threshold_alpha(1.0, 16, 2.0, &k).unwrap();
        assert!((thr - 16f64.ln().sqrt()).abs() < 1e-12);
        // alpha < 1 unsupported
        assert!(sym_tail_alpha(1.0, 1.0, 0.7, &k).is_err());
        assert!(sym_threshold_alpha(16, &params(0.7, 1.0, 1.0, 1.0), &k).is_err());
    }

    #[test]
    fn bernstein_examples() {
        assert!((bernstein_tail(&[1.0f64], 1.0, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // uniform weights: min(t²/K², t√n/K)
        let n = 16usize;
        let a = vec![1.0f64 / (n as f64).sqrt(); n];
        let t = 2.0f64;
        let got = bernstein_tail(&a, 1.0, t, 1.0).unwrap();
        let expect = (-(t * t).min(t * (n as f64).sqrt())).exp();
        assert!((got - expect).abs() < 1e-12);
        // single coordinate reduces to the scalar case
        let got = bernstein_tail(&[1.0f64], 2.0, 3.0, 1.0).unwrap();
        let expect = (-(9.0f64 / 4.0).min(1.5)).exp();
        assert!((got - expect).abs() < 1e-12);
        assert!(bernstein_tail(&[0.0f64, 0.0], 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn literature_values() {
        // diagonal identity profile
        let eye = SymMatrix::from_diag(&[1.0f64; 8]);
        let lb = literature_bounds(&eye);
        assert!((lb.bvh - (1.0 + 8f64.ln().sqrt())).abs() < 1e-12);
        // constant profile
        let mut wig = SymMatrix::zeros(8);
        for i in 0..8 {
            for j in 0..=i {
                wig.set_sym(i, j, 1.0f64);
            }
        }
        let lb = literature_bounds(&wig);
        assert!((lb.vershynin - 8f64.sqrt()).abs() < 1e-12);
        assert!((lb.bvh - (8f64.sqrt() + 8f64.ln().sqrt())).abs() < 1e-12);
        // n = 1: all three coincide
        let one = SymMatrix::from_diag(&[0.7f64]);
        let lb = literature_bounds(&one);
        assert!((lb.vershynin - 0.7).abs() < 1e-12);
        assert!((lb.bvh - 0.7).abs() < 1e-12);
        assert!((lb.lvy - 0.7).abs() < 1e-12);
        // bvh <= maxb (sqrt n + sqrt log n) exactly
        for m in [&eye, &wig] {
            let lb = literature_bounds(m);
            let n = m.n() as f64;
            assert!(lb.bvh <= m.max_abs() * (n.sqrt() + n.ln().sqrt()) + 1e-12);
        }
    }

    #[test]
    fn lvy_rearrangement_order() {
        // rows with maxima (1, 3, 2) are used in order (3, 2, 1)
        let mut b = SymMatrix::zeros(3);
        b.set_sym(0, 0, 1.0f64);
        b.set_sym(1, 1, 3.0);
        b.set_sym(2, 2, 2.0);
        let lb = literature_bounds(&b);
        let expect_term = (3.0f64 * 1f64.ln().sqrt())
            .max(2.0 * 2f64.ln().sqrt())
            .max(1.0 * 3f64.ln().sqrt());
        assert!((lb.lvy - (3.0 + expect_term)).abs() < 1e-12);
    }

    fn synthetic_curve(f: impl Fn(f64) -> f64, sigma1: f64, thr: f64) -> TailCurve<f64> {
        let rows = (0..=16)
            .map(|i| {
                let t = i as f64 * 0.25;
                let m = regime_min(t, sigma1);
                let p = f(m).min(1.0);
                CurveRow {
                    t,
                    s: thr + t,
                    exceed: (p * 1e6) as usize,
                    n: 1_000_000,
                    p_hat: p,
                    ci_low: p,
                    ci_high: p,
                    bound: 1.0,
                }
            })
            .collect();
        TailCurve { rows, trials: 1_000_000, failed: 0 }
    }

    #[test]
    fn calibration_exact_fits() {
        let par = params(1.0, 1.0, 1.0, 1.0);
        // p = e^{-2m}: C1 = 2, C0 = 1
        let curve = synthetic_curve(|m| (-2.0 * m).exp(), 1.0, 5.0);
        let cal = calibrate_constants(&curve, 16, &par, "synthetic").unwrap();
        assert!((cal.constants.c1 - 2.0).abs() < 1e-9, "c1 = {}", cal.constants.c1);
        assert!((cal.constants.c0 - 1.0).abs() < 1e-9);
        assert!((cal.r_squared - 1.0).abs() < 1e-9);
        // p = 3 e^{-m}: C0 = 3, C1 = 1
        let curve = synthetic_curve(|m| 3.0 * (-m).exp(), 1.0, 5.0);
        let cal = calibrate_constants(&curve, 16, &par, "synthetic").unwrap();
        assert!((cal.constants.c1 - 1.0).abs() < 1e-9);
        assert!((cal.constants.c0 - 3.0).abs() < 1e-9);
        // the median row sits where p crosses 1/2: threshold + interpolated t
        assert!(cal.constants.c > 0.0);
    }

    #[test]
    fn calibration_invariant_to_row_order() {
        let par = params(1.0, 1.0, 1.0, 1.0);
        let mut curve = synthetic_curve(|m| (-1.5 * m).exp(), 1.0, 4.0);
        let a = calibrate_constants(&curve, 16, &par, "x").unwrap();
        curve.rows.reverse();
        let b = calibrate_constants(&curve, 16, &par, "x").unwrap();
        assert_eq!(a.constants.c1, b.constants.c1);
        assert_eq!(a.constants.c0, b.constants.c0);
        assert_eq!(a.constants.c, b.constants.c);
    }

    #[test]
    fn calibration_needs_enough_points() {
        let par = params(1.0, 1.0, 1.0, 1.0);
        // curve collapses immediately: too few qualifying points
        let curve = synthetic_curve(|m| if m == 0.0 { 1.0 } else { 1e-9 }, 1.0, 4.0);
        assert!(calibrate_constants(&curve, 16, &par, "x").is_err());
    }

    #[test]
    fn default_table_is_valid() {
        BoundConstants::<f64>::default_table().validate().unwrap();
    }

    #[test]
    fn constants_serde_roundtrip() {
        for k in [
            BoundConstants::new(0.9, 1.0, 3.2, Provenance::Calibrated { ensemble: "x".into() }).unwrap(),
            BoundConstants::<f64>::default_table(),
        ] {
            let json = serde_json::to_string(&k).unwrap();
            let back: BoundConstants<f64> = serde_json::from_str(&json).unwrap();
            assert_eq!(back, k);
        }
    }
}
