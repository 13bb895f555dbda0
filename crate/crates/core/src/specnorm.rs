//! Spectral norms of dense symmetric matrices.
//!
//! Two paths share one contract:
//! * `spectral_norm_exact` — full symmetric eigensolve (Householder
//!   tridiagonalization followed by implicit-shift QL), capped at
//!   [`DENSE_CAP`].
//! * `spectral_norm_iter` — power iteration with Rayleigh-quotient tracking,
//!   run on the matrix and on spectrally shifted copies so that both extremes
//!   of the spectrum are certified; stops on the eigenpair residual.
//!
//! Both paths canonicalize the overall sign of the input first (the spectral
//! norm is invariant under `A -> -A`), so `norm(A)` and `norm(-A)` are
//! bit-identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::rng::Stream;
use crate::scalar::{cast, cast_usize, Scalar};

/// Default cap for the dense eigensolve path.
pub const DENSE_CAP: usize = 2048;

/// Relative symmetry tolerance for validating custom inputs.
pub const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    Exact,
    Iterative,
}

impl std::fmt::Display for NormMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormMethod::Exact => write!(f, "exact"),
            NormMethod::Iterative => write!(f, "iterative"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct NormResult<F> {
    pub value: F,
    pub method: NormMethod,
    /// `‖Av − λv‖` for the certifying eigenpair; 0 for the exact path.
    pub residual: F,
    pub iterations: usize,
}

fn validate_symmetric<F: Scalar>(a: &SymMatrix<F>) -> Result<()> {
    if !a.is_symmetric_within(cast(SYMMETRY_RTOL)) {
        return Err(Error::Validation(format!(
            "matrix is not symmetric within relative tolerance {SYMMETRY_RTOL} (max asymmetry {})",
            a.max_asymmetry()
        )));
    }
    Ok(())
}

/// Flip the sign of the whole matrix if its first nonzero entry is negative.
/// The spectral norm is sign-invariant, and working on the canonical
/// representative makes `norm(A) == norm(-A)` exact.
fn canonical_sign<F: Scalar>(a: &SymMatrix<F>) -> Option<SymMatrix<F>> {
    for &v in a.as_slice() {
        if v > F::zero() {
            return None;
        }
        if v < F::zero() {
            return Some(a.neg());
        }
    }
    None
}

/// Exact spectral norm via the full symmetric eigensolve.
pub fn spectral_norm_exact<F: Scalar>(a: &SymMatrix<F>) -> Result<NormResult<F>> {
    validate_symmetric(a)?;
    if a.n() > DENSE_CAP {
        return Err(Error::Capacity(format!(
            "n = {} exceeds the dense eigensolve cap {DENSE_CAP}; use the iterative path",
            a.n()
        )));
    }
    let flipped = canonical_sign(a);
    let work = flipped.as_ref().unwrap_or(a);
    let eigs = symmetric_eigenvalues(work)?;
    let value = eigs.iter().fold(F::zero(), |m, &l| m.max(l.abs()));
    Ok(NormResult { value, method: NormMethod::Exact, residual: F::zero(), iterations: 0 })
}

/// All eigenvalues, ascending.
pub fn symmetric_eigenvalues<F: Scalar>(a: &SymMatrix<F>) -> Result<Vec<F>> {
    let n = a.n();
    let mut work = a.as_slice().to_vec();
    let mut d = vec![F::zero(); n];
    let mut e = vec![F::zero(); n];
    tridiagonalize(&mut work, n, &mut d, &mut e, false);
    ql_implicit(&mut d, &mut e, n, None)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(d)
}

/// Full eigendecomposition; eigenvalues ascending, `vectors[k]` the unit
/// eigenvector for `values[k]`.
pub fn symmetric_eigen<F: Scalar>(a: &SymMatrix<F>) -> Result<(Vec<F>, Vec<Vec<F>>)> {
    let n = a.n();
    let mut work = a.as_slice().to_vec();
    let mut d = vec![F::zero(); n];
    let mut e = vec![F::zero(); n];
    tridiagonalize(&mut work, n, &mut d, &mut e, true);
    ql_implicit(&mut d, &mut e, n, Some(&mut work))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalues are finite"));
    let values: Vec<F> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<F>> = order
        .iter()
        .map(|&col| (0..n).map(|row| work[row * n + col]).collect())
        .collect();
    Ok((values, vectors))
}

/// The algebraically largest eigenpair, with its residual.
pub fn top_eigvec<F: Scalar>(a: &SymMatrix<F>) -> Result<(F, Vec<F>)> {
    validate_symmetric(a)?;
    if a.n() > DENSE_CAP {
        return Err(Error::Capacity(format!("n = {} exceeds the dense cap {DENSE_CAP}", a.n())));
    }
    let (values, vectors) = symmetric_eigen(a)?;
    let lambda = *values.last().expect("n >= 1");
    let v = vectors.into_iter().next_back().expect("n >= 1");
    let mut av = vec![F::zero(); a.n()];
    a.matvec(&v, &mut av);
    let res = residual_norm(&av, lambda, &v);
    let allow = cast::<F>(1e-8).max(F::epsilon() * cast(1e8)) * F::one().max(a.frobenius());
    if res > allow {
        return Err(Error::Numerical(format!("eigenpair residual {res} exceeds {allow}")));
    }
    Ok((lambda, v))
}

/// `⟨Ax, x⟩`.
pub fn quadratic_form<F: Scalar>(a: &SymMatrix<F>, x: &[F]) -> Result<F> {
    if x.len() != a.n() {
        return Err(Error::Validation(format!(
            "dimension mismatch: matrix is {0}x{0}, vector has length {1}",
            a.n(),
            x.len()
        )));
    }
    let mut ax = vec![F::zero(); a.n()];
    a.matvec(x, &mut ax);
    Ok(dot(&ax, x))
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).fold(F::zero(), |s, v| s + v)
}

fn residual_norm<F: Scalar>(av: &[F], lambda: F, v: &[F]) -> F {
    av.iter()
        .zip(v)
        .map(|(&a, &x)| {
            let r = a - lambda * x;
            r * r
        })
        .fold(F::zero(), |s, v| s + v)
        .sqrt()
}

struct PowerRun<F> {
    /// Rayleigh quotient of the best iterate (an eigenvalue of the shifted
    /// operator when converged).
    lambda: F,
    residual: F,
    vector: Vec<F>,
    iterations: usize,
    converged: bool,
}

/// Power iteration on `A − shift·I`, certifying via the eigenpair residual
/// (which equals the residual on `A` for eigenvalue `lambda + shift`).
fn power_loop<F: Scalar>(
    a: &SymMatrix<F>,
    shift: F,
    mut v: Vec<F>,
    max_iter: usize,
    threshold: F,
) -> PowerRun<F> {
    let n = a.n();
    let mut y = vec![F::zero(); n];
    let mut best_lambda = F::zero();
    let mut best_res = F::infinity();
    let mut best_v = v.clone();
    for it in 1..=max_iter {
        a.matvec(&v, &mut y);
        if shift != F::zero() {
            for (yi, &vi) in y.iter_mut().zip(&v) {
                *yi -= shift * vi;
            }
        }
        let lambda = dot(&v, &y);
        let res = residual_norm(&y, lambda, &v);
        if res < best_res {
            best_res = res;
            best_lambda = lambda;
            best_v.copy_from_slice(&v);
        }
        if res <= threshold {
            return PowerRun { lambda, residual: res, vector: v, iterations: it, converged: true };
        }
        let ny = dot(&y, &y).sqrt();
        if ny == F::zero() {
            // v spans the kernel of the shifted operator: exact eigenpair.
            return PowerRun {
                lambda: F::zero(),
                residual: F::zero(),
                vector: v,
                iterations: it,
                converged: true,
            };
        }
        for (vi, &yi) in v.iter_mut().zip(&y) {
            *vi = yi / ny;
        }
    }
    PowerRun {
        lambda: best_lambda,
        residual: best_res,
        vector: best_v,
        iterations: max_iter,
        converged: false,
    }
}

/// Certified iterative estimate of `max |λ|`.
///
/// A short probe run on `A` locates a Rayleigh value; two shifted runs then
/// pin down the extreme eigenvalues on both sides of it. The deterministic
/// start vectors come from `stream`.
pub fn spectral_norm_iter<F: Scalar>(
    a: &SymMatrix<F>,
    tol: F,
    max_iter: usize,
    stream: &mut Stream,
) -> Result<NormResult<F>> {
    if tol <= F::zero() {
        return Err(Error::Domain(format!("iterative tolerance {tol} must be positive")));
    }
    validate_symmetric(a)?;
    let flipped = canonical_sign(a);
    let a = flipped.as_ref().unwrap_or(a);

    let n = a.n();
    let frob = a.frobenius();
    if frob == F::zero() {
        return Ok(NormResult { value: F::zero(), method: NormMethod::Iterative, residual: F::zero(), iterations: 0 });
    }
    let threshold = tol * frob / cast_usize::<F>(n).sqrt();

    // Probe run: may stall on symmetric spectra, its Rayleigh value is still
    // an interior point that splits the two extremes.
    let probe = power_loop(a, F::zero(), stream.unit_vector(n), max_iter.min(200), threshold);
    let mut iterations = probe.iterations;

    let (first, second) = if probe.converged {
        // One extreme is already certified; the opposite one is the dominant
        // eigenvalue of the copy shifted by it.
        let run2 = power_loop(a, probe.lambda, stream.unit_vector(n), max_iter, threshold);
        iterations += run2.iterations;
        if !run2.converged {
            return Err(Error::Convergence {
                value: (run2.lambda + probe.lambda).to_f64().unwrap_or(f64::NAN),
                residual: run2.residual.to_f64().unwrap_or(f64::NAN),
                iterations,
            });
        }
        (
            (probe.lambda, probe.residual, probe.vector),
            (run2.lambda + probe.lambda, run2.residual, run2.vector),
        )
    } else {
        let mu = probe.lambda;
        let run2 = power_loop(a, mu, stream.unit_vector(n), max_iter, threshold);
        iterations += run2.iterations;
        if !run2.converged {
            return Err(Error::Convergence {
                value: (run2.lambda + mu).to_f64().unwrap_or(f64::NAN),
                residual: run2.residual.to_f64().unwrap_or(f64::NAN),
                iterations,
            });
        }
        let e1 = run2.lambda + mu;
        let run3 = power_loop(a, e1, stream.unit_vector(n), max_iter, threshold);
        iterations += run3.iterations;
        if !run3.converged {
            return Err(Error::Convergence {
                value: (run3.lambda + e1).to_f64().unwrap_or(f64::NAN),
                residual: run3.residual.to_f64().unwrap_or(f64::NAN),
                iterations,
            });
        }
        ((e1, run2.residual, run2.vector), (run3.lambda + e1, run3.residual, run3.vector))
    };

    let (value, residual) = if first.0.abs() >= second.0.abs() {
        (first.0.abs(), first.1)
    } else {
        (second.0.abs(), second.1)
    };
    Ok(NormResult { value, method: NormMethod::Iterative, residual, iterations })
}

/// Householder reduction to tridiagonal form (classic tred2). `a` is the
/// row-major buffer; on exit with `vectors = true` it holds the accumulated
/// orthogonal transform, column `k` matching `d[k]`/`e[k]`.
fn tridiagonalize<F: Scalar>(a: &mut [F], n: usize, d: &mut [F], e: &mut [F], vectors: bool) {
    let at = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = F::zero();
        if l > 0 {
            let mut scale = F::zero();
            for k in 0..=l {
                scale += a[at(i, k)].abs();
            }
            if scale == F::zero() {
                e[i] = a[at(i, l)];
            } else {
                for k in 0..=l {
                    a[at(i, k)] = a[at(i, k)] / scale;
                    h += a[at(i, k)] * a[at(i, k)];
                }
                let f = a[at(i, l)];
                let g = if f >= F::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[at(i, l)] = f - g;
                let mut fsum = F::zero();
                for j in 0..=l {
                    if vectors {
                        a[at(j, i)] = a[at(i, j)] / h;
                    }
                    let mut g = F::zero();
                    for k in 0..=j {
                        g += a[at(j, k)] * a[at(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += a[at(k, j)] * a[at(i, k)];
                    }
                    e[j] = g / h;
                    fsum += e[j] * a[at(i, j)];
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f = a[at(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[at(j, k)] = a[at(j, k)] - (f * e[k] + g * a[at(i, k)]);
                    }
                }
            }
        } else {
            e[i] = a[at(i, l)];
        }
        d[i] = h;
    }
    if vectors {
        d[0] = F::zero();
    }
    e[0] = F::zero();
    for i in 0..n {
        if vectors {
            if d[i] != F::zero() {
                for j in 0..i {
                    let mut g = F::zero();
                    for k in 0..i {
                        g += a[at(i, k)] * a[at(k, j)];
                    }
                    for k in 0..i {
                        a[at(k, j)] = a[at(k, j)] - g * a[at(k, i)];
                    }
                }
            }
            d[i] = a[at(i, i)];
            a[at(i, i)] = F::one();
            for j in 0..i {
                a[at(j, i)] = F::zero();
                a[at(i, j)] = F::zero();
            }
        } else {
            d[i] = a[at(i, i)];
        }
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (classic tql2).
/// `z`, when present, accumulates the rotations into eigenvector columns.
fn ql_implicit<F: Scalar>(d: &mut [F], e: &mut [F], n: usize, mut z: Option<&mut [F]>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = F::zero();
    let eps = F::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numerical(format!(
                    "QL iteration did not converge for eigenvalue index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] + e[l]);
            let mut r = g.hypot(F::one());
            let sign_r = if g >= F::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = F::one();
            let mut c = F::one();
            let mut p = F::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == F::zero() {
                    d[i + 1] -= p;
                    e[m] = F::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + (c + c) * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                        zz[k * n + i] = c * zz[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = F::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    fn random_sym(n: usize, seed: u64) -> SymMatrix<f64> {
        let mut s = Stream::new(seed);
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set_sym(i, j, s.standard_normal::<f64>());
            }
        }
        m
    }

    // Independent oracle: eigenvalues by inertia counts (LDL^T pivot signs of
    // A - xI) plus bisection per index. No code shared with the QL path.
    fn count_eigs_below(a: &SymMatrix<f64>, x: f64) -> Option<usize> {
        let n = a.n();
        let mut m: Vec<f64> = a.as_slice().to_vec();
        for i in 0..n {
            m[i * n + i] -= x;
        }
        let mut negatives = 0;
        for k in 0..n {
            let piv = m[k * n + k];
            if piv.abs() < 1e-300 {
                return None; // hit an exact pivot breakdown, caller nudges x
            }
            if piv < 0.0 {
                negatives += 1;
            }
            for i in (k + 1)..n {
                let factor = m[i * n + k] / piv;
                for j in k..n {
                    m[i * n + j] -= factor * m[k * n + j];
                }
            }
        }
        Some(negatives)
    }

    fn eig_by_inertia_bisection(a: &SymMatrix<f64>) -> Vec<f64> {
        let n = a.n();
        let r = a.inf_norm() + 1.0;
        let count = |x: f64| -> usize {
            let mut x = x;
            loop {
                if let Some(c) = count_eigs_below(a, x) {
                    return c;
                }
                x += 1e-11 * r;
            }
        };
        (0..n)
            .map(|idx| {
                let mut lo = -r;
                let mut hi = r;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if count(mid) > idx {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    #[test]
    fn exact_diagonal_examples() {
        let m = SymMatrix::from_diag(&[1.0f64, -3.0, 2.0]);
        let r = spectral_norm_exact(&m).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
        assert_eq!(r.residual, 0.0);

        let m = SymMatrix::from_rows(2, vec![0.0f64, 2.0, 2.0, 0.0]).unwrap();
        let r = spectral_norm_exact(&m).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_matches_inertia_oracle() {
        for seed in 0..10 {
            let a = random_sym(6, seed);
            let got = symmetric_eigenvalues(&a).unwrap();
            let want = eig_by_inertia_bisection(&a);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-8, "seed {seed}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn asymmetric_rejected_and_cap_enforced() {
        let mut m = SymMatrix::zeros(2);
        m.set_sym(0, 1, 1.0f64);
        // poke asymmetry through the raw constructor
        let bad = SymMatrix::from_rows(2, vec![0.0, 1.0, 1.0 + 1e-6, 0.0]);
        assert!(bad.is_err());
        let big = SymMatrix::<f64>::zeros(DENSE_CAP + 1);
        assert!(matches!(spectral_norm_exact(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn norm_of_negation_is_bit_identical() {
        for seed in [1u64, 2, 3] {
            let a = random_sym(12, seed);
            let x = spectral_norm_exact(&a).unwrap().value;
            let y = spectral_norm_exact(&a.neg()).unwrap().value;
            assert_eq!(x.to_bits(), y.to_bits());
            let mut s1 = Stream::new(7);
            let mut s2 = Stream::new(7);
            let xi = spectral_norm_iter(&a, 1e-10, 20_000, &mut s1).unwrap().value;
            let yi = spectral_norm_iter(&a.neg(), 1e-10, 20_000, &mut s2).unwrap().value;
            assert_eq!(xi.to_bits(), yi.to_bits());
        }
    }

    #[test]
    fn exact_homogeneity_within_ulps() {
        let a = random_sym(10, 4);
        let base = spectral_norm_exact(&a).unwrap().value;
        for c in [2.0f64, 0.5, 3.0] {
            let scaled = spectral_norm_exact(&a.scale(c)).unwrap().value;
            let expect = c.abs() * base;
            let ulp = expect * f64::EPSILON;
            assert!((scaled - expect).abs() <= 4.0 * ulp, "c={c}: {scaled} vs {expect}");
        }
    }

    #[test]
    fn iterative_identity() {
        let m = SymMatrix::from_diag(&[1.0f64; 16]);
        let mut s = Stream::new(3);
        let r = spectral_norm_iter(&m, 1e-10, 1000, &mut s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn iterative_negative_extreme_wins() {
        let m = SymMatrix::from_diag(&[5.0f64, -9.0, 1.0]);
        let mut s = Stream::new(11);
        let r = spectral_norm_iter(&m, 1e-10, 5000, &mut s).unwrap();
        assert!((r.value - 9.0).abs() < 1e-8, "value {}", r.value);
    }

    #[test]
    fn iterative_symmetric_spectrum() {
        // eigenvalues are exactly +-2: the plain power iteration oscillates,
        // the shifted runs resolve it
        let m = SymMatrix::from_rows(2, vec![0.0f64, 2.0, 2.0, 0.0]).unwrap();
        let mut s = Stream::new(1);
        let r = spectral_norm_iter(&m, 1e-10, 5000, &mut s).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn iterative_zero_matrix() {
        let m = SymMatrix::<f64>::zeros(8);
        let mut s = Stream::new(1);
        let r = spectral_norm_iter(&m, 1e-8, 100, &mut s).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn iterative_agrees_with_exact() {
        // 100 random instances spread over the three sizes
        let mut case = 0u64;
        for (n, count) in [(32usize, 40u64), (128, 40), (256, 20)] {
            for _ in 0..count {
                case += 1;
                let a = random_sym(n, case);
                let exact = spectral_norm_exact(&a).unwrap().value;
                let mut s = Stream::new(case ^ 0xabc);
                let tol = 1e-9;
                let it = spectral_norm_iter(&a, tol, 400_000, &mut s).unwrap();
                assert!(
                    (it.value - exact).abs() <= tol.max(1e-8) * (1.0 + exact),
                    "n={n} case {case}: iter {} vs exact {exact} (residual {})",
                    it.value,
                    it.residual
                );
            }
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let eye = SymMatrix::from_diag(&[1.0f64, 1.0, 1.0]);
        let x = [0.6f64, 0.8, 0.0];
        assert!((quadratic_form(&eye, &x).unwrap() - 1.0).abs() < 1e-15);

        let m = SymMatrix::from_diag(&[1.0f64, -3.0, 2.0]);
        assert!((quadratic_form(&m, &[0.0, 1.0, 0.0]).unwrap() + 3.0).abs() < 1e-15);

        assert!(quadratic_form(&m, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn quadratic_form_at_top_eigvec() {
        let a = random_sym(8, 9);
        let (lam, v) = top_eigvec(&a).unwrap();
        let q = quadratic_form(&a, &v).unwrap();
        assert!((q - lam).abs() < 1e-8);
        // residual certificate
        let mut av = vec![0.0; 8];
        a.matvec(&v, &mut av);
        let res: f64 = av.iter().zip(&v).map(|(a, x)| (a - lam * x).powi(2)).sum::<f64>().sqrt();
        assert!(res < 1e-8);
    }

    #[test]
    fn top_eigvec_examples() {
        let m = SymMatrix::from_diag(&[1.0f64, -3.0, 2.0]);
        let (lam, v) = top_eigvec(&m).unwrap();
        assert!((lam - 2.0).abs() < 1e-12);
        assert!(v[2].abs() > 1.0 - 1e-10);

        let m = SymMatrix::from_rows(2, vec![0.0f64, 1.0, 1.0, 0.0]).unwrap();
        let (lam, v) = top_eigvec(&m).unwrap();
        assert!((lam - 1.0).abs() < 1e-12);
        let t = 1.0 / 2.0f64.sqrt();
        assert!((v[0].abs() - t).abs() < 1e-10 && (v[1].abs() - t).abs() < 1e-10);
        assert!(v[0] * v[1] > 0.0);
    }

    #[test]
    fn variational_upper_bound_consistency() {
        let mut s = Stream::new(21);
        for seed in [31u64, 32] {
            let a = random_sym(24, seed);
            let norm = spectral_norm_exact(&a).unwrap().value;
            for _ in 0..1000 {
                let z: Vec<f64> = s.unit_vector(24);
                let q = quadratic_form(&a, &z).unwrap().abs();
                assert!(q <= norm + 1e-8, "q = {q} > norm = {norm}");
            }
        }
    }

    #[test]
    fn eigen_f32_instantiation() {
        let mut m = SymMatrix::<f32>::zeros(4);
        m.set_sym(0, 0, 2.0);
        m.set_sym(1, 2, 1.5);
        m.set_sym(3, 3, -4.0);
        let r = spectral_norm_exact(&m).unwrap();
        assert!((r.value - 4.0).abs() < 1e-5);
    }
}
