//! Structured symmetric random-matrix ensembles: psi-norm profiles, the
//! scalar structure parameters (b, sigma1, sigma2), and reproducible
//! symmetric sampling.
//!
//! A profile fixes, per entry, the target Orlicz norm `beta_ij` at tail class
//! `alpha` together with a base law. Sampling scales base-law draws by
//! `beta_ij / psi_alpha(base)`, so the Orlicz norm of entry `(i, j)` is
//! exactly `beta_ij` by homogeneity. Entry `(i, j)` of trial `k` is a pure
//! function of `(master_seed, k, i, j)`, which makes sampling order- and
//! worker-count-independent.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dist::{psi_norm, DistributionSpec};
use crate::error::{Error, Result};
use crate::matrix::{Provenance, SymMatrix, SymMatrixSample};
use crate::rng::Stream;
use crate::scalar::{cast, cast_usize, Scalar};

/// Shape of a profile's beta array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind<F: Scalar> {
    /// Constant profile: every entry has scale `base`.
    Wigner,
    /// Only the diagonal carries mass.
    Diagonal,
    /// `beta_ij = base` for `|i − j| ≤ width`, zero otherwise.
    Band { width: usize },
    /// Quenched mask: `beta_ij = base` with probability `p`, fixed by `seed`.
    Sparse { p: F, seed: u64 },
    /// Block-diagonal: block `k` (of size `sizes[k]`) has scale `base * scales[k]`.
    Block { sizes: Vec<usize>, scales: Vec<F> },
    /// Explicit symmetric array of scales (flattened row-major), multiplied by `base`.
    Custom { beta: Vec<F> },
}

/// n x n symmetric array of Orlicz-norm scales plus the shared entry law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct Profile<F: Scalar> {
    pub n: usize,
    pub kind: ProfileKind<F>,
    pub base_scale: F,
    pub family: DistributionSpec<F>,
    /// Tail class of the profile's norms, in [1, 2].
    pub alpha: F,
}

impl<F: Scalar> Profile<F> {
    pub fn new(
        kind: ProfileKind<F>,
        n: usize,
        base_scale: F,
        family: DistributionSpec<F>,
        alpha: F,
    ) -> Result<Self> {
        let p = Profile { n, kind, base_scale, family, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("profile dimension must be >= 1".into()));
        }
        if self.base_scale < F::zero() || !self.base_scale.is_finite() {
            return Err(Error::Config(format!("base scale {} must be nonnegative", self.base_scale)));
        }
        if self.alpha < F::one() || self.alpha > cast(2.0) {
            return Err(Error::Config(format!("profile alpha {} outside [1, 2]", self.alpha)));
        }
        self.family.validate()?;
        if self.alpha > self.family.tail_class() {
            return Err(Error::Config(format!(
                "family {} has tail class {} < profile alpha {}",
                self.family.name(),
                self.family.tail_class(),
                self.alpha
            )));
        }
        if self.family.is_zero() && self.nonzero_scale_possible() {
            return Err(Error::Config(
                "zero law cannot realize a nonzero target scale; set the scales to 0".into(),
            ));
        }
        match &self.kind {
            ProfileKind::Wigner | ProfileKind::Diagonal => Ok(()),
            ProfileKind::Band { width } => {
                if *width >= 1 && *width <= self.n {
                    Ok(())
                } else {
                    Err(Error::Config(format!("band width {width} outside [1, {}]", self.n)))
                }
            }
            ProfileKind::Sparse { p, .. } => {
                if *p > F::zero() && *p <= F::one() {
                    Ok(())
                } else {
                    Err(Error::Config(format!("sparse density {p} outside (0, 1]")))
                }
            }
            ProfileKind::Block { sizes, scales } => {
                if sizes.len() != scales.len() {
                    return Err(Error::Config(format!(
                        "block sizes ({}) and scales ({}) differ in length",
                        sizes.len(),
                        scales.len()
                    )));
                }
                if sizes.iter().sum::<usize>() != self.n {
                    return Err(Error::Config("block sizes must sum to n".into()));
                }
                if scales.iter().any(|s| *s < F::zero()) {
                    return Err(Error::Config("block scales must be nonnegative".into()));
                }
                Ok(())
            }
            ProfileKind::Custom { beta } => {
                if beta.len() != self.n * self.n {
                    return Err(Error::Config(format!(
                        "custom beta has {} entries, expected {}",
                        beta.len(),
                        self.n * self.n
                    )));
                }
                for i in 0..self.n {
                    for j in 0..i {
                        if beta[i * self.n + j] != beta[j * self.n + i] {
                            return Err(Error::Config(format!("custom beta is asymmetric at ({i}, {j})")));
                        }
                    }
                }
                if beta.iter().any(|b| *b < F::zero()) {
                    return Err(Error::Config("beta scales must be nonnegative".into()));
                }
                Ok(())
            }
        }
    }

    pub fn beta_at(&self, i: usize, j: usize) -> F {
        self.beta()[i * self.n + j]
    }

    /// Could any entry carry a nonzero target scale? (Cheap shape check; the
    /// sparse mask counts as nonzero without materializing it.)
    fn nonzero_scale_possible(&self) -> bool {
        if self.base_scale == F::zero() {
            return false;
        }
        match &self.kind {
            ProfileKind::Wigner | ProfileKind::Diagonal | ProfileKind::Band { .. } | ProfileKind::Sparse { .. } => true,
            ProfileKind::Block { scales, .. } => scales.iter().any(|s| *s > F::zero()),
            ProfileKind::Custom { beta } => beta.iter().any(|b| *b > F::zero()),
        }
    }

    /// Materialize the symmetric scale array (deterministic; the sparse mask
    /// is quenched by the profile seed).
    pub fn beta(&self) -> Vec<F> {
        let n = self.n;
        let base = self.base_scale;
        let mut beta = vec![F::zero(); n * n];
        match &self.kind {
            ProfileKind::Wigner => {
                beta.iter_mut().for_each(|b| *b = base);
            }
            ProfileKind::Diagonal => {
                for i in 0..n {
                    beta[i * n + i] = base;
                }
            }
            ProfileKind::Band { width } => {
                for i in 0..n {
                    for j in 0..n {
                        if i.abs_diff(j) <= *width {
                            beta[i * n + j] = base;
                        }
                    }
                }
            }
            ProfileKind::Sparse { p, seed } => {
                // quenched mask: one draw per unordered pair, keyed by the
                // profile seed so the support is data, not trial randomness
                for i in 0..n {
                    for j in 0..=i {
                        let mut s = Stream::keyed(&[*seed, i as u64, j as u64]);
                        if s.uniform::<F>() < *p {
                            beta[i * n + j] = base;
                            beta[j * n + i] = base;
                        }
                    }
                }
            }
            ProfileKind::Block { sizes, scales } => {
                let mut start = 0usize;
                for (sz, sc) in sizes.iter().zip(scales) {
                    for i in start..start + sz {
                        for j in start..start + sz {
                            beta[i * n + j] = base * *sc;
                        }
                    }
                    start += sz;
                }
            }
            ProfileKind::Custom { beta: raw } => {
                for (dst, src) in beta.iter_mut().zip(raw) {
                    *dst = base * *src;
                }
            }
        }
        beta
    }

    /// Stable short identifier from the profile's serialized form.
    pub fn id(&self) -> String {
        let json = serde_json::to_string(self).expect("profile serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The scalar structure parameters of the profile.
    pub fn struct_params(&self) -> StructParams<F> {
        let n = self.n;
        let beta = self.beta();
        let mut max_diag = F::zero();
        let mut sigma1 = F::zero();
        let mut sigma2 = F::zero();
        for i in 0..n {
            for j in 0..n {
                let b = beta[i * n + j];
                sigma1 = sigma1.max(b);
                if i == j {
                    max_diag = max_diag.max(b);
                } else {
                    sigma2 = sigma2.max(b);
                }
            }
        }
        let log_n = cast_usize::<F>(n).ln(); // ln 1 = 0 at n = 1
        let b = max_diag * log_n.powf(F::one() / self.alpha);
        StructParams { alpha: self.alpha, b, sigma1, sigma2, max_diag }
    }

    /// Draw the sample for `(master_seed, trial)`.
    pub fn sample_matrix(&self, master_seed: u64, trial: u64) -> Result<SymMatrixSample<F>> {
        self.validate()?;
        let n = self.n;
        let base_psi = if self.family.is_zero() {
            F::one() // unused: all betas are zero by validation
        } else {
            psi_norm(&self.family, self.alpha, F::psi_tol())?.value
        };
        let beta = self.beta();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let b = beta[i * n + j];
                if b == F::zero() {
                    continue;
                }
                let mut stream = Stream::keyed(&[master_seed, trial, i as u64, j as u64]);
                let draw = self.family.sample(&mut stream);
                m.set_sym(i, j, b / base_psi * draw);
            }
        }
        Ok(SymMatrixSample {
            matrix: m,
            provenance: Provenance { profile_id: self.id(), master_seed, trial },
        })
    }
}

/// b, sigma1, sigma2 (at the profile's tail class).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct StructParams<F> {
    pub alpha: F,
    /// `max_i beta_ii * (ln n)^{1/alpha}`.
    pub b: F,
    /// `max_{i,j} beta_ij`.
    pub sigma1: F,
    /// `max_{i != j} beta_ij`.
    pub sigma2: F,
    /// `max_i beta_ii` without the log factor.
    pub max_diag: F,
}
