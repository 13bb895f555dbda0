//! Dense symmetric matrix storage with exact-by-construction symmetry and a
//! small binary dump format (text header + row-major 64-bit little-endian
//! payload).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Dense `n x n` symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> SymMatrix<F> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![F::zero(); n * n] }
    }

    /// Build from a full row-major buffer; the input must already be symmetric.
    pub fn from_rows(n: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Validation(format!(
                "expected {} entries for an {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        let m = SymMatrix { n, data };
        let asym = m.max_asymmetry();
        if asym > F::zero() {
            return Err(Error::Validation(format!("input is not symmetric (max |a_ij - a_ji)| = {asym})")));
        }
        Ok(m)
    }

    /// Diagonal matrix.
    pub fn from_diag(diag: &[F]) -> Self {
        let n = diag.len();
        let mut m = SymMatrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.n + j]
    }

    /// Set both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<F> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn scale(&self, c: F) -> SymMatrix<F> {
        SymMatrix { n: self.n, data: self.data.iter().map(|&x| x * c).collect() }
    }

    pub fn neg(&self) -> SymMatrix<F> {
        self.scale(-F::one())
    }

    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |a, &x| a.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Relative symmetry check against the largest entry magnitude.
    pub fn is_symmetric_within(&self, rel_tol: F) -> bool {
        let scale = self.max_abs();
        if scale == F::zero() {
            return true;
        }
        self.max_asymmetry() <= rel_tol * scale
    }

    pub fn frobenius(&self) -> F {
        self.data.iter().map(|&x| x * x).fold(F::zero(), |a, b| a + b).sqrt()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[F], y: &mut [F]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.n)) {
            let mut acc = F::zero();
            for (a, &xv) in row.iter().zip(x) {
                acc += *a * xv;
            }
            *yi = acc;
        }
    }

    /// Largest absolute row sum (an upper bound for the spectral norm).
    pub fn inf_norm(&self) -> F {
        (0..self.n)
            .map(|i| self.row(i).iter().fold(F::zero(), |a, &x| a + x.abs()))
            .fold(F::zero(), |a, b| a.max(b))
    }
}

/// Where a sampled matrix came from.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Provenance {
    pub profile_id: String,
    pub master_seed: u64,
    pub trial: u64,
}

/// One realized symmetric matrix tied to a (master seed, trial index) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrixSample<F> {
    pub matrix: SymMatrix<F>,
    pub provenance: Provenance,
}

const DUMP_MAGIC: &str = "symmat v1";

/// Write the dump format: one text header line, then `n*n` f64 LE values.
pub fn write_matrix<F: Scalar, W: Write>(w: &mut W, sample: &SymMatrixSample<F>) -> Result<()> {
    let m = &sample.matrix;
    writeln!(
        w,
        "{DUMP_MAGIC} n={} profile={} seed={} trial={}",
        m.n(),
        sample.provenance.profile_id,
        sample.provenance.master_seed,
        sample.provenance.trial
    )?;
    for &v in m.as_slice() {
        let v64 = v.to_f64().ok_or_else(|| Error::Numerical("entry does not fit f64".into()))?;
        w.write_all(&v64.to_le_bytes())?;
    }
    Ok(())
}

/// Read the dump format back.
pub fn read_matrix<F: Scalar, R: BufRead>(r: &mut R) -> Result<SymMatrixSample<F>> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header.trim_end();
    let mut n = None;
    let mut profile_id = String::new();
    let mut seed = 0u64;
    let mut trial = 0u64;
    if !header.starts_with(DUMP_MAGIC) {
        return Err(Error::Validation(format!("bad matrix header: {header:?}")));
    }
    for tok in header[DUMP_MAGIC.len()..].split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Validation(format!("bad header token: {tok:?}")))?;
        match k {
            "n" => n = Some(v.parse::<usize>().map_err(|e| Error::Validation(e.to_string()))?),
            "profile" => profile_id = v.to_string(),
            "seed" => seed = v.parse().map_err(|e: std::num::ParseIntError| Error::Validation(e.to_string()))?,
            "trial" => trial = v.parse().map_err(|e: std::num::ParseIntError| Error::Validation(e.to_string()))?,
            _ => return Err(Error::Validation(format!("unknown header field {k:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Validation("header is missing n=".into()))?;
    let mut data = Vec::with_capacity(n * n);
    let mut buf = [0u8; 8];
    for _ in 0..n * n {
        r.read_exact(&mut buf)?;
        data.push(cast::<F>(f64::from_le_bytes(buf)));
    }
    Ok(SymMatrixSample {
        matrix: SymMatrix::from_rows(n, data)?,
        provenance: Provenance { profile_id, master_seed: seed, trial },
    })
}
