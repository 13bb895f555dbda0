//! Executable sphere-chaining construction.
//!
//! A unit vector is sliced into coordinate blocks by magnitude rank; each
//! block lives in a Euclidean-ball / sup-norm-ball intersection and is
//! replaced by a nearby point of an epsilon-net adapted to the block. The
//! assembled approximant `x` satisfies `|z − x| ≤ 0.3` and `|x| ≤ 2`, which
//! yields the contraction inequality
//! `‖X‖ ≤ 10 · max(⟨Xx, x⟩, ⟨(−X)x′, x′⟩)` for the top eigenvectors `z, z′`
//! of `X` and `−X`.
//!
//! Nets come in two backends: an explicit greedy packing for small
//! dimensions (cardinality provably at most `(3/ε)^dim`) and an implicit
//! grid quantizer for blocks too large to enumerate.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::rng::Stream;
use crate::scalar::{cast, cast_usize, Scalar};
use crate::specnorm::symmetric_eigen;

/// Slicing depth for dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDepth {
    pub n: usize,
    pub l: u32,
}

fn depth_condition(n: f64, l: u32) -> bool {
    let pow = 4f64.powi(l as i32);
    (n / pow) * (96.0 * std::f64::consts::E * pow).ln() <= n.sqrt()
}

/// The smallest integer `l` with `(n/4^l)·ln(96e·4^l) ≤ √n`.
pub fn smallest_l(n: usize) -> Result<ChainDepth> {
    if n < 2 {
        return Err(Error::Domain(format!("chain depth needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let mut l = 1u32;
    while !depth_condition(nf, l) {
        l += 1;
        if l > 64 {
            return Err(Error::Numerical("depth scan ran away".into()));
        }
    }
    debug_assert!(l >= 2, "the depth condition cannot hold at l = 1 for n >= 2");
    Ok(ChainDepth { n, l })
}

/// Magnitude-ranked slicing of a unit vector into blocks `E_0 ..= E_l`.
#[derive(Clone, Debug, Serialize)]
pub struct RankPartition<F> {
    pub n: usize,
    pub l: u32,
    /// Indices ordered by decreasing `|z(i)|`, ties broken by ascending index.
    pub order: Vec<usize>,
    /// `blocks[k]` is the index set `E_k`.
    pub blocks: Vec<Vec<usize>>,
    /// Per-block sup-norm caps: 1 for `E_0`, `min(1, √(4^k/n))` for `E_k`.
    pub caps: Vec<F>,
}

/// Rank-partition `z` at depth `l`. Block `E_0` holds the `n/4^l` largest
/// coordinates, block `E_k` the ranks in `(n/4^k, n/4^{k-1}]` (real-valued
/// thresholds, so the blocks partition `{1..n}` exactly for every `n`).
pub fn rank_partition<F: Scalar>(z: &[F], l: u32) -> Result<RankPartition<F>> {
    let n = z.len();
    let norm = z.iter().map(|&x| x * x).fold(F::zero(), |a, b| a + b).sqrt();
    let tol = cast::<F>(1e-10).max(F::epsilon() * cast(100.0));
    if (norm - F::one()).abs() > tol {
        return Err(Error::Validation(format!("rank partition needs a unit vector, |z| = {norm}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        z[j].abs()
            .partial_cmp(&z[i].abs())
            .expect("finite coordinates")
            .then(i.cmp(&j))
    });
    let nf = n as f64;
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); l as usize + 1];
    for (pos, &idx) in order.iter().enumerate() {
        let rank = (pos + 1) as f64;
        let k = if rank <= nf / 4f64.powi(l as i32) {
            0
        } else {
            // unique k >= 1 with n/4^k < rank <= n/4^{k-1}
            let mut k = l;
            while rank > nf / 4f64.powi(k as i32 - 1) {
                k -= 1;
            }
            k
        };
        blocks[k as usize].push(idx);
    }
    let mut caps = Vec::with_capacity(l as usize + 1);
    caps.push(F::one());
    for k in 1..=l {
        let cap = (4f64.powi(k as i32) / nf).sqrt().min(1.0);
        caps.push(cast(cap));
    }
    Ok(RankPartition { n, l, order, blocks, caps })
}

/// Net construction backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NetBackend {
    GreedyExplicit,
    ImplicitQuantizer,
}

/// An epsilon-net of `B₂ ∩ α·B_∞` in dimension `dim`.
#[derive(Clone, Debug, Serialize)]
pub struct SliceNet<F> {
    pub dim: usize,
    pub epsilon: F,
    pub alpha_cap: F,
    pub backend: NetBackend,
    pub points: Vec<Vec<F>>,
    /// Uniform proposals consumed while growing the packing.
    pub grow_proposals: usize,
    /// Size of the final clean covering certificate.
    pub cover_probes: usize,
    /// Failures in the final certificate (zero by construction).
    pub cover_failures: usize,
}

/// Allowed explicit-net dimensions: coarse nets stay enumerable longer.
pub fn greedy_dim_cap(epsilon: f64) -> usize {
    if epsilon >= 1.0 {
        12
    } else {
        6
    }
}

/// Spatial hash over cells of side `epsilon`. Queries inspect the 3^dim
/// neighboring cells in center-first order with early exit, so near-saturated
/// packings answer most membership questions from the first few cells; high
/// dimensions (where nets are small) fall back to a linear scan.
struct CellGrid<F> {
    dim: usize,
    eps: F,
    cells: HashMap<u64, Vec<u32>>,
    /// All of {-1, 0, 1}^dim sorted by L1 norm (center first).
    offsets: Vec<Vec<i8>>,
    use_cells: bool,
}

impl<F: Scalar> CellGrid<F> {
    fn new(dim: usize, eps: F) -> Self {
        let use_cells = dim <= 7;
        let mut offsets = Vec::new();
        if use_cells {
            let count = 3usize.pow(dim as u32);
            for mut code in 0..count {
                let mut off = vec![0i8; dim];
                for slot in off.iter_mut() {
                    *slot = (code % 3) as i8 - 1;
                    code /= 3;
                }
                offsets.push(off);
            }
            offsets.sort_by_key(|off| off.iter().map(|&o| o.unsigned_abs() as u32).sum::<u32>());
        }
        CellGrid { dim, eps, cells: HashMap::new(), offsets, use_cells }
    }

    fn cell_coord(&self, x: &[F]) -> Vec<i64> {
        x.iter()
            .map(|&v| ((v + cast::<F>(2.0)) / self.eps).floor().to_i64().unwrap_or(0))
            .collect()
    }

    fn key(coord: &[i64]) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &c in coord {
            h ^= c as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
            h ^= h >> 29;
        }
        h
    }

    fn insert(&mut self, idx: u32, x: &[F]) {
        if self.use_cells {
            let key = Self::key(&self.cell_coord(x));
            self.cells.entry(key).or_default().push(idx);
        }
    }

    /// Is any stored point within `radius` of `x`? (`strict` compares with
    /// `<`, otherwise `<=`; all arithmetic on squared distances.)
    fn any_within(&self, x: &[F], radius: F, strict: bool, points: &[Vec<F>]) -> bool {
        let r2 = radius * radius;
        let hit = |p: &Vec<F>| {
            let d2 = p
                .iter()
                .zip(x)
                .map(|(&a, &b)| (a - b) * (a - b))
                .fold(F::zero(), |s, v| s + v);
            if strict {
                d2 < r2
            } else {
                d2 <= r2
            }
        };
        if self.use_cells {
            let center = self.cell_coord(x);
            let mut coord = vec![0i64; self.dim];
            for off in &self.offsets {
                for ((c, &base), &o) in coord.iter_mut().zip(&center).zip(off) {
                    *c = base + o as i64;
                }
                if let Some(bucket) = self.cells.get(&Self::key(&coord)) {
                    if bucket.iter().any(|&idx| hit(&points[idx as usize])) {
                        return true;
                    }
                }
            }
            false
        } else {
            points.iter().any(hit)
        }
    }

    /// Exact distance from `x` to the nearest stored point (linear scan; used
    /// only to report uncovered probes, which are rare).
    fn nearest_dist(&self, x: &[F], points: &[Vec<F>]) -> F {
        points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(x)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .fold(F::zero(), |s, v| s + v)
                    .sqrt()
            })
            .fold(F::infinity(), |a, b| a.min(b))
    }
}

fn sample_slice_point<F: Scalar>(dim: usize, alpha_cap: F, stream: &mut Stream) -> Vec<F> {
    let half_width = alpha_cap.min(F::one());
    loop {
        let x: Vec<F> = (0..dim)
            .map(|_| (stream.uniform::<F>() * cast(2.0) - F::one()) * half_width)
            .collect();
        let norm2 = x.iter().map(|&v| v * v).fold(F::zero(), |a, b| a + b);
        if norm2 <= F::one() {
            return x;
        }
    }
}

/// Grow a maximal epsilon-separated subset of `B₂ ∩ α·B_∞` from uniform
/// random proposals. Growth stops after `probe_count` consecutive rejections;
/// the covering certificate is then established by fresh uniform probes, any
/// uncovered probe being admitted as a further net point (it is separated by
/// definition), until a full clean round of `probe_count` probes passes.
pub fn build_greedy_net<F: Scalar>(
    dim: usize,
    epsilon: F,
    alpha_cap: F,
    probe_count: usize,
    stream: &mut Stream,
) -> Result<SliceNet<F>> {
    if dim == 0 {
        return Err(Error::Config("net dimension must be >= 1".into()));
    }
    let eps_f = epsilon.to_f64().unwrap_or(0.0);
    if !(epsilon > F::zero() && epsilon <= F::one()) || !(alpha_cap > F::zero() && alpha_cap <= F::one()) {
        return Err(Error::Config(format!(
            "epsilon and alpha_cap must lie in (0, 1], got ({epsilon}, {alpha_cap})"
        )));
    }
    if dim > greedy_dim_cap(eps_f) {
        return Err(Error::Config(format!(
            "dim {dim} exceeds the explicit-net cap {} for epsilon = {epsilon}",
            greedy_dim_cap(eps_f)
        )));
    }
    if probe_count == 0 {
        return Err(Error::Config("probe count must be >= 1".into()));
    }
    let cardinality_bound = (3.0 / eps_f).powi(dim as i32);

    let mut points: Vec<Vec<F>> = Vec::new();
    let mut grid = CellGrid::new(dim, epsilon);
    let mut grow_proposals = 0usize;

    let admit = |x: Vec<F>, points: &mut Vec<Vec<F>>, grid: &mut CellGrid<F>| -> Result<()> {
        grid.insert(points.len() as u32, &x);
        points.push(x);
        if points.len() as f64 > cardinality_bound {
            return Err(Error::Verification(format!(
                "greedy net cardinality {} exceeded (3/eps)^dim = {cardinality_bound}; \
                 the packing argument guarantees the bound, this is a bug",
                points.len()
            )));
        }
        Ok(())
    };

    // growth phase
    let mut streak = 0usize;
    while streak < probe_count {
        let x = sample_slice_point(dim, alpha_cap, stream);
        grow_proposals += 1;
        if grid.any_within(&x, epsilon, true, &points) {
            streak += 1;
        } else {
            admit(x, &mut points, &mut grid)?;
            streak = 0;
        }
    }

    // certification phase: a clean round of probe_count fresh covered probes
    loop {
        let mut failures = 0usize;
        for _ in 0..probe_count {
            let y = sample_slice_point(dim, alpha_cap, stream);
            if !grid.any_within(&y, epsilon, false, &points) {
                failures += 1;
                admit(y, &mut points, &mut grid)?;
            }
        }
        if failures == 0 {
            break;
        }
    }

    Ok(SliceNet {
        dim,
        epsilon,
        alpha_cap,
        backend: NetBackend::GreedyExplicit,
        points,
        grow_proposals,
        cover_probes: probe_count,
        cover_failures: 0,
    })
}

/// Covering report from independent fresh probes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoverReport<F> {
    pub probes: usize,
    pub failures: usize,
    /// Largest probe-to-net distance among uncovered probes (0 when clean).
    pub max_gap: F,
}

/// Probe the covering property of a net with fresh uniform points.
pub fn verify_covering<F: Scalar>(net: &SliceNet<F>, probes: usize, stream: &mut Stream) -> CoverReport<F> {
    let mut grid = CellGrid::new(net.dim, net.epsilon);
    for (i, p) in net.points.iter().enumerate() {
        grid.insert(i as u32, p);
    }
    let mut failures = 0usize;
    let mut max_gap = F::zero();
    for _ in 0..probes {
        let y = sample_slice_point(net.dim, net.alpha_cap, stream);
        if !grid.any_within(&y, net.epsilon, false, &net.points) {
            failures += 1;
            max_gap = max_gap.max(grid.nearest_dist(&y, &net.points));
        }
    }
    CoverReport { probes, failures, max_gap }
}

/// Implicit-net backend: round onto a grid of spacing `ε/√|E|`, clip into the
/// sup-norm box, then project into the Euclidean ball. Both projections move
/// the point toward `v`, so the output stays within `ε` of `v` and inside the
/// slice set.
pub fn quantize_to_slice<F: Scalar>(
    v: &[F],
    support: &[usize],
    epsilon: F,
    alpha_cap: F,
) -> Result<Vec<F>> {
    let n = v.len();
    let fuzz = cast::<F>(1e-10).max(F::epsilon() * cast(100.0));
    for (i, &vi) in v.iter().enumerate() {
        if vi != F::zero() && !support.contains(&i) {
            return Err(Error::Validation(format!("coordinate {i} is outside the declared support")));
        }
        if vi.abs() > alpha_cap + fuzz {
            return Err(Error::Validation(format!(
                "coordinate {i} = {vi} violates the sup-norm cap {alpha_cap}"
            )));
        }
    }
    let norm2 = v.iter().map(|&x| x * x).fold(F::zero(), |a, b| a + b);
    if norm2.sqrt() > F::one() + fuzz {
        return Err(Error::Validation(format!("|v| = {} exceeds the unit ball", norm2.sqrt())));
    }
    if support.is_empty() {
        return Ok(vec![F::zero(); n]);
    }
    let spacing = epsilon / cast_usize::<F>(support.len()).sqrt();
    let mut out = vec![F::zero(); n];
    let mut norm2 = F::zero();
    for &i in support {
        let g = (v[i] / spacing).round() * spacing;
        let clipped = g.max(-alpha_cap).min(alpha_cap);
        out[i] = clipped;
        norm2 += clipped * clipped;
    }
    if norm2 > F::one() {
        let inv = F::one() / norm2.sqrt();
        for &i in support {
            out[i] *= inv;
        }
    }
    Ok(out)
}

/// The assembled block approximant of a unit vector.
#[derive(Clone, Debug, Serialize)]
pub struct Approximant<F> {
    pub x: Vec<F>,
    pub partition: RankPartition<F>,
    /// `|x_k − P_{E_k} z|` per block.
    pub block_errors: Vec<F>,
    /// `|z − x| = sqrt(Σ block errors²)`.
    pub total_error: F,
    pub norm: F,
    /// Per block: `x_k` lies in `B₂ ∩ α_k B_∞ ∩ R^{E_k}`.
    pub block_in_slice: Vec<bool>,
    /// `|x| ≤ 2`.
    pub in_two_ball: bool,
}

/// Error budget of the construction: `sqrt((1/16)² + Σ_{k≥1} 16^{-k}) ≈ 0.2657`,
/// provably at most 0.3.
pub const ERROR_BUDGET: f64 = 0.3;

/// Approximate a unit vector by a nearby sum of per-block net points:
/// block `E_0` is quantized at `ε = 1/16` with cap 1, block `E_k` at
/// `ε = 4^{-k}` with cap `min(1, √(4^k/n))`.
pub fn approximate<F: Scalar>(z: &[F]) -> Result<Approximant<F>> {
    let n = z.len();
    let depth = smallest_l(n)?;
    let partition = rank_partition(z, depth.l)?;
    let mut x = vec![F::zero(); n];
    let mut block_errors = Vec::with_capacity(partition.blocks.len());
    let mut block_in_slice = Vec::with_capacity(partition.blocks.len());
    let fuzz = cast::<F>(1e-10).max(F::epsilon() * cast(100.0));
    for (k, block) in partition.blocks.iter().enumerate() {
        let eps_k: F = if k == 0 { cast(1.0 / 16.0) } else { cast(4f64.powi(-(k as i32))) };
        let cap = partition.caps[k];
        let mut vk = vec![F::zero(); n];
        for &i in block {
            vk[i] = z[i];
        }
        let xk = quantize_to_slice(&vk, block, eps_k, cap)?;
        let err2 = block
            .iter()
            .map(|&i| (xk[i] - z[i]) * (xk[i] - z[i]))
            .fold(F::zero(), |a, b| a + b);
        block_errors.push(err2.sqrt());
        let norm2 = block.iter().map(|&i| xk[i] * xk[i]).fold(F::zero(), |a, b| a + b);
        let sup = block.iter().map(|&i| xk[i].abs()).fold(F::zero(), |a, b| a.max(b));
        block_in_slice.push(norm2.sqrt() <= F::one() + fuzz && sup <= cap + fuzz);
        for &i in block {
            x[i] = xk[i];
        }
    }
    let total_error = block_errors.iter().map(|&e| e * e).fold(F::zero(), |a, b| a + b).sqrt();
    let norm = x.iter().map(|&v| v * v).fold(F::zero(), |a, b| a + b).sqrt();
    let in_two_ball = norm <= cast::<F>(2.0) + fuzz;
    Ok(Approximant { x, partition, block_errors, total_error, norm, block_in_slice, in_two_ball })
}

impl<F: Scalar> Approximant<F> {
    /// The set-membership conditions: error within budget, `|x| ≤ 2`, and
    /// every block inside its slice.
    pub fn satisfies_budget(&self) -> bool {
        self.total_error <= cast(ERROR_BUDGET)
            && self.in_two_ball
            && self.block_in_slice.iter().all(|&b| b)
    }
}

/// Largest dimension accepted by the contraction check (it runs two dense
/// eigensolves).
pub const CONTRACTION_CAP: usize = 4096;

/// Per-instance contraction report.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport<F> {
    pub n: usize,
    pub l: u32,
    pub block_sizes: Vec<usize>,
    pub norm: F,
    /// `⟨X x, x⟩` for the approximant of the top eigenvector of `X`.
    pub quad_pos: F,
    /// `⟨(−X) x′, x′⟩` for the approximant of the top eigenvector of `−X`.
    pub quad_neg: F,
    pub total_error_pos: F,
    pub total_error_neg: F,
    /// `‖X‖ / max(quad_pos, quad_neg)`; at most 10 when the check passes.
    pub contraction_ratio: F,
}

/// Verify the contraction inequality on one matrix: build approximants for
/// the top eigenvectors of `X` and `−X` and check
/// (a) `⟨Xz,z⟩ ≤ ⟨Xx,x⟩ + ‖X‖·|z−x|·|z+x|` on both branches, and
/// (b) `‖X‖ ≤ 10·max(⟨Xx,x⟩, ⟨(−X)x′,x′⟩)`.
/// A failure is reported as a verification error with the offending numbers:
/// given valid approximants the inequality is theorem-backed, so red here
/// means a bug, not noise.
pub fn contraction_check<F: Scalar>(x_mat: &SymMatrix<F>) -> Result<ContractionReport<F>> {
    let n = x_mat.n();
    if n < 2 {
        return Err(Error::Domain("contraction check needs n >= 2".into()));
    }
    if n > CONTRACTION_CAP {
        return Err(Error::Capacity(format!("contraction check caps at n = {CONTRACTION_CAP}")));
    }
    if !x_mat.is_symmetric_within(cast(crate::specnorm::SYMMETRY_RTOL)) {
        return Err(Error::Validation("contraction check needs a symmetric matrix".into()));
    }
    let neg = x_mat.neg();
    let (evals_pos, evecs_pos) = symmetric_eigen(x_mat)?;
    let (evals_neg, evecs_neg) = symmetric_eigen(&neg)?;
    let lambda_pos = *evals_pos.last().expect("n >= 2");
    let lambda_neg = *evals_neg.last().expect("n >= 2");
    let z_pos = evecs_pos.into_iter().next_back().expect("n >= 2");
    let z_neg = evecs_neg.into_iter().next_back().expect("n >= 2");
    let norm = lambda_pos.max(lambda_neg);

    let apx_pos = approximate(&z_pos)?;
    let apx_neg = approximate(&z_neg)?;
    let quad_pos = crate::specnorm::quadratic_form(x_mat, &apx_pos.x)?;
    let quad_neg = crate::specnorm::quadratic_form(&neg, &apx_neg.x)?;

    let slack = (F::one() + norm.abs()) * cast::<F>(1e3) * F::epsilon() * cast_usize::<F>(n).sqrt();

    for (tag, mat, z, apx, quad, lambda) in [
        ("X", x_mat, &z_pos, &apx_pos, quad_pos, lambda_pos),
        ("-X", &neg, &z_neg, &apx_neg, quad_neg, lambda_neg),
    ] {
        if !apx.satisfies_budget() {
            return Err(Error::Verification(format!(
                "approximant on branch {tag} violates the membership budget: \
                 total error {}, |x| = {}",
                apx.total_error, apx.norm
            )));
        }
        let quad_z = crate::specnorm::quadratic_form(mat, z)?;
        let diff: Vec<F> = z.iter().zip(&apx.x).map(|(&a, &b)| a - b).collect();
        let summ: Vec<F> = z.iter().zip(&apx.x).map(|(&a, &b)| a + b).collect();
        let d = diff.iter().map(|&v| v * v).fold(F::zero(), |a, b| a + b).sqrt();
        let s = summ.iter().map(|&v| v * v).fold(F::zero(), |a, b| a + b).sqrt();
        let rhs = quad + norm * d * s + slack;
        if quad_z > rhs {
            return Err(Error::Verification(format!(
                "branch {tag}: <Xz,z> = {quad_z} exceeds <Xx,x> + ‖X‖·|z−x|·|z+x| = {rhs} \
                 (lambda = {lambda}, |z−x| = {d}, |z+x| = {s})"
            )));
        }
    }

    let best = quad_pos.max(quad_neg);
    if norm > cast::<F>(10.0) * best + slack {
        return Err(Error::Verification(format!(
            "contraction failed: ‖X‖ = {norm} > 10·max(⟨Xx,x⟩, ⟨−Xx′,x′⟩) = {}",
            cast::<F>(10.0) * best
        )));
    }
    let contraction_ratio = if best == F::zero() { F::zero() } else { norm / best };

    Ok(ContractionReport {
        n,
        l: apx_pos.partition.l,
        block_sizes: apx_pos.partition.blocks.iter().map(Vec::len).collect(),
        norm,
        quad_pos,
        quad_neg,
        total_error_pos: apx_pos.total_error,
        total_error_neg: apx_neg.total_error,
        contraction_ratio,
    })
}

/// The pieces of `⟨Xx, x⟩` split along a support partition.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadformParts<F> {
    /// `Σ_i x(i)² X_ii`.
    pub diag: F,
    /// `Σ_{i≠j} x(i)x(j) X_ij`.
    pub off_diag: F,
    /// Off-diagonal pairs inside one block.
    pub within: F,
    /// Off-diagonal pairs crossing blocks.
    pub cross: F,
}

/// Exact decomposition `⟨Xx, x⟩ = Σ x(i)² X_ii + D` with `D = D' + D''`
/// split into within-block and cross-block pairs.
pub fn quadform_decomposition<F: Scalar>(
    x_mat: &SymMatrix<F>,
    v: &[F],
    blocks: &[Vec<usize>],
) -> Result<QuadformParts<F>> {
    let n = x_mat.n();
    if v.len() != n {
        return Err(Error::Validation(format!("vector length {} vs matrix size {n}", v.len())));
    }
    let mut owner = vec![usize::MAX; n];
    for (k, block) in blocks.iter().enumerate() {
        for &i in block {
            if i >= n {
                return Err(Error::Validation(format!("block index {i} out of range")));
            }
            if owner[i] != usize::MAX {
                return Err(Error::Validation(format!("index {i} appears in two blocks")));
            }
            owner[i] = k;
        }
    }
    for (i, &vi) in v.iter().enumerate() {
        if vi != F::zero() && owner[i] == usize::MAX {
            return Err(Error::Validation(format!(
                "coordinate {i} carries mass but belongs to no block"
            )));
        }
    }
    let support: Vec<usize> = (0..n).filter(|&i| v[i] != F::zero()).collect();
    let mut diag = F::zero();
    let mut off_diag = F::zero();
    let mut within = F::zero();
    let mut cross = F::zero();
    for &i in &support {
        diag += v[i] * v[i] * x_mat.get(i, i);
        for &j in &support {
            if i == j {
                continue;
            }
            let term = v[i] * v[j] * x_mat.get(i, j);
            off_diag += term;
            if owner[i] == owner[j] {
                within += term;
            } else {
                cross += term;
            }
        }
    }
    Ok(QuadformParts { diag, off_diag, within, cross })
}

/// Log-cardinality bound `(4n/4^k)·ln(48e·4^{2k})` for the k-th truncated
/// index family; an evaluator only, the family itself is never enumerated.
pub fn mk_log_cardinality_bound(n: usize, k: u32, l: u32) -> Result<f64> {
    if k < 1 || k > l {
        return Err(Error::Domain(format!("k = {k} outside 1..={l}")));
    }
    let pow = 4f64.powi(k as i32);
    Ok(4.0 * n as f64 / pow * (48.0 * std::f64::consts::E * pow * pow).ln())
}
