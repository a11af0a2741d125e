//! Finite-dimensional tensor-product Hilbert-space arithmetic.
//!
//! State vectors, density matrices, partial trace, and partial transpose over
//! the Alice ⊗ Rob ⊗ AntiRob factorization. Index convention is row-major
//! with Alice slowest: flat = a·(d_R·d_R̄) + r·d_R̄ + r̄. Everything here is
//! exact linear algebra with no stochastic components; repeated runs are
//! byte-identical.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Per-subsystem dimensions of the Alice ⊗ Rob ⊗ AntiRob space.
///
/// For scalar runs `alice = 2`, `rob = antirob = n_max + 2`; for Dirac runs
/// `alice = 2`, `rob = antirob = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsystemDims {
    pub alice: usize,
    pub rob: usize,
    pub antirob: usize,
}

impl SubsystemDims {
    pub fn new(alice: usize, rob: usize, antirob: usize) -> Result<Self> {
        if alice == 0 || rob == 0 || antirob == 0 {
            return Err(Error::Usage("subsystem dimensions must be ≥ 1".into()));
        }
        Ok(SubsystemDims {
            alice,
            rob,
            antirob,
        })
    }

    pub fn total(&self) -> usize {
        self.alice * self.rob * self.antirob
    }

    pub fn as_vec(&self) -> Vec<usize> {
        vec![self.alice, self.rob, self.antirob]
    }
}

/// Encode (a, r, r̄) into a flat row-major index, Alice slowest.
pub fn index_encode(a: usize, r: usize, rbar: usize, dims: &SubsystemDims) -> Result<usize> {
    if a >= dims.alice || r >= dims.rob || rbar >= dims.antirob {
        return Err(Error::Usage(format!(
            "index ({a}, {r}, {rbar}) out of range for dims ({}, {}, {})",
            dims.alice, dims.rob, dims.antirob
        )));
    }
    Ok((a * dims.rob + r) * dims.antirob + rbar)
}

/// Decode a flat index back into (a, r, r̄).
pub fn index_decode(flat: usize, dims: &SubsystemDims) -> Result<(usize, usize, usize)> {
    if flat >= dims.total() {
        return Err(Error::Usage(format!(
            "flat index {flat} out of range for total dimension {}",
            dims.total()
        )));
    }
    let rbar = flat % dims.antirob;
    let rest = flat / dims.antirob;
    Ok((rest / dims.rob, rest % dims.rob, rbar))
}

/// A (generally unnormalized-by-a-truncation-tail) pure state on
/// Alice ⊗ Rob ⊗ AntiRob.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    pub dims: SubsystemDims,
    /// Row-major amplitudes of length `dims.total()`, index order (a, r, r̄).
    pub amplitudes: Vec<Complex64>,
}

impl TripartiteState {
    pub fn new(dims: SubsystemDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Usage(format!(
                "amplitude vector length {} does not match total dimension {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        Ok(TripartiteState { dims, amplitudes })
    }

    pub fn zero(dims: SubsystemDims) -> Self {
        let n = dims.total();
        TripartiteState {
            dims,
            amplitudes: vec![Complex64::ZERO; n],
        }
    }

    pub fn amplitude(&self, a: usize, r: usize, rbar: usize) -> Result<Complex64> {
        Ok(self.amplitudes[index_encode(a, r, rbar, &self.dims)?])
    }

    pub fn set(&mut self, a: usize, r: usize, rbar: usize, value: Complex64) -> Result<()> {
        let idx = index_encode(a, r, rbar, &self.dims)?;
        self.amplitudes[idx] = value;
        Ok(())
    }

    /// Squared norm ⟨ψ|ψ⟩.
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Nonzero amplitudes as (flat index, value) pairs.
    pub fn nonzeros(&self) -> Vec<(usize, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm_sqr() > 0.0)
            .map(|(i, z)| (i, *z))
            .collect()
    }

    /// Plain-text dump of nonzero amplitudes, one `a r rbar re im` row per
    /// line, sorted by (a, r, r̄). Stable across runs; used by golden-file
    /// tests and the CLI.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (flat, z) in self.nonzeros() {
            let (a, r, rbar) = index_decode(flat, &self.dims).expect("index in range");
            out.push_str(&format!(
                "{a} {r} {rbar} {:.16e} {:.16e}\n",
                z.re, z.im
            ));
        }
        out
    }
}

/// A density matrix (or the partial transpose of one) with per-subsystem
/// dimension metadata. Hermiticity/positivity are invariants of *physical*
/// states; use [`DensityMatrix::validate`] to check them.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    /// Ordered subsystem dimensions; the matrix side is their product.
    pub dims: Vec<usize>,
    pub entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, entries: DMatrix<Complex64>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::Usage("subsystem dims must be nonempty and ≥ 1".into()));
        }
        if entries.nrows() != side || entries.ncols() != side {
            return Err(Error::Usage(format!(
                "matrix is {}×{} but subsystem dims {:?} require side {side}",
                entries.nrows(),
                entries.ncols(),
                dims
            )));
        }
        Ok(DensityMatrix { dims, entries })
    }

    pub fn side(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diagonal().sum()
    }

    /// Entrywise Hermiticity defect max |ρ_ij - conj(ρ_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.side();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Check the physical-state invariants: Hermitian to 1e-12 entrywise,
    /// trace within `trace_tol` of 1, eigenvalues ≥ -1e-10.
    pub fn validate(&self, trace_tol: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:e} exceeds 1e-12"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::InvalidState(format!(
                "trace {tr} differs from 1 beyond {trace_tol:e}"
            )));
        }
        let vals = crate::measures::eigenvalues_hermitian(&self.entries)?;
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e} below -1e-10"
            )));
        }
        Ok(())
    }
}

/// ρ = |ψ⟩⟨ψ| over the full tripartite space. Rank 1; trace = ⟨ψ|ψ⟩.
pub fn outer(state: &TripartiteState) -> DensityMatrix {
    let n = state.dims.total();
    let mut m = DMatrix::zeros(n, n);
    let nz = state.nonzeros();
    for &(i, zi) in &nz {
        for &(j, zj) in &nz {
            m[(i, j)] = zi * zj.conj();
        }
    }
    DensityMatrix {
        dims: state.dims.as_vec(),
        entries: m,
    }
}

/// Multi-index decomposition helpers for an ordered dims list.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
    out
}

/// Partial trace over the subsystems *not* listed in `keep`.
///
/// `keep` must be a nonempty proper subset of subsystem indices; kept
/// subsystems stay in their original order. Trace and Hermiticity are
/// preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n_sub = rho.dims.len();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n_sub {
        return Err(Error::Usage(format!(
            "keep-set must be a nonempty proper subset of 0..{n_sub}, got {keep:?}"
        )));
    }
    if keep.iter().any(|&k| k >= n_sub) {
        return Err(Error::Usage(format!(
            "keep-set {keep:?} has an index out of range for {n_sub} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n_sub).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| rho.dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| rho.dims[k]).collect();
    let out_side: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();
    let full_strides = strides(&rho.dims);

    let mut out = DMatrix::zeros(out_side, out_side);
    for i_out in 0..out_side {
        let i_digits = digits(i_out, &kept_dims);
        for j_out in 0..out_side {
            let j_digits = digits(j_out, &kept_dims);
            let mut acc = Complex64::ZERO;
            for t in 0..traced_total {
                let t_digits = digits(t, &traced_dims);
                let mut row = 0usize;
                let mut col = 0usize;
                for (pos, &k) in keep.iter().enumerate() {
                    row += i_digits[pos] * full_strides[k];
                    col += j_digits[pos] * full_strides[k];
                }
                for (pos, &k) in traced.iter().enumerate() {
                    row += t_digits[pos] * full_strides[k];
                    col += t_digits[pos] * full_strides[k];
                }
                acc += rho.entries[(row, col)];
            }
            out[(i_out, j_out)] = acc;
        }
    }
    DensityMatrix::new(kept_dims, out)
}

/// Partial trace of a *pure* state, computed directly from the amplitude
/// vector without materializing |ψ⟩⟨ψ|.
///
/// Equivalent to `partial_trace(&outer(state), keep)` (asserted by tests) but
/// only quadratic in the number of nonzero amplitudes, which is what makes
/// large scalar truncations tractable.
pub fn reduce_pure(state: &TripartiteState, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = state.dims.as_vec();
    let n_sub = dims.len();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n_sub {
        return Err(Error::Usage(format!(
            "keep-set must be a nonempty proper subset of 0..{n_sub}, got {keep:?}"
        )));
    }
    if keep.iter().any(|&k| k >= n_sub) {
        return Err(Error::Usage(format!("keep-set {keep:?} out of range")));
    }
    let traced: Vec<usize> = (0..n_sub).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kept_strides = strides(&kept_dims);
    let out_side: usize = kept_dims.iter().product();

    // Group nonzero amplitudes by their traced-part index. BTreeMap keeps
    // the accumulation order fixed, which keeps results byte-reproducible.
    let mut groups: std::collections::BTreeMap<usize, Vec<(usize, Complex64)>> =
        std::collections::BTreeMap::new();
    for (flat, z) in state.nonzeros() {
        let d = digits(flat, &dims);
        let kept_idx: usize = keep
            .iter()
            .enumerate()
            .map(|(pos, &k)| d[k] * kept_strides[pos])
            .sum();
        let mut traced_key = 0usize;
        for &k in &traced {
            traced_key = traced_key * dims[k] + d[k];
        }
        groups.entry(traced_key).or_default().push((kept_idx, z));
    }

    let mut out = DMatrix::zeros(out_side, out_side);
    for members in groups.values() {
        for &(i, zi) in members {
            for &(j, zj) in members {
                out[(i, j)] += zi * zj.conj();
            }
        }
    }
    DensityMatrix::new(kept_dims, out)
}

/// Transpose the indices of one subsystem: for the first factor,
/// (i j; k l) → (k j; i l). Hermiticity and trace are preserved; applying it
/// twice returns the input.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<DensityMatrix> {
    let n_sub = rho.dims.len();
    if subsystem >= n_sub {
        return Err(Error::Usage(format!(
            "subsystem index {subsystem} out of range for {n_sub} subsystems"
        )));
    }
    let side = rho.side();
    let st = strides(&rho.dims);
    let mut out = DMatrix::zeros(side, side);
    for row in 0..side {
        let rd = digits(row, &rho.dims);
        for col in 0..side {
            let cd = digits(col, &rho.dims);
            // Swap the chosen subsystem's digit between row and col.
            let nr = row - rd[subsystem] * st[subsystem] + cd[subsystem] * st[subsystem];
            let nc = col - cd[subsystem] * st[subsystem] + rd[subsystem] * st[subsystem];
            out[(nr, nc)] = rho.entries[(row, col)];
        }
    }
    DensityMatrix::new(rho.dims.clone(), out)
}

/// Purity Tr(ρ²) ∈ (0, 1]; equals (⟨ψ|ψ⟩)² for ρ = |ψ⟩⟨ψ|.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ; use the general
    // bilinear form so the function stays exact for near-Hermitian inputs.
    let n = rho.side();
    let mut acc = Complex64::ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += rho.entries[(i, j)] * rho.entries[(j, i)];
        }
    }
    acc.re
}
