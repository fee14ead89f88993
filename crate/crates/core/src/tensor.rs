//! Dense complex linear algebra on multipartite Hilbert spaces.
//!
//! Subsystems are ordered row-major: the leftmost factor of a [`Dims`] is the
//! most significant digit of a basis index. Every constructor, partial trace
//! and permutation in the crate follows this convention.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{self, Tolerances};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = Complex { re: 1.0, im: 0.0 };

/// Ordered list of subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::contract("dims must have at least one factor"));
        }
        if let Some(pos) = factors.iter().position(|&d| d == 0) {
            return Err(Error::contract(format!("dims factor {pos} is zero")));
        }
        Ok(Self(factors))
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n.max(1)])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Dimension of the subsystems named by `parties`.
    pub fn dim_of(&self, parties: &[usize]) -> usize {
        parties.iter().map(|&p| self.0[p]).product()
    }

    pub fn concat(&self, other: &Dims) -> Dims {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        Dims(f)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides(&self.0)
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat offsets of every multi-index over `parties`, in row-major order of
/// `parties`, measured with the strides of the full space.
pub(crate) fn offsets(dims: &[usize], strides: &[usize], parties: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in parties {
        let mut next = Vec::with_capacity(out.len() * dims[p]);
        for &base in &out {
            for d in 0..dims[p] {
                next.push(base + d * strides[p]);
            }
        }
        out = next;
    }
    out
}

/// For the space whose factors are `dims` reordered by `order`, map each flat
/// index of the reordered space to the flat index of the original space.
pub(crate) fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    offsets(dims, &strides(dims), order)
}

pub(crate) fn validate_parties(n: usize, parties: &[usize]) -> Result<()> {
    for (i, &p) in parties.iter().enumerate() {
        if p >= n {
            return Err(Error::contract(format!(
                "subsystem index {p} out of range for {n} subsystems"
            )));
        }
        if parties[..i].contains(&p) {
            return Err(Error::contract(format!("subsystem index {p} repeated")));
        }
    }
    Ok(())
}

fn check_permutation(n: usize, order: &[usize]) -> Result<()> {
    if order.len() != n {
        return Err(Error::contract(format!(
            "permutation has {} entries, expected {n}",
            order.len()
        )));
    }
    validate_parties(n, order)
}

/// Complex square matrix tagged with its tensor factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: CMatrix,
    dims: Dims,
}

impl Operator {
    pub fn new(entries: CMatrix, dims: Dims) -> Result<Self> {
        let n = dims.total();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::contract(format!(
                "operator of shape {}x{} does not match dims total {n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, dims })
    }

    pub fn identity(dims: Dims) -> Self {
        let n = dims.total();
        Self {
            entries: CMatrix::identity(n, n),
            dims,
        }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn dagger(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Kronecker product; the factor lists are concatenated.
    pub fn tensor(&self, other: &Operator) -> Operator {
        Operator {
            entries: self.entries.kronecker(&other.entries),
            dims: self.dims.concat(&other.dims),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.entries)
    }

    /// Partial trace keeping the subsystems in `keep`, returned in their
    /// original relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        validate_parties(self.dims.len(), keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (0..self.dims.len()).filter(|p| !kept.contains(p)).collect();
        let f = self.dims.factors();
        let st = self.dims.strides();
        let ok = offsets(f, &st, &kept);
        let ot = offsets(f, &st, &traced);
        let n = ok.len();
        let mut out = CMatrix::zeros(n, n);
        for (i, &oi) in ok.iter().enumerate() {
            for (j, &oj) in ok.iter().enumerate() {
                let mut acc = ZERO;
                for &t in &ot {
                    acc += self.entries[(oi + t, oj + t)];
                }
                out[(i, j)] = acc;
            }
        }
        let dims = if kept.is_empty() {
            Dims(vec![1])
        } else {
            Dims(kept.iter().map(|&p| f[p]).collect())
        };
        Ok(Operator { entries: out, dims })
    }

    /// Reorder subsystems: factor `k` of the result is factor `order[k]` of
    /// `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Operator> {
        check_permutation(self.dims.len(), order)?;
        let map = permutation_map(self.dims.factors(), order);
        let n = map.len();
        let entries = CMatrix::from_fn(n, n, |i, j| self.entries[(map[i], map[j])]);
        let dims = Dims(order.iter().map(|&p| self.dims.0[p]).collect());
        Ok(Operator { entries, dims })
    }

    /// Merge consecutive subsystems into the groups given by their sizes.
    pub fn coarse_grain(&self, group_sizes: &[usize]) -> Result<Operator> {
        let dims = coarse_dims(&self.dims, group_sizes)?;
        Ok(Operator {
            entries: self.entries.clone(),
            dims,
        })
    }

    /// Replace the factor list by another of equal total dimension.
    pub fn with_dims(&self, dims: Dims) -> Result<Operator> {
        Operator::new(self.entries.clone(), dims)
    }

    pub fn eigs(&self) -> Result<Eigensystem> {
        hermitian_eigs(&self.entries)
    }
}

fn coarse_dims(dims: &Dims, group_sizes: &[usize]) -> Result<Dims> {
    if group_sizes.iter().sum::<usize>() != dims.len() || group_sizes.contains(&0) {
        return Err(Error::contract(format!(
            "group sizes {group_sizes:?} do not partition {} subsystems",
            dims.len()
        )));
    }
    let mut out = Vec::with_capacity(group_sizes.len());
    let mut at = 0;
    for &g in group_sizes {
        out.push(dims.0[at..at + g].iter().product());
        at += g;
    }
    Ok(Dims(out))
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validate `op` against the density-matrix invariants at the default
    /// tolerances.
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerances(op, &Tolerances::default())
    }

    pub fn with_tolerances(op: Operator, tol: &Tolerances) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > tol.hermitian {
            return Err(Error::Invariant {
                invariant: "hermiticity",
                detail: format!("max |ρ - ρ†| = {herm:.3e} exceeds {:.1e}", tol.hermitian),
            });
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::Invariant {
                invariant: "trace",
                detail: format!("trace = {:.12} exceeds tolerance {:.1e}", tr.re, tol.trace),
            });
        }
        let min = eigenvalues(&op.entries).last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::Invariant {
                invariant: "positivity",
                detail: format!("smallest eigenvalue {min:.3e} below -{:.1e}", tol.psd),
            });
        }
        Ok(Self { op })
    }

    /// Wrap an operator known to be a state up to rounding; the entries are
    /// symmetrized.
    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        let m = &op.entries;
        let entries = (m + m.adjoint()) * C64::new(0.5, 0.0);
        Self {
            op: Operator {
                entries,
                dims: op.dims,
            },
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = &psi.amplitudes;
        Self {
            op: Operator {
                entries: a * a.adjoint(),
                dims: psi.dims.clone(),
            },
        }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dims: Dims) -> Self {
        let d = dims.total() as f64;
        let mut op = Operator::identity(dims);
        op.entries /= C64::new(d, 0.0);
        Self { op }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(dims: Dims, probs: &[f64]) -> Result<Self> {
        if probs.len() != dims.total() {
            return Err(Error::contract("diagonal length does not match dims"));
        }
        let n = probs.len();
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(probs[i], 0.0)
            } else {
                ZERO
            }
        });
        DensityMatrix::new(Operator::new(entries, dims)?)
    }

    /// Convex combination `Σ w_k ρ_k`; all terms must share dims.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::contract("empty mixture"))?
            .1;
        let n = first.dim();
        let mut acc = CMatrix::zeros(n, n);
        for (w, rho) in terms {
            if rho.dims() != first.dims() {
                return Err(Error::contract("mixture terms have different dims"));
            }
            if *w < 0.0 {
                return Err(Error::contract("negative mixture weight"));
            }
            acc += rho.entries() * C64::new(*w, 0.0);
        }
        DensityMatrix::new(Operator::new(acc, first.dims().clone())?)
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn entries(&self) -> &CMatrix {
        &self.op.entries
    }

    pub fn dims(&self) -> &Dims {
        &self.op.dims
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn n_parties(&self) -> usize {
        self.op.dims.len()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            op: self.op.tensor(&other.op),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_operator_unchecked(
            self.op.partial_trace(keep)?,
        ))
    }

    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            op: self.op.permute(order)?,
        })
    }

    /// Trace out everything outside `groups`, order the survivors group by
    /// group, and merge each group into a single subsystem.
    pub fn regroup(&self, groups: &[Vec<usize>]) -> Result<DensityMatrix> {
        let all: Vec<usize> = groups.iter().flatten().copied().collect();
        validate_parties(self.n_parties(), &all)?;
        if groups.iter().any(|g| g.is_empty()) {
            return Err(Error::contract("empty group"));
        }
        let mut sorted = all.clone();
        sorted.sort_unstable();
        let reduced = self.op.partial_trace(&sorted)?;
        let order: Vec<usize> = all
            .iter()
            .map(|p| sorted.iter().position(|q| q == p).unwrap())
            .collect();
        let permuted = reduced.permute(&order)?;
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        Ok(DensityMatrix::from_operator_unchecked(
            permuted.coarse_grain(&sizes)?,
        ))
    }

    /// Same entries under a different factorization of equal total dimension.
    pub fn with_dims(&self, dims: Dims) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            op: self.op.with_dims(dims)?,
        })
    }

    /// Conjugation `U ρ U†` by a unitary of matching dimension.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::contract("unitary dimension mismatch"));
        }
        let e = u * self.entries() * u.adjoint();
        Ok(DensityMatrix::from_operator_unchecked(Operator {
            entries: e,
            dims: self.dims().clone(),
        }))
    }

    pub fn purity(&self) -> f64 {
        let m = self.entries();
        (m * m).trace().re
    }

    /// Eigenvalues in descending order, with values in `(-CLAMP, 0)` clamped
    /// to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        eigenvalues(self.entries())
            .into_iter()
            .map(|v| if v < 0.0 && v > -tol::CLAMP { 0.0 } else { v })
            .collect()
    }

    /// Number of eigenvalues above [`tol::EIG_FLOOR`].
    pub fn rank(&self) -> usize {
        self.spectrum().iter().filter(|&&v| v > tol::EIG_FLOOR).count()
    }
}

/// Unit-norm state vector tagged with its tensor factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Dims,
}

impl PureState {
    pub fn new(amplitudes: CVector, dims: Dims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::contract(format!(
                "state of length {} does not match dims total {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        let n2 = amplitudes.norm_squared();
        if (n2 - 1.0).abs() > tol::PURE_NORM {
            return Err(Error::Invariant {
                invariant: "normalization",
                detail: format!("squared norm {n2:.15} differs from 1"),
            });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalize `amplitudes` and wrap them.
    pub fn normalized(amplitudes: CVector, dims: Dims) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::contract("zero vector cannot be normalized"));
        }
        Self::new(amplitudes / C64::new(n, 0.0), dims)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dims: Dims, index: usize) -> Result<Self> {
        let n = dims.total();
        if index >= n {
            return Err(Error::contract("basis index out of range"));
        }
        let mut v = CVector::zeros(n);
        v[index] = ONE;
        Ok(Self { amplitudes: v, dims })
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, dims: Dims) -> Self {
        Self { amplitudes, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            dims: self.dims.concat(&other.dims),
        }
    }

    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        check_permutation(self.dims.len(), order)?;
        let map = permutation_map(self.dims.factors(), order);
        let amplitudes = CVector::from_fn(map.len(), |i, _| self.amplitudes[map[i]]);
        let dims = Dims(order.iter().map(|&p| self.dims.0[p]).collect());
        Ok(PureState { amplitudes, dims })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced state on `keep`, computed from the amplitudes without forming
    /// the full projector.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        validate_parties(self.dims.len(), keep)?;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        let psi = matricize(&self.amplitudes, &self.dims, &kept);
        let dims = if kept.is_empty() {
            Dims(vec![1])
        } else {
            Dims(kept.iter().map(|&p| self.dims.0[p]).collect())
        };
        Ok(DensityMatrix::from_operator_unchecked(Operator {
            entries: &psi * psi.adjoint(),
            dims,
        }))
    }
}

/// Reshape a state vector into a matrix whose rows run over `rows` (in the
/// given order) and whose columns run over the remaining subsystems.
pub(crate) fn matricize(v: &CVector, dims: &Dims, rows: &[usize]) -> CMatrix {
    let f = dims.factors();
    let st = dims.strides();
    let cols: Vec<usize> = (0..f.len()).filter(|p| !rows.contains(p)).collect();
    let or = offsets(f, &st, rows);
    let oc = offsets(f, &st, &cols);
    CMatrix::from_fn(or.len(), oc.len(), |i, j| v[or[i] + oc[j]])
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigensystem {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = C64::new(self.values[j], 0.0);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigs(m: &CMatrix) -> Result<Eigensystem> {
    if m.nrows() != m.ncols() {
        return Err(Error::contract("eigensolver needs a square matrix"));
    }
    let herm = hermiticity_error(m);
    if herm > tol::EIG_HERMITIAN {
        return Err(Error::contract(format!(
            "matrix is not Hermitian (max deviation {herm:.3e})"
        )));
    }
    Ok(eigh(m))
}

/// Eigendecomposition without the Hermiticity check; the input is
/// symmetrized first.
pub(crate) fn eigh(m: &CMatrix) -> Eigensystem {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let n = sym.nrows();
    let eig = sym.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    Eigensystem { values, vectors }
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub(crate) fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `exp(i t H)` for Hermitian `H` given by its eigensystem.
pub(crate) fn expi_from_eigs(eig: &Eigensystem, t: f64) -> CMatrix {
    let n = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for j in 0..n {
        let phase = C64::from_polar(1.0, t * eig.values[j]);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * eig.vectors.adjoint()
}

/// `exp(i H)` for Hermitian `H`.
pub fn expi_hermitian(h: &CMatrix) -> CMatrix {
    expi_from_eigs(&eigh(h), 1.0)
}

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Extend orthonormal columns to a square unitary by Gram-Schmidt over the
/// computational basis.
pub(crate) fn complete_to_unitary(cols: &CMatrix) -> CMatrix {
    let n = cols.nrows();
    let mut basis: Vec<CVector> = cols.column_iter().map(|c| c.into_owned()).collect();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = CVector::zeros(n);
        v[k] = ONE;
        // two passes keep the result orthonormal to rounding
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    CMatrix::from_columns(&basis)
}

/// Permutation matrix `P` with `P|k⟩ = |perm[k]⟩`.
pub(crate) fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut p = CMatrix::zeros(n, n);
    for (k, &t) in perm.iter().enumerate() {
        p[(t, k)] = ONE;
    }
    p
}

/// Conjugate an operator on factors `dims` into the factor order `order`.
pub(crate) fn permute_matrix(m: &CMatrix, dims: &[usize], order: &[usize]) -> CMatrix {
    let map = permutation_map(dims, order);
    let n = map.len();
    CMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])])
}

/// Deterministic 64-bit mixing of a seed with a stream index.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(seed ^ splitmix(stream))
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians, `E|z|² = 1`.
pub(crate) fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // column-major fill keeps the draw order fixed
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Density matrix `GG†/Tr(GG†)` with `G` a seeded complex Gaussian matrix of
/// width `rank`.
pub fn random_density_matrix(dims: &Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::contract(format!("rank {rank} outside 1..={n}")));
    }
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix(&mut rng, n, rank);
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    Ok(DensityMatrix::from_operator_unchecked(Operator {
        entries: m,
        dims: dims.clone(),
    }))
}

/// Haar-random pure state on `dims`.
pub fn random_pure_state(dims: &Dims, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix(&mut rng, dims.total(), 1);
    let v: CVector = g.column(0).into_owned();
    let n = v.norm();
    PureState {
        amplitudes: v / C64::new(n, 0.0),
        dims: dims.clone(),
    }
}

/// Haar-distributed unitary from the QR decomposition of a complex Gaussian
/// matrix with the phases of `diag(R)` divided out.
pub(crate) fn haar_unitary_matrix(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let z = gaussian_matrix(rng, dim, dim);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<Operator> {
    if dim == 0 {
        return Err(Error::contract("unitary dimension must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    Operator::new(haar_unitary_matrix(dim, &mut rng), Dims(vec![dim]))
}
