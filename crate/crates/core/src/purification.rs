//! Standard purifications on `A ⊗ B ⊗ A' ⊗ B'` and the exponential chart
//! of the ancilla unitary group.

use crate::error::{Error, Result};
use crate::info;
use crate::tensor::{self, CMatrix, CVector, DensityMatrix, Dims, Operator, PureState, C64};
use crate::tol;

/// A bipartite state together with its spectral purification
/// `Σ_i √λ_i |Ψ_i⟩_AB |i⟩_A'B'`, where `|i⟩_A'B'` is the `i`-th row-major
/// basis vector of the ancilla (so `|0⟩_A'|i⟩_B'` whenever `i < d_B'`).
#[derive(Debug, Clone)]
pub struct PurificationFrame {
    base_state: DensityMatrix,
    rank: usize,
    d_aprime: usize,
    d_bprime: usize,
    psi_s: PureState,
}

impl PurificationFrame {
    pub fn base_state(&self) -> &DensityMatrix {
        &self.base_state
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn d_aprime(&self) -> usize {
        self.d_aprime
    }

    pub fn d_bprime(&self) -> usize {
        self.d_bprime
    }

    pub fn ancilla_dim(&self) -> usize {
        self.d_aprime * self.d_bprime
    }

    /// Purification on `A ⊗ B ⊗ A' ⊗ B'`.
    pub fn psi_s(&self) -> &PureState {
        &self.psi_s
    }

    /// `(I_AB ⊗ U)|Ψ_s⟩`.
    pub fn rotate(&self, u: &CMatrix) -> Result<PureState> {
        let d = self.ancilla_dim();
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::contract(format!(
                "ancilla unitary must be {d}×{d}, got {}×{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let dab = self.base_state.dim();
        // rows of `m` run over AB, columns over the ancilla
        let v = self.psi_s.amplitudes();
        let m = CMatrix::from_fn(dab, d, |r, c| v[r * d + c]);
        let rotated = m * u.transpose();
        let out = CVector::from_fn(dab * d, |k, _| rotated[(k / d, k % d)]);
        Ok(PureState::from_parts_unchecked(out, self.psi_s.dims().clone()))
    }

    /// Frame of `ρ ⊗ σ` across the cut `AC:BD`, with ancilla `A'C' ⊗ B'D'`,
    /// built from the two purifications.
    pub fn tensor(&self, other: &PurificationFrame) -> Result<PurificationFrame> {
        let joint = self.psi_s.tensor(&other.psi_s).permute(&[0, 4, 1, 5, 2, 6, 3, 7])?;
        let f = joint.dims().factors().to_vec();
        let dims = Dims::new(vec![f[0] * f[1], f[2] * f[3], f[4] * f[5], f[6] * f[7]])?;
        let base = self
            .base_state
            .tensor(&other.base_state)
            .regroup(&[vec![0, 2], vec![1, 3]])?;
        Ok(PurificationFrame {
            base_state: base,
            rank: self.rank * other.rank,
            d_aprime: self.d_aprime * other.d_aprime,
            d_bprime: self.d_bprime * other.d_bprime,
            psi_s: PureState::from_parts_unchecked(joint.amplitudes().clone(), dims),
        })
    }

    /// `S(AA')` of the rotated purification for a given ancilla unitary.
    pub fn objective_for_unitary(&self, u: &CMatrix) -> Result<f64> {
        let psi = self.rotate(u)?;
        Ok(info::entropy(&psi.reduce(&[0, 2])?))
    }
}

/// Spectral purification of a bipartite state into an `A' ⊗ B'` ancilla.
///
/// Eigenvectors with eigenvalue below the eigenvalue floor are dropped.
pub fn standard_purification(
    rho: &DensityMatrix,
    d_aprime: usize,
    d_bprime: usize,
) -> Result<PurificationFrame> {
    if rho.n_parties() != 2 {
        return Err(Error::contract(format!(
            "purification frame needs a bipartite state, got {} parties",
            rho.n_parties()
        )));
    }
    if d_aprime == 0 || d_bprime == 0 {
        return Err(Error::contract("ancilla dimensions must be positive"));
    }
    let eig = rho.op().eigs()?;
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > tol::EIG_FLOOR)
        .collect();
    let rank = kept.len();
    let d = d_aprime * d_bprime;
    if d < rank {
        return Err(Error::AncillaTooSmall {
            required: rank,
            got: d,
        });
    }
    let dab = rho.dim();
    let mut v = CVector::zeros(dab * d);
    for (i, &k) in kept.iter().enumerate() {
        let amp = C64::new(eig.values[k].sqrt(), 0.0);
        for r in 0..dab {
            v[r * d + i] = amp * eig.vectors[(r, k)];
        }
    }
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    let f = rho.dims().factors();
    let dims = Dims::new(vec![f[0], f[1], d_aprime, d_bprime])?;
    Ok(PurificationFrame {
        base_state: rho.clone(),
        rank,
        d_aprime,
        d_bprime,
        psi_s: PureState::from_parts_unchecked(v, dims),
    })
}

/// Spectral purification of any state into one extra subsystem of
/// dimension `rank(ρ)`, appended as the last factor.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = rho.op().eigs()?;
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > tol::EIG_FLOOR)
        .collect();
    let r = kept.len();
    let n = rho.dim();
    let mut v = CVector::zeros(n * r);
    for (i, &k) in kept.iter().enumerate() {
        let amp = C64::new(eig.values[k].sqrt(), 0.0);
        for row in 0..n {
            v[row * r + i] = amp * eig.vectors[(row, k)];
        }
    }
    PureState::normalized(v, rho.dims().concat(&Dims::new(vec![r])?))
}

/// `U₁ ⊗ U₂` on `A'B'C'D'` reordered to act on the joint ancilla
/// `A'C' ⊗ B'D'` of [`PurificationFrame::tensor`].
pub fn joint_ancilla_unitary(
    u1: &CMatrix,
    split1: (usize, usize),
    u2: &CMatrix,
    split2: (usize, usize),
) -> CMatrix {
    let k = u1.kronecker(u2);
    tensor::permute_matrix(&k, &[split1.0, split1.1, split2.0, split2.1], &[0, 2, 1, 3])
}

/// Real coordinates of a Hermitian generator: `dim` diagonal entries
/// followed by `(Re, Im)` of each strictly upper entry in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams {
    theta: Vec<f64>,
}

impl UnitaryParams {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Invariant {
                invariant: "finite",
                detail: format!("theta[{i}] = {}", theta[i]),
            });
        }
        Ok(Self { theta })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            theta: vec![0.0; dim * dim],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Coordinates of a Hermitian matrix.
    pub fn from_hermitian(h: &CMatrix) -> Self {
        let n = h.nrows();
        let mut theta = Vec::with_capacity(n * n);
        theta.extend((0..n).map(|i| h[(i, i)].re));
        for j in 0..n {
            for k in j + 1..n {
                theta.push(h[(j, k)].re);
                theta.push(h[(j, k)].im);
            }
        }
        Self { theta }
    }
}

fn check_len(p: &UnitaryParams, dim: usize) -> Result<()> {
    if p.theta.len() != dim * dim {
        return Err(Error::contract(format!(
            "{} parameters given for a {dim}-dimensional unitary (need {})",
            p.theta.len(),
            dim * dim
        )));
    }
    Ok(())
}

/// Hermitian generator `H(θ)`.
pub fn params_to_hermitian(p: &UnitaryParams, dim: usize) -> Result<CMatrix> {
    check_len(p, dim)?;
    let t = &p.theta;
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = C64::new(t[i], 0.0);
    }
    let mut k = dim;
    for r in 0..dim {
        for c in r + 1..dim {
            let z = C64::new(t[k], t[k + 1]);
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
            k += 2;
        }
    }
    Ok(h)
}

/// `exp(i H(θ))`.
pub fn params_to_unitary(p: &UnitaryParams, dim: usize) -> Result<Operator> {
    let h = params_to_hermitian(p, dim)?;
    Operator::new(tensor::expi_hermitian(&h), Dims::new(vec![dim])?)
}

/// `S(AA')` of `(I ⊗ exp(iH(θ)))|Ψ_s⟩`.
pub fn objective_entropy(frame: &PurificationFrame, p: &UnitaryParams) -> Result<f64> {
    let u = params_to_unitary(p, frame.ancilla_dim())?;
    frame.objective_for_unitary(u.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn reduction_error(frame: &PurificationFrame, psi: &PureState) -> f64 {
        psi.reduce(&[0, 1])
            .unwrap()
            .op()
            .max_abs_diff(frame.base_state().op())
    }

    #[test]
    fn pure_input_gets_trivial_ancilla() {
        let bell = states::bell();
        let frame = standard_purification(&bell.density(), 2, 3).unwrap();
        assert_eq!(frame.rank(), 1);
        let expected = bell.tensor(&PureState::basis(Dims::new(vec![2, 3]).unwrap(), 0).unwrap());
        let overlap = expected.amplitudes().dotc(frame.psi_s().amplitudes()).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_diagonal_rank_four() {
        let w = states::werner_2qubit(0.6).unwrap();
        let frame = standard_purification(&w, 2, 2).unwrap();
        assert_eq!(frame.rank(), 4);
        assert!(reduction_error(&frame, frame.psi_s()) < 1e-10);
    }

    #[test]
    fn one_sided_ancilla() {
        let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2));
        let frame = standard_purification(&mixed, 1, 4).unwrap();
        assert!(reduction_error(&frame, frame.psi_s()) < 1e-10);
    }

    #[test]
    fn ancilla_too_small_names_rank() {
        let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2));
        match standard_purification(&mixed, 1, 3) {
            Err(Error::AncillaTooSmall { required: 4, got: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_frame_and_joint_unitary() {
        let f1 = standard_purification(&states::werner_2qubit(0.7).unwrap(), 2, 2).unwrap();
        let f2 = standard_purification(&states::product_2qubit(0.2, 0.6).unwrap(), 4, 1).unwrap();
        let joint = f1.tensor(&f2).unwrap();
        assert_eq!((joint.d_aprime(), joint.d_bprime(), joint.rank()), (8, 2, 16));
        assert!(reduction_error(&joint, joint.psi_s()) < 1e-10);
        let u1 = tensor::haar_random_unitary(4, 1).unwrap();
        let u2 = tensor::haar_random_unitary(4, 2).unwrap();
        let u = joint_ancilla_unitary(u1.entries(), (2, 2), u2.entries(), (4, 1));
        let lhs = joint.objective_for_unitary(&u).unwrap();
        let rhs = f1.objective_for_unitary(u1.entries()).unwrap()
            + f2.objective_for_unitary(u2.entries()).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn purify_reduces_back() {
        let rho = states::fig1_family(0.4, 0.3).unwrap();
        let psi = purify(&rho).unwrap();
        assert_eq!(psi.dims().factors(), &[2, 2, 2, 3]);
        let back = psi.reduce(&[0, 1, 2]).unwrap();
        assert!(back.op().max_abs_diff(rho.op()) < 1e-10);
    }

    #[test]
    fn chart_identity_and_pauli() {
        let u = params_to_unitary(&UnitaryParams::zeros(3), 3).unwrap();
        assert!(tensor::max_abs_diff(u.entries(), &CMatrix::identity(3, 3)) < 1e-15);
        // H = π/2 σx
        let half_pi = std::f64::consts::FRAC_PI_2;
        let p = UnitaryParams::new(vec![0.0, 0.0, half_pi, 0.0]).unwrap();
        let u = params_to_unitary(&p, 2).unwrap();
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        let isx = CMatrix::from_row_slice(2, 2, &[z, i, i, z]);
        assert!(tensor::max_abs_diff(u.entries(), &isx) < 1e-10);
    }

    #[test]
    fn chart_round_trip() {
        let theta: Vec<f64> = (0..16).map(|k| (k as f64 * 0.37).sin()).collect();
        let p = UnitaryParams::new(theta).unwrap();
        let h = params_to_hermitian(&p, 4).unwrap();
        assert_eq!(UnitaryParams::from_hermitian(&h), p);
        let u = params_to_unitary(&p, 4).unwrap();
        assert!(tensor::unitarity_error(u.entries()) < 1e-10);
        let det = u.entries().clone().determinant();
        assert!((det.norm() - 1.0).abs() < 1e-10);
        assert!(params_to_unitary(&p, 3).is_err());
        assert!(UnitaryParams::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn objective_on_pure_and_bell() {
        let g = states::ghz_generalized(2, 0.3, 1).unwrap().density();
        let frame = standard_purification(&g, 1, 1).unwrap();
        let v = objective_entropy(&frame, &UnitaryParams::zeros(1)).unwrap();
        assert!((v - info::binary_entropy(0.3)).abs() < 1e-12);
        let frame = standard_purification(&states::bell().density(), 2, 2).unwrap();
        for seed in 0..5 {
            let u = tensor::haar_random_unitary(4, seed).unwrap();
            let v = frame.objective_for_unitary(u.entries()).unwrap();
            assert!(v >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn product_state_reaches_zero_with_local_purifiers() {
        let rho = states::product_2qubit(0.3, 0.8).unwrap();
        let frame = standard_purification(&rho, 2, 2).unwrap();
        // eigenvector k of ρ_A⊗ρ_B is |a b⟩ for some (a, b); map ancilla |k⟩
        // to |a⟩_A'|b⟩_B'
        let eig = rho.op().eigs().unwrap();
        let mut u = CMatrix::zeros(4, 4);
        for k in 0..4 {
            let col = eig.vectors.column(k);
            let target = (0..4).max_by(|&x, &y| col[x].norm().total_cmp(&col[y].norm())).unwrap();
            let phase = col[target] / C64::new(col[target].norm(), 0.0);
            u[(target, k)] = phase.conj();
        }
        assert!(tensor::unitarity_error(&u) < 1e-12);
        assert!(frame.objective_for_unitary(&u).unwrap() < 1e-9);
    }
}
