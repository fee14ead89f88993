//! Named states and state families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    self, CMatrix, CVector, DensityMatrix, Dims, Operator, PureState, C64, ZERO,
};
use crate::tol;

/// Largest qubit count accepted by the n-party GHZ and W constructors.
pub const MAX_QUBITS: usize = 10;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::contract(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_sign(sign: i8) -> Result<()> {
    if sign != 1 && sign != -1 {
        return Err(Error::contract(format!("sign must be ±1, got {sign}")));
    }
    Ok(())
}

fn check_qubits(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_QUBITS {
        return Err(Error::contract(format!(
            "qubit count {n} outside {min}..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_parts_unchecked(
        CVector::from_vec(vec![c(s), ZERO, ZERO, c(s)]),
        Dims::qubits(2),
    )
}

/// `(|01⟩ - |10⟩)/√2`.
pub fn singlet() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_parts_unchecked(
        CVector::from_vec(vec![ZERO, c(s), c(-s), ZERO]),
        Dims::qubits(2),
    )
}

/// `√a|0…0⟩ + sign·√(1-a)|1…1⟩` on `n` qubits.
pub fn ghz_generalized(n: usize, a: f64, sign: i8) -> Result<PureState> {
    check_qubits(n, 2)?;
    check_prob("a", a)?;
    check_sign(sign)?;
    let dim = 1usize << n;
    let mut v = CVector::zeros(dim);
    v[0] = c(a.sqrt());
    v[dim - 1] = c(f64::from(sign) * (1.0 - a).sqrt());
    PureState::normalized(v, Dims::qubits(n))
}

/// Uniform superposition of the `n` weight-one strings.
pub fn w_state(n: usize) -> Result<PureState> {
    check_qubits(n, 2)?;
    let dim = 1usize << n;
    let amp = c(1.0 / (n as f64).sqrt());
    let mut v = CVector::zeros(dim);
    for k in 0..n {
        v[1 << k] = amp;
    }
    PureState::normalized(v, Dims::qubits(n))
}

fn basis_projector(n: usize, index: usize) -> DensityMatrix {
    PureState::basis(Dims::qubits(n), index).unwrap().density()
}

/// `p|W⟩⟨W| + (1-p)[a|000⟩⟨000| + (1-a)|111⟩⟨111|]`.
pub fn fig1_family(p: f64, a: f64) -> Result<DensityMatrix> {
    check_prob("p", p)?;
    check_prob("a", a)?;
    let w = w_state(3)?.density();
    DensityMatrix::mixture(&[
        (p, &w),
        ((1.0 - p) * a, &basis_projector(3, 0)),
        ((1.0 - p) * (1.0 - a), &basis_projector(3, 7)),
    ])
}

/// `p|W⟩⟨W| + (1-p) I/8`.
pub fn fig2_family(p: f64) -> Result<DensityMatrix> {
    check_prob("p", p)?;
    let w = w_state(3)?.density();
    DensityMatrix::mixture(&[
        (p, &w),
        (1.0 - p, &DensityMatrix::maximally_mixed(Dims::qubits(3))),
    ])
}

/// `p|GHZ±⟩⟨GHZ±| + (1-p)[b|0…0⟩⟨0…0| + (1-b)|1…1⟩⟨1…1|]` on `n` qubits,
/// with `|GHZ±⟩ = √a|0…0⟩ ± √(1-a)|1…1⟩`.
pub fn ghz_mixture_n(n: usize, p: f64, a: f64, b: f64, sign: i8) -> Result<DensityMatrix> {
    check_prob("p", p)?;
    check_prob("b", b)?;
    let ghz = ghz_generalized(n, a, sign)?.density();
    let last = (1usize << n) - 1;
    DensityMatrix::mixture(&[
        (p, &ghz),
        ((1.0 - p) * b, &basis_projector(n, 0)),
        ((1.0 - p) * (1.0 - b), &basis_projector(n, last)),
    ])
}

pub fn ghz_mixture(p: f64, a: f64, b: f64, sign: i8) -> Result<DensityMatrix> {
    ghz_mixture_n(3, p, a, b, sign)
}

/// `p|GHZ+⟩⟨GHZ+| + (1-p)|GHZ-⟩⟨GHZ-|` on `n` qubits, same `a` in both.
pub fn ghz_sign_mixture_n(n: usize, p: f64, a: f64) -> Result<DensityMatrix> {
    check_prob("p", p)?;
    let plus = ghz_generalized(n, a, 1)?.density();
    let minus = ghz_generalized(n, a, -1)?.density();
    DensityMatrix::mixture(&[(p, &plus), (1.0 - p, &minus)])
}

pub fn ghz_sign_mixture(p: f64, a: f64) -> Result<DensityMatrix> {
    ghz_sign_mixture_n(3, p, a)
}

/// `ρ_L ⊗ |Ψ_RB⟩⟨Ψ_RB|` as a bipartite state with `A = L⊗R` merged into the
/// first factor.
///
/// In this orientation `S(B) - S(A) = -S(AB)`; the swapped Araki-Lieb
/// equality `S(A) - S(B) = S(AB)` is what the state satisfies.
pub fn araki_lieb_state(rho_l: &DensityMatrix, psi_rb: &PureState) -> Result<DensityMatrix> {
    let f = psi_rb.dims().factors();
    if f.len() != 2 {
        return Err(Error::contract("psi_RB must be bipartite"));
    }
    let (dr, db) = (f[0], f[1]);
    let dl = rho_l.dim();
    let joint = rho_l.tensor(&psi_rb.density());
    joint.with_dims(Dims::new(vec![dl * dr, db])?)
}

/// Direct-sum state `⊕_j q_j ρ_{A b_j^L} ⊗ ρ_{b_j^R C}` on `A ⊗ B ⊗ C`.
///
/// `B` has dimension `Σ_j dim(b_j^L)·dim(b_j^R)`; block `j` occupies a
/// contiguous range of `B` indices and all off-block entries are zero. Left
/// blocks are bipartite on `A ⊗ b_j^L`, right blocks on `b_j^R ⊗ C`.
pub fn ssa_equality_state(
    weights: &[f64],
    left_blocks: &[DensityMatrix],
    right_blocks: &[DensityMatrix],
) -> Result<DensityMatrix> {
    if weights.is_empty() || weights.len() != left_blocks.len() || weights.len() != right_blocks.len()
    {
        return Err(Error::contract(
            "weights, left blocks and right blocks must have equal non-zero length",
        ));
    }
    for &w in weights {
        check_prob("weight", w)?;
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol::TRACE {
        return Err(Error::contract(format!("weights sum to {total}, not 1")));
    }
    let mut da = None;
    let mut dc = None;
    let mut layout = Vec::with_capacity(weights.len());
    let mut db = 0;
    for (l, r) in left_blocks.iter().zip(right_blocks) {
        let (lf, rf) = (l.dims().factors(), r.dims().factors());
        if lf.len() != 2 || rf.len() != 2 {
            return Err(Error::contract("blocks must be bipartite"));
        }
        if *da.get_or_insert(lf[0]) != lf[0] || *dc.get_or_insert(rf[1]) != rf[1] {
            return Err(Error::contract(
                "blocks disagree on the dimension of A or C",
            ));
        }
        layout.push((db, lf[1], rf[0]));
        db += lf[1] * rf[0];
    }
    let (da, dc) = (da.unwrap(), dc.unwrap());
    let n = da * db * dc;
    let mut m = CMatrix::zeros(n, n);
    let idx = |a: usize, b: usize, cc: usize| (a * db + b) * dc + cc;
    for (j, (&(off, dl, dr), (l, r))) in layout
        .iter()
        .zip(left_blocks.iter().zip(right_blocks))
        .enumerate()
    {
        let q = c(weights[j]);
        let (le, re) = (l.entries(), r.entries());
        for a in 0..da {
            for bl in 0..dl {
                for a2 in 0..da {
                    for bl2 in 0..dl {
                        let lv = le[(a * dl + bl, a2 * dl + bl2)];
                        if lv == ZERO {
                            continue;
                        }
                        for br in 0..dr {
                            for cc in 0..dc {
                                for br2 in 0..dr {
                                    for cc2 in 0..dc {
                                        let rv = re[(br * dc + cc, br2 * dc + cc2)];
                                        m[(
                                            idx(a, off + bl * dr + br, cc),
                                            idx(a2, off + bl2 * dr + br2, cc2),
                                        )] += q * lv * rv;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    DensityMatrix::new(Operator::new(m, Dims::new(vec![da, db, dc])?)?)
}

/// Two-block instance of [`ssa_equality_state`]: `A` is maximally entangled
/// with `b_j^L` in both blocks (different Bell states), and the right blocks
/// are seeded random two-qubit states of the given rank. The result satisfies
/// both `S(AB)+S(BC) = S(B)+S(ABC)` and `S(A|B) + S(A|C) = 0`.
pub fn ssa_example(q: f64, right_rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_prob("q", q)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi_plus = PureState::from_parts_unchecked(
        CVector::from_vec(vec![ZERO, c(s), c(s), ZERO]),
        Dims::qubits(2),
    );
    let left = [bell().density(), psi_plus.density()];
    let right = [
        tensor::random_density_matrix(&Dims::qubits(2), right_rank, tensor::derive_seed(seed, 0))?,
        tensor::random_density_matrix(&Dims::qubits(2), right_rank, tensor::derive_seed(seed, 1))?,
    ];
    ssa_equality_state(&[q, 1.0 - q], &left, &right)
}

/// `p|Ψ⁻⟩⟨Ψ⁻| + (1-p) I/4`.
pub fn werner_2qubit(p: f64) -> Result<DensityMatrix> {
    check_prob("p", p)?;
    DensityMatrix::mixture(&[
        (p, &singlet().density()),
        (1.0 - p, &DensityMatrix::maximally_mixed(Dims::qubits(2))),
    ])
}

/// `diag(x, 1-x) ⊗ diag(y, 1-y)`.
pub fn product_2qubit(x: f64, y: f64) -> Result<DensityMatrix> {
    check_prob("x", x)?;
    check_prob("y", y)?;
    let one = Dims::qubits(1);
    Ok(DensityMatrix::diagonal(one.clone(), &[x, 1.0 - x])?
        .tensor(&DensityMatrix::diagonal(one, &[y, 1.0 - y])?))
}

/// Projector onto the symmetric (`sign = 1`) or antisymmetric (`sign = -1`)
/// subspace of `C^d ⊗ C^d`.
pub fn exchange_projector(d: usize, sign: i8) -> CMatrix {
    let n = d * d;
    let s = c(f64::from(sign) * 0.5);
    CMatrix::from_fn(n, n, |r, col| {
        let mut v = ZERO;
        if r == col {
            v += c(0.5);
        }
        // swap |i j⟩ → |j i⟩
        let (i, j) = (col / d, col % d);
        if r == j * d + i {
            v += s;
        }
        v
    })
}

/// State families reachable from a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bell,
    Singlet,
    Werner,
    Ghz,
    W,
    Fig1,
    Fig2,
    GhzMixture,
    GhzSignMixture,
    ArakiLieb,
    SsaEquality,
    Product,
    RandomMixed,
    RandomPure,
    TensorProduct,
    File,
    /// A state handed to the library directly.
    Custom,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::contract(format!("unknown family `{s}`")))
    }

    pub fn name(self) -> String {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::String(s)) => s,
            _ => unreachable!(),
        }
    }
}

/// Family name plus parameters; serializes as
/// `{family, params, n_parties, ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDescriptor {
    pub family: Family,
    pub params: Vec<f64>,
    pub n_parties: usize,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Convention note attached to families whose formula has more than one
    /// common form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    /// Path of the density-matrix file a `file` state was loaded from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

fn param(params: &[f64], i: usize, default: f64) -> f64 {
    params.get(i).copied().unwrap_or(default)
}

fn sign_param(params: &[f64], i: usize) -> Result<i8> {
    let s = param(params, i, 1.0);
    if s == 1.0 {
        Ok(1)
    } else if s == -1.0 {
        Ok(-1)
    } else {
        Err(Error::contract(format!("sign parameter must be ±1, got {s}")))
    }
}

impl StateDescriptor {
    /// Build a descriptor for a named family. `n` applies to the GHZ and W
    /// families; `dims` and `seed` to the random families.
    pub fn new(
        family: Family,
        params: Vec<f64>,
        n: Option<usize>,
        dims: Option<Vec<usize>>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let max = match family {
            Family::Bell
            | Family::Singlet
            | Family::W
            | Family::File
            | Family::TensorProduct
            | Family::Custom => 0,
            Family::Werner | Family::Fig2 | Family::ArakiLieb => 1,
            Family::Fig1 | Family::GhzSignMixture | Family::Product | Family::Ghz => 2,
            Family::SsaEquality => 2,
            Family::GhzMixture => 4,
            Family::RandomMixed => 1,
            Family::RandomPure => 0,
        };
        if params.len() > max {
            return Err(Error::contract(format!(
                "family `{}` takes at most {max} params, got {}",
                family.name(),
                params.len()
            )));
        }
        let mut d = Self {
            family,
            params,
            n_parties: 0,
            dims: Vec::new(),
            seed,
            convention: None,
            source: None,
        };
        let built = d.build_with(n, dims)?;
        d.dims = built.dims().factors().to_vec();
        d.n_parties = d.dims.len();
        if family == Family::Werner {
            d.convention = Some("p|Ψ⁻⟩⟨Ψ⁻| + (1-p)I/4".into());
        }
        Ok(d)
    }

    /// Descriptor for a state that is not generated from a family.
    pub fn opaque(family: Family, rho: &DensityMatrix) -> Self {
        Self {
            family,
            params: Vec::new(),
            n_parties: rho.n_parties(),
            dims: rho.dims().factors().to_vec(),
            seed: None,
            convention: None,
            source: None,
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        let n = match self.family {
            Family::Ghz | Family::W | Family::GhzMixture | Family::GhzSignMixture => {
                Some(self.n_parties)
            }
            _ => None,
        };
        let dims = match self.family {
            Family::RandomMixed | Family::RandomPure => Some(self.dims.clone()),
            _ => None,
        };
        self.build_with(n, dims)
    }

    fn build_with(&self, n: Option<usize>, dims: Option<Vec<usize>>) -> Result<DensityMatrix> {
        let p = &self.params;
        let n3 = n.unwrap_or(3);
        match self.family {
            Family::Bell => Ok(bell().density()),
            Family::Singlet => Ok(singlet().density()),
            Family::Werner => werner_2qubit(param(p, 0, 1.0)),
            Family::Ghz => Ok(ghz_generalized(n3, param(p, 0, 0.5), sign_param(p, 1)?)?.density()),
            Family::W => Ok(w_state(n3)?.density()),
            Family::Fig1 => fig1_family(param(p, 0, 0.5), param(p, 1, 0.5)),
            Family::Fig2 => fig2_family(param(p, 0, 0.5)),
            Family::GhzMixture => ghz_mixture_n(
                n3,
                param(p, 0, 0.5),
                param(p, 1, 0.5),
                param(p, 2, 0.5),
                sign_param(p, 3)?,
            ),
            Family::GhzSignMixture => ghz_sign_mixture_n(n3, param(p, 0, 0.5), param(p, 1, 0.5)),
            Family::ArakiLieb => {
                let x = param(p, 0, 0.5);
                check_prob("x", x)?;
                let rho_l = DensityMatrix::diagonal(Dims::qubits(1), &[x, 1.0 - x])?;
                araki_lieb_state(&rho_l, &bell())
            }
            Family::SsaEquality => {
                let rank = param(p, 1, 2.0);
                if rank.fract() != 0.0 || !(1.0..=4.0).contains(&rank) {
                    return Err(Error::contract("ssa-equality rank must be an integer in 1..=4"));
                }
                ssa_example(param(p, 0, 0.5), rank as usize, self.seed.unwrap_or(0))
            }
            Family::Product => product_2qubit(param(p, 0, 0.5), param(p, 1, 0.5)),
            Family::RandomMixed | Family::RandomPure => {
                let dims = Dims::new(dims.unwrap_or_else(|| vec![2, 2]))?;
                let seed = self.seed.unwrap_or(0);
                if self.family == Family::RandomPure {
                    Ok(tensor::random_pure_state(&dims, seed).density())
                } else {
                    let rank = param(p, 0, dims.total() as f64);
                    if rank.fract() != 0.0 || rank < 1.0 {
                        return Err(Error::contract("random-mixed rank must be a positive integer"));
                    }
                    tensor::random_density_matrix(&dims, rank as usize, seed)
                }
            }
            Family::TensorProduct | Family::File | Family::Custom => Err(Error::contract(format!(
                "family `{}` cannot be rebuilt from a descriptor",
                self.family.name()
            ))),
        }
    }
}
