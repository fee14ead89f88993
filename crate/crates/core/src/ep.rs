//! Entanglement of purification: certified bounds, exact-value structures,
//! and multi-start minimization over ancilla unitaries.

use serde::{Deserialize, Serialize};

use crate::audit::{AuditRecord, Certification, Relation};
use crate::error::{Error, Result};
use crate::info::{self, Partition};
use crate::purification::{joint_ancilla_unitary, standard_purification, PurificationFrame};
use crate::search::{DescentOptions, Landscape};
use crate::states::{self, Family, StateDescriptor};
use crate::tensor::{self, CMatrix, DensityMatrix};
use crate::tol;

pub use crate::search::GradientKind;

/// Default cap on the dimension of the purified state.
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

const ROUNDING: f64 = 1e-12;

/// How the purifying system is split into `A' ⊗ B'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AncillaMode {
    /// `d_A' = d_B' = rank(ρ)`.
    #[default]
    RankDefault,
    /// `d_A' = d_AB`, `d_B' = d_AB²`.
    TerhalFull,
    Explicit { d_aprime: usize, d_bprime: usize },
}

impl AncillaMode {
    pub fn resolve(self, d_ab: usize, rank: usize) -> Result<(usize, usize)> {
        let (a, b) = match self {
            AncillaMode::RankDefault => (rank, rank),
            AncillaMode::TerhalFull => (d_ab, d_ab * d_ab),
            AncillaMode::Explicit { d_aprime, d_bprime } => (d_aprime, d_bprime),
        };
        if a == 0 || b == 0 {
            return Err(Error::contract("ancilla dimensions must be positive"));
        }
        if a * b < rank {
            return Err(Error::AncillaTooSmall {
                required: rank,
                got: a * b,
            });
        }
        Ok((a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpConfig {
    /// Haar-random starts on top of the fixed ones.
    pub restarts: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    /// Finite-difference step, used by [`GradientKind::CentralDifference`].
    pub gradient_step: f64,
    pub seed: u64,
    pub ancilla_mode: AncillaMode,
    pub gradient: GradientKind,
    pub max_dim: usize,
}

impl Default for EpConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 2000,
            objective_tolerance: 1e-9,
            gradient_step: 1e-5,
            seed: 0,
            ancilla_mode: AncillaMode::RankDefault,
            gradient: GradientKind::Analytic,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl EpConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::contract("restarts must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::contract("max_iterations must be at least 1"));
        }
        if !(self.objective_tolerance > 0.0) || !(self.gradient_step > 0.0) {
            return Err(Error::contract("tolerances must be positive"));
        }
        if self.max_dim == 0 {
            return Err(Error::contract("max_dim must be positive"));
        }
        Ok(())
    }

    pub(crate) fn descent_options(&self) -> DescentOptions {
        DescentOptions {
            max_iterations: self.max_iterations,
            objective_tolerance: self.objective_tolerance,
            gradient: self.gradient,
            gradient_step: self.gradient_step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerSource {
    /// `I(X:Y)/2`
    HalfMi,
    /// `½[I(A:B)+I(A:C)]` on a tripartite state.
    PairSum,
    /// `½[I(X:Y₁)+I(X:Y₂)]` for a split of one side.
    PartySplit,
    /// Entanglement of formation of a two-qubit state.
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperSource {
    /// Entropy of the first group.
    EntropyFirst,
    /// Entropy of the second group.
    EntropySecond,
    /// Best optimizer value.
    Optimizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub source: LowerSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub lower_source: LowerSource,
    pub upper: f64,
    pub upper_source: UpperSource,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    ArakiLieb,
    SsaEquality,
    PureState,
    BoundCoincidence,
    SymmetricSubspace,
    AntisymmetricSubspace,
}

/// A structure that fixes `E_p` exactly, with the value it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactnessCertificate {
    pub kind: CertificateKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub start: String,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpResult {
    pub cut: Partition,
    pub bracket: Bracket,
    /// Best objective value found: an upper estimate of `E_p`.
    pub estimate: f64,
    pub per_restart_values: Vec<f64>,
    pub restarts: Vec<RestartRecord>,
    pub config_echo: EpConfig,
    pub exactness_certificate: Option<ExactnessCertificate>,
    pub converged: bool,
    pub d_aprime: usize,
    pub d_bprime: usize,
    pub rank: usize,
    /// Ancilla unitary attaining [`EpResult::estimate`].
    #[serde(skip)]
    pub best_unitary: Option<CMatrix>,
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

fn same_set(a: &[usize], b: &[usize]) -> bool {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Every split of `group` into two non-empty parts, each listed once.
pub fn two_way_splits(group: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = group.len();
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0..(1usize << (n - 1)) {
        let mut first = vec![group[0]];
        let mut second = Vec::new();
        for (i, &p) in group.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                first.push(p);
            } else {
                second.push(p);
            }
        }
        if !second.is_empty() {
            out.push((first, second));
        }
    }
    out
}

fn check_cut(rho: &DensityMatrix, cut: &Partition) -> Result<()> {
    cut.expect_len(2)?;
    cut.validate_for(rho)
}

fn split_bound(rho: &DensityMatrix, x: &[usize], y1: &[usize], y2: &[usize]) -> Result<f64> {
    Ok(0.5 * (info::mutual_information_between(rho, x, y1)?
        + info::mutual_information_between(rho, x, y2)?))
}

fn split_source(cut: &Partition) -> LowerSource {
    if cut.group(0).len() + cut.group(1).len() == 3 {
        LowerSource::PairSum
    } else {
        LowerSource::PartySplit
    }
}

/// Largest of the certified lower bounds on `E_p` across a bipartite cut:
/// half the mutual information, the split bound for `split` (two parts of
/// one side of the cut), and for two qubits the entanglement of formation.
pub fn ep_lower_bounds(
    rho: &DensityMatrix,
    cut: &Partition,
    split: Option<(&[usize], &[usize])>,
) -> Result<LowerBound> {
    check_cut(rho, cut)?;
    let mut best = LowerBound {
        value: 0.5 * info::mutual_information(rho, cut)?,
        source: LowerSource::HalfMi,
    };
    if let Some((y1, y2)) = split {
        let joined = union(y1, y2);
        let x = if same_set(&joined, cut.group(1)) {
            cut.group(0)
        } else if same_set(&joined, cut.group(0)) {
            cut.group(1)
        } else {
            return Err(Error::contract(
                "split must partition one side of the cut",
            ));
        };
        if y1.is_empty() || y2.is_empty() {
            return Err(Error::contract("split parts must be non-empty"));
        }
        let v = split_bound(rho, x, y1, y2)?;
        if v > best.value {
            best = LowerBound {
                value: v,
                source: split_source(cut),
            };
        }
    }
    let bip = rho.regroup(cut.groups())?;
    if bip.dims().factors() == [2, 2] {
        let ef = info::eof_2qubit(&bip)?;
        if ef > best.value {
            best = LowerBound {
                value: ef,
                source: LowerSource::Eof,
            };
        }
    }
    Ok(best)
}

/// [`ep_lower_bounds`] maximized over every two-way split of either side.
pub fn best_lower_bound(rho: &DensityMatrix, cut: &Partition) -> Result<LowerBound> {
    let mut best = ep_lower_bounds(rho, cut, None)?;
    for side in 0..2 {
        for (y1, y2) in two_way_splits(cut.group(side)) {
            let b = ep_lower_bounds(rho, cut, Some((&y1, &y2)))?;
            if b.value > best.value {
                best = b;
            }
        }
    }
    Ok(best)
}

/// `min(S(X), S(Y))` and which side attains it.
pub fn trivial_upper_bound(rho: &DensityMatrix, cut: &Partition) -> Result<(f64, UpperSource)> {
    check_cut(rho, cut)?;
    let sx = info::subsystem_entropy(rho, cut.group(0))?;
    let sy = info::subsystem_entropy(rho, cut.group(1))?;
    Ok(if sx <= sy {
        (sx, UpperSource::EntropyFirst)
    } else {
        (sy, UpperSource::EntropySecond)
    })
}

pub fn ep_upper_bound_trivial(rho: &DensityMatrix, cut: &Partition) -> Result<f64> {
    Ok(trivial_upper_bound(rho, cut)?.0)
}

fn exchange_certificate(bip: &DensityMatrix, s_first: f64) -> Option<ExactnessCertificate> {
    let f = bip.dims().factors();
    if f[0] != f[1] {
        return None;
    }
    for (sign, kind) in [
        (1, CertificateKind::SymmetricSubspace),
        (-1, CertificateKind::AntisymmetricSubspace),
    ] {
        let p = states::exchange_projector(f[0], sign);
        let projected = &p * bip.entries() * &p;
        if tensor::max_abs_diff(&projected, bip.entries()) < tol::CERTIFICATE {
            return Some(ExactnessCertificate {
                kind,
                value: s_first,
            });
        }
    }
    None
}

/// Structures with a known exact `E_p` across `cut`: global purity,
/// `S(X|Y₁)+S(X|Y₂) = 0` for a split of one side, the Araki-Lieb equality
/// in either orientation, and support on the symmetric or antisymmetric
/// subspace.
pub fn detect_exact_structure(
    rho: &DensityMatrix,
    cut: &Partition,
) -> Result<Option<ExactnessCertificate>> {
    check_cut(rho, cut)?;
    let (x, y) = (cut.group(0), cut.group(1));
    let sx = info::subsystem_entropy(rho, x)?;
    let sy = info::subsystem_entropy(rho, y)?;
    let sxy = info::subsystem_entropy(rho, &union(x, y))?;
    let eps = tol::CERTIFICATE;
    if sxy < eps {
        return Ok(Some(ExactnessCertificate {
            kind: CertificateKind::PureState,
            value: sx,
        }));
    }
    for (side, other, s_side) in [(x, y, sx), (y, x, sy)] {
        for (o1, o2) in two_way_splits(other) {
            let c = info::conditional_entropy(rho, side, &o1)?
                + info::conditional_entropy(rho, side, &o2)?;
            if c.abs() < eps {
                return Ok(Some(ExactnessCertificate {
                    kind: CertificateKind::SsaEquality,
                    value: s_side,
                }));
            }
        }
    }
    if (sy - sx - sxy).abs() < eps {
        return Ok(Some(ExactnessCertificate {
            kind: CertificateKind::ArakiLieb,
            value: sx,
        }));
    }
    if (sx - sy - sxy).abs() < eps {
        return Ok(Some(ExactnessCertificate {
            kind: CertificateKind::ArakiLieb,
            value: sy,
        }));
    }
    Ok(exchange_certificate(&rho.regroup(cut.groups())?, sx))
}

/// Result of running the descent from a list of starts on one frame.
pub(crate) struct FrameRun {
    pub records: Vec<RestartRecord>,
    pub best: usize,
    pub best_unitary: CMatrix,
}

impl FrameRun {
    pub fn value(&self) -> f64 {
        self.records[self.best].value
    }
}

pub(crate) fn frame_landscape(frame: &PurificationFrame) -> Landscape {
    let dims = frame.psi_s().dims().factors().to_vec();
    Landscape::new(frame.psi_s().amplitudes(), &dims, 2, &[0, 2])
}

/// Identity, the swap that moves the purifying system into `A'` (when it
/// fits), then seeded Haar-random unitaries.
fn default_starts(frame: &PurificationFrame, cfg: &EpConfig) -> Vec<(String, CMatrix)> {
    let d = frame.ancilla_dim();
    let mut starts = vec![("identity".to_string(), CMatrix::identity(d, d))];
    let (a, b, r) = (frame.d_aprime(), frame.d_bprime(), frame.rank());
    if a > 1 && r <= a {
        // |i⟩ ↦ |i⟩_A'|0⟩_B' for the occupied indices, other basis states fill
        // the remaining slots in order
        let mut perm = vec![usize::MAX; d];
        let mut used = vec![false; d];
        for (i, slot) in perm.iter_mut().enumerate().take(r) {
            *slot = i * b;
            used[i * b] = true;
        }
        let mut free = (0..d).filter(|&k| !used[k]);
        for slot in perm.iter_mut().skip(r) {
            *slot = free.next().unwrap();
        }
        starts.push(("swap".to_string(), tensor::permutation_matrix(&perm)));
    }
    for i in 0..cfg.restarts {
        let mut rng = tensor::rng_from_seed(tensor::derive_seed(cfg.seed, i as u64));
        starts.push((format!("haar-{i}"), tensor::haar_unitary_matrix(d, &mut rng)));
    }
    starts
}

pub(crate) fn run_starts(
    land: &Landscape,
    starts: Vec<(String, CMatrix)>,
    opts: &DescentOptions,
) -> FrameRun {
    let mut records = Vec::with_capacity(starts.len());
    let mut best = 0;
    let mut best_unitary = None;
    for (label, u0) in starts {
        let d = land.descend(u0, opts);
        let better = best_unitary.is_none() || d.value < records_value(&records, best);
        if better {
            best = records.len();
            best_unitary = Some(d.unitary);
        }
        records.push(RestartRecord {
            start: label,
            value: d.value,
            iterations: d.iterations,
            converged: d.converged,
        });
    }
    FrameRun {
        records,
        best,
        best_unitary: best_unitary.expect("at least one start"),
    }
}

fn records_value(records: &[RestartRecord], i: usize) -> f64 {
    records[i].value
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

fn optimize_with_frame(
    rho: &DensityMatrix,
    cut: &Partition,
    cfg: &EpConfig,
) -> Result<(EpResult, PurificationFrame)> {
    cfg.validate()?;
    check_cut(rho, cut)?;
    let bip = rho.regroup(cut.groups())?;
    let rank = bip.rank();
    let (a, b) = cfg.ancilla_mode.resolve(bip.dim(), rank)?;
    check_cap(bip.dim() * a * b, cfg.max_dim)?;
    let lower = best_lower_bound(rho, cut)?;
    let (trivial, trivial_source) = trivial_upper_bound(rho, cut)?;
    let frame = standard_purification(&bip, a, b)?;
    let land = frame_landscape(&frame);
    let run = run_starts(&land, default_starts(&frame, cfg), &cfg.descent_options());
    let estimate = run.value();
    // rounding-level differences do not count as improvements
    let (upper, upper_source) = if estimate < trivial - ROUNDING {
        (estimate.max(lower.value), UpperSource::Optimizer)
    } else {
        (trivial, trivial_source)
    };
    let certificate = if trivial - lower.value <= tol::CERTIFICATE {
        Some(ExactnessCertificate {
            kind: CertificateKind::BoundCoincidence,
            value: trivial,
        })
    } else {
        detect_exact_structure(rho, cut)?
    };
    let result = EpResult {
        cut: cut.clone(),
        bracket: Bracket {
            lower: lower.value,
            lower_source: lower.source,
            upper,
            upper_source,
            gap: upper - lower.value,
        },
        estimate,
        per_restart_values: run.records.iter().map(|r| r.value).collect(),
        converged: run.records[run.best].converged,
        restarts: run.records,
        config_echo: cfg.clone(),
        exactness_certificate: certificate,
        d_aprime: a,
        d_bprime: b,
        rank: frame.rank(),
        best_unitary: Some(run.best_unitary),
    };
    Ok((result, frame))
}

/// Multi-start minimization of `S(AA')` over ancilla unitaries, with the
/// certified bracket and any exactness certificate.
pub fn ep_optimize(rho: &DensityMatrix, cut: &Partition, cfg: &EpConfig) -> Result<EpResult> {
    Ok(optimize_with_frame(rho, cut, cfg)?.0)
}

/// `E_p(AC:BD)` of `ρ ⊗ σ` against `E_p(A:B) + E_p(C:D)`, with the joint
/// search started from the tensor product of the two separate optima.
pub fn ep_subadditivity_certified(
    rho: &DensityMatrix,
    rho_cut: &Partition,
    sigma: &DensityMatrix,
    sigma_cut: &Partition,
    cfg: &EpConfig,
) -> Result<AuditRecord> {
    let (r1, f1) = optimize_with_frame(rho, rho_cut, cfg)?;
    let (r2, f2) = optimize_with_frame(sigma, sigma_cut, cfg)?;
    let joint_dim = f1.psi_s().dims().total() * f2.psi_s().dims().total();
    check_cap(joint_dim, cfg.max_dim)?;
    let joint = f1.tensor(&f2)?;
    let warm = joint_ancilla_unitary(
        r1.best_unitary.as_ref().unwrap(),
        (r1.d_aprime, r1.d_bprime),
        r2.best_unitary.as_ref().unwrap(),
        (r2.d_aprime, r2.d_bprime),
    );
    let land = frame_landscape(&joint);
    let warm_value = land.objective(&warm);
    let run = run_starts(&land, vec![("warm-start".into(), warm)], &cfg.descent_options());
    let lhs = run.value();
    let rhs = r1.estimate + r2.estimate;
    let joint_cut = Partition::bipartite(vec![0], vec![1])?;
    let joint_lower = best_lower_bound(joint.base_state(), &joint_cut)?;
    let state = StateDescriptor::opaque(Family::TensorProduct, joint.base_state());
    Ok(AuditRecord::new(
        "ep-subadditivity",
        state,
        lhs,
        rhs,
        Relation::LessEq,
        tol::WARM_START,
        Certification::OptimizerAssisted,
    )
    .with_seed(cfg.seed)
    .extra("ep_first", r1.estimate)
    .extra("ep_second", r2.estimate)
    .extra("warm_start_value", warm_value)
    .extra("warm_start_gap", rhs - lhs)
    .extra("joint_lower_bound", joint_lower.value)
    .extra("joint_iterations", run.records[0].iterations as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn cut(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn quick(seed: u64) -> EpConfig {
        EpConfig {
            restarts: 4,
            ..EpConfig::with_seed(seed)
        }
    }

    #[test]
    fn splits_enumerate_each_pair_once() {
        assert_eq!(two_way_splits(&[1, 2]), vec![(vec![1], vec![2])]);
        assert_eq!(two_way_splits(&[0, 1, 2]).len(), 3);
        assert!(two_way_splits(&[4]).is_empty());
    }

    #[test]
    fn lower_bound_examples() {
        let bell = states::bell().density();
        let b = ep_lower_bounds(&bell, &cut("A:B"), None).unwrap();
        assert_eq!(b.source, LowerSource::HalfMi);
        assert!((b.value - 1.0).abs() < 1e-12);
        let g = states::ghz_mixture(0.3, 0.7, 0.4, -1).unwrap();
        let b = ep_lower_bounds(&g, &cut("A:BC"), Some((&[1], &[2]))).unwrap();
        assert_eq!(b.source, LowerSource::PairSum);
        let sa = info::subsystem_entropy(&g, &[0]).unwrap();
        assert!((b.value - sa).abs() < 1e-10);
        assert!(ep_lower_bounds(&g, &cut("A:BC"), Some((&[0], &[2]))).is_err());
        let w = states::werner_2qubit(0.8).unwrap();
        let b = ep_lower_bounds(&w, &cut("A:B"), None).unwrap();
        assert_eq!(b.source, LowerSource::Eof);
    }

    #[test]
    fn trivial_upper_examples() {
        let w3 = states::w_state(3).unwrap().density();
        let u = ep_upper_bound_trivial(&w3, &cut("A:BC")).unwrap();
        assert!((u - 0.918_295_834_054_489_6).abs() < 1e-6);
        let p = states::product_2qubit(0.1, 0.3).unwrap();
        let (v, src) = trivial_upper_bound(&p, &cut("A:B")).unwrap();
        assert!((v - info::binary_entropy(0.1)).abs() < 1e-12);
        assert_eq!(src, UpperSource::EntropyFirst);
    }

    #[test]
    fn certificates() {
        let half = DensityMatrix::maximally_mixed(crate::Dims::qubits(1));
        let al = states::araki_lieb_state(&half, &states::bell()).unwrap();
        let c = detect_exact_structure(&al, &cut("A:B")).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::ArakiLieb);
        assert!((c.value - 1.0).abs() < 1e-12);
        let ssa = states::ssa_example(0.4, 2, 3).unwrap();
        let c = detect_exact_structure(&ssa, &cut("A:BC")).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::SsaEquality);
        assert!((c.value - info::subsystem_entropy(&ssa, &[0]).unwrap()).abs() < 1e-12);
        let singlet = states::singlet().density();
        let c = detect_exact_structure(&singlet, &cut("A:B")).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::PureState);
        assert!((c.value - 1.0).abs() < 1e-12);
        // rank-two mixture inside the antisymmetric subspace of 3⊗3
        let anti = states::exchange_projector(3, -1);
        let rho = DensityMatrix::new(
            crate::Operator::new(&anti / crate::C64::new(3.0, 0.0), crate::Dims::new(vec![3, 3]).unwrap())
                .unwrap(),
        )
        .unwrap();
        let c = detect_exact_structure(&rho, &cut("A:B")).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::AntisymmetricSubspace);
        let w = states::werner_2qubit(0.8).unwrap();
        assert!(detect_exact_structure(&w, &cut("A:B")).unwrap().is_none());
    }

    #[test]
    fn pure_state_estimate_is_entanglement_entropy() {
        let psi = tensor::random_pure_state(&crate::Dims::new(vec![2, 4]).unwrap(), 3);
        let rho = psi.density();
        let r = ep_optimize(&rho, &cut("A:B"), &quick(1)).unwrap();
        let sa = info::subsystem_entropy(&rho, &[0]).unwrap();
        assert!((r.estimate - sa).abs() < 1e-6);
        assert_eq!(r.exactness_certificate.unwrap().kind, CertificateKind::BoundCoincidence);
    }

    #[test]
    fn product_state_estimate_vanishes() {
        let rho = states::product_2qubit(0.3, 0.8).unwrap();
        let r = ep_optimize(&rho, &cut("A:B"), &quick(2)).unwrap();
        assert!(r.estimate <= 1e-6, "estimate {}", r.estimate);
    }

    #[test]
    fn werner_bracket_and_determinism() {
        let w = states::werner_2qubit(0.8).unwrap();
        let a = ep_optimize(&w, &cut("A:B"), &quick(7)).unwrap();
        let b = ep_optimize(&w, &cut("A:B"), &quick(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.estimate >= a.bracket.lower - 1e-9);
        assert!(a.estimate <= 1.0 + 1e-9);
        assert!((a.bracket.gap - (a.bracket.upper - a.bracket.lower)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_config_and_cap() {
        let w = states::werner_2qubit(0.8).unwrap();
        let cfg = EpConfig {
            restarts: 0,
            ..EpConfig::default()
        };
        assert!(matches!(ep_optimize(&w, &cut("A:B"), &cfg), Err(Error::Contract(_))));
        let cfg = EpConfig {
            max_dim: 32,
            ..EpConfig::default()
        };
        assert!(matches!(
            ep_optimize(&w, &cut("A:B"), &cfg),
            Err(Error::DimensionCap { dim: 64, cap: 32 })
        ));
        let cfg = EpConfig {
            ancilla_mode: AncillaMode::Explicit { d_aprime: 1, d_bprime: 2 },
            ..EpConfig::default()
        };
        assert!(matches!(
            ep_optimize(&w, &cut("A:B"), &cfg),
            Err(Error::AncillaTooSmall { required: 4, got: 2 })
        ));
    }
}
