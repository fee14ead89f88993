//! Quantum advantage of dense coding, `Δ(A⟩B) = S(B) - inf_Λ S((Λ⊗I)ρ)`,
//! estimated by descent over Stinespring isometries on the sender.

use serde::{Deserialize, Serialize};

use crate::audit::{AuditRecord, Certification, Relation};
use crate::ep::{self, EpConfig, GradientKind, RestartRecord};
use crate::error::{Error, Result};
use crate::info::{self, Partition};
use crate::purification::{joint_ancilla_unitary, params_to_unitary, UnitaryParams};
use crate::search::{DescentOptions, Landscape};
use crate::states::{Family, StateDescriptor};
use crate::tensor::{self, CMatrix, CVector, DensityMatrix, Dims, Operator, C64};
use crate::tol;

/// Chart coordinates of a unitary on `E ⊗ A` (environment most
/// significant); the channel's isometry is its first `d_A` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub params: UnitaryParams,
    pub d_env: usize,
}

impl ChannelParams {
    pub fn identity(d_a: usize, d_env: usize) -> Self {
        Self {
            params: UnitaryParams::zeros(d_a * d_env),
            d_env,
        }
    }

    /// `V: H_A → H_E ⊗ H_A` as a `(d_E·d_A) × d_A` matrix.
    pub fn isometry(&self, d_a: usize) -> Result<CMatrix> {
        if self.d_env == 0 {
            return Err(Error::contract("d_env must be at least 1"));
        }
        let u = params_to_unitary(&self.params, self.d_env * d_a)?;
        Ok(u.entries().columns(0, d_a).into_owned())
    }
}

/// `Tr_E[(V ⊗ I) ρ (V ⊗ I)†]` with `V` acting on the parties in `side`.
pub fn apply_isometry(rho: &DensityMatrix, side: &[usize], v: &CMatrix) -> Result<DensityMatrix> {
    let n = rho.n_parties();
    tensor::validate_parties(n, side)?;
    if side.is_empty() {
        return Err(Error::contract("channel side must name at least one party"));
    }
    let f = rho.dims().factors();
    let d_a: usize = side.iter().map(|&p| f[p]).product();
    if v.ncols() != d_a || v.nrows() % d_a != 0 {
        return Err(Error::contract(format!(
            "isometry is {}×{} but the side has dimension {d_a}",
            v.nrows(),
            v.ncols()
        )));
    }
    let d_env = v.nrows() / d_a;
    let rest: Vec<usize> = (0..n).filter(|p| !side.contains(p)).collect();
    let order: Vec<usize> = side.iter().chain(&rest).copied().collect();
    let permuted = rho.permute(&order)?;
    let d_rest = rho.dim() / d_a;
    let m = permuted.entries();
    let id = CMatrix::identity(d_rest, d_rest);
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for e in 0..d_env {
        let k = v.rows(e * d_a, d_a).kronecker(&id);
        out += &k * m * k.adjoint();
    }
    let mut inverse = vec![0; n];
    for (i, &p) in order.iter().enumerate() {
        inverse[p] = i;
    }
    let op = Operator::new(out, permuted.dims().clone())?;
    DensityMatrix::from_operator_unchecked(op).permute(&inverse)
}

/// [`apply_isometry`] for the channel given by chart coordinates.
pub fn apply_channel(rho: &DensityMatrix, side: &[usize], p: &ChannelParams) -> Result<DensityMatrix> {
    let d_a = rho.dims().dim_of(side);
    apply_isometry(rho, side, &p.isometry(d_a)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DcConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub gradient_step: f64,
    pub seed: u64,
    /// Environment dimension; `d_A²` when unset.
    pub d_env: Option<usize>,
    pub gradient: GradientKind,
    pub max_dim: usize,
}

impl Default for DcConfig {
    fn default() -> Self {
        Self::from_ep(&EpConfig::default())
    }
}

impl DcConfig {
    pub fn from_ep(cfg: &EpConfig) -> Self {
        Self {
            restarts: cfg.restarts,
            max_iterations: cfg.max_iterations,
            objective_tolerance: cfg.objective_tolerance,
            gradient_step: cfg.gradient_step,
            seed: cfg.seed,
            d_env: None,
            gradient: cfg.gradient,
            max_dim: cfg.max_dim,
        }
    }

    fn search(&self) -> EpConfig {
        EpConfig {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            objective_tolerance: self.objective_tolerance,
            gradient_step: self.gradient_step,
            seed: self.seed,
            gradient: self.gradient,
            max_dim: self.max_dim,
            ..EpConfig::default()
        }
    }

    fn descent_options(&self) -> DescentOptions {
        self.search().descent_options()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcResult {
    pub cut: Partition,
    /// `S(B)` minus the smallest output entropy found: a lower estimate of
    /// `Δ(A⟩B)`.
    pub estimate: f64,
    /// Coherent information `I'(A⟩B)`, the value of the identity channel.
    pub identity_baseline: f64,
    /// `S(B)`.
    pub upper: f64,
    pub min_output_entropy: f64,
    pub per_restart_values: Vec<f64>,
    pub restarts: Vec<RestartRecord>,
    pub config_echo: DcConfig,
    pub converged: bool,
    pub d_env: usize,
    #[serde(skip)]
    pub best_unitary: Option<CMatrix>,
}

/// Pure state on `P ⊗ R ⊗ E ⊗ A` purifying `ρ_AR` through `P`, with the
/// environment in `|0⟩`.
struct DcFrame {
    base: DensityMatrix,
    psi: CVector,
    dims: [usize; 4],
}

impl DcFrame {
    /// `bip` has factors `[sender, receiver]`.
    fn new(bip: &DensityMatrix, d_env: usize) -> Result<Self> {
        let f = bip.dims().factors();
        let (d_a, d_r) = (f[0], f[1]);
        let eig = bip.op().eigs()?;
        let kept: Vec<usize> = (0..eig.values.len())
            .filter(|&i| eig.values[i] > tol::EIG_FLOOR)
            .collect();
        let r = kept.len();
        let mut psi = CVector::zeros(r * d_r * d_env * d_a);
        for (p, &k) in kept.iter().enumerate() {
            let amp = C64::new(eig.values[k].sqrt(), 0.0);
            for rr in 0..d_r {
                for a in 0..d_a {
                    // environment index 0
                    psi[((p * d_r + rr) * d_env) * d_a + a] = amp * eig.vectors[(a * d_r + rr, k)];
                }
            }
        }
        let norm = psi.norm();
        psi /= C64::new(norm, 0.0);
        Ok(Self {
            base: bip.clone(),
            psi,
            dims: [r, d_r, d_env, d_a],
        })
    }

    fn landscape(&self) -> Landscape {
        Landscape::new(&self.psi, &self.dims, 2, &[1, 3])
    }

    fn tensor(&self, other: &DcFrame) -> Result<DcFrame> {
        let d1 = Dims::new(self.dims.to_vec())?;
        let d2 = Dims::new(other.dims.to_vec())?;
        let joint = tensor::PureState::from_parts_unchecked(self.psi.kronecker(&other.psi), d1.concat(&d2))
            .permute(&[0, 4, 1, 5, 2, 6, 3, 7])?;
        let (a, b) = (self.dims, other.dims);
        let base = self
            .base
            .tensor(&other.base)
            .regroup(&[vec![0, 2], vec![1, 3]])?;
        Ok(DcFrame {
            base,
            psi: joint.amplitudes().clone(),
            dims: [a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]],
        })
    }

    fn d_a(&self) -> usize {
        self.dims[3]
    }

    fn d_env(&self) -> usize {
        self.dims[2]
    }

    fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Identity channel, replacement by `|0⟩`, complete depolarization, then
    /// Haar-random unitaries on `E ⊗ A`.
    fn starts(&self, cfg: &DcConfig) -> Vec<(String, CMatrix)> {
        let (d_a, d_e) = (self.d_a(), self.d_env());
        let d = d_a * d_e;
        let mut starts = vec![("identity".to_string(), CMatrix::identity(d, d))];
        if d_e >= d_a && d_a > 1 {
            // V|a⟩ = |a⟩_E |0⟩_A
            let mut v = CMatrix::zeros(d, d_a);
            for a in 0..d_a {
                v[(a * d_a, a)] = C64::new(1.0, 0.0);
            }
            starts.push(("replacement".into(), tensor::complete_to_unitary(&v)));
        }
        if d_e >= d_a * d_a && d_a > 1 {
            // V|a⟩ = Σ_i |i·d_A + a⟩_E |i⟩_A / √d_A
            let s = C64::new(1.0 / (d_a as f64).sqrt(), 0.0);
            let mut v = CMatrix::zeros(d, d_a);
            for a in 0..d_a {
                for i in 0..d_a {
                    v[((i * d_a + a) * d_a + i, a)] = s;
                }
            }
            starts.push(("depolarizing".into(), tensor::complete_to_unitary(&v)));
        }
        for i in 0..cfg.restarts {
            let mut rng = tensor::rng_from_seed(tensor::derive_seed(cfg.seed, i as u64));
            starts.push((format!("haar-{i}"), tensor::haar_unitary_matrix(d, &mut rng)));
        }
        starts
    }
}

fn validate(cfg: &DcConfig) -> Result<()> {
    cfg.search().validate()?;
    if cfg.d_env == Some(0) {
        return Err(Error::contract("d_env must be at least 1"));
    }
    Ok(())
}

fn build_frame(rho: &DensityMatrix, cut: &Partition, cfg: &DcConfig) -> Result<DcFrame> {
    validate(cfg)?;
    cut.expect_len(2)?;
    cut.validate_for(rho)?;
    let bip = rho.regroup(cut.groups())?;
    let d_a = bip.dims().factors()[0];
    let d_env = cfg.d_env.unwrap_or(d_a * d_a);
    let dim = bip.rank() * bip.dims().factors()[1] * d_env * d_a;
    if dim > cfg.max_dim {
        return Err(Error::DimensionCap {
            dim,
            cap: cfg.max_dim,
        });
    }
    DcFrame::new(&bip, d_env)
}

fn finish(frame: &DcFrame, cut: &Partition, cfg: &DcConfig, run: ep::FrameRun) -> Result<DcResult> {
    let s_b = info::subsystem_entropy(&frame.base, &[1])?;
    let s_ab = info::entropy(&frame.base);
    let min = run.value();
    Ok(DcResult {
        cut: cut.clone(),
        estimate: s_b - min,
        identity_baseline: s_b - s_ab,
        upper: s_b,
        min_output_entropy: min,
        per_restart_values: run.records.iter().map(|r| s_b - r.value).collect(),
        converged: run.records[run.best].converged,
        restarts: run.records,
        config_echo: cfg.clone(),
        d_env: frame.d_env(),
        best_unitary: Some(run.best_unitary),
    })
}

fn advantage_with_frame(rho: &DensityMatrix, cut: &Partition, cfg: &DcConfig) -> Result<(DcResult, DcFrame)> {
    let frame = build_frame(rho, cut, cfg)?;
    let run = ep::run_starts(&frame.landscape(), frame.starts(cfg), &cfg.descent_options());
    Ok((finish(&frame, cut, cfg, run)?, frame))
}

/// Lower estimate of `Δ(X⟩Y)` for the cut `X:Y` (sender first).
pub fn dc_advantage(rho: &DensityMatrix, cut: &Partition, cfg: &DcConfig) -> Result<DcResult> {
    Ok(advantage_with_frame(rho, cut, cfg)?.0)
}

/// `S(B) ≥ Δ(A⟩B) + E_p(B:C)` on a tripartite state; for pure inputs the
/// equality residual is recorded as `equality_residual`.
pub fn dc_monogamy_audit(
    rho: &DensityMatrix,
    ep_cfg: &EpConfig,
    dc_cfg: &DcConfig,
    tolerance: f64,
) -> Result<AuditRecord> {
    if rho.n_parties() != 3 {
        return Err(Error::contract(format!(
            "tripartite state required, got {} parties",
            rho.n_parties()
        )));
    }
    let s_b = info::subsystem_entropy(rho, &[1])?;
    let dc = dc_advantage(rho, &Partition::bipartite(vec![0], vec![1])?, dc_cfg)?;
    let ep = ep::ep_optimize(rho, &Partition::bipartite(vec![1], vec![2])?, ep_cfg)?;
    let rhs = dc.estimate + ep.estimate;
    let mut record = AuditRecord::new(
        "dc-monogamy",
        StateDescriptor::opaque(Family::Custom, rho),
        s_b,
        rhs,
        Relation::GreaterEq,
        tolerance,
        Certification::OptimizerAssisted,
    )
    .with_seed(dc_cfg.seed)
    .extra("dc_estimate", dc.estimate)
    .extra("ep_estimate", ep.estimate)
    .extra("ep_lower_bound", ep.bracket.lower);
    if info::entropy(rho) < tol::CERTIFICATE {
        record = record.extra("equality_residual", (s_b - rhs).abs());
    }
    Ok(record)
}

/// `Δ(AC⟩BD) ≥ Δ(A⟩B) + Δ(C⟩D)` with the joint search started from the
/// tensor product of the two separate optima.
pub fn dc_superadditivity_audit(
    rho: &DensityMatrix,
    rho_cut: &Partition,
    sigma: &DensityMatrix,
    sigma_cut: &Partition,
    cfg: &DcConfig,
    tolerance: f64,
) -> Result<AuditRecord> {
    let (r1, f1) = advantage_with_frame(rho, rho_cut, cfg)?;
    let (r2, f2) = advantage_with_frame(sigma, sigma_cut, cfg)?;
    let joint_dim = f1.total() * f2.total();
    if joint_dim > cfg.max_dim {
        return Err(Error::DimensionCap {
            dim: joint_dim,
            cap: cfg.max_dim,
        });
    }
    let joint = f1.tensor(&f2)?;
    let warm = joint_ancilla_unitary(
        r1.best_unitary.as_ref().unwrap(),
        (f1.d_env(), f1.d_a()),
        r2.best_unitary.as_ref().unwrap(),
        (f2.d_env(), f2.d_a()),
    );
    let land = joint.landscape();
    let warm_value = land.objective(&warm);
    let run = ep::run_starts(&land, vec![("warm-start".into(), warm)], &cfg.descent_options());
    let joint_cut = Partition::bipartite(vec![0], vec![1])?;
    let jr = finish(&joint, &joint_cut, cfg, run)?;
    let rhs = r1.estimate + r2.estimate;
    Ok(AuditRecord::new(
        "dc-superadditivity",
        StateDescriptor::opaque(Family::TensorProduct, &joint.base),
        jr.estimate,
        rhs,
        Relation::GreaterEq,
        tolerance,
        Certification::OptimizerAssisted,
    )
    .with_seed(cfg.seed)
    .extra("dc_first", r1.estimate)
    .extra("dc_second", r2.estimate)
    .extra("warm_start_value", jr.upper - warm_value)
    .extra("joint_upper", jr.upper)
    .extra("joint_iterations", jr.restarts[0].iterations as f64))
}
