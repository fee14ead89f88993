use proptest::prelude::*;
use purecorr::dense_coding::{self, DcConfig};
use purecorr::ep::{self, CertificateKind, EpConfig, GradientKind};
use purecorr::info::{self, Partition};
use purecorr::states;
use purecorr::tensor::{random_density_matrix, random_pure_state};
use purecorr::{lab, Dims};

fn ab() -> Partition {
    Partition::parse("A:B").unwrap()
}

fn quick(seed: u64, restarts: usize) -> EpConfig {
    EpConfig {
        restarts,
        seed,
        ..EpConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bracket_sandwiches_estimate(seed in any::<u64>(), rank in 2usize..=4) {
        let rho = random_density_matrix(&Dims::new(vec![2, 2]).unwrap(), rank, seed).unwrap();
        let r = ep::ep_optimize(&rho, &ab(), &quick(seed, 3)).unwrap();
        let half_mi = 0.5 * info::mutual_information(&rho, &ab()).unwrap();
        let upper = ep::ep_upper_bound_trivial(&rho, &ab()).unwrap();
        prop_assert!(r.bracket.lower >= half_mi - 1e-12);
        prop_assert!(r.estimate >= r.bracket.lower - 1e-9);
        prop_assert!(r.estimate <= upper + 1e-9);
        prop_assert!(r.bracket.upper <= upper + 1e-12);
        prop_assert!((r.bracket.gap - (r.bracket.upper - r.bracket.lower)).abs() < 1e-12);
    }

    #[test]
    fn pure_states_reach_entanglement_entropy(seed in any::<u64>()) {
        let psi = random_pure_state(&Dims::new(vec![2, 4]).unwrap(), seed).density();
        let r = ep::ep_optimize(&psi, &ab(), &quick(seed, 2)).unwrap();
        let s_a = info::subsystem_entropy(&psi, &[0]).unwrap();
        prop_assert!((r.estimate - s_a).abs() < 1e-6);
        prop_assert_eq!(r.exactness_certificate.map(|c| c.kind), Some(CertificateKind::BoundCoincidence));
    }
}

#[test]
fn runs_are_deterministic() {
    let rho = states::werner_2qubit(0.8).unwrap();
    let a = ep::ep_optimize(&rho, &ab(), &quick(7, 4)).unwrap();
    let b = ep::ep_optimize(&rho, &ab(), &quick(7, 4)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let dc = DcConfig { restarts: 2, seed: 3, ..DcConfig::default() };
    let x = dense_coding::dc_advantage(&rho, &ab(), &dc).unwrap();
    let y = dense_coding::dc_advantage(&rho, &ab(), &dc).unwrap();
    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
}

#[test]
fn more_restarts_never_worsen_estimate() {
    let rho = random_density_matrix(&Dims::new(vec![2, 3]).unwrap(), 3, 21).unwrap();
    let few = ep::ep_optimize(&rho, &ab(), &quick(5, 2)).unwrap();
    let many = ep::ep_optimize(&rho, &ab(), &quick(5, 6)).unwrap();
    assert_eq!(&many.per_restart_values[..few.per_restart_values.len()], &few.per_restart_values[..]);
    assert!(many.estimate <= few.estimate);
}

#[test]
fn finite_difference_agrees_with_analytic_gradient() {
    let haar_best = |r: &ep::EpResult| {
        r.restarts
            .iter()
            .filter(|x| x.start.starts_with("haar"))
            .map(|x| x.value)
            .fold(f64::INFINITY, f64::min)
    };
    for seed in [13, 14, 15] {
        let rho = random_density_matrix(&Dims::new(vec![2, 3]).unwrap(), 2, seed).unwrap();
        let analytic = ep::ep_optimize(&rho, &ab(), &quick(seed, 3)).unwrap();
        let fd_cfg = EpConfig {
            gradient: GradientKind::CentralDifference,
            ..quick(seed, 3)
        };
        let fd = ep::ep_optimize(&rho, &ab(), &fd_cfg).unwrap();
        let (a, f) = (haar_best(&analytic), haar_best(&fd));
        assert!((a - f).abs() < 1e-5, "{a} vs {f}");
    }
}

#[test]
fn bell_and_product_dense_coding() {
    let dc = DcConfig { restarts: 2, ..DcConfig::default() };
    let bell = states::bell().density();
    let r = dense_coding::dc_advantage(&bell, &ab(), &dc).unwrap();
    assert!((r.estimate - 1.0).abs() < 1e-6);
    let prod = states::product_2qubit(0.3, 0.6).unwrap();
    let r = dense_coding::dc_advantage(&prod, &ab(), &dc).unwrap();
    assert!(r.estimate.abs() < 1e-6);
}

#[test]
fn dense_coding_vanishes_on_ssa_equality_states() {
    let rho = states::ssa_example(0.4, 2, 3).unwrap();
    let dc = DcConfig { restarts: 3, seed: 2, ..DcConfig::default() };
    let r = lab::dc_vanishing_audit(&rho, 0, &dc).unwrap();
    assert!(r.extras["premise_residual"].abs() < 1e-9);
    assert!(r.verdict.holds(), "{:?}", r);
    assert!(r.lhs >= -1e-9);
    let mixed = random_density_matrix(&Dims::qubits(3), 2, 8).unwrap();
    let r = lab::dc_vanishing_audit(&mixed, 0, &dc).unwrap();
    assert_eq!(r.verdict, purecorr::audit::Verdict::Inconclusive);
}

#[test]
fn bell_pair_subadditivity_is_tight() {
    let bell = states::bell().density();
    let r = ep::ep_subadditivity_certified(&bell, &ab(), &bell, &ab(), &quick(0, 1)).unwrap();
    assert!(r.verdict.holds());
    assert!((r.lhs - 2.0).abs() < 1e-6 && (r.rhs - 2.0).abs() < 1e-6);
}
