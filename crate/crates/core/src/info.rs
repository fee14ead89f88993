//! Entropic functionals in bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{self, CMatrix, DensityMatrix, C64};
use crate::tol;

/// Disjoint groups of subsystem indices, e.g. the cut `A:BC` is
/// `[[0], [1, 2]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Partition {
    groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::contract("a partition needs at least two groups"));
        }
        if groups.iter().any(Vec::is_empty) {
            return Err(Error::contract("partition groups must be non-empty"));
        }
        let all: Vec<usize> = groups.iter().flatten().copied().collect();
        for (i, p) in all.iter().enumerate() {
            if all[..i].contains(p) {
                return Err(Error::contract(format!(
                    "subsystem {p} appears in more than one group"
                )));
            }
        }
        Ok(Self { groups })
    }

    pub fn bipartite(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        Self::new(vec![left, right])
    }

    /// Parse letter notation: `A:BC` → `[[0],[1,2]]`.
    pub fn parse(s: &str) -> Result<Self> {
        let groups = s
            .split(':')
            .map(|g| {
                g.trim()
                    .chars()
                    .map(|c| {
                        if c.is_ascii_uppercase() {
                            Ok((c as u8 - b'A') as usize)
                        } else {
                            Err(Error::contract(format!(
                                "cut `{s}`: parties are named by capital letters"
                            )))
                        }
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups)
    }

    /// First party versus all the others.
    pub fn first_vs_rest(n_parties: usize) -> Result<Self> {
        Self::bipartite(vec![0], (1..n_parties).collect())
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, i: usize) -> &[usize] {
        &self.groups[i]
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn validate_for(&self, rho: &DensityMatrix) -> Result<()> {
        let all: Vec<usize> = self.groups.iter().flatten().copied().collect();
        tensor::validate_parties(rho.n_parties(), &all)
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<()> {
        if self.groups.len() != n {
            return Err(Error::contract(format!(
                "expected a {n}-group partition, got `{self}`"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| g.iter().map(|&p| (b'A' + p as u8) as char).collect())
            .collect();
        write!(f, "{}", parts.join(":"))
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Partition::parse(&s)
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> Self {
        p.to_string()
    }
}

/// Shannon entropy in bits of a spectrum; entries at or below the floor are
/// dropped.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&v| v > tol::EIG_FLOOR)
        .map(|&v| -v * v.log2())
        .sum()
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p])
}

/// Von Neumann entropy `S(ρ) = -Tr ρ log₂ ρ`.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

/// Entropy of the reduced state on `parties`; zero for the empty set.
pub fn subsystem_entropy(rho: &DensityMatrix, parties: &[usize]) -> Result<f64> {
    if parties.is_empty() {
        return Ok(0.0);
    }
    if parties.len() == rho.n_parties() {
        tensor::validate_parties(rho.n_parties(), parties)?;
        return Ok(entropy(rho));
    }
    Ok(entropy(&rho.partial_trace(parties)?))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

/// `I(X:Y) = S(X) + S(Y) - S(XY)` between two groups.
pub fn mutual_information_between(rho: &DensityMatrix, x: &[usize], y: &[usize]) -> Result<f64> {
    Partition::bipartite(x.to_vec(), y.to_vec())?.validate_for(rho)?;
    Ok(subsystem_entropy(rho, x)? + subsystem_entropy(rho, y)?
        - subsystem_entropy(rho, &union(x, y))?)
}

pub fn mutual_information(rho: &DensityMatrix, cut: &Partition) -> Result<f64> {
    cut.expect_len(2)?;
    mutual_information_between(rho, cut.group(0), cut.group(1))
}

/// `S(target | given) = S(target ∪ given) - S(given)`.
pub fn conditional_entropy(rho: &DensityMatrix, target: &[usize], given: &[usize]) -> Result<f64> {
    Partition::bipartite(target.to_vec(), given.to_vec())?.validate_for(rho)?;
    Ok(subsystem_entropy(rho, &union(target, given))? - subsystem_entropy(rho, given)?)
}

/// `S(AB)+S(BC)+S(AC)-S(A)-S(B)-S(C)-S(ABC)` over three groups.
pub fn interaction_information(rho: &DensityMatrix, parts: &Partition) -> Result<f64> {
    parts.expect_len(3)?;
    parts.validate_for(rho)?;
    let (a, b, c) = (parts.group(0), parts.group(1), parts.group(2));
    let s = |g: &[usize]| subsystem_entropy(rho, g);
    Ok(s(&union(a, b))? + s(&union(b, c))? + s(&union(a, c))?
        - s(a)?
        - s(b)?
        - s(c)?
        - s(&union(&union(a, b), c))?)
}

/// Coherent information `I'(A⟩B) = S(B) - S(AB)`.
pub fn coherent_information(rho: &DensityMatrix, sender: &[usize], receiver: &[usize]) -> Result<f64> {
    Partition::bipartite(sender.to_vec(), receiver.to_vec())?.validate_for(rho)?;
    Ok(subsystem_entropy(rho, receiver)? - subsystem_entropy(rho, &union(sender, receiver))?)
}

/// Residual of strong sub-additivity `S(AB)+S(BC)-S(B)-S(ABC)` with `B` the
/// middle group; zero exactly on the equality class.
pub fn ssa_residual(rho: &DensityMatrix, parts: &Partition) -> Result<f64> {
    parts.expect_len(3)?;
    parts.validate_for(rho)?;
    let (a, b, c) = (parts.group(0), parts.group(1), parts.group(2));
    let s = |g: &[usize]| subsystem_entropy(rho, g);
    Ok(s(&union(a, b))? + s(&union(b, c))? - s(b)? - s(&union(&union(a, b), c))?)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().factors() != [2, 2] {
        return Err(Error::contract(format!(
            "two-qubit state required, got dims {:?}",
            rho.dims().factors()
        )));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots of the eigenvalues of `ρ ρ̃` with
/// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)` are obtained from the Hermitian matrix
/// `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    let sy = CMatrix::from_row_slice(2, 2, &[z, -i, i, z]);
    let yy = sy.kronecker(&sy);
    let m = rho.entries();
    let tilde = &yy * m.conjugate() * &yy;
    let eig = tensor::eigh(m);
    let sqrt_vals: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let mut s = eig.vectors.clone();
    for (j, v) in sqrt_vals.iter().enumerate() {
        for r in 0..4 {
            s[(r, j)] *= C64::new(*v, 0.0);
        }
    }
    let sqrt_rho = s * eig.vectors.adjoint();
    let h = &sqrt_rho * tilde * &sqrt_rho;
    let lam: Vec<f64> = tensor::eigenvalues(&h)
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Entanglement of formation of a two-qubit state, in ebits.
pub fn eof_2qubit(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?.min(1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Correlation of classical and quantum origin, `E_p - E_f`.
pub fn e_cq(ep_value: f64, ef_value: f64) -> f64 {
    ep_value - ef_value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use crate::tensor::{random_density_matrix, random_pure_state, Dims};

    const H13: f64 = 0.918_295_834_054_489_6;

    #[test]
    fn entropy_basics() {
        let pure = random_pure_state(&Dims::qubits(2), 3).density();
        assert!(entropy(&pure).abs() < 1e-10);
        assert!((entropy(&DensityMatrix::maximally_mixed(Dims::qubits(1))) - 1.0).abs() < 1e-14);
        let d = DensityMatrix::diagonal(Dims::qubits(1), &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((entropy(&d) - 0.918296).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_examples() {
        let bell = states::bell().density();
        let cut = Partition::parse("A:B").unwrap();
        assert!((mutual_information(&bell, &cut).unwrap() - 2.0).abs() < 1e-12);
        let prod = random_density_matrix(&Dims::qubits(1), 2, 1)
            .unwrap()
            .tensor(&random_density_matrix(&Dims::qubits(1), 2, 2).unwrap());
        assert!(mutual_information(&prod, &cut).unwrap().abs() < 1e-10);
        let ghz = states::ghz_generalized(3, 0.5, 1).unwrap().density();
        let abc = Partition::parse("A:BC").unwrap();
        assert!((mutual_information(&ghz, &abc).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let bell = states::bell().density();
        assert!((conditional_entropy(&bell, &[0], &[1]).unwrap() + 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2));
        assert!((conditional_entropy(&mixed, &[0], &[1]).unwrap() - 1.0).abs() < 1e-12);
        let w = states::w_state(3).unwrap().density();
        assert!((conditional_entropy(&w, &[0], &[1, 2]).unwrap() + 0.918296).abs() < 1e-6);
    }

    #[test]
    fn interaction_information_examples() {
        let abc = Partition::parse("A:B:C").unwrap();
        let ghz = states::ghz_generalized(3, 0.5, 1).unwrap().density();
        assert!(interaction_information(&ghz, &abc).unwrap().abs() < 1e-10);
        let psi = random_pure_state(&Dims::qubits(3), 17).density();
        let ii = interaction_information(&psi, &abc).unwrap();
        let lhs = mutual_information_between(&psi, &[0], &[1]).unwrap()
            + mutual_information_between(&psi, &[0], &[2]).unwrap()
            - mutual_information_between(&psi, &[0], &[1, 2]).unwrap();
        assert!((lhs + ii).abs() < 1e-10);
        let q = |s| random_density_matrix(&Dims::qubits(1), 2, s).unwrap();
        let prod = q(1).tensor(&q(2)).tensor(&q(3));
        assert!(interaction_information(&prod, &abc).unwrap().abs() < 1e-10);
    }

    #[test]
    fn coherent_information_examples() {
        let bell = states::bell().density();
        assert!((coherent_information(&bell, &[0], &[1]).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2));
        assert!((coherent_information(&mixed, &[0], &[1]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eof_examples() {
        assert!((eof_2qubit(&states::bell().density()).unwrap() - 1.0).abs() < 1e-9);
        let sep = states::werner_2qubit(1.0 / 3.0).unwrap();
        assert!(eof_2qubit(&sep).unwrap().abs() < 1e-9);
        let w8 = states::werner_2qubit(0.8).unwrap();
        assert!((concurrence(&w8).unwrap() - 0.7).abs() < 1e-12);
        // h((1 + sqrt(0.51)) / 2), evaluated independently
        assert!((eof_2qubit(&w8).unwrap() - 0.591_857_407_170_677_3).abs() < 1e-9);
        let three = DensityMatrix::maximally_mixed(Dims::qubits(3));
        assert!(matches!(eof_2qubit(&three), Err(Error::Contract(_))));
    }

    #[test]
    fn concurrence_of_w_pair() {
        let w = states::w_state(3).unwrap().reduce(&[0, 1]).unwrap();
        assert!((concurrence(&w).unwrap() - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn e_cq_arithmetic() {
        assert_eq!(e_cq(0.7, 0.7), 0.0);
        assert!((e_cq(1.0, 0.4) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn partition_parse_and_display() {
        let p = Partition::parse("A:BC").unwrap();
        assert_eq!(p.groups(), &[vec![0], vec![1, 2]]);
        assert_eq!(p.to_string(), "A:BC");
        assert!(Partition::parse("A:A").is_err());
        assert!(Partition::parse("a:b").is_err());
        assert!(Partition::parse("AB").is_err());
    }

    #[test]
    fn w_single_party_entropy() {
        let w = states::w_state(3).unwrap().density();
        assert!((subsystem_entropy(&w, &[0]).unwrap() - H13).abs() < 1e-12);
    }
}
