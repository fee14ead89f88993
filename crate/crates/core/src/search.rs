//! Descent over a unitary acting on a block of factors of a pure state, with
//! the entropy of a fixed subset of factors as objective.

use serde::{Deserialize, Serialize};

use crate::info::entropy_of_spectrum;
use crate::purification::{params_to_hermitian, UnitaryParams};
use crate::tensor::{self, CMatrix, CVector, C64};

/// How the descent direction is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientKind {
    /// Closed-form Riemannian gradient of the entropy.
    #[default]
    Analytic,
    /// Central differences in the exponential chart around the current point.
    CentralDifference,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DescentOptions {
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub gradient: GradientKind,
    pub gradient_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Descent {
    pub value: f64,
    pub unitary: CMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after the start and after every accepted step.
    #[cfg_attr(not(test), allow(dead_code))]
    pub trace: Vec<f64>,
}

const LOG_FLOOR: f64 = 1e-15;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;
const GRADIENT_FLOOR: f64 = 1e-24;
const DEGENERATE_GAP: f64 = 1e-10;

/// A pure state whose leading factors are spectators and whose trailing
/// factors form the active block rotated by `U`.
#[derive(Debug, Clone)]
pub(crate) struct Landscape {
    d_active: usize,
    /// Active-block vectors, one column per spectator basis index.
    v: CMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

struct Point {
    value: f64,
    x: CMatrix,
    /// Eigensystem of the reduced state, when requested.
    eig: Option<tensor::Eigensystem>,
    mt: Option<CMatrix>,
}

impl Landscape {
    /// `dims` lists every factor; the last `n_active` factors are rotated and
    /// the objective is the entropy of the factors in `measured`.
    pub fn new(psi: &CVector, dims: &[usize], n_active: usize, measured: &[usize]) -> Self {
        let n = dims.len();
        let d_active: usize = dims[n - n_active..].iter().product();
        let d_spect = psi.len() / d_active;
        let v = CMatrix::from_column_slice(d_active, d_spect, psi.as_slice());
        let rest: Vec<usize> = (0..n).filter(|p| !measured.contains(p)).collect();
        let dm: usize = measured.iter().map(|&p| dims[p]).product();
        let dr: usize = rest.iter().map(|&p| dims[p]).product();
        // the smaller side gives the same entropy with a smaller eigenproblem
        let (row_parties, col_parties) = if dm <= dr {
            (measured.to_vec(), rest)
        } else {
            (rest, measured.to_vec())
        };
        let st = tensor::strides(dims);
        Self {
            d_active,
            v,
            rows: tensor::offsets(dims, &st, &row_parties),
            cols: tensor::offsets(dims, &st, &col_parties),
        }
    }

    fn reduced_factor(&self, x: &CMatrix) -> CMatrix {
        let flat = x.as_slice();
        CMatrix::from_fn(self.rows.len(), self.cols.len(), |i, j| {
            flat[self.rows[i] + self.cols[j]]
        })
    }

    fn evaluate(&self, x: CMatrix, full: bool) -> Point {
        let mt = self.reduced_factor(&x);
        let rho = &mt * mt.adjoint();
        if full {
            let eig = tensor::eigh(&rho);
            let value = entropy_of_spectrum(&eig.values);
            Point {
                value,
                x,
                eig: Some(eig),
                mt: Some(mt),
            }
        } else {
            let value = entropy_of_spectrum(&tensor::eigenvalues(&rho));
            Point {
                value,
                x,
                eig: None,
                mt: None,
            }
        }
    }

    pub fn objective(&self, u: &CMatrix) -> f64 {
        self.evaluate(u * &self.v, false).value
    }

    /// Riemannian gradient `M`: the derivative of the objective along
    /// `U → exp(iεG)U` is `Tr(G M)`.
    fn gradient(&self, p: &Point) -> CMatrix {
        let eig = p.eig.as_ref().unwrap();
        let mt = p.mt.as_ref().unwrap();
        let logs: Vec<f64> = eig.values.iter().map(|&l| l.max(LOG_FLOOR).log2()).collect();
        let mut scaled = eig.vectors.clone();
        for (j, l) in logs.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= C64::new(*l, 0.0);
            }
        }
        let log_rho = scaled * eig.vectors.adjoint();
        let wt = log_rho * mt;
        let mut w = CMatrix::zeros(p.x.nrows(), p.x.ncols());
        {
            let flat = w.as_mut_slice();
            for (i, &r) in self.rows.iter().enumerate() {
                for (j, &c) in self.cols.iter().enumerate() {
                    flat[r + c] = wt[(i, j)];
                }
            }
        }
        let xw = &p.x * w.adjoint();
        let minus_i = C64::new(0.0, -1.0);
        (&xw - xw.adjoint()) * minus_i
    }

    fn fd_gradient(&self, u: &CMatrix, step: f64) -> CMatrix {
        let d = self.d_active;
        let n = d * d;
        let mut g = vec![0.0; n];
        let mut theta = vec![0.0; n];
        for k in 0..n {
            theta[k] = step;
            let plus = self.chart_value(&theta, u);
            theta[k] = -step;
            let minus = self.chart_value(&theta, u);
            theta[k] = 0.0;
            g[k] = (plus - minus) / (2.0 * step);
        }
        params_to_hermitian(&UnitaryParams::new(g).unwrap(), d).unwrap()
    }

    fn chart_value(&self, theta: &[f64], u: &CMatrix) -> f64 {
        let h = params_to_hermitian(&UnitaryParams::new(theta.to_vec()).unwrap(), self.d_active)
            .unwrap();
        self.objective(&(tensor::expi_hermitian(&h) * u))
    }

    /// Armijo-backtracked descent from `u0`; accepted values never increase.
    pub fn descend(&self, u0: CMatrix, opts: &DescentOptions) -> Descent {
        let mut u = u0;
        let mut point = self.evaluate(&u * &self.v, true);
        let mut trace = vec![point.value];
        let mut step: Option<f64> = None;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < opts.max_iterations {
            iterations += 1;
            let g = match opts.gradient {
                GradientKind::Analytic => self.gradient(&point),
                GradientKind::CentralDifference => {
                    let h = if min_gap(&point) < DEGENERATE_GAP {
                        opts.gradient_step / 2.0
                    } else {
                        opts.gradient_step
                    };
                    self.fd_gradient(&u, h)
                }
            };
            let norm2 = g.norm_squared();
            if norm2 < GRADIENT_FLOOR {
                converged = true;
                break;
            }
            let dir = Direction::new(&g, &point.x, opts.gradient == GradientKind::Analytic);
            let mut t = step.unwrap_or_else(|| (1.0 / norm2.sqrt()).min(1.0));
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial = self.evaluate(dir.apply(&point.x, t), false);
                if trial.value <= point.value - ARMIJO * t * norm2 {
                    accepted = Some(t);
                    break;
                }
                t *= 0.5;
            }
            let Some(t) = accepted else {
                converged = true;
                break;
            };
            u = dir.apply(&u, t);
            let next = self.evaluate(&u * &self.v, true);
            let improvement = point.value - next.value;
            point = next;
            trace.push(point.value);
            step = Some(2.0 * t);
            if improvement < opts.objective_tolerance {
                converged = true;
                break;
            }
        }
        Descent {
            value: point.value,
            unitary: u,
            iterations,
            converged,
            trace,
        }
    }
}

fn min_gap(p: &Point) -> f64 {
    let vals: Vec<f64> = p.eig.as_ref().unwrap().values.iter().copied().filter(|&v| v > crate::tol::EIG_FLOOR).collect();
    vals.windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(f64::INFINITY, f64::min)
}

/// `exp(-i t M)` for a Hermitian `M`, stored either as a full eigensystem or
/// through an orthonormal basis of its range when that is much smaller.
enum Direction {
    Full(tensor::Eigensystem),
    LowRank { q: CMatrix, eig: tensor::Eigensystem },
}

impl Direction {
    fn new(m: &CMatrix, x: &CMatrix, low_rank: bool) -> Self {
        let d = m.nrows();
        let s = x.ncols();
        if low_rank && 2 * s < d {
            // range(M) ⊆ span[X, W] where M = -i(XW† - WX†); M X spans enough
            // of it for the basis below
            let mx = m * x;
            let mut stacked = CMatrix::zeros(d, 2 * s);
            stacked.columns_mut(0, s).copy_from(x);
            stacked.columns_mut(s, s).copy_from(&mx);
            let q = orthonormal_basis(&stacked);
            let b = q.adjoint() * m * &q;
            Direction::LowRank {
                eig: tensor::eigh(&b),
                q,
            }
        } else {
            Direction::Full(tensor::eigh(m))
        }
    }

    /// `exp(-i t M) Y`.
    fn apply(&self, y: &CMatrix, t: f64) -> CMatrix {
        match self {
            Direction::Full(eig) => tensor::expi_from_eigs(eig, -t) * y,
            Direction::LowRank { q, eig } => {
                let k = q.ncols();
                let e = tensor::expi_from_eigs(eig, -t) - CMatrix::identity(k, k);
                y + q * (e * (q.adjoint() * y))
            }
        }
    }
}

/// Orthonormal basis of the column span, dropping numerically dependent
/// columns.
fn orthonormal_basis(a: &CMatrix) -> CMatrix {
    let mut basis: Vec<CVector> = Vec::with_capacity(a.ncols());
    let scale = a.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    for col in a.column_iter() {
        let mut v = col.into_owned();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > 1e-10 * scale.max(1e-300) {
            basis.push(v / C64::new(n, 0.0));
        }
    }
    if basis.is_empty() {
        return CMatrix::zeros(a.nrows(), 0);
    }
    CMatrix::from_columns(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use crate::tensor::{haar_unitary_matrix, rng_from_seed};

    fn opts(kind: GradientKind) -> DescentOptions {
        DescentOptions {
            max_iterations: 500,
            objective_tolerance: 1e-12,
            gradient: kind,
            gradient_step: 1e-5,
        }
    }

    fn random_landscape(seed: u64) -> Landscape {
        // two spectator qubits, active block of dimension 4, objective S(0, 2)
        let psi = tensor::random_pure_state(&crate::Dims::new(vec![2, 2, 2, 2]).unwrap(), seed);
        Landscape::new(psi.amplitudes(), &[2, 2, 2, 2], 2, &[0, 2])
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let land = random_landscape(5);
        let mut rng = rng_from_seed(9);
        let u = haar_unitary_matrix(4, &mut rng);
        let point = land.evaluate(&u * &land.v, true);
        let m = land.gradient(&point);
        let g = haar_unitary_matrix(4, &mut rng);
        let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        let eps = 1e-6;
        let f = |s: f64| land.objective(&(tensor::expi_from_eigs(&tensor::eigh(&h), s) * &u));
        let fd = (f(eps) - f(-eps)) / (2.0 * eps);
        let analytic = (&h * &m).trace().re;
        assert!((fd - analytic).abs() < 1e-6, "fd {fd} vs analytic {analytic}");
    }

    #[test]
    fn low_rank_exponential_matches_full() {
        let psi = tensor::random_pure_state(&crate::Dims::new(vec![2, 8]).unwrap(), 3);
        let land = Landscape::new(psi.amplitudes(), &[2, 8], 1, &[1]);
        let mut rng = rng_from_seed(1);
        let u = haar_unitary_matrix(8, &mut rng);
        let point = land.evaluate(&u * &land.v, true);
        let m = land.gradient(&point);
        let low = Direction::new(&m, &point.x, true);
        assert!(matches!(low, Direction::LowRank { .. }));
        let full = Direction::Full(tensor::eigh(&m));
        let a = low.apply(&u, 0.3);
        let b = full.apply(&u, 0.3);
        assert!(tensor::max_abs_diff(&a, &b) < 1e-10);
        assert!(tensor::unitarity_error(&a) < 1e-10);
    }

    #[test]
    fn descent_is_monotone_and_both_routes_agree() {
        for seed in 0..3 {
            let land = random_landscape(seed);
            let start = haar_unitary_matrix(4, &mut rng_from_seed(100 + seed));
            let a = land.descend(start.clone(), &opts(GradientKind::Analytic));
            let f = land.descend(start, &opts(GradientKind::CentralDifference));
            for d in [&a, &f] {
                assert!(d.trace.windows(2).all(|w| w[1] <= w[0]));
                assert!(tensor::unitarity_error(&d.unitary) < 1e-9);
                assert!((land.objective(&d.unitary) - d.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_pair_split_reaches_zero() {
        // |Φ⁺⟩_{XA} ⊗ |Φ⁺⟩_{YB} rotated by a swap on (A, B) measured on (X, A)
        let bell = states::bell();
        let psi = bell.tensor(&bell).permute(&[0, 2, 1, 3]).unwrap();
        let land = Landscape::new(psi.amplitudes(), &[2, 2, 2, 2], 2, &[0, 2]);
        let id = CMatrix::identity(4, 4);
        assert!(land.objective(&id).abs() < 1e-12);
        let swap = tensor::permutation_matrix(&[0, 2, 1, 3]);
        assert!((land.objective(&swap) - 2.0).abs() < 1e-12);
        let d = land.descend(swap, &opts(GradientKind::Analytic));
        assert!(d.value <= 2.0);
    }
}
