//! LMG model instances and their Hamiltonians in the np-nh (quasi-spin) basis.
//!
//! Basis states are labelled by the excitation order `n = 0..=N`, with
//! `J = N/2` and `M = n - J`. The full Hamiltonian is
//! `H = ε Jz - V/2 (J+² + J-²)`; the effective Hamiltonian is its image under a
//! quasi-spin rotation by β about the y axis, truncated to the first Λ states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: usize,
    epsilon: f64,
    coupling: f64,
}

impl ModelParams {
    pub fn new(n: usize, epsilon: f64, coupling: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidParams(format!("V must be finite, got {coupling}")));
        }
        Ok(Self { n, epsilon, coupling })
    }

    /// Builds from the dimensionless ratio v̄ = (N-1) V / ε.
    pub fn with_vbar(n: usize, epsilon: f64, vbar: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("N must be at least 2, got {n}")));
        }
        Self::new(n, epsilon, vbar * epsilon / (n as f64 - 1.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn vbar(&self) -> f64 {
        (self.n as f64 - 1.0) * self.coupling / self.epsilon
    }

    pub fn spin(&self) -> Spin {
        Spin::from_two_j(self.n as u32)
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

/// Quasi-spin magnitude, stored as `2J` so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// M for basis label n.
    pub fn m(self, n: usize) -> f64 {
        n as f64 - self.j()
    }

    /// ⟨n+1|J+|n⟩
    fn raise(self, n: usize) -> f64 {
        let (j, m) = (self.j(), self.m(n));
        (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
    }

    /// ⟨n-1|J-|n⟩
    fn lower(self, n: usize) -> f64 {
        let (j, m) = (self.j(), self.m(n));
        (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiSpinOp {
    Jz,
    JPlus,
    JMinus,
    JzSq,
    JPlusSq,
    JMinusSq,
    /// {Jz, J+}
    JzJPlus,
    /// {Jz, J-}
    JzJMinus,
    /// {J+, J-}
    JPlusJMinus,
}

/// `⟨n_row| op |n_col⟩` in the |J, M = n - J⟩ basis.
pub fn quasi_spin_element(spin: Spin, op: QuasiSpinOp, n_row: usize, n_col: usize) -> Result<f64> {
    let top = spin.two_j() as usize;
    if n_row > top || n_col > top {
        return Err(Error::QuantumNumbers(format!(
            "labels ({n_row}, {n_col}) outside 0..={top} for 2J = {top}"
        )));
    }
    let m = spin.m(n_col);
    let j = spin.j();
    let up = n_row == n_col + 1;
    let down = n_row + 1 == n_col;
    let diag = n_row == n_col;
    let v = match op {
        QuasiSpinOp::Jz if diag => m,
        QuasiSpinOp::JzSq if diag => m * m,
        QuasiSpinOp::JPlusJMinus if diag => 2.0 * (j * (j + 1.0) - m * m),
        QuasiSpinOp::JPlus if up => spin.raise(n_col),
        QuasiSpinOp::JMinus if down => spin.lower(n_col),
        QuasiSpinOp::JzJPlus if up => (2.0 * m + 1.0) * spin.raise(n_col),
        QuasiSpinOp::JzJMinus if down => (2.0 * m - 1.0) * spin.lower(n_col),
        QuasiSpinOp::JPlusSq if n_row == n_col + 2 => spin.raise(n_col) * spin.raise(n_col + 1),
        QuasiSpinOp::JMinusSq if n_row + 2 == n_col => spin.lower(n_col) * spin.lower(n_col - 1),
        _ => 0.0,
    };
    Ok(v)
}

/// Real symmetric matrix; symmetric by construction (only the upper triangle
/// is ever computed, then mirrored).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    /// Symmetrizes an arbitrary square matrix as (A + Aᵀ)/2.
    pub fn symmetrize(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        Ok(Self::from_upper(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Eigenvalues ascending, with matching eigenvector columns.
    pub fn eigh(&self) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let n = self.dim();
        let eig = SymmetricEigen::try_new(self.0.clone(), f64::EPSILON, 10_000).ok_or(Error::Eigen(n))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let mut vecs = DMatrix::zeros(n, n);
        for (c, &k) in order.iter().enumerate() {
            vecs.set_column(c, &eig.eigenvectors.column(k));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("eigenvalue".into()));
        }
        Ok((vals, vecs))
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.0.iter().copied().collect())
    }

    /// Lowest eigenpair, eigenvector sign-fixed (first nonzero component positive).
    pub fn lowest(&self) -> Result<(f64, Vec<f64>)> {
        let (vals, vecs) = self.eigh()?;
        let mut v: Vec<f64> = vecs.column(0).iter().copied().collect();
        fix_sign(&mut v);
        Ok((vals[0], v))
    }

    /// vᵀ A v
    pub fn quad(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| self.0[(i, j)] * v[j]).sum();
            acc += v[i] * row;
        }
        acc
    }
}

pub(crate) fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn build_full_hamiltonian(params: &ModelParams) -> SymMatrix {
    let spin = params.spin();
    let (eps, v) = (params.epsilon(), params.coupling());
    SymMatrix::from_upper(params.dim(), |i, j| {
        // upper triangle: row i <= col j, so J-² carries i + 2 == j
        let jz = elem(spin, QuasiSpinOp::Jz, i, j);
        let lower2 = elem(spin, QuasiSpinOp::JMinusSq, i, j);
        let raise2 = elem(spin, QuasiSpinOp::JPlusSq, i, j);
        eps * jz - 0.5 * v * (raise2 + lower2)
    })
}

fn elem(spin: Spin, op: QuasiSpinOp, i: usize, j: usize) -> f64 {
    quasi_spin_element(spin, op, i, j).expect("labels in range by construction")
}

fn check_cutoff(params: &ModelParams, cutoff: usize) -> Result<()> {
    if cutoff == 0 || cutoff > params.dim() {
        return Err(Error::CutoffOutOfRange { cutoff, max: params.dim() });
    }
    Ok(())
}

/// H(β) = U†(β) H U(β), U = exp(-iβJy), written in rotated quasi-spin operators
/// and truncated to the first `cutoff` states.
pub fn build_effective_hamiltonian(params: &ModelParams, beta: f64, cutoff: usize) -> Result<SymMatrix> {
    check_cutoff(params, cutoff)?;
    let (c, s) = (beta.cos(), beta.sin());
    let weights = Weights {
        jz: c,
        j_pm: 0.5 * s,
        quad: s * s,
        pair: 1.0 + c * c,
        mixed: -2.0 * s * c,
    };
    Ok(assemble(params, cutoff, &weights))
}

/// ∂H(β)/∂β, element by element.
pub fn effective_hamiltonian_dbeta(params: &ModelParams, beta: f64, cutoff: usize) -> Result<SymMatrix> {
    check_cutoff(params, cutoff)?;
    let (c, s) = (beta.cos(), beta.sin());
    let weights = Weights {
        jz: -s,
        j_pm: 0.5 * c,
        quad: 2.0 * s * c,
        pair: -2.0 * s * c,
        mixed: -2.0 * (2.0 * beta).cos(),
    };
    Ok(assemble(params, cutoff, &weights))
}

/// ε [a Jz + b (J+ + J-)] - V/4 [q (4Jz² - {J+,J-}) + p (J+² + J-²) + x ({Jz,J+} + {Jz,J-})]
struct Weights {
    jz: f64,
    j_pm: f64,
    quad: f64,
    pair: f64,
    mixed: f64,
}

fn assemble(params: &ModelParams, cutoff: usize, w: &Weights) -> SymMatrix {
    use QuasiSpinOp::*;
    let spin = params.spin();
    let (eps, v) = (params.epsilon(), params.coupling());
    SymMatrix::from_upper(cutoff, |i, j| {
        // rows i <= j: lowering-type operators populate the upper triangle
        let one = eps * (w.jz * elem(spin, Jz, i, j) + w.j_pm * elem(spin, JMinus, i, j));
        let two = w.quad * (4.0 * elem(spin, JzSq, i, j) - elem(spin, JPlusJMinus, i, j))
            + w.pair * elem(spin, JMinusSq, i, j)
            + w.mixed * elem(spin, JzJMinus, i, j);
        one - 0.25 * v * two
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundState {
    pub energy: f64,
    pub amplitudes: Vec<f64>,
}

/// Exact ground state of the full Hamiltonian.
///
/// H only couples n to n ± 2, so the even and odd sectors are diagonalized
/// separately; a tie between sectors resolves to the even one.
pub fn exact_ground_state(params: &ModelParams) -> Result<GroundState> {
    let full = build_full_hamiltonian(params);
    let dim = params.dim();
    let mut best: Option<GroundState> = None;
    for start in [0usize, 1] {
        let idx: Vec<usize> = (start..dim).step_by(2).collect();
        if idx.is_empty() {
            continue;
        }
        let block = SymMatrix::from_upper(idx.len(), |a, b| full.get(idx[a], idx[b]));
        let (e, v) = block.lowest()?;
        let mut amps = vec![0.0; dim];
        for (k, &i) in idx.iter().enumerate() {
            amps[i] = v[k];
        }
        let tol = 1e-12 * e.abs().max(1.0);
        if best.as_ref().is_none_or(|b| e < b.energy - tol) {
            best = Some(GroundState { energy: e, amplitudes: amps });
        }
    }
    best.ok_or(Error::Eigen(dim))
}
