//! Wigner small-d rotations between the rotated and unrotated np-nh bases,
//! parity projection, and the Bures distance.
//!
//! `d^J_{M'M}(β) = ⟨J M'| exp(+iβJy) |J M⟩`, so the spin-1/2 block is
//! `[[cos β/2, -sin β/2], [sin β/2, cos β/2]]` with rows ordered M' = -1/2, +1/2.
//! A rotated effective state re-expands as `A_m(β=0) = Σ_n d^J_{m-J, n-J}(β) A_n(β)`.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_norm(v: &[f64]) -> Result<()> {
    let n = norm(v);
    if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// Truncated variational state in the rotated basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveState {
    beta: f64,
    amplitudes: Vec<f64>,
}

impl EffectiveState {
    pub fn new(beta: f64, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::CutoffOutOfRange { cutoff: 0, max: usize::MAX });
        }
        check_norm(&amplitudes)?;
        Ok(Self { beta, amplitudes })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }
}

/// State over all N+1 unrotated basis states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullState {
    amplitudes: Vec<f64>,
}

impl FullState {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        check_norm(&amplitudes)?;
        Ok(Self { amplitudes })
    }

    pub fn n_particles(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }
}

/// Full `(2J+1)²` small-d matrix, indexed by `(M' + J, M + J)`.
///
/// Built by coupling one spin-1/2 at a time onto the stretched states,
/// `|j m⟩ = √((j+m)/2j) |j-½, m-½⟩|↑⟩ + √((j-m)/2j) |j-½, m+½⟩|↓⟩`,
/// so every step is a product of orthogonal factors. The closed-form
/// alternating s-sum loses most of its digits by J ≈ 32 and is not used.
pub fn wigner_d_matrix(two_j: u32, beta: f64) -> DMatrix<f64> {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    // rows/cols: 0 = down (-1/2), 1 = up (+1/2)
    let half = [[c, -s], [s, c]];
    let mut d = DMatrix::from_element(1, 1, 1.0);
    for t in 1..=two_j as usize {
        let tf = t as f64;
        let coef = |k: usize, up: usize| -> f64 {
            if up == 1 {
                (k as f64 / tf).sqrt()
            } else {
                ((t - k) as f64 / tf).sqrt()
            }
        };
        let next = DMatrix::from_fn(t + 1, t + 1, |kp, k| {
            let mut acc = 0.0;
            for ap in 0..2 {
                // up component reads the (k-1) state of the smaller spin
                let Some(rp) = (kp + 1).checked_sub(1 + ap).filter(|&r| r < t) else { continue };
                let cp = coef(kp, ap);
                if cp == 0.0 {
                    continue;
                }
                for a in 0..2 {
                    let Some(r) = (k + 1).checked_sub(1 + a).filter(|&r| r < t) else { continue };
                    acc += cp * coef(k, a) * d[(rp, r)] * half[ap][a];
                }
            }
            acc
        });
        d = next;
    }
    d
}

/// Single element `d^J_{M'M}(β)`, with J, M', M passed doubled.
pub fn wigner_small_d(two_j: u32, two_m_row: i32, two_m_col: i32, beta: f64) -> Result<f64> {
    let tj = two_j as i32;
    for tm in [two_m_row, two_m_col] {
        if tm.abs() > tj || (tj - tm) % 2 != 0 {
            return Err(Error::QuantumNumbers(format!("2M = {tm} incompatible with 2J = {tj}")));
        }
    }
    let d = wigner_d_matrix(two_j, beta);
    Ok(d[(((tj + two_m_row) / 2) as usize, ((tj + two_m_col) / 2) as usize)])
}

pub fn reconstruct_full(state: &EffectiveState, params: &ModelParams) -> Result<FullState> {
    let dim = params.dim();
    if state.cutoff() > dim {
        return Err(Error::DimensionMismatch { expected: dim, got: state.cutoff() });
    }
    if state.beta == 0.0 {
        let mut amps = state.amplitudes.clone();
        amps.resize(dim, 0.0);
        return FullState::new(amps);
    }
    let d = wigner_d_matrix(params.n() as u32, state.beta);
    let amps = (0..dim)
        .map(|m| state.amplitudes.iter().enumerate().map(|(n, a)| d[(m, n)] * a).sum())
        .collect();
    FullState::new(amps)
}

/// Zeroes the opposite-parity components and renormalizes.
pub fn project_parity(state: &FullState, sector: Parity) -> Result<FullState> {
    let keep = match sector {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut amps: Vec<f64> =
        state.amplitudes.iter().enumerate().map(|(m, &a)| if m % 2 == keep { a } else { 0.0 }).collect();
    let n = norm(&amps);
    if n == 0.0 {
        return Err(Error::EmptySector(sector));
    }
    amps.iter_mut().for_each(|a| *a /= n);
    Ok(FullState { amplitudes: amps })
}

/// `√(2(1 - |⟨a|b⟩|))`
pub fn bures_distance(a: &FullState, b: &FullState) -> Result<f64> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(Error::DimensionMismatch { expected: a.amplitudes.len(), got: b.amplitudes.len() });
    }
    let overlap: f64 = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x * y).sum();
    Ok((2.0 * (1.0 - overlap.abs().min(1.0))).sqrt())
}
