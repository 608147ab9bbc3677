//! Classical variational solution in the effective model space: the rotation
//! angle β is optimized in an outer loop, with exact diagonalization of the
//! truncated H(β) inside.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    build_effective_hamiltonian, build_full_hamiltonian, effective_hamiltonian_dbeta, exact_ground_state,
    GroundState, ModelParams,
};
use crate::rotations::{bures_distance, project_parity, reconstruct_full, EffectiveState, FullState, Parity};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Coarse grid over [0, π/2], endpoints included.
    pub grid_points: usize,
    /// Number of best grid points refined by golden-section search.
    pub starts: usize,
    pub beta_tol: f64,
    pub max_iterations: usize,
    /// Refine the golden-section result to a root of dE/dβ.
    pub polish: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { grid_points: 64, starts: 3, beta_tol: 1e-10, max_iterations: 200, polish: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveSolution {
    pub beta: f64,
    pub energy: f64,
    pub state: EffectiveState,
    pub projected_energy: f64,
    /// Bures distance of the even-projected solution to the exact ground state.
    pub bures: f64,
    /// Same, for the naive β = 0 truncation.
    pub bures_beta0: f64,
}

/// Lowest eigenpair of the truncated H(β).
pub fn effective_ground(params: &ModelParams, beta: f64, cutoff: usize) -> Result<(f64, Vec<f64>)> {
    build_effective_hamiltonian(params, beta, cutoff)?.lowest()
}

/// dE/dβ of the lowest level via Hellmann–Feynman.
fn energy_slope(params: &ModelParams, beta: f64, cutoff: usize) -> Result<f64> {
    let (_, v) = effective_ground(params, beta, cutoff)?;
    Ok(effective_hamiltonian_dbeta(params, beta, cutoff)?.quad(&v))
}

/// Stationary angle of the single-configuration (Λ = 1) energy.
pub fn hf_beta(params: &ModelParams) -> f64 {
    let vbar = params.vbar();
    if vbar > 1.0 {
        (1.0 / vbar).acos()
    } else {
        0.0
    }
}

/// Single-configuration energy at [`hf_beta`].
pub fn hf_energy(params: &ModelParams) -> f64 {
    let (n, eps, vbar) = (params.n() as f64, params.epsilon(), params.vbar());
    if vbar > 1.0 {
        -n * (vbar * vbar + 1.0) * eps / (4.0 * vbar)
    } else {
        -n * eps / 2.0
    }
}

fn golden(f: &mut impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64, max_it: usize) -> Result<(f64, f64)> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..max_it {
        if (b - a).abs() < tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Root of `g` in [a, b] given a sign change, by Illinois-style regula falsi.
fn bracketed_root(g: &mut impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, max_it: usize) -> Result<Option<f64>> {
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    if ga == 0.0 {
        return Ok(Some(a));
    }
    if gb == 0.0 {
        return Ok(Some(b));
    }
    if ga.signum() == gb.signum() {
        return Ok(None);
    }
    let mut side = 0i8;
    for _ in 0..max_it {
        let x = (a * gb - b * ga) / (gb - ga);
        let x = if x.is_finite() && x > a.min(b) && x < a.max(b) { x } else { 0.5 * (a + b) };
        let gx = g(x)?;
        if gx == 0.0 || (b - a).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return Ok(Some(x));
        }
        if gx.signum() == ga.signum() {
            a = x;
            ga = gx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            gb = gx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Optimal β in [0, π/2] for a given cutoff.
pub fn optimal_beta(params: &ModelParams, cutoff: usize, opts: &SolverOptions) -> Result<(f64, f64)> {
    if opts.grid_points < 2 || opts.starts == 0 {
        return Err(Error::InvalidOption("solver grid needs >= 2 points and >= 1 start".into()));
    }
    let mut energy = |b: f64| -> Result<f64> {
        let e = effective_ground(params, b, cutoff)?.0;
        if e.is_finite() {
            Ok(e)
        } else {
            Err(Error::NonFinite(format!("energy at beta = {b}")))
        }
    };
    // the rotation cannot change the spectrum of the untruncated problem
    if cutoff == params.dim() {
        return Ok((0.0, energy(0.0)?));
    }
    let h = FRAC_PI_2 / (opts.grid_points - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..opts.grid_points)
        .map(|i| {
            let b = i as f64 * h;
            energy(b).map(|e| (b, e))
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1));

    let mut best = grid[0];
    for &i in order.iter().take(opts.starts) {
        let lo = if i == 0 { 0.0 } else { grid[i - 1].0 };
        let hi = grid.get(i + 1).map_or(FRAC_PI_2, |g| g.0);
        let (mut b, mut e) = golden(&mut energy, lo, hi, opts.beta_tol, opts.max_iterations)?;
        if grid[i].1 < e {
            (b, e) = grid[i];
        }
        if opts.polish && b > 0.0 {
            let mut slope = |x: f64| energy_slope(params, x, cutoff);
            if let Some(r) = bracketed_root(&mut slope, lo.max(0.0), hi, opts.max_iterations)? {
                let er = energy(r)?;
                // on the plateau energies tie to rounding; the stationary point wins
                if er <= e + 64.0 * f64::EPSILON * e.abs() {
                    (b, e) = (r, er);
                }
            }
        }
        if e < best.1 {
            best = (b, e);
        }
    }
    let e0 = grid[0].1;
    if e0 <= best.1 {
        best = (0.0, e0);
    }
    Ok(best)
}

pub fn solve_effective(params: &ModelParams, cutoff: usize, opts: &SolverOptions) -> Result<EffectiveSolution> {
    let exact = exact_ground_state(params)?;
    solve_with_exact(params, cutoff, opts, &exact)
}

fn solve_with_exact(
    params: &ModelParams,
    cutoff: usize,
    opts: &SolverOptions,
    exact: &GroundState,
) -> Result<EffectiveSolution> {
    let (beta, _) = optimal_beta(params, cutoff, opts)?;
    let (energy, amps) = effective_ground(params, beta, cutoff)?;
    let state = EffectiveState::new(beta, amps)?;
    let exact_state = FullState::new(exact.amplitudes.clone())?;

    let projected = project_parity(&reconstruct_full(&state, params)?, Parity::Even)?;
    let projected_energy = build_full_hamiltonian(params).quad(projected.amplitudes());
    let bures = bures_distance(&projected, &exact_state)?;

    let (_, naive) = effective_ground(params, 0.0, cutoff)?;
    let naive = project_parity(&reconstruct_full(&EffectiveState::new(0.0, naive)?, params)?, Parity::Even)?;
    let bures_beta0 = bures_distance(&naive, &exact_state)?;

    Ok(EffectiveSolution { beta, energy, state, projected_energy, bures, bures_beta0 })
}

/// Energy differences relative to the exact ground state, signed (E - E_exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub beta: f64,
    pub delta_e_naive: f64,
    pub delta_e_effective: f64,
    pub delta_e_projected: f64,
}

pub fn sweep_lambda(params: &ModelParams, cutoffs: &[usize], opts: &SolverOptions) -> Result<Vec<ConvergenceRow>> {
    if cutoffs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidOption("cutoffs must be sorted ascending".into()));
    }
    let exact = exact_ground_state(params)?;
    cutoffs
        .iter()
        .map(|&cutoff| {
            let row = || -> Result<ConvergenceRow> {
                let sol = solve_with_exact(params, cutoff, opts, &exact)?;
                let naive = effective_ground(params, 0.0, cutoff)?.0;
                Ok(ConvergenceRow {
                    cutoff,
                    beta: sol.beta,
                    delta_e_naive: naive - exact.energy,
                    delta_e_effective: sol.energy - exact.energy,
                    delta_e_projected: sol.projected_energy - exact.energy,
                })
            };
            row().map_err(|e| Error::AtCutoff { cutoff, source: Box::new(e) })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VbarPoint {
    pub vbar: f64,
    pub beta: f64,
    /// |E_exact - E(Λ)| / |E_exact|, in percent.
    pub rel_error_percent: f64,
}

pub fn sweep_vbar(
    n: usize,
    epsilon: f64,
    cutoff: usize,
    vbar_grid: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<VbarPoint>> {
    vbar_grid
        .iter()
        .map(|&vbar| {
            if !(vbar > 0.0) {
                return Err(Error::InvalidParams(format!("vbar grid must be positive, got {vbar}")));
            }
            let p = ModelParams::with_vbar(n, epsilon, vbar)?;
            let exact = exact_ground_state(&p)?.energy;
            let (beta, e) = optimal_beta(&p, cutoff, opts)?;
            Ok(VbarPoint { vbar, beta, rel_error_percent: 100.0 * (exact - e).abs() / exact.abs() })
        })
        .collect()
}
