//! Hamiltonian-learning VQE: the rotation angle β of the effective Hamiltonian
//! and the ansatz angles θ are learned together by gradient descent on
//! `E(β, θ) = Σ_P h_P(β) ⟨Ψ(θ)|P|Ψ(θ)⟩`.
//!
//! The β-gradient uses analytic coefficient derivatives; θ-gradients use the
//! parameter-shift rule on each string (the identity string is skipped, its
//! expectation being constant).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_effective_hamiltonian, effective_hamiltonian_dbeta, exact_ground_state, ModelParams, SymMatrix};
use crate::pauli::{coeffs_1q, coeffs_2q, decompose, PauliDecomposition, PauliString};
use crate::qsim::{measure_pauli, parameter_shift_grad, Backend, Circuit, Estimator, StateVector};
use crate::rotations::{bures_distance, project_parity, reconstruct_full, EffectiveState, FullState, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Update {
    /// `w ← w - η G / |G|`
    #[default]
    Normalized,
    /// `w ← w - η G`
    Plain,
}

/// Inclusive range of step numbers (steps count from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end {
            return Err(Error::InvalidOption(format!("window {start}..{end} must satisfy 1 <= start <= end")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, step: usize) -> bool {
        (self.start..=self.end).contains(&step)
    }
}

impl Default for Window {
    fn default() -> Self {
        Self { start: 70, end: 80 }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOption(format!("window '{s}' is not of the form A..B"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        Window::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HlvqeOptions {
    pub eta: f64,
    pub max_iterations: usize,
    pub backend: Backend,
    pub init_beta: f64,
    /// Empty means 0.1 for every angle.
    pub init_theta: Vec<f64>,
    pub window: Window,
    pub update: Update,
    /// Stop once |E_k - E_{k-1}| falls below this.
    pub energy_tol: Option<f64>,
}

impl Default for HlvqeOptions {
    fn default() -> Self {
        Self {
            eta: 0.07,
            max_iterations: 80,
            backend: Backend::Analytic,
            init_beta: 0.2,
            init_theta: Vec::new(),
            window: Window::default(),
            update: Update::Normalized,
            energy_tol: None,
        }
    }
}

impl HlvqeOptions {
    fn validate(&self, n_params: usize) -> Result<Vec<f64>> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidOption(format!("learning rate must be positive, got {}", self.eta)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidOption("max_iterations must be at least 1".into()));
        }
        if self.window.start == 0 || self.window.start > self.window.end || self.window.end > self.max_iterations {
            return Err(Error::InvalidOption(format!(
                "window {} must lie within 1..{}",
                self.window, self.max_iterations
            )));
        }
        match self.init_theta.len() {
            0 => Ok(vec![0.1; n_params]),
            k if k == n_params => Ok(self.init_theta.clone()),
            k => Err(Error::DimensionMismatch { expected: n_params, got: k }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub step: usize,
    pub beta: f64,
    pub theta: Vec<f64>,
    pub energy: f64,
    pub grad_beta: f64,
    pub grad_theta: Vec<f64>,
    pub grad_norm: f64,
    /// |A_n| of the register state.
    pub amplitudes: Vec<f64>,
    /// Bures distance of the even-projected state to the exact ground state.
    pub bures: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub records: Vec<IterationRecord>,
    /// True when the run stopped before `max_iterations` because it had converged.
    pub converged_early: bool,
    pub backend: Backend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostAndGrads {
    pub energy: f64,
    pub grad_beta: f64,
    pub grad_theta: Vec<f64>,
}

fn qubits_for_cutoff(cutoff: usize) -> Result<usize> {
    if cutoff < 2 || !cutoff.is_power_of_two() {
        return Err(Error::InvalidOption(format!("HL-VQE cutoff must be a power of two >= 2, got {cutoff}")));
    }
    Ok(cutoff.trailing_zeros() as usize)
}

/// Pauli coefficients of H(β) and ∂H/∂β for a register of `cutoff` states:
/// closed forms for one and two qubits, trace decomposition beyond.
pub fn hamiltonian_terms(params: &ModelParams, cutoff: usize, beta: f64) -> Result<(PauliDecomposition, PauliDecomposition)> {
    match qubits_for_cutoff(cutoff)? {
        1 => {
            let (h, dh) = coeffs_1q(params, beta);
            Ok((h.to_decomposition(Some(beta)), dh.to_decomposition(Some(beta))))
        }
        2 => {
            let (h, dh) = coeffs_2q(params, beta)?;
            Ok((h.to_decomposition(Some(beta)), dh.to_decomposition(Some(beta))))
        }
        _ => {
            let mut h = decompose(&build_effective_hamiltonian(params, beta, cutoff)?)?;
            let mut dh = decompose(&effective_hamiltonian_dbeta(params, beta, cutoff)?)?;
            h.beta = Some(beta);
            dh.beta = Some(beta);
            Ok((h, dh))
        }
    }
}

struct Evaluation {
    energy: f64,
    grad_beta: f64,
    grad_theta: Vec<f64>,
    state: StateVector,
}

fn evaluate(
    circuit: &Circuit,
    h: &PauliDecomposition,
    dh: Option<&PauliDecomposition>,
    theta: &[f64],
    est: &mut Estimator,
) -> Result<Evaluation> {
    if h.n_qubits != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), got: h.n_qubits });
    }
    let mut terms: BTreeMap<PauliString, (f64, f64)> = BTreeMap::new();
    for (s, c) in &h.terms {
        terms.entry(s.clone()).or_default().0 += c;
    }
    for (s, c) in dh.map(|d| d.terms.as_slice()).unwrap_or_default() {
        terms.entry(s.clone()).or_default().1 += c;
    }
    let state = circuit.run(theta)?;
    let (mut energy, mut grad_beta) = (0.0, 0.0);
    let mut grad_theta = vec![0.0; theta.len()];
    for (s, (c, dc)) in &terms {
        let ev = measure_pauli(&state, s, est)?.value;
        energy += c * ev;
        grad_beta += dc * ev;
        if s.is_identity() || *c == 0.0 {
            continue;
        }
        for (i, g) in grad_theta.iter_mut().enumerate() {
            *g += c * parameter_shift_grad(circuit, theta, i, s, est)?;
        }
    }
    Ok(Evaluation { energy, grad_beta, grad_theta, state })
}

pub fn cost_and_grads(
    params: &ModelParams,
    cutoff: usize,
    beta: f64,
    theta: &[f64],
    est: &mut Estimator,
) -> Result<CostAndGrads> {
    let circuit = Circuit::ansatz(qubits_for_cutoff(cutoff)?)?;
    let (h, dh) = hamiltonian_terms(params, cutoff, beta)?;
    let ev = evaluate(&circuit, &h, Some(&dh), theta, est)?;
    Ok(CostAndGrads { energy: ev.energy, grad_beta: ev.grad_beta, grad_theta: ev.grad_theta })
}

enum Objective<'a> {
    Learn { params: &'a ModelParams, cutoff: usize, exact: FullState },
    Fixed { h: &'a PauliDecomposition, beta: f64 },
}

fn descend(objective: Objective<'_>, n_qubits: usize, opts: &HlvqeOptions) -> Result<Trace> {
    let circuit = Circuit::ansatz(n_qubits)?;
    let mut theta = opts.validate(circuit.n_params())?;
    let mut est = Estimator::new(opts.backend)?;
    let mut beta = match objective {
        Objective::Learn { .. } => opts.init_beta,
        Objective::Fixed { beta, .. } => beta,
    };
    let mut records = Vec::with_capacity(opts.max_iterations);
    let mut converged_early = false;

    for step in 1..=opts.max_iterations {
        let (ev, bures) = match &objective {
            Objective::Learn { params, cutoff, exact } => {
                let (h, dh) = hamiltonian_terms(params, *cutoff, beta)?;
                let ev = evaluate(&circuit, &h, Some(&dh), &theta, &mut est)?;
                let amps = ev.state.real_parts();
                let projected = EffectiveState::new(beta, amps)
                    .and_then(|s| reconstruct_full(&s, params))
                    .and_then(|f| project_parity(&f, Parity::Even))?;
                (ev, Some(bures_distance(&projected, exact)?))
            }
            Objective::Fixed { h, .. } => (evaluate(&circuit, h, None, &theta, &mut est)?, None),
        };
        if !ev.energy.is_finite() {
            return Err(Error::NonFinite(format!("energy at step {step}")));
        }
        let grad_norm = (ev.grad_beta.powi(2) + ev.grad_theta.iter().map(|g| g * g).sum::<f64>()).sqrt();
        let prev_energy = records.last().map(|r: &IterationRecord| r.energy);
        records.push(IterationRecord {
            step,
            beta,
            theta: theta.clone(),
            energy: ev.energy,
            grad_beta: ev.grad_beta,
            grad_theta: ev.grad_theta.clone(),
            grad_norm,
            amplitudes: ev.state.real_parts().iter().map(|a| a.abs()).collect(),
            bures,
        });

        if let (Some(tol), Some(prev)) = (opts.energy_tol, prev_energy) {
            if (ev.energy - prev).abs() < tol {
                converged_early = step < opts.max_iterations;
                break;
            }
        }
        let scale = match opts.update {
            Update::Plain => opts.eta,
            Update::Normalized => {
                if grad_norm < 1e-14 {
                    converged_early = step < opts.max_iterations;
                    break;
                }
                opts.eta / grad_norm
            }
        };
        if matches!(objective, Objective::Learn { .. }) {
            beta -= scale * ev.grad_beta;
        }
        for (t, g) in theta.iter_mut().zip(&ev.grad_theta) {
            *t -= scale * g;
        }
    }
    Ok(Trace { records, converged_early, backend: opts.backend })
}

/// Simultaneous (β, θ) descent on the truncated effective Hamiltonian.
pub fn run(params: &ModelParams, cutoff: usize, opts: &HlvqeOptions) -> Result<Trace> {
    let nq = qubits_for_cutoff(cutoff)?;
    if cutoff > params.dim() {
        return Err(Error::CutoffOutOfRange { cutoff, max: params.dim() });
    }
    let exact = FullState::new(exact_ground_state(params)?.amplitudes)?;
    descend(Objective::Learn { params, cutoff, exact }, nq, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    /// (max - min) / 2
    pub half_range: f64,
}

impl Stat {
    fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut sum, mut n, mut lo, mut hi) = (0.0, 0usize, f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            sum += v;
            n += 1;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Self { mean: sum / n as f64, half_range: 0.5 * (hi - lo) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub window: Window,
    pub energy: Stat,
    pub beta: Stat,
    pub amplitudes: Vec<Stat>,
    pub bures: Option<Stat>,
}

pub fn summarize(records: &[IterationRecord], window: Window) -> Result<RunSummary> {
    let sel: Vec<&IterationRecord> = records.iter().filter(|r| window.contains(r.step)).collect();
    if sel.is_empty() {
        return Err(Error::InvalidOption(format!("window {window} selects no steps")));
    }
    let width = sel[0].amplitudes.len();
    let bures = sel.iter().map(|r| r.bures).collect::<Option<Vec<f64>>>().map(Stat::of);
    Ok(RunSummary {
        window,
        energy: Stat::of(sel.iter().map(|r| r.energy)),
        beta: Stat::of(sel.iter().map(|r| r.beta)),
        amplitudes: (0..width).map(|n| Stat::of(sel.iter().map(|r| r.amplitudes[n]))).collect(),
        bures,
    })
}

/// Adds μ₀|Ψ⟩⟨Ψ| term by term: `h'_P = h_P + μ₀/2^M ⟨Ψ|P|Ψ⟩`.
pub fn excited_hamiltonian(decomp: &PauliDecomposition, ground: &StateVector, mu0: f64) -> Result<PauliDecomposition> {
    if !(mu0 >= 0.0 && mu0.is_finite()) {
        return Err(Error::InvalidOption(format!("chemical potential must be non-negative, got {mu0}")));
    }
    if ground.n_qubits() != decomp.n_qubits {
        return Err(Error::DimensionMismatch { expected: decomp.n_qubits, got: ground.n_qubits() });
    }
    if mu0 == 0.0 {
        return Ok(decomp.clone());
    }
    let scale = mu0 / decomp.dim() as f64;
    let mut terms: BTreeMap<PauliString, f64> = BTreeMap::new();
    for (s, c) in &decomp.terms {
        *terms.entry(s.clone()).or_default() += c;
    }
    for s in PauliString::all(decomp.n_qubits) {
        let ev = ground.expectation(&s);
        if ev.abs() > 1e-14 {
            *terms.entry(s).or_default() += scale * ev;
        }
    }
    Ok(PauliDecomposition { n_qubits: decomp.n_qubits, terms: terms.into_iter().collect(), beta: decomp.beta })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcitedRun {
    pub beta: f64,
    pub mu0: f64,
    pub hamiltonian: PauliDecomposition,
    /// Lowest eigenvalue of the shifted Hamiltonian, by diagonalization.
    pub exact_energy: f64,
    /// |⟨Ψ_ground|Ψ_final⟩|
    pub overlap_with_ground: f64,
    pub trace: Trace,
}

/// θ-only descent on H(β) + μ₀|Ψ_ground⟩⟨Ψ_ground| at fixed β.
pub fn run_excited(
    params: &ModelParams,
    cutoff: usize,
    beta: f64,
    ground_theta: &[f64],
    mu0: f64,
    opts: &HlvqeOptions,
) -> Result<ExcitedRun> {
    let nq = qubits_for_cutoff(cutoff)?;
    let circuit = Circuit::ansatz(nq)?;
    let ground = circuit.run(ground_theta)?;
    let (h, _) = hamiltonian_terms(params, cutoff, beta)?;
    let shifted = excited_hamiltonian(&h, &ground, mu0)?;
    let exact_energy = SymMatrix::symmetrize(&shifted.reassemble())?.lowest()?.0;
    let trace = descend(Objective::Fixed { h: &shifted, beta }, nq, opts)?;
    let last = trace.records.last().ok_or_else(|| Error::InvalidOption("empty trace".into()))?;
    let fin = circuit.run(&last.theta)?;
    let overlap = ground.amplitudes().iter().zip(fin.amplitudes()).map(|(a, b)| a.conj() * b).sum::<num_complex::Complex64>();
    Ok(ExcitedRun { beta, mu0, hamiltonian: shifted, exact_energy, overlap_with_ground: overlap.norm(), trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!("70..80".parse::<Window>().unwrap(), Window { start: 70, end: 80 });
        assert!("80..70".parse::<Window>().is_err());
        assert!("0..3".parse::<Window>().is_err());
        assert!("7-9".parse::<Window>().is_err());
    }

    #[test]
    fn summary_arithmetic() {
        let rec = |step, energy| IterationRecord {
            step,
            beta: 1.0,
            theta: vec![],
            energy,
            grad_beta: 0.0,
            grad_theta: vec![],
            grad_norm: 0.0,
            amplitudes: vec![1.0],
            bures: None,
        };
        let s = summarize(&[rec(1, -18.74), rec(2, -18.76)], Window::new(1, 2).unwrap()).unwrap();
        assert!((s.energy.mean + 18.75).abs() < 1e-12);
        assert!((s.energy.half_range - 0.01).abs() < 1e-12);
        assert_eq!(s.beta.half_range, 0.0);
        assert!(s.bures.is_none());
        assert!(summarize(&[rec(1, 0.0)], Window::new(5, 6).unwrap()).is_err());
    }

    #[test]
    fn options_validation() {
        let p = ModelParams::with_vbar(30, 1.0, 2.0).unwrap();
        let bad = HlvqeOptions { eta: 0.0, ..Default::default() };
        assert!(run(&p, 2, &bad).is_err());
        let bad = HlvqeOptions { window: Window { start: 70, end: 90 }, ..Default::default() };
        assert!(run(&p, 2, &bad).is_err());
        assert!(run(&p, 3, &HlvqeOptions::default()).is_err());
        let bad = HlvqeOptions { init_theta: vec![0.0; 2], ..Default::default() };
        assert!(run(&p, 4, &bad).is_err());
    }

    #[test]
    fn negative_mu_rejected() {
        let p = ModelParams::with_vbar(30, 1.0, 2.0).unwrap();
        let (h, _) = hamiltonian_terms(&p, 2, 1.0).unwrap();
        let psi = StateVector::zero(1);
        assert!(excited_hamiltonian(&h, &psi, -1.0).is_err());
        assert_eq!(excited_hamiltonian(&h, &psi, 0.0).unwrap(), h);
    }
}
