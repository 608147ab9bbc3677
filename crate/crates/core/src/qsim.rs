//! Minimal statevector simulator for the ansatz circuits.
//!
//! Gate set: Ry, S, S†, H, RZX. `Rzx { z, x }` is `exp(-iθ/2 Z_z X_x)`.
//! Qubit `q` is bit `q` of the basis index (see [`crate::pauli`] for the
//! string ordering).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{expectation_from_probs, Pauli, PauliString};

const C0: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![C0; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amps.len()));
        }
        let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps: amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.re).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.probabilities().iter().sum::<f64>().sqrt()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1 << q;
        for k in 0..self.amps.len() {
            if k & bit == 0 {
                let (a0, a1) = (self.amps[k], self.amps[k | bit]);
                self.amps[k] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[k | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate, theta: &[f64]) {
        let re = |x: f64| Complex64::new(x, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match *gate {
            Gate::Ry { q, param } => {
                let (c, s) = ((theta[param] / 2.0).cos(), (theta[param] / 2.0).sin());
                self.apply_1q(q, [[re(c), re(-s)], [re(s), re(c)]]);
            }
            Gate::S { q } => self.apply_1q(q, [[re(1.0), C0], [C0, i]]),
            Gate::Sdg { q } => self.apply_1q(q, [[re(1.0), C0], [C0, -i]]),
            Gate::H { q } => {
                let h = re(std::f64::consts::FRAC_1_SQRT_2);
                self.apply_1q(q, [[h, h], [h, -h]]);
            }
            Gate::Rzx { z, x, param } => {
                let (c, s) = ((theta[param] / 2.0).cos(), (theta[param] / 2.0).sin());
                let (zb, xb) = (1 << z, 1 << x);
                for k in 0..self.amps.len() {
                    if k & xb == 0 {
                        let sign = if k & zb == 0 { 1.0 } else { -1.0 };
                        let (a0, a1) = (self.amps[k], self.amps[k | xb]);
                        // exp(-iθ/2 σ X) = cos - i σ sin X, σ = ±1 from the Z qubit
                        self.amps[k] = re(c) * a0 - i * sign * s * a1;
                        self.amps[k | xb] = re(c) * a1 - i * sign * s * a0;
                    }
                }
            }
        }
    }

    /// ⟨ψ|P|ψ⟩
    pub fn expectation(&self, string: &PauliString) -> f64 {
        (0..self.amps.len())
            .map(|k| {
                let (kp, phase) = string.apply_to_basis(k);
                (self.amps[kp].conj() * phase * self.amps[k]).re
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Ry { q: usize, param: usize },
    S { q: usize },
    Sdg { q: usize },
    H { q: usize },
    Rzx { z: usize, x: usize, param: usize },
}

impl Gate {
    fn param(&self) -> Option<usize> {
        match *self {
            Gate::Ry { param, .. } | Gate::Rzx { param, .. } => Some(param),
            _ => None,
        }
    }

    fn qubits(&self) -> [usize; 2] {
        match *self {
            Gate::Ry { q, .. } | Gate::S { q } | Gate::Sdg { q } | Gate::H { q } => [q, q],
            Gate::Rzx { z, x, .. } => [z, x],
        }
    }
}

/// Parameterized circuit in which every angle drives exactly one gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let params: Vec<usize> = gates.iter().filter_map(Gate::param).collect();
        let n_params = params.len();
        let mut seen = vec![false; n_params];
        for p in params {
            if p >= n_params || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidOption(format!("angle {p} must drive exactly one gate")));
            }
        }
        for g in &gates {
            let [a, b] = g.qubits();
            if a >= n_qubits || b >= n_qubits || (matches!(g, Gate::Rzx { .. }) && a == b) {
                return Err(Error::InvalidOption(format!("gate {g:?} does not fit {n_qubits} qubits")));
            }
        }
        Ok(Self { n_qubits, n_params, gates })
    }

    /// The ansatz for `n_qubits` with 2^{n_q} - 1 angles.
    ///
    /// One qubit: Ry(θ0). Two qubits (s1 high, s0 low):
    /// Ry(θ0, s1); S(s0); RZX(θ1; Z on s1, X on s0); S†(s0); Ry(θ2, s0).
    /// Wider registers repeat Ry layers and S·RZX·S† links along the chain
    /// until the angle budget is spent.
    pub fn ansatz(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidOption("ansatz needs at least one qubit".into()));
        }
        let budget = (1usize << n_qubits) - 1;
        let mut gates = Vec::new();
        let mut next = 0;
        let add_ry = |gates: &mut Vec<Gate>, q: usize, next: &mut usize| {
            gates.push(Gate::Ry { q, param: *next });
            *next += 1;
        };
        if n_qubits == 1 {
            add_ry(&mut gates, 0, &mut next);
            return Self::new(1, gates);
        }
        let top = n_qubits - 1;
        add_ry(&mut gates, top, &mut next);
        'outer: loop {
            for hi in (1..=top).rev() {
                if next == budget {
                    break 'outer;
                }
                let lo = hi - 1;
                gates.extend([Gate::S { q: lo }, Gate::Rzx { z: hi, x: lo, param: next }, Gate::Sdg { q: lo }]);
                next += 1;
                if next == budget {
                    break 'outer;
                }
                add_ry(&mut gates, lo, &mut next);
            }
            for q in (0..=top).rev() {
                if next == budget {
                    break 'outer;
                }
                add_ry(&mut gates, q, &mut next);
            }
        }
        Self::new(n_qubits, gates)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn run(&self, theta: &[f64]) -> Result<StateVector> {
        if theta.len() != self.n_params {
            return Err(Error::DimensionMismatch { expected: self.n_params, got: theta.len() });
        }
        let mut psi = StateVector::zero(self.n_qubits);
        for g in &self.gates {
            psi.apply(g, theta);
        }
        Ok(psi)
    }
}

pub fn prepare_ansatz(theta: &[f64], n_qubits: usize) -> Result<StateVector> {
    Circuit::ansatz(n_qubits)?.run(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Backend {
    Analytic,
    Sampled { shots: u64, seed: u64 },
}

/// Runtime form of a [`Backend`]: the sampled variant owns its RNG stream.
#[derive(Debug, Clone)]
pub enum Estimator {
    Analytic,
    Sampled { shots: u64, rng: ChaCha8Rng },
}

impl Estimator {
    pub fn new(backend: Backend) -> Result<Self> {
        match backend {
            Backend::Analytic => Ok(Estimator::Analytic),
            Backend::Sampled { shots: 0, .. } => Err(Error::ZeroShots),
            Backend::Sampled { shots, seed } => Ok(Estimator::Sampled { shots, rng: ChaCha8Rng::seed_from_u64(seed) }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationEstimate {
    pub value: f64,
    pub std_error: f64,
    pub shots: u64,
}

/// Rotates each qubit so that `string` becomes diagonal: H for X, S† then H for Y.
pub fn rotate_to_z_basis(state: &StateVector, string: &PauliString) -> StateVector {
    let mut psi = state.clone();
    for q in 0..string.width() {
        match string.on_qubit(q) {
            Pauli::X => psi.apply(&Gate::H { q }, &[]),
            Pauli::Y => {
                psi.apply(&Gate::Sdg { q }, &[]);
                psi.apply(&Gate::H { q }, &[]);
            }
            Pauli::I | Pauli::Z => {}
        }
    }
    psi
}

pub fn measure_pauli(state: &StateVector, string: &PauliString, est: &mut Estimator) -> Result<ExpectationEstimate> {
    if string.width() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), got: string.width() });
    }
    match est {
        Estimator::Analytic => Ok(ExpectationEstimate { value: state.expectation(string), std_error: 0.0, shots: 0 }),
        Estimator::Sampled { shots, .. } if string.is_identity() => {
            Ok(ExpectationEstimate { value: 1.0, std_error: 0.0, shots: *shots })
        }
        Estimator::Sampled { shots, rng } => {
            let rotated = rotate_to_z_basis(state, string);
            let counts = sample_counts(&rotated, *shots, rng)?;
            let n = *shots as f64;
            let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
            let value = expectation_from_probs(&probs, string)?;
            let var = if *shots > 1 { (1.0 - value * value).max(0.0) * n / (n - 1.0) } else { 0.0 };
            Ok(ExpectationEstimate { value, std_error: (var / n).sqrt(), shots: *shots })
        }
    }
}

/// `(⟨P⟩(θ_i + π/2) - ⟨P⟩(θ_i - π/2)) / 2`
pub fn parameter_shift_grad(
    circuit: &Circuit,
    theta: &[f64],
    index: usize,
    string: &PauliString,
    est: &mut Estimator,
) -> Result<f64> {
    if index >= theta.len() {
        return Err(Error::DimensionMismatch { expected: theta.len(), got: index });
    }
    let shifted = |delta: f64| {
        let mut t = theta.to_vec();
        t[index] += delta;
        circuit.run(&t)
    };
    let plus = measure_pauli(&shifted(std::f64::consts::FRAC_PI_2)?, string, est)?.value;
    let minus = measure_pauli(&shifted(-std::f64::consts::FRAC_PI_2)?, string, est)?.value;
    Ok(0.5 * (plus - minus))
}

/// Multinomial draw over |amplitude|², via sequential conditional binomials.
pub fn sample_counts<R: Rng + ?Sized>(state: &StateVector, shots: u64, rng: &mut R) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = state.probabilities();
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    let mut counts = vec![0u64; probs.len()];
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(remaining, q).map_err(|e| Error::NonFinite(e.to_string()))?.sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    Ok(counts)
}

pub fn sample_counts_seeded(state: &StateVector, shots: u64, seed: u64) -> Result<Vec<u64>> {
    sample_counts(state, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}
