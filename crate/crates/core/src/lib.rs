//! Effective-model-space solvers and Hamiltonian-learning VQE (HL-VQE) for the
//! Lipkin-Meshkov-Glick model.
//!
//! The pipeline, bottom up:
//!
//! - [`model`]: LMG instances, the full and rotated (effective) Hamiltonians.
//! - [`rotations`]: Wigner small-d matrices, reconstruction in the unrotated
//!   basis, parity projection and Bures distances.
//! - [`solver`]: classical optimisation of the rotation angle and Λ/v̄ sweeps.
//! - [`pauli`]: Pauli decompositions of truncated Hamiltonians.
//! - [`qsim`]: a small statevector simulator for the ansatz circuits.
//! - [`hlvqe`]: the simultaneous (β, θ) gradient-descent driver.

pub mod error;
pub mod hlvqe;
pub mod model;
pub mod pauli;
pub mod qsim;
pub mod rotations;
pub mod solver;

pub use error::{Error, Result};
pub use hlvqe::{
    cost_and_grads, excited_hamiltonian, hamiltonian_terms, run, run_excited, summarize, CostAndGrads, ExcitedRun, HlvqeOptions,
    IterationRecord, RunSummary, Stat, Trace, Update, Window,
};
pub use model::{
    build_effective_hamiltonian, build_full_hamiltonian, effective_hamiltonian_dbeta,
    exact_ground_state, quasi_spin_element, GroundState, ModelParams, QuasiSpinOp, Spin, SymMatrix,
};
pub use pauli::{
    coeffs_1q, coeffs_2q, decompose, expectation_from_probs, Coeffs1q, Coeffs2q, Pauli,
    PauliDecomposition, PauliString,
};
pub use qsim::{
    measure_pauli, parameter_shift_grad, prepare_ansatz, sample_counts, sample_counts_seeded, Backend, Circuit,
    Estimator, ExpectationEstimate, Gate, StateVector,
};
pub use rotations::{
    bures_distance, project_parity, reconstruct_full, wigner_d_matrix, wigner_small_d,
    EffectiveState, FullState, Parity,
};
pub use solver::{
    effective_ground, hf_beta, hf_energy, optimal_beta, solve_effective, sweep_lambda, sweep_vbar, ConvergenceRow,
    EffectiveSolution, SolverOptions, VbarPoint,
};
