mod common;

use hlvqe_core::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_3;

fn n30() -> ModelParams {
    ModelParams::with_vbar(30, 1.0, 2.0).unwrap()
}

fn oracle_block(p: &ModelParams, beta: f64, cutoff: usize) -> nalgebra::DMatrix<f64> {
    let r = common::rotation(p.n(), beta);
    (r.transpose() * common::full_hamiltonian(p.n(), p.epsilon(), p.coupling()) * &r)
        .view((0, 0), (cutoff, cutoff))
        .into_owned()
}

fn oracle_energy(p: &ModelParams, beta: f64, theta: &[f64], cutoff: usize) -> f64 {
    let psi = DVector::from_vec(prepare_ansatz(theta, cutoff.trailing_zeros() as usize).unwrap().real_parts());
    (psi.transpose() * oracle_block(p, beta, cutoff) * &psi)[(0, 0)]
}

fn analytic() -> Estimator {
    Estimator::new(Backend::Analytic).unwrap()
}

#[test]
fn vacuum_energy_is_first_diagonal_entry() {
    let p = n30();
    for cutoff in [2, 4, 8] {
        for beta in [0.0, 0.4, 1.3] {
            let theta = vec![0.0; cutoff - 1];
            let e = cost_and_grads(&p, cutoff, beta, &theta, &mut analytic()).unwrap().energy;
            assert!((e - oracle_block(&p, beta, cutoff)[(0, 0)]).abs() < 1e-10);
        }
    }
}

#[test]
fn hartree_fock_point_is_stationary_in_theta() {
    let r = cost_and_grads(&n30(), 2, FRAC_PI_3, &[0.0], &mut analytic()).unwrap();
    assert!((r.energy + 18.75).abs() < 1e-12);
    assert!(r.grad_theta[0].abs() < 1e-12);
}

#[test]
fn energy_and_gradients_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = ModelParams::with_vbar(30, 1.0, 1.6).unwrap();
    let h = 1e-6;
    for cutoff in [2, 4, 8] {
        for _ in 0..10 {
            let beta = rng.random_range(0.0..1.5);
            let theta: Vec<f64> = (0..cutoff - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
            let got = cost_and_grads(&p, cutoff, beta, &theta, &mut analytic()).unwrap();
            assert!((got.energy - oracle_energy(&p, beta, &theta, cutoff)).abs() < 1e-10);
            let fd_beta = (oracle_energy(&p, beta + h, &theta, cutoff) - oracle_energy(&p, beta - h, &theta, cutoff)) / (2.0 * h);
            assert!((got.grad_beta - fd_beta).abs() < 1e-6, "Λ={cutoff} G_β");
            for i in 0..theta.len() {
                let shifted = |d: f64| {
                    let mut t = theta.clone();
                    t[i] += d;
                    oracle_energy(&p, beta, &t, cutoff)
                };
                let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
                assert!((got.grad_theta[i] - fd).abs() < 1e-6, "Λ={cutoff} G_θ{i}");
            }
        }
    }
}

#[test]
fn analytic_run_shape_and_floor() {
    let p = n30();
    let opts = HlvqeOptions { init_theta: vec![0.1], ..Default::default() };
    let trace = run(&p, 2, &opts).unwrap();
    assert_eq!(trace.records.len(), 80);
    assert!(trace.records.iter().enumerate().all(|(i, r)| r.step == i + 1));
    let floor = solve_effective(&p, 2, &SolverOptions::default()).unwrap().energy;
    for r in &trace.records {
        assert!(r.energy >= floor - 1e-9);
        let sq = r.grad_beta.powi(2) + r.grad_theta.iter().map(|g| g * g).sum::<f64>();
        assert!((r.grad_norm.powi(2) - sq).abs() <= 1e-12 * sq.max(1.0));
        assert!(r.bures.is_some());
    }
}

#[test]
fn plain_descent_settles_monotonically() {
    let p = n30();
    for (cutoff, beta, theta) in [(2, 0.2, vec![0.1]), (4, 0.8, vec![0.0; 3])] {
        let opts = HlvqeOptions { init_beta: beta, init_theta: theta, update: Update::Plain, ..Default::default() };
        let trace = run(&p, cutoff, &opts).unwrap();
        for w in trace.records[5..].windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-12, "Λ={cutoff} step {}", w[1].step);
        }
    }
}

#[test]
fn sampled_runs_are_reproducible() {
    let p = n30();
    let opts = HlvqeOptions {
        backend: Backend::Sampled { shots: 2000, seed: 42 },
        max_iterations: 10,
        window: Window::new(5, 10).unwrap(),
        ..Default::default()
    };
    let a = run(&p, 4, &opts).unwrap();
    let b = run(&p, 4, &opts).unwrap();
    assert_eq!(a, b);
    let other = HlvqeOptions { backend: Backend::Sampled { shots: 2000, seed: 43 }, ..opts };
    assert_ne!(a.records, run(&p, 4, &other).unwrap().records);
}

#[test]
fn option_validation() {
    let p = n30();
    let bad = [
        HlvqeOptions { eta: 0.0, ..Default::default() },
        HlvqeOptions { max_iterations: 0, ..Default::default() },
        HlvqeOptions { window: Window { start: 70, end: 90 }, ..Default::default() },
        HlvqeOptions { init_theta: vec![0.1, 0.2], ..Default::default() },
    ];
    for opts in bad {
        assert!(run(&p, 2, &opts).is_err(), "{opts:?}");
    }
    assert!(run(&p, 3, &HlvqeOptions::default()).is_err());
    assert!(Window::new(0, 3).is_err());
    assert_eq!("70..80".parse::<Window>().unwrap(), Window::default());
}

#[test]
fn summary_arithmetic() {
    let p = n30();
    let opts = HlvqeOptions { max_iterations: 2, window: Window::new(1, 2).unwrap(), ..Default::default() };
    let mut records = run(&p, 2, &opts).unwrap().records;
    records[0].energy = -18.74;
    records[1].energy = -18.76;
    let s = summarize(&records, Window::new(1, 2).unwrap()).unwrap();
    assert!((s.energy.mean + 18.75).abs() < 1e-12);
    assert!((s.energy.half_range - 0.01).abs() < 1e-12);
    let one = summarize(&records, Window::new(2, 2).unwrap()).unwrap();
    assert_eq!(one.energy.half_range, 0.0);
    assert!(summarize(&records, Window::new(5, 6).unwrap()).is_err());
}

#[test]
fn chemical_potential_adds_a_projector() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let h = SymMatrix::from_upper(4, |_, _| rng.random_range(-3.0..3.0));
        let d = decompose(&h).unwrap();
        let theta: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
        let g = prepare_ansatz(&theta, 2).unwrap();
        let psi = DVector::from_vec(g.real_parts());
        let want = h.matrix() + &psi * psi.transpose() * 5.0;
        let got = excited_hamiltonian(&d, &g, 5.0).unwrap().reassemble();
        assert!((got - want).abs().max() < 1e-10);
    }
    let d = decompose(&SymMatrix::from_upper(2, |i, j| (i + j) as f64)).unwrap();
    let g = StateVector::zero(1);
    assert_eq!(excited_hamiltonian(&d, &g, 0.0).unwrap(), d);
    assert!(excited_hamiltonian(&d, &g, -1.0).is_err());
    assert!(excited_hamiltonian(&d, &StateVector::zero(2), 1.0).is_err());
}

#[test]
fn first_excited_level_from_hartree_fock() {
    let p = n30();
    let opts = HlvqeOptions { update: Update::Plain, init_theta: vec![1.5], max_iterations: 200, window: Window::new(190, 200).unwrap(), ..Default::default() };
    let ex = run_excited(&p, 2, FRAC_PI_3, &[0.0], 10.0, &opts).unwrap();
    assert!((ex.exact_energy + 16.0).abs() < 1e-9);
    assert!((ex.trace.records.last().unwrap().energy + 16.0).abs() < 1e-6);
    assert!(ex.overlap_with_ground < 1e-6);
}

#[test]
fn excited_state_is_orthogonal_to_the_two_qubit_ground_state() {
    let p = n30();
    let beta = solve_effective(&p, 4, &SolverOptions::default()).unwrap().beta;
    let long = |theta: Vec<f64>| HlvqeOptions {
        update: Update::Plain,
        init_theta: theta,
        max_iterations: 3000,
        window: Window::new(2990, 3000).unwrap(),
        ..Default::default()
    };
    let ground = run_excited(&p, 4, beta, &[0.0; 3], 0.0, &long(vec![0.1; 3])).unwrap();
    let ground_theta = ground.trace.records.last().unwrap().theta.clone();
    assert!((ground.trace.records.last().unwrap().energy - ground.exact_energy).abs() < 1e-10);

    let ex = run_excited(&p, 4, beta, &ground_theta, 20.0, &long(vec![1.0, 0.5, -0.5])).unwrap();
    assert!(ex.overlap_with_ground < 1e-6, "overlap {}", ex.overlap_with_ground);
    let spectrum = SymMatrix::symmetrize(&oracle_block(&p, beta, 4)).unwrap().spectrum().unwrap();
    assert!((ex.trace.records.last().unwrap().energy - spectrum[1]).abs() < 1e-8);
}
