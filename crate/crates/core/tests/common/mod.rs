//! Independent reference constructions shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// J+ in the |J, M = n - J⟩ basis, straight from the ladder rule.
pub fn j_plus(two_j: usize) -> DMatrix<f64> {
    let j = two_j as f64 / 2.0;
    let mut m = DMatrix::zeros(two_j + 1, two_j + 1);
    for n in 0..two_j {
        let mm = n as f64 - j;
        m[(n + 1, n)] = (j * (j + 1.0) - mm * (mm + 1.0)).sqrt();
    }
    m
}

pub fn j_z(two_j: usize) -> DMatrix<f64> {
    let j = two_j as f64 / 2.0;
    DMatrix::from_fn(two_j + 1, two_j + 1, |a, b| if a == b { a as f64 - j } else { 0.0 })
}

/// εJz - V/2 (J+² + J-²) by matrix products.
pub fn full_hamiltonian(n: usize, eps: f64, v: f64) -> DMatrix<f64> {
    let jp = j_plus(n);
    let jm = jp.transpose();
    j_z(n) * eps - (&jp * &jp + &jm * &jm) * (0.5 * v)
}

/// exp(A) by scaling and squaring a Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);
    let n = a.nrows();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// exp(+iβJy) with Jy = (J+ - J-)/(2i): the real matrix exp(β (J+ - J-)/2).
pub fn rotation(two_j: usize, beta: f64) -> DMatrix<f64> {
    let jp = j_plus(two_j);
    expm(&((&jp - jp.transpose()) * (0.5 * beta)))
}

pub fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Closed-form alternating s-sum for d^J_{M'M}(β); arguments doubled. Only
/// trustworthy for small J.
pub fn d_closed_form(two_j: i64, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    let (jpm, jmm) = ((two_j + two_mp) / 2, (two_j - two_mp) / 2);
    let (jp, jm) = ((two_j + two_m) / 2, (two_j - two_m) / 2);
    let pre = (factorial(jpm) * factorial(jmm) / (factorial(jp) * factorial(jm))).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut acc = 0.0;
    for k in 0..=two_j {
        let a = jmm - k;
        let b1 = binomial(jp, a);
        let b2 = binomial(jm, k);
        if b1 == 0.0 || b2 == 0.0 {
            continue;
        }
        let e1 = 2 * k + (two_mp + two_m) / 2;
        let e2 = two_j - 2 * k - (two_mp + two_m) / 2;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        acc += b1 * b2 * sign * c.powi(e1 as i32) * s.powi(e2 as i32);
    }
    pre * acc
}

pub fn pauli_matrix(label: char) -> DMatrix<Complex64> {
    let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    let v = match label {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => panic!("bad label {label}"),
    };
    DMatrix::from_row_slice(2, 2, &v)
}

/// Leftmost label is the most significant factor.
pub fn pauli_string_matrix(s: &str) -> DMatrix<Complex64> {
    s.chars().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, c| acc.kronecker(&pauli_matrix(c)))
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}
