//! Pauli decompositions of truncated Hamiltonians.
//!
//! Qubit ordering (the one place it is defined): a Pauli string is written
//! most-significant qubit first, so the leftmost operator acts on the highest
//! bit of the basis index. With Λ = 2^{n_q}, basis state |n, β⟩ is the
//! computational state whose binary label is n; for two qubits |01⟩ ≡ n = 1
//! and |10⟩ ≡ n = 2. In circuits, qubit `q` is bit `q` of the index
//! (q = 0 least significant), i.e. string position `n_q - 1 - q`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{ModelParams, SymMatrix};

const PRUNE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self(ops)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self(vec![Pauli::I; n_qubits])
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// Operator on circuit qubit `q` (bit `q` of the basis index).
    pub fn on_qubit(&self, q: usize) -> Pauli {
        self.0[self.0.len() - 1 - q]
    }

    /// All 4^n strings, in lexicographic I < X < Y < Z order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(n_qubits as u32)).map(move |mut k| {
            let mut ops = vec![Pauli::I; n_qubits];
            for slot in ops.iter_mut().rev() {
                *slot = Pauli::ALL[k % 4];
                k /= 4;
            }
            PauliString(ops)
        })
    }

    fn masks(&self) -> (usize, usize, usize) {
        let (mut flip, mut zmask, mut ycount) = (0, 0, 0);
        for q in 0..self.width() {
            match self.on_qubit(q) {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    zmask |= 1 << q;
                    ycount += 1;
                }
                Pauli::Z => zmask |= 1 << q,
            }
        }
        (flip, zmask, ycount)
    }

    /// `P|k⟩ = phase |k'⟩`
    pub fn apply_to_basis(&self, k: usize) -> (usize, Complex64) {
        let (flip, zmask, ycount) = self.masks();
        // Y = i X Z: Y|b⟩ = i (-1)^b |1-b⟩
        let sign = if (k & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let phase = match ycount % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        };
        (k ^ flip, phase)
    }

    /// ±1 eigenvalue of the Z-type part on computational state `k`
    /// (identity positions contribute +1).
    pub fn z_sign(&self, k: usize) -> f64 {
        let support: usize = (0..self.width()).filter(|&q| self.on_qubit(q) != Pauli::I).map(|q| 1 << q).sum();
        if (k & support).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidOption("empty Pauli string".into()));
        }
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidOption(format!("'{other}' is not a Pauli label"))),
            })
            .collect::<Result<_>>()
            .map(PauliString)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<(PauliString, f64)>,
    pub beta: Option<f64>,
}

impl PauliDecomposition {
    pub fn coefficient(&self, s: &PauliString) -> f64 {
        self.terms.iter().filter(|(p, _)| p == s).map(|(_, c)| c).sum()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Σ h_P P, keeping the real part (imaginary parts cancel for real symmetric sums).
    pub fn reassemble(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (s, h) in &self.terms {
            for k in 0..dim {
                let (row, phase) = s.apply_to_basis(k);
                m[(row, k)] += h * phase.re;
            }
        }
        m
    }
}

fn qubits_for(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `h_P = Tr(P H) / 2^{n_q}` over all strings, pruning |h| < 1e-14.
pub fn decompose(matrix: &SymMatrix) -> Result<PauliDecomposition> {
    let dim = matrix.dim();
    let nq = qubits_for(dim)?;
    let terms = PauliString::all(nq)
        .filter_map(|s| {
            // Tr(PH) = Σ_k ⟨k'|P|k⟩ H[k][k'] with P|k⟩ = phase |k'⟩
            let tr: Complex64 = (0..dim)
                .map(|k| {
                    let (kp, phase) = s.apply_to_basis(k);
                    phase * matrix.get(k, kp)
                })
                .sum();
            let h = tr.re / dim as f64;
            (h.abs() >= PRUNE).then_some((s, h))
        })
        .collect();
    Ok(PauliDecomposition { n_qubits: nq, terms, beta: None })
}

/// One-qubit (Λ = 2) coefficients of H(β); `h_y` vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coeffs1q {
    pub h_i: f64,
    pub h_x: f64,
    pub h_z: f64,
}

impl Coeffs1q {
    pub fn to_decomposition(self, beta: Option<f64>) -> PauliDecomposition {
        let terms = [("I", self.h_i), ("X", self.h_x), ("Z", self.h_z)]
            .into_iter()
            .map(|(s, h)| (s.parse().expect("valid label"), h))
            .collect();
        PauliDecomposition { n_qubits: 1, terms, beta }
    }
}

/// Coefficients and their β-derivatives.
pub fn coeffs_1q(params: &ModelParams, beta: f64) -> (Coeffs1q, Coeffs1q) {
    let (n, eps, v) = (params.n() as f64, params.epsilon(), params.coupling());
    let (c, s) = (beta.cos(), beta.sin());
    let c2 = (2.0 * beta).cos();
    let value = Coeffs1q {
        h_i: -(n - 1.0) / 4.0 * ((n - 3.0) * v * s * s + 2.0 * eps * c),
        h_x: n.sqrt() / 2.0 * (eps - (n - 1.0) * v * c) * s,
        h_z: -0.25 * (3.0 * (n - 1.0) * v * s * s + 2.0 * eps * c),
    };
    let deriv = Coeffs1q {
        h_i: -(n - 1.0) / 4.0 * (2.0 * (n - 3.0) * v * s * c - 2.0 * eps * s),
        h_x: n.sqrt() / 2.0 * (eps * c - (n - 1.0) * v * c2),
        h_z: -0.25 * (6.0 * (n - 1.0) * v * s * c - 2.0 * eps * s),
    };
    (value, deriv)
}

/// Two-qubit (Λ = 4) coefficients; field names follow the string, e.g. `xz`
/// is X on the high qubit and Z on the low one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coeffs2q {
    pub ii: f64,
    pub xx: f64,
    pub yy: f64,
    pub xz: f64,
    pub xi: f64,
    pub zx: f64,
    pub zz: f64,
    pub zi: f64,
    pub ix: f64,
    pub iz: f64,
}

impl Coeffs2q {
    pub fn to_decomposition(self, beta: Option<f64>) -> PauliDecomposition {
        let named = [
            ("II", self.ii),
            ("XX", self.xx),
            ("YY", self.yy),
            ("XZ", self.xz),
            ("XI", self.xi),
            ("ZX", self.zx),
            ("ZZ", self.zz),
            ("ZI", self.zi),
            ("IX", self.ix),
            ("IZ", self.iz),
        ];
        let terms = named.into_iter().map(|(s, h)| (s.parse().expect("valid label"), h)).collect();
        PauliDecomposition { n_qubits: 2, terms, beta }
    }
}

/// Closed-form two-qubit coefficients and β-derivatives. Requires N ≥ 3.
pub fn coeffs_2q(params: &ModelParams, beta: f64) -> Result<(Coeffs2q, Coeffs2q)> {
    if params.n() < 3 {
        return Err(Error::InvalidParams(format!("two-qubit mapping needs N >= 3, got {}", params.n())));
    }
    let (n, eps, v) = (params.n() as f64, params.epsilon(), params.coupling());
    let (c, s) = (beta.cos(), beta.sin());
    let (c2, s2) = ((2.0 * beta).cos(), (2.0 * beta).sin());
    let rt2 = 2f64.sqrt();
    let w = n.sqrt();
    let r = 3f64.sqrt() * (n - 2.0).sqrt();
    let q = (n - 1.0).sqrt();
    let k_minus = n * w - r * n - w + 5.0 * r;
    let k_plus = n * w + r * n - w - 5.0 * r;

    let xx = q * s * (eps - (n - 3.0) * v * c) / (2.0 * rt2);
    let value = Coeffs2q {
        ii: -0.25 * (n - 3.0) * ((n - 7.0) * v * s * s + 2.0 * eps * c),
        xx,
        yy: xx,
        xz: -(w - r) * q * v * (c2 + 3.0) / (8.0 * rt2),
        xi: -(w + r) * q * v * (c2 + 3.0) / (8.0 * rt2),
        zx: 0.25 * s * (eps * (w - r) - k_minus * v * c),
        zz: -1.5 * v * s * s,
        zi: -1.5 * (n - 3.0) * v * s * s - eps * c,
        ix: 0.25 * s * (eps * (w + r) - k_plus * v * c),
        iz: -0.25 * (3.0 * (n - 3.0) * v * s * s + 2.0 * eps * c),
    };
    let dxx = q * (eps * c - (n - 3.0) * v * c2) / (2.0 * rt2);
    let deriv = Coeffs2q {
        ii: -0.25 * (n - 3.0) * (2.0 * (n - 7.0) * v * s * c - 2.0 * eps * s),
        xx: dxx,
        yy: dxx,
        xz: (w - r) * q * v * s2 / (4.0 * rt2),
        xi: (w + r) * q * v * s2 / (4.0 * rt2),
        zx: 0.25 * (eps * (w - r) * c - k_minus * v * c2),
        zz: -3.0 * v * s * c,
        zi: -3.0 * (n - 3.0) * v * s * c + eps * s,
        ix: 0.25 * (eps * (w + r) * c - k_plus * v * c2),
        iz: -0.25 * (6.0 * (n - 3.0) * v * s * c - 2.0 * eps * s),
    };
    Ok((value, deriv))
}

/// Contracts computational-basis probabilities (measured after the basis
/// rotation for `string`) with the string's ±1 sign vector.
pub fn expectation_from_probs(probs: &[f64], string: &PauliString) -> Result<f64> {
    let nq = qubits_for(probs.len())?;
    if nq != string.width() {
        return Err(Error::DimensionMismatch { expected: nq, got: string.width() });
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(total));
    }
    Ok(probs.iter().enumerate().map(|(k, p)| string.z_sign(k) * p).sum())
}
