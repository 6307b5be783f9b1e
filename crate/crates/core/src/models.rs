//! PT- and APT-symmetric qubit Hamiltonians.
//!
//! Single-qubit building blocks:
//!   H_PT  = σx + i a σz           (PT:  P H* P⁻¹ = +H, P = σx)
//!   H_APT = [[b+iθ, iκ−s], [iκ+s, −b+iθ]]   (APT: P H* P⁻¹ = −H)
//!
//! Multi-qubit models are tensor sums Σ_j I⊗…⊗H_j⊗…⊗I with no direct
//! qubit-qubit coupling, so the composite inherits the symmetry of its
//! factors with parity P = σx^{⊗n}.

use std::collections::BTreeMap;

use ndarray::array;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_square_finite, dagger, eye, frobenius_norm, kron, max_abs, CMat};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli σx.
pub fn sigma_x() -> CMat {
    array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

/// Pauli σy.
pub fn sigma_y() -> CMat {
    array![[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
}

/// Pauli σz (|↑⟩ is the +1 eigenstate, basis index 0).
pub fn sigma_z() -> CMat {
    array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

/// σz acting on qubit `j` of an `n`-qubit register.
pub fn sigma_z_on(n: usize, j: usize) -> CMat {
    assert!(j < n);
    let mut out = eye(1);
    for k in 0..n {
        let factor = if k == j { sigma_z() } else { eye(2) };
        out = kron(&out, &factor);
    }
    out
}

/// Parity operator P = σx^{⊗n}.
pub fn parity(n: usize) -> CMat {
    let mut out = eye(1);
    for _ in 0..n {
        out = kron(&out, &sigma_x());
    }
    out
}

/// Symmetry classes detected by [`verify_symmetry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    ParityTime,
    AntiParityTime,
    None,
}

/// Outcome of a symmetry test: the strongest label plus everything that held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub primary: Symmetry,
    pub satisfied: Vec<Symmetry>,
}

/// Classify a matrix by testing H = H†, P H* P⁻¹ = ±H with P = σx^{⊗n},
/// at tolerance 1e-10·‖H‖. Priority: Hermitian > PT > APT > None.
pub fn verify_symmetry(matrix: &CMat) -> SymmetryReport {
    let n_qubits = (matrix.nrows() as f64).log2().round() as usize;
    let p = parity(n_qubits);
    let norm = frobenius_norm(matrix).max(f64::MIN_POSITIVE);
    let tol = 1e-10 * norm;

    let conj = matrix.mapv(|z| z.conj());
    let transformed = p.dot(&conj).dot(&p);

    let mut satisfied = Vec::new();
    if max_abs(&(matrix - &dagger(matrix))) <= tol {
        satisfied.push(Symmetry::Hermitian);
    }
    if max_abs(&(&transformed - matrix)) <= tol {
        satisfied.push(Symmetry::ParityTime);
    }
    if max_abs(&(&transformed + matrix)) <= tol {
        satisfied.push(Symmetry::AntiParityTime);
    }
    let primary = *satisfied.first().unwrap_or(&Symmetry::None);
    SymmetryReport { primary, satisfied }
}

/// A qubit-register Hamiltonian in model units together with its detected
/// symmetry class and the parameters it was built from.
#[derive(Debug, Clone)]
pub struct QubitHamiltonian {
    pub n_qubits: usize,
    pub matrix: CMat,
    pub symmetry: SymmetryReport,
    pub parameters: BTreeMap<String, f64>,
}

impl QubitHamiltonian {
    /// Wrap an explicit matrix; the dimension must be a power of two.
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        check_square_finite(&matrix)?;
        let dim = matrix.nrows();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                found: dim,
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let symmetry = verify_symmetry(&matrix);
        Ok(Self {
            n_qubits,
            matrix,
            symmetry,
            parameters: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn symmetry_label(&self) -> Symmetry {
        self.symmetry.primary
    }
}

/// Single PT-symmetric qubit H = σx + i a σz = [[ia, 1], [1, -ia]].
pub fn build_pt_qubit(a: f64) -> QubitHamiltonian {
    assert!(a.is_finite());
    let matrix = array![[c(0.0, a), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, -a)]];
    let symmetry = verify_symmetry(&matrix);
    let mut parameters = BTreeMap::new();
    parameters.insert("a".to_string(), a);
    QubitHamiltonian {
        n_qubits: 1,
        matrix,
        symmetry,
        parameters,
    }
}

/// Single APT-symmetric qubit in its most general form
/// [[b+iθ, iκ−s], [iκ+s, −b+iθ]].
pub fn build_apt_qubit_general(b: f64, theta: f64, kappa: f64, s: f64) -> QubitHamiltonian {
    assert!(b.is_finite() && theta.is_finite() && kappa.is_finite() && s.is_finite());
    let matrix = array![
        [c(b, theta), c(-s, kappa)],
        [c(s, kappa), c(-b, theta)]
    ];
    let symmetry = verify_symmetry(&matrix);
    let mut parameters = BTreeMap::new();
    parameters.insert("b".to_string(), b);
    parameters.insert("theta".to_string(), theta);
    parameters.insert("kappa".to_string(), kappa);
    parameters.insert("s".to_string(), s);
    QubitHamiltonian {
        n_qubits: 1,
        matrix,
        symmetry,
        parameters,
    }
}

/// Single APT qubit H = i σx + b σz (θ = s = 0, κ = 1).
pub fn build_apt_qubit(b: f64) -> QubitHamiltonian {
    build_apt_qubit_general(b, 0.0, 1.0, 0.0)
}

/// Tensor sum Σ_j I⊗…⊗H_j⊗…⊗I of single-qubit Hamiltonians.
///
/// The symmetry label is re-verified on the composite; matching factors
/// (all PT or all APT) keep their class, mixed lists generally end up `None`.
pub fn build_tensor_sum(locals: &[QubitHamiltonian]) -> Result<QubitHamiltonian> {
    if locals.is_empty() {
        return Err(Error::EmptyTensorSum);
    }
    for h in locals {
        if h.n_qubits != 1 {
            return Err(Error::NotSingleQubit {
                n_qubits: h.n_qubits,
            });
        }
    }
    let n = locals.len();
    let dim = 1usize << n;
    let mut matrix: CMat = ndarray::Array2::zeros((dim, dim));
    for (j, h) in locals.iter().enumerate() {
        let mut term = eye(1);
        for k in 0..n {
            let factor = if k == j { h.matrix.clone() } else { eye(2) };
            term = kron(&term, &factor);
        }
        matrix = matrix + term;
    }
    let symmetry = verify_symmetry(&matrix);
    let mut parameters = BTreeMap::new();
    for (j, h) in locals.iter().enumerate() {
        for (k, v) in &h.parameters {
            parameters.insert(format!("{k}{}", j + 1), *v);
        }
    }
    Ok(QubitHamiltonian {
        n_qubits: n,
        matrix,
        symmetry,
        parameters,
    })
}

/// `n` identical copies of `local` summed into an n-qubit register.
pub fn build_uniform_tensor_sum(local: &QubitHamiltonian, n: usize) -> Result<QubitHamiltonian> {
    let locals: Vec<_> = (0..n).map(|_| local.clone()).collect();
    build_tensor_sum(&locals)
}
