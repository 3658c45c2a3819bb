//! Pauli strings in binary-symplectic form with exact phase tracking.
//!
//! A [`PauliString`] is `i^phase_exp * W(x, z)` where `W(x, z)` is the
//! tensor product over qubits of `I`, `X`, `Z`, `Y` selected by the bit
//! pair `(x_j, z_j)` (with `Y` for `(1, 1)`). In this convention `W` is
//! always Hermitian, so the string is Hermitian exactly when
//! `phase_exp` is even. Products are computed in integer arithmetic
//! mod 4; no floating point is involved until [`PauliString::dense`].

use crate::error::{Error, Result};
use crate::operator::Matrix;
use crate::scalar::{c_zero, i_pow, C};
use crate::Scalar;

pub const MAX_QUBITS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n_qubits: usize,
    x_bits: u32,
    z_bits: u32,
    phase_exp: u8,
}

impl PauliString {
    pub fn new(n_qubits: usize, x_bits: u32, z_bits: u32, phase_exp: u8) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::SizeCap {
                what: "pauli string qubits",
                requested: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        let mask = (1u32 << n_qubits) - 1;
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::InvalidParameter {
                name: "x_bits/z_bits",
                reason: format!("bits do not fit in {n_qubits} qubits"),
            });
        }
        Ok(PauliString {
            n_qubits,
            x_bits,
            z_bits,
            phase_exp: phase_exp % 4,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString::new(n_qubits, 0, 0, 0).expect("identity")
    }

    /// Unsigned Pauli from its index in `0..4^n` (x bits low, z bits high).
    pub fn from_index(n_qubits: usize, index: usize) -> Self {
        let x = (index as u32) & ((1 << n_qubits) - 1);
        let z = (index as u32) >> n_qubits;
        PauliString::new(n_qubits, x, z, 0).expect("index in range")
    }

    /// Parse e.g. "+XZI", "-iYY", "ZZ".
    pub fn parse(text: &str) -> Result<Self> {
        let mut rest = text.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix("+i") {
            phase = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("-i") {
            phase = 3;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('i') {
            phase = 1;
            rest = r;
        }
        let n = rest.len();
        let mut x = 0u32;
        let mut z = 0u32;
        for (j, ch) in rest.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << j,
                'Z' => z |= 1 << j,
                'Y' => {
                    x |= 1 << j;
                    z |= 1 << j;
                }
                other => {
                    return Err(Error::Format {
                        reason: format!("invalid pauli letter '{other}'"),
                    })
                }
            }
        }
        PauliString::new(n, x, z, phase)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn x_bits(&self) -> u32 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u32 {
        self.z_bits
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_exp % 2 == 0
    }

    /// Flip the sign (multiply by -1).
    pub fn negated(&self) -> Self {
        PauliString {
            phase_exp: (self.phase_exp + 2) % 4,
            ..*self
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let sym = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        sym % 2 == 0
    }

    /// Exact product with phase tracked mod 4.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        // Per-qubit phase of W(x1,z1) W(x2,z2) = i^eps W(x1^x2, z1^z2).
        let mut eps = 0u32;
        for j in 0..self.n_qubits {
            let a = (((self.x_bits >> j) & 1) as u8, ((self.z_bits >> j) & 1) as u8);
            let b = (((other.x_bits >> j) & 1) as u8, ((other.z_bits >> j) & 1) as u8);
            eps += single_qubit_phase(a, b) as u32;
        }
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x_bits: self.x_bits ^ other.x_bits,
            z_bits: self.z_bits ^ other.z_bits,
            phase_exp: ((self.phase_exp as u32 + other.phase_exp as u32 + eps) % 4) as u8,
        })
    }

    /// Scalar phase picked up when this string acts on basis state `|col>`,
    /// together with the image basis index: `P |col> = phase * |col ^ x>`.
    pub fn column_action(&self, col: usize) -> (usize, u8) {
        let y_count = (self.x_bits & self.z_bits).count_ones();
        let sign = ((self.z_bits & col as u32).count_ones() % 2) as u8;
        let phase = (self.phase_exp as u32 + y_count + 2 * sign as u32) % 4;
        ((col ^ self.x_bits as usize), phase as u8)
    }

    /// Dense matrix representation.
    pub fn dense<T: Scalar>(&self) -> Matrix<T> {
        let d = self.dim();
        let mut m = Matrix::zeros(d);
        for col in 0..d {
            let (row, phase) = self.column_action(col);
            m[(row, col)] = i_pow::<T>(phase);
        }
        m
    }

    /// tr(P rho) for a dense matrix rho, in O(d).
    pub fn trace_with<T: Scalar>(&self, rho: &Matrix<T>) -> Result<C<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rho.dim(),
            });
        }
        let mut acc = c_zero::<T>();
        for col in 0..rho.dim() {
            let (row, phase) = self.column_action(col);
            acc += i_pow::<T>(phase) * rho[(col, row)];
        }
        Ok(acc)
    }

    /// <psi| P |psi> for a state vector, in O(d).
    pub fn expectation_on_vector<T: Scalar>(&self, amps: &[C<T>]) -> C<T> {
        debug_assert_eq!(amps.len(), self.dim());
        let mut acc = c_zero::<T>();
        for col in 0..amps.len() {
            let (row, phase) = self.column_action(col);
            acc += amps[row].conj() * i_pow::<T>(phase) * amps[col];
        }
        acc
    }

    /// String form like "+XZI" ("+i"/"-i" prefixes for odd phases).
    pub fn to_text(&self) -> String {
        let prefix = match self.phase_exp {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        let mut s = String::from(prefix);
        for j in 0..self.n_qubits {
            let x = (self.x_bits >> j) & 1;
            let z = (self.z_bits >> j) & 1;
            s.push(match (x, z) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            });
        }
        s
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Phase exponent eps of sigma_a sigma_b = i^eps sigma_c for single-qubit
/// Paulis encoded as (x, z) bits.
fn single_qubit_phase(a: (u8, u8), b: (u8, u8)) -> u8 {
    const I: (u8, u8) = (0, 0);
    const X: (u8, u8) = (1, 0);
    const Z: (u8, u8) = (0, 1);
    const Y: (u8, u8) = (1, 1);
    match (a, b) {
        (I, _) | (_, I) => 0,
        (X, X) | (Y, Y) | (Z, Z) => 0,
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => 3,
        _ => unreachable!(),
    }
}

/// tr(P rho) as a real number for Hermitian P and Hermitian rho.
pub fn pauli_expectation<T: Scalar>(
    p: &PauliString,
    rho: &crate::operator::DensityMatrix<T>,
) -> Result<T> {
    let v = p.trace_with(rho.matrix())?;
    Ok(v.re)
}
