//! Dense complex matrices, Hermitian operators and density matrices.
//!
//! Storage is row-major `Vec<Complex<T>>`; sizes are capped at
//! `d = 2^8 = 256` which keeps everything comfortably dense.

use crate::error::{Error, Result};
use crate::scalar::{c, c_zero, C};
use crate::Scalar;

pub const MAX_DIM: usize = 256;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim.min(8) {
            for col in 0..self.dim.min(8) {
                let v = self[(r, col)];
                write!(f, " {:+.3}{:+.3}i", v.re.to_f64_lossy(), v.im.to_f64_lossy())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.dim + c]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![c_zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Format {
                reason: "matrix rows must form a square".into(),
            });
        }
        Ok(Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C<T>] {
        &self.data
    }

    /// Rank-one projector |v><v| (v need not be normalized).
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        let dim = v.len();
        let mut m = Matrix::zeros(dim);
        for r in 0..dim {
            for col in 0..dim {
                m[(r, col)] = v[r] * w[col].conj();
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix<T>, f: impl Fn(C<T>, C<T>) -> C<T>) -> Matrix<T> {
        assert_eq!(self.dim, other.dim, "matrix dims");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Matrix<T> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C<T>) -> Matrix<T> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Matrix<T>, s: T) {
        assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn adjoint(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.dim);
        for r in 0..self.dim {
            for col in 0..self.dim {
                m[(col, r)] = self[(r, col)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, other.dim, "matrix dims");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self[(r, k)];
                if a == c_zero() {
                    continue;
                }
                for col in 0..d {
                    out[(r, col)] += a * other[(k, col)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C<T>]) -> Vec<C<T>> {
        let d = self.dim;
        let mut out = vec![c_zero(); d];
        for r in 0..d {
            let mut acc = c_zero::<T>();
            let row = &self.data[r * d..(r + 1) * d];
            for (m, &x) in row.iter().zip(v) {
                acc += *m * x;
            }
            out[r] = acc;
        }
        out
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(c_zero(), |a, b| a + b)
    }

    pub fn kron(&self, other: &Matrix<T>) -> Matrix<T> {
        let da = self.dim;
        let db = other.dim;
        let mut out = Matrix::zeros(da * db);
        for ra in 0..da {
            for ca in 0..da {
                let a = self[(ra, ca)];
                if a == c_zero() {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out[(ra * db + rb, ca * db + cb)] = a * other[(rb, cb)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.norm().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for r in 0..self.dim {
            for col in r..self.dim {
                let d = (self[(r, col)] - self[(col, r)].conj()).norm().to_f64_lossy();
                dev = dev.max(d);
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// <psi| M |psi> for a state vector.
    pub fn expectation(&self, amps: &[C<T>]) -> C<T> {
        let d = self.dim;
        debug_assert_eq!(amps.len(), d);
        let mut acc = c_zero::<T>();
        for r in 0..d {
            let row = &self.data[r * d..(r + 1) * d];
            let mut inner = c_zero::<T>();
            for (m, &x) in row.iter().zip(amps) {
                inner += *m * x;
            }
            acc += amps[r].conj() * inner;
        }
        acc
    }

    /// <psi| M |psi> restricted to a sparse support of basis indices.
    pub fn expectation_on_support(&self, support: &[usize], amps: &[C<T>]) -> C<T> {
        let d = self.dim;
        let mut acc = c_zero::<T>();
        for (ai, &r) in support.iter().enumerate() {
            let row = &self.data[r * d..(r + 1) * d];
            let mut inner = c_zero::<T>();
            for (aj, &cidx) in support.iter().enumerate() {
                inner += row[cidx] * amps[aj];
            }
            acc += amps[ai].conj() * inner;
        }
        acc
    }

    /// Frobenius norm, computed entrywise.
    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Eigenvalues of a Hermitian matrix, ascending (cyclic complex Jacobi).
    pub fn eigenvalues_hermitian(&self) -> Vec<T> {
        let d = self.dim;
        let mut a = self.clone();
        // symmetrize away roundoff so the iteration is exactly Hermitian
        for r in 0..d {
            for col in (r + 1)..d {
                let avg = (a[(r, col)] + a[(col, r)].conj()) * T::real(0.5);
                a[(r, col)] = avg;
                a[(col, r)] = avg.conj();
            }
            a[(r, r)] = c(a[(r, r)].re.to_f64_lossy(), 0.0);
        }
        let scale = a.max_abs().max(1e-300);
        let tol = T::real(scale * 1e-15);
        for _sweep in 0..60 {
            let mut off = T::zero();
            for r in 0..d {
                for col in (r + 1)..d {
                    off = off.max(a[(r, col)].norm());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[(p, q)];
                    let r_abs = apq.norm();
                    if r_abs <= tol * T::real(1e-2) {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / r_abs; // e^{i alpha}
                    let theta = T::real(0.5) * (r_abs + r_abs).atan2(app - aqq);
                    let cs = theta.cos();
                    let sn = theta.sin();
                    // J: J_pp = c, J_pq = -s e^{i a}, J_qp = s e^{-i a}, J_qq = c
                    let s_e = phase * sn; // s e^{i alpha}
                    for k in 0..d {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * cs + akq * s_e.conj();
                        a[(k, q)] = akq * cs - akp * s_e;
                    }
                    for k in 0..d {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * cs + aqk * s_e;
                        a[(q, k)] = aqk * cs - apk * s_e.conj();
                    }
                    a[(p, q)] = c_zero();
                    a[(q, p)] = c_zero();
                    a[(p, p)] = c(a[(p, p)].re.to_f64_lossy(), 0.0);
                    a[(q, q)] = c(a[(q, q)].re.to_f64_lossy(), 0.0);
                }
            }
        }
        let mut eigs: Vec<T> = (0..d).map(|i| a[(i, i)].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eigs
    }

    /// Partial trace over the low-order `m` qubits (bit order: qubit j is
    /// bit j of the basis index).
    pub fn trace_out_low(&self, m_qubits: usize) -> Matrix<T> {
        let db = 1usize << m_qubits;
        let da = self.dim / db;
        assert_eq!(da * db, self.dim);
        let mut out = Matrix::zeros(da);
        for ra in 0..da {
            for ca in 0..da {
                let mut acc = c_zero::<T>();
                for k in 0..db {
                    acc += self[(ra * db + k, ca * db + k)];
                }
                out[(ra, ca)] = acc;
            }
        }
        out
    }

    /// Partial trace over the high-order `m` qubits.
    pub fn trace_out_high(&self, m_qubits: usize) -> Matrix<T> {
        let da = 1usize << m_qubits;
        let db = self.dim / da;
        assert_eq!(da * db, self.dim);
        let mut out = Matrix::zeros(db);
        for rb in 0..db {
            for cb in 0..db {
                let mut acc = c_zero::<T>();
                for k in 0..da {
                    acc += self[(k * db + rb, k * db + cb)];
                }
                out[(rb, cb)] = acc;
            }
        }
        out
    }
}

/// Dense Hermitian operator; Hermiticity is enforced at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Scalar> {
    matrix: Matrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if matrix.dim() > MAX_DIM {
            return Err(Error::SizeCap {
                what: "operator dimension",
                requested: matrix.dim(),
                cap: MAX_DIM,
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite {
                context: "hermitian operator entries",
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        HermitianOperator {
            matrix: Matrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: Matrix::identity(dim),
        }
    }

    /// Wrap without the Hermiticity check; for internal constructions that
    /// are Hermitian by algebra.
    pub(crate) fn trusted(matrix: Matrix<T>) -> Self {
        debug_assert!(matrix.hermiticity_deviation() <= 1e-8);
        HermitianOperator { matrix }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOperator {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianOperator {
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.matrix.eigenvalues_hermitian()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    /// <psi| A |psi> (real for Hermitian A).
    pub fn expectation_on_vector(&self, amps: &[C<T>]) -> T {
        self.matrix.expectation(amps).re
    }
}

/// Schatten p-norm of a Hermitian operator for p in {1, 2, inf}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchattenP {
    One,
    Two,
    Infinity,
}

pub fn schatten_norm<T: Scalar>(a: &HermitianOperator<T>, p: SchattenP) -> Result<T> {
    if !a.matrix().is_finite() {
        return Err(Error::NonFinite {
            context: "schatten norm input",
        });
    }
    Ok(match p {
        SchattenP::Two => a.matrix().frobenius_norm(),
        SchattenP::One => a
            .eigenvalues()
            .into_iter()
            .map(|e| e.abs())
            .fold(T::zero(), |x, y| x + y),
        SchattenP::Infinity => a
            .eigenvalues()
            .into_iter()
            .map(|e| e.abs())
            .fold(T::zero(), T::max),
    })
}

/// Hilbert-Schmidt inner product tr(A^dag B); real for Hermitian inputs.
pub fn hs_inner<T: Scalar>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut acc = c_zero::<T>();
    for (x, y) in a.matrix().data().iter().zip(b.matrix().data()) {
        acc += x.conj() * *y;
    }
    Ok(acc.re)
}

/// Density matrix: Hermitian, unit trace, positive semidefinite
/// (within fixed tolerances).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    op: HermitianOperator<T>,
    min_eig: T,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        let tr = op.trace().to_f64_lossy();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotAState {
                reason: format!("trace = {tr}, expected 1"),
            });
        }
        let min_eig = op.min_eigenvalue();
        if min_eig.to_f64_lossy() < -PSD_TOL {
            return Err(Error::NotAState {
                reason: format!("minimum eigenvalue = {}", min_eig.to_f64_lossy()),
            });
        }
        Ok(DensityMatrix { op, min_eig })
    }

    pub fn pure_from_amplitudes(amps: &[C<T>]) -> Result<Self> {
        let norm = amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
            .sqrt();
        if (norm.to_f64_lossy() - 1.0).abs() > 1e-8 {
            return Err(Error::NotAState {
                reason: format!("amplitude norm = {}", norm.to_f64_lossy()),
            });
        }
        let normalized: Vec<C<T>> = amps.iter().map(|&a| a / norm).collect();
        let m = Matrix::outer(&normalized, &normalized);
        Ok(DensityMatrix {
            min_eig: T::zero(),
            op: HermitianOperator::trusted(m),
        })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let m = Matrix::identity(d).scale(T::real(1.0 / d as f64));
        DensityMatrix {
            op: HermitianOperator::trusted(m),
            min_eig: T::real(1.0 / d as f64),
        }
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn matrix(&self) -> &Matrix<T> {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.op.n_qubits()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.min_eig
    }

    pub fn purity(&self) -> T {
        hs_inner(&self.op, &self.op).expect("same dims")
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity().to_f64_lossy() - 1.0).abs() <= tol
    }
}

/// Modified Gram-Schmidt orthonormalization of the columns of `m`.
pub fn orthonormalize_columns<T: Scalar>(m: &mut Matrix<T>) {
    let d = m.dim();
    for j in 0..d {
        for k in 0..j {
            let mut proj = c_zero::<T>();
            for r in 0..d {
                proj += m[(r, k)].conj() * m[(r, j)];
            }
            for r in 0..d {
                let mk = m[(r, k)];
                m[(r, j)] = m[(r, j)] - mk * proj;
            }
        }
        let mut norm = T::zero();
        for r in 0..d {
            norm += m[(r, j)].norm_sqr();
        }
        let norm = norm.sqrt();
        for r in 0..d {
            m[(r, j)] = m[(r, j)] / norm;
        }
    }
}
