//! Seeded randomness helpers: Haar-random pure states, Ginibre-random
//! density matrices, random unitaries.

use crate::operator::{orthonormalize_columns, DensityMatrix, Matrix};
use crate::scalar::{c_zero, C};
use crate::Scalar;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Deterministic RNG from a u64 seed plus a stream index, so partitioned
/// parallel scans are reproducible regardless of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&stream.to_le_bytes());
    ChaCha12Rng::from_seed(bytes)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_complex_gaussian<T: Scalar>(rng: &mut impl Rng) -> C<T> {
    C::new(T::real(gaussian(rng)), T::real(gaussian(rng)))
}

/// Haar-random pure state vector of dimension `dim`.
pub fn haar_state<T: Scalar>(dim: usize, rng: &mut impl Rng) -> Vec<C<T>> {
    let mut v: Vec<C<T>> = (0..dim).map(|_| random_complex_gaussian(rng)).collect();
    let norm = v
        .iter()
        .map(|a| a.norm_sqr())
        .fold(T::zero(), |x, y| x + y)
        .sqrt();
    for a in &mut v {
        *a = *a / norm;
    }
    v
}

/// Hilbert-Schmidt-random density matrix (normalized Ginibre G G^dag).
pub fn ginibre_density<T: Scalar>(dim: usize, rng: &mut impl Rng) -> DensityMatrix<T> {
    let mut g = Matrix::<T>::zeros(dim);
    for r in 0..dim {
        for col in 0..dim {
            g[(r, col)] = random_complex_gaussian(rng);
        }
    }
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    let mut m = gg.scale(T::one() / tr);
    // symmetrize roundoff
    for r in 0..dim {
        for col in (r + 1)..dim {
            let avg = (m[(r, col)] + m[(col, r)].conj()) * T::real(0.5);
            m[(r, col)] = avg;
            m[(col, r)] = avg.conj();
        }
        m[(r, r)] = C::new(m[(r, r)].re, T::zero());
    }
    DensityMatrix::new(m).expect("ginibre state is a state")
}

/// Haar-ish random unitary from QR-orthonormalized Gaussian matrix.
pub fn random_unitary<T: Scalar>(dim: usize, rng: &mut impl Rng) -> Matrix<T> {
    let mut g = Matrix::<T>::zeros(dim);
    for r in 0..dim {
        for col in 0..dim {
            g[(r, col)] = random_complex_gaussian(rng);
        }
    }
    orthonormalize_columns(&mut g);
    g
}

/// Pure density matrix from amplitudes (panics on non-normalizable input).
pub fn pure_state<T: Scalar>(amps: &[C<T>]) -> DensityMatrix<T> {
    let norm = amps
        .iter()
        .map(|a| a.norm_sqr())
        .fold(T::zero(), |x, y| x + y)
        .sqrt();
    let v: Vec<C<T>> = amps.iter().map(|&a| a / norm).collect();
    DensityMatrix::pure_from_amplitudes(&v).expect("normalized")
}

/// |T> = (|0> + e^{i pi/4} |1>)/sqrt(2), the canonical single-qubit magic state.
pub fn t_state_amplitudes<T: Scalar>() -> Vec<C<T>> {
    let s = T::real(1.0 / std::f64::consts::SQRT_2);
    let phase = C::new(
        T::real(std::f64::consts::FRAC_PI_4.cos()),
        T::real(std::f64::consts::FRAC_PI_4.sin()),
    );
    vec![C::new(s, T::zero()), phase * s]
}

/// Random Kraus set from a QR-orthonormalized Gaussian block matrix:
/// stacking the k Kraus operators of a d-dim channel gives a (k d) x d
/// isometry, which is exactly a block of orthonormal columns.
pub fn orthonormal_kraus_set<T: Scalar>(
    n_qubits: usize,
    k: usize,
    rng: &mut impl Rng,
) -> Vec<Matrix<T>> {
    let d = 1usize << n_qubits;
    let big = k * d;
    let u = {
        let mut g = Matrix::<T>::zeros(big);
        for r in 0..big {
            for col in 0..big {
                g[(r, col)] = random_complex_gaussian(rng);
            }
        }
        orthonormalize_columns(&mut g);
        g
    };
    (0..k)
        .map(|blk| {
            let mut kr = Matrix::<T>::zeros(d);
            for r in 0..d {
                for col in 0..d {
                    kr[(r, col)] = u[(blk * d + r, col)];
                }
            }
            kr
        })
        .collect()
}

/// Tensor product of two state vectors; `low` occupies the low-order
/// qubits of the combined index, `high` the high-order ones.
pub fn tensor<T: Scalar>(low: &[C<T>], high: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![c_zero::<T>(); low.len() * high.len()];
    for (j, &hj) in high.iter().enumerate() {
        for (i, &li) in low.iter().enumerate() {
            out[j * low.len() + i] = li * hj;
        }
    }
    out
}
