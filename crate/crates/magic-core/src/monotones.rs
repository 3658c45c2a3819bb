//! Magic quantifiers: stabilizer Rényi entropy, stabilizer fidelity,
//! robustness of magic (exact LP with a primal-dual certificate), and
//! the net-extended robustness over doped dictionaries.

use crate::doped::DopedDictionary;
use crate::error::{Error, Result};
use crate::lp::solve_l1_exact;
use crate::operator::{DensityMatrix, HermitianOperator, Matrix};
use crate::pauli::PauliString;
use crate::scalar::C;
use crate::stabilizer::enumerate_stabilizer_states;
use crate::Scalar;
use rayon::prelude::*;

pub const MAX_ROBUSTNESS_QUBITS: usize = 3;

/// Stabilizer Rényi entropy of a pure state:
/// `1/(1-alpha) log2 [ (1/d) sum_P tr(P psi)^(2 alpha) ]`.
pub fn stabilizer_renyi_entropy<T: Scalar>(
    psi: &DensityMatrix<T>,
    alpha: f64,
) -> Result<T> {
    if alpha <= 0.0 || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "need alpha > 0 and alpha != 1".into(),
        });
    }
    let purity = psi.purity().to_f64_lossy();
    if purity < 1.0 - 1e-9 {
        return Err(Error::MixedStateInput {
            what: "stabilizer Renyi entropy",
            purity,
        });
    }
    let n = psi.n_qubits();
    let d = psi.dim();
    let mut total = T::zero();
    for idx in 0..(1usize << (2 * n)) {
        let p = PauliString::from_index(n, idx);
        let tr = p.trace_with(psi.matrix())?.re;
        let sq = tr * tr;
        total += sq.powf(T::real(alpha));
    }
    let avg = total / T::real(d as f64);
    Ok(avg.log2() / T::real(1.0 - alpha))
}

/// Stabilizer fidelity `max_sigma |sqrt(sigma) rho sqrt(sigma)|_1`; since
/// the argument is positive semidefinite the trace norm is the trace, so
/// this is the maximum of `<s| rho |s>` over pure stabilizer states.
pub fn stabilizer_fidelity<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    let n = rho.n_qubits();
    let states = enumerate_stabilizer_states::<T>(n)?;
    Ok(states
        .par_iter()
        .map(|s| s.matrix_expectation(rho.matrix()))
        .reduce(|| T::real(f64::NEG_INFINITY), T::max))
}

#[derive(Clone, Debug)]
pub enum DictionaryTag {
    FullStabilizer { n: usize },
    DopedNet { n: usize, t: usize, net_eps: f64 },
}

impl std::fmt::Display for DictionaryTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DictionaryTag::FullStabilizer { n } => write!(f, "stabilizer(n={n})"),
            DictionaryTag::DopedNet { n, t, net_eps } => {
                write!(f, "doped-net(n={n},t={t},eps={net_eps})")
            }
        }
    }
}

/// Optimal l1 decomposition over a state dictionary with both sides of
/// the certificate.
#[derive(Clone, Debug)]
pub struct RobustnessCertificate<T: Scalar> {
    pub value: T,
    /// Sparse signed coefficients, (dictionary index, weight).
    pub primal_coefficients: Vec<(usize, T)>,
    pub dual_witness: HermitianOperator<T>,
    pub dictionary: DictionaryTag,
    /// |primal - dual| objective gap from the LP.
    pub gap: T,
    /// Max reconstruction deviation |rho - sum x_i sigma_i|_2.
    pub reconstruction_error: T,
    /// max_j |tr(W sigma_j)| over the dictionary.
    pub dual_max_abs: T,
}

/// Robustness of magic over the full stabilizer dictionary (n <= 3).
pub fn robustness_of_magic<T: Scalar>(
    rho: &DensityMatrix<T>,
) -> Result<RobustnessCertificate<T>> {
    let n = rho.n_qubits();
    if n > MAX_ROBUSTNESS_QUBITS {
        return Err(Error::SizeCap {
            what: "robustness dictionary qubits",
            requested: n,
            cap: MAX_ROBUSTNESS_QUBITS,
        });
    }
    let states = enumerate_stabilizer_states::<T>(n)?;
    let columns: Vec<Vec<T>> = states
        .par_iter()
        .map(|s| pauli_coordinates_of_state(n, s))
        .collect();
    let dense: Vec<Vec<C<T>>> = states.iter().map(|s| s.amplitudes()).collect();
    robustness_over_columns(
        rho,
        &columns,
        &dense,
        DictionaryTag::FullStabilizer { n },
    )
}

/// Net-extended robustness over a doped dictionary; at t = 0 the
/// dictionary is exactly the stabilizer set and this coincides with
/// [`robustness_of_magic`].
pub fn t_extended_robustness<T: Scalar>(
    rho: &DensityMatrix<T>,
    dict: &DopedDictionary<T>,
) -> Result<RobustnessCertificate<T>> {
    let n = rho.n_qubits();
    if n != dict.n_qubits {
        return Err(Error::DimensionMismatch {
            left: n,
            right: dict.n_qubits,
        });
    }
    let columns: Vec<Vec<T>> = dict
        .members
        .par_iter()
        .map(|amps| pauli_coordinates_of_vector(n, amps))
        .collect();
    // the equality constraints need the dictionary to span operator space
    let rank = column_rank(&columns, 1 << (2 * n));
    if rank < 1 << (2 * n) {
        return Err(Error::RankDeficientDictionary {
            rank,
            needed: 1 << (2 * n),
        });
    }
    robustness_over_columns(
        rho,
        &columns,
        &dict.members,
        DictionaryTag::DopedNet {
            n,
            t: dict.t,
            net_eps: dict.net_eps,
        },
    )
}

/// Pauli coordinates tr(P_i sigma)/sqrt(d) of a stabilizer state.
fn pauli_coordinates_of_state<T: Scalar>(
    n: usize,
    state: &crate::stabilizer::StabilizerState<T>,
) -> Vec<T> {
    let scale = T::real(1.0 / (1u64 << n) as f64).sqrt();
    (0..(1usize << (2 * n)))
        .map(|idx| state.pauli_expectation(&PauliString::from_index(n, idx)).re * scale)
        .collect()
}

fn pauli_coordinates_of_vector<T: Scalar>(n: usize, amps: &[C<T>]) -> Vec<T> {
    let scale = T::real(1.0 / (1u64 << n) as f64).sqrt();
    (0..(1usize << (2 * n)))
        .map(|idx| {
            PauliString::from_index(n, idx)
                .expectation_on_vector(amps)
                .re
                * scale
        })
        .collect()
}

fn pauli_coordinates_of_matrix<T: Scalar>(n: usize, m: &Matrix<T>) -> Vec<T> {
    let scale = T::real(1.0 / (1u64 << n) as f64).sqrt();
    (0..(1usize << (2 * n)))
        .map(|idx| {
            PauliString::from_index(n, idx)
                .trace_with(m)
                .expect("matching dims")
                .re
                * scale
        })
        .collect()
}

fn column_rank<T: Scalar>(columns: &[Vec<T>], rows: usize) -> usize {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for col in columns {
        let mut v = col.clone();
        for b in &basis {
            // eliminate against the pivot of b
            let pivot = b
                .iter()
                .enumerate()
                .max_by(|a, c| a.1.abs().partial_cmp(&c.1.abs()).unwrap())
                .map(|(i, _)| i)
                .unwrap();
            let f = v[pivot] / b[pivot];
            if f != T::zero() {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= f * *bi;
                }
            }
        }
        let norm = v.iter().map(|x| *x * *x).fold(T::zero(), |a, b| a + b).sqrt();
        if norm.to_f64_lossy() > 1e-9 {
            basis.push(v);
            if basis.len() == rows {
                break;
            }
        }
    }
    basis.len()
}

fn robustness_over_columns<T: Scalar>(
    rho: &DensityMatrix<T>,
    columns: &[Vec<T>],
    dense_members: &[Vec<C<T>>],
    dictionary: DictionaryTag,
) -> Result<RobustnessCertificate<T>> {
    let n = rho.n_qubits();
    let b = pauli_coordinates_of_matrix(n, rho.matrix());
    let (signed, sol) = solve_l1_exact(columns, &b)?;
    let primal: Vec<(usize, T)> = signed
        .iter()
        .enumerate()
        .filter(|(_, &x)| x.abs().to_f64_lossy() > 1e-12)
        .map(|(i, &x)| (i, x))
        .collect();
    // dual witness W = sum_i y_i P_i / sqrt(d)
    let d = rho.dim();
    let scale = T::real(1.0 / (d as f64).sqrt());
    let mut wm = Matrix::<T>::zeros(d);
    for (idx, &y) in sol.dual.iter().enumerate() {
        if y.abs().to_f64_lossy() < 1e-15 {
            continue;
        }
        let p = PauliString::from_index(n, idx);
        for col in 0..d {
            let (row, phase) = p.column_action(col);
            wm[(row, col)] += crate::scalar::i_pow::<T>(phase) * (y * scale);
        }
    }
    let dual_witness = HermitianOperator::new(wm)?;
    // reconstruction check
    let mut recon = Matrix::<T>::zeros(d);
    for &(i, x) in &primal {
        let amps = &dense_members[i];
        for r in 0..d {
            if amps[r].norm().to_f64_lossy() < 1e-15 {
                continue;
            }
            for col in 0..d {
                recon[(r, col)] += amps[r] * amps[col].conj() * x;
            }
        }
    }
    let reconstruction_error = recon.sub(rho.matrix()).frobenius_norm();
    let dual_max_abs = dense_members
        .par_iter()
        .map(|amps| dual_witness.expectation_on_vector(amps).abs())
        .reduce(|| T::zero(), T::max);
    Ok(RobustnessCertificate {
        value: sol.value,
        primal_coefficients: primal,
        dual_witness,
        dictionary,
        gap: sol.gap,
        reconstruction_error,
        dual_max_abs,
    })
}
