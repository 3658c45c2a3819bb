//! Quantum channels as Kraus sets, their Choi states, and
//! stabilizer-preserving classification.
//!
//! The Choi state convention is unit trace:
//! `rho_E = (E tensor I)(|phi+><phi+|)` with the channel output on the
//! low qubits and the reference register on the high qubits, so trace
//! preservation reads `trace_out_low(rho_E) = I/d`.

use crate::doped::{decide_doped_membership, DopedDictionary, DopedVerdict};
use crate::error::{Error, Result};
use crate::membership::{
    extract_witness, project_onto_polytope, Decision, Dictionary,
    MembershipVerdict, WitnessReport, MEMBERSHIP_DISTANCE_TOL,
};
use crate::operator::{DensityMatrix, Matrix};
use crate::scalar::{c, c_zero};
use crate::Scalar;

pub const MAX_CHANNEL_QUBITS_EXACT: usize = 1;

#[derive(Clone, Debug)]
pub struct QuantumChannel<T: Scalar> {
    n_qubits: usize,
    kraus: Vec<Matrix<T>>,
}

impl<T: Scalar> QuantumChannel<T> {
    pub fn new(n_qubits: usize, kraus: Vec<Matrix<T>>) -> Result<Self> {
        let d = 1usize << n_qubits;
        if kraus.is_empty() || kraus.iter().any(|k| k.dim() != d) {
            return Err(Error::Format {
                reason: "kraus operators must be non-empty and d x d".into(),
            });
        }
        let mut sum = Matrix::<T>::zeros(d);
        for k in &kraus {
            sum = sum.add(&k.adjoint().matmul(k));
        }
        let dev = sum.sub(&Matrix::identity(d)).max_abs();
        if dev > 1e-9 {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(QuantumChannel { n_qubits, kraus })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    /// Unitary channel from a single unitary.
    pub fn unitary(n_qubits: usize, u: Matrix<T>) -> Result<Self> {
        QuantumChannel::new(n_qubits, vec![u])
    }

    /// Apply to a density matrix.
    pub fn apply(&self, rho: &Matrix<T>) -> Matrix<T> {
        let mut out = Matrix::zeros(rho.dim());
        for k in &self.kraus {
            out = out.add(&k.matmul(rho).matmul(&k.adjoint()));
        }
        out
    }

    /// Apply `E tensor I` to a state on 2n qubits (channel register low).
    pub fn apply_tensor_identity(&self, rho: &Matrix<T>) -> Matrix<T> {
        let d = 1usize << self.n_qubits;
        assert_eq!(rho.dim(), d * d);
        let mut out = Matrix::zeros(d * d);
        for k in &self.kraus {
            let lifted = Matrix::identity(d).kron(k);
            out = out.add(&lifted.matmul(rho).matmul(&lifted.adjoint()));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ChoiState<T: Scalar> {
    pub state: DensityMatrix<T>,
    /// Recorded normalization convention.
    pub convention: &'static str,
}

/// Choi state of a channel (unit-trace convention).
pub fn choi_state<T: Scalar>(channel: &QuantumChannel<T>) -> Result<ChoiState<T>> {
    let n = channel.n_qubits();
    let d = 1usize << n;
    // |phi+> = sum_i |i>_out |i>_ref / sqrt(d); out = low bits
    let mut amps = vec![c_zero::<T>(); d * d];
    let scale = T::real(1.0 / (d as f64).sqrt());
    for i in 0..d {
        amps[(i << n) | i] = c::<T>(1.0, 0.0) * scale;
    }
    let phi_plus = Matrix::outer(&amps, &amps);
    let rho = channel.apply_tensor_identity(&phi_plus);
    let state = DensityMatrix::new(symmetrize(rho))?;
    // trace preservation: reduced state on the reference register is I/d
    let red = state.matrix().trace_out_low(n);
    let dev = red
        .sub(&Matrix::identity(d).scale(T::real(1.0 / d as f64)))
        .max_abs();
    if dev > 1e-9 {
        return Err(Error::NotTracePreserving { deviation: dev });
    }
    Ok(ChoiState {
        state,
        convention: "unit-trace",
    })
}

fn symmetrize<T: Scalar>(mut m: Matrix<T>) -> Matrix<T> {
    let d = m.dim();
    for r in 0..d {
        for c2 in (r + 1)..d {
            let avg = (m[(r, c2)] + m[(c2, r)].conj()) * T::real(0.5);
            m[(r, c2)] = avg;
            m[(c2, r)] = avg.conj();
        }
        m[(r, r)] = num_complex::Complex::new(m[(r, r)].re, T::zero());
    }
    m
}

#[derive(Debug)]
pub struct ChannelClassification<T: Scalar> {
    pub decision: Decision,
    pub verdict: MembershipVerdict<T>,
    /// Separating witness when the verdict is NO.
    pub witness: Option<WitnessReport<T>>,
}

/// Classify a channel as completely stabilizer preserving by testing its
/// Choi state against the stabilizer polytope on 2n qubits (one-sided
/// membership semantics: Choi states of Clifford channels are vertices
/// of the polytope, so YES means membership, not inner-core depth).
pub fn classify_cspc<T: Scalar>(
    channel: &QuantumChannel<T>,
    eps: f64,
) -> Result<ChannelClassification<T>> {
    if channel.n_qubits() > MAX_CHANNEL_QUBITS_EXACT {
        return Err(Error::SizeCap {
            what: "channel qubits for exact classification",
            requested: channel.n_qubits(),
            cap: MAX_CHANNEL_QUBITS_EXACT,
        });
    }
    let choi = choi_state(channel)?;
    let dict = Dictionary::stabilizer(2 * channel.n_qubits())?;
    let mut verdict = project_onto_polytope(&choi.state, &dict)?;
    let dist = verdict.distance.to_f64_lossy();
    let decision = if dist <= MEMBERSHIP_DISTANCE_TOL {
        Decision::Yes
    } else if dist > eps {
        Decision::No
    } else {
        Decision::PromiseViolated
    };
    verdict.decision = Some(decision);
    let witness = if decision == Decision::No {
        Some(extract_witness(&choi.state, &verdict, &dict)?)
    } else {
        None
    };
    Ok(ChannelClassification {
        decision,
        verdict,
        witness,
    })
}

#[derive(Debug)]
pub struct DopedChannelClassification<T: Scalar> {
    pub decision: Decision,
    pub verdict: DopedVerdict<T>,
}

/// Classify against the doped hull: the Choi state is tested against the
/// net dictionary on 2n qubits, with the usual net-resolution caveats.
pub fn classify_ctdspc<T: Scalar>(
    channel: &QuantumChannel<T>,
    dict: &DopedDictionary<T>,
    eps: f64,
) -> Result<DopedChannelClassification<T>> {
    if channel.n_qubits() > MAX_CHANNEL_QUBITS_EXACT {
        return Err(Error::SizeCap {
            what: "channel qubits for doped classification",
            requested: channel.n_qubits(),
            cap: MAX_CHANNEL_QUBITS_EXACT,
        });
    }
    if dict.n_qubits != 2 * channel.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: dict.n_qubits,
            right: 2 * channel.n_qubits(),
        });
    }
    let choi = choi_state(channel)?;
    let verdict = decide_doped_membership(&choi.state, dict, eps)?;
    Ok(DopedChannelClassification {
        decision: verdict.verdict.decision.unwrap(),
        verdict,
    })
}

/// Standard channels used by tests and the CLI examples.
pub fn t_gate_channel<T: Scalar>() -> QuantumChannel<T> {
    let mut t = Matrix::<T>::zeros(2);
    t[(0, 0)] = c(1.0, 0.0);
    t[(1, 1)] = c(
        std::f64::consts::FRAC_PI_4.cos(),
        std::f64::consts::FRAC_PI_4.sin(),
    );
    QuantumChannel::unitary(1, t).expect("T is unitary")
}

pub fn depolarizing_channel<T: Scalar>(n_qubits: usize) -> QuantumChannel<T> {
    let d = 1usize << n_qubits;
    let scale = T::real(1.0 / d as f64);
    let kraus: Vec<Matrix<T>> = (0..(d * d))
        .map(|idx| {
            crate::pauli::PauliString::from_index(n_qubits, idx)
                .dense::<T>()
                .scale(scale)
        })
        .collect();
    QuantumChannel::new(n_qubits, kraus).expect("depolarizing is a channel")
}

/// Convex mixture (1-w) A + w B of two channels on the same register.
pub fn mix_channels<T: Scalar>(
    a: &QuantumChannel<T>,
    b: &QuantumChannel<T>,
    w: f64,
) -> Result<QuantumChannel<T>> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits(),
            right: b.n_qubits(),
        });
    }
    let mut kraus = Vec::new();
    let sa = T::real((1.0 - w).sqrt());
    let sb = T::real(w.sqrt());
    for k in a.kraus() {
        kraus.push(k.scale(sa));
    }
    for k in b.kraus() {
        kraus.push(k.scale(sb));
    }
    QuantumChannel::new(a.n_qubits(), kraus)
}

/// Bracket the smallest mixing weight (toward channel `b`) at which the
/// classifier flips to YES, by bisection on the Choi polytope distance.
pub fn bisect_yes_threshold<T: Scalar>(
    a: &QuantumChannel<T>,
    b: &QuantumChannel<T>,
    tolerance: f64,
) -> Result<(f64, f64)> {
    let dict = Dictionary::stabilizer(2 * a.n_qubits())?;
    let inside = |w: f64| -> Result<bool> {
        let choi = choi_state(&mix_channels(a, b, w)?)?;
        let v = project_onto_polytope(&choi.state, &dict)?;
        Ok(v.distance.to_f64_lossy() <= MEMBERSHIP_DISTANCE_TOL)
    };
    let mut lo = 0.0f64; // assumed outside
    let mut hi = 1.0f64; // assumed inside
    if inside(lo)? {
        return Ok((0.0, 0.0));
    }
    if !inside(hi)? {
        return Err(Error::Numerical {
            reason: "mixture never enters the polytope".into(),
        });
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
