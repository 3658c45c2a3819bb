//! Clifford groups on 1 and 2 qubits, materialized as dense unitaries by
//! breadth-first closure over {H, S, CNOT} with deduplication modulo
//! global phase. Group orders are asserted (24 and 11520).

use crate::error::{Error, Result};
use crate::operator::Matrix;
use crate::scalar::{c, C};
use crate::Scalar;
use std::collections::HashSet;

pub const MAX_CLIFFORD_QUBITS: usize = 2;

fn hadamard<T: Scalar>() -> Matrix<T> {
    let s = 1.0 / std::f64::consts::SQRT_2;
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = c(s, 0.0);
    m[(0, 1)] = c(s, 0.0);
    m[(1, 0)] = c(s, 0.0);
    m[(1, 1)] = c(-s, 0.0);
    m
}

fn phase_gate<T: Scalar>() -> Matrix<T> {
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = c(0.0, 1.0);
    m
}

/// Single-qubit gate lifted to `n` qubits at position `qubit` (bit order:
/// qubit j is bit j of the basis index).
pub fn lift_single<T: Scalar>(gate: &Matrix<T>, qubit: usize, n: usize) -> Matrix<T> {
    let d = 1usize << n;
    let mut out = Matrix::zeros(d);
    for col in 0..d {
        let cb = (col >> qubit) & 1;
        for rb in 0..2 {
            let row = (col & !(1 << qubit)) | (rb << qubit);
            out[(row, col)] = gate[(rb, cb)];
        }
    }
    out
}

/// CNOT with given control and target on `n` qubits.
pub fn cnot<T: Scalar>(control: usize, target: usize, n: usize) -> Matrix<T> {
    let d = 1usize << n;
    let mut out = Matrix::zeros(d);
    for col in 0..d {
        let row = if (col >> control) & 1 == 1 {
            col ^ (1 << target)
        } else {
            col
        };
        out[(row, col)] = c(1.0, 0.0);
    }
    out
}

fn canonical_key<T: Scalar>(m: &Matrix<T>) -> Vec<(i64, i64)> {
    let first = m
        .data()
        .iter()
        .find(|v| v.norm().to_f64_lossy() > 1e-8)
        .expect("unitary has a nonzero entry");
    let phase = *first / first.norm();
    m.data()
        .iter()
        .map(|&v| {
            let w = v * phase.conj();
            (
                (w.re.to_f64_lossy() * 1e6).round() as i64,
                (w.im.to_f64_lossy() * 1e6).round() as i64,
            )
        })
        .collect()
}

/// All Clifford unitaries on `n <= 2` qubits, modulo global phase.
pub fn clifford_group<T: Scalar>(n: usize) -> Result<Vec<Matrix<T>>> {
    if n == 0 || n > MAX_CLIFFORD_QUBITS {
        return Err(Error::SizeCap {
            what: "clifford group qubits",
            requested: n,
            cap: MAX_CLIFFORD_QUBITS,
        });
    }
    let mut generators: Vec<Matrix<T>> = Vec::new();
    for q in 0..n {
        generators.push(lift_single(&hadamard(), q, n));
        generators.push(lift_single(&phase_gate(), q, n));
    }
    if n == 2 {
        generators.push(cnot(0, 1, n));
        generators.push(cnot(1, 0, n));
    }
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    let mut elements: Vec<Matrix<T>> = Vec::new();
    let identity = Matrix::identity(1 << n);
    seen.insert(canonical_key(&identity));
    elements.push(identity);
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in &generators {
            let next = g.matmul(&current);
            let key = canonical_key(&next);
            if seen.insert(key) {
                elements.push(next);
            }
        }
    }
    let expected = match n {
        1 => 24,
        2 => 11520,
        _ => unreachable!(),
    };
    if elements.len() != expected {
        return Err(Error::Numerical {
            reason: format!(
                "clifford closure found {} elements, expected {expected}",
                elements.len()
            ),
        });
    }
    Ok(elements)
}

/// Apply a unitary to a state vector.
pub fn apply_unitary<T: Scalar>(u: &Matrix<T>, amps: &[C<T>]) -> Vec<C<T>> {
    u.matvec(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng_for;
    use crate::stabilizer::{enumerate_stabilizer_states, canonical_amplitude_key};
    use rand::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn group_orders() {
        assert_eq!(clifford_group::<f64>(1).unwrap().len(), 24);
        assert_eq!(clifford_group::<f64>(2).unwrap().len(), 11520);
    }

    #[test]
    fn elements_are_unitary() {
        let group = clifford_group::<f64>(1).unwrap();
        for u in &group {
            let prod = u.adjoint().matmul(u);
            assert!(prod.sub(&Matrix::identity(2)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn cliffords_permute_stabilizer_states() {
        let states = enumerate_stabilizer_states::<f64>(1).unwrap();
        let keys: HashSet<_> = states.iter().map(|s| s.canonical_key()).collect();
        let group = clifford_group::<f64>(1).unwrap();
        let mut rng = rng_for(9, 0);
        for _ in 0..30 {
            let u = group.choose(&mut rng).unwrap();
            let st = states.choose(&mut rng).unwrap();
            let image = apply_unitary(u, &st.amplitudes());
            let support: Vec<usize> = (0..2).filter(|&i| image[i].norm() > 1e-9).collect();
            let amps: Vec<_> = support.iter().map(|&i| image[i]).collect();
            let key = canonical_amplitude_key::<f64>(1, &support, &amps);
            assert!(keys.contains(&key), "clifford image left the stabilizer set");
        }
    }
}
