//! Dictionaries for states prepared from a bounded number of
//! non-Clifford qubits: a state is `t`-doped when some Clifford maps it
//! to (seed on the low `t` qubits) tensor |0...0>. Dictionaries are the
//! Clifford orbit of a packing net of `t`-qubit seeds; membership
//! verdicts against the net hull carry explicit net-resolution caveats.

use crate::clifford::{apply_unitary, clifford_group};
use crate::error::{Error, Result};
use crate::membership::{project_onto_polytope, Decision, Dictionary, MembershipVerdict};
use crate::operator::DensityMatrix;
use crate::pauli::PauliString;
use crate::sampling::{haar_state, tensor};
use crate::scalar::{c, C};
use crate::stabilizer::{canonical_amplitude_key, enumerate_stabilizer_states};
use crate::Scalar;
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashSet;

pub const MAX_DOPED_QUBITS: usize = 2;
pub const MAX_DOPING_LEVEL: usize = 2;

/// Trace distance between pure states: sqrt(1 - |<a|b>|^2).
pub fn pure_trace_distance<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> f64 {
    let mut ip = crate::scalar::c_zero::<T>();
    for (x, y) in a.iter().zip(b) {
        ip += x.conj() * *y;
    }
    let fid = ip.norm_sqr().to_f64_lossy().min(1.0);
    (1.0 - fid).sqrt()
}

/// Packing net over pure `t`-qubit states: pairwise trace distance
/// strictly above `net_eps`; `seeds` are kept first so callers can pin
/// specific states into the net.
pub fn packing_net<T: Scalar>(
    t: usize,
    net_eps: f64,
    seeds: &[Vec<C<T>>],
    rng: &mut impl Rng,
) -> Result<Vec<Vec<C<T>>>> {
    if net_eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "net_eps",
            reason: "must be positive".into(),
        });
    }
    if t == 0 || t > MAX_DOPING_LEVEL {
        return Err(Error::SizeCap {
            what: "net seed qubits",
            requested: t,
            cap: MAX_DOPING_LEVEL,
        });
    }
    let mut candidates: Vec<Vec<C<T>>> = seeds.to_vec();
    if t == 1 {
        // Fibonacci lattice on the Bloch sphere
        let count = ((16.0 / (net_eps * net_eps)).ceil() as usize).clamp(128, 4096);
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        for i in 0..count {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let phi = golden * i as f64;
            let theta_half = (z.acos()) / 2.0;
            let amp0 = theta_half.cos();
            let amp1 = theta_half.sin();
            candidates.push(vec![
                c::<T>(amp0, 0.0),
                c::<T>(amp1 * phi.cos(), amp1 * phi.sin()),
            ]);
        }
    } else {
        let count = (64.0 / net_eps.powi(4)).ceil().min(20000.0) as usize;
        for _ in 0..count.max(512) {
            candidates.push(haar_state(1 << t, rng));
        }
    }
    let mut kept: Vec<Vec<C<T>>> = Vec::new();
    for cand in candidates {
        if kept
            .iter()
            .all(|k| pure_trace_distance(k, &cand) > net_eps)
        {
            kept.push(cand);
        }
    }
    Ok(kept)
}

/// Largest gap between a probe of the pure-state manifold and the net
/// (a measured covering radius in trace distance).
pub fn measured_covering_radius<T: Scalar>(
    net: &[Vec<C<T>>],
    t: usize,
    probes: usize,
    rng: &mut impl Rng,
) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let probe = haar_state::<T>(1 << t, rng);
        let nearest = net
            .iter()
            .map(|m| pure_trace_distance(m, &probe))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    worst
}

#[derive(Clone, Debug)]
pub struct DopedDictionary<T: Scalar> {
    pub n_qubits: usize,
    pub t: usize,
    pub net_eps: f64,
    /// Orbit members as dense amplitude vectors, deduplicated up to
    /// global phase.
    pub members: Vec<Vec<C<T>>>,
    /// The net seeds the orbit was built from.
    pub net_seeds: Vec<Vec<C<T>>>,
    /// Measured covering radius of the seed net (trace distance).
    pub net_covering: f64,
}

impl<T: Scalar> DopedDictionary<T> {
    /// Packing-number bound `2^(2n^2+3n) (3/eps)^(4^t)` on the orbit size.
    pub fn cardinality_bound(&self) -> f64 {
        let n = self.n_qubits as f64;
        2f64.powf(2.0 * n * n + 3.0 * n) * (3.0 / self.net_eps).powf(4f64.powi(self.t as i32))
    }

    pub fn as_membership_dictionary(&self) -> Dictionary<T> {
        Dictionary::from_dense_states(
            1 << self.n_qubits,
            &self.members,
            format!("doped(n={},t={},eps={})", self.n_qubits, self.t, self.net_eps),
        )
    }
}

/// Build the dictionary: Clifford orbit of (net seed on low t qubits)
/// tensor |0...0>. At t = 0 this is exactly the stabilizer set.
pub fn build_doped_dictionary<T: Scalar>(
    n: usize,
    t: usize,
    net_eps: f64,
    extra_seeds: &[Vec<C<T>>],
    rng: &mut impl Rng,
) -> Result<DopedDictionary<T>> {
    if n == 0 || n > MAX_DOPED_QUBITS {
        return Err(Error::SizeCap {
            what: "doped dictionary qubits",
            requested: n,
            cap: MAX_DOPED_QUBITS,
        });
    }
    if t > n {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("doping level {t} exceeds qubit count {n}"),
        });
    }
    if t == 0 {
        let members: Vec<Vec<C<T>>> = enumerate_stabilizer_states::<T>(n)?
            .iter()
            .map(|s| s.amplitudes())
            .collect();
        return Ok(DopedDictionary {
            n_qubits: n,
            t,
            net_eps,
            members,
            net_seeds: vec![],
            net_covering: 0.0,
        });
    }
    // the |0...0> seed always goes first: its orbit is the full
    // stabilizer set, so level-0 states stay inside the net hull
    let mut seeds: Vec<Vec<C<T>>> = Vec::with_capacity(extra_seeds.len() + 1);
    let mut zero_seed = vec![crate::scalar::c_zero::<T>(); 1 << t];
    zero_seed[0] = c(1.0, 0.0);
    seeds.push(zero_seed);
    seeds.extend_from_slice(extra_seeds);
    let net = packing_net(t, net_eps, &seeds, rng)?;
    let net_covering = measured_covering_radius(&net, t, 2000, rng);
    let group = clifford_group::<T>(n)?;
    let pad_dim = 1usize << (n - t);
    let mut padded: Vec<Vec<C<T>>> = Vec::with_capacity(net.len());
    for seed in &net {
        let mut pad = vec![crate::scalar::c_zero::<T>(); pad_dim];
        pad[0] = c(1.0, 0.0);
        padded.push(tensor(seed, &pad));
    }
    let mut seen: HashSet<Vec<(usize, i64, i64)>> = HashSet::new();
    let mut members: Vec<Vec<C<T>>> = Vec::new();
    // orbit generation is the hot loop: parallelize over the group and
    // dedup serially
    let images: Vec<Vec<Vec<C<T>>>> = group
        .par_iter()
        .map(|u| padded.iter().map(|p| apply_unitary(u, p)).collect())
        .collect();
    for batch in images {
        for amps in batch {
            let support: Vec<usize> = (0..amps.len())
                .filter(|&i| amps[i].norm().to_f64_lossy() > 1e-9)
                .collect();
            let sup_amps: Vec<C<T>> = support.iter().map(|&i| amps[i]).collect();
            if seen.insert(canonical_amplitude_key(n, &support, &sup_amps)) {
                members.push(amps);
            }
        }
    }
    let dict = DopedDictionary {
        n_qubits: n,
        t,
        net_eps,
        members,
        net_seeds: net,
        net_covering,
    };
    debug_assert!((dict.members.len() as f64) <= dict.cardinality_bound());
    Ok(dict)
}

/// Membership verdict against the doped net hull. YES certifies
/// membership in the true doped hull (the net is a subset of it); NO is
/// certified only up to the net resolution, reported as
/// `certified_margin = distance - sqrt(2) * covering`.
#[derive(Clone, Debug)]
pub struct DopedVerdict<T: Scalar> {
    pub verdict: MembershipVerdict<T>,
    /// Margin of exclusion from the continuous doped hull; positive only
    /// when the net is fine enough to certify exclusion.
    pub certified_margin: f64,
    pub net_covering: f64,
}

pub fn decide_doped_membership<T: Scalar>(
    rho: &DensityMatrix<T>,
    dict: &DopedDictionary<T>,
    eps: f64,
) -> Result<DopedVerdict<T>> {
    let mdict = dict.as_membership_dictionary();
    let mut verdict = project_onto_polytope(rho, &mdict)?;
    let dist = verdict.distance.to_f64_lossy();
    // Frobenius distance between pure states is sqrt(2) x trace distance
    let coarseness = std::f64::consts::SQRT_2 * dict.net_covering;
    verdict.decision = Some(if dist <= crate::membership::MEMBERSHIP_DISTANCE_TOL {
        Decision::Yes
    } else if dist > eps {
        Decision::No
    } else {
        Decision::PromiseViolated
    });
    Ok(DopedVerdict {
        certified_margin: dist - coarseness,
        net_covering: dict.net_covering,
        verdict,
    })
}

/// Exact doping level of a pure state: `n - log2 |{P : <P> = +-1}|`.
/// A state is t-doped iff its level is at most t.
pub fn doped_level<T: Scalar>(n: usize, amps: &[C<T>]) -> usize {
    let mut stabilizer_dim = 0usize;
    for idx in 0..(1usize << (2 * n)) {
        let p = PauliString::from_index(n, idx);
        let v = p.expectation_on_vector(amps).norm().to_f64_lossy();
        if (v - 1.0).abs() < 1e-6 {
            stabilizer_dim += 1;
        }
    }
    debug_assert!(stabilizer_dim.is_power_of_two());
    n - (stabilizer_dim.trailing_zeros() as usize)
}

/// Closure report for projecting / tracing out a stabilizer subsystem of
/// a doped state (the last `m` qubits, high bit positions).
#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// Doping level of the normalized projected state, if the projection
    /// has nonzero norm.
    pub projected_level: Option<usize>,
    pub projected_norm: f64,
    /// Distance of the projected state to the hull of the dictionary
    /// augmented with the exact projected pieces.
    pub projected_hull_distance: f64,
    /// Doping levels of the partial-trace branches with nonzero weight.
    pub branch_levels: Vec<usize>,
    /// Distance of the reduced state to the hull of dictionary + branches.
    pub reduced_hull_distance: f64,
    /// Diagnostic: distance of the reduced state to the bare net hull.
    pub reduced_net_distance: f64,
    pub passes: bool,
}

/// Verify that projecting the last `m` qubits of `psi` onto a stabilizer
/// state, and tracing them out, stays within the t-doped hull.
pub fn check_doped_closure<T: Scalar>(
    psi: &[C<T>],
    n_keep: usize,
    stab: &crate::stabilizer::StabilizerState<T>,
    t: usize,
    dict: &DopedDictionary<T>,
) -> Result<ClosureReport> {
    let m = stab.n_qubits();
    if psi.len() != 1 << (n_keep + m) {
        return Err(Error::DimensionMismatch {
            left: psi.len(),
            right: 1 << (n_keep + m),
        });
    }
    let keep_dim = 1usize << n_keep;
    let phi = stab.amplitudes();
    // v[i] = sum_j conj(phi_j) psi[(j << n_keep) | i]
    let mut v = vec![crate::scalar::c_zero::<T>(); keep_dim];
    for j in 0..phi.len() {
        if phi[j].norm().to_f64_lossy() < 1e-15 {
            continue;
        }
        for i in 0..keep_dim {
            v[i] += phi[j].conj() * psi[(j << n_keep) | i];
        }
    }
    let norm = v
        .iter()
        .map(|a| a.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt();
    let projected_norm = norm.to_f64_lossy();
    let mut projected_level = None;
    let mut projected_hull_distance = 0.0;
    let mut extended_members = dict.members.clone();
    if projected_norm > 1e-9 {
        let vn: Vec<C<T>> = v.iter().map(|&a| a / norm).collect();
        projected_level = Some(doped_level(n_keep, &vn));
        extended_members.push(vn.clone());
        let d = Dictionary::from_dense_states(keep_dim, &extended_members, "closure".into());
        let state = DensityMatrix::pure_from_amplitudes(&vn)?;
        projected_hull_distance = project_onto_polytope(&state, &d)?
            .distance
            .to_f64_lossy();
    }
    // partial trace branches over the computational basis of the last m
    let mut branch_levels = Vec::new();
    let mut branch_states: Vec<Vec<C<T>>> = Vec::new();
    let mut weights: Vec<T> = Vec::new();
    for j in 0..(1usize << m) {
        let mut branch = vec![crate::scalar::c_zero::<T>(); keep_dim];
        for i in 0..keep_dim {
            branch[i] = psi[(j << n_keep) | i];
        }
        let w = branch
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        if w.to_f64_lossy() < 1e-12 {
            continue;
        }
        let wn = w.sqrt();
        let bn: Vec<C<T>> = branch.iter().map(|&a| a / wn).collect();
        branch_levels.push(doped_level(n_keep, &bn));
        branch_states.push(bn);
        weights.push(w);
    }
    // reduced state and its hull distances
    let mut reduced = crate::operator::Matrix::<T>::zeros(keep_dim);
    for (bs, &w) in branch_states.iter().zip(&weights) {
        for r in 0..keep_dim {
            for c2 in 0..keep_dim {
                reduced[(r, c2)] += bs[r] * bs[c2].conj() * w;
            }
        }
    }
    let total: T = weights.iter().fold(T::zero(), |a, &b| a + b);
    let reduced = DensityMatrix::new(reduced.scale(T::one() / total))?;
    let bare = dict.as_membership_dictionary();
    let reduced_net_distance = project_onto_polytope(&reduced, &bare)?
        .distance
        .to_f64_lossy();
    let mut with_branches = dict.members.clone();
    with_branches.extend(branch_states.iter().cloned());
    let aug = Dictionary::from_dense_states(keep_dim, &with_branches, "closure+branches".into());
    let reduced_hull_distance = project_onto_polytope(&reduced, &aug)?
        .distance
        .to_f64_lossy();
    let passes = projected_level.map_or(true, |l| l <= t)
        && branch_levels.iter().all(|&l| l <= t)
        && projected_hull_distance <= 1e-6
        && reduced_hull_distance <= 1e-6;
    Ok(ClosureReport {
        projected_level,
        projected_norm,
        projected_hull_distance,
        branch_levels,
        reduced_hull_distance,
        reduced_net_distance,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{pure_state, rng_for, t_state_amplitudes};
    use crate::Cpx;
    use rand::prelude::*;

    #[test]
    fn net_is_a_packing_and_keeps_seeds() {
        let mut rng = rng_for(61, 0);
        let t_seed = t_state_amplitudes::<f64>();
        let net = packing_net(1, 0.5, &[t_seed.clone()], &mut rng).unwrap();
        // sqrt(1 - fid) has a ~1e-8 noise floor at fid = 1
        assert!(pure_trace_distance(&net[0], &t_seed) < 1e-7);
        for i in 0..net.len() {
            for j in (i + 1)..net.len() {
                assert!(pure_trace_distance(&net[i], &net[j]) > 0.5);
            }
        }
    }

    #[test]
    fn t0_dictionary_is_stabilizer_set() {
        let mut rng = rng_for(62, 0);
        let dict = build_doped_dictionary::<f64>(1, 0, 0.5, &[], &mut rng).unwrap();
        assert_eq!(dict.members.len(), 6);
    }

    #[test]
    fn covering_at_half_eps_net() {
        let mut rng = rng_for(63, 0);
        let dict = build_doped_dictionary::<f64>(1, 1, 0.5, &[], &mut rng).unwrap();
        // every single-qubit pure state is within trace distance 0.5 of a member
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let probe = haar_state::<f64>(2, &mut rng);
            let nearest = dict
                .members
                .iter()
                .map(|m| pure_trace_distance(m, &probe))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        assert!(worst <= 0.5, "covering radius {worst}");
        assert!((dict.members.len() as f64) <= dict.cardinality_bound());
    }

    #[test]
    fn t_state_is_in_its_own_net_orbit() {
        let mut rng = rng_for(64, 0);
        let dict =
            build_doped_dictionary::<f64>(2, 1, 0.6, &[t_state_amplitudes::<f64>()], &mut rng)
                .unwrap();
        let zero = [Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)];
        let target = tensor(&t_state_amplitudes::<f64>(), &zero);
        let hit = dict
            .members
            .iter()
            .any(|m| pure_trace_distance(m, &target) < 1e-6);
        assert!(hit, "identity Clifford keeps the padded seed in the orbit");
    }

    #[test]
    fn doped_level_detects_doping() {
        let zero = [Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)];
        let t = t_state_amplitudes::<f64>();
        assert_eq!(doped_level(1, &zero), 0);
        assert_eq!(doped_level(1, &t), 1);
        let tz = tensor(&t, &zero);
        assert_eq!(doped_level(2, &tz), 1);
        let tt = tensor(&t, &t);
        assert_eq!(doped_level(2, &tt), 2);
    }

    #[test]
    fn stabilizer_states_accepted_at_any_t() {
        let mut rng = rng_for(65, 0);
        let dict = build_doped_dictionary::<f64>(2, 1, 0.6, &[], &mut rng).unwrap();
        let states = enumerate_stabilizer_states::<f64>(2).unwrap();
        for st in states.iter().step_by(13) {
            let v = decide_doped_membership(&st.to_density(), &dict, 0.05).unwrap();
            assert_eq!(v.verdict.decision, Some(Decision::Yes));
        }
    }

    #[test]
    fn projection_of_t_bell_is_one_doped() {
        // |T> tensor |Bell>, project the last qubit onto |0>:
        // result is |T> tensor |0>, which is 1-doped
        let mut rng = rng_for(66, 0);
        let t = t_state_amplitudes::<f64>();
        let s = 1.0 / 2f64.sqrt();
        let bell = vec![
            Cpx::new(s, 0.0),
            Cpx::new(0.0, 0.0),
            Cpx::new(0.0, 0.0),
            Cpx::new(s, 0.0),
        ];
        let psi = tensor(&t, &bell); // 3 qubits: T on qubit 0, bell on 1-2
        let dict =
            build_doped_dictionary::<f64>(2, 1, 0.6, &[t_state_amplitudes::<f64>()], &mut rng)
                .unwrap();
        let zero = crate::stabilizer::StabilizerState::<f64>::computational_basis(1, 0);
        let report = check_doped_closure(&psi, 2, &zero, 1, &dict).unwrap();
        assert_eq!(report.projected_level, Some(1));
        assert!(report.passes, "{report:?}");
    }

    /// Random n-qubit Clifford unitary as a dense matrix, from a random
    /// generator word (the group itself is only materialized for n <= 2).
    fn random_clifford_circuit(n: usize, gates: usize, rng: &mut impl Rng) -> crate::operator::Matrix<f64> {
        use crate::clifford::{cnot, lift_single};
        let h = {
            let s = 1.0 / 2f64.sqrt();
            let mut m = crate::operator::Matrix::<f64>::zeros(2);
            m[(0, 0)] = Cpx::new(s, 0.0);
            m[(0, 1)] = Cpx::new(s, 0.0);
            m[(1, 0)] = Cpx::new(s, 0.0);
            m[(1, 1)] = Cpx::new(-s, 0.0);
            m
        };
        let s_gate = {
            let mut m = crate::operator::Matrix::<f64>::zeros(2);
            m[(0, 0)] = Cpx::new(1.0, 0.0);
            m[(1, 1)] = Cpx::new(0.0, 1.0);
            m
        };
        let mut u = crate::operator::Matrix::<f64>::identity(1 << n);
        for _ in 0..gates {
            let pick = rng.gen_range(0..3);
            let g = match pick {
                0 => lift_single(&h, rng.gen_range(0..n), n),
                1 => lift_single(&s_gate, rng.gen_range(0..n), n),
                _ => {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n);
                    while b == a {
                        b = rng.gen_range(0..n);
                    }
                    cnot(a, b, n)
                }
            };
            u = g.matmul(&u);
        }
        u
    }

    #[test]
    fn stabilizer_projection_stays_level_zero() {
        let mut rng = rng_for(70, 0);
        let dict = build_doped_dictionary::<f64>(2, 0, 0.5, &[], &mut rng).unwrap();
        // a 3-qubit graph state projected onto |0> on the last qubit
        let adj = crate::stabilizer::GraphAdjacency::new(3, 0b011).unwrap();
        let st = crate::stabilizer::graph_state::<f64>(&adj);
        let zero = crate::stabilizer::StabilizerState::<f64>::computational_basis(1, 0);
        let report = check_doped_closure(&st.amplitudes(), 2, &zero, 0, &dict).unwrap();
        assert_eq!(report.projected_level, Some(0));
        assert!(report.branch_levels.iter().all(|&l| l == 0));
        assert!(report.passes, "{report:?}");
    }

    #[test]
    fn random_clifford_images_stay_closed() {
        let mut rng = rng_for(67, 0);
        let dict =
            build_doped_dictionary::<f64>(2, 1, 0.6, &[t_state_amplitudes::<f64>()], &mut rng)
                .unwrap();
        assert!(clifford_group::<f64>(3).is_err(), "3-qubit group is out of scope");
        let t = t_state_amplitudes::<f64>();
        let zero2 = vec![
            Cpx::new(1.0, 0.0),
            Cpx::new(0.0, 0.0),
            Cpx::new(0.0, 0.0),
            Cpx::new(0.0, 0.0),
        ];
        let seed3 = tensor(&t, &zero2); // |T> tensor |00>
        let zero = crate::stabilizer::StabilizerState::<f64>::computational_basis(1, 0);
        for _ in 0..50 {
            let u = random_clifford_circuit(3, 24, &mut rng);
            let psi = apply_unitary(&u, &seed3);
            let report = check_doped_closure(&psi, 2, &zero, 1, &dict).unwrap();
            if report.projected_norm > 1e-9 {
                assert!(report.passes, "{report:?}");
            } else {
                // zero-norm projection is reported, not an error
                assert!(report.projected_level.is_none());
            }
        }
    }

    #[test]
    fn tt_rejected_from_one_doped_hull() {
        let mut rng = rng_for(68, 0);
        let dict =
            build_doped_dictionary::<f64>(2, 1, 0.45, &[t_state_amplitudes::<f64>()], &mut rng)
                .unwrap();
        let tt = pure_state(&tensor(
            &t_state_amplitudes::<f64>(),
            &t_state_amplitudes::<f64>(),
        ));
        let v = decide_doped_membership(&tt, &dict, 1e-4).unwrap();
        assert_eq!(v.verdict.decision, Some(Decision::No));
        assert!(v.verdict.distance > 1e-3, "distance {}", v.verdict.distance);
    }

    #[test]
    fn nested_dictionaries_monotone() {
        // t-extended robustness is non-increasing as the net refines
        let mut rng = rng_for(69, 0);
        let tt = pure_state(&tensor(
            &t_state_amplitudes::<f64>(),
            &t_state_amplitudes::<f64>(),
        ));
        let mut values = Vec::new();
        let mut seeds: Vec<Vec<Cpx>> = vec![t_state_amplitudes::<f64>()];
        for eps in [0.9, 0.6, 0.45] {
            let net = packing_net(1, eps, &seeds, &mut rng).unwrap();
            seeds = net.clone(); // refine by extending the coarser net
            let dict = DopedDictionary {
                n_qubits: 2,
                t: 1,
                net_eps: eps,
                members: {
                    let group = clifford_group::<f64>(2).unwrap();
                    let mut seen = std::collections::HashSet::new();
                    let mut members = Vec::new();
                    for seed in &net {
                        let zero = [Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)];
                        let padded = tensor(seed, &zero);
                        for u in &group {
                            let amps = apply_unitary(u, &padded);
                            let support: Vec<usize> =
                                (0..4).filter(|&i| amps[i].norm() > 1e-9).collect();
                            let sup: Vec<Cpx> = support.iter().map(|&i| amps[i]).collect();
                            if seen.insert(canonical_amplitude_key(2, &support, &sup)) {
                                members.push(amps);
                            }
                        }
                    }
                    members
                },
                net_seeds: net,
                net_covering: 0.0,
            };
            let cert = crate::monotones::t_extended_robustness(&tt, &dict).unwrap();
            values.push(cert.value);
        }
        assert!(values[0] >= values[1] - 1e-7);
        assert!(values[1] >= values[2] - 1e-7);
        assert!(values[2] > 1.0 + 1e-6, "two T factors are not jointly 1-doped");
    }
}
