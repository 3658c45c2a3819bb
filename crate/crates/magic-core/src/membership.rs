//! Weak membership for state polytopes: exact Euclidean projection onto
//! the convex hull of a finite state dictionary, promise verdicts,
//! separating-witness extraction, and witness-detection scans.
//!
//! The projection solves `min_{p in simplex} |rho - sum p_i sigma_i|_2^2`
//! with away-step Frank-Wolfe and exact line search; it terminates when
//! the Wolfe gap certifies the reported distance (the gap also yields the
//! first-order optimality slack `tr((rho-tau)(tau-sigma)) >= -gap/2`).

use crate::error::{Error, Result};
use crate::operator::{schatten_norm, DensityMatrix, HermitianOperator, Matrix, SchattenP};
use crate::scalar::C;
use crate::stabilizer::{enumerate_stabilizer_states, FamilyTag, StabilizerState, StateFamily};
use crate::Scalar;
use rayon::prelude::*;

pub const PROJECTION_MAX_ITERS: usize = 1_000_000;
/// Distances at or below this are treated as membership.
pub const MEMBERSHIP_DISTANCE_TOL: f64 = 1e-6;

/// A pure state atom of a dictionary, stored on its support.
#[derive(Clone, Debug)]
pub struct Atom<T: Scalar> {
    pub support: Vec<usize>,
    pub amps: Vec<C<T>>,
}

impl<T: Scalar> Atom<T> {
    pub fn from_dense(amps: &[C<T>]) -> Self {
        let support: Vec<usize> = (0..amps.len())
            .filter(|&i| amps[i].norm().to_f64_lossy() > 1e-14)
            .collect();
        Atom {
            amps: support.iter().map(|&i| amps[i]).collect(),
            support,
        }
    }

    pub fn from_stabilizer(state: &StabilizerState<T>) -> Self {
        Atom {
            support: state.support().to_vec(),
            amps: state.support_amps().to_vec(),
        }
    }

    /// tr(|atom><atom| M) for Hermitian M.
    fn expectation(&self, m: &Matrix<T>) -> T {
        m.expectation_on_support(&self.support, &self.amps).re
    }

    /// Add weight * |atom><atom| into a dense accumulator.
    fn accumulate(&self, acc: &mut Matrix<T>, weight: T) {
        for (ia, &ra) in self.support.iter().enumerate() {
            for (ib, &rb) in self.support.iter().enumerate() {
                acc[(ra, rb)] += self.amps[ia] * self.amps[ib].conj() * weight;
            }
        }
    }
}

/// Dictionary of pure states spanning the polytope.
pub struct Dictionary<T: Scalar> {
    pub atoms: Vec<Atom<T>>,
    pub dim: usize,
    pub label: String,
}

impl<T: Scalar> Dictionary<T> {
    pub fn stabilizer(n: usize) -> Result<Self> {
        let states = enumerate_stabilizer_states::<T>(n)?;
        Ok(Dictionary {
            atoms: states.iter().map(Atom::from_stabilizer).collect(),
            dim: 1 << n,
            label: format!("stabilizer(n={n})"),
        })
    }

    pub fn from_dense_states(dim: usize, states: &[Vec<C<T>>], label: String) -> Self {
        Dictionary {
            atoms: states.iter().map(|v| Atom::from_dense(v)).collect(),
            dim,
            label,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Decision {
    Yes,
    No,
    PromiseViolated,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
            Decision::PromiseViolated => "PROMISE_VIOLATED",
        }
    }
}

/// Result of projecting onto the polytope (plus an optional promise
/// verdict when an epsilon was supplied).
#[derive(Clone, Debug)]
pub struct MembershipVerdict<T: Scalar> {
    pub distance: T,
    pub projection: DensityMatrix<T>,
    /// Sparse simplex weights of the projection, (atom index, weight).
    pub weights: Vec<(usize, T)>,
    /// Wolfe gap at termination; bounds f - f* from above.
    pub gap: T,
    /// min_i tr((rho - tau)(tau - sigma_i)) >= -gap/2.
    pub first_order_slack: T,
    pub decision: Option<Decision>,
    /// Certified lower bound on the depth of rho inside the polytope
    /// (only computed for the YES test).
    pub depth_lower: Option<T>,
    pub iterations: usize,
}

/// Euclidean projection of `rho` onto conv(dictionary).
///
/// Away-step Frank-Wolfe over the full dictionary, with a
/// fully-corrective inner loop over the active set after every atom
/// addition (otherwise near-duplicate atoms make the outer iteration
/// zigzag). The Wolfe gap from the full-dictionary scan certifies
/// optimality.
pub fn project_onto_polytope<T: Scalar>(
    rho: &DensityMatrix<T>,
    dict: &Dictionary<T>,
) -> Result<MembershipVerdict<T>> {
    if dict.atoms.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    if dict.dim != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: dict.dim,
        });
    }
    let mut state = ProjectionState::new(rho, dict);
    let mut iterations = 0usize;
    let mut converged = false;
    let mut gap = T::zero();
    let mut f2_prev = T::infinity();
    while iterations < PROJECTION_MAX_ITERS {
        // full-dictionary scan: certified gap and the entering atom
        let delta = state.residual();
        let f = delta.frobenius_norm();
        let f2 = f * f;
        let n_atoms = dict.atoms.len();
        let scores: Vec<T> = if n_atoms > 512 {
            dict.atoms.par_iter().map(|a| a.expectation(&delta)).collect()
        } else {
            dict.atoms.iter().map(|a| a.expectation(&delta)).collect()
        };
        let mut fw = 0usize;
        for i in 1..n_atoms {
            if scores[i] > scores[fw] {
                fw = i;
            }
        }
        let tau_score = state.combo_score(&scores);
        gap = (scores[fw] - tau_score) * T::real(2.0);
        let target = T::real(1e-16).max(T::real(1e-8) * f2).min(T::real(1e-10));
        if gap <= target {
            converged = true;
            break;
        }
        // float noise floor: the gap can stall just above the target
        // while the objective no longer moves
        let progress = f2_prev - f2;
        if gap <= T::real(1e-12) && progress <= f2.max(T::real(1e-300)) * T::real(1e-13) {
            converged = true;
            break;
        }
        f2_prev = f2;
        iterations += 1;
        state.ensure_active(fw);
        // corrective pass: optimize over the current active set only
        let inner = state.optimize_active(target, 2000);
        iterations += inner;
        if inner == 0 {
            // no step possible at this precision
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            max_iters: PROJECTION_MAX_ITERS,
            gap: gap.to_f64_lossy(),
        });
    }
    state.finish(gap, iterations)
}

struct ProjectionState<'a, T: Scalar> {
    rho: &'a DensityMatrix<T>,
    dict: &'a Dictionary<T>,
    weights: Vec<T>,
    active: Vec<usize>,
    combo: Matrix<T>,
}

impl<'a, T: Scalar> ProjectionState<'a, T> {
    fn new(rho: &'a DensityMatrix<T>, dict: &'a Dictionary<T>) -> Self {
        let mut weights = vec![T::zero(); dict.atoms.len()];
        weights[0] = T::one();
        let mut combo = Matrix::zeros(dict.dim);
        dict.atoms[0].accumulate(&mut combo, T::one());
        ProjectionState {
            rho,
            dict,
            weights,
            active: vec![0],
            combo,
        }
    }

    fn residual(&self) -> Matrix<T> {
        self.rho.matrix().sub(&self.combo)
    }

    fn combo_score(&self, scores: &[T]) -> T {
        let mut acc = T::zero();
        for &i in &self.active {
            acc += self.weights[i] * scores[i];
        }
        acc
    }

    fn ensure_active(&mut self, idx: usize) {
        if !self.active.contains(&idx) {
            self.active.push(idx);
        }
    }

    fn rebuild_combo(&mut self) {
        self.combo = Matrix::zeros(self.dict.dim);
        for &i in &self.active {
            if self.weights[i] > T::zero() {
                self.dict.atoms[i].accumulate(&mut self.combo, self.weights[i]);
            }
        }
    }

    /// Pairwise Frank-Wolfe restricted to the active set; returns the
    /// number of inner steps taken.
    fn optimize_active(&mut self, target: T, max_steps: usize) -> usize {
        let mut steps = 0usize;
        while steps < max_steps {
            let delta = self.residual();
            let scores: Vec<(usize, T)> = self
                .active
                .iter()
                .map(|&i| (i, self.dict.atoms[i].expectation(&delta)))
                .collect();
            let (&(fw_idx, fw_score), _) = match scores
                .iter()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .map(|m| (m, ()))
            {
                Some(v) => v,
                None => break,
            };
            let (&(aw_idx, aw_score), _) = scores
                .iter()
                .filter(|(i, _)| self.weights[*i] > T::zero())
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .map(|m| (m, ()))
                .expect("active set nonempty");
            let pair_gap = (fw_score - aw_score) * T::real(2.0);
            if pair_gap <= target || fw_idx == aw_idx {
                break;
            }
            steps += 1;
            // pairwise step: move mass from the away atom to the FW atom
            let mut dirm = Matrix::zeros(self.dict.dim);
            self.dict.atoms[fw_idx].accumulate(&mut dirm, T::one());
            self.dict.atoms[aw_idx].accumulate(&mut dirm, -T::one());
            let num = {
                let mut acc = T::zero();
                for (a, b) in delta.data().iter().zip(dirm.data()) {
                    acc += (a.conj() * *b).re;
                }
                acc
            };
            let den = {
                let n2 = dirm.frobenius_norm();
                n2 * n2
            };
            if den <= T::real(1e-30) {
                break;
            }
            let t = (num / den).max(T::zero()).min(self.weights[aw_idx]);
            if t <= T::real(1e-18) {
                break;
            }
            self.weights[fw_idx] += t;
            self.weights[aw_idx] -= t;
            if self.weights[aw_idx] <= T::real(1e-15) {
                self.weights[aw_idx] = T::zero();
            }
            self.rebuild_combo();
        }
        self.active.retain(|&i| self.weights[i] > T::zero());
        if self.active.is_empty() {
            self.active.push(0);
            self.weights[0] = T::one();
            self.rebuild_combo();
        }
        steps
    }

    fn finish(mut self, gap: T, iterations: usize) -> Result<MembershipVerdict<T>> {
        let delta = self.residual();
        let distance = delta.frobenius_norm();
        let mut weight_sum = T::zero();
        for &i in &self.active {
            weight_sum += self.weights[i];
        }
        let mut proj = Matrix::zeros(self.dict.dim);
        for &i in &self.active {
            if self.weights[i] > T::zero() {
                self.dict.atoms[i].accumulate(&mut proj, self.weights[i] / weight_sum);
            }
        }
        let projection = DensityMatrix::new(symmetrized(proj))?;
        self.active.sort_unstable();
        let sparse: Vec<(usize, T)> = self
            .active
            .iter()
            .filter(|&&i| self.weights[i] > T::zero())
            .map(|&i| (i, self.weights[i]))
            .collect();
        Ok(MembershipVerdict {
            distance,
            projection,
            weights: sparse,
            gap,
            first_order_slack: -gap / T::real(2.0),
            decision: None,
            depth_lower: None,
            iterations,
        })
    }
}

fn symmetrized<T: Scalar>(mut m: Matrix<T>) -> Matrix<T> {
    let d = m.dim();
    for r in 0..d {
        for c in (r + 1)..d {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * T::real(0.5);
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
        m[(r, r)] = C::new(m[(r, r)].re, T::zero());
    }
    m
}

/// Certified lower bound on the inradius of the stabilizer polytope at
/// the maximally mixed state: states I/d + Delta with
/// sum_P |tr(Delta P)| <= 1 are convex mixtures of Pauli-eigenspace
/// states, which gives the ball radius 1/sqrt(d (d^2 - 1)). Tight at
/// one qubit (the octahedron inradius 1/sqrt(6)).
pub fn center_inradius_lower_bound(dim: usize) -> f64 {
    let d = dim as f64;
    1.0 / (d * (d * d - 1.0)).sqrt()
}

/// Exact Frobenius depth of a single-qubit state inside the octahedron
/// (minimum facet slack), or None if outside.
fn octahedron_depth<T: Scalar>(rho: &DensityMatrix<T>) -> Option<f64> {
    let m = rho.matrix();
    let x = 2.0 * m[(0, 1)].re.to_f64_lossy();
    let y = -2.0 * m[(0, 1)].im.to_f64_lossy();
    let z = (m[(0, 0)].re - m[(1, 1)].re).to_f64_lossy();
    let mut depth = f64::INFINITY;
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                let slack = 1.0 - (sx * x + sy * y + sz * z);
                depth = depth.min(slack / 6f64.sqrt());
            }
        }
    }
    (depth >= 0.0).then_some(depth)
}

/// Weak membership with the promise semantics: YES when the
/// epsilon-ball around `rho` is certified inside the hull, NO when the
/// distance exceeds epsilon, PROMISE_VIOLATED in between.
///
/// The interior certificate is exact for one qubit (octahedron facets);
/// for larger systems it pushes `rho` away from the maximally mixed
/// state as far as membership holds and combines the reach with the
/// certified center ball, which is sound but conservative.
pub fn decide_wmem<T: Scalar>(
    rho: &DensityMatrix<T>,
    eps: f64,
    dict: &Dictionary<T>,
) -> Result<MembershipVerdict<T>> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must be positive".into(),
        });
    }
    let mut verdict = project_onto_polytope(rho, dict)?;
    let dist = verdict.distance.to_f64_lossy();
    if dist > eps {
        verdict.decision = Some(Decision::No);
        return Ok(verdict);
    }
    if dist > MEMBERSHIP_DISTANCE_TOL {
        verdict.decision = Some(Decision::PromiseViolated);
        return Ok(verdict);
    }
    // membership holds; certify the eps-ball
    let depth = if rho.n_qubits() == 1 && dict.atoms.len() == 6 {
        octahedron_depth(rho).unwrap_or(0.0)
    } else {
        center_push_depth(rho, dict)?
    };
    verdict.depth_lower = Some(T::real(depth));
    verdict.decision = Some(if depth >= eps {
        Decision::Yes
    } else {
        Decision::PromiseViolated
    });
    Ok(verdict)
}

/// Depth lower bound via the push-from-center construction: if
/// rho + lambda (rho - omega) stays in the hull then rho is a convex
/// combination placing weight lambda/(1+lambda) on the center, so the
/// certified center ball shrinks onto rho accordingly.
fn center_push_depth<T: Scalar>(rho: &DensityMatrix<T>, dict: &Dictionary<T>) -> Result<f64> {
    let dim = dict.dim;
    let r_center = center_inradius_lower_bound(dim);
    let omega = DensityMatrix::<T>::maximally_mixed(dim.trailing_zeros() as usize);
    let dir = rho.matrix().sub(omega.matrix());
    if dir.frobenius_norm().to_f64_lossy() < 1e-12 {
        return Ok(r_center);
    }
    let inside = |lambda: f64| -> Result<bool> {
        let m = rho
            .matrix()
            .add(&dir.scale(T::real(lambda)));
        let m = symmetrized(m);
        let Ok(state) = DensityMatrix::new(m) else {
            return Ok(false); // left the PSD cone, certainly outside
        };
        let v = project_onto_polytope(&state, dict)?;
        Ok(v.distance.to_f64_lossy() <= MEMBERSHIP_DISTANCE_TOL)
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    // grow until outside or cap
    while hi < 1e4 && inside(hi)? {
        lo = hi;
        hi *= 2.0;
    }
    if hi >= 1e4 {
        return Ok(r_center); // essentially the center
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo / (1.0 + lo) * r_center)
}

/// Separating witness from a projection: W = rho - tau.
#[derive(Clone, Debug)]
pub struct WitnessReport<T: Scalar> {
    pub witness: HermitianOperator<T>,
    /// tr(W rho) - gamma; at least distance^2 up to solver tolerance.
    pub margin: T,
    /// max over the dictionary of tr(W sigma).
    pub gamma: T,
}

pub fn extract_witness<T: Scalar>(
    rho: &DensityMatrix<T>,
    verdict: &MembershipVerdict<T>,
    dict: &Dictionary<T>,
) -> Result<WitnessReport<T>> {
    let dist = verdict.distance.to_f64_lossy();
    if dist <= MEMBERSHIP_DISTANCE_TOL {
        return Err(Error::InteriorPoint { distance: dist });
    }
    let w_matrix = rho.matrix().sub(verdict.projection.matrix());
    let witness = HermitianOperator::new(symmetrized(w_matrix))?;
    let gamma = dict
        .atoms
        .par_iter()
        .map(|a| a.expectation(witness.matrix()))
        .reduce(|| T::real(f64::NEG_INFINITY), T::max);
    let on_rho = {
        let mut acc = T::zero();
        for (a, b) in witness.matrix().data().iter().zip(rho.matrix().data()) {
            acc += (a.conj() * *b).re;
        }
        acc
    };
    Ok(WitnessReport {
        witness,
        margin: on_rho - gamma,
        gamma,
    })
}

/// How to scan the state set in a witness-detection instance.
#[derive(Clone, Debug)]
pub enum WwdScan {
    /// Full enumeration of the pure stabilizer states.
    Exhaustive,
    /// One or more restricted families.
    Families(Vec<FamilyTag>),
    /// Uniformly sampled stabilizer states (one-sided guarantee only).
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct WwdReport {
    pub decision: Decision,
    pub max_value: f64,
    pub maximizer: Option<String>,
    pub scanned: u64,
    /// True when the scan covered the whole extreme-point set.
    pub certified: bool,
    pub gamma: f64,
    pub delta: f64,
}

/// Decide whether `w` stays below `gamma` on the scanned states, with
/// promise width `delta`: YES if some value reaches gamma + delta, NO if
/// the scanned maximum stays at or below gamma - delta.
pub fn check_wwd_instance<T: Scalar>(
    w: &HermitianOperator<T>,
    gamma: f64,
    delta: f64,
    qubits: usize,
    scan: &WwdScan,
) -> Result<WwdReport> {
    let norm2 = schatten_norm(w, SchattenP::Two)?.to_f64_lossy();
    if norm2 > 1.0 + 1e-9 {
        return Err(Error::WitnessNorm { norm: norm2 });
    }
    if w.dim() != 1 << qubits {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: 1 << qubits,
        });
    }
    let (max_value, maximizer, scanned, certified) = match scan {
        WwdScan::Exhaustive => {
            let fam = StateFamily::new(FamilyTag::AllStabilizer, qubits)?;
            let (v, arg, n) = scan_family_max(w, &fam);
            (v, Some(format!("all-stabilizer[{arg}]")), n, true)
        }
        WwdScan::Families(tags) => {
            let mut best = f64::NEG_INFINITY;
            let mut best_arg = None;
            let mut total = 0u64;
            for tag in tags {
                let fam = StateFamily::new(*tag, qubits)?;
                let (v, arg, n) = scan_family_max(w, &fam);
                total += n;
                if v > best {
                    best = v;
                    best_arg = Some(format!("{}[{arg}]", tag.name()));
                }
            }
            (best, best_arg, total, false)
        }
        WwdScan::Sample { count, seed } => {
            let index = crate::stabilizer::StabilizerIndex::new(qubits)?;
            let chunks: u64 = rayon::current_num_threads() as u64 * 4;
            let per = count / chunks + 1;
            let best = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = crate::sampling::rng_for(*seed, chunk);
                    let mut local = f64::NEG_INFINITY;
                    let todo = per.min(count.saturating_sub(chunk * per));
                    for _ in 0..todo {
                        let st =
                            StabilizerState::<T>::from_params(index.sample_params(&mut rng));
                        local = local.max(st.matrix_expectation(w.matrix()).to_f64_lossy());
                    }
                    local
                })
                .reduce(|| f64::NEG_INFINITY, f64::max);
            (best, Some("sampled".to_string()), *count, false)
        }
    };
    let decision = if max_value >= gamma + delta {
        Decision::Yes
    } else if max_value <= gamma - delta {
        Decision::No
    } else {
        Decision::PromiseViolated
    };
    Ok(WwdReport {
        decision,
        max_value,
        maximizer,
        scanned,
        certified,
        gamma,
        delta,
    })
}

/// Parallel max of tr(W sigma) over a family; returns (max, argmax, count).
pub fn scan_family_max<T: Scalar>(
    w: &HermitianOperator<T>,
    family: &StateFamily,
) -> (f64, u128, u64) {
    let size = family.size();
    let chunk: u128 = 4096;
    let n_chunks = (size + chunk - 1) / chunk;
    let (best, arg) = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let mut local = (f64::NEG_INFINITY, start);
            for (off, st) in family.iter_range::<T>(start, chunk).enumerate() {
                let v = st.matrix_expectation(w.matrix()).to_f64_lossy();
                if v > local.0 {
                    local = (v, start + off as u128);
                }
            }
            local
        })
        .reduce(
            || (f64::NEG_INFINITY, 0u128),
            |a, b| if a.0 >= b.0 { a } else { b },
        );
    (best, arg, size as u64)
}

/// Parallel min of <sigma| H |sigma> over a family.
pub fn scan_family_min<T: Scalar>(
    h: &Matrix<T>,
    family: &StateFamily,
) -> (f64, u128, u64) {
    let size = family.size();
    let chunk: u128 = 4096;
    let n_chunks = (size + chunk - 1) / chunk;
    let (best, arg) = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let mut local = (f64::INFINITY, start);
            for (off, st) in family.iter_range::<T>(start, chunk).enumerate() {
                let v = st.matrix_expectation(h).to_f64_lossy();
                if v < local.0 {
                    local = (v, start + off as u128);
                }
            }
            local
        })
        .reduce(|| (f64::INFINITY, 0u128), |a, b| if a.0 <= b.0 { a } else { b });
    (best, arg, size as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{pure_state, rng_for, t_state_amplitudes};
    use crate::Cpx;
    use rand::Rng;

    fn t_state() -> DensityMatrix<f64> {
        pure_state(&t_state_amplitudes::<f64>())
    }

    fn octahedron() -> Dictionary<f64> {
        Dictionary::stabilizer(1).unwrap()
    }

    fn bloch_state(x: f64, y: f64, z: f64) -> DensityMatrix<f64> {
        let mut m = Matrix::<f64>::zeros(2);
        m[(0, 0)] = Cpx::new(0.5 * (1.0 + z), 0.0);
        m[(1, 1)] = Cpx::new(0.5 * (1.0 - z), 0.0);
        m[(0, 1)] = Cpx::new(0.5 * x, 0.5 * y);
        m[(1, 0)] = Cpx::new(0.5 * x, -0.5 * y);
        DensityMatrix::new(m).unwrap()
    }

    /// Random point in the Bloch ball (a valid state, often outside the
    /// octahedron).
    fn random_bloch_state(rng: &mut impl Rng) -> DensityMatrix<f64> {
        loop {
            let x = rng.gen::<f64>() * 2.0 - 1.0;
            let y = rng.gen::<f64>() * 2.0 - 1.0;
            let z = rng.gen::<f64>() * 2.0 - 1.0;
            if x * x + y * y + z * z <= 0.9999 {
                return bloch_state(x, y, z);
            }
        }
    }

    #[test]
    fn maximally_mixed_projects_to_itself() {
        let dict = octahedron();
        let rho = DensityMatrix::<f64>::maximally_mixed(1);
        let v = project_onto_polytope(&rho, &dict).unwrap();
        assert!(v.distance < 1e-7, "distance {}", v.distance);
    }

    #[test]
    fn t_state_projection_matches_octahedron_geometry() {
        // geometric oracle: Euclidean projection of the Bloch point
        // (1/sqrt2, 1/sqrt2, 0) onto |x|+|y|+|z| <= 1 is (1/2, 1/2, 0);
        // Frobenius distance is Bloch distance / sqrt(2).
        let dict = octahedron();
        let rho = t_state();
        let v = project_onto_polytope(&rho, &dict).unwrap();
        let expected = 1.0 / 2f64.sqrt() - 0.5;
        assert!(
            (v.distance - expected).abs() < 1e-7,
            "distance {} vs {expected}",
            v.distance
        );
        let tau = v.projection.matrix();
        let bx = 2.0 * tau[(0, 1)].re;
        let by = -2.0 * tau[(0, 1)].im;
        let bz = tau[(0, 0)].re - tau[(1, 1)].re;
        assert!((bx - 0.5).abs() < 1e-6 && (by - 0.5).abs() < 1e-6 && bz.abs() < 1e-6);
    }

    #[test]
    fn mixture_of_stabilizer_states_is_inside() {
        // 0.9 |0><0| + 0.1 I/2
        let mut m = Matrix::<f64>::zeros(2);
        m[(0, 0)] = Cpx::new(0.95, 0.0);
        m[(1, 1)] = Cpx::new(0.05, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        let v = project_onto_polytope(&rho, &octahedron()).unwrap();
        assert!(v.distance < 1e-7);
    }

    #[test]
    fn wmem_verdicts_single_qubit() {
        let dict = octahedron();
        // inradius 1/sqrt(6) > 0.05
        let center = DensityMatrix::<f64>::maximally_mixed(1);
        let v = decide_wmem(&center, 0.05, &dict).unwrap();
        assert_eq!(v.decision, Some(Decision::Yes));
        // |T> at eps = 0.1: distance ~ 0.207 > 0.1
        let v = decide_wmem(&t_state(), 0.1, &dict).unwrap();
        assert_eq!(v.decision, Some(Decision::No));
        // a point ~0.05 outside with eps = 0.1 sits in the promise gap:
        // Bloch radius along (1,1,0)/sqrt2 direction: boundary at 1/sqrt2,
        // push 0.05 Frobenius = 0.05*sqrt2 Bloch beyond it
        let r = 1.0 / 2f64.sqrt() + 0.05 * 2f64.sqrt();
        let s = r / 2f64.sqrt();
        let v = decide_wmem(&bloch_state(s, s, 0.0), 0.1, &dict).unwrap();
        assert_eq!(v.decision, Some(Decision::PromiseViolated));
        // shallow interior point: depth < eps
        let r = 1.0 / 2f64.sqrt() - 0.02;
        let s = r / 2f64.sqrt();
        let v = decide_wmem(&bloch_state(s, s, 0.0), 0.1, &dict).unwrap();
        assert_eq!(v.decision, Some(Decision::PromiseViolated));
    }

    #[test]
    fn witness_for_t_state() {
        let dict = octahedron();
        let rho = t_state();
        let v = project_onto_polytope(&rho, &dict).unwrap();
        let report = extract_witness(&rho, &v, &dict).unwrap();
        // W proportional to (X + Y) (1/sqrt2 - 1/2)/2
        let wm = report.witness.matrix();
        let coeff = (1.0 / 2f64.sqrt() - 0.5) / 2.0;
        assert!((wm[(0, 1)].re - coeff).abs() < 1e-6);
        assert!((wm[(0, 1)].im + coeff).abs() < 1e-6);
        assert!(wm[(0, 0)].re.abs() < 1e-6);
        let dist = v.distance;
        assert!(report.margin >= dist * dist - 1e-8);
    }

    #[test]
    fn witness_on_stabilizer_state_errors() {
        let dict = octahedron();
        let zero = bloch_state(0.0, 0.0, 1.0);
        let v = project_onto_polytope(&zero, &dict).unwrap();
        assert!(matches!(
            extract_witness(&zero, &v, &dict),
            Err(Error::InteriorPoint { .. })
        ));
    }

    #[test]
    fn t_tensor_zero_has_same_margin_as_t() {
        let dict1 = octahedron();
        let rho1 = t_state();
        let v1 = project_onto_polytope(&rho1, &dict1).unwrap();
        let m1 = extract_witness(&rho1, &v1, &dict1).unwrap().margin;

        let dict2 = Dictionary::<f64>::stabilizer(2).unwrap();
        let zero = [Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)];
        let amps = crate::sampling::tensor(&t_state_amplitudes::<f64>(), &zero);
        let rho2 = pure_state(&amps);
        let v2 = project_onto_polytope(&rho2, &dict2).unwrap();
        assert!((v2.distance - v1.distance).abs() < 1e-6);
        let m2 = extract_witness(&rho2, &v2, &dict2).unwrap().margin;
        assert!((m1 - m2).abs() < 1e-6);
    }

    #[test]
    fn projection_idempotent() {
        let dict = octahedron();
        let v = project_onto_polytope(&t_state(), &dict).unwrap();
        let again = project_onto_polytope(&v.projection, &dict).unwrap();
        assert!(again.distance <= 1e-8, "distance {}", again.distance);
    }

    #[test]
    fn midpoint_is_strictly_closer() {
        let dict = octahedron();
        let mut rng = rng_for(31, 0);
        for _ in 0..100 {
            let rho = random_bloch_state(&mut rng);
            let v = project_onto_polytope(&rho, &dict).unwrap();
            if v.distance < 1e-4 {
                continue;
            }
            let mid = DensityMatrix::new(
                rho.matrix()
                    .add(v.projection.matrix())
                    .scale(0.5),
            )
            .unwrap();
            let vm = project_onto_polytope(&mid, &dict).unwrap();
            assert!(vm.distance < v.distance - 1e-9);
        }
    }

    #[test]
    fn first_order_optimality_reported() {
        let dict = octahedron();
        let v = project_onto_polytope(&t_state(), &dict).unwrap();
        assert!(v.first_order_slack >= -1e-7);
    }

    #[test]
    fn wwd_constant_witness_symbolic() {
        // tr(sigma I/sqrt(d)) = 1/sqrt(d) for every state, so with
        // gamma = -1/(2 sqrt d) the +I direction clears gamma + delta and
        // the -I direction sits below gamma - delta.
        let d = 2.0f64;
        let w_plus = HermitianOperator::<f64>::identity(2).scale(1.0 / d.sqrt());
        let gamma = -0.5 / d.sqrt();
        let delta = 0.25 / d.sqrt();
        let r = check_wwd_instance(&w_plus, gamma, delta, 1, &WwdScan::Exhaustive).unwrap();
        assert_eq!(r.decision, Decision::Yes);
        assert!((r.max_value - 1.0 / d.sqrt()).abs() < 1e-12);
        let w_minus = w_plus.scale(-1.0);
        let r = check_wwd_instance(&w_minus, gamma, delta, 1, &WwdScan::Exhaustive).unwrap();
        assert_eq!(r.decision, Decision::No);
    }

    #[test]
    fn wwd_t_witness_both_modes() {
        let dict = octahedron();
        let rho = t_state();
        let v = project_onto_polytope(&rho, &dict).unwrap();
        let report = extract_witness(&rho, &v, &dict).unwrap();
        let norm = schatten_norm(&report.witness, SchattenP::Two).unwrap();
        let w = report.witness.scale(1.0 / norm);
        let gamma = report.gamma / norm;
        let delta = report.margin / norm / 4.0;
        // over the stabilizer dictionary only: max = gamma => NO
        let r = check_wwd_instance(&w, gamma + 2.0 * delta, delta, 1, &WwdScan::Exhaustive)
            .unwrap();
        assert_eq!(r.decision, Decision::No);
        // the T state itself clears the threshold: checked directly
        let on_t = {
            let mut acc = 0.0;
            for (a, b) in w.matrix().data().iter().zip(rho.matrix().data()) {
                acc += (a.conj() * *b).re;
            }
            acc
        };
        assert!(on_t >= gamma + 2.0 * delta + delta);
    }

    #[test]
    fn wwd_converse_distance_bound() {
        // YES with slack eps implies distance > eps / |W|_2
        let dict = octahedron();
        let mut rng = rng_for(37, 0);
        for _ in 0..50 {
            let rho = random_bloch_state(&mut rng);
            let v = project_onto_polytope(&rho, &dict).unwrap();
            if v.distance < 1e-3 {
                continue;
            }
            let report = extract_witness(&rho, &v, &dict).unwrap();
            let on_rho = report.margin + report.gamma;
            let slack = on_rho - report.gamma; // = margin
            let wnorm = schatten_norm(&report.witness, SchattenP::Two).unwrap();
            assert!(v.distance > slack / wnorm - 1e-8);
        }
    }

    #[test]
    fn wwd_norm_precondition() {
        let w = HermitianOperator::<f64>::identity(2);
        assert!(matches!(
            check_wwd_instance(&w, 0.0, 0.1, 1, &WwdScan::Exhaustive),
            Err(Error::WitnessNorm { .. })
        ));
    }
}
