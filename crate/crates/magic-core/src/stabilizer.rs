//! Stabilizer states, graph states, and the auxiliary state families.
//!
//! Every pure stabilizer state on `n` qubits has a unique canonical form
//!
//! ```text
//! |psi> = 2^{-k/2} sum_{t in F_2^k} i^{c.t + 2 q(t)} |t M ^ s>
//! ```
//!
//! where `M` is a k x n matrix in reduced row echelon form over F_2 (the
//! support is the affine subspace rowspace(M) ^ s, with the coset shift
//! `s` vanishing on pivot columns), `c in Z_4^k` is a linear phase and
//! `q` a quadratic form given by upper-triangular bits. Counting these
//! parameters reproduces the 2^n prod_{j<=n} (2^j + 1) state count, so
//! enumeration, indexing and uniform sampling all run over this
//! parametrization; generator tableaux are derived on demand.
//!
//! Qubit `j` is bit `j` of the basis index (low bits first).

use crate::error::{Error, Result};
use crate::operator::DensityMatrix;
use crate::pauli::PauliString;
use crate::scalar::{c_zero, i_pow, C};
use crate::Scalar;
use rand::Rng;

pub const MAX_FULL_ENUMERATION_QUBITS: usize = 4;
pub const MAX_STREAM_QUBITS: usize = 6;

/// Symmetric adjacency matrix of a simple graph, stored as C(n,2)
/// upper-triangular bits in lexicographic edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAdjacency {
    n_vertices: usize,
    edge_bits: u64,
}

impl GraphAdjacency {
    pub fn new(n_vertices: usize, edge_bits: u64) -> Result<Self> {
        let m = n_vertices * (n_vertices.saturating_sub(1)) / 2;
        if m > 63 {
            return Err(Error::SizeCap {
                what: "graph vertices",
                requested: n_vertices,
                cap: 11,
            });
        }
        if m < 64 && edge_bits >> m != 0 {
            return Err(Error::InvalidParameter {
                name: "edge_bits",
                reason: format!("more than C({n_vertices},2) = {m} bits set"),
            });
        }
        Ok(GraphAdjacency {
            n_vertices,
            edge_bits,
        })
    }

    pub fn empty(n_vertices: usize) -> Self {
        GraphAdjacency::new(n_vertices, 0).expect("empty graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_bits(&self) -> u64 {
        self.edge_bits
    }

    pub fn num_edge_slots(&self) -> usize {
        self.n_vertices * (self.n_vertices - 1) / 2
    }

    /// Lexicographic index of the vertex pair (i, j), i < j.
    pub fn edge_index(n_vertices: usize, i: usize, j: usize) -> usize {
        assert!(i < j && j < n_vertices);
        // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
        i * n_vertices - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Inverse of [`GraphAdjacency::edge_index`].
    pub fn pair_from_index(n_vertices: usize, mut index: usize) -> (usize, usize) {
        for i in 0..n_vertices {
            let row = n_vertices - i - 1;
            if index < row {
                return (i, i + 1 + index);
            }
            index -= row;
        }
        panic!("edge index out of range");
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        (self.edge_bits >> Self::edge_index(self.n_vertices, a, b)) & 1 == 1
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Self {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        GraphAdjacency {
            n_vertices: self.n_vertices,
            edge_bits: self.edge_bits | 1 << Self::edge_index(self.n_vertices, a, b),
        }
    }

    /// Quadratic form sum_{i<j} A_ij x_i x_j mod 2 on a vertex subset.
    pub fn quadratic_form(&self, x: usize) -> u8 {
        let mut acc = 0u32;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut rest2 = rest;
            while rest2 != 0 {
                let j = rest2.trailing_zeros() as usize;
                rest2 &= rest2 - 1;
                acc += ((self.edge_bits >> Self::edge_index(self.n_vertices, i, j)) & 1) as u32;
            }
        }
        (acc % 2) as u8
    }

    /// Block-diagonal doubling: the same graph on two vertex blocks.
    pub fn doubled(&self) -> GraphAdjacency {
        let n = self.n_vertices;
        let mut out = GraphAdjacency::empty(2 * n);
        for i in 0..n {
            for j in (i + 1)..n {
                if self.has_edge(i, j) {
                    out = out.with_edge(i, j).with_edge(n + i, n + j);
                }
            }
        }
        out
    }

    /// True when there are no edges between the two halves and the two
    /// diagonal blocks coincide (requires an even vertex count).
    pub fn is_doubled_block_form(&self) -> bool {
        if self.n_vertices % 2 != 0 {
            return false;
        }
        let n = self.n_vertices / 2;
        for i in 0..n {
            for j in 0..n {
                if i != j && self.has_edge(i, j) != self.has_edge(n + i, n + j) {
                    return false;
                }
                if self.has_edge(i, n + j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Canonical parameters of a stabilizer state (see module docs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerParams {
    pub n_qubits: usize,
    /// RREF basis rows of the support subspace (length k).
    pub basis_rows: Vec<u32>,
    /// Coset shift, zero on pivot columns.
    pub shift: u32,
    /// Linear phase, one Z_4 digit per basis row.
    pub linear_phase: Vec<u8>,
    /// Quadratic form: row a holds bits for pairs (a, b) with b > a.
    pub quadratic_rows: Vec<u32>,
}

impl StabilizerParams {
    pub fn k(&self) -> usize {
        self.basis_rows.len()
    }

    /// Z_4 phase exponent of the amplitude at subspace coordinate `t`.
    pub fn phase_exponent(&self, t: u32) -> u8 {
        let mut acc: u32 = 0;
        let mut rest = t;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc += self.linear_phase[a] as u32;
            acc += 2 * (self.quadratic_rows[a] & t).count_ones();
        }
        (acc % 4) as u8
    }

    /// Basis index of the support point with coordinate `t`.
    pub fn point(&self, t: u32) -> usize {
        let mut x = self.shift;
        let mut rest = t;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            x ^= self.basis_rows[a];
        }
        x as usize
    }
}

/// A pure stabilizer state with cached amplitudes.
#[derive(Clone, Debug)]
pub struct StabilizerState<T: Scalar> {
    n_qubits: usize,
    params: StabilizerParams,
    support: Vec<usize>,
    support_amps: Vec<C<T>>,
}

impl<T: Scalar> StabilizerState<T> {
    pub fn from_params(params: StabilizerParams) -> Self {
        let k = params.k();
        let scale = T::real(1.0 / (1u64 << k) as f64).sqrt();
        let size = 1usize << k;
        let mut support = Vec::with_capacity(size);
        let mut amps = Vec::with_capacity(size);
        for t in 0..size as u32 {
            support.push(params.point(t));
            amps.push(i_pow::<T>(params.phase_exponent(t)) * scale);
        }
        StabilizerState {
            n_qubits: params.n_qubits,
            params,
            support,
            support_amps: amps,
        }
    }

    pub fn computational_basis(n_qubits: usize, value: u32) -> Self {
        StabilizerState::from_params(StabilizerParams {
            n_qubits,
            basis_rows: vec![],
            shift: value,
            linear_phase: vec![],
            quadratic_rows: vec![],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn params(&self) -> &StabilizerParams {
        &self.params
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn support_amps(&self) -> &[C<T>] {
        &self.support_amps
    }

    /// Dense amplitude vector.
    pub fn amplitudes(&self) -> Vec<C<T>> {
        let mut dense = vec![c_zero::<T>(); self.dim()];
        for (&idx, &a) in self.support.iter().zip(&self.support_amps) {
            dense[idx] = a;
        }
        dense
    }

    pub fn amp_at(&self, index: usize) -> C<T> {
        // support is in t-lex order, not sorted by basis index
        match self.support.iter().position(|&s| s == index) {
            Some(p) => self.support_amps[p],
            None => c_zero(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::pure_from_amplitudes(&self.amplitudes()).expect("unit stabilizer state")
    }

    /// |<self|other>|^2.
    pub fn overlap(&self, other: &StabilizerState<T>) -> Result<T> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        let mut acc = c_zero::<T>();
        for (&idx, &a) in self.support.iter().zip(&self.support_amps) {
            let b = other.amp_at(idx);
            acc += a.conj() * b;
        }
        Ok(acc.norm_sqr())
    }

    /// |<0...0|psi>|^2; equals 2^-k when the support contains 0.
    pub fn overlap_with_zero(&self) -> T {
        self.amp_at(0).norm_sqr()
    }

    /// <psi| P |psi>, exact up to float rounding.
    pub fn pauli_expectation(&self, p: &PauliString) -> C<T> {
        let mut acc = c_zero::<T>();
        for (&col, &amp) in self.support.iter().zip(&self.support_amps) {
            let (row, phase) = p.column_action(col);
            let bra = self.amp_at(row);
            acc += bra.conj() * i_pow::<T>(phase) * amp;
        }
        acc
    }

    /// <psi| M |psi> for a dense operator, using the sparse support.
    pub fn matrix_expectation(&self, m: &crate::operator::Matrix<T>) -> T {
        m.expectation_on_support(&self.support, &self.support_amps).re
    }

    /// n independent signed Pauli generators of the stabilizer group,
    /// derived from expectation values.
    pub fn stabilizer_generators(&self) -> Vec<PauliString> {
        let n = self.n_qubits;
        let mut found: Vec<PauliString> = Vec::with_capacity(n);
        let mut rank_rows: Vec<u64> = Vec::new();
        for idx in 1..(1usize << (2 * n)) {
            let p = PauliString::from_index(n, idx);
            let v = self.pauli_expectation(&p);
            let re = v.re.to_f64_lossy();
            if re.abs() < 1.0 - 1e-6 {
                continue;
            }
            let signed = if re > 0.0 { p } else { p.negated() };
            // check independence over F_2 via (x|z) row reduction
            let mut row = (signed.x_bits() as u64) | ((signed.z_bits() as u64) << n);
            for &r in &rank_rows {
                let pivot = 63 - r.leading_zeros();
                if (row >> pivot) & 1 == 1 {
                    row ^= r;
                }
            }
            if row != 0 {
                rank_rows.push(row);
                rank_rows.sort_by_key(|r| std::cmp::Reverse(*r));
                found.push(signed);
                if found.len() == n {
                    break;
                }
            }
        }
        debug_assert_eq!(found.len(), n);
        found
    }

    /// Export with generator strings and (optionally) amplitudes.
    pub fn export(&self, with_amplitudes: bool) -> crate::json::StabilizerExportJson {
        crate::json::StabilizerExportJson {
            n: self.n_qubits,
            generators: self
                .stabilizer_generators()
                .iter()
                .map(|g| g.to_text())
                .collect(),
            amplitudes: with_amplitudes.then(|| {
                self.amplitudes()
                    .iter()
                    .map(|a| [a.re.to_f64_lossy(), a.im.to_f64_lossy()])
                    .collect()
            }),
        }
    }

    /// Key identifying the state up to global phase (rounded amplitudes).
    pub fn canonical_key(&self) -> Vec<(usize, i64, i64)> {
        canonical_amplitude_key(self.n_qubits, &self.support, &self.support_amps)
    }
}

pub fn canonical_amplitude_key<T: Scalar>(
    _n: usize,
    support: &[usize],
    amps: &[C<T>],
) -> Vec<(usize, i64, i64)> {
    // normalize by the phase of the amplitude on the smallest basis index
    let (pos, _) = support
        .iter()
        .enumerate()
        .min_by_key(|(_, &s)| s)
        .expect("nonempty support");
    let anchor = amps[pos];
    let phase = anchor / anchor.norm();
    let mut entries: Vec<(usize, i64, i64)> = support
        .iter()
        .zip(amps)
        .map(|(&s, &a)| {
            let v = a * phase.conj();
            (
                s,
                (v.re.to_f64_lossy() * 1e6).round() as i64,
                (v.im.to_f64_lossy() * 1e6).round() as i64,
            )
        })
        .collect();
    entries.sort();
    entries
}

/// |G(A)>: amplitudes d^{-1/2} (-1)^{sum_{i<j} A_ij x_i x_j}.
pub fn graph_state<T: Scalar>(adj: &GraphAdjacency) -> StabilizerState<T> {
    let n = adj.n_vertices();
    let params = StabilizerParams {
        n_qubits: n,
        basis_rows: (0..n).map(|j| 1u32 << j).collect(),
        shift: 0,
        linear_phase: vec![0; n],
        quadratic_rows: quadratic_rows_from_graph(adj),
    };
    StabilizerState::from_params(params)
}

fn quadratic_rows_from_graph(adj: &GraphAdjacency) -> Vec<u32> {
    let n = adj.n_vertices();
    (0..n)
        .map(|i| {
            let mut row = 0u32;
            for j in (i + 1)..n {
                if adj.has_edge(i, j) {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect()
}

/// Coherent state: diagonal single-qubit phases i^{c_j} applied to |G(A)>.
pub fn coherent_state<T: Scalar>(adj: &GraphAdjacency, phases: &[u8]) -> StabilizerState<T> {
    let n = adj.n_vertices();
    assert_eq!(phases.len(), n);
    let params = StabilizerParams {
        n_qubits: n,
        basis_rows: (0..n).map(|j| 1u32 << j).collect(),
        shift: 0,
        linear_phase: phases.to_vec(),
        quadratic_rows: quadratic_rows_from_graph(adj),
    };
    StabilizerState::from_params(params)
}

/// Exact number of pure stabilizer states: 2^n prod_{j=1..n} (2^j + 1).
pub fn stabilizer_count(n: usize) -> u128 {
    let mut count: u128 = 1 << n;
    for j in 1..=n {
        count *= (1u128 << j) + 1;
    }
    count
}

/// C(k, 2), safe at k = 0.
fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Gaussian binomial [n k]_2: number of k-dim subspaces of F_2^n.
pub fn gaussian_binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (k - i)) - 1;
    }
    num / den
}

#[derive(Clone, Debug)]
struct PivotCombo {
    pivots: Vec<usize>,
    /// Free matrix positions (row, col) in row-major order.
    free_positions: Vec<(usize, usize)>,
    /// Non-pivot columns, ascending; shift bits live here.
    non_pivots: Vec<usize>,
    /// Number of states carried by this combo.
    states: u128,
}

#[derive(Clone, Debug)]
struct KBlock {
    k: usize,
    combos: Vec<PivotCombo>,
    states: u128,
}

/// Index structure over the canonical parametrization for one qubit count.
#[derive(Clone, Debug)]
pub struct StabilizerIndex {
    n: usize,
    blocks: Vec<KBlock>,
    total: u128,
}

impl StabilizerIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_STREAM_QUBITS {
            return Err(Error::SizeCap {
                what: "stabilizer enumeration qubits",
                requested: n,
                cap: MAX_STREAM_QUBITS,
            });
        }
        let mut blocks = Vec::new();
        let mut total: u128 = 0;
        for k in 0..=n {
            let phase_states: u128 = (1u128 << (2 * k)) * (1u128 << (pair_count(k)));
            let shift_states: u128 = 1u128 << (n - k);
            let mut combos = Vec::new();
            let mut block_states: u128 = 0;
            for pivots in combinations(n, k) {
                let pivot_set: u32 = pivots.iter().fold(0, |m, &p| m | 1 << p);
                let mut free_positions = Vec::new();
                for (row, &pcol) in pivots.iter().enumerate() {
                    for col in (pcol + 1)..n {
                        if pivot_set >> col & 1 == 0 {
                            free_positions.push((row, col));
                        }
                    }
                }
                let non_pivots: Vec<usize> =
                    (0..n).filter(|c| pivot_set >> c & 1 == 0).collect();
                let states = (1u128 << free_positions.len()) * shift_states * phase_states;
                block_states += states;
                combos.push(PivotCombo {
                    pivots,
                    free_positions,
                    non_pivots,
                    states,
                });
            }
            debug_assert_eq!(
                block_states,
                gaussian_binomial(n, k) * shift_states * phase_states
            );
            total += block_states;
            blocks.push(KBlock {
                k,
                combos,
                states: block_states,
            });
        }
        debug_assert_eq!(total, stabilizer_count(n));
        Ok(StabilizerIndex { n, blocks, total })
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// Decode a global index (deterministic lexicographic order) into
    /// canonical parameters.
    pub fn params_at(&self, mut index: u128) -> StabilizerParams {
        assert!(index < self.total, "state index out of range");
        for block in &self.blocks {
            if index >= block.states {
                index -= block.states;
                continue;
            }
            let k = block.k;
            for combo in &block.combos {
                if index >= combo.states {
                    index -= combo.states;
                    continue;
                }
                let q_card = 1u128 << (pair_count(k));
                let c_card = 1u128 << (2 * k);
                let s_card = 1u128 << (self.n - k);
                let q_bits = (index % q_card) as u64;
                index /= q_card;
                let c_val = (index % c_card) as u64;
                index /= c_card;
                let s_bits = (index % s_card) as u64;
                index /= s_card;
                let free_bits = index as u64;
                return self.build_params(combo, k, free_bits, s_bits, c_val, q_bits);
            }
            unreachable!("combo accounting");
        }
        unreachable!("block accounting");
    }

    pub fn state_at<T: Scalar>(&self, index: u128) -> StabilizerState<T> {
        StabilizerState::from_params(self.params_at(index))
    }

    fn build_params(
        &self,
        combo: &PivotCombo,
        k: usize,
        free_bits: u64,
        s_bits: u64,
        c_val: u64,
        q_bits: u64,
    ) -> StabilizerParams {
        let mut rows: Vec<u32> = combo.pivots.iter().map(|&p| 1u32 << p).collect();
        for (bit, &(row, col)) in combo.free_positions.iter().enumerate() {
            if free_bits >> bit & 1 == 1 {
                rows[row] |= 1 << col;
            }
        }
        let mut shift = 0u32;
        for (bit, &col) in combo.non_pivots.iter().enumerate() {
            if s_bits >> bit & 1 == 1 {
                shift |= 1 << col;
            }
        }
        let linear_phase: Vec<u8> = (0..k).map(|a| ((c_val >> (2 * a)) & 3) as u8).collect();
        let mut quadratic_rows = vec![0u32; k];
        let mut bit = 0;
        for a in 0..k {
            for b in (a + 1)..k {
                if q_bits >> bit & 1 == 1 {
                    quadratic_rows[a] |= 1 << b;
                }
                bit += 1;
            }
        }
        StabilizerParams {
            n_qubits: self.n,
            basis_rows: rows,
            shift,
            linear_phase,
            quadratic_rows,
        }
    }

    /// Uniformly random state via the exact per-block weights.
    pub fn sample_params(&self, rng: &mut impl Rng) -> StabilizerParams {
        let mut pick = loop {
            // rejection-free since total fits in u128 and we draw 128 bits
            let hi = (rng.gen::<u64>() as u128) << 64;
            let draw = hi | rng.gen::<u64>() as u128;
            let bound = u128::MAX - u128::MAX % self.total;
            if draw < bound {
                break draw % self.total;
            }
        };
        for block in &self.blocks {
            if pick >= block.states {
                pick -= block.states;
                continue;
            }
            for combo in &block.combos {
                if pick >= combo.states {
                    pick -= combo.states;
                    continue;
                }
                let k = block.k;
                let free_bits = rng.gen::<u64>() & mask64(combo.free_positions.len());
                let s_bits = rng.gen::<u64>() & mask64(self.n - k);
                let c_val = rng.gen::<u64>() & mask64(2 * k);
                let q_bits = rng.gen::<u64>() & mask64(pair_count(k));
                return self.build_params(combo, k, free_bits, s_bits, c_val, q_bits);
            }
        }
        unreachable!("sampling accounting");
    }
}

fn mask64(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for c in start..n {
            current.push(c);
            rec(c + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Every pure stabilizer state on `n <= 4` qubits, in enumeration order.
pub fn enumerate_stabilizer_states<T: Scalar>(n: usize) -> Result<Vec<StabilizerState<T>>> {
    if n == 0 || n > MAX_FULL_ENUMERATION_QUBITS {
        return Err(Error::SizeCap {
            what: "full stabilizer enumeration qubits",
            requested: n,
            cap: MAX_FULL_ENUMERATION_QUBITS,
        });
    }
    let index = StabilizerIndex::new(n)?;
    Ok((0..index.total()).map(|i| index.state_at(i)).collect())
}

/// The state families used by the reduction and the membership scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    AllStabilizer,
    Graph,
    DoubledGraph,
    MaxCoherent,
    OverlapT,
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::AllStabilizer => "all-stabilizer",
            FamilyTag::Graph => "graph",
            FamilyTag::DoubledGraph => "doubled-graph",
            FamilyTag::MaxCoherent => "coherent",
            FamilyTag::OverlapT => "overlap-t",
        }
    }
}

/// A concrete enumerable family of stabilizer states on `qubits()` qubits,
/// addressable by index for partitioned and resumable scans.
#[derive(Clone, Debug)]
pub struct StateFamily {
    tag: FamilyTag,
    /// Qubit count of the yielded states.
    qubits: usize,
    /// For DoubledGraph: vertices per copy; otherwise equals `qubits`.
    base_vertices: usize,
    index: Option<StabilizerIndex>,
    /// For OverlapT: per-(k, combo) state counts with the shift pinned to 0.
    overlap_counts: Vec<(usize, usize, u128)>,
    size: u128,
}

impl StateFamily {
    pub fn new(tag: FamilyTag, qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_STREAM_QUBITS {
            return Err(Error::SizeCap {
                what: "family qubits",
                requested: qubits,
                cap: MAX_STREAM_QUBITS,
            });
        }
        let base_vertices = match tag {
            FamilyTag::DoubledGraph => {
                if qubits % 2 != 0 {
                    return Err(Error::InvalidParameter {
                        name: "qubits",
                        reason: "doubled-graph family needs an even qubit count".into(),
                    });
                }
                qubits / 2
            }
            _ => qubits,
        };
        let mut index = None;
        let mut overlap_counts = Vec::new();
        let size: u128 = match tag {
            FamilyTag::AllStabilizer => {
                let idx = StabilizerIndex::new(qubits)?;
                let total = idx.total();
                index = Some(idx);
                total
            }
            FamilyTag::Graph => 1u128 << (qubits * (qubits - 1) / 2),
            FamilyTag::DoubledGraph => 1u128 << (base_vertices * (base_vertices - 1) / 2),
            FamilyTag::MaxCoherent => {
                (1u128 << (qubits * (qubits - 1) / 2)) * (1u128 << (2 * qubits))
            }
            FamilyTag::OverlapT => {
                let idx = StabilizerIndex::new(qubits)?;
                let mut total = 0u128;
                for (bi, block) in idx.blocks.iter().enumerate() {
                    let k = block.k;
                    let per_shiftless = (1u128 << (2 * k)) * (1u128 << (pair_count(k)));
                    for (ci, combo) in block.combos.iter().enumerate() {
                        let cnt =
                            (1u128 << combo.free_positions.len()) * per_shiftless;
                        overlap_counts.push((bi, ci, cnt));
                        total += cnt;
                    }
                }
                index = Some(idx);
                total
            }
        };
        Ok(StateFamily {
            tag,
            qubits,
            base_vertices,
            index,
            overlap_counts,
            size,
        })
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn state_at<T: Scalar>(&self, index: u128) -> StabilizerState<T> {
        assert!(index < self.size, "family index out of range");
        match self.tag {
            FamilyTag::AllStabilizer => self.index.as_ref().unwrap().state_at(index),
            FamilyTag::Graph => {
                let adj = GraphAdjacency::new(self.qubits, index as u64).unwrap();
                graph_state(&adj)
            }
            FamilyTag::DoubledGraph => {
                let adj = GraphAdjacency::new(self.base_vertices, index as u64).unwrap();
                graph_state(&adj.doubled())
            }
            FamilyTag::MaxCoherent => {
                let c_card = 1u128 << (2 * self.qubits);
                let c_val = (index % c_card) as u64;
                let bits = (index / c_card) as u64;
                let adj = GraphAdjacency::new(self.qubits, bits).unwrap();
                let phases: Vec<u8> = (0..self.qubits)
                    .map(|j| ((c_val >> (2 * j)) & 3) as u8)
                    .collect();
                coherent_state(&adj, &phases)
            }
            FamilyTag::OverlapT => {
                let idx = self.index.as_ref().unwrap();
                let mut rest = index;
                for &(bi, ci, cnt) in &self.overlap_counts {
                    if rest >= cnt {
                        rest -= cnt;
                        continue;
                    }
                    let block = &idx.blocks[bi];
                    let combo = &block.combos[ci];
                    let k = block.k;
                    let q_card = 1u128 << (pair_count(k));
                    let c_card = 1u128 << (2 * k);
                    let q_bits = (rest % q_card) as u64;
                    rest /= q_card;
                    let c_val = (rest % c_card) as u64;
                    rest /= c_card;
                    let free_bits = rest as u64;
                    let params = idx.build_params(combo, k, free_bits, 0, c_val, q_bits);
                    return StabilizerState::from_params(params);
                }
                unreachable!("overlap accounting")
            }
        }
    }

    /// Iterate a contiguous index range (resumable, partitionable).
    pub fn iter_range<T: Scalar>(
        &self,
        start: u128,
        count: u128,
    ) -> impl Iterator<Item = StabilizerState<T>> + '_ {
        let end = (start + count).min(self.size);
        (start..end).map(move |i| self.state_at(i))
    }
}

/// Membership predicates used by the family-chain checks.
pub fn is_max_coherent<T: Scalar>(state: &StabilizerState<T>) -> bool {
    state.params().k() == state.n_qubits() && state.params().shift == 0
}

pub fn is_overlap_t<T: Scalar>(state: &StabilizerState<T>) -> bool {
    // overlap with |0...0> at least 1/dim <=> the support contains 0
    let dim_inv = 1.0 / state.dim() as f64;
    state.overlap_with_zero().to_f64_lossy() >= dim_inv - 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use crate::sampling::rng_for;
    use std::collections::HashSet;

    #[test]
    fn counts_match_formula_small_n() {
        assert_eq!(stabilizer_count(1), 6);
        assert_eq!(stabilizer_count(2), 60);
        assert_eq!(stabilizer_count(3), 1080);
        assert_eq!(stabilizer_count(4), 36720);
        assert_eq!(stabilizer_count(6), 315_057_600);
    }

    #[test]
    fn enumeration_has_exact_counts_and_no_duplicates() {
        for n in 1..=3usize {
            let states = enumerate_stabilizer_states::<f64>(n).unwrap();
            assert_eq!(states.len() as u128, stabilizer_count(n));
            let keys: HashSet<_> = states.iter().map(|s| s.canonical_key()).collect();
            assert_eq!(keys.len(), states.len(), "duplicate state at n = {n}");
        }
    }

    #[test]
    fn single_qubit_states_match_hand_enumeration() {
        // independent oracle: the six eigenstates of X, Y, Z
        let s = 1.0 / 2f64.sqrt();
        let hand: Vec<Vec<(f64, f64)>> = vec![
            vec![(1.0, 0.0), (0.0, 0.0)],  // |0>
            vec![(0.0, 0.0), (1.0, 0.0)],  // |1>
            vec![(s, 0.0), (s, 0.0)],      // |+>
            vec![(s, 0.0), (-s, 0.0)],     // |->
            vec![(s, 0.0), (0.0, s)],      // |+i>
            vec![(s, 0.0), (0.0, -s)],     // |-i>
        ];
        let states = enumerate_stabilizer_states::<f64>(1).unwrap();
        for amps in hand {
            let v: Vec<crate::Cpx> = amps.iter().map(|&(re, im)| crate::Cpx::new(re, im)).collect();
            let found = states.iter().any(|st| {
                let dense = st.amplitudes();
                let ip: crate::Cpx = dense
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                (ip.norm() - 1.0).abs() < 1e-9
            });
            assert!(found, "missing hand-enumerated state {amps:?}");
        }
    }

    #[test]
    fn two_qubit_states_match_group_oracle() {
        // independent oracle: enumerate stabilizer groups directly
        let n = 2usize;
        let mut groups: HashSet<Vec<usize>> = HashSet::new();
        let mut oracle_keys: HashSet<Vec<(usize, i64, i64)>> = HashSet::new();
        for i in 1..16usize {
            for j in (i + 1)..16usize {
                let p = PauliString::from_index(n, i);
                let q = PauliString::from_index(n, j);
                if !p.commutes_with(&q) {
                    continue;
                }
                let pq = p.mul(&q).unwrap();
                let mut members = vec![
                    0usize,
                    i,
                    j,
                    (pq.x_bits() as usize) | ((pq.z_bits() as usize) << n),
                ];
                members.sort();
                if !groups.insert(members) {
                    continue;
                }
                for signs in 0..4u8 {
                    let g1 = if signs & 1 == 0 { p } else { p.negated() };
                    let g2 = if signs & 2 == 0 { q } else { q.negated() };
                    let id = crate::operator::Matrix::<f64>::identity(4);
                    let proj1 = id.add(&g1.dense()).scale(0.5);
                    let proj2 = id.add(&g2.dense()).scale(0.5);
                    let proj = proj1.matmul(&proj2);
                    // rank-1 projector: find a nonzero column and normalize
                    let col = (0..4)
                        .max_by(|&a, &b| {
                            let na: f64 = (0..4).map(|r| proj[(r, a)].norm_sqr()).sum();
                            let nb: f64 = (0..4).map(|r| proj[(r, b)].norm_sqr()).sum();
                            na.partial_cmp(&nb).unwrap()
                        })
                        .unwrap();
                    let mut v: Vec<crate::Cpx> = (0..4).map(|r| proj[(r, col)]).collect();
                    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                    for a in &mut v {
                        *a /= norm;
                    }
                    let support: Vec<usize> = (0..4).filter(|&r| v[r].norm() > 1e-9).collect();
                    let amps: Vec<crate::Cpx> = support.iter().map(|&r| v[r]).collect();
                    oracle_keys.insert(canonical_amplitude_key(n, &support, &amps));
                }
            }
        }
        assert_eq!(oracle_keys.len(), 60);
        let states = enumerate_stabilizer_states::<f64>(2).unwrap();
        let enum_keys: HashSet<_> = states.iter().map(|s| s.canonical_key()).collect();
        assert_eq!(enum_keys, oracle_keys);
    }

    #[test]
    fn generator_equations_hold_on_samples() {
        let mut rng = rng_for(3, 0);
        for n in 1..=3usize {
            let index = StabilizerIndex::new(n).unwrap();
            for _ in 0..100 {
                let st = StabilizerState::<f64>::from_params(index.sample_params(&mut rng));
                let amps = st.amplitudes();
                for g in st.stabilizer_generators() {
                    // g |psi> = |psi>
                    let mut out = vec![crate::Cpx::new(0.0, 0.0); amps.len()];
                    for col in 0..amps.len() {
                        let (row, phase) = g.column_action(col);
                        out[row] += crate::scalar::i_pow::<f64>(phase) * amps[col];
                    }
                    let dev: f64 = out
                        .iter()
                        .zip(&amps)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    assert!(dev < 1e-10, "generator fails at n = {n}");
                }
            }
        }
    }

    #[test]
    fn graph_state_amplitudes() {
        // empty graph on 2 vertices = |+>|+>
        let adj = GraphAdjacency::empty(2);
        let st = graph_state::<f64>(&adj);
        for a in st.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
        // single edge: amplitudes (1,1,1,-1)/2
        let adj = GraphAdjacency::empty(2).with_edge(0, 1);
        let st = graph_state::<f64>(&adj);
        let dense = st.amplitudes();
        let signs = [1.0, 1.0, 1.0, -1.0];
        for (a, s) in dense.iter().zip(signs) {
            assert!((a.re - 0.5 * s).abs() < 1e-12);
        }
        // triangle: amplitude of |111> is (-1)^3 / sqrt(8)
        let adj = GraphAdjacency::empty(3)
            .with_edge(0, 1)
            .with_edge(0, 2)
            .with_edge(1, 2);
        let st = graph_state::<f64>(&adj);
        let a = st.amplitudes()[7];
        assert!((a.re + 1.0 / 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn family_sizes() {
        let doubled = StateFamily::new(FamilyTag::DoubledGraph, 6).unwrap();
        assert_eq!(doubled.size(), 8);
        let graphs = StateFamily::new(FamilyTag::Graph, 6).unwrap();
        assert_eq!(graphs.size(), 32768);
        let coherent = StateFamily::new(FamilyTag::MaxCoherent, 2).unwrap();
        assert_eq!(coherent.size(), 2 * 16);
        for st in coherent.iter_range::<f64>(0, coherent.size()) {
            for a in st.support_amps() {
                assert!((a.norm() - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn family_chain_exhaustive_at_four_qubits() {
        // graphs subset of coherent subset of overlap-T subset of all
        let graphs = StateFamily::new(FamilyTag::Graph, 4).unwrap();
        let coherent = StateFamily::new(FamilyTag::MaxCoherent, 4).unwrap();
        let overlap = StateFamily::new(FamilyTag::OverlapT, 4).unwrap();
        let all = StateFamily::new(FamilyTag::AllStabilizer, 4).unwrap();
        assert_eq!(all.size(), 36720);
        let collect = |fam: &StateFamily| -> HashSet<Vec<(usize, i64, i64)>> {
            fam.iter_range::<f64>(0, fam.size())
                .map(|s| s.canonical_key())
                .collect()
        };
        let g = collect(&graphs);
        let c = collect(&coherent);
        let t = collect(&overlap);
        let s = collect(&all);
        assert_eq!(g.len() as u128, graphs.size());
        assert_eq!(c.len() as u128, coherent.size());
        assert_eq!(t.len() as u128, overlap.size());
        assert_eq!(s.len() as u128, all.size());
        assert!(g.is_subset(&c));
        assert!(c.is_subset(&t));
        assert!(t.is_subset(&s));
        // predicate versions agree on the enumerated members
        for st in graphs.iter_range::<f64>(0, graphs.size()) {
            assert!(is_max_coherent(&st) && is_overlap_t(&st));
        }
    }

    #[test]
    fn graph_states_have_flat_pauli_spectrum() {
        let mut rng = rng_for(5, 0);
        for n in 1..=4usize {
            for _ in 0..5 {
                let bits = rng.gen::<u64>() & mask64(n * (n - 1) / 2);
                let st = graph_state::<f64>(&GraphAdjacency::new(n, bits).unwrap());
                let mut on = 0usize;
                for idx in 0..(1usize << (2 * n)) {
                    let p = PauliString::from_index(n, idx);
                    let v = st.pauli_expectation(&p).norm();
                    if (v - 1.0).abs() < 1e-9 {
                        on += 1;
                    } else {
                        assert!(v < 1e-9, "pauli value neither 0 nor 1");
                    }
                }
                assert_eq!(on, 1 << n);
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let zero = StabilizerState::<f64>::computational_basis(1, 0);
        let one = StabilizerState::<f64>::computational_basis(1, 1);
        let plus = graph_state::<f64>(&GraphAdjacency::empty(1));
        assert!((zero.overlap(&zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero.overlap(&one).unwrap() < 1e-12);
        assert!((zero.overlap(&plus).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn enumeration_cap_enforced() {
        assert!(enumerate_stabilizer_states::<f64>(5).is_err());
        assert!(StabilizerIndex::new(7).is_err());
    }

    #[test]
    fn range_iteration_is_partitionable() {
        let fam = StateFamily::new(FamilyTag::AllStabilizer, 2).unwrap();
        let whole: Vec<_> = fam
            .iter_range::<f64>(0, fam.size())
            .map(|s| s.canonical_key())
            .collect();
        let mut pieces: Vec<_> = fam
            .iter_range::<f64>(0, 17)
            .map(|s| s.canonical_key())
            .collect();
        pieces.extend(fam.iter_range::<f64>(17, 43).map(|s| s.canonical_key()));
        pieces.extend(fam.iter_range::<f64>(60, 1000).map(|s| s.canonical_key()));
        assert_eq!(whole, pieces);
    }
}
