//! Compiler from 3-SAT instances to witness-detection instances over
//! stabilizer states, with a stage-by-stage verifier.
//!
//! A variable is assigned to an edge of an `n`-vertex graph
//! (lexicographically); on two copies of a graph state, rank-one
//! operators indexed by edges read out the assignment bits, so the
//! number of violated clauses becomes an expectation value. Penalty
//! stages then pin the optimizing state down through nested families:
//! identical two-copy graph states, single-copy graph states on the
//! doubled vertex set, phase-decorated (coherent) states, states with
//! large overlap on |0...0>, and finally all stabilizer states. The
//! finished instance is the normalized witness `W = -H4/|H4|_2` with
//! threshold `gamma = -1/(2 |H4|_2)` and promise width
//! `delta = 1/(4 d^2 |H4|_2)`.
//!
//! Stage-4 coefficient: the shift `(|H|_inf + 1)(I - d^2 |0><0|)` added
//! on top of stage 2 keeps the unsatisfiable-case minimum at 1 across
//! the whole stabilizer set. A larger multiple of the same shift would
//! reward stabilizer states with overlap on |0...0> above 1/d^2 enough
//! to turn their values negative, breaking the **no** case; the chosen
//! coefficient is covered by the stage-2 penalties (see the stage tests
//! and `verify_stage`).

use crate::error::{Error, Result};
use crate::operator::{schatten_norm, HermitianOperator, Matrix, SchattenP};
use crate::scalar::{c, c_zero};
use crate::stabilizer::{FamilyTag, GraphAdjacency, StabilizerState, StateFamily};
use crate::Scalar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const MAX_CONSTRUCTION_VERTICES: usize = 4; // 2n = 8 qubits dense
pub const MAX_VERIFICATION_VERTICES: usize = 3; // 2n = 6 qubits scanned

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for clause in &clauses {
            let mut vars: Vec<usize> = clause.iter().map(|l| l.var).collect();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() != 3 {
                return Err(Error::DuplicateVariable {
                    var: clause
                        .iter()
                        .map(|l| l.var)
                        .find(|v| clause.iter().filter(|l| l.var == *v).count() > 1)
                        .unwrap(),
                });
            }
            if let Some(l) = clause.iter().find(|l| l.var >= num_vars) {
                return Err(Error::LiteralOutOfRange {
                    var: l.var as i64 + 1,
                    num_vars,
                });
            }
        }
        Ok(SatInstance { num_vars, clauses })
    }

    /// Number of violated clauses under an assignment (bit v of
    /// `assignment` is variable v). A clause is violated when every
    /// literal is false.
    pub fn clause_energy(&self, assignment: u32) -> Result<u32> {
        if self.num_vars < 32 && assignment >> self.num_vars != 0 {
            return Err(Error::InvalidParameter {
                name: "assignment",
                reason: "more bits than variables".into(),
            });
        }
        Ok(self
            .clauses
            .iter()
            .filter(|clause| {
                clause.iter().all(|l| {
                    let x = (assignment >> l.var) & 1 == 1;
                    x == l.negated // literal false
                })
            })
            .count() as u32)
    }

    /// Brute-force satisfiability plus a satisfying assignment.
    pub fn solve_brute_force(&self) -> Option<u32> {
        assert!(self.num_vars <= 24, "brute force cap");
        (0u32..1 << self.num_vars).find(|&x| self.clause_energy(x).unwrap() == 0)
    }

    pub fn is_satisfiable(&self) -> bool {
        self.solve_brute_force().is_some()
    }
}

/// Parse DIMACS CNF; clauses must have exactly three distinct variables.
pub fn parse_cnf(text: &str) -> Result<SatInstance> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(Error::CnfParse {
                    line: lineno + 1,
                    reason: format!("bad problem line '{line}'"),
                });
            }
            num_vars = Some(fields[1].parse().map_err(|_| Error::CnfParse {
                line: lineno + 1,
                reason: "bad variable count".into(),
            })?);
            declared_clauses = fields[2].parse().map_err(|_| Error::CnfParse {
                line: lineno + 1,
                reason: "bad clause count".into(),
            })?;
            continue;
        }
        let Some(nv) = num_vars else {
            return Err(Error::CnfParse {
                line: lineno + 1,
                reason: "clause before problem line".into(),
            });
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| Error::CnfParse {
                line: lineno + 1,
                reason: format!("bad literal '{tok}'"),
            })?;
            if lit == 0 {
                if current.len() != 3 {
                    return Err(Error::WrongClauseWidth { got: current.len() });
                }
                let clause = [current[0], current[1], current[2]];
                current.clear();
                // delegate duplicate/range validation
                let probe = SatInstance::new(nv, vec![clause])?;
                clauses.push(probe.clauses[0]);
            } else {
                let var = lit.unsigned_abs() as usize;
                if var == 0 || var > nv {
                    return Err(Error::LiteralOutOfRange {
                        var: lit,
                        num_vars: nv,
                    });
                }
                current.push(Literal {
                    var: var - 1,
                    negated: lit < 0,
                });
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::WrongClauseWidth { got: current.len() });
    }
    let nv = num_vars.ok_or(Error::CnfParse {
        line: 0,
        reason: "missing problem line".into(),
    })?;
    if declared_clauses != 0 && clauses.len() != declared_clauses {
        // tolerated: many generators emit a stale count; keep parsing strict
        // about structure but not about this header field
    }
    SatInstance::new(nv, clauses)
}

/// Basis state with ones exactly at the given bit positions.
fn basis_with_ones(positions: &[usize]) -> usize {
    positions.iter().fold(0usize, |m, &p| m | (1 << p))
}

/// Rank-one edge readout (dim/4) (|0..0> + sign |i,j>)(h.c.) as a dense
/// matrix on `qubits` qubits.
fn edge_projector<T: Scalar>(qubits: usize, ones: &[usize], sign: f64) -> Matrix<T> {
    let dim = 1usize << qubits;
    let idx = basis_with_ones(ones);
    let mut v = vec![c_zero::<T>(); dim];
    v[0] = c(1.0, 0.0);
    v[idx] = c(sign, 0.0);
    Matrix::outer(&v, &v).scale(T::real(dim as f64 / 4.0))
}

/// (dim/4) (|0..0> + s_b |left>)(<0..0| + s_c <right|), Hermitized.
fn cross_readout_sym<T: Scalar>(
    qubits: usize,
    left: &[usize],
    sign_left: f64,
    right: &[usize],
    sign_right: f64,
) -> Matrix<T> {
    let dim = 1usize << qubits;
    let mut u = vec![c_zero::<T>(); dim];
    u[0] = c(1.0, 0.0);
    u[basis_with_ones(left)] = c(sign_left, 0.0);
    let mut w = vec![c_zero::<T>(); dim];
    w[0] = c(1.0, 0.0);
    w[basis_with_ones(right)] = c(sign_right, 0.0);
    let y = Matrix::outer(&u, &w).scale(T::real(dim as f64 / 4.0));
    y.add(&y.adjoint()).scale(T::real(0.5))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildMetadata {
    pub tool_version: String,
    pub vertices: usize,
    pub qubits: usize,
}

/// The compiled instance: clause operator, penalty stages, and the
/// final witness triple.
#[derive(Clone, Debug)]
pub struct ReductionArtifact<T: Scalar> {
    pub instance: SatInstance,
    pub vertices: usize,
    /// Variable -> vertex pair (i < j), lexicographic.
    pub var_to_edge: Vec<(usize, usize)>,
    /// Clause operator on two copies (2n qubits; copy 1 = low bits).
    pub clause_op: HermitianOperator<T>,
    /// + edge-locking penalties: zero exactly on doubled-block graphs.
    pub stage1: HermitianOperator<T>,
    /// + phase-locking penalties on every qubit.
    pub stage2: HermitianOperator<T>,
    /// + overlap shift rewarding |0...0> weight 1/d^2.
    pub stage3: HermitianOperator<T>,
    /// + overlap floor penalizing states orthogonal to |0...0>.
    pub stage4: HermitianOperator<T>,
    pub witness: HermitianOperator<T>,
    pub gamma: f64,
    pub delta: f64,
    pub norm_h_inf: f64,
    pub norm_h4_fro: f64,
}

impl<T: Scalar> ReductionArtifact<T> {
    pub fn qubits(&self) -> usize {
        2 * self.vertices
    }

    /// d = 2^n for n vertices (one copy).
    pub fn copy_dim(&self) -> usize {
        1 << self.vertices
    }

    /// Norm ceiling 2^4 d^7 log2(d)^6 on |H4|_2.
    pub fn norm_ceiling(&self) -> f64 {
        let d = self.copy_dim() as f64;
        16.0 * d.powi(7) * (d.log2()).powi(6)
    }

    /// The adjacency (and doubled graph state) encoding an assignment:
    /// edge bit clear means the variable is true.
    pub fn assignment_adjacency(&self, assignment: u32) -> GraphAdjacency {
        let mut adj = GraphAdjacency::empty(self.vertices);
        for (v, &(i, j)) in self.var_to_edge.iter().enumerate() {
            if (assignment >> v) & 1 == 0 {
                adj = adj.with_edge(i, j);
            }
        }
        adj
    }

    /// Assignment read off an adjacency: x_e = (1 + (-1)^{A_e})/2.
    pub fn adjacency_assignment(&self, adj: &GraphAdjacency) -> u32 {
        let mut x = 0u32;
        for (v, &(i, j)) in self.var_to_edge.iter().enumerate() {
            if !adj.has_edge(i, j) {
                x |= 1 << v;
            }
        }
        x
    }
}

/// Build the clause operator on two copies of the n-vertex graph
/// register: for a clause with literal edges (alpha, beta, gamma) and
/// signs s (s = 1 on a positive literal), the term is
/// `X_alpha^{s1} (x) sym(Y_{beta gamma}^{s2 s3})` with `X` acting on
/// copy 1 (low bits) and `Y` on copy 2 (high bits).
pub fn build_clause_hamiltonian<T: Scalar>(
    instance: &SatInstance,
    vertices: usize,
) -> Result<ReductionArtifact<T>> {
    if vertices > MAX_CONSTRUCTION_VERTICES {
        return Err(Error::SizeCap {
            what: "reduction vertices",
            requested: vertices,
            cap: MAX_CONSTRUCTION_VERTICES,
        });
    }
    let capacity = vertices * (vertices - 1) / 2;
    if instance.num_vars > capacity {
        return Err(Error::ReductionCapacity {
            num_vars: instance.num_vars,
            vertices,
        });
    }
    let n = vertices;
    let qubits = 2 * n;
    let dim = 1usize << qubits;
    let var_to_edge: Vec<(usize, usize)> = (0..instance.num_vars)
        .map(|v| GraphAdjacency::pair_from_index(n, v))
        .collect();
    let mut h = Matrix::<T>::zeros(dim);
    for clause in &instance.clauses {
        // sign s: factor is (x xor s); s = 1 on positive literals
        let sgn = |l: &Literal| if l.negated { 1.0 } else { -1.0 }; // (-1)^s
        let (i1, j1) = var_to_edge[clause[0].var];
        let (i2, j2) = var_to_edge[clause[1].var];
        let (i3, j3) = var_to_edge[clause[2].var];
        // per-copy operators on n qubits, then copy 1 = low bits,
        // copy 2 = high bits
        let x_term = edge_projector::<T>(n, &[i1, j1], sgn(&clause[0]));
        let y_term = cross_readout_sym::<T>(
            n,
            &[i2, j2],
            sgn(&clause[1]),
            &[i3, j3],
            sgn(&clause[2]),
        );
        h = h.add(&y_term.kron(&x_term));
    }
    let clause_op = HermitianOperator::new(h)?;
    let norm_h_inf = schatten_norm(&clause_op, SchattenP::Infinity)?.to_f64_lossy();
    Ok(ReductionArtifact {
        instance: instance.clone(),
        vertices,
        var_to_edge,
        stage1: clause_op.clone(),
        stage2: clause_op.clone(),
        stage3: clause_op.clone(),
        stage4: clause_op.clone(),
        witness: clause_op.clone(),
        clause_op,
        gamma: 0.0,
        delta: 0.0,
        norm_h_inf,
        norm_h4_fro: 0.0,
    })
}

/// Add the penalty stages on top of the clause operator.
pub fn build_stage_hamiltonians<T: Scalar>(
    mut artifact: ReductionArtifact<T>,
) -> Result<ReductionArtifact<T>> {
    let n = artifact.vertices;
    let qubits = 2 * n;
    let dim = 1usize << qubits;
    let coeff = T::real(artifact.norm_h_inf + 1.0);

    // stage 1: cross-edge and block-mismatch locks
    let mut penalty1 = Matrix::<T>::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            penalty1 = penalty1.add(&edge_projector::<T>(qubits, &[i, n + j], -1.0));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            penalty1 = penalty1.add(&edge_projector::<T>(
                qubits,
                &[i, j, n + i, n + j],
                -1.0,
            ));
        }
    }
    let stage1 = artifact
        .clause_op
        .matrix()
        .add(&penalty1.scale(coeff));

    // stage 2: phase locks on each qubit
    let mut phase_pen = Matrix::<T>::zeros(dim);
    for q in 0..qubits {
        phase_pen = phase_pen.add(&edge_projector::<T>(qubits, &[q], -1.0));
    }
    let stage2 = stage1.add(&phase_pen.scale(coeff * T::real(2.0)));

    // stage 3: reward overlap exactly 1/d^2 on |0...0>
    let mut zero_amp = vec![c_zero::<T>(); dim];
    zero_amp[0] = c(1.0, 0.0);
    let p0 = Matrix::outer(&zero_amp, &zero_amp);
    let shift3 = p0.scale(T::real(dim as f64)).sub(&Matrix::identity(dim));
    let stage3 = stage2.add(&shift3.scale(coeff));

    // stage 4: floor for states orthogonal to |0...0>; net effect on top
    // of stage 2 is +(|H|_inf + 1)(I - d^2 |0><0|)
    let shift4 = Matrix::identity(dim).sub(&p0.scale(T::real(dim as f64)));
    let stage4 = stage3.add(&shift4.scale(coeff * T::real(2.0)));

    artifact.stage1 = HermitianOperator::new(stage1)?;
    artifact.stage2 = HermitianOperator::new(stage2)?;
    artifact.stage3 = HermitianOperator::new(stage3)?;
    artifact.stage4 = HermitianOperator::new(stage4)?;
    Ok(artifact)
}

/// Normalize into the final witness-detection instance.
pub fn finalize_wwd<T: Scalar>(mut artifact: ReductionArtifact<T>) -> Result<ReductionArtifact<T>> {
    let norm = schatten_norm(&artifact.stage4, SchattenP::Two)?.to_f64_lossy();
    if norm <= 0.0 {
        return Err(Error::Numerical {
            reason: "stage-4 operator vanished".into(),
        });
    }
    let dsq = (1usize << artifact.qubits()) as f64;
    artifact.witness = artifact.stage4.scale(T::real(-1.0 / norm));
    artifact.gamma = -0.5 / norm;
    artifact.delta = 0.25 / (dsq * norm);
    artifact.norm_h4_fro = norm;
    if norm > artifact.norm_ceiling() + 1e-6 {
        return Err(Error::Numerical {
            reason: format!(
                "norm chain violated: {norm} > {}",
                artifact.norm_ceiling()
            ),
        });
    }
    Ok(artifact)
}

/// Compile a SAT instance end to end.
pub fn reduce<T: Scalar>(instance: &SatInstance, vertices: usize) -> Result<ReductionArtifact<T>> {
    finalize_wwd(build_stage_hamiltonians(build_clause_hamiltonian(
        instance, vertices,
    )?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyStage {
    /// Clause operator over identical two-copy graph states.
    TwoCopy,
    /// Stage 1 over all graph states on the doubled vertex set.
    SingleCopyGraphs,
    /// Stage 2 over coherent states.
    Coherent,
    /// Stage 3 over states with large |0...0> overlap.
    Overlap,
    /// The finished witness over all stabilizer states.
    FullPolytope,
}

impl VerifyStage {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "two-copy" | "H_2COPY" => VerifyStage::TwoCopy,
            "graphs" | "H1_GRAPHS" => VerifyStage::SingleCopyGraphs,
            "coherent" | "H2_COHERENT" => VerifyStage::Coherent,
            "overlap" | "H3_OVERLAP" => VerifyStage::Overlap,
            "stabilizers" | "H4_STAB" => VerifyStage::FullPolytope,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            VerifyStage::TwoCopy => "two-copy",
            VerifyStage::SingleCopyGraphs => "graphs",
            VerifyStage::Coherent => "coherent",
            VerifyStage::Overlap => "overlap",
            VerifyStage::FullPolytope => "stabilizers",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: String,
    pub satisfiable: bool,
    pub scanned: u64,
    pub min_value: f64,
    pub max_value: f64,
    /// Index (within the scanned family) achieving the minimum.
    pub argmin: String,
    pub pass: bool,
    pub details: String,
}

/// Verify one stage inequality by enumeration or sampling.
///
/// For the families below the decision criterion is: satisfiable
/// instances reach the stage minimum 0 (witness stage: some state clears
/// `gamma + delta`), unsatisfiable instances keep every scanned value at
/// least 1 (witness stage: at most `gamma - delta`).
pub fn verify_stage<T: Scalar>(
    artifact: &ReductionArtifact<T>,
    stage: VerifyStage,
    mode: VerifyMode,
) -> Result<StageReport> {
    if artifact.vertices > MAX_VERIFICATION_VERTICES {
        return Err(Error::SizeCap {
            what: "verification vertices",
            requested: artifact.vertices,
            cap: MAX_VERIFICATION_VERTICES,
        });
    }
    let qubits = artifact.qubits();
    let sat = artifact.instance.is_satisfiable();
    let tol = 1e-9;
    match stage {
        VerifyStage::TwoCopy => {
            let fam = StateFamily::new(FamilyTag::DoubledGraph, qubits)?;
            let (min, argmin, max, scanned) =
                family_min_max::<T>(artifact.clause_op.matrix(), &fam, mode)?;
            let pass = if sat { min.abs() <= tol } else { min >= 1.0 - tol };
            Ok(StageReport {
                stage: stage.name().into(),
                satisfiable: sat,
                scanned,
                min_value: min,
                max_value: max,
                argmin: format!("doubled-graph[{argmin}]"),
                pass,
                details: "min of the clause operator over identical two-copy graph states".into(),
            })
        }
        VerifyStage::SingleCopyGraphs => {
            let fam = StateFamilyVals::graphs(artifact)?;
            let (report, structural_ok) = fam.scan_stage1(mode)?;
            let pass_min = if sat {
                report.0.abs() <= tol
            } else {
                report.0 >= 1.0 - tol
            };
            Ok(StageReport {
                stage: stage.name().into(),
                satisfiable: sat,
                scanned: report.3,
                min_value: report.0,
                max_value: report.2,
                argmin: format!("graph[{}]", report.1),
                pass: pass_min && structural_ok,
                details: format!(
                    "stage-1 penalty vanishes exactly on doubled-block graphs: {structural_ok}"
                ),
            })
        }
        VerifyStage::Coherent => {
            let fam = StateFamily::new(FamilyTag::MaxCoherent, qubits)?;
            let (mut min, mut argmin, mut max, mut scanned) =
                family_min_max::<T>(artifact.stage2.matrix(), &fam, mode)?;
            // always include every graph state (they carry the optimum)
            let graphs = StateFamily::new(FamilyTag::Graph, qubits)?;
            let (gmin, gargmin, gmax, gscanned) = family_min_max::<T>(
                artifact.stage2.matrix(),
                &graphs,
                VerifyMode::Exhaustive,
            )?;
            if gmin < min {
                min = gmin;
                argmin = gargmin;
            }
            max = max.max(gmax);
            scanned += gscanned;
            let pass = if sat { min.abs() <= tol } else { min >= 1.0 - tol };
            Ok(StageReport {
                stage: stage.name().into(),
                satisfiable: sat,
                scanned,
                min_value: min,
                max_value: max,
                argmin: format!("coherent-or-graph[{argmin}]"),
                pass,
                details: "stage-2 over coherent states plus all graph states".into(),
            })
        }
        VerifyStage::Overlap => {
            let fam = StateFamily::new(FamilyTag::OverlapT, qubits)?;
            let (mut min, mut argmin, mut max, mut scanned) =
                family_min_max::<T>(artifact.stage3.matrix(), &fam, mode)?;
            let graphs = StateFamily::new(FamilyTag::Graph, qubits)?;
            let (gmin, gargmin, gmax, gscanned) = family_min_max::<T>(
                artifact.stage3.matrix(),
                &graphs,
                VerifyMode::Exhaustive,
            )?;
            if gmin < min {
                min = gmin;
                argmin = gargmin;
            }
            max = max.max(gmax);
            scanned += gscanned;
            let pass = if sat { min.abs() <= tol } else { min >= 1.0 - tol };
            Ok(StageReport {
                stage: stage.name().into(),
                satisfiable: sat,
                scanned,
                min_value: min,
                max_value: max,
                argmin: format!("overlap-or-graph[{argmin}]"),
                pass,
                details: "stage-3 over the large-overlap family plus all graph states".into(),
            })
        }
        VerifyStage::FullPolytope => verify_witness_stage(artifact, mode, sat),
    }
}

fn verify_witness_stage<T: Scalar>(
    artifact: &ReductionArtifact<T>,
    mode: VerifyMode,
    sat: bool,
) -> Result<StageReport> {
    let qubits = artifact.qubits();
    let w = artifact.witness.matrix();
    if sat {
        // the satisfying doubled graph state must clear gamma + delta
        let assignment = artifact.instance.solve_brute_force().unwrap();
        let adj = artifact.assignment_adjacency(assignment);
        let st: StabilizerState<T> = crate::stabilizer::graph_state(&adj.doubled());
        let value = st.matrix_expectation(w).to_f64_lossy();
        let pass = value >= artifact.gamma + artifact.delta;
        return Ok(StageReport {
            stage: VerifyStage::FullPolytope.name().into(),
            satisfiable: sat,
            scanned: 1,
            min_value: value,
            max_value: value,
            argmin: format!("doubled-graph[assignment={assignment:b}]"),
            pass,
            details: format!(
                "satisfying doubled graph state: {value} vs gamma+delta = {}",
                artifact.gamma + artifact.delta
            ),
        });
    }
    // unsatisfiable: every scanned state must stay at or below gamma - delta
    let threshold = artifact.gamma - artifact.delta;
    let mut max = f64::NEG_INFINITY;
    let mut argmax = String::new();
    let mut scanned = 0u64;
    match mode {
        VerifyMode::Exhaustive => {
            if qubits > 4 {
                return Err(Error::SizeCap {
                    what: "exhaustive witness-stage qubits",
                    requested: qubits,
                    cap: 4,
                });
            }
            let fam = StateFamily::new(FamilyTag::AllStabilizer, qubits)?;
            let (v, arg, n) = crate::membership::scan_family_max(&artifact.witness, &fam);
            max = v;
            argmax = format!("all-stabilizer[{arg}]");
            scanned = n;
        }
        VerifyMode::Sample { count, seed } => {
            for tag in [
                FamilyTag::DoubledGraph,
                FamilyTag::Graph,
                FamilyTag::MaxCoherent,
            ] {
                let fam = StateFamily::new(tag, qubits)?;
                if fam.size() <= 1 << 16 {
                    let (v, arg, n) = crate::membership::scan_family_max(&artifact.witness, &fam);
                    if v > max {
                        max = v;
                        argmax = format!("{}[{arg}]", tag.name());
                    }
                    scanned += n;
                } else {
                    // sample the family uniformly
                    let sampled = sample_family_max::<T>(w, &fam, count, seed);
                    if sampled.0 > max {
                        max = sampled.0;
                        argmax = format!("{}[sampled:{}]", tag.name(), sampled.1);
                    }
                    scanned += count;
                }
            }
            // uniform stabilizer sample
            let index = crate::stabilizer::StabilizerIndex::new(qubits)?;
            let chunks: u64 = (rayon::current_num_threads() as u64 * 4).max(1);
            let per = count / chunks + 1;
            let best = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = crate::sampling::rng_for(seed, chunk);
                    let mut local = f64::NEG_INFINITY;
                    let todo = per.min(count.saturating_sub(chunk * per));
                    for _ in 0..todo {
                        let st = StabilizerState::<T>::from_params(index.sample_params(&mut rng));
                        local = local.max(st.matrix_expectation(w).to_f64_lossy());
                    }
                    local
                })
                .reduce(|| f64::NEG_INFINITY, f64::max);
            if best > max {
                max = best;
                argmax = "all-stabilizer[sampled]".into();
            }
            scanned += count;
        }
    }
    let pass = max <= threshold;
    Ok(StageReport {
        stage: VerifyStage::FullPolytope.name().into(),
        satisfiable: sat,
        scanned,
        min_value: max,
        max_value: max,
        argmin: argmax,
        pass,
        details: format!("max witness value {max} vs gamma-delta = {threshold}"),
    })
}

fn sample_family_max<T: Scalar>(
    w: &Matrix<T>,
    fam: &StateFamily,
    count: u64,
    seed: u64,
) -> (f64, u128) {
    let size = fam.size();
    let chunks: u64 = (rayon::current_num_threads() as u64 * 4).max(1);
    let per = count / chunks + 1;
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = crate::sampling::rng_for(seed ^ 0x5eed, chunk);
            let mut local = (f64::NEG_INFINITY, 0u128);
            let todo = per.min(count.saturating_sub(chunk * per));
            for _ in 0..todo {
                let idx = loop {
                    let hi = (rng.gen::<u64>() as u128) << 64 | rng.gen::<u64>() as u128;
                    let bound = u128::MAX - u128::MAX % size;
                    if hi < bound {
                        break hi % size;
                    }
                };
                let st = fam.state_at::<T>(idx);
                let v = st.matrix_expectation(w).to_f64_lossy();
                if v > local.0 {
                    local = (v, idx);
                }
            }
            local
        })
        .reduce(
            || (f64::NEG_INFINITY, 0u128),
            |a, b| if a.0 >= b.0 { a } else { b },
        )
}

use rand::Rng;

fn family_min_max<T: Scalar>(
    h: &Matrix<T>,
    fam: &StateFamily,
    mode: VerifyMode,
) -> Result<(f64, u128, f64, u64)> {
    match mode {
        VerifyMode::Exhaustive => {
            let (min, argmin, scanned) = crate::membership::scan_family_min(h, fam);
            // second pass for the max is cheap relative to enumeration
            let chunk: u128 = 4096;
            let n_chunks = (fam.size() + chunk - 1) / chunk;
            let max = (0..n_chunks)
                .into_par_iter()
                .map(|ci| {
                    let start = ci * chunk;
                    fam.iter_range::<T>(start, chunk)
                        .map(|st| st.matrix_expectation(h).to_f64_lossy())
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .reduce(|| f64::NEG_INFINITY, f64::max);
            Ok((min, argmin, max, scanned))
        }
        VerifyMode::Sample { count, seed } => {
            let size = fam.size();
            let chunks: u64 = (rayon::current_num_threads() as u64 * 4).max(1);
            let per = count / chunks + 1;
            let (min, argmin, max) = (0..chunks)
                .into_par_iter()
                .map(|chunk_id| {
                    let mut rng = crate::sampling::rng_for(seed, chunk_id);
                    let mut local = (f64::INFINITY, 0u128, f64::NEG_INFINITY);
                    let todo = per.min(count.saturating_sub(chunk_id * per));
                    for _ in 0..todo {
                        let idx = loop {
                            let draw =
                                (rng.gen::<u64>() as u128) << 64 | rng.gen::<u64>() as u128;
                            let bound = u128::MAX - u128::MAX % size;
                            if draw < bound {
                                break draw % size;
                            }
                        };
                        let st = fam.state_at::<T>(idx);
                        let v = st.matrix_expectation(h).to_f64_lossy();
                        if v < local.0 {
                            local.0 = v;
                            local.1 = idx;
                        }
                        local.2 = local.2.max(v);
                    }
                    local
                })
                .reduce(
                    || (f64::INFINITY, 0u128, f64::NEG_INFINITY),
                    |a, b| {
                        let (min, argmin) = if a.0 <= b.0 { (a.0, a.1) } else { (b.0, b.1) };
                        (min, argmin, a.2.max(b.2))
                    },
                );
            Ok((min, argmin, max, count))
        }
    }
}

/// Scanner for the stage-1 structural property.
struct StateFamilyVals<'a, T: Scalar> {
    artifact: &'a ReductionArtifact<T>,
    family: StateFamily,
}

impl<'a, T: Scalar> StateFamilyVals<'a, T> {
    fn graphs(artifact: &'a ReductionArtifact<T>) -> Result<Self> {
        Ok(StateFamilyVals {
            artifact,
            family: StateFamily::new(FamilyTag::Graph, artifact.qubits())?,
        })
    }

    /// Returns ((min, argmin, max, scanned), penalty-iff-doubled ok).
    fn scan_stage1(&self, mode: VerifyMode) -> Result<((f64, u128, f64, u64), bool)> {
        let h1 = self.artifact.stage1.matrix();
        let h = self.artifact.clause_op.matrix();
        let qubits = self.artifact.qubits();
        let scan_one = |idx: u128| -> (f64, f64, bool) {
            let adj = GraphAdjacency::new(qubits, idx as u64).unwrap();
            let st: StabilizerState<T> = crate::stabilizer::graph_state(&adj);
            let v1 = st.matrix_expectation(h1).to_f64_lossy();
            let v0 = st.matrix_expectation(h).to_f64_lossy();
            let penalty = v1 - v0;
            let structural = (penalty.abs() <= 1e-8) == adj.is_doubled_block_form();
            (v1, penalty, structural)
        };
        match mode {
            VerifyMode::Exhaustive => {
                let size = self.family.size();
                let chunk: u128 = 1024;
                let n_chunks = (size + chunk - 1) / chunk;
                let (min, argmin, max, ok) = (0..n_chunks)
                    .into_par_iter()
                    .map(|ci| {
                        let start = ci * chunk;
                        let end = (start + chunk).min(size);
                        let mut local = (f64::INFINITY, start, f64::NEG_INFINITY, true);
                        for idx in start..end {
                            let (v1, _pen, structural) = scan_one(idx);
                            if v1 < local.0 {
                                local.0 = v1;
                                local.1 = idx;
                            }
                            local.2 = local.2.max(v1);
                            local.3 &= structural;
                        }
                        local
                    })
                    .reduce(
                        || (f64::INFINITY, 0u128, f64::NEG_INFINITY, true),
                        |a, b| {
                            let (min, argmin) = if a.0 <= b.0 { (a.0, a.1) } else { (b.0, b.1) };
                            (min, argmin, a.2.max(b.2), a.3 && b.3)
                        },
                    );
                Ok(((min, argmin, max, size as u64), ok))
            }
            VerifyMode::Sample { count, seed } => {
                let size = self.family.size();
                let mut rng = crate::sampling::rng_for(seed, 0);
                let mut min = (f64::INFINITY, 0u128);
                let mut max = f64::NEG_INFINITY;
                let mut ok = true;
                for _ in 0..count {
                    let idx = (rng.gen::<u64>() as u128) % size;
                    let (v1, _pen, structural) = scan_one(idx);
                    if v1 < min.0 {
                        min = (v1, idx);
                    }
                    max = max.max(v1);
                    ok &= structural;
                }
                Ok(((min.0, min.1, max, count), ok))
            }
        }
    }
}

/// Serialized artifact bundle (base64 matrices, bit-stable).
#[derive(Serialize, Deserialize)]
pub struct ArtifactJson {
    pub instance: SatInstance,
    pub vertices: usize,
    pub var_to_edge: Vec<(usize, usize)>,
    pub matrices: ArtifactMatrices,
    pub gamma: f64,
    pub delta: f64,
    pub norms: ArtifactNorms,
    pub metadata: BuildMetadata,
}

#[derive(Serialize, Deserialize)]
pub struct ArtifactMatrices {
    pub clause_op: String,
    pub stage1: String,
    pub stage2: String,
    pub stage3: String,
    pub stage4: String,
    pub witness: String,
}

#[derive(Serialize, Deserialize)]
pub struct ArtifactNorms {
    pub clause_inf: f64,
    pub stage4_fro: f64,
}

impl ArtifactJson {
    pub fn from_artifact(artifact: &ReductionArtifact<f64>) -> Self {
        use crate::json::matrix_to_base64;
        ArtifactJson {
            instance: artifact.instance.clone(),
            vertices: artifact.vertices,
            var_to_edge: artifact.var_to_edge.clone(),
            matrices: ArtifactMatrices {
                clause_op: matrix_to_base64(artifact.clause_op.matrix()),
                stage1: matrix_to_base64(artifact.stage1.matrix()),
                stage2: matrix_to_base64(artifact.stage2.matrix()),
                stage3: matrix_to_base64(artifact.stage3.matrix()),
                stage4: matrix_to_base64(artifact.stage4.matrix()),
                witness: matrix_to_base64(artifact.witness.matrix()),
            },
            gamma: artifact.gamma,
            delta: artifact.delta,
            norms: ArtifactNorms {
                clause_inf: artifact.norm_h_inf,
                stage4_fro: artifact.norm_h4_fro,
            },
            metadata: BuildMetadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                vertices: artifact.vertices,
                qubits: artifact.qubits(),
            },
        }
    }

    pub fn to_artifact(&self) -> Result<ReductionArtifact<f64>> {
        use crate::json::matrix_from_base64;
        let dim = 1usize << (2 * self.vertices);
        Ok(ReductionArtifact {
            instance: self.instance.clone(),
            vertices: self.vertices,
            var_to_edge: self.var_to_edge.clone(),
            clause_op: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.clause_op)?)?,
            stage1: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.stage1)?)?,
            stage2: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.stage2)?)?,
            stage3: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.stage3)?)?,
            stage4: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.stage4)?)?,
            witness: HermitianOperator::new(matrix_from_base64(dim, &self.matrices.witness)?)?,
            gamma: self.gamma,
            delta: self.delta,
            norm_h_inf: self.norms.clause_inf,
            norm_h4_fro: self.norms.stage4_fro,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::graph_state;

    fn lit(var: usize, negated: bool) -> Literal {
        Literal { var, negated }
    }

    /// All clauses over variables {0,1,2} with the given sign patterns
    /// (bit v of the pattern set = literal on variable v negated).
    fn pattern_instance(patterns: &[u8]) -> SatInstance {
        let clauses = patterns
            .iter()
            .map(|&p| {
                [
                    lit(0, p & 1 != 0),
                    lit(1, p & 2 != 0),
                    lit(2, p & 4 != 0),
                ]
            })
            .collect();
        SatInstance::new(3, clauses).unwrap()
    }

    #[test]
    fn parse_simple_cnf() {
        let inst = parse_cnf("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(inst.num_vars, 3);
        assert_eq!(inst.clauses.len(), 1);
        assert!(inst.clauses[0].iter().all(|l| !l.negated));
        let inst = parse_cnf("c comment\np cnf 3 1\n-1 2 -3 0\n").unwrap();
        assert!(inst.clauses[0][0].negated);
        assert!(!inst.clauses[0][1].negated);
        assert!(inst.clauses[0][2].negated);
    }

    #[test]
    fn parse_rejects_wrong_width() {
        assert!(matches!(
            parse_cnf("p cnf 3 1\n1 2 0\n"),
            Err(Error::WrongClauseWidth { got: 2 })
        ));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        assert!(matches!(
            parse_cnf("p cnf 3 1\n1 2 7 0\n"),
            Err(Error::LiteralOutOfRange { .. })
        ));
    }

    #[test]
    fn parse_rejects_duplicate_variable() {
        assert!(matches!(
            parse_cnf("p cnf 3 1\n1 -1 2 0\n"),
            Err(Error::DuplicateVariable { .. })
        ));
    }

    #[test]
    fn clause_energy_examples() {
        let inst = pattern_instance(&[0]); // (x1 or x2 or x3)
        assert_eq!(inst.clause_energy(0b000).unwrap(), 1);
        assert_eq!(inst.clause_energy(0b001).unwrap(), 0);
        // all 8 sign patterns: exactly one clause violated per assignment
        let all = pattern_instance(&[0, 1, 2, 3, 4, 5, 6, 7]);
        for x in 0u32..8 {
            assert_eq!(all.clause_energy(x).unwrap(), 1);
        }
        assert!(!all.is_satisfiable());
    }

    #[test]
    fn two_copy_expectation_matches_clause_energy_exhaustively() {
        // double brute force: all 8 graphs x all 256 pattern subsets
        for subset in 0u16..256 {
            let patterns: Vec<u8> = (0..8).filter(|&p| subset >> p & 1 == 1).collect();
            if patterns.is_empty() {
                continue;
            }
            let inst = pattern_instance(&patterns);
            let artifact = build_clause_hamiltonian::<f64>(&inst, 3).unwrap();
            for bits in 0u64..8 {
                let adj = GraphAdjacency::new(3, bits).unwrap();
                let st = graph_state::<f64>(&adj.doubled());
                let got = st.matrix_expectation(artifact.clause_op.matrix());
                let assignment = artifact.adjacency_assignment(&adj);
                let want = inst.clause_energy(assignment).unwrap() as f64;
                assert!(
                    (got - want).abs() < 1e-9,
                    "subset {subset:#b} graph {bits:#b}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn single_clause_expectations() {
        let inst = pattern_instance(&[0]);
        let artifact = build_clause_hamiltonian::<f64>(&inst, 3).unwrap();
        // edge present <=> variable false: the complete graph on the
        // variable edges encodes all-false, violating (x1 or x2 or x3)
        let full = artifact.assignment_adjacency(0b000);
        let st = graph_state::<f64>(&full.doubled());
        assert!((st.matrix_expectation(artifact.clause_op.matrix()) - 1.0).abs() < 1e-9);
        // empty graph: assignment all-true, clause satisfied
        let adj = GraphAdjacency::empty(3);
        let x = artifact.adjacency_assignment(&adj);
        assert_eq!(x, 0b111);
        let st = graph_state::<f64>(&adj.doubled());
        assert!(st.matrix_expectation(artifact.clause_op.matrix()).abs() < 1e-9);
    }

    #[test]
    fn stage_penalties_are_psd_and_structured() {
        let inst = pattern_instance(&[0, 3]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        let p1 = artifact.stage1.sub(&artifact.clause_op);
        assert!(p1.min_eigenvalue() >= -1e-8);
        let p2 = artifact.stage2.sub(&artifact.stage1);
        assert!(p2.min_eigenvalue() >= -1e-8);
        // stage 3 shift is traceless with the two-term form
        let p3 = artifact.stage3.sub(&artifact.stage2);
        assert!(p3.trace().abs() < 1e-8);
        let dim = 1 << artifact.qubits();
        let coeff = artifact.norm_h_inf + 1.0;
        assert!((p3.matrix()[(0, 0)].re - coeff * (dim as f64 - 1.0)).abs() < 1e-8);
        assert!((p3.matrix()[(1, 1)].re + coeff).abs() < 1e-8);
        // stage 4 shift has the (I - d^2 |0><0|) form
        let p4 = artifact.stage4.sub(&artifact.stage3);
        assert!((p4.matrix()[(1, 1)].re - 2.0 * coeff).abs() < 1e-8);
        assert!((p4.matrix()[(0, 0)].re + 2.0 * coeff * (dim as f64 - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn stage1_preserves_doubled_graph_values() {
        let inst = pattern_instance(&[0, 5, 6]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        for bits in 0u64..8 {
            let st = graph_state::<f64>(&GraphAdjacency::new(3, bits).unwrap().doubled());
            let v0 = st.matrix_expectation(artifact.clause_op.matrix());
            let v1 = st.matrix_expectation(artifact.stage1.matrix());
            assert!((v0 - v1).abs() < 1e-9);
        }
    }

    #[test]
    fn cross_edge_penalty_on_non_doubled_graph() {
        let inst = pattern_instance(&[0]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        // one cross edge between the copies
        let adj = GraphAdjacency::empty(6).with_edge(0, 3);
        let st = graph_state::<f64>(&adj);
        let v0 = st.matrix_expectation(artifact.clause_op.matrix());
        let v1 = st.matrix_expectation(artifact.stage1.matrix());
        assert!(v1 - v0 >= artifact.norm_h_inf + 1.0 - 1e-9);
    }

    #[test]
    fn phase_lock_reads_phase_gates() {
        let inst = pattern_instance(&[0]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        let adj = GraphAdjacency::new(3, 0b101).unwrap().doubled();
        // plain graph state: stage-2 equals stage-1
        let st = crate::stabilizer::graph_state::<f64>(&adj);
        let v1 = st.matrix_expectation(artifact.stage1.matrix());
        let v2 = st.matrix_expectation(artifact.stage2.matrix());
        assert!((v1 - v2).abs() < 1e-9);
        // apply a phase gate on qubit 2: the lock on that qubit reads 1/2
        let mut phases = vec![0u8; 6];
        phases[2] = 1; // i
        let decorated = crate::stabilizer::coherent_state::<f64>(&adj, &phases);
        let p2 = decorated.matrix_expectation(artifact.stage2.matrix())
            - decorated.matrix_expectation(artifact.stage1.matrix());
        let expected = 2.0 * (artifact.norm_h_inf + 1.0) * 0.5;
        assert!((p2 - expected).abs() < 1e-9, "{p2} vs {expected}");
    }

    #[test]
    fn finalize_invariants() {
        let inst = pattern_instance(&[0]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        let wn = schatten_norm(&artifact.witness, SchattenP::Two).unwrap();
        assert!((wn - 1.0).abs() < 1e-9);
        assert!(artifact.gamma < 0.0);
        assert!(artifact.delta > 0.0);
        // d = 8: ceiling is 2^4 8^7 3^6
        let ceiling = 16.0 * 8f64.powi(7) * 729.0;
        assert!((artifact.norm_ceiling() - ceiling).abs() < 1e-3);
        assert!(artifact.norm_h4_fro <= ceiling);
    }

    #[test]
    fn stage_verification_two_copy() {
        // satisfiable single clause
        let inst = pattern_instance(&[0]);
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        let r = verify_stage(&artifact, VerifyStage::TwoCopy, VerifyMode::Exhaustive).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.min_value.abs() < 1e-9);
        // the canonical unsatisfiable instance
        let unsat = pattern_instance(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let artifact = reduce::<f64>(&unsat, 3).unwrap();
        let r = verify_stage(&artifact, VerifyStage::TwoCopy, VerifyMode::Exhaustive).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.min_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn witness_stage_yes_case() {
        let inst = pattern_instance(&[0, 3, 5]);
        assert!(inst.is_satisfiable());
        let artifact = reduce::<f64>(&inst, 3).unwrap();
        let r = verify_stage(
            &artifact,
            VerifyStage::FullPolytope,
            VerifyMode::Sample { count: 10, seed: 7 },
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn determinism_of_serialized_artifacts() {
        let text = "p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n";
        let a = reduce::<f64>(&parse_cnf(text).unwrap(), 3).unwrap();
        let b = reduce::<f64>(&parse_cnf(text).unwrap(), 3).unwrap();
        let ja = serde_json::to_string(&ArtifactJson::from_artifact(&a)).unwrap();
        let jb = serde_json::to_string(&ArtifactJson::from_artifact(&b)).unwrap();
        assert_eq!(ja, jb);
        let back = serde_json::from_str::<ArtifactJson>(&ja)
            .unwrap()
            .to_artifact()
            .unwrap();
        assert_eq!(back.gamma, a.gamma);
        assert!(back.witness.matrix().sub(a.witness.matrix()).max_abs() == 0.0);
    }

    #[test]
    fn capacity_checked() {
        let inst = pattern_instance(&[0]);
        assert!(matches!(
            build_clause_hamiltonian::<f64>(&inst, 2),
            Err(Error::ReductionCapacity { .. })
        ));
    }
}
