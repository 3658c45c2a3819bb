//! Dense two-phase primal simplex for small equality-form programs,
//! returning a primal-dual certificate.
//!
//! Solves `min c.z  s.t.  M z = b, z >= 0` with Bland's rule (finite
//! termination) and an explicit basis inverse with periodic
//! refactorization. Problem sizes here are tiny (up to a few hundred
//! rows, tens of thousands of columns), so dense updates are fine.

use crate::error::{Error, Result};
use crate::Scalar;

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const MAX_PIVOTS: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct LpSolution<T: Scalar> {
    pub value: T,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    /// |primal objective - dual objective| at the reported solution.
    pub gap: T,
    pub pivots: usize,
}

struct Tableau<'a, T: Scalar> {
    m: usize,
    columns: &'a [Vec<T>],
    costs: Vec<T>,
    b: Vec<T>,
    basis: Vec<usize>,
    binv: Vec<T>, // m x m row-major
    xb: Vec<T>,
    pivots: usize,
    /// Columns >= columns.len() are artificials (unit vectors).
    n_artificial: usize,
}

impl<'a, T: Scalar> Tableau<'a, T> {
    fn column_entry(&self, col: usize, row: usize) -> T {
        if col < self.columns.len() {
            self.columns[col][row]
        } else if col - self.columns.len() == row {
            T::one()
        } else {
            T::zero()
        }
    }

    fn n_total(&self) -> usize {
        self.columns.len() + self.n_artificial
    }

    fn refactorize(&mut self) -> Result<()> {
        let m = self.m;
        // Gauss-Jordan inverse of the basis matrix
        let mut aug = vec![T::zero(); m * 2 * m];
        for r in 0..m {
            for (ci, &col) in self.basis.iter().enumerate() {
                aug[r * 2 * m + ci] = self.column_entry(col, r);
            }
            aug[r * 2 * m + m + r] = T::one();
        }
        for piv in 0..m {
            let mut best = piv;
            let mut best_abs = aug[piv * 2 * m + piv].abs();
            for r in (piv + 1)..m {
                let a = aug[r * 2 * m + piv].abs();
                if a > best_abs {
                    best = r;
                    best_abs = a;
                }
            }
            if best_abs.to_f64_lossy() < 1e-13 {
                return Err(Error::Numerical {
                    reason: "singular basis during refactorization".into(),
                });
            }
            if best != piv {
                for c in 0..2 * m {
                    aug.swap(piv * 2 * m + c, best * 2 * m + c);
                }
            }
            let inv = T::one() / aug[piv * 2 * m + piv];
            for c in 0..2 * m {
                aug[piv * 2 * m + c] *= inv;
            }
            for r in 0..m {
                if r == piv {
                    continue;
                }
                let f = aug[r * 2 * m + piv];
                if f == T::zero() {
                    continue;
                }
                for c in 0..2 * m {
                    let v = aug[piv * 2 * m + c];
                    aug[r * 2 * m + c] -= f * v;
                }
            }
        }
        for r in 0..m {
            for c in 0..m {
                self.binv[r * m + c] = aug[r * 2 * m + m + c];
            }
        }
        self.recompute_xb();
        Ok(())
    }

    fn recompute_xb(&mut self) {
        let m = self.m;
        for r in 0..m {
            let mut acc = T::zero();
            for c in 0..m {
                acc += self.binv[r * m + c] * self.b[c];
            }
            self.xb[r] = if acc.abs().to_f64_lossy() < 1e-14 {
                T::zero()
            } else {
                acc
            };
        }
    }

    fn dual(&self) -> Vec<T> {
        let m = self.m;
        let mut y = vec![T::zero(); m];
        for c in 0..m {
            let mut acc = T::zero();
            for r in 0..m {
                acc += self.costs[self.basis[r]] * self.binv[r * m + c];
            }
            y[c] = acc;
        }
        y
    }

    fn reduced_cost(&self, y: &[T], col: usize) -> T {
        let mut acc = self.costs[col];
        if col < self.columns.len() {
            let a = &self.columns[col];
            for r in 0..self.m {
                acc -= y[r] * a[r];
            }
        } else {
            acc -= y[col - self.columns.len()];
        }
        acc
    }

    /// Run simplex to optimality with Bland's rule.
    fn optimize(&mut self) -> Result<()> {
        let cost_tol = T::real(COST_TOL);
        let pivot_tol = T::real(PIVOT_TOL);
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::NoConvergence {
                    max_iters: MAX_PIVOTS,
                    gap: f64::NAN,
                });
            }
            let y = self.dual();
            // Bland: smallest-index column with negative reduced cost
            let mut entering = None;
            for col in 0..self.n_total() {
                if self.basis.contains(&col) {
                    continue;
                }
                if self.reduced_cost(&y, col) < -cost_tol {
                    entering = Some(col);
                    break;
                }
            }
            let Some(entering) = entering else {
                return Ok(());
            };
            // direction d = B^-1 A_entering
            let m = self.m;
            let mut d = vec![T::zero(); m];
            if entering < self.columns.len() {
                let a = &self.columns[entering];
                for r in 0..m {
                    let mut acc = T::zero();
                    for c in 0..m {
                        acc += self.binv[r * m + c] * a[c];
                    }
                    d[r] = acc;
                }
            } else {
                let unit = entering - self.columns.len();
                for r in 0..m {
                    d[r] = self.binv[r * m + unit];
                }
            }
            // ratio test, Bland tie-break on leaving basis column index
            let mut leave: Option<(usize, T)> = None;
            for r in 0..m {
                if d[r] <= pivot_tol {
                    continue;
                }
                let ratio = self.xb[r].max(T::zero()) / d[r];
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - T::real(1e-12)
                            || ((ratio - lratio).abs() <= T::real(1e-12)
                                && self.basis[r] < self.basis[lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
            let Some((leave_row, _)) = leave else {
                return Err(Error::Numerical {
                    reason: "linear program is unbounded".into(),
                });
            };
            // eta update of the inverse
            let dp = d[leave_row];
            for r in 0..m {
                if r == leave_row {
                    continue;
                }
                let f = d[r] / dp;
                if f == T::zero() {
                    continue;
                }
                for c in 0..m {
                    let v = self.binv[leave_row * m + c];
                    self.binv[r * m + c] -= f * v;
                }
            }
            let inv = T::one() / dp;
            for c in 0..m {
                self.binv[leave_row * m + c] *= inv;
            }
            self.basis[leave_row] = entering;
            self.pivots += 1;
            if self.pivots % REFACTOR_EVERY == 0 {
                self.refactorize()?;
            } else {
                self.recompute_xb();
            }
        }
    }

    fn objective(&self) -> T {
        let mut acc = T::zero();
        for r in 0..self.m {
            acc += self.costs[self.basis[r]] * self.xb[r];
        }
        acc
    }

    /// After phase 1, pivot zero-level artificials out of the basis so
    /// they cannot contaminate the phase-2 duals. Rows where no real
    /// column has a nonzero direction entry are redundant constraints;
    /// their artificials stay basic (at level zero) and are returned.
    fn drive_out_artificials(&mut self) -> Vec<usize> {
        let n_real = self.columns.len();
        let m = self.m;
        let mut redundant = Vec::new();
        for r in 0..m {
            if self.basis[r] < n_real {
                continue;
            }
            let mut entering = None;
            for j in 0..n_real {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d_r = T::zero();
                for c in 0..m {
                    d_r += self.binv[r * m + c] * self.columns[j][c];
                }
                if d_r.abs().to_f64_lossy() > 1e-9 {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                redundant.push(r);
                continue;
            };
            // degenerate pivot: the artificial sits at level zero
            let mut d = vec![T::zero(); m];
            for row in 0..m {
                let mut acc = T::zero();
                for c in 0..m {
                    acc += self.binv[row * m + c] * self.columns[j][c];
                }
                d[row] = acc;
            }
            let dp = d[r];
            for row in 0..m {
                if row == r {
                    continue;
                }
                let f = d[row] / dp;
                if f == T::zero() {
                    continue;
                }
                for c in 0..m {
                    let v = self.binv[r * m + c];
                    self.binv[row * m + c] -= f * v;
                }
            }
            let inv = T::one() / dp;
            for c in 0..m {
                self.binv[r * m + c] *= inv;
            }
            self.basis[r] = j;
            self.recompute_xb();
        }
        redundant
    }
}

/// Solve `min c.z  s.t.  M z = b, z >= 0` where `columns[j]` is the j-th
/// column of M and all columns share length `b.len()`.
pub fn solve_min_eq<T: Scalar>(columns: &[Vec<T>], costs: &[T], b: &[T]) -> Result<LpSolution<T>> {
    let m = b.len();
    if columns.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    assert_eq!(columns.len(), costs.len());
    // orient rows so the phase-1 rhs is nonnegative
    let mut columns_oriented: Vec<Vec<T>> = columns.to_vec();
    let mut b_oriented = b.to_vec();
    for r in 0..m {
        if b_oriented[r] < T::zero() {
            b_oriented[r] = -b_oriented[r];
            for col in &mut columns_oriented {
                col[r] = -col[r];
            }
        }
    }
    let n = columns_oriented.len();
    // phase 1
    let mut phase1_costs = vec![T::zero(); n];
    phase1_costs.extend(std::iter::repeat(T::one()).take(m));
    let mut tab = Tableau {
        m,
        columns: &columns_oriented,
        costs: phase1_costs,
        b: b_oriented.clone(),
        basis: (n..n + m).collect(),
        binv: identity_flat::<T>(m),
        xb: b_oriented.clone(),
        pivots: 0,
        n_artificial: m,
    };
    tab.optimize()?;
    let infeas = tab.objective();
    if infeas.to_f64_lossy() > 1e-7 {
        return Err(Error::Infeasible {
            reason: format!("phase-1 residual {}", infeas.to_f64_lossy()),
        });
    }
    let redundant_rows = tab.drive_out_artificials();
    // artificials on redundant rows stay pinned at zero by feasibility;
    // give them zero cost so the duals stay clean, and a prohibitive
    // cost to every other (now nonbasic) artificial
    let mut phase2_costs = costs.to_vec();
    phase2_costs.extend(std::iter::repeat(T::real(1e6)).take(m));
    for &r in &redundant_rows {
        phase2_costs[tab.basis[r]] = T::zero();
    }
    tab.costs = phase2_costs;
    tab.refactorize()?;
    tab.optimize()?;
    tab.refactorize()?;

    let mut primal = vec![T::zero(); n];
    for (r, &col) in tab.basis.iter().enumerate() {
        if col < n {
            primal[col] = tab.xb[r];
        } else if tab.xb[r].abs().to_f64_lossy() > 1e-7 {
            return Err(Error::Infeasible {
                reason: "artificial variable remained basic at a nonzero level".into(),
            });
        }
    }
    let value = costs
        .iter()
        .zip(&primal)
        .map(|(&c, &x)| c * x)
        .fold(T::zero(), |a, v| a + v);
    // dual in the original (unoriented) row signs
    let y_oriented = tab.dual();
    let mut dual = vec![T::zero(); m];
    for r in 0..m {
        dual[r] = if b[r] < T::zero() {
            -y_oriented[r]
        } else {
            y_oriented[r]
        };
    }
    let dual_value = dual
        .iter()
        .zip(b)
        .map(|(&yv, &bv)| yv * bv)
        .fold(T::zero(), |a, v| a + v);
    Ok(LpSolution {
        gap: (value - dual_value).abs(),
        value,
        primal,
        dual,
        pivots: tab.pivots,
    })
}

fn identity_flat<T: Scalar>(m: usize) -> Vec<T> {
    let mut v = vec![T::zero(); m * m];
    for i in 0..m {
        v[i * m + i] = T::one();
    }
    v
}

/// l1 minimization `min sum |x|  s.t.  sum_j x_j col_j = b` via variable
/// splitting; returns the signed solution and the dual vector `y`, which
/// satisfies `|col_j . y| <= 1` at optimality.
pub fn solve_l1_exact<T: Scalar>(columns: &[Vec<T>], b: &[T]) -> Result<(Vec<T>, LpSolution<T>)> {
    let n = columns.len();
    let mut split: Vec<Vec<T>> = Vec::with_capacity(2 * n);
    // interleave +A_j, -A_j so Bland's order treats each atom fairly
    for col in columns {
        split.push(col.clone());
        split.push(col.iter().map(|&v| -v).collect());
    }
    let costs = vec![T::one(); 2 * n];
    let sol = solve_min_eq(&split, &costs, b)?;
    let mut signed = vec![T::zero(); n];
    for j in 0..n {
        signed[j] = sol.primal[2 * j] - sol.primal[2 * j + 1];
    }
    Ok((signed, sol))
}
