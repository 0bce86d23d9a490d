//! Exact covering LPs: `min sum(x)` subject to `a.x >= b` / `a.x = b` rows and `x >= 0`.
//!
//! The solver is a dual simplex on a condensed (Tucker) tableau. With an
//! all-ones objective the all-slack basis is dual feasible from the start, so
//! no phase 1 is needed, and rows appended to a solved tableau (cuts, pinned
//! equalities) are absorbed by a few more dual pivots. Pivot choice follows
//! Bland's rule on variable indices, which both prevents cycling and makes
//! the returned vertex a pure function of the input.

use std::collections::BTreeSet;
use std::fmt;

use crate::rational::Rat;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Row {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Row {
        Row { coeffs, relation, rhs }
    }

    /// `sum_{k in support} x_k >= rhs`.
    pub fn covering(num_vars: usize, support: &[usize], rhs: Rat) -> Row {
        let mut coeffs = vec![Rat::zero(); num_vars];
        for &k in support {
            coeffs[k] = Rat::one();
        }
        Row::new(coeffs, Relation::Ge, rhs)
    }

    pub fn activity(&self, x: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("row has {got} coefficients, problem has {expected} variables")]
    WidthMismatch { expected: usize, got: usize },
    #[error("row index {0} out of range")]
    NoSuchRow(usize),
    #[error("problem is infeasible")]
    Infeasible,
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(usize),
}

/// Minimise the all-ones objective over `x >= 0` and the given rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    num_vars: usize,
    rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> LpProblem {
        LpProblem { num_vars, rows: Vec::new() }
    }

    /// The vertex cover LP relaxation: one `x_u + x_v >= 1` row per edge.
    pub fn vertex_cover(num_vars: usize, edges: &[(usize, usize)]) -> LpProblem {
        let mut p = LpProblem::new(num_vars);
        for &(u, v) in edges {
            p.rows.push(Row::covering(num_vars, &[u, v], Rat::one()));
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Row) -> Result<usize, LpError> {
        if row.coeffs.len() != self.num_vars {
            return Err(LpError::WidthMismatch { expected: self.num_vars, got: row.coeffs.len() });
        }
        self.rows.push(row);
        Ok(self.rows.len() - 1)
    }

    pub fn add_row(&self, row: Row) -> Result<LpProblem, LpError> {
        let mut p = self.clone();
        p.push_row(row)?;
        Ok(p)
    }

    pub fn is_feasible(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars && x.iter().all(|v| !v.is_negative()) && self.rows.iter().all(|r| r.is_satisfied(x))
    }
}

/// A constraint made tight by the basis: a variable at its bound or a row at equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tight {
    Var(usize),
    Row(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicSolution {
    pub values: Vec<Rat>,
    pub objective: Rat,
    /// Rows satisfied with equality, recomputed from `values`.
    pub tight_rows: BTreeSet<usize>,
    /// The nonbasic constraints of the final basis: `num_vars` linearly
    /// independent tight constraints that pin `values` as a vertex.
    pub basis_witness: Vec<Tight>,
    /// Optimal dual multipliers, one per row: nonnegative for `>=` rows, and
    /// `sum_r duals[r] * row_r <= 1` componentwise with `duals . rhs == objective`.
    pub duals: Vec<Rat>,
}

pub fn solve(p: &LpProblem) -> Result<BasicSolution, LpError> {
    Ok(Simplex::new(p.clone())?.solution())
}

pub fn add_row(p: &LpProblem, row: Row) -> Result<LpProblem, LpError> {
    p.add_row(row)
}

/// Solves `p` with row `row_idx` turned into an equality.
pub fn solve_with_equality(p: &LpProblem, row_idx: usize) -> Result<BasicSolution, LpError> {
    let mut s = Simplex::new(p.clone())?;
    s.pin_row(row_idx)?;
    Ok(s.solution())
}

#[derive(Clone, Copy, Debug)]
enum Loc {
    Basic(usize),
    Nonbasic(usize),
}

/// One tableau constraint: `slack = sign * (a.x - b) >= 0`.
#[derive(Clone, Debug)]
struct Constraint {
    origin: usize,
    sign_ge: bool,
}

/// Warm-startable solver state. Variables `0..n` are structural; variable
/// `n + c` is the slack of tableau constraint `c`.
#[derive(Clone, Debug)]
pub struct Simplex {
    problem: LpProblem,
    constraints: Vec<Constraint>,
    // basic = rhs[r] - sum_j t[r][j] * nonbasic_j
    t: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    // objective = obj + sum_j cost[j] * nonbasic_j
    cost: Vec<Rat>,
    obj: Rat,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    loc: Vec<Loc>,
    pivots: usize,
    pivot_limit: usize,
}

impl Simplex {
    pub fn new(problem: LpProblem) -> Result<Simplex, LpError> {
        let n = problem.num_vars;
        let mut s = Simplex {
            problem: LpProblem::new(n),
            constraints: Vec::new(),
            t: Vec::new(),
            rhs: Vec::new(),
            cost: vec![Rat::one(); n],
            obj: Rat::zero(),
            basic: Vec::new(),
            nonbasic: (0..n).collect(),
            loc: (0..n).map(Loc::Nonbasic).collect(),
            pivots: 0,
            pivot_limit: 100_000,
        };
        for row in problem.rows {
            s.append_row(row)?;
        }
        s.reoptimize()?;
        Ok(s)
    }

    pub fn problem(&self) -> &LpProblem {
        &self.problem
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots
    }

    /// Appends a row and restores optimality.
    pub fn add_row(&mut self, row: Row) -> Result<usize, LpError> {
        let idx = self.append_row(row)?;
        self.reoptimize()?;
        Ok(idx)
    }

    /// Turns `>=` row `idx` into an equality and restores optimality.
    pub fn pin_row(&mut self, idx: usize) -> Result<(), LpError> {
        let row = self.problem.rows.get(idx).ok_or(LpError::NoSuchRow(idx))?;
        if row.relation == Relation::Eq {
            return Ok(());
        }
        let coeffs = row.coeffs.clone();
        let rhs = row.rhs.clone();
        self.problem.rows[idx].relation = Relation::Eq;
        self.append_constraint(idx, &coeffs, &rhs, false);
        self.reoptimize()
    }

    fn append_row(&mut self, row: Row) -> Result<usize, LpError> {
        let idx = self.problem.push_row(row)?;
        let row = self.problem.rows[idx].clone();
        self.append_constraint(idx, &row.coeffs, &row.rhs, true);
        if row.relation == Relation::Eq {
            self.append_constraint(idx, &row.coeffs, &row.rhs, false);
        }
        Ok(idx)
    }

    /// Expresses the new slack in terms of the current nonbasic variables.
    fn append_constraint(&mut self, origin: usize, coeffs: &[Rat], b: &Rat, sign_ge: bool) {
        let n = self.problem.num_vars;
        let mut trow = vec![Rat::zero(); n];
        let mut rhs = -b;
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match self.loc[k] {
                Loc::Nonbasic(c) => trow[c] -= a,
                Loc::Basic(r) => {
                    rhs += &(a * &self.rhs[r]);
                    for (j, v) in self.t[r].iter().enumerate() {
                        if !v.is_zero() {
                            trow[j] += &(a * v);
                        }
                    }
                }
            }
        }
        if !sign_ge {
            rhs = -rhs;
            for v in trow.iter_mut() {
                *v = -&*v;
            }
        }
        let var = n + self.constraints.len();
        self.constraints.push(Constraint { origin, sign_ge });
        self.loc.push(Loc::Basic(self.t.len()));
        self.basic.push(var);
        self.t.push(trow);
        self.rhs.push(rhs);
    }

    fn reoptimize(&mut self) -> Result<(), LpError> {
        loop {
            // Bland: leave on the smallest-index primal-infeasible basic variable
            let leave = (0..self.rhs.len())
                .filter(|&r| self.rhs[r].is_negative())
                .min_by_key(|&r| self.basic[r]);
            let Some(r) = leave else { return Ok(()) };
            let mut enter: Option<(usize, Rat)> = None;
            for (j, a) in self.t[r].iter().enumerate() {
                if !a.is_negative() {
                    continue;
                }
                let ratio = &self.cost[j] / &(-a);
                let better = match &enter {
                    None => true,
                    Some((bj, br)) => ratio < *br || (ratio == *br && self.nonbasic[j] < self.nonbasic[*bj]),
                };
                if better {
                    enter = Some((j, ratio));
                }
            }
            let Some((c, _)) = enter else { return Err(LpError::Infeasible) };
            if self.pivots >= self.pivot_limit {
                return Err(LpError::PivotLimit(self.pivot_limit));
            }
            self.pivot(r, c);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.t[r][c].recip();
        for (j, v) in self.t[r].iter_mut().enumerate() {
            if j != c && !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        self.t[r][c] = inv.clone();
        self.rhs[r] = &self.rhs[r] * &inv;

        let pivot_row = self.t[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let support: Vec<usize> = (0..pivot_row.len()).filter(|&j| j != c && !pivot_row[j].is_zero()).collect();
        for i in 0..self.t.len() {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.t[i][j] -= &delta;
            }
            self.t[i][c] = -(&f * &inv);
            let delta = &f * &pivot_rhs;
            self.rhs[i] -= &delta;
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.cost[j] -= &delta;
            }
            self.obj += &(&f * &pivot_rhs);
        }
        self.cost[c] = -(&f * &inv);

        let leaving = self.basic[r];
        let entering = self.nonbasic[c];
        self.basic[r] = entering;
        self.nonbasic[c] = leaving;
        self.loc[entering] = Loc::Basic(r);
        self.loc[leaving] = Loc::Nonbasic(c);
    }

    pub fn objective(&self) -> &Rat {
        &self.obj
    }

    pub fn values(&self) -> Vec<Rat> {
        (0..self.problem.num_vars)
            .map(|k| match self.loc[k] {
                Loc::Basic(r) => self.rhs[r].clone(),
                Loc::Nonbasic(_) => Rat::zero(),
            })
            .collect()
    }

    pub fn solution(&self) -> BasicSolution {
        let n = self.problem.num_vars;
        let values = self.values();
        let tight_rows = self
            .problem
            .rows
            .iter()
            .enumerate()
            .filter(|(_, row)| row.activity(&values) == row.rhs)
            .map(|(i, _)| i)
            .collect();
        let mut basis_witness: Vec<Tight> = self
            .nonbasic
            .iter()
            .map(|&v| if v < n { Tight::Var(v) } else { Tight::Row(self.constraints[v - n].origin) })
            .collect();
        basis_witness.sort();
        let mut duals = vec![Rat::zero(); self.problem.rows.len()];
        for (c, &v) in self.nonbasic.iter().enumerate() {
            if v >= n {
                let con = &self.constraints[v - n];
                let u = &self.cost[c];
                if con.sign_ge {
                    duals[con.origin] += u;
                } else {
                    duals[con.origin] -= u;
                }
            }
        }
        BasicSolution { values, objective: self.obj.clone(), tight_rows, basis_witness, duals }
    }
}

impl fmt::Display for Simplex {
    /// Debug dump: one line per basic variable, then the reduced-cost row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.problem.num_vars;
        let name = |v: usize| if v < n { format!("x{v}") } else { format!("s{}", v - n) };
        let header: Vec<String> = self.nonbasic.iter().map(|&v| name(v)).collect();
        writeln!(f, "basis | rhs | {}", header.join(" "))?;
        for (r, &v) in self.basic.iter().enumerate() {
            let cells: Vec<String> = self.t[r].iter().map(|x| x.to_string()).collect();
            writeln!(f, "{} | {} | {}", name(v), self.rhs[r], cells.join(" "))?;
        }
        let cells: Vec<String> = self.cost.iter().map(|x| x.to_string()).collect();
        write!(f, "z | {} | {}", self.obj, cells.join(" "))
    }
}
