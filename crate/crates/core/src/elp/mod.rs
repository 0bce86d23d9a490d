//! The odd-cycle strengthened LP relaxation of vertex cover.
//!
//! `solve_elp` runs a cutting-plane loop: solve the LP over the edge rows plus
//! the pooled cycle rows, ask the separation oracle for the most violated odd
//! cycle, add it, repeat. One cut per round. The final point is a vertex of
//! the cut-augmented polytope; a last separation pass certifies that it is
//! feasible, and therefore optimal, for the full relaxation.

mod separation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use separation::{cycle_weight, separate_odd_cycle};

use crate::graph::{Edge, Graph, OddCycle, VertexId};
use crate::lp::{LpError, LpProblem, Row, Simplex};
use crate::rational::{rat, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ElpError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("edge inequality violated at {0}")]
    EdgeViolated(Edge),
    #[error("no value for vertex {0}")]
    MissingValue(VertexId),
    #[error("cutting-plane loop exceeded {0} rounds")]
    RoundLimit(usize),
    #[error("separation returned pooled cycle {0} again")]
    DuplicateCut(OddCycle),
}

#[derive(Clone, Debug)]
pub struct ElpConfig {
    /// Rounds allowed per vertex before the loop is declared pathological.
    pub rounds_per_vertex: usize,
}

impl Default for ElpConfig {
    fn default() -> ElpConfig {
        ElpConfig { rounds_per_vertex: 10 }
    }
}

/// One cutting-plane round: the cut added and the objective after re-solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutRound {
    pub cycle: OddCycle,
    pub violation: Rat,
    pub objective: Rat,
}

impl fmt::Display for CutRound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cut {} violation {} objective {}", self.cycle, self.violation, self.objective)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeClasses {
    /// `x_i + x_j = 1`
    pub active: Vec<Edge>,
    /// `x_i + x_j >= 4/3`
    pub over_active: Vec<Edge>,
    /// minimisers of `x_i + x_j` over all edges
    pub small: Vec<Edge>,
}

pub fn classify_edges(g: &Graph, x: &BTreeMap<VertexId, Rat>) -> EdgeClasses {
    let four_thirds = rat(4, 3);
    let mut classes = EdgeClasses::default();
    let mut min: Option<Rat> = None;
    for e in g.edges() {
        let sum = &x[&e.0] + &x[&e.1];
        if sum.is_one() {
            classes.active.push(e);
        }
        if sum >= four_thirds {
            classes.over_active.push(e);
        }
        match &min {
            Some(m) if sum > *m => {}
            Some(m) if sum == *m => classes.small.push(e),
            _ => {
                min = Some(sum);
                classes.small = vec![e];
            }
        }
    }
    classes
}

/// Solver state kept alive so the pipeline can re-solve with a pinned edge
/// without rebuilding the tableau.
#[derive(Clone, Debug)]
struct Model {
    order: Vec<VertexId>,
    edges: Vec<Edge>,
    simplex: Simplex,
    pool: Vec<OddCycle>,
    pool_keys: BTreeSet<Vec<VertexId>>,
    rounds: Vec<CutRound>,
}

impl Model {
    fn new(g: &Graph) -> Result<Model, ElpError> {
        let order: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<Edge> = g.edges().collect();
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (index[&e.0], index[&e.1])).collect();
        let simplex = Simplex::new(LpProblem::vertex_cover(order.len(), &pairs))?;
        Ok(Model { order, edges, simplex, pool: Vec::new(), pool_keys: BTreeSet::new(), rounds: Vec::new() })
    }

    fn point(&self) -> BTreeMap<VertexId, Rat> {
        self.order.iter().copied().zip(self.simplex.values()).collect()
    }

    fn cut_loop(&mut self, g: &Graph, config: &ElpConfig) -> Result<(), ElpError> {
        let limit = config.rounds_per_vertex * self.order.len().max(1);
        let mut used = 0;
        while let Some((cycle, violation)) = separate_odd_cycle(g, &self.point())? {
            if used == limit {
                return Err(ElpError::RoundLimit(limit));
            }
            used += 1;
            let key = cycle.vertex_set();
            if !self.pool_keys.insert(key) {
                return Err(ElpError::DuplicateCut(cycle));
            }
            let support: Vec<usize> = cycle
                .vertices()
                .iter()
                .map(|v| self.order.binary_search(v).expect("cycle vertex in graph"))
                .collect();
            self.simplex
                .add_row(Row::covering(self.order.len(), &support, Rat::from(cycle.rhs())))?;
            log::trace!("cut {} violation {} -> {}", cycle, violation, self.simplex.objective());
            self.rounds.push(CutRound { cycle: cycle.clone(), violation, objective: self.simplex.objective().clone() });
            self.pool.push(cycle);
        }
        Ok(())
    }

    fn into_solution(self, g: &Graph) -> ElpSolution {
        let x = self.point();
        let classes = classify_edges(g, &x);
        let lp = self.simplex.solution();
        ElpSolution {
            objective: lp.objective.clone(),
            tight_rows: lp.tight_rows,
            x,
            cycle_pool: self.pool.clone(),
            rounds: self.rounds.clone(),
            classes,
            pinned: None,
            model: self,
        }
    }
}

/// Optimal point of the relaxation on one graph.
#[derive(Clone, Debug)]
pub struct ElpSolution {
    pub x: BTreeMap<VertexId, Rat>,
    pub objective: Rat,
    /// Cycles whose inequalities are rows of the final LP, in insertion order.
    pub cycle_pool: Vec<OddCycle>,
    /// Tight LP rows: edge rows first (in `Graph::edges` order), then pooled cycles.
    pub tight_rows: BTreeSet<usize>,
    pub rounds: Vec<CutRound>,
    pub classes: EdgeClasses,
    /// Set when this point came from re-solving with an edge row pinned to equality.
    pub pinned: Option<Edge>,
    model: Model,
}

impl ElpSolution {
    pub fn value(&self, v: VertexId) -> &Rat {
        &self.x[&v]
    }

    pub fn tight_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.tight_rows
            .iter()
            .take_while(|&&r| r < self.model.edges.len())
            .map(|&r| self.model.edges[r])
    }

    pub fn ones(&self) -> BTreeSet<VertexId> {
        self.x.iter().filter(|(_, v)| v.is_one()).map(|(&k, _)| k).collect()
    }

    pub fn zeros(&self) -> BTreeSet<VertexId> {
        self.x.iter().filter(|(_, v)| v.is_zero()).map(|(&k, _)| k).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.x.values().all(|v| v.is_zero() || v.is_one())
    }

    pub fn cut_log(&self) -> String {
        self.rounds.iter().map(|r| format!("{r}\n")).collect()
    }
}

pub fn solve_elp(g: &Graph) -> Result<ElpSolution, ElpError> {
    solve_elp_with(g, &ElpConfig::default())
}

pub fn solve_elp_with(g: &Graph, config: &ElpConfig) -> Result<ElpSolution, ElpError> {
    let mut model = Model::new(g)?;
    model.cut_loop(g, config)?;
    Ok(model.into_solution(g))
}

/// Re-solves `sol`'s relaxation with one edge inequality forced to equality.
pub fn solve_elp_pinned(g: &Graph, sol: &ElpSolution, edge: Edge, config: &ElpConfig) -> Result<ElpSolution, ElpError> {
    let mut model = sol.model.clone();
    let row = model.edges.binary_search(&edge).map_err(|_| ElpError::EdgeViolated(edge))?;
    model.simplex.pin_row(row)?;
    model.rounds.clear();
    model.cut_loop(g, config)?;
    let mut out = model.into_solution(g);
    out.pinned = Some(edge);
    Ok(out)
}

/// Outcome of sweeping edge pins in search of an alternate optimum with an active edge.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub found: Option<ElpSolution>,
    /// Number of pinned re-solves performed.
    pub pins: usize,
}

/// Tries edges in lexicographic order; the first pin that leaves the objective
/// unchanged yields an optimum with that edge active. `budget` caps the
/// number of pins (`None` sweeps every edge).
pub fn explore_alternate_bfs(
    g: &Graph,
    sol: &ElpSolution,
    budget: Option<usize>,
    config: &ElpConfig,
) -> Result<Exploration, ElpError> {
    let mut pins = 0;
    for edge in g.edges() {
        if budget.is_some_and(|b| pins >= b) {
            break;
        }
        pins += 1;
        let candidate = match solve_elp_pinned(g, sol, edge, config) {
            Ok(c) => c,
            Err(ElpError::Lp(LpError::Infeasible)) => continue,
            Err(e) => return Err(e),
        };
        if candidate.objective == sol.objective {
            debug_assert!(candidate.classes.active.contains(&edge));
            return Ok(Exploration { found: Some(candidate), pins });
        }
    }
    Ok(Exploration { found: None, pins })
}
