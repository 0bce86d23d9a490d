//! One reduction per iteration: solve the relaxation on the current graph,
//! pick a rule, shrink the graph, record what backtracking will need.
//!
//! Two orders are supported. [`Mode::Base`] tries `{0,1}`, then 3-cycle,
//! then active edge, then over-active edge, and stops with a flag when none
//! applies. [`Mode::Enhanced`] first looks for an alternate optimum with an
//! active edge, prefers active edges over triangles, and falls back to
//! deleting an arbitrary edge's endpoints so that it always progresses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elp::{classify_edges, explore_alternate_bfs, separate_odd_cycle, solve_elp_with, ElpConfig, ElpError};
use crate::graph::{Edge, Graph, GraphError, OddCycle, VertexId};
use crate::rational::{rat, Rat};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Base,
    #[default]
    Enhanced,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "base" => Ok(Mode::Base),
            "enhanced" => Ok(Mode::Enhanced),
            _ => Err(format!("unknown mode {s:?} (expected base or enhanced)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Base => "base",
            Mode::Enhanced => "enhanced",
        })
    }
}

/// How the random-edge step picks its edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeRule {
    /// Largest `x_i + x_j`, lexicographically first among ties.
    #[default]
    MaxSum,
    /// Uniform over edges, drawn from the run's seeded generator.
    Random,
}

impl FromStr for EdgeRule {
    type Err = String;
    fn from_str(s: &str) -> Result<EdgeRule, String> {
        match s {
            "maxsum" => Ok(EdgeRule::MaxSum),
            "random" => Ok(EdgeRule::Random),
            _ => Err(format!("unknown edge rule {s:?} (expected maxsum or random)")),
        }
    }
}

impl fmt::Display for EdgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRule::MaxSum => "maxsum",
            EdgeRule::Random => "random",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub edge_rule: EdgeRule,
    pub seed: u64,
    /// Cap on pinned re-solves per alternate-optimum search; `None` tries every edge.
    pub pin_budget: Option<usize>,
    pub elp: ElpConfig,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Elp(#[from] ElpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("active edge {0} lies on a triangle")]
    TriangleThroughActiveEdge(Edge),
    #[error("projected point violates {0} after rewiring {1}")]
    ProjectionInfeasible(String, Edge),
    #[error("iteration {0} removed no vertex")]
    NoProgress(usize),
}

/// The reduction applied after the `{0,1}` deletions of one iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reduction {
    /// Final iteration: every remaining vertex was 0 or 1.
    Terminal,
    /// Only the `{0,1}` deletions applied.
    ZeroOne,
    ThreeCycle { triangle: OddCycle },
    ActiveEdge { i: VertexId, j: VertexId, d_i: BTreeSet<VertexId>, d_j: BTreeSet<VertexId> },
    OverActive { edge: Edge },
    RandomEdge { edge: Edge },
}

impl Reduction {
    pub fn name(&self) -> &'static str {
        match self {
            Reduction::Terminal => "terminal",
            Reduction::ZeroOne => "zero-one",
            Reduction::ThreeCycle { .. } => "three-cycle",
            Reduction::ActiveEdge { .. } => "active-edge",
            Reduction::OverActive { .. } => "over-active",
            Reduction::RandomEdge { .. } => "random-edge",
        }
    }

    /// Guaranteed objective drop beyond the deleted ones.
    pub fn base_decrease(&self) -> Rat {
        match self {
            Reduction::Terminal | Reduction::ZeroOne => Rat::zero(),
            Reduction::ThreeCycle { .. } => Rat::integer(2),
            Reduction::ActiveEdge { .. } | Reduction::RandomEdge { .. } => Rat::one(),
            Reduction::OverActive { .. } => rat(4, 3),
        }
    }

    /// Most vertices backtracking may add beyond the deleted ones.
    pub fn growth_bound(&self) -> usize {
        match self {
            Reduction::Terminal | Reduction::ZeroOne => 0,
            Reduction::ThreeCycle { .. } => 3,
            Reduction::ActiveEdge { .. } => 1,
            Reduction::OverActive { .. } | Reduction::RandomEdge { .. } => 2,
        }
    }
}

/// Everything one iteration did.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionRecord {
    #[serde(flatten)]
    pub reduction: Reduction,
    pub vertices: usize,
    pub edges: usize,
    /// Objective of the relaxation on this iteration's graph.
    pub objective: Rat,
    /// Ledger value: `|ones|` plus the reduction's base decrease.
    pub decrease: Rat,
    pub zeros: BTreeSet<VertexId>,
    pub ones: BTreeSet<VertexId>,
    pub cut_rounds: usize,
    /// Pinned re-solves spent looking for an alternate optimum.
    pub pins: usize,
    pub alternate_found: bool,
    /// The enhanced order jumped past `{0,1}` while zeros were present.
    pub skipped_zero_one: bool,
    /// Point used for this iteration's decisions.
    #[serde(skip)]
    pub x: BTreeMap<VertexId, Rat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionTrace {
    pub mode: Mode,
    pub records: Vec<ReductionRecord>,
    /// Ones of the final iteration.
    pub final_ones: BTreeSet<VertexId>,
    /// Base mode only: some graph had no applicable reduction.
    pub hypothesis_failed: bool,
}

impl ReductionTrace {
    /// Objective of the relaxation on the input graph.
    pub fn initial_objective(&self) -> Rat {
        self.records.first().map_or_else(Rat::zero, |r| r.objective.clone())
    }

    pub fn count(&self, kind: &str) -> usize {
        self.records.iter().filter(|r| r.reduction.name() == kind).count()
    }

    pub fn total_pins(&self) -> usize {
        self.records.iter().map(|r| r.pins).sum()
    }

    pub fn total_cut_rounds(&self) -> usize {
        self.records.iter().map(|r| r.cut_rounds).sum()
    }

    /// Every iteration's objective satisfies `f^{k+1} <= f^k - d_k`, strictly
    /// after a random-edge step. Returns the offending iteration indices.
    pub fn ledger_violations(&self) -> Vec<usize> {
        self.records
            .windows(2)
            .enumerate()
            .filter(|(_, w)| {
                let bound = &w[0].objective - &w[0].decrease;
                match w[0].reduction {
                    Reduction::RandomEdge { .. } => w[1].objective >= bound,
                    _ => w[1].objective > bound,
                }
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// Pipeline output: the trace and the graph at the start of each iteration.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub trace: ReductionTrace,
    pub graphs: Vec<Graph>,
}

fn ones_and_zeros(x: &BTreeMap<VertexId, Rat>) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let zeros = x.iter().filter(|(_, v)| v.is_zero()).map(|(&k, _)| k).collect();
    let ones = x.iter().filter(|(_, v)| v.is_one()).map(|(&k, _)| k).collect();
    (zeros, ones)
}

/// Deletes every vertex valued 0 or 1. `None` when nothing would remain.
pub fn step_zero_one(g: &Graph, x: &BTreeMap<VertexId, Rat>) -> Result<Option<Graph>, GraphError> {
    let (zeros, ones) = ones_and_zeros(x);
    if zeros.len() + ones.len() == g.vertex_count() {
        return Ok(None);
    }
    let removed: BTreeSet<VertexId> = zeros.union(&ones).copied().collect();
    g.delete_vertices(&removed).map(Some)
}

/// Deletes the lexicographically first triangle.
pub fn step_three_cycle(g: &Graph) -> Option<(Graph, OddCycle)> {
    let t = g.find_triangle()?;
    let rest = g.delete_vertices(&t.vertices().iter().copied().collect()).ok()?;
    Some((rest, t))
}

/// Rewires around the active edge `edge` and checks that `x` restricted to
/// the new graph is still feasible for its full relaxation.
pub fn step_active_edge(
    g: &Graph,
    x: &BTreeMap<VertexId, Rat>,
    edge: Edge,
) -> Result<(Graph, Reduction), PipelineError> {
    let Edge(i, j) = edge;
    let (next, d_i, d_j) = g.active_edge_rewire(i, j)?;
    if !d_i.is_disjoint(&d_j) {
        return Err(PipelineError::TriangleThroughActiveEdge(edge));
    }
    let projected: BTreeMap<VertexId, Rat> = next.vertices().map(|v| (v, x[&v].clone())).collect();
    match separate_odd_cycle(&next, &projected) {
        Ok(None) => {}
        Ok(Some((cycle, _))) => return Err(PipelineError::ProjectionInfeasible(cycle.to_string(), edge)),
        Err(ElpError::EdgeViolated(e)) => return Err(PipelineError::ProjectionInfeasible(e.to_string(), edge)),
        Err(e) => return Err(e.into()),
    }
    Ok((next, Reduction::ActiveEdge { i, j, d_i, d_j }))
}

/// Deletes both endpoints of `edge`.
pub fn step_over_active(g: &Graph, edge: Edge) -> Result<Graph, GraphError> {
    g.delete_vertices(&[edge.0, edge.1].into_iter().collect())
}

/// Picks an edge by `rule` and deletes both endpoints. `None` on an edgeless graph.
pub fn step_random_edge(
    g: &Graph,
    x: &BTreeMap<VertexId, Rat>,
    rule: EdgeRule,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Graph, Edge)>, GraphError> {
    let edge = match rule {
        EdgeRule::MaxSum => {
            let mut best: Option<(Rat, Edge)> = None;
            for e in g.edges() {
                let s = &x[&e.0] + &x[&e.1];
                if best.as_ref().is_none_or(|(b, _)| s > *b) {
                    best = Some((s, e));
                }
            }
            best.map(|(_, e)| e)
        }
        EdgeRule::Random => {
            let m = g.edge_count();
            (m > 0).then(|| g.edges().nth(rng.gen_range(0..m)).unwrap())
        }
    };
    let Some(edge) = edge else { return Ok(None) };
    Ok(Some((step_over_active(g, edge)?, edge)))
}

/// Runs the reduction loop to completion.
pub fn run_pipeline(g: &Graph, config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut graphs = Vec::new();
    let mut records = Vec::new();
    let mut current = g.clone();
    loop {
        let k = records.len();
        let sol = solve_elp_with(&current, &config.elp)?;
        let mut x = sol.x.clone();
        let mut record = ReductionRecord {
            reduction: Reduction::ZeroOne,
            vertices: current.vertex_count(),
            edges: current.edge_count(),
            objective: sol.objective.clone(),
            decrease: Rat::zero(),
            zeros: BTreeSet::new(),
            ones: BTreeSet::new(),
            cut_rounds: sol.rounds.len(),
            pins: 0,
            alternate_found: false,
            skipped_zero_one: false,
            x: BTreeMap::new(),
        };
        graphs.push(current.clone());

        let mut apply_zero_one = true;
        if config.mode == Mode::Enhanced && current.edge_count() > 0 {
            let (_, ones) = ones_and_zeros(&x);
            if ones.is_empty() && sol.classes.active.is_empty() {
                let found = explore_alternate_bfs(&current, &sol, config.pin_budget, &config.elp)?;
                record.pins = found.pins;
                record.cut_rounds += found.found.as_ref().map_or(0, |s| s.rounds.len());
                match found.found {
                    Some(alt) => {
                        record.alternate_found = true;
                        x = alt.x;
                    }
                    None => {
                        // the enhanced order jumps straight to the 3-cycle rule here
                        apply_zero_one = false;
                        record.skipped_zero_one = x.values().any(|v| v.is_zero());
                        if record.skipped_zero_one {
                            log::info!("iteration {k}: alternate search failed, zeros left in place");
                        }
                    }
                }
            }
        }

        let mut reduced = current.clone();
        if apply_zero_one {
            let (zeros, ones) = ones_and_zeros(&x);
            record.zeros = zeros;
            record.ones = ones;
            match step_zero_one(&current, &x)? {
                None => {
                    record.reduction = Reduction::Terminal;
                    record.decrease = Rat::from(record.ones.len());
                    record.x = x;
                    let final_ones = record.ones.clone();
                    records.push(record);
                    let trace = ReductionTrace { mode: config.mode, records, final_ones, hypothesis_failed: false };
                    return Ok(PipelineRun { trace, graphs });
                }
                Some(rest) => reduced = rest,
            }
        }
        let progressed = reduced.vertex_count() < current.vertex_count();
        let classes = classify_edges(&reduced, &x);

        let triangle_first = config.mode == Mode::Base;
        let mut next = None;
        if triangle_first {
            next = step_three_cycle(&reduced).map(|(h, t)| (h, Reduction::ThreeCycle { triangle: t }));
        }
        if next.is_none() {
            if let Some(&e) = classes.active.first() {
                next = Some(step_active_edge(&reduced, &x, e)?);
            }
        }
        if next.is_none() && !triangle_first {
            next = step_three_cycle(&reduced).map(|(h, t)| (h, Reduction::ThreeCycle { triangle: t }));
        }
        if next.is_none() {
            if let Some(&e) = classes.over_active.first() {
                next = Some((step_over_active(&reduced, e)?, Reduction::OverActive { edge: e }));
            }
        }
        if next.is_none() && !progressed {
            match config.mode {
                Mode::Base => {
                    log::info!("iteration {k}: no reduction applies");
                    record.x = x;
                    records.push(record);
                    let trace =
                        ReductionTrace { mode: config.mode, records, final_ones: BTreeSet::new(), hypothesis_failed: true };
                    return Ok(PipelineRun { trace, graphs });
                }
                Mode::Enhanced => {
                    if let Some((h, e)) = step_random_edge(&reduced, &x, config.edge_rule, &mut rng)? {
                        next = Some((h, Reduction::RandomEdge { edge: e }));
                    } else {
                        return Err(PipelineError::NoProgress(k));
                    }
                }
            }
        }
        let (graph, reduction) = next.unwrap_or((reduced, Reduction::ZeroOne));
        if graph.vertex_count() >= current.vertex_count() {
            return Err(PipelineError::NoProgress(k));
        }
        log::debug!("iteration {k}: {} (f = {})", reduction.name(), record.objective);
        record.decrease = Rat::from(record.ones.len()) + reduction.base_decrease();
        record.reduction = reduction;
        record.x = x;
        records.push(record);
        current = graph;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{vset, GeneratorKind};

    fn run(g: &Graph, mode: Mode) -> PipelineRun {
        run_pipeline(g, &PipelineConfig { mode, ..Default::default() }).unwrap()
    }

    #[test]
    fn zero_one_examples() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        let x: BTreeMap<_, _> = [(1, 1), (2, 1), (3, 0)].iter().map(|&(v, a)| (VertexId(v), Rat::integer(a))).collect();
        assert_eq!(step_zero_one(&k3, &x).unwrap(), None);

        let star = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let x: BTreeMap<_, _> = star.vertices().map(|v| (v, Rat::from(usize::from(v.0 == 1)))).collect();
        assert_eq!(step_zero_one(&star, &x).unwrap(), None);

        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let x: BTreeMap<_, _> = c5.vertices().map(|v| (v, rat(3, 5))).collect();
        assert_eq!(step_zero_one(&c5, &x).unwrap(), Some(c5.clone()));
    }

    #[test]
    fn three_cycle_examples() {
        let (rest, t) = step_three_cycle(&GeneratorKind::Complete(3).generate().unwrap()).unwrap();
        assert!(rest.is_empty());
        assert_eq!(t.vertices(), &[VertexId(1), VertexId(2), VertexId(3)]);
        let (rest, _) = step_three_cycle(&GeneratorKind::Complete(4).generate().unwrap()).unwrap();
        assert_eq!(rest.vertices().collect::<Vec<_>>(), vec![VertexId(4)]);
        let two = Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let (rest, _) = step_three_cycle(&two).unwrap();
        assert_eq!(rest.edge_count(), 3);
        assert!(step_three_cycle(&GeneratorKind::Cycle(5).generate().unwrap()).is_none());
    }

    #[test]
    fn active_edge_rejects_triangle() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        let x: BTreeMap<_, _> = k3.vertices().map(|v| (v, rat(1, 2))).collect();
        let e = Edge(VertexId(1), VertexId(2));
        assert_eq!(step_active_edge(&k3, &x, e).unwrap_err(), PipelineError::TriangleThroughActiveEdge(e));
    }

    #[test]
    fn active_edge_on_path() {
        let p5 = GeneratorKind::Path(5).generate().unwrap();
        let x: BTreeMap<_, _> = [(1, 1, 2), (2, 1, 2), (3, 1, 2), (4, 1, 2), (5, 1, 2)]
            .iter()
            .map(|&(v, p, q)| (VertexId(v), rat(p, q)))
            .collect();
        let (g, red) = step_active_edge(&p5, &x, Edge(VertexId(2), VertexId(3))).unwrap();
        assert_eq!(g.edges().count(), 2);
        assert!(g.has_edge(VertexId(1), VertexId(4)));
        assert_eq!(
            red,
            Reduction::ActiveEdge { i: VertexId(2), j: VertexId(3), d_i: vset(&[1]), d_j: vset(&[4]) }
        );
    }

    #[test]
    fn over_active_and_random() {
        let k2 = GeneratorKind::Complete(2).generate().unwrap();
        let x: BTreeMap<_, _> = k2.vertices().map(|v| (v, rat(2, 3))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (g, e) = step_random_edge(&k2, &x, EdgeRule::MaxSum, &mut rng).unwrap().unwrap();
        assert!(g.is_empty());
        assert_eq!(e, Edge(VertexId(1), VertexId(2)));
        assert!(step_random_edge(&Graph::with_vertices(2), &x, EdgeRule::Random, &mut rng).unwrap().is_none());

        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let x: BTreeMap<_, _> = c5.vertices().map(|v| (v, rat(3, 5))).collect();
        let (g, _) = step_random_edge(&c5, &x, EdgeRule::Random, &mut rng).unwrap().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn k3_is_one_terminal_record() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        for mode in [Mode::Base, Mode::Enhanced] {
            let r = run(&k3, mode);
            assert!(!r.trace.hypothesis_failed);
            let kinds: Vec<_> = r.trace.records.iter().map(|r| r.reduction.name()).collect();
            // either an integral optimum is found at once, or the triangle is deleted
            assert!(kinds == ["terminal"] || kinds == ["three-cycle", "terminal"], "{kinds:?}");
            assert_eq!(r.trace.initial_objective(), Rat::integer(2));
        }
    }

    #[test]
    fn c5_terminates_without_failure() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let r = run(&c5, Mode::Enhanced);
        assert_eq!(r.trace.initial_objective(), Rat::integer(3));
        assert!(r.trace.ledger_violations().is_empty());
        assert_eq!(r.trace.count("random-edge"), 0);
    }

    #[test]
    fn empty_graph_is_terminal() {
        let r = run(&Graph::new(), Mode::Enhanced);
        assert_eq!(r.trace.records.len(), 1);
        assert!(r.trace.final_ones.is_empty());
        let r = run(&Graph::with_vertices(4), Mode::Base);
        assert_eq!(r.trace.records.len(), 1);
    }

    #[test]
    fn every_iteration_shrinks_the_graph() {
        for seed in 0..40 {
            let g = GeneratorKind::Gnp { n: 9, p: 0.35, seed }.generate().unwrap();
            for mode in [Mode::Base, Mode::Enhanced] {
                let r = run(&g, mode);
                assert!(r.trace.records.len() <= g.vertex_count() + 1);
                assert!(r.graphs.windows(2).all(|w| w[1].vertex_count() < w[0].vertex_count()));
                assert!(r.trace.ledger_violations().is_empty(), "seed {seed} {mode}");
                if mode == Mode::Enhanced {
                    assert!(!r.trace.hypothesis_failed);
                }
            }
        }
    }

    #[test]
    fn parse_flags() {
        assert_eq!("base".parse::<Mode>().unwrap(), Mode::Base);
        assert_eq!("random".parse::<EdgeRule>().unwrap(), EdgeRule::Random);
        assert!("x".parse::<Mode>().is_err());
        assert_eq!(EdgeRule::MaxSum.to_string(), "maxsum");
    }
}
