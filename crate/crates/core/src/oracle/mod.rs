//! Ground truth and comparison points: exact minimum vertex cover, the two
//! classical 2-approximations, odd-cycle enumeration and the structural
//! diagnostics built on it.

mod cycles;
mod probe;

use std::time::{Duration, Instant};

pub use cycles::{enumerate_odd_cycles, independent_odd_cycle_rank, min_violated_odd_cycle, RankReport};
pub use probe::{small_edge_conjecture_probe, ProbeReport};

use crate::elp::ElpError;
use crate::graph::{Cover, Graph, VertexId};
use crate::lp::{solve, LpError, LpProblem};
use crate::rational::{rat, Rat};

/// Largest graph `exact_vc` accepts by default.
pub const DEFAULT_CAP: usize = 30;
/// Largest graph for which all optimal covers are enumerated by default.
pub const DEFAULT_ENUMERATE_CAP: usize = 20;
const MAX_COVERS: usize = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("more than {0} cycles")]
    TooManyCycles(usize),
    #[error("more than {0} optimal covers")]
    TooManyCovers(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Elp(#[from] ElpError),
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub opt_size: usize,
    pub one_optimal_cover: Cover,
    pub all_optimal_covers: Option<Vec<Cover>>,
    pub elapsed: Duration,
}

/// Bitmask view of a graph with at most 64 vertices.
struct Masks {
    labels: Vec<VertexId>,
    adj: Vec<u64>,
    full: u64,
}

fn above(u: usize) -> u64 {
    if u >= 63 {
        0
    } else {
        u64::MAX << (u + 1)
    }
}

impl Masks {
    fn new(g: &Graph) -> Masks {
        let labels: Vec<VertexId> = g.vertices().collect();
        assert!(labels.len() <= 64);
        let adj = labels
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .map(|u| 1u64 << labels.binary_search(&u).unwrap())
                    .fold(0, |a, b| a | b)
            })
            .collect();
        let full = if labels.len() == 64 { u64::MAX } else { (1u64 << labels.len()) - 1 };
        Masks { labels, adj, full }
    }

    fn cover(&self, mask: u64) -> Cover {
        (0..self.labels.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.labels[i]).collect()
    }

    /// Size of a greedy maximal matching among `alive` vertices.
    fn matching_bound(&self, alive: u64) -> usize {
        let mut free = alive;
        let mut size = 0;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if free >> v & 1 == 0 {
                continue;
            }
            let cand = self.adj[v] & free;
            if cand != 0 {
                let u = cand.trailing_zeros() as usize;
                free &= !(1 << v) & !(1 << u);
                size += 1;
            }
        }
        size
    }

    /// Branch and bound over the subgraph induced by `alive`.
    fn search(&self, alive: u64, chosen: u64, best: &mut (usize, u64)) {
        let size = chosen.count_ones() as usize;
        let mut pick = None;
        let mut max_deg = 0;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & alive).count_ones();
            if d == 1 {
                // a pendant vertex's neighbour is in some optimal cover
                let u = (self.adj[v] & alive).trailing_zeros() as usize;
                return self.search(alive & !(1 << u) & !(1 << v), chosen | 1 << u, best);
            }
            if d > max_deg {
                max_deg = d;
                pick = Some(v);
            }
        }
        let Some(v) = pick else {
            if size < best.0 {
                *best = (size, chosen);
            }
            return;
        };
        if size + self.matching_bound(alive) >= best.0 {
            return;
        }
        self.search(alive & !(1 << v), chosen | 1 << v, best);
        let nbrs = self.adj[v] & alive;
        self.search(alive & !(1 << v) & !nbrs, chosen | nbrs, best);
    }

    /// Every cover of size exactly `k`, by include/exclude branching on the
    /// first uncovered edge. The branches are disjoint, so no duplicates.
    fn enumerate(&self, k: usize, inc: u64, exc: u64, out: &mut Vec<u64>) -> Result<(), OracleError> {
        let size = inc.count_ones() as usize;
        if size > k {
            return Ok(());
        }
        let open = !inc & self.full;
        let mut edge = None;
        let mut rest = open;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = self.adj[u] & open & above(u);
            if nb != 0 {
                edge = Some((u, nb.trailing_zeros() as usize));
                break;
            }
        }
        let Some((u, v)) = edge else {
            if size == k {
                if out.len() == MAX_COVERS {
                    return Err(OracleError::TooManyCovers(MAX_COVERS));
                }
                out.push(inc);
            }
            return Ok(());
        };
        if size + self.matching_bound(open) > k {
            return Ok(());
        }
        let (u_out, v_out) = (exc >> u & 1 == 1, exc >> v & 1 == 1);
        match (u_out, v_out) {
            (true, true) => Ok(()),
            (true, false) => self.enumerate(k, inc | 1 << v, exc, out),
            (false, true) => self.enumerate(k, inc | 1 << u, exc, out),
            (false, false) => {
                self.enumerate(k, inc | 1 << u, exc, out)?;
                self.enumerate(k, inc | 1 << v, exc | 1 << u, out)
            }
        }
    }
}

/// Exact minimum vertex cover by branch and bound (max-degree branching,
/// pendant rule, matching lower bound). With `enumerate_all`, also lists
/// every optimal cover.
pub fn exact_vc(g: &Graph, enumerate_all: bool, cap: usize) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > cap.min(64) {
        return Err(OracleError::CapExceeded { n, cap: cap.min(64) });
    }
    let start = Instant::now();
    let masks = Masks::new(g);
    let greedy = matching_2approx(g);
    let greedy_mask = greedy
        .members
        .iter()
        .map(|v| 1u64 << masks.labels.binary_search(v).unwrap())
        .fold(0, |a, b| a | b);
    let mut best = (greedy.len(), greedy_mask);
    masks.search(masks.full, 0, &mut best);
    let all_optimal_covers = if enumerate_all {
        let mut out = Vec::new();
        masks.enumerate(best.0, 0, 0, &mut out)?;
        Some(out.into_iter().map(|m| masks.cover(m)).collect())
    } else {
        None
    };
    Ok(OracleResult {
        opt_size: best.0,
        one_optimal_cover: masks.cover(best.1),
        all_optimal_covers,
        elapsed: start.elapsed(),
    })
}

/// Both endpoints of a greedy maximal matching taken in lexicographic edge order.
pub fn matching_2approx(g: &Graph) -> Cover {
    let mut cover = Cover::new();
    for e in g.edges() {
        if !cover.contains(e.0) && !cover.contains(e.1) {
            cover.members.insert(e.0);
            cover.members.insert(e.1);
        }
    }
    cover
}

/// Vertices valued at least 1/2 in a basic optimum of the plain LP relaxation.
pub fn nt_half_integral_round(g: &Graph) -> Result<Cover, OracleError> {
    let labels: Vec<VertexId> = g.vertices().collect();
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .map(|e| (labels.binary_search(&e.0).unwrap(), labels.binary_search(&e.1).unwrap()))
        .collect();
    let sol = solve(&LpProblem::vertex_cover(labels.len(), &pairs))?;
    let half = rat(1, 2);
    Ok(labels.iter().zip(&sol.values).filter(|(_, x)| **x >= half).map(|(&v, _)| v).collect())
}

/// Objective of the plain LP relaxation.
pub fn lp_value(g: &Graph) -> Result<Rat, OracleError> {
    let labels: Vec<VertexId> = g.vertices().collect();
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .map(|e| (labels.binary_search(&e.0).unwrap(), labels.binary_search(&e.1).unwrap()))
        .collect();
    Ok(solve(&LpProblem::vertex_cover(labels.len(), &pairs))?.objective)
}

/// `true` if every value is 0, 1/2 or 1.
pub fn is_half_integral(values: &[Rat]) -> bool {
    let half = rat(1, 2);
    values.iter().all(|v| v.is_zero() || v.is_one() || *v == half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorKind;
    use num_traits::One;
    use std::collections::BTreeSet;

    fn brute_force_opt(g: &Graph) -> usize {
        let labels: Vec<VertexId> = g.vertices().collect();
        (0u32..1 << labels.len())
            .filter(|mask| {
                let set: BTreeSet<_> = (0..labels.len()).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
                g.uncovered_edges(&set).is_empty()
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn small_optima() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        assert_eq!(exact_vc(&k3, false, DEFAULT_CAP).unwrap().opt_size, 2);
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        assert_eq!(exact_vc(&c5, false, DEFAULT_CAP).unwrap().opt_size, 3);
        let c7 = GeneratorKind::Cycle(7).generate().unwrap();
        assert_eq!(exact_vc(&c7, false, DEFAULT_CAP).unwrap().opt_size, 4);
        let p = GeneratorKind::Petersen.generate().unwrap();
        assert_eq!(brute_force_opt(&p), 6);
        let r = exact_vc(&p, true, DEFAULT_CAP).unwrap();
        assert_eq!(r.opt_size, 6);
        assert!(p.uncovered_edges(&r.one_optimal_cover.members).is_empty());
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        for seed in 0..60 {
            let g = GeneratorKind::Gnp { n: 9, p: 0.4, seed }.generate().unwrap();
            let r = exact_vc(&g, true, DEFAULT_CAP).unwrap();
            assert_eq!(r.opt_size, brute_force_opt(&g), "seed {seed}");
            assert_eq!(r.one_optimal_cover.len(), r.opt_size);
            // every optimal cover found, each valid, no duplicates
            let labels: Vec<VertexId> = g.vertices().collect();
            let expected = (0u32..1 << labels.len())
                .filter(|m| m.count_ones() as usize == r.opt_size)
                .filter(|mask| {
                    let set: BTreeSet<_> = (0..labels.len()).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
                    g.uncovered_edges(&set).is_empty()
                })
                .count();
            let all = r.all_optimal_covers.unwrap();
            assert_eq!(all.len(), expected, "seed {seed}");
            let distinct: BTreeSet<_> = all.iter().map(|c| c.members.clone()).collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::with_vertices(31);
        assert_eq!(exact_vc(&g, false, DEFAULT_CAP).unwrap_err(), OracleError::CapExceeded { n: 31, cap: 30 });
    }

    #[test]
    fn c5_has_five_optimal_covers() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let r = exact_vc(&c5, true, DEFAULT_CAP).unwrap();
        assert_eq!(r.all_optimal_covers.unwrap().len(), 5);
    }

    #[test]
    fn baselines() {
        let k2 = GeneratorKind::Complete(2).generate().unwrap();
        assert_eq!(matching_2approx(&k2).len(), 2);
        assert_eq!(nt_half_integral_round(&k2).unwrap().len(), 1);
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        assert_eq!(matching_2approx(&c5).len(), 4);
        assert!(matching_2approx(&Graph::new()).is_empty());
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        assert_eq!(nt_half_integral_round(&k3).unwrap().len(), 3);
        let c4 = GeneratorKind::Cycle(4).generate().unwrap();
        let nt = nt_half_integral_round(&c4).unwrap();
        assert!(c4.uncovered_edges(&nt.members).is_empty());
        assert!(Rat::from(nt.len()) <= Rat::integer(2) * lp_value(&c4).unwrap());
        assert!(lp_value(&c4).unwrap() == Rat::integer(2));
        assert!(lp_value(&k3).unwrap() == rat(3, 2));
        assert!(!is_half_integral(&[rat(1, 3)]));
        assert!(is_half_integral(&[rat(1, 2), Rat::one()]));
    }
}
