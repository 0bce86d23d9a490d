//! Exact odd-cycle separation.
//!
//! With edge weights `w(u,v) = x_u + x_v - 1 >= 0`, an odd cycle of length
//! `2s+1` has weight `2*sum(x) - (2s+1)`, so its inequality `sum(x) >= s+1`
//! is violated iff the weight is below 1, by exactly `(1 - weight) / 2`.
//! Minimum-weight odd closed walks are shortest `(v,0) -> (v,1)` paths in the
//! bipartite double cover; a simple odd cycle of no greater weight is then cut
//! out of the walk.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_traits::{One, Zero};

use super::ElpError;
use crate::graph::{Edge, Graph, OddCycle, VertexId};
use crate::rational::Rat;

/// The most violated odd-cycle inequality at `x`, with its violation
/// `(s + 1) - sum_{v in C} x_v > 0`, or `None` if `x` satisfies them all.
pub fn separate_odd_cycle(
    g: &Graph,
    x: &BTreeMap<VertexId, Rat>,
) -> Result<Option<(OddCycle, Rat)>, ElpError> {
    let order: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let value = |v: VertexId| x.get(&v).ok_or(ElpError::MissingValue(v));

    let mut adj: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); order.len()];
    for e in g.edges() {
        let w = value(e.0)? + value(e.1)? - Rat::one();
        if w.is_negative() {
            return Err(ElpError::EdgeViolated(e));
        }
        adj[index[&e.0]].push((index[&e.1], w.clone()));
        adj[index[&e.1]].push((index[&e.0], w));
    }

    // only walks lighter than 1 can yield a violated inequality
    let mut best: Option<(Rat, Vec<usize>)> = None;
    for start in 0..order.len() {
        if adj[start].is_empty() {
            continue;
        }
        let bound = best.as_ref().map_or_else(Rat::one, |(w, _)| w.clone());
        if let Some((w, walk)) = shortest_odd_walk(&adj, start, &bound) {
            best = Some((w, walk));
        }
    }
    let Some((_, walk)) = best else { return Ok(None) };

    let cycle = OddCycle::from_sequence(extract_odd_cycle(walk).into_iter().map(|i| order[i]).collect());
    let total: Rat = cycle.vertices().iter().map(|&v| value(v).cloned()).collect::<Result<Vec<_>, _>>()?.iter().sum();
    let violation = Rat::from(cycle.rhs()) - total;
    debug_assert!(violation.is_positive());
    Ok(Some((cycle, violation)))
}

/// Dijkstra from `(start, even)` to `(start, odd)`; returns the walk as a
/// closed vertex sequence if its weight is strictly below `bound`.
fn shortest_odd_walk(adj: &[Vec<(usize, Rat)>], start: usize, bound: &Rat) -> Option<(Rat, Vec<usize>)> {
    let node = |v: usize, parity: usize| 2 * v + parity;
    let target = node(start, 1);
    let mut dist: Vec<Option<Rat>> = vec![None; 2 * adj.len()];
    let mut pred: Vec<usize> = vec![usize::MAX; 2 * adj.len()];
    let mut done = vec![false; 2 * adj.len()];
    let mut heap = BinaryHeap::new();
    dist[node(start, 0)] = Some(Rat::zero());
    heap.push(Reverse((Rat::zero(), node(start, 0))));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        if d >= *bound {
            return None;
        }
        done[u] = true;
        if u == target {
            let mut walk = vec![u / 2];
            let mut cur = u;
            while cur != node(start, 0) {
                cur = pred[cur];
                walk.push(cur / 2);
            }
            walk.reverse();
            return Some((d, walk));
        }
        let (v, parity) = (u / 2, u % 2);
        for (w, wt) in &adj[v] {
            let next = node(*w, 1 - parity);
            if done[next] {
                continue;
            }
            let nd = &d + wt;
            if dist[next].as_ref().is_none_or(|old| nd < *old) {
                dist[next] = Some(nd.clone());
                pred[next] = u;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    None
}

/// Reduces a closed walk `[v0, v1, ..., v0]` with an odd number of edges to a
/// simple odd cycle on a subset of its vertices. A repeated vertex splits the
/// walk into two closed walks of opposite parity; keep the odd one.
pub(crate) fn extract_odd_cycle(walk: Vec<usize>) -> Vec<usize> {
    debug_assert_eq!(walk.first(), walk.last());
    let mut seq: Vec<usize> = walk[..walk.len() - 1].to_vec();
    debug_assert!(seq.len() % 2 == 1);
    loop {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut split = None;
        for (pos, &v) in seq.iter().enumerate() {
            if let Some(&first) = seen.get(&v) {
                split = Some((first, pos));
                break;
            }
            seen.insert(v, pos);
        }
        let Some((i, j)) = split else { return seq };
        let inner: Vec<usize> = seq[i..j].to_vec();
        if inner.len() % 2 == 1 {
            seq = inner;
        } else {
            let mut outer = seq[j..].to_vec();
            outer.extend_from_slice(&seq[..i]);
            seq = outer;
        }
    }
}

/// Weight of `cycle` under `w(u,v) = x_u + x_v - 1`.
pub fn cycle_weight(cycle: &OddCycle, x: &BTreeMap<VertexId, Rat>) -> Rat {
    cycle
        .edges()
        .map(|Edge(a, b)| &x[&a] + &x[&b] - Rat::one())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorKind;
    use crate::rational::rat;

    fn uniform(g: &Graph, v: Rat) -> BTreeMap<VertexId, Rat> {
        g.vertices().map(|u| (u, v.clone())).collect()
    }

    #[test]
    fn c5_at_one_half() {
        let g = GeneratorKind::Cycle(5).generate().unwrap();
        let (c, viol) = separate_odd_cycle(&g, &uniform(&g, rat(1, 2))).unwrap().unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(viol, rat(1, 2));
    }

    #[test]
    fn bipartite_has_nothing() {
        let g = GeneratorKind::Cycle(4).generate().unwrap();
        assert!(separate_odd_cycle(&g, &uniform(&g, rat(1, 2))).unwrap().is_none());
    }

    #[test]
    fn petersen_at_one_half() {
        let g = GeneratorKind::Petersen.generate().unwrap();
        let (c, viol) = separate_odd_cycle(&g, &uniform(&g, rat(1, 2))).unwrap().unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.is_cycle_of(&g));
        assert_eq!(viol, rat(1, 2));
    }

    #[test]
    fn satisfied_point_is_not_separated() {
        let g = GeneratorKind::Cycle(5).generate().unwrap();
        assert!(separate_odd_cycle(&g, &uniform(&g, rat(3, 5))).unwrap().is_none());
    }

    #[test]
    fn edge_violation_is_rejected() {
        let g = GeneratorKind::Cycle(5).generate().unwrap();
        assert!(matches!(
            separate_odd_cycle(&g, &uniform(&g, rat(1, 3))),
            Err(ElpError::EdgeViolated(_))
        ));
    }

    #[test]
    fn walk_extraction_keeps_odd_part() {
        // triangle 0-1-2 glued at 0 to a back-and-forth 0-3-0: odd closed walk of 5 edges
        let cycle = extract_odd_cycle(vec![0, 3, 0, 1, 2, 0]);
        assert_eq!(cycle, vec![0, 1, 2]);
        // two spurs and a triangle: 7 edges
        let cycle = extract_odd_cycle(vec![0, 5, 0, 6, 0, 1, 2, 0]);
        let mut sorted = cycle.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
    }
}
