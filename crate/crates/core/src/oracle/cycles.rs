use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::OracleError;
use crate::graph::{Graph, OddCycle, VertexId};
use crate::rational::Rat;

struct Dfs<'a> {
    g: &'a Graph,
    max_len: usize,
    chordless: bool,
    cap: usize,
    path: Vec<VertexId>,
    out: Vec<OddCycle>,
}

impl Dfs<'_> {
    fn record(&mut self) -> Result<(), OracleError> {
        let n = self.path.len();
        // each cycle is met in both directions; keep one
        if n % 2 == 1 && self.path[1] < self.path[n - 1] {
            if self.out.len() == self.cap {
                return Err(OracleError::TooManyCycles(self.cap));
            }
            self.out.push(OddCycle::from_sequence(self.path.clone()));
        }
        Ok(())
    }

    fn extend(&mut self) -> Result<(), OracleError> {
        let start = self.path[0];
        let last = *self.path.last().unwrap();
        let g = self.g;
        for w in g.neighbors(last) {
            if w == start && self.path.len() >= 3 {
                self.record()?;
                continue;
            }
            if w <= start || self.path.contains(&w) || self.path.len() == self.max_len {
                continue;
            }
            if self.chordless {
                // w may touch only `last` among interior path vertices
                let inner = self.path.get(1..self.path.len() - 1).unwrap_or(&[]);
                if inner.iter().any(|&p| g.has_edge(p, w)) {
                    continue;
                }
                if self.path.len() >= 2 && g.has_edge(start, w) {
                    // w closes a chordless cycle and cannot be extended past
                    self.path.push(w);
                    if self.path.len() >= 3 {
                        self.record()?;
                    }
                    self.path.pop();
                    continue;
                }
            }
            self.path.push(w);
            self.extend()?;
            self.path.pop();
        }
        Ok(())
    }
}

/// All simple odd cycles of length at most `max_len`, each once, in canonical form.
/// With `chordless_only`, only induced cycles are returned.
pub fn enumerate_odd_cycles(
    g: &Graph,
    max_len: usize,
    chordless_only: bool,
    cap: usize,
) -> Result<Vec<OddCycle>, OracleError> {
    let mut dfs = Dfs { g, max_len, chordless: chordless_only, cap, path: Vec::new(), out: Vec::new() };
    for s in g.vertices() {
        dfs.path = vec![s];
        dfs.extend()?;
    }
    let mut out = dfs.out;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.vertices().cmp(b.vertices())));
    Ok(out)
}

/// Brute-force separation: the minimum weight, under `w(u,v) = x_u + x_v - 1`,
/// over all simple odd cycles whose weight is below 1 (i.e. whose inequality
/// `x` violates), found by exhaustive path search pruned at the incumbent.
/// Exponential; intended as an independent check on small graphs.
pub fn min_violated_odd_cycle(g: &Graph, x: &BTreeMap<VertexId, Rat>) -> Option<(Rat, OddCycle)> {
    struct Search<'a> {
        g: &'a Graph,
        x: &'a BTreeMap<VertexId, Rat>,
        path: Vec<VertexId>,
        best: Option<(Rat, OddCycle)>,
    }
    impl Search<'_> {
        fn bound(&self) -> Rat {
            self.best.as_ref().map_or_else(Rat::one, |(w, _)| w.clone())
        }
        fn go(&mut self, weight: Rat) {
            let start = self.path[0];
            let last = *self.path.last().unwrap();
            let g = self.g;
            for w in g.neighbors(last) {
                let step = &self.x[&last] + &self.x[&w] - Rat::one();
                let total = &weight + &step;
                if total >= self.bound() {
                    continue;
                }
                if w == start {
                    if self.path.len() >= 3 && self.path.len() % 2 == 1 {
                        self.best = Some((total, OddCycle::from_sequence(self.path.clone())));
                    }
                    continue;
                }
                if w <= start || self.path.contains(&w) {
                    continue;
                }
                self.path.push(w);
                self.go(total);
                self.path.pop();
            }
        }
    }
    let mut s = Search { g, x, path: Vec::new(), best: None };
    for v in g.vertices() {
        s.path = vec![v];
        s.go(Rat::zero());
    }
    s.best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub chordless_odd_cycles: usize,
    pub rank: usize,
    pub vertices: usize,
    pub has_triangle: bool,
    /// Sufficient condition for the active edge hypothesis: a triangle, or
    /// fewer independent chordless odd cycles than vertices.
    pub hypothesis_guaranteed: bool,
}

/// Rank over the rationals of the chordless odd cycle incidence matrix.
pub fn independent_odd_cycle_rank(g: &Graph, cap: usize) -> Result<RankReport, OracleError> {
    let cycles = enumerate_odd_cycles(g, g.vertex_count(), true, cap)?;
    let mut rows: Vec<Vec<Rat>> = cycles
        .iter()
        .map(|c| c.incidence(g).into_iter().map(|b| Rat::integer(b as i64)).collect())
        .collect();
    let rank = rank(&mut rows, g.vertex_count());
    let has_triangle = g.find_triangle().is_some();
    Ok(RankReport {
        chordless_odd_cycles: cycles.len(),
        rank,
        vertices: g.vertex_count(),
        has_triangle,
        hypothesis_guaranteed: has_triangle || rank < g.vertex_count(),
    })
}

fn rank(rows: &mut [Vec<Rat>], cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for i in (r + 1)..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            for j in c..cols {
                let delta = &f * &rows[r][j];
                rows[i][j] -= &delta;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorKind;
    use crate::rational::rat;

    #[test]
    fn counts() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let cs = enumerate_odd_cycles(&c5, 5, true, 1000).unwrap();
        assert_eq!(cs.len(), 1);

        let k4 = GeneratorKind::Complete(4).generate().unwrap();
        let all = enumerate_odd_cycles(&k4, 4, false, 1000).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|c| c.len() == 3));
        assert_eq!(enumerate_odd_cycles(&k4, 4, true, 1000).unwrap().len(), 4);

        let p = GeneratorKind::Petersen.generate().unwrap();
        let fives = enumerate_odd_cycles(&p, 5, false, 10_000).unwrap();
        assert_eq!(fives.len(), 12);
    }

    #[test]
    fn chordless_filter_agrees_with_has_chord() {
        for seed in 0..20 {
            let g = GeneratorKind::Gnp { n: 8, p: 0.45, seed }.generate().unwrap();
            let all = enumerate_odd_cycles(&g, 8, false, 1_000_000).unwrap();
            let filtered: Vec<_> = all.iter().filter(|c| !c.has_chord(&g)).cloned().collect();
            let direct = enumerate_odd_cycles(&g, 8, true, 1_000_000).unwrap();
            assert_eq!(filtered, direct, "seed {seed}");
            assert!(all.iter().all(|c| c.is_cycle_of(&g) && c.len() % 2 == 1));
        }
    }

    #[test]
    fn cycle_cap() {
        let k6 = GeneratorKind::Complete(6).generate().unwrap();
        assert_eq!(enumerate_odd_cycles(&k6, 6, false, 5), Err(OracleError::TooManyCycles(5)));
    }

    #[test]
    fn rank_examples() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let r = independent_odd_cycle_rank(&c5, 1000).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.hypothesis_guaranteed);
        let k4 = GeneratorKind::Complete(4).generate().unwrap();
        let r = independent_odd_cycle_rank(&k4, 1000).unwrap();
        assert!(r.has_triangle && r.hypothesis_guaranteed);
        assert_eq!(r.rank, 4);
    }

    #[test]
    fn brute_force_separation() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let half: BTreeMap<_, _> = c5.vertices().map(|v| (v, rat(1, 2))).collect();
        let (w, c) = min_violated_odd_cycle(&c5, &half).unwrap();
        assert!(w.is_zero());
        assert_eq!(c.len(), 5);
        let ok: BTreeMap<_, _> = c5.vertices().map(|v| (v, rat(3, 5))).collect();
        assert!(min_violated_odd_cycle(&c5, &ok).is_none());
    }
}
