use serde::Serialize;

use super::{exact_vc, OracleError};
use crate::elp::solve_elp;
use crate::graph::{Edge, Graph};

/// Small edges of the relaxation's optimum, checked against every optimal cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub small_edges: Vec<Edge>,
    /// Small edges with exactly one endpoint in at least one optimal cover.
    pub witnessed: Vec<Edge>,
    /// Small edges with both endpoints in every optimal cover.
    pub both_always: Vec<Edge>,
    pub optimal_covers: usize,
    pub opt_size: usize,
    pub triangle_free: bool,
}

impl ProbeReport {
    pub fn has_good_small_edge(&self) -> bool {
        !self.witnessed.is_empty() || self.small_edges.is_empty()
    }

    /// Every small edge has both endpoints in every optimal cover.
    pub fn is_counterexample(&self) -> bool {
        !self.small_edges.is_empty() && self.both_always.len() == self.small_edges.len()
    }
}

pub fn small_edge_conjecture_probe(g: &Graph, cap: usize) -> Result<ProbeReport, OracleError> {
    let sol = solve_elp(g)?;
    let exact = exact_vc(g, true, cap)?;
    let covers = exact.all_optimal_covers.unwrap_or_default();
    let small_edges = sol.classes.small.clone();
    let mut witnessed = Vec::new();
    let mut both_always = Vec::new();
    for &e in &small_edges {
        let one_end = |c: &crate::graph::Cover| c.contains(e.0) != c.contains(e.1);
        if covers.iter().any(one_end) {
            witnessed.push(e);
        } else {
            both_always.push(e);
        }
    }
    Ok(ProbeReport {
        small_edges,
        witnessed,
        both_always,
        optimal_covers: covers.len(),
        opt_size: exact.opt_size,
        triangle_free: g.find_triangle().is_none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorKind;
    use crate::oracle::DEFAULT_ENUMERATE_CAP;

    #[test]
    fn c5_and_k2() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let r = small_edge_conjecture_probe(&c5, DEFAULT_ENUMERATE_CAP).unwrap();
        assert_eq!(r.optimal_covers, 5);
        assert_eq!(r.witnessed, r.small_edges);
        assert!(r.has_good_small_edge() && !r.is_counterexample());

        let k2 = GeneratorKind::Complete(2).generate().unwrap();
        let r = small_edge_conjecture_probe(&k2, DEFAULT_ENUMERATE_CAP).unwrap();
        assert_eq!(r.small_edges.len(), 1);
        assert_eq!(r.witnessed.len(), 1);
    }

    #[test]
    fn cap_propagates() {
        let g = GeneratorKind::Path(25).generate().unwrap();
        assert!(matches!(
            small_edge_conjecture_probe(&g, DEFAULT_ENUMERATE_CAP),
            Err(OracleError::CapExceeded { .. })
        ));
    }
}
