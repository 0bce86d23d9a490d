//! Turning a reduction trace back into a cover of the input graph, and the
//! additive error certificate that comes with it.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::graph::{Cover, Edge, Graph, VertexId};
use crate::rational::{rat, Rat};
use crate::reduce::{Reduction, ReductionTrace};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("trace ended in hypothesis failure; no cover is defined (try enhanced mode)")]
    HypothesisFailed,
    #[error("iteration {step} added {added} vertices, bound is {bound}")]
    GrowthExceeded { step: usize, added: usize, bound: usize },
}

/// Walks the trace backwards from the final ones, adding at each iteration
/// its ones plus what its reduction requires: the whole triangle, both
/// endpoints of an over-active or random edge, and for an active edge `(i, j)`
/// the vertex `j` if every other neighbour of `i` is already covered,
/// otherwise `i`.
pub fn backtrack(trace: &ReductionTrace) -> Result<Cover, CoverError> {
    if trace.hypothesis_failed {
        return Err(CoverError::HypothesisFailed);
    }
    let mut s: BTreeSet<VertexId> = trace.final_ones.clone();
    let steps = trace.records.len().saturating_sub(1);
    for (k, rec) in trace.records[..steps].iter().enumerate().rev() {
        let before = s.len();
        s.extend(&rec.ones);
        match &rec.reduction {
            Reduction::Terminal | Reduction::ZeroOne => {}
            Reduction::ThreeCycle { triangle } => s.extend(triangle.vertices()),
            Reduction::ActiveEdge { i, j, d_i, .. } => {
                // membership is tested against the cover of the rewired graph
                let pick = if d_i.iter().all(|v| s.contains(v)) { *j } else { *i };
                s.insert(pick);
            }
            Reduction::OverActive { edge } | Reduction::RandomEdge { edge } => {
                s.insert(edge.0);
                s.insert(edge.1);
            }
        }
        let added = s.len() - before;
        let bound = rec.ones.len() + rec.reduction.growth_bound();
        if added > bound {
            return Err(CoverError::GrowthExceeded { step: k, added, bound });
        }
    }
    Ok(Cover { members: s })
}

/// Whether `cover` touches every edge of `g`, and the edges it misses.
pub fn validate_cover(g: &Graph, cover: &Cover) -> (bool, Vec<Edge>) {
    let missed = g.uncovered_edges(&cover.members);
    (missed.is_empty(), missed)
}

/// Error accounting for a finished run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub f1: Rat,
    pub cover_size: usize,
    /// active-edge steps
    pub eta: usize,
    /// random-edge steps
    pub gamma: usize,
    /// 3-cycle steps
    pub delta: usize,
    /// over-active steps
    pub sigma: usize,
    pub ones_total: usize,
    pub beta: usize,
    pub alpha: usize,
    pub lambda: Rat,
    pub xi: Rat,
    /// `3/2 f1 + xi`
    pub guarantee_rhs: Rat,
    /// Checks that failed; expected to stay empty.
    pub findings: Vec<String>,
}

pub fn certify(trace: &ReductionTrace, cover: &Cover) -> BoundCertificate {
    let f1 = trace.initial_objective();
    let eta = trace.count("active-edge");
    let gamma = trace.count("random-edge");
    let delta = trace.count("three-cycle");
    let sigma = trace.count("over-active");
    let ones_total = trace.records.iter().flat_map(|r| &r.ones).collect::<BTreeSet<_>>().len();
    let beta = ones_total + eta;
    let alpha = gamma.saturating_sub(beta);
    let lambda = Rat::from(gamma + delta) + rat(2, 3) * Rat::from(sigma);
    let half_f1 = &f1 * &rat(1, 2);
    let slack = (&lambda - &half_f1).max(Rat::zero());
    let xi = (Rat::from(alpha) * rat(1, 2)).min(slack);
    let guarantee_rhs = &f1 * &rat(3, 2) + &xi;

    let mut findings = Vec::new();
    let size = Rat::from(cover.len());
    if gamma == 0 && size > &f1 * &rat(3, 2) {
        findings.push(format!("no random-edge step but |S1| = {} > 3/2 f1 = {}", cover.len(), &f1 * &rat(3, 2)));
    }
    for k in trace.ledger_violations() {
        findings.push(format!("objective ledger fails after iteration {k}"));
    }
    BoundCertificate {
        f1,
        cover_size: cover.len(),
        eta,
        gamma,
        delta,
        sigma,
        ones_total,
        beta,
        alpha,
        lambda,
        xi,
        guarantee_rhs,
        findings,
    }
}

/// Counter arithmetic alone, for checking the formulas on given counts.
pub fn xi_from_counts(f1: &Rat, beta: usize, gamma: usize, delta: usize, sigma: usize) -> Rat {
    let alpha = gamma.saturating_sub(beta);
    let lambda = Rat::from(gamma + delta) + rat(2, 3) * Rat::from(sigma);
    let slack = (lambda - f1 * &rat(1, 2)).max(Rat::zero());
    (Rat::from(alpha) * rat(1, 2)).min(slack)
}
