use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph, GraphError, VertexId};

/// Deterministic graph families. Random kinds are reproducible for a fixed seed
/// on every platform (ChaCha8 stream).
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    Cycle(u32),
    Path(u32),
    Complete(u32),
    Petersen,
    /// `rows x cols` grid with wrap-around in both directions.
    TorusGrid(u32, u32),
    /// Erdős–Rényi `G(n, p)`.
    Gnp { n: u32, p: f64, seed: u64 },
    /// `G(n, p)` with one edge dropped from each remaining triangle until none is left.
    RandomTriangleFree { n: u32, p: f64, seed: u64 },
    /// Random bipartite graph with parts `1..=n/2` and the rest.
    RandomBipartite { n: u32, p: f64, seed: u64 },
}

#[derive(Debug, thiserror::Error)]
#[error("bad generator spec {0:?}: {1}")]
pub struct ParseGeneratorError(String, String);

fn check_p(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::InvalidParameters(format!("p = {p} outside [0, 1]")))
    }
}

fn gnp(n: u32, p: f64, rng: &mut ChaCha8Rng, allowed: impl Fn(u32, u32) -> bool) -> Graph {
    let mut g = Graph::with_vertices(n);
    for a in 1..=n {
        for b in (a + 1)..=n {
            // draw even when disallowed so the stream does not depend on the filter
            let hit = rng.gen_bool(p);
            if hit && allowed(a, b) {
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
        }
    }
    g
}

impl GeneratorKind {
    pub fn generate(&self) -> Result<Graph, GraphError> {
        let bad = |msg: &str| Err(GraphError::InvalidParameters(msg.to_string()));
        match *self {
            GeneratorKind::Cycle(n) => {
                if n < 3 {
                    return bad("cycle needs n >= 3");
                }
                let mut g = Graph::with_vertices(n);
                for v in 1..=n {
                    g.add_edge(VertexId(v), VertexId(v % n + 1))?;
                }
                Ok(g)
            }
            GeneratorKind::Path(n) => {
                if n < 1 {
                    return bad("path needs n >= 1");
                }
                let mut g = Graph::with_vertices(n);
                for v in 1..n {
                    g.add_edge(VertexId(v), VertexId(v + 1))?;
                }
                Ok(g)
            }
            GeneratorKind::Complete(n) => {
                if n < 1 {
                    return bad("complete graph needs n >= 1");
                }
                let mut g = Graph::with_vertices(n);
                for a in 1..=n {
                    for b in (a + 1)..=n {
                        g.add_edge(VertexId(a), VertexId(b))?;
                    }
                }
                Ok(g)
            }
            GeneratorKind::Petersen => {
                let mut g = Graph::with_vertices(10);
                for k in 0..5u32 {
                    g.add_edge(VertexId(k + 1), VertexId((k + 1) % 5 + 1))?;
                    g.add_edge(VertexId(k + 6), VertexId((k + 2) % 5 + 6))?;
                    g.add_edge(VertexId(k + 1), VertexId(k + 6))?;
                }
                Ok(g)
            }
            GeneratorKind::TorusGrid(rows, cols) => {
                if rows < 3 || cols < 3 {
                    return bad("torus grid needs both sides >= 3");
                }
                let id = |r: u32, c: u32| VertexId(r * cols + c + 1);
                let mut g = Graph::with_vertices(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        g.add_edge(id(r, c), id((r + 1) % rows, c))?;
                        g.add_edge(id(r, c), id(r, (c + 1) % cols))?;
                    }
                }
                Ok(g)
            }
            GeneratorKind::Gnp { n, p, seed } => {
                check_p(p)?;
                Ok(gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed), |_, _| true))
            }
            GeneratorKind::RandomTriangleFree { n, p, seed } => {
                check_p(p)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut g = gnp(n, p, &mut rng, |_, _| true);
                while let Some(t) = g.find_triangle() {
                    let v = t.vertices();
                    let victim = match rng.gen_range(0..3) {
                        0 => Edge::new(v[0], v[1]),
                        1 => Edge::new(v[1], v[2]),
                        _ => Edge::new(v[0], v[2]),
                    };
                    g.remove_edge(victim);
                }
                Ok(g)
            }
            GeneratorKind::RandomBipartite { n, p, seed } => {
                check_p(p)?;
                let half = n / 2;
                Ok(gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed), |a, b| {
                    (a <= half) != (b <= half)
                }))
            }
        }
    }
}

impl Graph {
    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let removed = self.adj.get_mut(&e.0).is_some_and(|n| n.remove(&e.1));
        if removed {
            self.adj.get_mut(&e.1).unwrap().remove(&e.0);
            self.edge_count -= 1;
        }
        removed
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorKind::Path(n) => write!(f, "path:{n}"),
            GeneratorKind::Complete(n) => write!(f, "complete:{n}"),
            GeneratorKind::Petersen => write!(f, "petersen"),
            GeneratorKind::TorusGrid(a, b) => write!(f, "torus:{a}x{b}"),
            GeneratorKind::Gnp { n, p, seed } => write!(f, "gnp:{n}:{p}:{seed}"),
            GeneratorKind::RandomTriangleFree { n, p, seed } => write!(f, "random-tf:{n}:{p}:{seed}"),
            GeneratorKind::RandomBipartite { n, p, seed } => write!(f, "bipartite:{n}:{p}:{seed}"),
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = ParseGeneratorError;

    /// Accepts the `Display` form, e.g. `cycle:5`, `torus:5x5`, `random-tf:20:0.3:42`.
    fn from_str(s: &str) -> Result<GeneratorKind, ParseGeneratorError> {
        let err = |m: &str| ParseGeneratorError(s.to_string(), m.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let int = |t: &str| t.parse::<u32>().map_err(|_| err("expected an integer"));
        let random = |parts: &[&str]| -> Result<(u32, f64, u64), ParseGeneratorError> {
            if parts.len() != 4 {
                return Err(err("expected <kind>:<n>:<p>:<seed>"));
            }
            let p = parts[2].parse::<f64>().map_err(|_| err("expected a probability"))?;
            let seed = parts[3].parse::<u64>().map_err(|_| err("expected a seed"))?;
            Ok((int(parts[1])?, p, seed))
        };
        let one = |parts: &[&str]| -> Result<u32, ParseGeneratorError> {
            match parts {
                [_, n] => int(n),
                _ => Err(err("expected <kind>:<n>")),
            }
        };
        match parts[0] {
            "cycle" => Ok(GeneratorKind::Cycle(one(&parts)?)),
            "path" => Ok(GeneratorKind::Path(one(&parts)?)),
            "complete" => Ok(GeneratorKind::Complete(one(&parts)?)),
            "petersen" if parts.len() == 1 => Ok(GeneratorKind::Petersen),
            "torus" => {
                let dims = parts.get(1).ok_or_else(|| err("expected torus:<rows>x<cols>"))?;
                let (a, b) = dims.split_once('x').ok_or_else(|| err("expected <rows>x<cols>"))?;
                Ok(GeneratorKind::TorusGrid(int(a)?, int(b)?))
            }
            "gnp" => random(&parts).map(|(n, p, seed)| GeneratorKind::Gnp { n, p, seed }),
            "random-tf" => random(&parts).map(|(n, p, seed)| GeneratorKind::RandomTriangleFree { n, p, seed }),
            "bipartite" => random(&parts).map(|(n, p, seed)| GeneratorKind::RandomBipartite { n, p, seed }),
            _ => Err(err("unknown generator")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        assert_eq!((c5.vertex_count(), c5.edge_count()), (5, 5));
        let p = GeneratorKind::Petersen.generate().unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.vertices().all(|v| p.degree(v) == 3));
        let t = GeneratorKind::TorusGrid(5, 5).generate().unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (25, 50));
        assert!(t.find_triangle().is_none());
    }

    #[test]
    fn invalid_parameters() {
        assert!(GeneratorKind::Cycle(2).generate().is_err());
        assert!(GeneratorKind::Gnp { n: 4, p: 1.5, seed: 0 }.generate().is_err());
        assert!(GeneratorKind::TorusGrid(2, 5).generate().is_err());
    }

    #[test]
    fn random_triangle_free_is_reproducible() {
        let kind = GeneratorKind::RandomTriangleFree { n: 20, p: 0.3, seed: 42 };
        let a = kind.generate().unwrap();
        let b = kind.generate().unwrap();
        assert_eq!(a, b);
        assert!(a.find_triangle().is_none());
        assert!(a.edge_count() > 0);
    }

    #[test]
    fn bipartite_has_no_odd_cycle_across_parts() {
        let g = GeneratorKind::RandomBipartite { n: 10, p: 0.6, seed: 3 }.generate().unwrap();
        assert!(g.edges().all(|e| (e.0 .0 <= 5) != (e.1 .0 <= 5)));
    }

    #[test]
    fn odd_cycle_has_one_cycle() {
        for n in [3, 5, 7, 9] {
            let g = GeneratorKind::Cycle(n).generate().unwrap();
            // connected with |E| = |V|: exactly one cycle
            assert!(g.is_connected());
            assert_eq!(g.edge_count(), g.vertex_count());
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["cycle:5", "path:4", "complete:3", "petersen", "torus:5x5", "random-tf:20:0.3:42", "gnp:8:0.5:1", "bipartite:6:0.5:2"] {
            let k: GeneratorKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("torus:5".parse::<GeneratorKind>().is_err());
        assert!("blob:1".parse::<GeneratorKind>().is_err());
    }
}
