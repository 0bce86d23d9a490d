use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;

use super::{Graph, GraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// `c` comments, one `p edge <n> <m>` header, then `e <u> <v>` lines.
    Dimacs,
    /// One whitespace-separated `<u> <v>` pair per line; vertices inferred.
    EdgeList,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "dimacs" => Ok(Format::Dimacs),
            "edgelist" | "edge-list" => Ok(Format::EdgeList),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

impl Format {
    /// Guess from content: anything with a `p ` header line is DIMACS.
    pub fn detect(text: &str) -> Format {
        let header = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'));
        match header {
            Some(l) if l.starts_with("p ") || l.starts_with("e ") => Format::Dimacs,
            _ => Format::EdgeList,
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn parse_label(tok: Option<&str>, line: usize) -> Result<u64, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing vertex"))?;
    tok.parse::<u64>()
        .map_err(|_| parse_err(line, format!("bad vertex {tok:?}")))
}

fn insert(g: &mut Graph, u: u64, v: u64, line: usize) -> Result<(), GraphError> {
    let (a, b) = (VertexId(u as u32), VertexId(v as u32));
    if !g.add_edge(a, b)? {
        warn!("line {line}: duplicate edge ({u},{v}) ignored");
    }
    Ok(())
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::Dimacs => parse_dimacs(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut g: Option<Graph> = None;
    let mut declared = (0u64, 0u64);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some(t) if t.starts_with('c') => continue,
            Some("p") => {
                if g.is_some() {
                    return Err(parse_err(line, "second problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(parse_err(line, format!("unsupported problem type {other:?}"))),
                }
                let n = parse_label(toks.next(), line)?;
                let m = parse_label(toks.next(), line)?;
                if n > u32::MAX as u64 {
                    return Err(parse_err(line, "too many vertices"));
                }
                declared = (n, m);
                g = Some(Graph::with_vertices(n as u32));
            }
            Some("e") => {
                let graph = g.as_mut().ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let u = parse_label(toks.next(), line)?;
                let v = parse_label(toks.next(), line)?;
                for w in [u, v] {
                    if w == 0 || w > declared.0 {
                        return Err(GraphError::OutOfRange { line, vertex: w, n: declared.0 });
                    }
                }
                if toks.next().is_some() {
                    return Err(parse_err(line, "trailing tokens"));
                }
                insert(graph, u, v, line)?;
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }
    let g = g.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if g.edge_count() as u64 != declared.1 {
        warn!("header declares {} edges, found {} distinct", declared.1, g.edge_count());
    }
    Ok(g)
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = body.split_whitespace();
        if body.trim().is_empty() {
            continue;
        }
        let u = parse_label(toks.next(), line)?;
        let v = parse_label(toks.next(), line)?;
        if toks.next().is_some() {
            return Err(parse_err(line, "expected exactly two vertices"));
        }
        if u > u32::MAX as u64 || v > u32::MAX as u64 {
            return Err(parse_err(line, "vertex label too large"));
        }
        insert(&mut g, u, v, line)?;
    }
    Ok(g)
}

/// DIMACS output. Labels are written as-is, so the header's `n` is the
/// largest label; unused labels below it become isolated vertices on reload.
pub fn write_dimacs(g: &Graph) -> String {
    let n = g.vertices().last().map_or(0, |v| v.0);
    let mut out = String::new();
    writeln!(out, "p edge {} {}", n, g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {}", e.0, e.1).unwrap();
    }
    out
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(out, "{} {}", e.0, e.1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorKind;

    #[test]
    fn dimacs_triangle() {
        let g = parse_graph("c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n", Format::Dimacs).unwrap();
        assert_eq!(g, GeneratorKind::Complete(3).generate().unwrap());
    }

    #[test]
    fn dimacs_single_edge_and_isolated() {
        let g = parse_graph("p edge 2 1\ne 1 2\n", Format::Dimacs).unwrap();
        assert_eq!(g, GeneratorKind::Complete(2).generate().unwrap());
        let g = parse_graph("p edge 4 1\ne 1 2\n", Format::Dimacs).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(VertexId(4)), 0);
    }

    #[test]
    fn edge_list_c5() {
        let g = parse_graph("1 2\n2 3\n3 4\n4 5\n5 1\n", Format::EdgeList).unwrap();
        assert_eq!(g, GeneratorKind::Cycle(5).generate().unwrap());
    }

    #[test]
    fn duplicates_are_deduplicated() {
        let g = parse_graph("p edge 2 2\ne 1 2\ne 2 1\n", Format::Dimacs).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_graph("p edge 3 1\ne 2 2\n", Format::Dimacs),
            Err(GraphError::SelfLoop(VertexId(2)))
        );
        assert_eq!(
            parse_graph("p edge 3 1\ne 1 4\n", Format::Dimacs),
            Err(GraphError::OutOfRange { line: 2, vertex: 4, n: 3 })
        );
        assert!(matches!(parse_graph("e 1 2\n", Format::Dimacs), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p edge 3 1\nx 1 2\n", Format::Dimacs), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_graph("1 2 3\n", Format::EdgeList), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_graph("1 a\n", Format::EdgeList), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::detect("c hi\np edge 1 0\n"), Format::Dimacs);
        assert_eq!(Format::detect("1 2\n"), Format::EdgeList);
    }

    #[test]
    fn dimacs_round_trip() {
        let g = GeneratorKind::Petersen.generate().unwrap();
        assert_eq!(parse_graph(&write_dimacs(&g), Format::Dimacs).unwrap(), g);
        let back = parse_graph(&write_edge_list(&g), Format::EdgeList).unwrap();
        assert_eq!(back, g);
    }
}
