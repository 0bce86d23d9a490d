use elp_vc::graph::{parse_graph, write_dimacs, write_edge_list, Format, GeneratorKind};

#[test]
fn generated_graphs_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let kinds = [
        GeneratorKind::Petersen,
        GeneratorKind::TorusGrid(5, 5),
        GeneratorKind::Gnp { n: 15, p: 0.3, seed: 9 },
        GeneratorKind::RandomBipartite { n: 12, p: 0.5, seed: 2 },
    ];
    for (i, kind) in kinds.iter().enumerate() {
        let g = kind.generate().unwrap();
        for (text, format) in [(write_dimacs(&g), Format::Dimacs), (write_edge_list(&g), Format::EdgeList)] {
            let path = dir.path().join(format!("g{i}.txt"));
            std::fs::write(&path, &text).unwrap();
            let back = std::fs::read_to_string(&path).unwrap();
            assert_eq!(Format::detect(&back), format);
            assert_eq!(parse_graph(&back, format).unwrap(), g, "{kind}");
        }
    }
}

#[test]
fn malformed_input_is_rejected() {
    assert!(parse_graph("p edge 2 1\ne 1 3\n", Format::Dimacs).is_err());
    assert!(parse_graph("1 x\n", Format::EdgeList).is_err());
    assert!(parse_graph("1 1\n", Format::EdgeList).is_err());
}
