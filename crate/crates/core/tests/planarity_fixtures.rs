//! Planarity verdicts on random multigraphs, frozen from networkx.

use serde::Deserialize;

use altsurg::goeritz::planarity;
use altsurg::lattice::SuperbaseGraph;

#[derive(Deserialize)]
struct Case {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    planar: bool,
}

#[test]
fn matches_frozen_verdicts() {
    let cases: Vec<Case> = serde_json::from_str(include_str!("fixtures/planarity_networkx.json")).unwrap();
    assert_eq!(cases.len(), 300);
    for (i, c) in cases.iter().enumerate() {
        let g = SuperbaseGraph::from_edges(c.vertices, &c.edges);
        let got = planarity(&g);
        assert_eq!(got.is_some(), c.planar, "case {i}");
        if let Some(e) = got {
            assert!(e.euler_ok(), "case {i}");
        }
    }
}
