#![allow(dead_code)]

use std::path::PathBuf;

use hypersimplify::io::{self, Format};
use hypersimplify::{Hypergraph, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn southern_women() -> Hypergraph {
    let bytes = std::fs::read(data_path("southern_women.csv")).unwrap();
    io::parse_hypergraph(&bytes, Format::Csv).unwrap()
}

pub fn fig4() -> Hypergraph {
    let bytes = std::fs::read(data_path("fig4.json")).unwrap();
    io::parse_hypergraph(&bytes, Format::Json).unwrap()
}

/// Five nodes whose shortest bar is 1.5; four finite bars.
pub fn fig7() -> WeightedGraph {
    WeightedGraph::from_weights(
        5,
        [
            (0, 1, 2.0 / 3.0),
            (1, 2, 0.5),
            (2, 3, 0.4),
            (3, 4, 1.0 / 3.0),
            (0, 2, 0.25),
            (1, 3, 0.2),
            (0, 4, 1.0 / 6.0),
        ],
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random hypergraph; members drawn independently with probability `p`.
pub fn random_hypergraph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize, p: f64) -> Hypergraph {
    let n = rng.random_range(1..=max_vertices);
    let m = rng.random_range(0..=max_edges);
    let edges: Vec<(String, Vec<usize>)> = (0..m)
        .map(|j| {
            let members = (0..n).filter(|_| rng.random_bool(p)).collect();
            (format!("e{j}"), members)
        })
        .collect();
    Hypergraph::from_member_lists((0..n).map(|i| format!("v{i}")), edges).unwrap()
}

/// Random weighted graph; weights are small rationals so ties happen.
pub fn random_weighted_graph(rng: &mut impl Rng, max_nodes: usize, density: f64) -> WeightedGraph {
    let n = rng.random_range(1..=max_nodes);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                let num = rng.random_range(1..=6) as f64;
                let den = rng.random_range(num as u32..=8) as f64;
                edges.push((a, b, num / den));
            }
        }
    }
    WeightedGraph::from_weights(n, edges).unwrap()
}

/// Single-linkage clusters by brute force: repeatedly join any two clusters
/// that have an edge of distance at most `epsilon` between them.
pub fn naive_single_linkage(g: &WeightedGraph, epsilon: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..g.node_count()).map(|i| vec![i]).collect();
    loop {
        let mut joined = None;
        'search: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let close = g.edges.iter().any(|e| {
                    let (a, b) = (e.source, e.target);
                    ((clusters[i].contains(&a) && clusters[j].contains(&b))
                        || (clusters[i].contains(&b) && clusters[j].contains(&a)))
                        && 1.0 / e.weight <= epsilon
                });
                if close {
                    joined = Some((i, j));
                    break 'search;
                }
            }
        }
        match joined {
            Some((i, j)) => {
                let moved = clusters.remove(j);
                clusters[i].extend(moved);
            }
            None => break,
        }
    }
    canonical(clusters)
}

pub fn canonical(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

pub fn labels_of(h: &Hypergraph, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| h.vertex_labels()[i].clone()).collect()
}
