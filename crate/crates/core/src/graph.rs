//! Weighted s-line graphs and s-clique expansions.
//!
//! Both are similarity graphs: an edge carries the overlap size or Jaccard
//! index of the two member sets it joins, and its `distance` is the inverse
//! similarity used by the barcode. The s filter always tests the overlap
//! size, whichever weight scheme is chosen.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, Side};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    #[default]
    Jaccard,
    Overlap,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingletonMode {
    /// Isolated nodes stay in the graph and in the barcode.
    #[default]
    #[serde(alias = "grey_out")]
    GreyOut,
    /// Isolated nodes are dropped from the graph and everything downstream.
    Filter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    /// Inverse of `weight`, computed exactly from the set sizes when known.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    /// What the nodes stand for in the source hypergraph.
    pub side: Side,
    /// Source hypergraph id of each node.
    pub node_ids: Vec<usize>,
    pub labels: Vec<String>,
    /// Sorted by `(source, target)` with `source < target`.
    pub edges: Vec<WeightedEdge>,
    pub singleton: Vec<bool>,
}

impl WeightedGraph {
    /// A graph over nodes `0..node_count` from `(a, b, weight)` triples.
    pub fn from_weights(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::Parameter(format!("self-loop on node {a}")));
            }
            if a >= node_count || b >= node_count {
                return Err(Error::Parameter(format!("edge ({a}, {b}) out of range")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Parameter(format!("weight {w} on ({a}, {b}) must be positive")));
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key, w).is_some() {
                return Err(Error::Parameter(format!("parallel edge ({}, {})", key.0, key.1)));
            }
        }
        let edges = seen
            .into_iter()
            .map(|((source, target), weight)| WeightedEdge {
                source,
                target,
                weight,
                distance: 1.0 / weight,
            })
            .collect();
        Ok(Self::assemble(
            Side::Vertex,
            (0..node_count).collect(),
            (0..node_count).map(|i| i.to_string()).collect(),
            edges,
        ))
    }

    fn assemble(side: Side, node_ids: Vec<usize>, labels: Vec<String>, edges: Vec<WeightedEdge>) -> Self {
        let mut singleton = vec![true; node_ids.len()];
        for e in &edges {
            singleton[e.source] = false;
            singleton[e.target] = false;
        }
        WeightedGraph {
            side,
            node_ids,
            labels,
            edges,
            singleton,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.source, e.target).cmp(&key))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Connected components as ascending node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.node_count());
        for e in &self.edges {
            uf.union(e.source, e.target);
        }
        uf.classes()
    }
}

fn check_s(s: usize) -> Result<()> {
    if s < 1 {
        return Err(Error::Parameter("s must be at least 1".into()));
    }
    Ok(())
}

/// Builds edges from pairwise overlap counts and per-node set sizes.
fn similarity_edges(
    overlaps: BTreeMap<(usize, usize), usize>,
    sizes: &[usize],
    s: usize,
    scheme: WeightScheme,
) -> Vec<WeightedEdge> {
    overlaps
        .into_iter()
        .filter(|&(_, k)| k >= s)
        .map(|((a, b), k)| {
            let (weight, distance) = match scheme {
                WeightScheme::Overlap => (k as f64, 1.0 / k as f64),
                WeightScheme::Jaccard => {
                    let union = sizes[a] + sizes[b] - k;
                    (k as f64 / union as f64, union as f64 / k as f64)
                }
            };
            WeightedEdge {
                source: a,
                target: b,
                weight,
                distance,
            }
        })
        .collect()
}

/// Pairwise hyperedge overlap counts, accumulated through the member index.
fn edge_overlaps(h: &Hypergraph) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for v in 0..h.vertex_count() {
        let incident = h.memberships(crate::hypergraph::VertexId(v));
        for (i, a) in incident.iter().enumerate() {
            for b in &incident[i + 1..] {
                *counts.entry((a.0, b.0)).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Weighted s-line graph: one node per hyperedge.
pub fn line_graph(h: &Hypergraph, s: usize, scheme: WeightScheme) -> Result<WeightedGraph> {
    check_s(s)?;
    let sizes: Vec<usize> = h.edges().iter().map(|e| e.members.len()).collect();
    let edges = similarity_edges(edge_overlaps(h), &sizes, s, scheme);
    Ok(WeightedGraph::assemble(
        Side::Hyperedge,
        (0..h.edge_count()).collect(),
        h.edges().iter().map(|e| e.label.clone()).collect(),
        edges,
    ))
}

/// Weighted s-clique expansion: one node per vertex, weights on the
/// membership sets. Counted directly from the hyperedges, so it serves as an
/// independent route to `line_graph(&h.dual(), ..)`.
pub fn clique_expansion(h: &Hypergraph, s: usize, scheme: WeightScheme) -> Result<WeightedGraph> {
    check_s(s)?;
    let mut counts = BTreeMap::new();
    for edge in h.edges() {
        for (i, a) in edge.members.iter().enumerate() {
            for b in &edge.members[i + 1..] {
                *counts.entry((a.0, b.0)).or_insert(0) += 1;
            }
        }
    }
    let sizes: Vec<usize> = (0..h.vertex_count())
        .map(|v| h.degree(crate::hypergraph::VertexId(v)))
        .collect();
    let edges = similarity_edges(counts, &sizes, s, scheme);
    Ok(WeightedGraph::assemble(
        Side::Vertex,
        (0..h.vertex_count()).collect(),
        h.vertex_labels().to_vec(),
        edges,
    ))
}

/// Graph representation for the given side.
pub fn representation(
    h: &Hypergraph,
    side: Side,
    s: usize,
    scheme: WeightScheme,
) -> Result<WeightedGraph> {
    match side {
        Side::Hyperedge => line_graph(h, s, scheme),
        Side::Vertex => clique_expansion(h, s, scheme),
    }
}

/// Maximal sets of hyperedges joined by s-walks.
pub fn s_connected_components(h: &Hypergraph, s: usize) -> Result<Vec<Vec<EdgeId>>> {
    check_s(s)?;
    let mut uf = UnionFind::new(h.edge_count());
    for ((a, b), k) in edge_overlaps(h) {
        if k >= s {
            uf.union(a, b);
        }
    }
    Ok(uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(EdgeId).collect())
        .collect())
}

pub fn apply_singleton_mode(g: &WeightedGraph, mode: SingletonMode) -> WeightedGraph {
    match mode {
        SingletonMode::GreyOut => g.clone(),
        SingletonMode::Filter => {
            let mut renumber = vec![usize::MAX; g.node_count()];
            let mut node_ids = Vec::new();
            let mut labels = Vec::new();
            for i in 0..g.node_count() {
                if !g.singleton[i] {
                    renumber[i] = node_ids.len();
                    node_ids.push(g.node_ids[i]);
                    labels.push(g.labels[i].clone());
                }
            }
            let edges = g
                .edges
                .iter()
                .map(|e| WeightedEdge {
                    source: renumber[e.source],
                    target: renumber[e.target],
                    ..e.clone()
                })
                .collect();
            WeightedGraph::assemble(g.side, node_ids, labels, edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fig4;

    #[test]
    fn fig4_line_graph_jaccard() {
        let g = line_graph(&fig4(), 1, WeightScheme::Jaccard).unwrap();
        assert_eq!(g.weight(0, 1), Some(2.0 / 3.0));
        assert_eq!(g.weight(0, 2), Some(1.0 / 5.0));
        assert_eq!(g.weight(1, 2), Some(1.0 / 4.0));
        assert_eq!(g.edges[0].distance, 1.5);
        assert!(g.singleton.iter().all(|s| !s));
    }

    #[test]
    fn fig4_clique_expansion_jaccard() {
        let g = clique_expansion(&fig4(), 1, WeightScheme::Jaccard).unwrap();
        assert_eq!(g.weight(0, 1), Some(0.5));
        assert_eq!(g.weight(3, 4), Some(1.0));
        assert_eq!(g.weight(0, 3), None);
    }

    #[test]
    fn single_pair_edge_has_unit_jaccard() {
        let h = Hypergraph::from_member_lists(["a", "b"], [("e".to_string(), vec![0, 1])]).unwrap();
        let g = clique_expansion(&h, 1, WeightScheme::Jaccard).unwrap();
        assert_eq!(g.weight(0, 1), Some(1.0));
    }

    #[test]
    fn disjoint_edges_are_all_singletons() {
        let h = Hypergraph::from_member_lists(
            ["a", "b", "c"],
            (0..3).map(|i| (format!("e{i}"), vec![i])),
        )
        .unwrap();
        let g = line_graph(&h, 1, WeightScheme::Overlap).unwrap();
        assert!(g.edges.is_empty());
        assert!(g.singleton.iter().all(|&s| s));
    }

    #[test]
    fn s_zero_is_rejected() {
        assert!(line_graph(&fig4(), 0, WeightScheme::Jaccard).is_err());
        assert!(clique_expansion(&fig4(), 0, WeightScheme::Jaccard).is_err());
        assert!(s_connected_components(&fig4(), 0).is_err());
    }

    #[test]
    fn s_components_of_fig4() {
        let ids = |cs: Vec<Vec<EdgeId>>| -> Vec<Vec<usize>> {
            cs.into_iter().map(|c| c.into_iter().map(|e| e.0).collect()).collect()
        };
        assert_eq!(ids(s_connected_components(&fig4(), 1).unwrap()), vec![vec![0, 1, 2]]);
        assert_eq!(ids(s_connected_components(&fig4(), 2).unwrap()), vec![vec![0, 1], vec![2]]);
        assert_eq!(
            ids(s_connected_components(&fig4(), 4).unwrap()),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn filter_drops_isolated_nodes() {
        let g = WeightedGraph::from_weights(3, [(0, 2, 0.5)]).unwrap();
        let same = apply_singleton_mode(&g, SingletonMode::GreyOut);
        assert_eq!(same, g);
        let f = apply_singleton_mode(&g, SingletonMode::Filter);
        assert_eq!(f.node_ids, vec![0, 2]);
        assert_eq!(f.edges.len(), 1);
        assert_eq!((f.edges[0].source, f.edges[0].target), (0, 1));
        let full = WeightedGraph::from_weights(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(apply_singleton_mode(&full, SingletonMode::Filter), full);
    }

    #[test]
    fn collapsed_overlap_weight_counts_super_vertices() {
        // e1 and e2 share three vertices that collapse into two super-vertices
        let h = Hypergraph::from_member_lists(
            ["a", "b", "c", "d"],
            [
                ("e1".to_string(), vec![0, 1, 2]),
                ("e2".to_string(), vec![0, 1, 2, 3]),
                ("e3".to_string(), vec![0, 1]),
            ],
        )
        .unwrap();
        let before = line_graph(&h, 1, WeightScheme::Overlap).unwrap();
        assert_eq!(before.weight(0, 1), Some(3.0));
        let collapsed = h.collapse_vertices().hypergraph;
        let after = line_graph(&collapsed, 1, WeightScheme::Overlap).unwrap();
        assert_eq!(after.weight(0, 1), Some(2.0));
    }

    #[test]
    fn from_weights_rejects_bad_input() {
        assert!(WeightedGraph::from_weights(2, [(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::from_weights(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::from_weights(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }
}
