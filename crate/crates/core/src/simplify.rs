//! Barcode-guided hypergraph simplification.
//!
//! The pipeline runs in a fixed order: optional exact collapse, graph
//! representation for the chosen side, singleton handling, barcode, cut at
//! epsilon, and finally the induced simplified hypergraph. Everything up to
//! the barcode lives in [`Prepared`] so that threshold and bar-expansion
//! changes only redo the cut.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, SingletonMode, WeightScheme, WeightedGraph};
use crate::hypergraph::{super_label, Hyperedge, Hypergraph, HypergraphBuilder, Side, VertexId};
use crate::persistence::{self, Barcode, Dendrogram, EpsilonPartition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplificationParams {
    pub side: Side,
    pub s: usize,
    pub weight: WeightScheme,
    pub epsilon: f64,
    pub collapse_vertices: bool,
    pub collapse_edges: bool,
    pub singletons: SingletonMode,
    pub expanded_bars: BTreeSet<usize>,
}

impl Default for SimplificationParams {
    fn default() -> Self {
        SimplificationParams {
            side: Side::Hyperedge,
            s: 1,
            weight: WeightScheme::Jaccard,
            epsilon: 0.0,
            collapse_vertices: false,
            collapse_edges: false,
            singletons: SingletonMode::GreyOut,
            expanded_bars: BTreeSet::new(),
        }
    }
}

impl SimplificationParams {
    pub fn new(side: Side) -> Self {
        SimplificationParams {
            side,
            ..Default::default()
        }
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    pub fn with_weight(mut self, weight: WeightScheme) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_collapse(mut self, vertices: bool, edges: bool) -> Self {
        self.collapse_vertices = vertices;
        self.collapse_edges = edges;
        self
    }

    pub fn with_singletons(mut self, mode: SingletonMode) -> Self {
        self.singletons = mode;
        self
    }

    /// True when `other` differs only in epsilon or expanded bars.
    pub fn same_graph(&self, other: &SimplificationParams) -> bool {
        self.side == other.side
            && self.s == other.s
            && self.weight == other.weight
            && self.collapse_vertices == other.collapse_vertices
            && self.collapse_edges == other.collapse_edges
            && self.singletons == other.singletons
    }
}

/// Maps between the layers of one simplification.
///
/// "Side" ids below are vertex ids for vertex simplification and hyperedge
/// ids for hyperedge simplification. The other kind passes through the
/// collapse step only, so its simplified ids are its collapsed ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub side: Side,
    pub vertex_to_collapsed: Vec<usize>,
    pub edge_to_collapsed: Vec<usize>,
    /// Graph node of each collapsed side id; `None` when filtered out.
    pub collapsed_to_node: Vec<Option<usize>>,
    /// Partition class of each graph node; class index = simplified side id.
    pub node_to_class: Vec<usize>,
    /// Simplified side id of each original side id; `None` when filtered out.
    pub original_to_simplified: Vec<Option<usize>>,
    /// Original side ids behind each simplified side id, ascending.
    pub simplified_to_original: Vec<Vec<usize>>,
}

/// Graph-level state that depends on everything except epsilon and the
/// expanded bars.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub params: SimplificationParams,
    pub original: Hypergraph,
    pub collapsed: Hypergraph,
    pub vertex_to_collapsed: Vec<usize>,
    pub edge_to_collapsed: Vec<usize>,
    pub graph: WeightedGraph,
    pub barcode: Barcode,
    pub dendrogram: Dendrogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplificationResult {
    pub params: SimplificationParams,
    pub original: Hypergraph,
    pub collapsed: Hypergraph,
    pub graph: WeightedGraph,
    pub barcode: Barcode,
    pub dendrogram: Dendrogram,
    pub partition: EpsilonPartition,
    pub simplified_graph: WeightedGraph,
    pub simplified_hypergraph: Hypergraph,
    pub correspondence: Correspondence,
}

pub fn prepare(h: &Hypergraph, params: &SimplificationParams) -> Result<Prepared> {
    if params.s < 1 {
        return Err(Error::Parameter("s must be at least 1".into()));
    }
    let identity = |n: usize| (0..n).collect::<Vec<_>>();
    let (mut collapsed, mut vertex_to_collapsed) = (h.clone(), identity(h.vertex_count()));
    let mut edge_to_collapsed = identity(h.edge_count());
    if params.collapse_vertices {
        let c = collapsed.collapse_vertices();
        vertex_to_collapsed = c.forward();
        collapsed = c.hypergraph;
    }
    if params.collapse_edges {
        let c = collapsed.collapse_edges();
        edge_to_collapsed = c.forward();
        collapsed = c.hypergraph;
    }
    let full = graph::representation(&collapsed, params.side, params.s, params.weight)?;
    let graph = graph::apply_singleton_mode(&full, params.singletons);
    let (barcode, dendrogram) = persistence::compute_barcode(&graph);
    Ok(Prepared {
        params: params.clone(),
        original: h.clone(),
        collapsed,
        vertex_to_collapsed,
        edge_to_collapsed,
        graph,
        barcode,
        dendrogram,
    })
}

impl Prepared {
    /// Cuts at `epsilon` with `expanded` bars held apart and induces the
    /// simplified hypergraph.
    pub fn at(&self, epsilon: f64, expanded: &BTreeSet<usize>) -> Result<SimplificationResult> {
        let partition = persistence::epsilon_partition(&self.dendrogram, epsilon, expanded)?;
        let side = self.params.side;

        let mut collapsed_to_node = vec![None; self.collapsed.count(side)];
        for (node, &id) in self.graph.node_ids.iter().enumerate() {
            collapsed_to_node[id] = Some(node);
        }
        let to_collapsed = match side {
            Side::Vertex => &self.vertex_to_collapsed,
            Side::Hyperedge => &self.edge_to_collapsed,
        };
        let original_to_simplified: Vec<Option<usize>> = to_collapsed
            .iter()
            .map(|&c| collapsed_to_node[c].map(|node| partition.class_of[node]))
            .collect();
        let mut simplified_to_original = vec![Vec::new(); partition.class_count()];
        for (orig, class) in original_to_simplified.iter().enumerate() {
            if let Some(class) = class {
                simplified_to_original[*class].push(orig);
            }
        }

        let class_labels: Vec<String> = partition
            .classes
            .iter()
            .zip(&simplified_to_original)
            .map(|(nodes, originals)| {
                if nodes.len() == 1 {
                    self.collapsed.label(side, self.graph.node_ids[nodes[0]]).to_string()
                } else {
                    super_label(
                        originals.iter().map(|&o| self.original.label(side, o)),
                        originals.len(),
                    )
                }
            })
            .collect();

        let simplified_hypergraph = match side {
            Side::Hyperedge => {
                let mut b = HypergraphBuilder::new();
                for label in self.collapsed.vertex_labels() {
                    b.add_vertex(label.clone());
                }
                for (nodes, label) in partition.classes.iter().zip(class_labels) {
                    let mut members: Vec<VertexId> = nodes
                        .iter()
                        .flat_map(|&n| {
                            self.collapsed
                                .edges()
                                .get(self.graph.node_ids[n])
                                .map(|e: &Hyperedge| e.members.clone())
                                .unwrap_or_default()
                        })
                        .collect();
                    members.sort_unstable();
                    members.dedup();
                    b.add_edge(label, members);
                }
                b.build()?
            }
            Side::Vertex => {
                let mut b = HypergraphBuilder::new();
                for label in class_labels {
                    b.add_vertex(label);
                }
                for edge in self.collapsed.edges() {
                    let members = edge.members.iter().filter_map(|v| {
                        collapsed_to_node[v.0].map(|node| VertexId(partition.class_of[node]))
                    });
                    b.add_edge(edge.label.clone(), members);
                }
                b.build()?
            }
        };
        let simplified_graph =
            graph::representation(&simplified_hypergraph, side, self.params.s, self.params.weight)?;

        let mut params = self.params.clone();
        params.epsilon = epsilon;
        params.expanded_bars = expanded.clone();
        Ok(SimplificationResult {
            params,
            original: self.original.clone(),
            collapsed: self.collapsed.clone(),
            graph: self.graph.clone(),
            barcode: self.barcode.clone(),
            dendrogram: self.dendrogram.clone(),
            correspondence: Correspondence {
                side,
                vertex_to_collapsed: self.vertex_to_collapsed.clone(),
                edge_to_collapsed: self.edge_to_collapsed.clone(),
                collapsed_to_node,
                node_to_class: partition.class_of.clone(),
                original_to_simplified,
                simplified_to_original,
            },
            partition,
            simplified_graph,
            simplified_hypergraph,
        })
    }
}

pub fn simplify(h: &Hypergraph, params: &SimplificationParams) -> Result<SimplificationResult> {
    prepare(h, params)?.at(params.epsilon, &params.expanded_bars)
}

impl SimplificationResult {
    pub fn prepared(&self) -> Prepared {
        Prepared {
            params: self.params.clone(),
            original: self.original.clone(),
            collapsed: self.collapsed.clone(),
            vertex_to_collapsed: self.correspondence.vertex_to_collapsed.clone(),
            edge_to_collapsed: self.correspondence.edge_to_collapsed.clone(),
            graph: self.graph.clone(),
            barcode: self.barcode.clone(),
            dendrogram: self.dendrogram.clone(),
        }
    }

    /// Whether `bar` currently merges something: finite, at most epsilon,
    /// and not already expanded.
    pub fn is_active(&self, bar: usize) -> bool {
        self.barcode
            .bar(bar)
            .and_then(|b| b.length)
            .is_some_and(|l| l <= self.params.epsilon)
            && !self.params.expanded_bars.contains(&bar)
    }

    /// Number of simplified elements on the simplified side.
    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    /// Original side ids merged into `simplified_id`, in declaration order.
    pub fn class_members(&self, simplified_id: usize) -> Result<&[usize]> {
        self.correspondence
            .simplified_to_original
            .get(simplified_id)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownId {
                kind: self.params.side.as_str(),
                id: simplified_id,
            })
    }

    pub fn class_labels(&self, simplified_id: usize) -> Result<Vec<&str>> {
        let side = self.params.side;
        Ok(self
            .class_members(simplified_id)?
            .iter()
            .map(|&o| self.original.label(side, o))
            .collect())
    }

    /// Re-cut at a new threshold, keeping the expanded bars.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<SimplificationResult> {
        self.prepared().at(epsilon, &self.params.expanded_bars)
    }
}

/// Undoes the merge behind an active bar.
pub fn expand_bar(r: &SimplificationResult, bar: usize) -> Result<SimplificationResult> {
    if !r.is_active(bar) {
        return Err(Error::BarNotActive(bar));
    }
    let mut expanded = r.params.expanded_bars.clone();
    expanded.insert(bar);
    r.prepared().at(r.params.epsilon, &expanded)
}

/// Reverses [`expand_bar`].
pub fn collapse_bar(r: &SimplificationResult, bar: usize) -> Result<SimplificationResult> {
    if !r.params.expanded_bars.contains(&bar) {
        return Err(Error::BarNotExpanded(bar));
    }
    let mut expanded = r.params.expanded_bars.clone();
    expanded.remove(&bar);
    r.prepared().at(r.params.epsilon, &expanded)
}
