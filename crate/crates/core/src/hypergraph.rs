//! Hypergraph data model.
//!
//! A [`Hypergraph`] is a list of labelled vertices plus an ordered family of
//! hyperedges, each a set of vertices. The family is a list, so two hyperedges
//! may carry the same member set until [`Hypergraph::collapse_edges`] merges
//! them. Ids are dense and 0-based in declaration order.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which element kind of a hypergraph an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Vertex,
    #[serde(alias = "edge")]
    Hyperedge,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Vertex => "vertex",
            Side::Hyperedge => "hyperedge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub label: String,
    /// Sorted, without duplicates.
    pub members: Vec<VertexId>,
}

/// An invariant violation found by validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UndeclaredMember { edge: String, vertex: String },
    DuplicateId { section: String, id: String },
    MemberIndexMismatch { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UndeclaredMember { edge, vertex } => {
                write!(f, "hyperedge {edge} references undeclared vertex {vertex}")
            }
            Violation::DuplicateId { section, id } => write!(f, "duplicate {section} id {id}"),
            Violation::MemberIndexMismatch { vertex } => {
                write!(f, "member index of vertex {vertex} disagrees with the hyperedge list")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_labels: Vec<String>,
    edges: Vec<Hyperedge>,
    member_index: Vec<Vec<EdgeId>>,
}

/// Incremental construction; validation happens in [`HypergraphBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct HypergraphBuilder {
    vertex_labels: Vec<String>,
    edges: Vec<(String, Vec<VertexId>)>,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.vertex_labels.push(label.into());
        VertexId(self.vertex_labels.len() - 1)
    }

    pub fn add_edge(
        &mut self,
        label: impl Into<String>,
        members: impl IntoIterator<Item = VertexId>,
    ) -> EdgeId {
        self.edges.push((label.into(), members.into_iter().collect()));
        EdgeId(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let n = self.vertex_labels.len();
        let mut out = Vec::new();
        for (label, members) in &self.edges {
            for v in members {
                if v.0 >= n {
                    out.push(Violation::UndeclaredMember {
                        edge: label.clone(),
                        vertex: format!("v{}", v.0),
                    });
                }
            }
        }
        out
    }

    pub fn build(self) -> Result<Hypergraph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let edges = self
            .edges
            .into_iter()
            .map(|(label, mut members)| {
                members.sort_unstable();
                members.dedup();
                Hyperedge { label, members }
            })
            .collect();
        Ok(Hypergraph::from_checked(self.vertex_labels, edges))
    }
}

impl Hypergraph {
    /// Convenience constructor from member lists given as raw indices.
    pub fn from_member_lists<L, M>(vertex_labels: L, edges: M) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        M: IntoIterator<Item = (String, Vec<usize>)>,
    {
        let mut builder = HypergraphBuilder::new();
        for label in vertex_labels {
            builder.add_vertex(label);
        }
        for (label, members) in edges {
            builder.add_edge(label, members.into_iter().map(VertexId));
        }
        builder.build()
    }

    fn from_checked(vertex_labels: Vec<String>, edges: Vec<Hyperedge>) -> Self {
        let mut member_index = vec![Vec::new(); vertex_labels.len()];
        for (j, edge) in edges.iter().enumerate() {
            for v in &edge.members {
                member_index[v.0].push(EdgeId(j));
            }
        }
        Hypergraph {
            vertex_labels,
            edges,
            member_index,
        }
    }

    pub fn empty() -> Self {
        Hypergraph::from_checked(Vec::new(), Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_labels[v.0]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edge(&self, e: EdgeId) -> &Hyperedge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// The hyperedges incident to `v`, ascending.
    pub fn memberships(&self, v: VertexId) -> &[EdgeId] {
        &self.member_index[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.member_index[v.0].len()
    }

    pub fn incidence_count(&self) -> usize {
        self.edges.iter().map(|e| e.members.len()).sum()
    }

    pub fn label(&self, side: Side, id: usize) -> &str {
        match side {
            Side::Vertex => &self.vertex_labels[id],
            Side::Hyperedge => &self.edges[id].label,
        }
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::Vertex => self.vertex_count(),
            Side::Hyperedge => self.edge_count(),
        }
    }

    /// Lists every broken invariant. Always empty for values built through
    /// [`HypergraphBuilder`]; kept as a diagnostic for deserialized data.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        let mut transpose = vec![Vec::new(); n];
        for (j, edge) in self.edges.iter().enumerate() {
            for v in &edge.members {
                if v.0 >= n {
                    out.push(Violation::UndeclaredMember {
                        edge: edge.label.clone(),
                        vertex: format!("v{}", v.0),
                    });
                } else {
                    transpose[v.0].push(EdgeId(j));
                }
            }
        }
        if self.member_index.len() != n {
            out.push(Violation::MemberIndexMismatch { vertex: n });
        } else {
            for (v, expected) in transpose.iter().enumerate() {
                if &self.member_index[v] != expected {
                    out.push(Violation::MemberIndexMismatch { vertex: v });
                }
            }
        }
        out
    }

    /// Swaps the roles of vertices and hyperedges. Vertex `j` of the dual is
    /// hyperedge `j` of `self`; hyperedge `i` of the dual is the membership set
    /// of vertex `i`.
    pub fn dual(&self) -> Hypergraph {
        let vertex_labels = self.edges.iter().map(|e| e.label.clone()).collect();
        let edges = self
            .member_index
            .iter()
            .zip(&self.vertex_labels)
            .map(|(incident, label)| Hyperedge {
                label: label.clone(),
                members: incident.iter().map(|e| VertexId(e.0)).collect(),
            })
            .collect();
        Hypergraph::from_checked(vertex_labels, edges)
    }

    /// Merges vertices with identical membership sets into super-vertices.
    /// Degree-0 vertices share the empty signature and merge together.
    pub fn collapse_vertices(&self) -> Collapse {
        let groups = group_by_signature(self.member_index.iter());
        let mut new_of = vec![0; self.vertex_count()];
        for (g, members) in groups.iter().enumerate() {
            for &v in members {
                new_of[v] = g;
            }
        }
        let vertex_labels = groups
            .iter()
            .map(|members| super_label(members.iter().map(|&v| self.vertex_labels[v].as_str()), members.len()))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|edge| {
                let mut members: Vec<VertexId> =
                    edge.members.iter().map(|v| VertexId(new_of[v.0])).collect();
                members.sort_unstable();
                members.dedup();
                Hyperedge {
                    label: edge.label.clone(),
                    members,
                }
            })
            .collect();
        Collapse {
            kind: Side::Vertex,
            hypergraph: Hypergraph::from_checked(vertex_labels, edges),
            groups,
        }
    }

    /// Merges hyperedges with identical member sets into super-edges.
    pub fn collapse_edges(&self) -> Collapse {
        let groups = group_by_signature(self.edges.iter().map(|e| &e.members));
        let edges = groups
            .iter()
            .map(|members| Hyperedge {
                label: super_label(
                    members.iter().map(|&e| self.edges[e].label.as_str()),
                    members.len(),
                ),
                members: self.edges[members[0]].members.clone(),
            })
            .collect();
        Collapse {
            kind: Side::Hyperedge,
            hypergraph: Hypergraph::from_checked(self.vertex_labels.clone(), edges),
            groups,
        }
    }
}

/// Groups indices by equal signature, ordered by first occurrence.
fn group_by_signature<'a, T, I>(signatures: I) -> Vec<Vec<usize>>
where
    T: Eq + std::hash::Hash + 'a,
    I: Iterator<Item = &'a T>,
{
    let mut slot: HashMap<&T, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, sig) in signatures.enumerate() {
        let g = *slot.entry(sig).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Label for a merged element: smallest constituent label plus a count.
pub fn super_label<'a>(labels: impl Iterator<Item = &'a str>, count: usize) -> String {
    let smallest = labels.min().unwrap_or_default();
    if count <= 1 {
        smallest.to_string()
    } else {
        format!("{smallest} ({count})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub new_id: usize,
    pub constituents: Vec<usize>,
    pub kind: Side,
}

/// Outcome of an exact collapse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collapse {
    pub kind: Side,
    pub hypergraph: Hypergraph,
    /// `groups[new_id]` lists the original ids merged into `new_id`, ascending.
    /// Singleton groups are included, so the groups partition the original ids.
    pub groups: Vec<Vec<usize>>,
}

impl Collapse {
    /// Records for groups of two or more constituents.
    pub fn records(&self) -> Vec<MergeRecord> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.len() >= 2)
            .map(|(new_id, g)| MergeRecord {
                new_id,
                constituents: g.clone(),
                kind: self.kind,
            })
            .collect()
    }

    /// Map from original id to collapsed id.
    pub fn forward(&self) -> Vec<usize> {
        let n = self.groups.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (g, members) in self.groups.iter().enumerate() {
            for &m in members {
                out[m] = g;
            }
        }
        out
    }
}


#[cfg(test)]
pub(crate) use tests::fig4;
