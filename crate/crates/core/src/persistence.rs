//! Zero-dimensional persistence of a similarity graph.
//!
//! Edge similarities are inverted into distances and Kruskal's algorithm
//! builds the minimum spanning forest. Every forest edge is one finite bar
//! (all bars are born at 0, so a bar is just its length) and one merge of
//! the single-linkage dendrogram. Each connected component additionally owns
//! one essential bar that never dies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub id: usize,
    /// `None` for essential bars.
    pub length: Option<f64>,
    /// Graph nodes joined by the spanning-forest edge behind a finite bar.
    pub mst_edge: Option<(usize, usize)>,
}

impl Bar {
    pub fn is_essential(&self) -> bool {
        self.length.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    /// Finite bars ascending by length, then essential bars.
    pub bars: Vec<Bar>,
    pub node_count: usize,
    pub component_count: usize,
}

impl Barcode {
    /// A barcode with no graph behind it; used for comparisons.
    pub fn from_lengths(mut lengths: Vec<f64>, essential: usize) -> Self {
        lengths.sort_by(f64::total_cmp);
        let finite = lengths.len();
        let bars = lengths
            .into_iter()
            .map(Some)
            .chain(std::iter::repeat_n(None, essential))
            .enumerate()
            .map(|(id, length)| Bar {
                id,
                length,
                mst_edge: None,
            })
            .collect();
        Barcode {
            bars,
            node_count: finite + essential,
            component_count: essential,
        }
    }

    pub fn finite(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(|b| !b.is_essential())
    }

    pub fn finite_lengths(&self) -> Vec<f64> {
        self.finite().filter_map(|b| b.length).collect()
    }

    pub fn essential_count(&self) -> usize {
        self.bars.iter().filter(|b| b.is_essential()).count()
    }

    pub fn bar(&self, id: usize) -> Option<&Bar> {
        self.bars.iter().find(|b| b.id == id)
    }
}

/// One agglomeration step. Leaves are clusters `0..node_count`; merge `i`
/// creates cluster `node_count + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub bar: usize,
    pub edge: (usize, usize),
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DendrogramDoc", try_from = "DendrogramDoc")]
pub struct Dendrogram {
    pub node_count: usize,
    pub merges: Vec<Merge>,
}

#[derive(Serialize, Deserialize)]
struct DendrogramDoc {
    node_count: usize,
    merges: Vec<Merge>,
    /// One nested child array per tree; derived from `merges`.
    #[serde(default)]
    trees: Vec<Value>,
}

impl From<Dendrogram> for DendrogramDoc {
    fn from(d: Dendrogram) -> Self {
        let trees = d.trees();
        DendrogramDoc {
            node_count: d.node_count,
            merges: d.merges,
            trees,
        }
    }
}

impl TryFrom<DendrogramDoc> for Dendrogram {
    type Error = String;

    fn try_from(doc: DendrogramDoc) -> std::result::Result<Self, String> {
        let total = doc.node_count + doc.merges.len();
        for (i, m) in doc.merges.iter().enumerate() {
            let created = doc.node_count + i;
            if m.left >= created || m.right >= created || m.left >= total {
                return Err(format!("merge {i} references a cluster that does not exist yet"));
            }
        }
        Ok(Dendrogram {
            node_count: doc.node_count,
            merges: doc.merges,
        })
    }
}

impl Dendrogram {
    /// Cluster ids that are never merged further, ascending.
    pub fn roots(&self) -> Vec<usize> {
        let total = self.node_count + self.merges.len();
        let mut consumed = vec![false; total];
        for m in &self.merges {
            consumed[m.left] = true;
            consumed[m.right] = true;
        }
        (0..total).filter(|&c| !consumed[c]).collect()
    }

    /// Each tree as nested two-element arrays with leaf ids at the bottom.
    pub fn trees(&self) -> Vec<Value> {
        self.roots().into_iter().map(|r| self.nested(r)).collect()
    }

    fn nested(&self, cluster: usize) -> Value {
        if cluster < self.node_count {
            Value::from(cluster)
        } else {
            let m = &self.merges[cluster - self.node_count];
            Value::Array(vec![self.nested(m.left), self.nested(m.right)])
        }
    }

    /// Leaves under a cluster, ascending.
    pub fn leaves(&self, cluster: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![cluster];
        while let Some(c) = stack.pop() {
            if c < self.node_count {
                out.push(c);
            } else {
                let m = &self.merges[c - self.node_count];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds the barcode and single-linkage dendrogram of `g`. Ties in distance
/// are broken by `(min node, max node)`, so output is deterministic.
pub fn compute_barcode(g: &WeightedGraph) -> (Barcode, Dendrogram) {
    let n = g.node_count();
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&g.edges[i], &g.edges[j]);
        a.distance
            .total_cmp(&b.distance)
            .then(a.source.min(a.target).cmp(&b.source.min(b.target)))
            .then(a.source.max(a.target).cmp(&b.source.max(b.target)))
    });

    let mut uf = UnionFind::new(n);
    // cluster id currently represented by each union-find root
    let mut cluster_of_root: Vec<usize> = (0..n).collect();
    let mut size: Vec<usize> = vec![1; n];
    let mut bars = Vec::new();
    let mut merges = Vec::new();
    for i in order {
        let e = &g.edges[i];
        let (ra, rb) = (uf.find(e.source), uf.find(e.target));
        if ra == rb {
            continue;
        }
        let id = bars.len();
        let (left, right) = (cluster_of_root[ra], cluster_of_root[rb]);
        let merged_size = size[ra] + size[rb];
        uf.union(ra, rb);
        let root = uf.find(ra);
        cluster_of_root[root] = n + id;
        size[root] = merged_size;
        let edge = (e.source.min(e.target), e.source.max(e.target));
        bars.push(Bar {
            id,
            length: Some(e.distance),
            mst_edge: Some(edge),
        });
        merges.push(Merge {
            left,
            right,
            height: e.distance,
            bar: id,
            edge,
            size: merged_size,
        });
    }
    let component_count = n - bars.len();
    let finite = bars.len();
    bars.extend((0..component_count).map(|k| Bar {
        id: finite + k,
        length: None,
        mst_edge: None,
    }));
    (
        Barcode {
            bars,
            node_count: n,
            component_count,
        },
        Dendrogram {
            node_count: n,
            merges,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPartition {
    pub epsilon: f64,
    pub expanded_bars: Vec<usize>,
    /// Ascending member lists ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Class index of each node.
    pub class_of: Vec<usize>,
}

impl EpsilonPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Cuts the dendrogram at `epsilon`: nodes stay joined through merges of
/// height at most `epsilon` whose bar is not expanded.
pub fn epsilon_partition(
    d: &Dendrogram,
    epsilon: f64,
    expanded: &BTreeSet<usize>,
) -> Result<EpsilonPartition> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Parameter(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if let Some(&bad) = expanded.iter().find(|&&b| b >= d.merges.len()) {
        return Err(Error::UnknownId { kind: "finite bar", id: bad });
    }
    let mut uf = UnionFind::new(d.node_count);
    for m in &d.merges {
        if m.height <= epsilon && !expanded.contains(&m.bar) {
            uf.union(m.edge.0, m.edge.1);
        }
    }
    let classes = uf.classes();
    let mut class_of = vec![0; d.node_count];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    Ok(EpsilonPartition {
        epsilon,
        expanded_bars: expanded.iter().copied().collect(),
        classes,
        class_of,
    })
}

/// Number of components as a right-continuous step function of epsilon.
/// The first step is `(0, node_count)`; each later step sits at a distinct
/// bar length.
pub fn persistence_graph(d: &Dendrogram) -> Vec<(f64, usize)> {
    let mut heights: Vec<f64> = d.merges.iter().map(|m| m.height).collect();
    heights.sort_by(f64::total_cmp);
    let mut steps = vec![(0.0, d.node_count)];
    let mut remaining = d.node_count;
    for h in heights {
        remaining -= 1;
        match steps.last_mut() {
            Some(last) if last.0 == h => last.1 = remaining,
            _ => steps.push((h, remaining)),
        }
    }
    steps
}

/// Drops finite bars of length at most `epsilon`.
pub fn simplified_barcode(b: &Barcode, epsilon: f64) -> Barcode {
    let bars: Vec<Bar> = b
        .bars
        .iter()
        .filter(|bar| bar.length.is_none_or(|l| l > epsilon))
        .cloned()
        .collect();
    let removed = b.bars.len() - bars.len();
    Barcode {
        bars,
        node_count: b.node_count - removed,
        component_count: b.component_count,
    }
}

/// Bottleneck distance between two barcodes of bars born at 0.
///
/// A finite bar of length `d` is matched either to a bar of the other code at
/// cost `|d - d'|` or to the diagonal at cost `d / 2`. Essential bars only
/// match each other, so unequal essential counts give infinity. The optimum
/// is one of the candidate costs; the smallest feasible one is found by
/// binary search with a perfect-matching test.
pub fn bottleneck_distance(a: &Barcode, b: &Barcode) -> f64 {
    if a.essential_count() != b.essential_count() {
        return f64::INFINITY;
    }
    let (xs, ys) = (a.finite_lengths(), b.finite_lengths());
    let mut candidates = vec![0.0];
    candidates.extend(xs.iter().map(|x| x / 2.0));
    candidates.extend(ys.iter().map(|y| y / 2.0));
    for x in &xs {
        candidates.extend(ys.iter().map(|y| (x - y).abs()));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matchable(&xs, &ys, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Whether a perfect matching with every pair within `delta` exists.
fn matchable(xs: &[f64], ys: &[f64], delta: f64) -> bool {
    let (n, m) = (xs.len(), ys.len());
    // left: xs then diagonal copies of ys; right: ys then diagonal copies of xs
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if (x - y).abs() <= delta {
                adj[i].push(j);
            }
        }
        if x / 2.0 <= delta {
            adj[i].push(m + i);
        }
    }
    for (j, y) in ys.iter().enumerate() {
        if y / 2.0 <= delta {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }

    let mut owner = vec![usize::MAX; n + m];
    for left in 0..n + m {
        let mut visited = vec![false; n + m];
        if !augment(left, &adj, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(left: usize, adj: &[Vec<usize>], owner: &mut [usize], visited: &mut [bool]) -> bool {
    for &right in &adj[left] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        if owner[right] == usize::MAX || augment(owner[right], adj, owner, visited) {
            owner[right] = left;
            return true;
        }
    }
    false
}
