//! Topological simplification of hypergraphs.
//!
//! A hypergraph is turned into a weighted line graph (or clique expansion),
//! whose 0-dimensional persistence barcode drives a multi-scale merge of
//! hyperedges (or vertices) into super-nodes. The pieces:
//!
//! - [`hypergraph`]: the incidence model, duals and exact collapses
//! - [`graph`]: s-line graphs, clique expansions and their weights
//! - [`persistence`]: barcodes, dendrograms, ε-partitions, bottleneck distance
//! - [`simplify`]: the end-to-end pipeline and bar expansion
//! - [`layout`] / [`metrics`]: drawings and their aesthetic scores
//! - [`io`]: JSON and CSV documents
//! - [`cli`] / [`service`]: command line and HTTP front ends

pub mod cli;
pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod layout;
pub mod metrics;
pub mod persistence;
pub mod service;
pub mod simplify;
mod union_find;

pub use error::{Error, Result};
pub use graph::{SingletonMode, WeightScheme, WeightedGraph};
pub use hypergraph::{EdgeId, Hypergraph, HypergraphBuilder, Side, VertexId};
pub use persistence::{Barcode, Dendrogram, EpsilonPartition};
pub use simplify::{simplify, SimplificationParams, SimplificationResult};
