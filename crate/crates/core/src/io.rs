//! Hypergraph documents (JSON and incidence CSV) and the result document.
//!
//! Internal ids are assigned densely in file order; the external ids of a
//! document are only used to resolve member references. Floating-point
//! numbers in result documents are written like C's `%.17g`, which
//! round-trips every `f64` exactly.

use std::collections::HashMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, HypergraphBuilder, Violation, VertexId};
use crate::layout::{HullPolygon, Layout};
use crate::metrics::MetricsComparison;
use crate::persistence::{Barcode, Dendrogram, EpsilonPartition};
use crate::simplify::{Correspondence, SimplificationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parameter(format!("unknown format {other:?}"))),
        }
    }
}

/// A vertex or hyperedge id as written in a document.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExternalId {
    Number(u64),
    Text(String),
}

impl fmt::Display for ExternalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExternalId::Number(n) => write!(f, "{n}"),
            ExternalId::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: ExternalId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub id: ExternalId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub members: Vec<ExternalId>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HypergraphDocument {
    #[serde(default)]
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub hyperedges: Vec<EdgeEntry>,
}

impl From<&Hypergraph> for HypergraphDocument {
    fn from(h: &Hypergraph) -> Self {
        HypergraphDocument {
            vertices: h
                .vertex_labels()
                .iter()
                .enumerate()
                .map(|(i, label)| VertexEntry {
                    id: ExternalId::Number(i as u64),
                    label: Some(label.clone()),
                })
                .collect(),
            hyperedges: h
                .edges()
                .iter()
                .enumerate()
                .map(|(j, e)| EdgeEntry {
                    id: ExternalId::Number(j as u64),
                    label: Some(e.label.clone()),
                    members: e.members.iter().map(|v| ExternalId::Number(v.0 as u64)).collect(),
                })
                .collect(),
        }
    }
}

impl From<Hypergraph> for HypergraphDocument {
    fn from(h: Hypergraph) -> Self {
        HypergraphDocument::from(&h)
    }
}

impl TryFrom<HypergraphDocument> for Hypergraph {
    type Error = Error;

    fn try_from(doc: HypergraphDocument) -> Result<Self> {
        let mut violations = Vec::new();
        let mut builder = HypergraphBuilder::new();
        let mut vertex_of: HashMap<&ExternalId, VertexId> = HashMap::new();
        for v in &doc.vertices {
            let label = v.label.clone().unwrap_or_else(|| v.id.to_string());
            let id = builder.add_vertex(label);
            if vertex_of.insert(&v.id, id).is_some() {
                violations.push(Violation::DuplicateId {
                    section: "vertex".into(),
                    id: v.id.to_string(),
                });
            }
        }
        let mut seen_edges = std::collections::HashSet::new();
        for e in &doc.hyperedges {
            if !seen_edges.insert(&e.id) {
                violations.push(Violation::DuplicateId {
                    section: "hyperedge".into(),
                    id: e.id.to_string(),
                });
            }
            let label = e.label.clone().unwrap_or_else(|| e.id.to_string());
            let mut members = Vec::with_capacity(e.members.len());
            for m in &e.members {
                match vertex_of.get(m) {
                    Some(&v) => members.push(v),
                    None => violations.push(Violation::UndeclaredMember {
                        edge: label.clone(),
                        vertex: m.to_string(),
                    }),
                }
            }
            builder.add_edge(label, members);
        }
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        builder.build()
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphDocument::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = HypergraphDocument::deserialize(deserializer)?;
        Hypergraph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

pub fn parse_hypergraph(bytes: &[u8], format: Format) -> Result<Hypergraph> {
    match format {
        Format::Json => {
            let doc: HypergraphDocument = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            Hypergraph::try_from(doc)
        }
        Format::Csv => parse_incidence_csv(bytes),
    }
}

/// Reads an `edge,vertex` incidence table. Vertices and hyperedges are
/// numbered by first appearance; repeated rows are dropped with a warning.
fn parse_incidence_csv(bytes: &[u8]) -> Result<Hypergraph> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let parse_err = |line: usize, message: String| Error::Parse {
        line,
        column: 0,
        message,
    };
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        parse_err(line, e.to_string())
    };

    let headers = reader.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = headers.iter().map(|h| h.trim().trim_start_matches('\u{feff}')).collect();
    if names != ["edge", "vertex"] {
        return Err(parse_err(1, format!("expected header `edge,vertex`, found `{}`", names.join(","))));
    }

    let mut vertex_labels: Vec<String> = Vec::new();
    let mut vertex_of: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(String, Vec<usize>)> = Vec::new();
    let mut edge_of: HashMap<String, usize> = HashMap::new();
    let mut seen = std::collections::HashSet::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let (edge, vertex) = match (record.get(0), record.get(1), record.len()) {
            (Some(e), Some(v), 2) if !e.is_empty() && !v.is_empty() => (e.to_string(), v.to_string()),
            (_, _, n) if n > 2 => return Err(parse_err(line, format!("expected 2 fields, found {n}"))),
            (Some(e), _, _) if e.is_empty() => return Err(parse_err(line, "missing edge field".into())),
            _ => return Err(parse_err(line, "missing vertex field".into())),
        };
        let v = *vertex_of.entry(vertex.clone()).or_insert_with(|| {
            vertex_labels.push(vertex.clone());
            vertex_labels.len() - 1
        });
        let e = *edge_of.entry(edge.clone()).or_insert_with(|| {
            edges.push((edge.clone(), Vec::new()));
            edges.len() - 1
        });
        if seen.insert((e, v)) {
            edges[e].1.push(v);
        } else {
            log::warn!("line {line}: duplicate incidence ({edge}, {vertex}) ignored");
        }
    }
    Hypergraph::from_member_lists(vertex_labels, edges)
}

/// Writes a hypergraph as an incidence table.
pub fn write_incidence_csv(h: &Hypergraph) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["edge", "vertex"]).map_err(io::Error::from)?;
    for e in h.edges() {
        for v in &e.members {
            w.write_record([e.label.as_str(), h.vertex_label(*v)]).map_err(io::Error::from)?;
        }
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Geometry of one view: bipartite positions and Venn hulls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewGeometry {
    pub layout: Layout,
    pub hulls: Vec<HullPolygon>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutBlock {
    pub original: ViewGeometry,
    pub simplified: ViewGeometry,
}

/// Everything a simplification produced, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    #[serde(flatten)]
    pub result: SimplificationResult,
    pub persistence_graph: Vec<(f64, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsComparison>,
}

impl ResultDocument {
    pub fn new(result: SimplificationResult) -> Self {
        let persistence_graph = crate::persistence::persistence_graph(&result.dendrogram);
        ResultDocument {
            result,
            persistence_graph,
            layout: None,
            metrics: None,
        }
    }
}

/// The barcode side of a result: what a parameter change recomputes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeView {
    pub barcode: Barcode,
    pub dendrogram: Dendrogram,
    pub persistence_graph: Vec<(f64, usize)>,
}

impl From<&SimplificationResult> for BarcodeView {
    fn from(r: &SimplificationResult) -> Self {
        BarcodeView {
            barcode: r.barcode.clone(),
            dendrogram: r.dendrogram.clone(),
            persistence_graph: crate::persistence::persistence_graph(&r.dendrogram),
        }
    }
}

/// The cut side of a result: what a threshold or expansion change redoes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionView {
    pub partition: EpsilonPartition,
    pub simplified_hypergraph: Hypergraph,
    pub correspondence: Correspondence,
}

impl From<&SimplificationResult> for PartitionView {
    fn from(r: &SimplificationResult) -> Self {
        PartitionView {
            partition: r.partition.clone(),
            simplified_hypergraph: r.simplified_hypergraph.clone(),
            correspondence: r.correspondence.clone(),
        }
    }
}

pub fn serialize_result(doc: &ResultDocument) -> Result<Vec<u8>> {
    to_json_bytes(doc)
}

pub fn parse_result(bytes: &[u8]) -> Result<ResultDocument> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with `%.17g` floats and a trailing newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits::default());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

/// Formats like C's `%.17g`, keeping a `.0` on integral values.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exp) {
        let (int_part, frac_part) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat((-exp - 1) as usize), digits))
        };
        let frac = frac_part.trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int_part}.{frac}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{}.{frac}e{exp}", &digits[..1])
    }
}

#[derive(Default)]
struct SignificantDigits {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}
