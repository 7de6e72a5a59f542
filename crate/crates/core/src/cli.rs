//! Command line front end.
//!
//! Exit status is 0 on success, 2 for bad flags (reported before anything
//! is read or computed) and 1 for problems with the data. Diagnostics go to
//! standard error only.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Result;
use crate::graph::{self, SingletonMode, WeightScheme};
use crate::hypergraph::{Hypergraph, Side};
use crate::io::{self, BarcodeView, Format, ResultDocument};
use crate::layout::{self, HullPolygon, Layout, LayoutConfig, DEFAULT_SEED};
use crate::metrics;
use crate::service::{self, ServiceConfig};
use crate::simplify::{self, SimplificationParams};

#[derive(Debug, Parser)]
#[command(name = "hypersimplify", version, about = "Barcode-guided hypergraph simplification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and write the result document.
    Simplify(PipelineArgs),
    /// Write the barcode, dendrogram and persistence graph.
    Barcode(PipelineArgs),
    /// Score the original and simplified drawings.
    Metrics(PipelineArgs),
    /// List s-connected components.
    Components(ComponentArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Jaccard,
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingletonArg {
    Greyout,
    Filter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Result,
    Barcode,
    Metrics,
    Svg,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Hypergraph file; `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to csv for `.csv` files and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, value_enum, default_value = "edge")]
    pub side: SideArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub s: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "jaccard")]
    pub weight: WeightArg,
    #[arg(long, default_value_t = 0.0, value_parser = parse_epsilon)]
    pub epsilon: f64,
    #[arg(long)]
    pub collapse_vertices: bool,
    #[arg(long)]
    pub collapse_edges: bool,
    #[arg(long, value_enum, default_value = "greyout")]
    pub singletons: SingletonArg,
    /// Bar id to keep unmerged; repeatable.
    #[arg(long = "expand", value_name = "BAR_ID")]
    pub expand: Vec<usize>,
    /// Layout seed for metrics and svg.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
}

#[derive(Debug, Args)]
pub struct ComponentArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Directory of the browser client bundle.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    /// Write each session's result document here after every change.
    #[arg(long)]
    pub snapshot_dir: Option<PathBuf>,
    /// Seconds of inactivity before a session is dropped.
    #[arg(long, default_value_t = 3600)]
    pub idle_timeout: u64,
}

fn parse_epsilon(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_nan() || x < 0.0 {
        return Err("epsilon must be a non-negative number".into());
    }
    Ok(x)
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Vertex => Side::Vertex,
            SideArg::Edge => Side::Hyperedge,
        }
    }
}

impl PipelineArgs {
    pub fn params(&self) -> SimplificationParams {
        let mut p = SimplificationParams::new(self.input.side.into())
            .with_s(self.input.s as usize)
            .with_weight(match self.weight {
                WeightArg::Jaccard => WeightScheme::Jaccard,
                WeightArg::Overlap => WeightScheme::Overlap,
            })
            .with_epsilon(self.epsilon)
            .with_collapse(self.collapse_vertices, self.collapse_edges)
            .with_singletons(match self.singletons {
                SingletonArg::Greyout => SingletonMode::GreyOut,
                SingletonArg::Filter => SingletonMode::Filter,
            });
        p.expanded_bars = self.expand.iter().copied().collect::<BTreeSet<_>>();
        p
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simplify(a) => pipeline(&a, Emit::Result, stdout),
        Command::Barcode(a) => pipeline(&a, Emit::Barcode, stdout),
        Command::Metrics(a) => pipeline(&a, Emit::Metrics, stdout),
        Command::Components(a) => components(&a, stdout),
        Command::Serve(a) => serve(&a),
    }
}

fn read_input(a: &InputArgs) -> Result<Hypergraph> {
    let bytes = if a.input == Path::new("-") {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf)?;
        buf
    } else {
        std::fs::read(&a.input)?
    };
    let format = match a.format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None if a.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        None => Format::Json,
    };
    io::parse_hypergraph(&bytes, format)
}

fn write_output(a: &InputArgs, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match &a.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn pipeline(a: &PipelineArgs, default: Emit, stdout: &mut dyn Write) -> Result<()> {
    let h = read_input(&a.input)?;
    let result = simplify::simplify(&h, &a.params())?;
    let config = LayoutConfig {
        seed: a.seed,
        ..LayoutConfig::default()
    };
    let bytes = match a.emit.unwrap_or(default) {
        Emit::Result => io::serialize_result(&ResultDocument::new(result))?,
        Emit::Barcode => io::to_json_bytes(&BarcodeView::from(&result))?,
        Emit::Metrics => io::to_json_bytes(&metrics::before_after(
            &result.original,
            &result.simplified_hypergraph,
            &config,
        ))?,
        Emit::Svg => {
            let h = &result.simplified_hypergraph;
            let l = layout::bipartite_layout(h, config.seed, config.iterations);
            let hulls = layout::venn_hulls(h, &l, config.margin);
            hybrid_svg(h, &l, &hulls).into_bytes()
        }
    };
    write_output(&a.input, &bytes, stdout)
}

#[derive(Serialize)]
struct ComponentsDocument<'a> {
    side: Side,
    s: usize,
    components: Vec<Vec<&'a str>>,
}

fn components(a: &ComponentArgs, stdout: &mut dyn Write) -> Result<()> {
    let h = read_input(&a.input)?;
    let side: Side = a.input.side.into();
    let s = a.input.s as usize;
    // Vertex components are hyperedge components of the dual.
    let target = match side {
        Side::Hyperedge => h.clone(),
        Side::Vertex => h.dual(),
    };
    let comps = graph::s_connected_components(&target, s)?;
    let doc = ComponentsDocument {
        side,
        s,
        components: comps
            .iter()
            .map(|c| c.iter().map(|e| h.label(side, e.0)).collect())
            .collect(),
    };
    write_output(&a.input, &io::to_json_bytes(&doc)?, stdout)
}

fn serve(a: &ServeArgs) -> Result<()> {
    let config = ServiceConfig {
        idle_timeout: Duration::from_secs(a.idle_timeout),
        snapshot_dir: a.snapshot_dir.clone(),
        static_dir: a.static_dir.clone(),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(service::serve(a.addr, config))?;
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Hybrid view: translucent hulls under the bipartite incidence drawing.
pub fn hybrid_svg(h: &Hypergraph, l: &Layout, hulls: &[HullPolygon]) -> String {
    let scale = 60.0;
    let pad = 40.0;
    let all: Vec<layout::Point> = l
        .positions()
        .copied()
        .chain(hulls.iter().flat_map(|p| p.points.iter().copied()))
        .collect();
    let (min_x, max_x, min_y, max_y) = all.iter().fold(
        (0.0f64, 0.0f64, 0.0f64, 0.0f64),
        |(a, b, c, d), p| (a.min(p[0]), b.max(p[0]), c.min(p[1]), d.max(p[1])),
    );
    let tx = |p: layout::Point| ((p[0] - min_x) * scale + pad, (max_y - p[1]) * scale + pad);
    let width = (max_x - min_x) * scale + 2.0 * pad;
    let height = (max_y - min_y) * scale + 2.0 * pad;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for hull in hulls {
        let colour = PALETTE[hull.edge % PALETTE.len()];
        let pts: Vec<String> = hull
            .points
            .iter()
            .map(|&p| {
                let (x, y) = tx(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{colour}" fill-opacity="0.2" stroke="{colour}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
    }
    let n = h.vertex_count();
    for (j, e) in h.edges().iter().enumerate() {
        let (ex, ey) = tx(l.hyperedges[j]);
        for v in &e.members {
            let (vx, vy) = tx(l.vertices[v.0]);
            let _ = writeln!(
                out,
                r##"<line x1="{vx:.2}" y1="{vy:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="#555" stroke-width="1"/>"##
            );
        }
    }
    for (j, e) in h.edges().iter().enumerate() {
        let (x, y) = tx(l.hyperedges[j]);
        let colour = PALETTE[j % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{colour}"><title>{}</title></rect>"#,
            x - 5.0,
            y - 5.0,
            escape(&e.label)
        );
    }
    for v in 0..n {
        let (x, y) = tx(l.vertices[v]);
        let label = escape(&h.vertex_labels()[v]);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#222"><title>{label}</title></circle>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10">{label}</text>"#,
            x + 7.0,
            y - 7.0
        );
    }
    out.push_str("</svg>\n");
    out
}

