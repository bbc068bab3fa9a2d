//! Triple systems as triangle decompositions of complete graphs, and their
//! DOT / TikZ / JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::design::{verify_sts, Order, Point, Triple, TripleSystem};
use crate::error::GraphError;

/// Display colors, cycled over triangles. Names are base `xcolor` names;
/// the hex values are used for DOT.
pub const PALETTE: [(&str, &str); 12] = [
    ("blue", "#0000ff"),
    ("red", "#ff0000"),
    ("green", "#008000"),
    ("orange", "#ffa500"),
    ("magenta", "#ff00ff"),
    ("teal", "#008080"),
    ("violet", "#ee82ee"),
    ("cyan", "#00ffff"),
    ("brown", "#a52a2a"),
    ("lime", "#00ff00"),
    ("gray", "#808080"),
    ("pink", "#ffc0cb"),
];

/// K_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteGraph {
    n: u32,
}

impl CompleteGraph {
    pub fn new(n: u32) -> Self {
        CompleteGraph { n }
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        let n = self.n as usize;
        n * n.saturating_sub(1) / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> {
        let n = self.n;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredTriangle {
    pub vertices: [Point; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
}

/// Labeled vertices of K_n plus a list of triangles. Whether the triangles
/// really decompose K_n is checked by [`TriangleDecomposition::edge_owners`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleDecomposition {
    graph: CompleteGraph,
    labels: Vec<String>,
    triangles: Vec<ColoredTriangle>,
}

impl TriangleDecomposition {
    pub fn new(labels: Vec<String>, triangles: Vec<ColoredTriangle>) -> Self {
        TriangleDecomposition {
            graph: CompleteGraph::new(labels.len() as u32),
            labels,
            triangles,
        }
    }

    pub fn graph(&self) -> CompleteGraph {
        self.graph
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn triangles(&self) -> &[ColoredTriangle] {
        &self.triangles
    }

    fn edge_name(&self, (a, b): (Point, Point)) -> String {
        format!(
            "{{{},{}}}",
            self.labels[a as usize], self.labels[b as usize]
        )
    }

    /// Maps every edge of K_n to the index of the one triangle containing it.
    /// Fails on degenerate triangles, on edges claimed twice, or on gaps.
    pub fn edge_owners(&self) -> Result<BTreeMap<(Point, Point), usize>, GraphError> {
        let n = self.graph.vertex_count();
        let mut owners = BTreeMap::new();
        let mut overlaps = Vec::new();
        for (index, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.vertices;
            if let Some(v) = tri.vertices.iter().find(|&&v| v >= n) {
                return Err(GraphError::BadTriangle {
                    index,
                    detail: format!("vertex {v} not in K_{n}"),
                });
            }
            let triple = Triple::new(a, b, c).map_err(|e| GraphError::BadTriangle {
                index,
                detail: e.to_string(),
            })?;
            for edge in triple.pairs() {
                if owners.insert(edge, index).is_some() {
                    overlaps.push(self.edge_name(edge));
                }
            }
        }
        if !overlaps.is_empty() {
            return Err(GraphError::OverlappingEdges(overlaps));
        }
        let uncovered: Vec<String> = self
            .graph
            .edges()
            .filter(|e| !owners.contains_key(e))
            .map(|e| self.edge_name(e))
            .collect();
        if !uncovered.is_empty() {
            return Err(GraphError::UncoveredEdges(uncovered));
        }
        Ok(owners)
    }
}

/// One triangle per triple, colored cyclically from [`PALETTE`].
pub fn to_decomposition(
    system: &TripleSystem,
    labels: &[String],
) -> Result<TriangleDecomposition, GraphError> {
    let report = verify_sts(system);
    if !report.is_valid() {
        return Err(GraphError::InvalidSystem(report.summary()));
    }
    let expected = system.order().get() as usize;
    if labels.len() != expected {
        return Err(GraphError::LabelCount {
            expected,
            got: labels.len(),
        });
    }
    let triangles = system
        .triples()
        .iter()
        .enumerate()
        .map(|(i, t)| ColoredTriangle {
            vertices: t.points(),
            color: Some(PALETTE[i % PALETTE.len()].0.to_owned()),
        })
        .collect();
    Ok(TriangleDecomposition::new(labels.to_vec(), triangles))
}

pub fn from_decomposition(decomp: &TriangleDecomposition) -> Result<TripleSystem, GraphError> {
    decomp.edge_owners()?;
    let order = Order::new(decomp.graph().vertex_count())
        .map_err(|e| GraphError::InvalidSystem(e.to_string()))?;
    let triples = decomp
        .triangles()
        .iter()
        .map(|t| {
            let [a, b, c] = t.vertices;
            Triple::new(a, b, c).expect("checked by edge_owners")
        })
        .collect();
    TripleSystem::new(order, triples).map_err(|e| GraphError::InvalidSystem(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Tikz,
    Json,
}

impl FromStr for ExportFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "tikz" => Ok(ExportFormat::Tikz),
            "json" => Ok(ExportFormat::Json),
            other => Err(GraphError::UnknownFormat(other.to_owned())),
        }
    }
}

/// Renders a valid decomposition. Output depends only on the input.
pub fn export_graph(
    decomp: &TriangleDecomposition,
    format: ExportFormat,
) -> Result<String, GraphError> {
    let owners = decomp.edge_owners()?;
    Ok(match format {
        ExportFormat::Dot => to_dot(decomp),
        ExportFormat::Tikz => to_tikz(decomp),
        ExportFormat::Json => to_json(decomp, &owners),
    })
}

fn hex_for(color: &str) -> &str {
    PALETTE
        .iter()
        .find(|(name, _)| *name == color)
        .map_or(color, |(_, hex)| hex)
}

fn color_of(decomp: &TriangleDecomposition, index: usize) -> &str {
    decomp.triangles[index]
        .color
        .as_deref()
        .unwrap_or(PALETTE[index % PALETTE.len()].0)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn to_dot(decomp: &TriangleDecomposition) -> String {
    let mut out = String::new();
    let n = decomp.graph().vertex_count();
    writeln!(out, "graph K{n} {{").unwrap();
    writeln!(out, "  layout=circo;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (i, label) in decomp.labels().iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\"];", dot_escape(label)).unwrap();
    }
    for (index, tri) in decomp.triangles().iter().enumerate() {
        let color = hex_for(color_of(decomp, index));
        let [a, b, c] = tri.vertices;
        writeln!(out, "  // triangle {}", index + 1).unwrap();
        for (x, y) in [(a, b), (b, c), (a, c)] {
            writeln!(out, "  v{x} -- v{y} [color=\"{color}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(ch),
        }
    }
    out
}

fn to_tikz(decomp: &TriangleDecomposition) -> String {
    let mut out = String::new();
    let n = decomp.graph().vertex_count().max(1);
    out.push_str("\\begin{tikzpicture}[scale=3, every node/.style={circle, draw}]\n");
    for (i, label) in decomp.labels().iter().enumerate() {
        // evenly spaced, clockwise from the top
        let angle = 90.0 - 360.0 * i as f64 / f64::from(n);
        writeln!(
            out,
            "  \\node (v{i}) at ({angle:.2}:1) {{{}}};",
            tex_escape(label)
        )
        .unwrap();
    }
    for (index, tri) in decomp.triangles().iter().enumerate() {
        let [a, b, c] = tri.vertices;
        writeln!(
            out,
            "  \\draw[thick, {}] (v{a}) -- (v{b}) -- (v{c}) -- cycle;",
            color_of(decomp, index)
        )
        .unwrap();
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

#[derive(Serialize)]
struct JsonTriangle<'a> {
    vertices: [Point; 3],
    color: &'a str,
}

#[derive(Serialize)]
struct JsonEdge {
    pair: (Point, Point),
    triangle: usize,
}

#[derive(Serialize)]
struct JsonExport<'a> {
    order: u32,
    points: &'a [String],
    triples: Vec<[Point; 3]>,
    triangles: Vec<JsonTriangle<'a>>,
    edges: Vec<JsonEdge>,
}

fn to_json(decomp: &TriangleDecomposition, owners: &BTreeMap<(Point, Point), usize>) -> String {
    let export = JsonExport {
        order: decomp.graph().vertex_count(),
        points: decomp.labels(),
        triples: decomp
            .triangles()
            .iter()
            .map(|t| sorted(t.vertices))
            .collect(),
        triangles: decomp
            .triangles()
            .iter()
            .enumerate()
            .map(|(i, t)| JsonTriangle {
                vertices: sorted(t.vertices),
                color: color_of(decomp, i),
            })
            .collect(),
        edges: owners
            .iter()
            .map(|(&pair, &triangle)| JsonEdge { pair, triangle })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&export).expect("export serializes");
    out.push('\n');
    out
}

fn sorted(mut v: [Point; 3]) -> [Point; 3] {
    v.sort_unstable();
    v
}
