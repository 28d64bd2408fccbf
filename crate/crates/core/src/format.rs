//! Plain-text edge-list format.
//!
//! ```text
//! # comment
//! @mode plane            # geo | plane | none
//! N a 0 0                # node with coordinates
//! N b 3 4
//! N c                    # node without coordinates
//! E a b - 2              # cost derived from coordinates
//! E b a 5 2 20           # explicit cost, gain, speed limit in km/h
//! ```
//!
//! Nodes may be declared after the edges that use them. A graph written by
//! [`write_graph`] with every cost explicit parses back to the same graph.
//! The `@contracted` directive marks graphs produced by degree-2 contraction.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{BuildError, CoordMode, CostGainGraph, GraphBuilder};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read graph file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: negative cost")]
    NegativeCost { line: usize },
    #[error("line {line}: negative gain")]
    NegativeGain { line: usize },
    #[error("line {line}: unknown node `{name}`")]
    DanglingNode { line: usize, name: String },
    #[error("line {line}: duplicate node `{name}`")]
    DuplicateNode { line: usize, name: String },
    #[error("line {line}: cost omitted but coordinates are unavailable")]
    MissingCoordinates { line: usize },
}

impl LoadError {
    pub fn line(&self) -> Option<usize> {
        match self {
            LoadError::Io(_) => None,
            LoadError::Malformed { line, .. }
            | LoadError::NegativeCost { line }
            | LoadError::NegativeGain { line }
            | LoadError::DanglingNode { line, .. }
            | LoadError::DuplicateNode { line, .. }
            | LoadError::MissingCoordinates { line } => Some(*line),
        }
    }
}

/// Reads a graph file. `default_mode` applies when the file has no `@mode`
/// directive.
pub fn load_graph(
    path: impl AsRef<Path>,
    default_mode: CoordMode,
) -> Result<CostGainGraph, LoadError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text, default_mode)
}

struct EdgeLine<'a> {
    line: usize,
    src: &'a str,
    dst: &'a str,
    cost: Option<f64>,
    gain: f64,
    maxspeed: Option<f64>,
}

fn malformed(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Malformed {
        line,
        message: message.into(),
    }
}

fn number(line: usize, what: &str, token: &str) -> Result<f64, LoadError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed(line, format!("invalid {what} `{token}`"))),
    }
}

/// Line number, name and coordinates of an `N` line.
type NodeLine<'a> = (usize, &'a str, Option<(f64, f64)>);

pub fn parse_graph(text: &str, default_mode: CoordMode) -> Result<CostGainGraph, LoadError> {
    let mut mode: Option<CoordMode> = None;
    let mut contracted = false;
    let mut nodes: Vec<NodeLine<'_>> = Vec::new();
    let mut edges: Vec<EdgeLine<'_>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            continue;
        };
        match head {
            "@mode" => {
                let [value] = rest else {
                    return Err(malformed(line, "expected `@mode geo|plane|none`"));
                };
                let parsed: CoordMode = value.parse().map_err(|e: String| malformed(line, e))?;
                if mode.is_some_and(|m| m != parsed) {
                    return Err(malformed(line, "conflicting @mode directives"));
                }
                mode = Some(parsed);
            }
            "@contracted" => {
                if !rest.is_empty() {
                    return Err(malformed(line, "`@contracted` takes no arguments"));
                }
                contracted = true;
            }
            "N" => match rest {
                [name] => nodes.push((line, name, None)),
                [name, x, y] => {
                    let coord = (
                        number(line, "x coordinate", x)?,
                        number(line, "y coordinate", y)?,
                    );
                    nodes.push((line, name, Some(coord)));
                }
                _ => return Err(malformed(line, "expected `N <id> [<x> <y>]`")),
            },
            "E" => {
                let (src, dst, cost, gain, maxspeed) = match rest {
                    [s, d, c, g] => (*s, *d, *c, *g, None),
                    [s, d, c, g, m] => (*s, *d, *c, *g, Some(*m)),
                    _ => {
                        return Err(malformed(
                            line,
                            "expected `E <src> <dst> <cost|-> <gain> [maxspeed]`",
                        ))
                    }
                };
                let cost = match cost {
                    "-" => None,
                    c => {
                        let v = number(line, "cost", c)?;
                        if v < 0.0 {
                            return Err(LoadError::NegativeCost { line });
                        }
                        Some(v)
                    }
                };
                let gain = number(line, "gain", gain)?;
                if gain < 0.0 {
                    return Err(LoadError::NegativeGain { line });
                }
                let maxspeed = maxspeed.map(|m| number(line, "maxspeed", m)).transpose()?;
                edges.push(EdgeLine {
                    line,
                    src,
                    dst,
                    cost,
                    gain,
                    maxspeed,
                });
            }
            other => return Err(malformed(line, format!("unknown record `{other}`"))),
        }
    }

    let mut builder = GraphBuilder::new(mode.unwrap_or(default_mode));
    builder.set_contracted(contracted);
    for (line, name, coord) in nodes {
        builder
            .add_node(name, coord)
            .map_err(|_| LoadError::DuplicateNode {
                line,
                name: name.to_string(),
            })?;
    }
    for e in edges {
        let lookup = |name: &str| {
            builder
                .node_id(name)
                .ok_or_else(|| LoadError::DanglingNode {
                    line: e.line,
                    name: name.to_string(),
                })
        };
        let (src, dst) = (lookup(e.src)?, lookup(e.dst)?);
        let cost = match e.cost {
            Some(c) => c,
            None => builder
                .derived_cost(src, dst)
                .ok_or(LoadError::MissingCoordinates { line: e.line })?,
        };
        builder
            .add_edge(src, dst, cost, e.gain, e.maxspeed)
            .map_err(|err| match err {
                BuildError::NegativeCost(_) => LoadError::NegativeCost { line: e.line },
                BuildError::NegativeGain(_) => LoadError::NegativeGain { line: e.line },
                other => malformed(e.line, other.to_string()),
            })?;
    }
    Ok(builder.build())
}

/// Serializes a graph. Every cost is written explicitly, numbers use the
/// shortest representation that parses back to the same `f64`.
pub fn write_graph(graph: &CostGainGraph) -> String {
    let mut out = String::new();
    writeln!(out, "@mode {}", graph.coord_mode().as_str()).unwrap();
    if graph.is_contracted() {
        out.push_str("@contracted\n");
    }
    for (_, node) in graph.nodes() {
        match node.coord {
            Some((x, y)) => writeln!(out, "N {} {} {}", node.name, x, y).unwrap(),
            None => writeln!(out, "N {}", node.name).unwrap(),
        }
    }
    for e in graph.edges() {
        let (src, dst) = (&graph.node(e.src).name, &graph.node(e.dst).name);
        write!(out, "E {} {} {} {}", src, dst, e.cost, e.gain).unwrap();
        if let Some(m) = e.maxspeed_kmh {
            write!(out, " {m}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save_graph(graph: &CostGainGraph, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, write_graph(graph))
}
