//! Small hand-checkable graphs shared by tests, docs and the CLI.

use crate::format::parse_graph;
use crate::graph::{CoordMode, CostGainGraph};

pub const TRIANGLE: &str = include_str!("../fixtures/triangle.cgn");

/// Nodes `a`, `b`, `c`; two-way unit-cost segments with gains a-b 2, b-c 3,
/// c-a 1.
pub fn triangle() -> CostGainGraph {
    parse_graph(TRIANGLE, CoordMode::None).expect("fixture parses")
}
