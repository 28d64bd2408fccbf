//! Ways, round trips and redundancy-control accounting.
//!
//! A [`Way`] keeps its full edge list together with incrementally maintained
//! aggregates: total cost, plain gain (every traversal counts), redundancy
//! controlled gain (every distinct directed edge counts once), the directed
//! edge multiset and per-segment traversal counts.

use thiserror::Error;

use crate::graph::{CostGainGraph, Edge, EdgeId, NodeId, SegmentId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WayError {
    #[error("edge {edge:?} does not attach to way endpoint {at}")]
    NonIncident { edge: EdgeId, at: NodeId },
}

/// Which gain definition a label uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainMode {
    /// Sum over all traversals.
    Plain,
    /// Sum over the set of distinct directed edges.
    Rc,
}

/// Redundancy-control parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RcConfig {
    k: u32,
    pub dominance_pruning: bool,
}

impl RcConfig {
    /// `None` if `k == 0`.
    pub fn new(k: u32, dominance_pruning: bool) -> Option<Self> {
        (k >= 1).then_some(RcConfig {
            k,
            dominance_pruning,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Sorted `(key, count)` pairs; a small multiset keyed by edge or segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Counts<K> {
    entries: Vec<(K, u32)>,
}

impl<K> Default for Counts<K> {
    fn default() -> Self {
        Counts {
            entries: Vec::new(),
        }
    }
}

impl<K: Ord + Copy> Counts<K> {
    /// Increments `key`, returning the new count.
    fn bump(&mut self, key: K) -> u32 {
        match self.entries.binary_search_by(|(k, _)| k.cmp(&key)) {
            Ok(pos) => {
                self.entries[pos].1 += 1;
                self.entries[pos].1
            }
            Err(pos) => {
                self.entries.insert(pos, (key, 1));
                1
            }
        }
    }

    pub fn get(&self, key: K) -> u32 {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(&key))
            .map_or(0, |pos| self.entries[pos].1)
    }

    pub fn max_count(&self) -> u32 {
        self.entries.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (K, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// True if every key of `self` occurs in `other` (counts ignored).
    pub fn support_subset_of(&self, other: &Counts<K>) -> bool {
        if self.entries.len() > other.entries.len() {
            return false;
        }
        let mut theirs = other.entries.iter().map(|(k, _)| *k);
        'outer: for (key, _) in &self.entries {
            for candidate in theirs.by_ref() {
                match candidate.cmp(key) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }
}

pub type EdgeCounts = Counts<EdgeId>;
pub type SegmentCounts = Counts<SegmentId>;

/// An edge sequence with cached aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct Way {
    start: NodeId,
    end: NodeId,
    edges: Vec<EdgeId>,
    cost: f64,
    gain_plain: f64,
    gain_rc: f64,
    edge_counts: EdgeCounts,
    multiplicity: SegmentCounts,
}

impl Way {
    /// The empty way sitting at `node`.
    pub fn empty(node: NodeId) -> Way {
        Way {
            start: node,
            end: node,
            edges: Vec::new(),
            cost: 0.0,
            gain_plain: 0.0,
            gain_rc: 0.0,
            edge_counts: Counts::default(),
            multiplicity: Counts::default(),
        }
    }

    pub fn from_edge(edge: &Edge) -> Way {
        let mut way = Way::empty(edge.src);
        way.push_unchecked(edge);
        way
    }

    /// Rebuilds a way from scratch, checking incidence along the sequence.
    pub fn from_edges(
        graph: &CostGainGraph,
        start: NodeId,
        edges: &[EdgeId],
    ) -> Result<Way, WayError> {
        let mut way = Way::empty(start);
        for &e in edges {
            way.push(graph.edge(e))?;
        }
        Ok(way)
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn end(&self) -> NodeId {
        self.end
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn gain_plain(&self) -> f64 {
        self.gain_plain
    }

    pub fn gain_rc(&self) -> f64 {
        self.gain_rc
    }

    pub fn gain(&self, mode: GainMode) -> f64 {
        match mode {
            GainMode::Plain => self.gain_plain,
            GainMode::Rc => self.gain_rc,
        }
    }

    /// `(cost, gain)` under the given gain definition.
    pub fn label(&self, mode: GainMode) -> (f64, f64) {
        (self.cost, self.gain(mode))
    }

    pub fn edge_counts(&self) -> &EdgeCounts {
        &self.edge_counts
    }

    /// Traversals per segment, both directions counted together.
    pub fn multiplicity(&self) -> &SegmentCounts {
        &self.multiplicity
    }

    pub fn multiplicity_of(&self, segment: SegmentId) -> u32 {
        self.multiplicity.get(segment)
    }

    pub fn respects_rc(&self, k: u32) -> bool {
        self.multiplicity.max_count() <= k
    }

    pub fn is_round_trip(&self) -> bool {
        !self.is_empty() && self.start == self.end
    }

    /// Node sequence, starting with `start()`.
    pub fn nodes(&self, graph: &CostGainGraph) -> Vec<NodeId> {
        let mut nodes = Vec::with_capacity(self.edges.len() + 1);
        nodes.push(self.start);
        nodes.extend(self.edges.iter().map(|&e| graph.edge(e).dst));
        nodes
    }

    fn account(&mut self, edge: &Edge) {
        self.cost += edge.cost;
        self.gain_plain += edge.gain;
        if self.edge_counts.bump(edge.id) == 1 {
            self.gain_rc += edge.gain;
        }
        self.multiplicity.bump(edge.segment);
    }

    fn push_unchecked(&mut self, edge: &Edge) {
        self.account(edge);
        self.edges.push(edge.id);
        self.end = edge.dst;
    }

    /// Appends `edge` in place.
    pub fn push(&mut self, edge: &Edge) -> Result<(), WayError> {
        if edge.src != self.end {
            return Err(WayError::NonIncident {
                edge: edge.id,
                at: self.end,
            });
        }
        self.push_unchecked(edge);
        Ok(())
    }

    /// New way with `edge` appended.
    pub fn extend(&self, edge: &Edge) -> Result<Way, WayError> {
        let mut way = self.clone();
        way.push(edge)?;
        Ok(way)
    }

    /// New way with `edge` prepended; `edge.dst` must be this way's start.
    pub fn prepend(&self, edge: &Edge) -> Result<Way, WayError> {
        if edge.dst != self.start {
            return Err(WayError::NonIncident {
                edge: edge.id,
                at: self.start,
            });
        }
        let mut way = self.clone();
        way.account(edge);
        way.edges.insert(0, edge.id);
        way.start = edge.src;
        Ok(way)
    }

    /// Concatenation `self` then `tail`; aggregates are updated edge by edge
    /// so the result equals a from-scratch rebuild.
    pub fn concat(&self, graph: &CostGainGraph, tail: &Way) -> Result<Way, WayError> {
        if tail.start != self.end {
            return Err(WayError::NonIncident {
                edge: tail.edges.first().copied().unwrap_or(EdgeId(u32::MAX)),
                at: self.end,
            });
        }
        let mut way = self.clone();
        for &e in &tail.edges {
            way.push_unchecked(graph.edge(e));
        }
        Ok(way)
    }
}

/// A non-empty way that returns to its first node.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip(Way);

impl RoundTrip {
    pub fn way(&self) -> &Way {
        &self.0
    }

    pub fn into_way(self) -> Way {
        self.0
    }
}

impl TryFrom<Way> for RoundTrip {
    type Error = Way;

    fn try_from(way: Way) -> Result<Self, Self::Error> {
        if way.is_round_trip() {
            Ok(RoundTrip(way))
        } else {
            Err(way)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle;
    use crate::graph::{CoordMode, GraphBuilder};

    fn edge_between(g: &CostGainGraph, a: &str, b: &str) -> EdgeId {
        let (a, b) = (g.node_id(a).unwrap(), g.node_id(b).unwrap());
        g.outlinks(a).find(|e| e.dst == b).unwrap().id
    }

    fn way(g: &CostGainGraph, path: &[&str]) -> Way {
        let edges: Vec<_> = path
            .windows(2)
            .map(|p| edge_between(g, p[0], p[1]))
            .collect();
        Way::from_edges(g, g.node_id(path[0]).unwrap(), &edges).unwrap()
    }

    #[test]
    fn single_edge_extension() {
        let g = triangle();
        let a = g.node_id("a").unwrap();
        let ab = g.edge(edge_between(&g, "a", "b"));
        let w = Way::empty(a).extend(ab).unwrap();
        assert_eq!(w.cost(), 1.0);
        assert_eq!(w.gain_plain(), 2.0);
        assert_eq!(w.gain_rc(), 2.0);
        assert_eq!(w.multiplicity_of(ab.segment), 1);
        assert_eq!(w.end(), g.node_id("b").unwrap());
    }

    #[test]
    fn out_and_back_counts_both_directions() {
        let g = triangle();
        let w = way(&g, &["a", "b", "a"]);
        let seg = g.edge(w.edges()[0]).segment;
        assert_eq!(g.edge(w.edges()[1]).segment, seg);
        assert_eq!(w.gain_plain(), 4.0);
        assert_eq!(w.gain_rc(), 4.0);
        assert_eq!(w.multiplicity_of(seg), 2);
        assert_eq!(w.label(GainMode::Rc), (2.0, 4.0));
        assert!(!w.respects_rc(1));
        assert!(w.respects_rc(2));
    }

    #[test]
    fn shared_edge_record_counts_once() {
        // a single directed loop traversed twice contributes its gain once
        let mut b = GraphBuilder::new(CoordMode::None);
        let a = b.add_node("a", None).unwrap();
        b.add_edge(a, a, 1.0, 2.0, None).unwrap();
        let g = b.build();
        let w = Way::from_edges(&g, a, &[EdgeId(0), EdgeId(0)]).unwrap();
        assert_eq!(w.label(GainMode::Plain), (2.0, 4.0));
        assert_eq!(w.label(GainMode::Rc), (2.0, 2.0));
    }

    #[test]
    fn triangle_labels_agree_in_both_modes() {
        let g = triangle();
        let w = way(&g, &["a", "b", "c", "a"]);
        assert_eq!(w.label(GainMode::Plain), (3.0, 6.0));
        assert_eq!(w.label(GainMode::Rc), (3.0, 6.0));
        assert!(w.respects_rc(1));
        assert!(RoundTrip::try_from(w).is_ok());
    }

    #[test]
    fn empty_way_and_non_incident_edge() {
        let g = triangle();
        let a = g.node_id("a").unwrap();
        let empty = Way::empty(a);
        assert_eq!(empty.label(GainMode::Plain), (0.0, 0.0));
        assert_eq!(empty.label(GainMode::Rc), (0.0, 0.0));
        assert!(RoundTrip::try_from(empty).is_err());

        let at_b = way(&g, &["a", "b"]);
        let ca = g.edge(edge_between(&g, "c", "a"));
        assert_eq!(
            at_b.extend(ca),
            Err(WayError::NonIncident {
                edge: ca.id,
                at: g.node_id("b").unwrap()
            })
        );
    }

    #[test]
    fn prepend_and_concat_match_rebuild() {
        let g = triangle();
        let tail = way(&g, &["b", "c", "a"]);
        let ab = g.edge(edge_between(&g, "a", "b"));
        let joined = tail.prepend(ab).unwrap();
        let rebuilt = way(&g, &["a", "b", "c", "a"]);
        assert_eq!(joined, rebuilt);
        let head = way(&g, &["a", "b"]);
        assert_eq!(head.concat(&g, &tail).unwrap(), rebuilt);
        assert!(head.concat(&g, &head).is_err());
    }

    #[test]
    fn support_subset() {
        let mk = |ids: &[u32]| {
            let mut c = EdgeCounts::default();
            for &i in ids {
                c.bump(EdgeId(i));
            }
            c
        };
        assert!(mk(&[1]).support_subset_of(&mk(&[1, 2])));
        assert!(mk(&[1, 1, 1]).support_subset_of(&mk(&[2, 1])));
        assert!(!mk(&[3]).support_subset_of(&mk(&[1, 2])));
        assert!(!mk(&[0, 2]).support_subset_of(&mk(&[1, 2])));
        assert!(mk(&[]).support_subset_of(&mk(&[])));
    }

    #[test]
    fn rc_config_requires_positive_k() {
        assert!(RcConfig::new(0, true).is_none());
        assert_eq!(RcConfig::new(3, false).unwrap().k(), 3);
    }
}
