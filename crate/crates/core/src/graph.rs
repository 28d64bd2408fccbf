//! Cost-gain networks: directed graphs whose edges carry a non-negative cost
//! and a non-negative gain.
//!
//! Graphs are built once through [`GraphBuilder`] (or loaded from the
//! edge-list text format, see [`crate::format`]) and are immutable afterwards,
//! so a single graph can serve any number of concurrent queries.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense node index, `0..graph.num_nodes()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense edge index, `0..graph.num_edges()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Identifier of a physical segment. Edge `(a, b)` and edge `(b, a)` of the
/// same segment share it; parallel segments between one node pair do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegmentId(pub u32);

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub cost: f64,
    pub gain: f64,
    pub segment: SegmentId,
    /// Speed limit tag in km/h, if the source data had one.
    pub maxspeed_kmh: Option<f64>,
}

/// How node coordinates are interpreted when an edge cost has to be derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordMode {
    /// `x` is longitude and `y` latitude in degrees; costs are haversine meters.
    Geo,
    /// Planar coordinates; costs are Euclidean distances.
    Plane,
    #[default]
    None,
}

impl CoordMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CoordMode::Geo => "geo",
            CoordMode::Plane => "plane",
            CoordMode::None => "none",
        }
    }

    /// Distance between two coordinates, `None` in [`CoordMode::None`].
    pub fn distance(self, a: (f64, f64), b: (f64, f64)) -> Option<f64> {
        match self {
            CoordMode::Geo => Some(haversine_m(a, b)),
            CoordMode::Plane => Some(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()),
            CoordMode::None => None,
        }
    }
}

impl std::str::FromStr for CoordMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geo" => Ok(CoordMode::Geo),
            "plane" => Ok(CoordMode::Plane),
            "none" => Ok(CoordMode::None),
            other => Err(format!("unknown coordinate mode `{other}`")),
        }
    }
}

const EARTH_RADIUS_M: f64 = 6_371_008.8;

fn haversine_m((lon1, lat1): (f64, f64), (lon2, lat2): (f64, f64)) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = (lat2 - lat1).to_radians();
    let dlambda = (lon2 - lon1).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    pub coord: Option<(f64, f64)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("negative or non-finite cost {0}")]
    NegativeCost(f64),
    #[error("negative or non-finite gain {0}")]
    NegativeGain(f64),
}

/// Immutable cost-gain network with forward and reverse adjacency.
#[derive(Debug, Clone)]
pub struct CostGainGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    coord_mode: CoordMode,
    name_index: HashMap<String, NodeId>,
    contracted: bool,
}

impl CostGainGraph {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn coord_mode(&self) -> CoordMode {
        self.coord_mode
    }

    /// True if degree-2 chains were merged into single edges. Such graphs no
    /// longer track per-segment multiplicity inside a merged chain.
    pub fn is_contracted(&self) -> bool {
        self.contracted
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = (NodeId, &Node)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.name_index.get(name).copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outlinks(&self, node: NodeId) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.out_adj[node.index()]
            .iter()
            .map(|e| &self.edges[e.index()])
    }

    pub fn inlinks(&self, node: NodeId) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.in_adj[node.index()]
            .iter()
            .map(|e| &self.edges[e.index()])
    }

    /// Copy of this graph with edge gains replaced by `gain_of(edge)`.
    pub fn with_gains(&self, mut gain_of: impl FnMut(&Edge) -> f64) -> CostGainGraph {
        let mut graph = self.clone();
        for edge in &mut graph.edges {
            let gain = gain_of(edge);
            debug_assert!(gain >= 0.0);
            edge.gain = gain;
        }
        graph
    }

    /// Applies the speed-limit gain policy: gain 1 on edges whose speed limit
    /// is strictly below the threshold, gain 0 everywhere else.
    pub fn assign_gain_policy(&self, policy: &GainPolicy) -> CostGainGraph {
        self.with_gains(|edge| policy.gain_for(edge.maxspeed_kmh))
    }

    pub(crate) fn mark_contracted(&mut self) {
        self.contracted = true;
    }

    /// Builder pre-populated with this graph's nodes, for derived graphs.
    pub(crate) fn to_builder(&self) -> GraphBuilder {
        let mut builder = GraphBuilder::new(self.coord_mode);
        for node in &self.nodes {
            builder
                .add_node(node.name.clone(), node.coord)
                .expect("names are unique in a built graph");
        }
        builder.contracted = self.contracted;
        builder
    }
}

/// Speed-limit based gain assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPolicy {
    pub threshold_kmh: f64,
    /// Used for edges without a speed limit tag.
    pub default_maxspeed_kmh: f64,
}

impl Default for GainPolicy {
    fn default() -> Self {
        GainPolicy {
            threshold_kmh: 30.0,
            default_maxspeed_kmh: 50.0,
        }
    }
}

impl GainPolicy {
    pub fn gain_for(&self, maxspeed_kmh: Option<f64>) -> f64 {
        let speed = maxspeed_kmh.unwrap_or(self.default_maxspeed_kmh);
        if speed < self.threshold_kmh {
            1.0
        } else {
            0.0
        }
    }
}

struct PendingEdge {
    src: NodeId,
    dst: NodeId,
    cost: f64,
    gain: f64,
    maxspeed_kmh: Option<f64>,
}

/// Incremental constructor for [`CostGainGraph`].
pub struct GraphBuilder {
    coord_mode: CoordMode,
    nodes: Vec<Node>,
    name_index: HashMap<String, NodeId>,
    edges: Vec<PendingEdge>,
    contracted: bool,
}

impl GraphBuilder {
    pub fn new(coord_mode: CoordMode) -> Self {
        GraphBuilder {
            coord_mode,
            nodes: Vec::new(),
            name_index: HashMap::new(),
            edges: Vec::new(),
            contracted: false,
        }
    }

    pub fn coord_mode(&self) -> CoordMode {
        self.coord_mode
    }

    pub fn add_node(
        &mut self,
        name: impl Into<String>,
        coord: Option<(f64, f64)>,
    ) -> Result<NodeId, BuildError> {
        let name = name.into();
        if self.name_index.contains_key(&name) {
            return Err(BuildError::DuplicateNode(name));
        }
        let id = NodeId(self.nodes.len() as u32);
        self.name_index.insert(name.clone(), id);
        self.nodes.push(Node { name, coord });
        Ok(id)
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.name_index.get(name).copied()
    }

    pub fn coord(&self, id: NodeId) -> Option<(f64, f64)> {
        self.nodes.get(id.index()).and_then(|n| n.coord)
    }

    pub fn add_edge(
        &mut self,
        src: NodeId,
        dst: NodeId,
        cost: f64,
        gain: f64,
        maxspeed_kmh: Option<f64>,
    ) -> Result<(), BuildError> {
        for node in [src, dst] {
            if node.index() >= self.nodes.len() {
                return Err(BuildError::UnknownNode(node));
            }
        }
        if !(cost.is_finite() && cost >= 0.0) {
            return Err(BuildError::NegativeCost(cost));
        }
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(BuildError::NegativeGain(gain));
        }
        self.edges.push(PendingEdge {
            src,
            dst,
            cost,
            gain,
            maxspeed_kmh,
        });
        Ok(())
    }

    /// Edge whose cost is derived from the endpoint coordinates. Returns
    /// `None` when either endpoint lacks coordinates or the mode has no metric.
    pub fn derived_cost(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        let (a, b) = (self.coord(src)?, self.coord(dst)?);
        self.coord_mode.distance(a, b)
    }

    pub fn build(self) -> CostGainGraph {
        let n = self.nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];

        // The i-th edge a->b and the i-th edge b->a form the i-th segment
        // between a and b. Self-loops are their own segment.
        let mut occurrences: HashMap<(NodeId, NodeId), u32> = HashMap::new();
        let mut segments: HashMap<(NodeId, NodeId, u32), SegmentId> = HashMap::new();
        let mut next_segment = 0u32;

        let edges = self
            .edges
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let id = EdgeId(i as u32);
                let occ = occurrences.entry((p.src, p.dst)).or_insert(0);
                let nth = *occ;
                *occ += 1;
                let segment = if p.src == p.dst {
                    let s = SegmentId(next_segment);
                    next_segment += 1;
                    s
                } else {
                    let (lo, hi) = (p.src.min(p.dst), p.src.max(p.dst));
                    *segments.entry((lo, hi, nth)).or_insert_with(|| {
                        let s = SegmentId(next_segment);
                        next_segment += 1;
                        s
                    })
                };
                out_adj[p.src.index()].push(id);
                in_adj[p.dst.index()].push(id);
                Edge {
                    id,
                    src: p.src,
                    dst: p.dst,
                    cost: p.cost,
                    gain: p.gain,
                    segment,
                    maxspeed_kmh: p.maxspeed_kmh,
                }
            })
            .collect();

        CostGainGraph {
            nodes: self.nodes,
            edges,
            out_adj,
            in_adj,
            coord_mode: self.coord_mode,
            name_index: self.name_index,
            contracted: self.contracted,
        }
    }

    pub(crate) fn set_contracted(&mut self, contracted: bool) {
        self.contracted = contracted;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_way(b: &mut GraphBuilder, x: NodeId, y: NodeId) {
        b.add_edge(x, y, 1.0, 1.0, None).unwrap();
        b.add_edge(y, x, 1.0, 2.0, None).unwrap();
    }

    #[test]
    fn adjacency_is_consistent() {
        let mut b = GraphBuilder::new(CoordMode::None);
        let a = b.add_node("a", None).unwrap();
        let c = b.add_node("c", None).unwrap();
        let d = b.add_node("d", None).unwrap();
        two_way(&mut b, a, c);
        two_way(&mut b, c, d);
        b.add_edge(d, a, 3.0, 0.0, Some(20.0)).unwrap();
        let g = b.build();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.num_edges(), 5);
        for e in g.edges() {
            assert_eq!(g.outlinks(e.src).filter(|x| x.id == e.id).count(), 1);
            assert_eq!(g.inlinks(e.dst).filter(|x| x.id == e.id).count(), 1);
        }
        let total_out: usize = g.nodes().map(|(v, _)| g.outlinks(v).len()).sum();
        let total_in: usize = g.nodes().map(|(v, _)| g.inlinks(v).len()).sum();
        assert_eq!(total_out, g.num_edges());
        assert_eq!(total_in, g.num_edges());
    }

    #[test]
    fn reverse_edges_share_segment_parallel_ones_do_not() {
        let mut b = GraphBuilder::new(CoordMode::None);
        let a = b.add_node("a", None).unwrap();
        let c = b.add_node("c", None).unwrap();
        b.add_edge(a, c, 1.0, 0.0, None).unwrap();
        b.add_edge(c, a, 2.0, 0.0, None).unwrap();
        b.add_edge(a, c, 5.0, 0.0, None).unwrap();
        b.add_edge(a, a, 1.0, 0.0, None).unwrap();
        b.add_edge(a, a, 1.0, 0.0, None).unwrap();
        let g = b.build();
        let seg: Vec<_> = g.edges().iter().map(|e| e.segment.0).collect();
        assert_eq!(seg[0], seg[1]);
        assert_ne!(seg[0], seg[2]);
        assert_ne!(seg[3], seg[4]);
    }

    #[test]
    fn rejects_negative_values() {
        let mut b = GraphBuilder::new(CoordMode::None);
        let a = b.add_node("a", None).unwrap();
        assert_eq!(
            b.add_edge(a, a, -1.0, 0.0, None),
            Err(BuildError::NegativeCost(-1.0))
        );
        assert_eq!(
            b.add_edge(a, a, 1.0, -0.5, None),
            Err(BuildError::NegativeGain(-0.5))
        );
        assert!(matches!(
            b.add_edge(a, a, f64::NAN, 0.0, None),
            Err(BuildError::NegativeCost(_))
        ));
        assert_eq!(
            b.add_edge(a, NodeId(7), 1.0, 0.0, None),
            Err(BuildError::UnknownNode(NodeId(7)))
        );
        assert_eq!(
            b.add_node("a", None),
            Err(BuildError::DuplicateNode("a".into()))
        );
    }

    #[test]
    fn gain_policy_is_strictly_below_threshold() {
        let p = GainPolicy::default();
        assert_eq!(p.gain_for(Some(20.0)), 1.0);
        assert_eq!(p.gain_for(Some(50.0)), 0.0);
        assert_eq!(p.gain_for(Some(30.0)), 0.0);
        assert_eq!(p.gain_for(None), 0.0);
        let zero = GainPolicy {
            threshold_kmh: 0.0,
            ..p
        };
        assert_eq!(zero.gain_for(Some(0.0)), 0.0);
        assert_eq!(zero.gain_for(Some(5.0)), 0.0);
    }

    #[test]
    fn assign_gain_policy_rewrites_every_edge() {
        let mut b = GraphBuilder::new(CoordMode::None);
        let a = b.add_node("a", None).unwrap();
        let c = b.add_node("c", None).unwrap();
        b.add_edge(a, c, 1.0, 7.0, Some(20.0)).unwrap();
        b.add_edge(c, a, 1.0, 7.0, Some(50.0)).unwrap();
        b.add_edge(c, a, 1.0, 7.0, None).unwrap();
        let g = b.build().assign_gain_policy(&GainPolicy {
            threshold_kmh: 30.0,
            default_maxspeed_kmh: 10.0,
        });
        let gains: Vec<f64> = g.edges().iter().map(|e| e.gain).collect();
        assert_eq!(gains, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn plane_and_geo_distances() {
        assert_eq!(CoordMode::Plane.distance((0.0, 0.0), (3.0, 4.0)), Some(5.0));
        assert_eq!(CoordMode::None.distance((0.0, 0.0), (3.0, 4.0)), None);
        // one degree of latitude is about 111.19 km on the mean sphere
        let d = CoordMode::Geo.distance((10.0, 47.0), (10.0, 48.0)).unwrap();
        assert!((d - 111_195.0).abs() < 5.0, "{d}");
    }
}
