//! Seeded synthetic graphs for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{CoordMode, CostGainGraph, GraphBuilder, NodeId};

/// Square grid with `side * side` nodes named `r<row>c<col>`, unit-cost
/// two-way segments, planar coordinates and gain 1 on a random fraction
/// `p_gain` of the segments (both directions), 0 elsewhere.
pub fn grid(side: usize, seed: u64, p_gain: f64) -> CostGainGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(CoordMode::Plane);
    for r in 0..side {
        for c in 0..side {
            b.add_node(format!("r{r}c{c}"), Some((c as f64, r as f64)))
                .expect("unique");
        }
    }
    let id = |r: usize, c: usize| NodeId((r * side + c) as u32);
    for r in 0..side {
        for c in 0..side {
            let mut link = |x: NodeId, y: NodeId| {
                let gain = if rng.gen_bool(p_gain) { 1.0 } else { 0.0 };
                b.add_edge(x, y, 1.0, gain, None).unwrap();
                b.add_edge(y, x, 1.0, gain, None).unwrap();
            };
            if c + 1 < side {
                link(id(r, c), id(r, c + 1));
            }
            if r + 1 < side {
                link(id(r, c), id(r + 1, c));
            }
        }
    }
    b.build()
}

/// Node closest to the middle of a [`grid`].
pub fn grid_center(side: usize) -> NodeId {
    NodeId(((side / 2) * side + side / 2) as u32)
}

/// Parameters of [`random_graph`].
#[derive(Debug, Clone)]
pub struct RandomGraphSpec {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Bound on distinct neighbours per node (= out-degree, edges are two-way).
    pub max_degree: usize,
    pub cost_range: (u32, u32),
    pub gain_range: (u32, u32),
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        RandomGraphSpec {
            min_nodes: 6,
            max_nodes: 12,
            max_degree: 4,
            cost_range: (1, 5),
            gain_range: (0, 3),
        }
    }
}

/// Connected random graph where every segment exists in both directions
/// with independently drawn integer cost and gain. Node `0` is a convenient
/// start. Nodes are named `n<i>`.
pub fn random_graph(spec: &RandomGraphSpec, seed: u64) -> CostGainGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(spec.min_nodes..=spec.max_nodes);
    let mut b = GraphBuilder::new(CoordMode::None);
    for i in 0..n {
        b.add_node(format!("n{i}"), None).expect("unique");
    }
    let mut degree = vec![0usize; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let has = |pairs: &[(usize, usize)], u: usize, v: usize| {
        pairs.iter().any(|&(a, c)| (a, c) == (u.min(v), u.max(v)))
    };

    // spanning tree first
    for v in 1..n {
        let candidates: Vec<usize> = (0..v).filter(|&u| degree[u] < spec.max_degree).collect();
        let u = *candidates
            .choose(&mut rng)
            .expect("a chain always has room");
        pairs.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra * 3 {
        if pairs.len() >= (n - 1) + extra {
            break;
        }
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v
            || degree[u] >= spec.max_degree
            || degree[v] >= spec.max_degree
            || has(&pairs, u, v)
        {
            continue;
        }
        pairs.push((u.min(v), u.max(v)));
        degree[u] += 1;
        degree[v] += 1;
    }

    let (cmin, cmax) = spec.cost_range;
    let (gmin, gmax) = spec.gain_range;
    for (u, v) in pairs {
        for (x, y) in [(u, v), (v, u)] {
            let cost = rng.gen_range(cmin..=cmax) as f64;
            let gain = rng.gen_range(gmin..=gmax) as f64;
            b.add_edge(NodeId(x as u32), NodeId(y as u32), cost, gain, None)
                .unwrap();
        }
    }
    b.build()
}

/// Orientation of the chains added by [`inject_chains`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainStyle {
    /// Both directions on every chain segment.
    TwoWay,
    /// A single direction along the chain.
    OneWay,
}

/// Adds `count` chains of `1..=max_len` fresh intermediate nodes between
/// random pairs of existing nodes. Chain nodes are named `m<i>`; attributes
/// are drawn from `spec`'s ranges.
pub fn inject_chains(
    graph: &CostGainGraph,
    spec: &RandomGraphSpec,
    count: usize,
    max_len: usize,
    style: ChainStyle,
    seed: u64,
) -> CostGainGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = graph.to_builder();
    for e in graph.edges() {
        b.add_edge(e.src, e.dst, e.cost, e.gain, e.maxspeed_kmh)
            .unwrap();
    }
    let n = graph.num_nodes();
    let (cmin, cmax) = spec.cost_range;
    let (gmin, gmax) = spec.gain_range;
    let mut next = 0usize;
    for _ in 0..count {
        let u = NodeId(rng.gen_range(0..n) as u32);
        let w = NodeId(rng.gen_range(0..n) as u32);
        let len = rng.gen_range(1..=max_len);
        let mut path = vec![u];
        for _ in 0..len {
            path.push(b.add_node(format!("m{next}"), None).unwrap());
            next += 1;
        }
        path.push(w);
        for pair in path.windows(2) {
            let mut add = |x: NodeId, y: NodeId| {
                let cost = rng.gen_range(cmin..=cmax) as f64;
                let gain = rng.gen_range(gmin..=gmax) as f64;
                b.add_edge(x, y, cost, gain, None).unwrap();
            };
            add(pair[0], pair[1]);
            if style == ChainStyle::TwoWay {
                add(pair[1], pair[0]);
            }
        }
    }
    b.build()
}
