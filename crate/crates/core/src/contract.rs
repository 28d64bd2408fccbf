//! Degree-2 chain contraction.
//!
//! A node `m` is removed when it has exactly two incident segments leading to
//! two distinct neighbours `u` and `w`, carries no self-loop, is not in the
//! keep set, and its edges are either fully two-way (`u<->m<->w`, one edge per
//! direction) or uniformly one-way (`u->m->w`). Each pass-through direction is
//! replaced by a single edge with summed cost and summed gain.
//!
//! Contraction preserves every way that passes *through* a chain. It removes
//! ways that turn around inside a two-way chain, and it merges the segment
//! multiplicities that redundancy control depends on. The result is flagged
//! with [`CostGainGraph::is_contracted`].

use std::collections::HashSet;

use crate::graph::{CostGainGraph, NodeId};

#[derive(Debug, Clone)]
struct WorkEdge {
    src: NodeId,
    dst: NodeId,
    cost: f64,
    gain: f64,
    maxspeed_kmh: Option<f64>,
    alive: bool,
}

fn merge(first: &WorkEdge, second: &WorkEdge) -> WorkEdge {
    WorkEdge {
        src: first.src,
        dst: second.dst,
        cost: first.cost + second.cost,
        gain: first.gain + second.gain,
        maxspeed_kmh: match (first.maxspeed_kmh, second.maxspeed_kmh) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        },
        alive: true,
    }
}

/// Removes contractible degree-2 nodes. Nodes in `keep` always survive;
/// surviving nodes keep their names but are renumbered densely.
pub fn contract_degree2(graph: &CostGainGraph, keep: &HashSet<NodeId>) -> CostGainGraph {
    let n = graph.num_nodes();
    let mut edges: Vec<WorkEdge> = graph
        .edges()
        .iter()
        .map(|e| WorkEdge {
            src: e.src,
            dst: e.dst,
            cost: e.cost,
            gain: e.gain,
            maxspeed_kmh: e.maxspeed_kmh,
            alive: true,
        })
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        incident[e.src.index()].push(i);
        if e.dst != e.src {
            incident[e.dst.index()].push(i);
        }
    }

    let mut removed = vec![false; n];
    let mut changed = false;
    for m in (0..n).map(|i| NodeId(i as u32)) {
        if keep.contains(&m) {
            continue;
        }
        let live: Vec<usize> = incident[m.index()]
            .iter()
            .copied()
            .filter(|&i| edges[i].alive)
            .collect();
        let Some(replacements) = chain_replacements(m, &live, &edges) else {
            continue;
        };
        for &i in &live {
            edges[i].alive = false;
        }
        for (a, b) in replacements {
            let merged = merge(&edges[a], &edges[b]);
            let idx = edges.len();
            incident[merged.src.index()].push(idx);
            incident[merged.dst.index()].push(idx);
            edges.push(merged);
        }
        removed[m.index()] = true;
        changed = true;
    }

    if !changed {
        return graph.clone();
    }

    let mut builder = crate::graph::GraphBuilder::new(graph.coord_mode());
    let mut remap = vec![None; n];
    for (id, node) in graph.nodes() {
        if !removed[id.index()] {
            remap[id.index()] = Some(
                builder
                    .add_node(node.name.clone(), node.coord)
                    .expect("unique names"),
            );
        }
    }
    for e in edges.iter().filter(|e| e.alive) {
        let (src, dst) = (remap[e.src.index()].unwrap(), remap[e.dst.index()].unwrap());
        builder
            .add_edge(src, dst, e.cost, e.gain, e.maxspeed_kmh)
            .expect("sums of valid values stay valid");
    }
    let mut out = builder.build();
    out.mark_contracted();
    out
}

/// Returns the (inbound, outbound) edge pairs that replace `m`, or `None` if
/// `m` must be retained.
fn chain_replacements(
    m: NodeId,
    live: &[usize],
    edges: &[WorkEdge],
) -> Option<Vec<(usize, usize)>> {
    if live.iter().any(|&i| edges[i].src == edges[i].dst) {
        return None;
    }
    let other = |i: usize| {
        let e = &edges[i];
        if e.src == m {
            e.dst
        } else {
            e.src
        }
    };
    let mut neighbours: Vec<NodeId> = live.iter().map(|&i| other(i)).collect();
    neighbours.sort();
    neighbours.dedup();
    let [u, w] = neighbours[..] else {
        return None;
    };
    let find = |src: NodeId, dst: NodeId| -> Vec<usize> {
        live.iter()
            .copied()
            .filter(|&i| edges[i].src == src && edges[i].dst == dst)
            .collect()
    };
    let (u_in, u_out) = (find(u, m), find(m, u));
    let (w_in, w_out) = (find(w, m), find(m, w));
    let counts = (u_in.len(), u_out.len(), w_in.len(), w_out.len());
    match counts {
        (1, 1, 1, 1) => Some(vec![(u_in[0], w_out[0]), (w_in[0], u_out[0])]),
        (1, 0, 0, 1) => Some(vec![(u_in[0], w_out[0])]),
        (0, 1, 1, 0) => Some(vec![(w_in[0], u_out[0])]),
        _ => None,
    }
}
