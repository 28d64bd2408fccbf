//! Bidirectional search.
//!
//! Start ways grow forward from the start node `s` and return ways grow
//! backwards into `s`, both only to about half the budget. Every round trip
//! `r` with `cost(r) <= tau` splits as `r = w1 + w2` where the prefix of `w1`
//! before its last edge costs at most `tau / 2` and `w2` costs at most
//! `tau / 2` (see [`midpoint_split`]), so joining the two sides per meeting
//! node recovers the full front.
//!
//! Start ways are extended only while their cost is at most `tau / 2`; the
//! candidates they produce are kept even when they cross `tau / 2` (the
//! one-hop frontier) but never beyond `tau`. Return ways are admitted only up
//! to `tau / 2`. A split whose return part is empty (the trip's last edge
//! alone costs more than `tau / 2`) is covered by treating start ways that
//! already end at `s` as complete trips.

use crate::graph::{CostGainGraph, NodeId};
use crate::pareto::{Dominance, Label, ParetoSet, UpdateOutcome};
use crate::query::{FrontEntry, GainQueue, Query, QueryError, QueryResult, SearchMode, Stats};
use crate::uni::{admissible_extension, DEADLINE_CHECK_INTERVAL};
use crate::way::{RoundTrip, Way, WayError};

#[derive(Debug)]
pub struct BidiEntry {
    /// Ways `s -> v`.
    pub start_set: ParetoSet<Way>,
    /// Ways `v -> s`.
    pub return_set: ParetoSet<Way>,
}

impl BidiEntry {
    fn max_unprocessed_gain(&self) -> Option<f64> {
        match (
            self.start_set.max_unprocessed_gain(),
            self.return_set.max_unprocessed_gain(),
        ) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Node tab holding start and return skylines per node.
#[derive(Debug)]
pub struct BidiNodeTable {
    dominance: Dominance,
    entries: Vec<Option<BidiEntry>>,
    visited: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Start,
    Return,
}

impl BidiNodeTable {
    pub fn new(num_nodes: usize, dominance: Dominance) -> Self {
        BidiNodeTable {
            dominance,
            entries: (0..num_nodes).map(|_| None).collect(),
            visited: 0,
        }
    }

    pub fn entry(&self, node: NodeId) -> Option<&BidiEntry> {
        self.entries[node.index()].as_ref()
    }

    pub fn visited(&self) -> usize {
        self.visited
    }

    fn slot(&mut self, node: NodeId) -> &mut BidiEntry {
        let slot = &mut self.entries[node.index()];
        if slot.is_none() {
            *slot = Some(BidiEntry {
                start_set: ParetoSet::new(self.dominance),
                return_set: ParetoSet::new(self.dominance),
            });
            self.visited += 1;
        }
        slot.as_mut().unwrap()
    }

    fn update(&mut self, side: Side, label: Label, way: Way) -> UpdateOutcome {
        match side {
            Side::Start => self.slot(way.end()).start_set.update(label, way),
            Side::Return => self.slot(way.start()).return_set.update(label, way),
        }
    }
}

/// Joins a start way `s -> v` with a return way `v -> s`.
///
/// Returns `Ok(None)` when the trip exceeds `tau` or, under redundancy
/// control, traverses some segment more than `k` times. The joined gain is
/// recomputed over the concatenation, so edges on both sides count once in
/// redundancy-control mode.
pub fn join_pair(
    graph: &CostGainGraph,
    start_way: &Way,
    return_way: &Way,
    tau: f64,
    mode: SearchMode,
) -> Result<Option<Way>, WayError> {
    if start_way.cost() + return_way.cost() > tau {
        if return_way.start() != start_way.end() {
            return Err(endpoint_mismatch(start_way, return_way));
        }
        return Ok(None);
    }
    let trip = start_way
        .concat(graph, return_way)
        .map_err(|_| endpoint_mismatch(start_way, return_way))?;
    if let SearchMode::Rc(rc) = mode {
        if !trip.respects_rc(rc.k()) {
            return Ok(None);
        }
    }
    Ok(Some(trip))
}

fn endpoint_mismatch(start_way: &Way, return_way: &Way) -> WayError {
    WayError::NonIncident {
        edge: return_way
            .edges()
            .first()
            .copied()
            .unwrap_or(crate::graph::EdgeId(u32::MAX)),
        at: start_way.end(),
    }
}

/// Splits a round trip into `(w1, w2)` with `cost(w1 minus its last edge)
/// <= tau / 2` and `cost(w2) <= tau / 2`; `w2` may be empty. The split point
/// is the earliest one whose suffix fits into half the budget.
pub fn midpoint_split(graph: &CostGainGraph, trip: &Way, tau: f64) -> Option<(Way, Way)> {
    let half = tau / 2.0;
    let edges = trip.edges();
    if edges.is_empty() || trip.cost() > tau {
        return None;
    }
    let mut suffix = 0.0;
    let mut cut = edges.len();
    for i in (1..edges.len()).rev() {
        let c = suffix + graph.edge(edges[i]).cost;
        if c > half {
            break;
        }
        suffix = c;
        cut = i;
    }
    let w1 = Way::from_edges(graph, trip.start(), &edges[..cut]).ok()?;
    let w2 = Way::from_edges(graph, w1.end(), &edges[cut..]).ok()?;
    let prefix = w1.cost() - graph.edge(edges[cut - 1]).cost;
    (prefix <= half && w2.cost() <= half).then_some((w1, w2))
}

struct BidiSearch<'g> {
    graph: &'g CostGainGraph,
    query: &'g Query,
    table: BidiNodeTable,
    queue: GainQueue,
    stats: Stats,
}

impl<'g> BidiSearch<'g> {
    fn half(&self) -> f64 {
        self.query.tau / 2.0
    }

    fn offer(&mut self, side: Side, way: Way) {
        let label = Label::from(way.label(self.query.mode.gain_mode()));
        let node = match side {
            Side::Start => way.end(),
            Side::Return => way.start(),
        };
        match self.table.update(side, label, way) {
            UpdateOutcome::Inserted { evicted } => {
                self.stats.ways_pruned += evicted;
                let entry = self.table.entry(node).expect("just inserted");
                if let Some(priority) = entry.max_unprocessed_gain() {
                    self.queue.push(node, priority);
                }
            }
            UpdateOutcome::RejectedDominated | UpdateOutcome::RejectedDuplicate => {
                self.stats.ways_pruned += 1;
            }
        }
    }

    fn extend_start(&mut self, way: &Way, node: NodeId) {
        let (graph, tau, mode) = (self.graph, self.query.tau, self.query.mode);
        for edge in graph.outlinks(node) {
            if admissible_extension(way, edge, tau, mode) {
                self.offer(Side::Start, way.extend(edge).expect("outlink"));
            } else {
                self.stats.ways_pruned += 1;
            }
        }
    }

    fn extend_return(&mut self, way: &Way, node: NodeId) {
        let (graph, half, mode) = (self.graph, self.half(), self.query.mode);
        for edge in graph.inlinks(node) {
            if admissible_extension(way, edge, half, mode) {
                self.offer(Side::Return, way.prepend(edge).expect("inlink"));
            } else {
                self.stats.ways_pruned += 1;
            }
        }
    }

    fn run(mut self) -> Result<QueryResult, QueryError> {
        let s = self.query.start;
        let half = self.half();
        self.extend_start(&Way::empty(s), s);
        self.extend_return(&Way::empty(s), s);

        let mut iterations = 0usize;
        while let Some((node, priority)) = self.queue.pop() {
            iterations += 1;
            if iterations.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
                self.query.check_deadline()?;
            }
            let Some(entry) = self.table.entries[node.index()].as_mut() else {
                continue;
            };
            if entry.max_unprocessed_gain() != Some(priority) {
                continue;
            }
            let forward = entry.start_set.take_unprocessed();
            let backward = entry.return_set.take_unprocessed();
            for way in forward.iter().filter(|w| w.cost() <= half) {
                self.stats.ways_expanded += 1;
                self.extend_start(way, node);
            }
            for way in &backward {
                self.stats.ways_expanded += 1;
                self.extend_return(way, node);
            }
        }
        self.stats.nodes_visited = self.table.visited();
        let front = self.join()?;
        Ok(QueryResult {
            front,
            stats: self.stats,
        })
    }

    fn join(&mut self) -> Result<Vec<FrontEntry>, QueryError> {
        let (graph, query) = (self.graph, self.query);
        let gain_mode = query.mode.gain_mode();
        let mut result: ParetoSet<Way> = ParetoSet::new(Dominance::Plain);
        let mut offer = |trip: Way| {
            let label = Label::from(trip.label(gain_mode));
            result.update(label, trip);
        };
        let mut pairs = 0usize;
        for (i, entry) in self.table.entries.iter().enumerate() {
            let Some(entry) = entry else { continue };
            if i == query.start.index() {
                // start ways that are already round trips: empty return part
                for (_, way) in entry.start_set.iter() {
                    offer(way.clone());
                }
            }
            for (_, start_way) in entry.start_set.iter() {
                for (_, return_way) in entry.return_set.iter() {
                    pairs += 1;
                    if pairs.is_multiple_of(DEADLINE_CHECK_INTERVAL * 16) {
                        query.check_deadline()?;
                    }
                    let joined = join_pair(graph, start_way, return_way, query.tau, query.mode)
                        .expect("both ways meet at this node");
                    if let Some(trip) = joined {
                        offer(trip);
                    }
                }
            }
        }
        self.stats.joins = pairs;
        Ok(result
            .into_items()
            .map(|(label, way)| FrontEntry {
                cost: label.cost,
                gain: label.gain,
                trip: RoundTrip::try_from(way).expect("joined ways return to the start"),
            })
            .collect())
    }
}

/// Exact Pareto front of round trips, computed bidirectionally. Produces the
/// same `(cost, gain)` front as [`crate::uni::run_uni`].
pub fn run_bidi(graph: &CostGainGraph, query: &Query) -> Result<QueryResult, QueryError> {
    query.validate(graph)?;
    BidiSearch {
        graph,
        query,
        table: BidiNodeTable::new(graph.num_nodes(), query.mode.table_dominance()),
        queue: GainQueue::new(),
        stats: Stats::default(),
    }
    .run()
}
