//! Unidirectional search: grows every undominated way from the start node
//! until the budget is exhausted, then reads the round trips off the start
//! node's own entry.

use crate::graph::{CostGainGraph, Edge, NodeId};
use crate::pareto::{Dominance, Label, ParetoSet, UpdateOutcome};
use crate::query::{FrontEntry, GainQueue, Query, QueryError, QueryResult, SearchMode, Stats};
use crate::way::{RoundTrip, Way};

/// Per-node skylines of ways from the start node.
#[derive(Debug)]
pub struct NodeTable {
    dominance: Dominance,
    entries: Vec<Option<ParetoSet<Way>>>,
    visited: usize,
}

impl NodeTable {
    pub fn new(num_nodes: usize, dominance: Dominance) -> Self {
        NodeTable {
            dominance,
            entries: (0..num_nodes).map(|_| None).collect(),
            visited: 0,
        }
    }

    pub fn entry(&self, node: NodeId) -> Option<&ParetoSet<Way>> {
        self.entries[node.index()].as_ref()
    }

    pub(crate) fn entry_mut(&mut self, node: NodeId) -> Option<&mut ParetoSet<Way>> {
        self.entries[node.index()].as_mut()
    }

    /// Offers `way` to the entry of its end node.
    pub fn update(&mut self, label: Label, way: Way) -> UpdateOutcome {
        let slot = &mut self.entries[way.end().index()];
        if slot.is_none() {
            *slot = Some(ParetoSet::new(self.dominance));
            self.visited += 1;
        }
        slot.as_mut().unwrap().update(label, way)
    }

    /// Number of nodes that have an entry.
    pub fn visited(&self) -> usize {
        self.visited
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &ParetoSet<Way>)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (NodeId(i as u32), e)))
    }
}

/// Cheap pre-check before materializing `way + edge`.
pub(crate) fn admissible_extension(way: &Way, edge: &Edge, budget: f64, mode: SearchMode) -> bool {
    if way.cost() + edge.cost > budget {
        return false;
    }
    match mode.k() {
        Some(k) => way.multiplicity_of(edge.segment) < k,
        None => true,
    }
}

pub(crate) const DEADLINE_CHECK_INTERVAL: usize = 256;

struct UniSearch<'g> {
    graph: &'g CostGainGraph,
    query: &'g Query,
    table: NodeTable,
    queue: GainQueue,
    stats: Stats,
}

impl<'g> UniSearch<'g> {
    fn offer(&mut self, way: Way) {
        let label = Label::from(way.label(self.query.mode.gain_mode()));
        let end = way.end();
        match self.table.update(label, way) {
            UpdateOutcome::Inserted { evicted } => {
                self.stats.ways_pruned += evicted;
                let entry = self.table.entry(end).expect("just inserted");
                if let Some(priority) = entry.max_unprocessed_gain() {
                    self.queue.push(end, priority);
                }
            }
            UpdateOutcome::RejectedDominated | UpdateOutcome::RejectedDuplicate => {
                self.stats.ways_pruned += 1;
            }
        }
    }

    fn extend_all(&mut self, way: &Way, node: NodeId) {
        let (graph, tau, mode) = (self.graph, self.query.tau, self.query.mode);
        for edge in graph.outlinks(node) {
            if admissible_extension(way, edge, tau, mode) {
                let candidate = way.extend(edge).expect("outlink of the way's end");
                self.offer(candidate);
            } else {
                self.stats.ways_pruned += 1;
            }
        }
    }

    fn run(mut self) -> Result<QueryResult, QueryError> {
        let start = self.query.start;
        self.extend_all(&Way::empty(start), start);

        let mut iterations = 0usize;
        while let Some((node, priority)) = self.queue.pop() {
            iterations += 1;
            if iterations.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
                self.query.check_deadline()?;
            }
            let entry = self
                .table
                .entry_mut(node)
                .expect("queued nodes have entries");
            if entry.max_unprocessed_gain() != Some(priority) {
                continue;
            }
            for way in entry.take_unprocessed() {
                self.stats.ways_expanded += 1;
                self.extend_all(&way, node);
            }
        }

        self.stats.nodes_visited = self.table.visited();
        let front = match self.table.entries[start.index()].take() {
            None => Vec::new(),
            Some(entry) => collect_front(entry, self.query.mode),
        };
        Ok(QueryResult {
            front,
            stats: self.stats,
        })
    }
}

/// Turns the start node's entry into the result front. Under redundancy
/// control the entry is not a plain skyline, so it is filtered first.
fn collect_front(entry: ParetoSet<Way>, mode: SearchMode) -> Vec<FrontEntry> {
    let skyline = match mode {
        SearchMode::Plain => entry,
        SearchMode::Rc(_) => {
            let mut result = ParetoSet::new(Dominance::Plain);
            for (label, way) in entry.into_items() {
                result.update(label, way);
            }
            result
        }
    };
    skyline
        .into_items()
        .map(|(label, way)| FrontEntry {
            cost: label.cost,
            gain: label.gain,
            trip: RoundTrip::try_from(way).expect("ways ending at the start are round trips"),
        })
        .collect()
}

/// Exact Pareto front of round trips at `query.start` with cost at most
/// `query.tau`.
pub fn run_uni(graph: &CostGainGraph, query: &Query) -> Result<QueryResult, QueryError> {
    query.validate(graph)?;
    UniSearch {
        graph,
        query,
        table: NodeTable::new(graph.num_nodes(), query.mode.table_dominance()),
        queue: GainQueue::new(),
        stats: Stats::default(),
    }
    .run()
}
