//! Query parameters, results and the gain-ordered node queue shared by both
//! search strategies.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use thiserror::Error;

use crate::graph::{CostGainGraph, NodeId};
use crate::pareto::{Dominance, Label};
use crate::way::{GainMode, RcConfig, RoundTrip};

/// Plain round trips or round trips under redundancy control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Plain,
    Rc(RcConfig),
}

impl SearchMode {
    pub fn gain_mode(self) -> GainMode {
        match self {
            SearchMode::Plain => GainMode::Plain,
            SearchMode::Rc(_) => GainMode::Rc,
        }
    }

    /// Relation used inside node-tab entries.
    pub(crate) fn table_dominance(self) -> Dominance {
        match self {
            SearchMode::Plain => Dominance::Plain,
            SearchMode::Rc(rc) if rc.dominance_pruning => Dominance::EdgeSubset,
            SearchMode::Rc(_) => Dominance::Off,
        }
    }

    pub(crate) fn k(self) -> Option<u32> {
        match self {
            SearchMode::Plain => None,
            SearchMode::Rc(rc) => Some(rc.k()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub start: NodeId,
    pub tau: f64,
    pub mode: SearchMode,
    /// Searches give up with [`QueryError::TimedOut`] once this passes.
    pub deadline: Option<Instant>,
}

impl Query {
    pub fn plain(start: NodeId, tau: f64) -> Self {
        Query {
            start,
            tau,
            mode: SearchMode::Plain,
            deadline: None,
        }
    }

    pub fn rc(start: NodeId, tau: f64, rc: RcConfig) -> Self {
        Query {
            start,
            tau,
            mode: SearchMode::Rc(rc),
            deadline: None,
        }
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub(crate) fn validate(&self, graph: &CostGainGraph) -> Result<(), QueryError> {
        if !graph.contains(self.start) {
            return Err(QueryError::UnknownStart(self.start));
        }
        if self.tau <= 0.0 || !self.tau.is_finite() {
            return Err(QueryError::InvalidBudget(self.tau));
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self) -> Result<(), QueryError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(QueryError::TimedOut),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("start node {0} is not in the graph")]
    UnknownStart(NodeId),
    #[error("cost budget must be a positive finite number, got {0}")]
    InvalidBudget(f64),
    #[error("query exceeded its deadline")]
    TimedOut,
}

/// Search effort counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Distinct nodes that received a node-tab entry.
    pub nodes_visited: usize,
    /// Ways taken from the node tab and extended by their links.
    pub ways_expanded: usize,
    /// Candidates discarded by the budget, redundancy control, domination or
    /// duplicate detection.
    pub ways_pruned: usize,
    /// Start/return way pairs examined while joining (bidirectional only).
    pub joins: usize,
}

/// One point of the front with a witness trip.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontEntry {
    pub cost: f64,
    pub gain: f64,
    pub trip: RoundTrip,
}

impl FrontEntry {
    pub fn label(&self) -> Label {
        Label::new(self.cost, self.gain)
    }
}

/// Pareto front of round trips, cost ascending and gain strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub front: Vec<FrontEntry>,
    pub stats: Stats,
}

impl QueryResult {
    pub fn labels(&self) -> Vec<(f64, f64)> {
        self.front.iter().map(|e| (e.cost, e.gain)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueEntry {
    priority: f64,
    node: NodeId,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Max-gain-first node queue with lazy deletion: a node is pushed again each
/// time its priority changes and the consumer discards entries whose priority
/// no longer matches. Ties pop the smaller node id first.
#[derive(Debug, Default)]
pub struct GainQueue {
    heap: BinaryHeap<QueueEntry>,
}

impl GainQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: NodeId, priority: f64) {
        self.heap.push(QueueEntry { priority, node });
    }

    pub fn pop(&mut self) -> Option<(NodeId, f64)> {
        self.heap.pop().map(|e| (e.node, e.priority))
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }
}
