//! Exhaustive reference search for small instances.
//!
//! Enumerates every way from the start node within the budget (and within
//! the redundancy limit when one applies), then reduces the round trips to
//! their Pareto front with a sort-and-sweep. Nothing here uses the skyline
//! container or any domination pruning, so it cannot share their bugs.

use thiserror::Error;

use crate::graph::{CostGainGraph, NodeId};
use crate::query::{FrontEntry, Query, QueryError, QueryResult, Stats};
use crate::way::{GainMode, RoundTrip, Way};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("instance too large: more than {0} ways within budget")]
    BudgetExceeded(usize),
}

/// Calls `visit` on every non-empty way from `start` with cost at most `tau`
/// and, if `k` is given, no segment traversed more than `k` times. Ways are
/// produced in depth-first order following adjacency order. Returns the
/// number of ways visited.
pub fn enumerate_ways(
    graph: &CostGainGraph,
    start: NodeId,
    tau: f64,
    k: Option<u32>,
    budget: usize,
    mut visit: impl FnMut(&Way),
) -> Result<usize, OracleError> {
    fn descend(
        graph: &CostGainGraph,
        way: &Way,
        tau: f64,
        k: Option<u32>,
        budget: usize,
        count: &mut usize,
        visit: &mut dyn FnMut(&Way),
    ) -> Result<(), OracleError> {
        for edge in graph.outlinks(way.end()) {
            if way.cost() + edge.cost > tau {
                continue;
            }
            if k.is_some_and(|k| way.multiplicity_of(edge.segment) >= k) {
                continue;
            }
            *count += 1;
            if *count > budget {
                return Err(OracleError::BudgetExceeded(budget));
            }
            let next = way.extend(edge).expect("outlink of the end node");
            visit(&next);
            descend(graph, &next, tau, k, budget, count, visit)?;
        }
        Ok(())
    }

    let mut count = 0;
    descend(
        graph,
        &Way::empty(start),
        tau,
        k,
        budget,
        &mut count,
        &mut visit,
    )?;
    Ok(count)
}

/// Every round trip at `query.start` admissible under the query.
pub fn round_trips(
    graph: &CostGainGraph,
    query: &Query,
    budget: usize,
) -> Result<Vec<Way>, OracleError> {
    query.validate(graph)?;
    let mut trips = Vec::new();
    let start = query.start;
    enumerate_ways(graph, start, query.tau, query.mode.k(), budget, |w| {
        if w.end() == start {
            trips.push(w.clone());
        }
    })?;
    Ok(trips)
}

/// Reduces `(cost, gain, item)` triples to a Pareto front: cost ascending,
/// gain strictly ascending, first occurrence wins among equal labels.
pub fn sweep_front<T>(mut points: Vec<(f64, f64, T)>) -> Vec<(f64, f64, T)> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let mut best = f64::NEG_INFINITY;
    points
        .into_iter()
        .filter(|&(_, gain, _)| {
            let keep = gain > best;
            if keep {
                best = gain;
            }
            keep
        })
        .collect()
}

/// Exact front by exhaustive enumeration. `budget` caps the number of ways
/// enumerated; exceeding it is an error, never a partial answer.
pub fn oracle_front(
    graph: &CostGainGraph,
    query: &Query,
    budget: usize,
) -> Result<QueryResult, OracleError> {
    query.validate(graph)?;
    let gain_mode: GainMode = query.mode.gain_mode();
    let start = query.start;
    let mut points = Vec::new();
    let enumerated = enumerate_ways(graph, start, query.tau, query.mode.k(), budget, |w| {
        if w.end() == start {
            points.push((w.cost(), w.gain(gain_mode), w.clone()));
        }
    })?;
    // shortest, then lexicographically smallest edge sequence among equal labels
    points.sort_by(|a, b| (a.2.len(), a.2.edges()).cmp(&(b.2.len(), b.2.edges())));
    let front = sweep_front(points)
        .into_iter()
        .map(|(cost, gain, way)| FrontEntry {
            cost,
            gain,
            trip: RoundTrip::try_from(way).expect("non-empty way back at the start"),
        })
        .collect();
    Ok(QueryResult {
        front,
        stats: Stats {
            ways_expanded: enumerated,
            ..Stats::default()
        },
    })
}
