//! Maximum gain round trip queries on cost-gain networks.
//!
//! Given a start node `s` and a cost budget `tau`, a query returns the Pareto
//! front of round trips at `s`: for every achievable cost level up to `tau`,
//! one round trip of maximum gain. Two exact strategies are provided,
//! [`run_uni`] and [`run_bidi`], both with optional redundancy control (each
//! segment used at most `k` times, each edge's gain counted once). [`oracle`]
//! holds an exhaustive reference used to validate them.
//!
//! ```
//! use mgrq::{fixtures, run_bidi, Query};
//!
//! let graph = fixtures::triangle();
//! let start = graph.node_id("a").unwrap();
//! let result = run_bidi(&graph, &Query::plain(start, 3.0)).unwrap();
//! assert_eq!(result.labels(), vec![(2.0, 4.0), (3.0, 6.0)]);
//! ```

pub mod bidi;
pub mod contract;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod pareto;
pub mod query;
pub mod uni;
pub mod way;

pub use bidi::{join_pair, midpoint_split, run_bidi};
pub use contract::contract_degree2;
pub use format::{load_graph, parse_graph, save_graph, write_graph, LoadError};
pub use graph::{
    CoordMode, CostGainGraph, Edge, EdgeId, GainPolicy, GraphBuilder, NodeId, SegmentId,
};
pub use oracle::{oracle_front, OracleError};
pub use pareto::{dominates_plain, dominates_rc, Dominance, Label, ParetoSet, UpdateOutcome};
pub use query::{FrontEntry, Query, QueryError, QueryResult, SearchMode, Stats};
pub use uni::run_uni;
pub use way::{GainMode, RcConfig, RoundTrip, Way, WayError};
