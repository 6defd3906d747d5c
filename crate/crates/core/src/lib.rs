//! Outcome solvers for VertexNim and Stockman VertexNim.
//!
//! A position is a vertex-weighted graph with a token on one vertex. The
//! [`solver`] decides the outcome with polynomial labeling rules where they
//! apply; the [`oracle`] searches the game tree for everything else and to
//! cross-check the rules.

pub mod check;
pub mod enumerate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod rules;
pub mod solver;

pub use graph::{GameGraph, GraphError, Orientation, VertexId};
pub use instance::{parse_instance, serialize, ParseError};
pub use oracle::{Budget, Oracle, OracleError};
pub use rules::{Convention, Destination, Move, Player, Position, Ruleset, RulesError};
pub use solver::{Method, Outcome, SolveError, SolveReport, Solver, SolverConfig};
