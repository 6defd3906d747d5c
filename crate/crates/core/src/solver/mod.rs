//! Polynomial-time outcome computation and winning-move extraction.
//!
//! [`route`] dispatches a position to the closed-form rule that covers it.
//! [`Solver`] adds the oracle fallback for small uncovered positions and
//! searches for witness moves.

mod labeling;
mod theorems;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Orientation;
use crate::oracle::{Budget, Oracle, OracleError};
use crate::rules::{Convention, Move, Position, Ruleset, RulesError, TerminalStatus};

pub use labeling::{lo_labeling, lo_labeling_with, lu_labeling, LabelStep, Labeling};
pub use theorems::{
    circuit_weights, solve_adjacent_nim, solve_directed_all_loops, solve_misere, solve_stockman_circuit,
    solve_stockman_undirected, solve_undirected, solve_undirected_all_loops,
};

/// P: the player to move loses with optimal play. N: the player to move wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    P,
    N,
}

impl Outcome {
    /// `N` when `mover_wins`.
    pub fn from_bool(mover_wins: bool) -> Outcome {
        if mover_wins {
            Outcome::N
        } else {
            Outcome::P
        }
    }

    pub fn flip(self) -> Outcome {
        match self {
            Outcome::P => Outcome::N,
            Outcome::N => Outcome::P,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// Which rule produced an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Terminal,
    CircuitFormula,
    DirectedAllLoops,
    UndirectedAllLoops,
    UndirectedGeneral,
    StockmanUndirected,
    StockmanCircuit,
    MisereReduction,
    OracleFallback,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Terminal => "terminal",
            Method::CircuitFormula => "circuit-formula",
            Method::DirectedAllLoops => "directed-all-loops",
            Method::UndirectedAllLoops => "undirected-all-loops",
            Method::UndirectedGeneral => "undirected-general",
            Method::StockmanUndirected => "stockman-undirected",
            Method::StockmanCircuit => "stockman-circuit",
            Method::MisereReduction => "misere-reduction",
            Method::OracleFallback => "oracle-fallback",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub method: Method,
    /// Present exactly when the outcome is N on a nonterminal position.
    pub witness: Option<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the covered instances: {0}")]
    OutOfScope(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("open problem: {0}")]
    OpenProblem(String),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

/// Closed-form dispatch without any search. Positions no rule covers come
/// back as [`SolveError::OpenProblem`].
pub fn route(pos: &Position) -> Result<(Outcome, Method), SolveError> {
    match pos.terminal_status() {
        TerminalStatus::PreviousMoverWins => return Ok((Outcome::P, Method::Terminal)),
        TerminalStatus::MoverToActWins => return Ok((Outcome::N, Method::Terminal)),
        TerminalStatus::Nonterminal => {}
    }
    let g = pos.graph();
    let u = pos.current().expect("nonterminal position has a current vertex");
    match (pos.ruleset(), g.orientation()) {
        (Ruleset::Stockman, Orientation::Undirected) => {
            if g.validate_playable().is_err() {
                return Err(SolveError::OpenProblem("stockman play on a disconnected graph".into()));
            }
            Ok((theorems::stockman_undirected_outcome(g, u), Method::StockmanUndirected))
        }
        (Ruleset::Stockman, Orientation::Directed) => match circuit_weights(g, u) {
            Some(ws) if !ws.contains(&0) => Ok((solve_stockman_circuit(&ws)?, Method::StockmanCircuit)),
            Some(_) => Err(SolveError::OpenProblem("stockman circuit with a zero-weight vertex".into())),
            None => Err(SolveError::OpenProblem("stockman play on a digraph other than a circuit".into())),
        },
        (Ruleset::VertexNim, orientation) if pos.convention() == Convention::Misere => {
            if orientation == Orientation::Directed && !g.all_looped() {
                return Err(SolveError::OpenProblem("misère play on a digraph without all loops".into()));
            }
            Ok((solve_misere(pos)?, Method::MisereReduction))
        }
        (Ruleset::VertexNim, Orientation::Undirected) => {
            if g.all_looped() {
                Ok((theorems::undirected_all_loops_outcome(g, u), Method::UndirectedAllLoops))
            } else {
                Ok((theorems::undirected_outcome(g, u), Method::UndirectedGeneral))
            }
        }
        (Ruleset::VertexNim, Orientation::Directed) => {
            if g.all_looped() {
                return Ok((theorems::directed_all_loops_outcome(g, u), Method::DirectedAllLoops));
            }
            match circuit_weights(g, u) {
                Some(ws) if ws.iter().all(|&w| w >= 2) => Ok((solve_adjacent_nim(&ws)?, Method::CircuitFormula)),
                Some(_) => Err(SolveError::OpenProblem("circuit with a weight-1 vertex".into())),
                None => Err(SolveError::OpenProblem("digraph without a loop on every vertex".into())),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Budget for the oracle, both as a fallback and inside witness search.
    pub budget: Budget,
    /// Search uncovered positions within the budget instead of reporting an
    /// open problem.
    pub oracle_fallback: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: Budget::default(),
            oracle_fallback: true,
        }
    }
}

/// Closed-form solving with oracle fallback and witness extraction.
///
/// Shareable across threads; the oracle memo is the only mutable state.
pub struct Solver {
    config: SolverConfig,
    oracle: Arc<Oracle>,
    full_scans: AtomicU64,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        Solver::with_oracle(config, Arc::new(Oracle::new(config.budget)))
    }

    pub fn with_oracle(config: SolverConfig, oracle: Arc<Oracle>) -> Solver {
        Solver {
            config,
            oracle,
            full_scans: AtomicU64::new(0),
        }
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    /// How often witness search had to leave the `{0, 1, w-1}` candidates.
    pub fn full_scans(&self) -> u64 {
        self.full_scans.load(Ordering::Relaxed)
    }

    pub fn outcome(&self, pos: &Position) -> Result<(Outcome, Method), SolveError> {
        match route(pos) {
            Err(SolveError::OpenProblem(reason)) => {
                if self.config.oracle_fallback && self.oracle.budget().admits(pos) {
                    Ok((self.oracle.solve(pos)?, Method::OracleFallback))
                } else {
                    Err(SolveError::OpenProblem(reason))
                }
            }
            other => other,
        }
    }

    pub fn solve(&self, pos: &Position) -> Result<SolveReport, SolveError> {
        let (outcome, method) = self.outcome(pos)?;
        let witness = match outcome {
            Outcome::N if !pos.is_terminal() => self.search_witness(pos, Outcome::N)?.0,
            _ => None,
        };
        Ok(SolveReport {
            outcome,
            method,
            witness,
        })
    }

    /// A move to a P position, or `None` when the position is P or terminal.
    pub fn winning_move(&self, pos: &Position) -> Result<Option<Move>, SolveError> {
        Ok(self.witness_with_trace(pos)?.0)
    }

    /// Like [`Solver::winning_move`], also reporting whether the search had to
    /// scan reductions outside `{0, 1, w-1}`.
    pub fn witness_with_trace(&self, pos: &Position) -> Result<(Option<Move>, bool), SolveError> {
        if pos.is_terminal() {
            return Ok((None, false));
        }
        let (outcome, _) = self.outcome(pos)?;
        self.search_witness(pos, outcome)
    }

    fn search_witness(&self, pos: &Position, outcome: Outcome) -> Result<(Option<Move>, bool), SolveError> {
        if outcome == Outcome::P {
            return Ok((None, false));
        }
        let u = pos.current().expect("nonterminal position has a current vertex");
        let w = pos.graph().weight(u);
        let mut candidates: Vec<u64> = Vec::with_capacity(3);
        for k in [0, 1, w.saturating_sub(1)] {
            if k < w && !candidates.contains(&k) {
                candidates.push(k);
            }
        }
        let moves = pos.legal_moves()?;
        let mut unresolved = false;

        for &k in &candidates {
            for m in moves.iter().filter(|m| m.reduce_to == k) {
                match self.leaves_opponent_lost(pos, m) {
                    Ok(true) => return Ok((Some(m.clone()), false)),
                    Ok(false) => {}
                    Err(SolveError::OpenProblem(_)) => unresolved = true,
                    Err(e) => return Err(e),
                }
            }
        }

        if unresolved {
            return Err(SolveError::OpenProblem("some successors could not be evaluated".into()));
        }
        self.full_scans.fetch_add(1, Ordering::Relaxed);
        log::warn!(
            "witness search left the {{0, 1, w-1}} candidates at {}",
            crate::instance::serialize(pos).replace('\n', "; ")
        );
        for m in moves.iter().filter(|m| !candidates.contains(&m.reduce_to)) {
            match self.leaves_opponent_lost(pos, m) {
                Ok(true) => return Ok((Some(m.clone()), true)),
                Ok(false) => {}
                Err(SolveError::OpenProblem(_)) => unresolved = true,
                Err(e) => return Err(e),
            }
        }
        if unresolved {
            Err(SolveError::OpenProblem("some successors could not be evaluated".into()))
        } else {
            Err(SolveError::Inconsistent("N position without a move to a P position".into()))
        }
    }

    fn leaves_opponent_lost(&self, pos: &Position, m: &Move) -> Result<bool, SolveError> {
        let next = pos.apply_move(m)?;
        Ok(match next.terminal_status() {
            TerminalStatus::PreviousMoverWins => true,
            TerminalStatus::MoverToActWins => false,
            TerminalStatus::Nonterminal => self.outcome(&next)?.0 == Outcome::P,
        })
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}
