//! Exhaustive memoized game-tree search.
//!
//! The oracle decides P/N straight from the definition: a position is N iff
//! some move leads to a P position. It is the ground truth the closed-form
//! rules are checked against, and the only solver for positions no rule
//! covers.

mod board;

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use thiserror::Error;

use crate::rules::{Move, Position, RulesError, TerminalStatus};
use crate::solver::Outcome;
use board::Board;

pub use board::StateKey;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("position with {vertices} vertices and total weight {total_weight} exceeds the oracle budget ({budget})")]
    BudgetExceeded {
        vertices: usize,
        total_weight: u64,
        budget: Budget,
    },
    #[error(transparent)]
    Rules(#[from] RulesError),
}

/// Size limit for exhaustive search. The game tree depth is bounded by the
/// total weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_total_weight: u64,
}

impl Budget {
    pub const fn new(max_vertices: usize, max_total_weight: u64) -> Budget {
        Budget {
            max_vertices,
            max_total_weight,
        }
    }

    pub fn admits(&self, pos: &Position) -> bool {
        let n = pos.graph().len();
        n <= self.max_vertices.min(64) && pos.total_weight() <= self.max_total_weight
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(8, 16)
    }
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at most {} vertices, total weight at most {}", self.max_vertices, self.max_total_weight)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MemoStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
}

/// Memoized minimax. Safe to share between threads: concurrent lookups are
/// fine and a key is written at most once with a value every writer agrees on.
pub struct Oracle {
    budget: Budget,
    memo: Option<DashMap<StateKey, Outcome>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Oracle {
    pub fn new(budget: Budget) -> Oracle {
        Oracle {
            budget,
            memo: Some(DashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// An oracle that recomputes every subtree; for cross-checking the memo.
    pub fn unmemoized(budget: Budget) -> Oracle {
        Oracle {
            memo: None,
            ..Oracle::new(budget)
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn stats(&self) -> MemoStats {
        MemoStats {
            entries: self.memo.as_ref().map_or(0, DashMap::len),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    fn check_budget(&self, pos: &Position) -> Result<(), OracleError> {
        if self.budget.admits(pos) {
            Ok(())
        } else {
            Err(OracleError::BudgetExceeded {
                vertices: pos.graph().len(),
                total_weight: pos.total_weight(),
                budget: self.budget,
            })
        }
    }

    pub fn solve(&self, pos: &Position) -> Result<Outcome, OracleError> {
        self.check_budget(pos)?;
        Ok(self.solve_board(&Board::from_position(pos)))
    }

    /// Some move to a P position, or `None` if there is none (P or terminal).
    pub fn best_move(&self, pos: &Position) -> Result<Option<Move>, OracleError> {
        self.check_budget(pos)?;
        if pos.is_terminal() {
            return Ok(None);
        }
        for m in pos.legal_moves()? {
            let next = pos.apply_move(&m)?;
            let wins = match next.terminal_status() {
                TerminalStatus::PreviousMoverWins => true,
                TerminalStatus::MoverToActWins => false,
                TerminalStatus::Nonterminal => self.solve_board(&Board::from_position(&next)) == Outcome::P,
            };
            if wins {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    fn solve_board(&self, board: &Board) -> Outcome {
        if let Some(outcome) = board.terminal() {
            return outcome;
        }
        let key = self.memo.as_ref().map(|memo| {
            let key = board.key();
            (memo, key)
        });
        if let Some((memo, key)) = &key {
            if let Some(hit) = memo.get(key) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return *hit;
            }
            self.misses.fetch_add(1, Ordering::Relaxed);
        }
        let outcome = Outcome::from_bool(board.any_child(|child| self.solve_board(child) == Outcome::P));
        if let Some((memo, key)) = key {
            memo.entry(key).or_insert(outcome);
        }
        outcome
    }
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(Budget::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GameGraph, Orientation};
    use crate::rules::{Convention, Ruleset};

    fn looped_single(w: i64, convention: Convention) -> Position {
        let g = GameGraph::build(Orientation::Undirected, [("a", w)], [("a", "a")]).unwrap();
        Position::new(g, "a", Ruleset::VertexNim, convention).unwrap()
    }

    fn circuit(ws: &[i64]) -> Position {
        let names: Vec<String> = (1..=ws.len()).map(|i| format!("v{i}")).collect();
        let vs = names.iter().map(String::as_str).zip(ws.iter().copied());
        let es = (0..ws.len()).map(|i| (names[i].clone(), names[(i + 1) % ws.len()].clone()));
        let g = GameGraph::build(Orientation::Directed, vs, es).unwrap();
        Position::new(g, "v1", Ruleset::VertexNim, Convention::Normal).unwrap()
    }

    #[test]
    fn single_vertex_conventions() {
        let oracle = Oracle::default();
        assert_eq!(oracle.solve(&looped_single(1, Convention::Normal)).unwrap(), Outcome::N);
        assert_eq!(oracle.solve(&looped_single(1, Convention::Misere)).unwrap(), Outcome::P);
        // w=2 misère: reduce to 1 and stay, the opponent must empty it
        assert_eq!(oracle.solve(&looped_single(2, Convention::Misere)).unwrap(), Outcome::N);
    }

    #[test]
    fn even_circuit_with_first_minimum_at_start() {
        let oracle = Oracle::default();
        assert_eq!(oracle.solve(&circuit(&[2, 3, 4, 5])).unwrap(), Outcome::P);
        assert_eq!(oracle.solve(&circuit(&[3, 2, 4, 5])).unwrap(), Outcome::N);
        assert_eq!(oracle.solve(&circuit(&[2, 2, 2])).unwrap(), Outcome::N);
    }

    #[test]
    fn best_move_reaches_p() {
        let oracle = Oracle::default();
        let pos = circuit(&[3, 2, 4, 5]);
        let m = oracle.best_move(&pos).unwrap().unwrap();
        let next = pos.apply_move(&m).unwrap();
        assert_eq!(oracle.solve(&next).unwrap(), Outcome::P);
        assert_eq!(oracle.best_move(&circuit(&[2, 3, 4, 5])).unwrap(), None);
    }

    #[test]
    fn stockman_stranded_start_has_no_best_move() {
        let g = GameGraph::build(Orientation::Undirected, [("a", 1), ("b", 2)], [("a", "b")]).unwrap();
        let pos = Position::new(g, "a", Ruleset::Stockman, Convention::Normal).unwrap();
        let oracle = Oracle::default();
        assert_eq!(oracle.solve(&pos).unwrap(), Outcome::P);
        assert_eq!(oracle.best_move(&pos).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let oracle = Oracle::new(Budget::new(8, 10));
        let err = oracle.solve(&circuit(&[4, 4, 4])).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { total_weight: 12, .. }));
    }

    #[test]
    fn memo_matches_plain_search() {
        let memo = Oracle::default();
        let plain = Oracle::unmemoized(Budget::default());
        for ws in [[2, 2, 3, 1], [1, 1, 2, 2], [3, 1, 2, 1], [2, 3, 2, 3]] {
            let pos = circuit(&ws);
            assert_eq!(memo.solve(&pos).unwrap(), plain.solve(&pos).unwrap(), "{ws:?}");
        }
        assert!(memo.stats().entries > 0);
        assert_eq!(plain.stats().entries, 0);
    }
}
