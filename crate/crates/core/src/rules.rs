//! Move generation and application for both rulesets.
//!
//! Under [`Ruleset::VertexNim`] a vertex whose weight reaches zero is deleted
//! immediately (see [`GameGraph::remove_zero_vertex`]) and the game ends on
//! the empty graph. Under [`Ruleset::Stockman`] zero vertices stay on the
//! board and a player who has to move from one loses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GameGraph, GraphError, Orientation, Unreachable, VertexId, END_TOKEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ruleset {
    VertexNim,
    Stockman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Normal,
    Misere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }
}

macro_rules! token_enum {
    ($ty:ty { $($variant:path => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($variant),)+
                    other => Err(format!("unknown {} `{other}`", stringify!($ty).to_lowercase())),
                }
            }
        }
    };
}

token_enum!(Ruleset { Ruleset::VertexNim => "vertexnim", Ruleset::Stockman => "stockman" });
token_enum!(Convention { Convention::Normal => "normal", Convention::Misere => "misere" });
token_enum!(Player { Player::First => "first", Player::Second => "second" });

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulesError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("misère play is not supported for the stockman ruleset")]
    UnsupportedMisereStockman,
    #[error("vertexnim requires positive weights; `{0}` has weight 0")]
    ZeroWeight(VertexId),
    #[error("graph is not playable: {0}")]
    NotPlayable(#[from] Unreachable),
    #[error("cannot start on an empty graph")]
    EmptyGraph,
    #[error("position is terminal")]
    Terminal,
    #[error("illegal move: {0}")]
    Illegal(IllegalMove),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("cannot reduce weight {current} to {requested}")]
    BadReduction { current: u64, requested: u64 },
    #[error("`{0}` is not adjacent to the current vertex")]
    NotAdjacent(String),
    #[error("`{0}` is deleted by this move")]
    DeletedDestination(String),
    #[error("the game only ends when the last vertex is emptied")]
    PrematureEnd,
    #[error("a destination vertex is required")]
    MissingDestination,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Destination {
    Vertex(VertexId),
    End,
}

impl fmt::Display for Destination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Destination::Vertex(id) => write!(f, "{id}"),
            Destination::End => f.write_str(END_TOKEN),
        }
    }
}

impl FromStr for Destination {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == END_TOKEN {
            Ok(Destination::End)
        } else {
            VertexId::new(s).map(Destination::Vertex)
        }
    }
}

/// Lower the current vertex to `reduce_to`, then move the token.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub reduce_to: u64,
    pub destination: Destination,
}

impl Move {
    pub fn to(reduce_to: u64, destination: &str) -> Move {
        Move {
            reduce_to,
            destination: destination.parse().expect("valid destination"),
        }
    }

    pub fn end() -> Move {
        Move {
            reduce_to: 0,
            destination: Destination::End,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalStatus {
    Nonterminal,
    PreviousMoverWins,
    MoverToActWins,
}

/// A game state: graph, token, rules and whose turn it is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    graph: GameGraph,
    current: Option<usize>,
    ruleset: Ruleset,
    convention: Convention,
    to_move: Player,
}

impl Position {
    /// Validated starting position with [`Player::First`] to move.
    pub fn new(graph: GameGraph, start: &str, ruleset: Ruleset, convention: Convention) -> Result<Position, RulesError> {
        if ruleset == Ruleset::Stockman && convention == Convention::Misere {
            return Err(RulesError::UnsupportedMisereStockman);
        }
        if graph.is_empty() {
            return Err(RulesError::EmptyGraph);
        }
        let current = graph.require(start)?;
        if ruleset == Ruleset::VertexNim {
            if let Some(i) = graph.weights().iter().position(|&w| w == 0) {
                return Err(RulesError::ZeroWeight(graph.id(i).clone()));
            }
            graph.validate_playable()?;
        }
        Ok(Position {
            graph,
            current: Some(current),
            ruleset,
            convention,
            to_move: Player::First,
        })
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn current(&self) -> Option<usize> {
        self.current
    }

    pub fn current_id(&self) -> Option<&VertexId> {
        self.current.map(|i| self.graph.id(i))
    }

    pub fn ruleset(&self) -> Ruleset {
        self.ruleset
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn orientation(&self) -> Orientation {
        self.graph.orientation()
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn total_weight(&self) -> u64 {
        self.graph.total_weight()
    }

    /// Same position with another convention (used to compare misère and
    /// normal outcomes of one board).
    pub fn with_convention(&self, convention: Convention) -> Result<Position, RulesError> {
        if self.ruleset == Ruleset::Stockman && convention == Convention::Misere {
            return Err(RulesError::UnsupportedMisereStockman);
        }
        Ok(Position {
            convention,
            ..self.clone()
        })
    }

    pub fn terminal_status(&self) -> TerminalStatus {
        match self.ruleset {
            Ruleset::VertexNim => match (self.current, self.convention) {
                (Some(_), _) => TerminalStatus::Nonterminal,
                (None, Convention::Normal) => TerminalStatus::PreviousMoverWins,
                (None, Convention::Misere) => TerminalStatus::MoverToActWins,
            },
            Ruleset::Stockman => match self.current {
                Some(u) if self.graph.weight(u) > 0 && !self.graph.succ(u).is_empty() => TerminalStatus::Nonterminal,
                // blocked on a zero (or on a vertex with nowhere to go)
                _ => TerminalStatus::PreviousMoverWins,
            },
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal_status() != TerminalStatus::Nonterminal
    }

    /// Every legal move, ordered by `reduce_to` then destination.
    pub fn legal_moves(&self) -> Result<Vec<Move>, RulesError> {
        if self.is_terminal() {
            return Err(RulesError::Terminal);
        }
        let u = self.current.expect("nonterminal position has a current vertex");
        let g = &self.graph;
        let w = g.weight(u);
        let vertex = |i: usize| Destination::Vertex(g.id(i).clone());
        let mut moves = Vec::new();
        match self.ruleset {
            Ruleset::VertexNim => {
                if g.len() == 1 {
                    moves.push(Move::end());
                } else {
                    for &d in g.succ(u).iter().filter(|&&d| d != u) {
                        moves.push(Move {
                            reduce_to: 0,
                            destination: vertex(d),
                        });
                    }
                }
                for k in 1..w {
                    for &d in g.succ(u) {
                        moves.push(Move {
                            reduce_to: k,
                            destination: vertex(d),
                        });
                    }
                }
            }
            Ruleset::Stockman => {
                for k in 0..w {
                    for &d in g.succ(u) {
                        moves.push(Move {
                            reduce_to: k,
                            destination: vertex(d),
                        });
                    }
                }
            }
        }
        Ok(moves)
    }

    /// Plays `m`, returning the successor position.
    pub fn apply_move(&self, m: &Move) -> Result<Position, RulesError> {
        if self.is_terminal() {
            return Err(RulesError::Terminal);
        }
        let illegal = |e| Err(RulesError::Illegal(e));
        let u = self.current.expect("nonterminal position has a current vertex");
        let g = &self.graph;
        let w = g.weight(u);
        if m.reduce_to >= w {
            return illegal(IllegalMove::BadReduction {
                current: w,
                requested: m.reduce_to,
            });
        }
        let deletes = self.ruleset == Ruleset::VertexNim && m.reduce_to == 0;

        let target = match &m.destination {
            Destination::End => {
                if deletes && g.len() == 1 {
                    None
                } else if deletes {
                    return illegal(IllegalMove::PrematureEnd);
                } else {
                    return illegal(IllegalMove::MissingDestination);
                }
            }
            Destination::Vertex(id) => {
                let Some(d) = g.index_of(id.as_str()) else {
                    return illegal(IllegalMove::NotAdjacent(id.to_string()));
                };
                if deletes && d == u {
                    return illegal(IllegalMove::DeletedDestination(id.to_string()));
                }
                if !g.has_arc(u, d) {
                    return illegal(IllegalMove::NotAdjacent(id.to_string()));
                }
                Some(d)
            }
        };

        let graph = if deletes {
            g.remove_vertex_at(u)
        } else {
            g.with_weight(u, m.reduce_to)
        };
        let current = target.map(|d| if deletes && d > u { d - 1 } else { d });
        Ok(Position {
            graph,
            current,
            ruleset: self.ruleset,
            convention: self.convention,
            to_move: self.to_move.other(),
        })
    }

    /// Human-readable move text: `reduce <u> to <k>, go <v|end>`.
    pub fn describe_move(&self, m: &Move) -> String {
        let from = self.current_id().map(VertexId::as_str).unwrap_or("?");
        format!("reduce {from} to {}, go {}", m.reduce_to, m.destination)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(vs: &[(&str, i64)], es: &[(&str, &str)]) -> GameGraph {
        GameGraph::build(Orientation::Undirected, vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn single_looped_vertex_moves() {
        let pos = Position::new(undirected(&[("a", 2)], &[("a", "a")]), "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        let moves = pos.legal_moves().unwrap();
        assert_eq!(moves, vec![Move::end(), Move::to(1, "a")]);
    }

    #[test]
    fn weight_one_edge_forces_deletion() {
        let pos = Position::new(undirected(&[("a", 1), ("b", 1)], &[("a", "b")]), "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        assert_eq!(pos.legal_moves().unwrap(), vec![Move::to(0, "b")]);
    }

    #[test]
    fn stockman_move_into_zero() {
        let pos = Position::new(undirected(&[("a", 1), ("b", 0)], &[("a", "b")]), "a", Ruleset::Stockman, Convention::Normal).unwrap();
        assert_eq!(pos.legal_moves().unwrap(), vec![Move::to(0, "b")]);
        let next = pos.apply_move(&Move::to(0, "b")).unwrap();
        assert_eq!(next.terminal_status(), TerminalStatus::PreviousMoverWins);
    }

    #[test]
    fn triangle_deletion_cliquifies_neighbors() {
        let g = undirected(&[("a", 1), ("b", 1), ("c", 2)], &[("a", "b"), ("b", "c"), ("c", "a")]);
        let pos = Position::new(g, "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        let next = pos.apply_move(&Move::to(0, "b")).unwrap();
        let h = next.graph();
        assert_eq!(h.len(), 2);
        assert_eq!(next.current_id().unwrap().as_str(), "b");
        assert!(h.has_loop(0) && h.has_loop(1) && h.has_arc(0, 1));
        assert_eq!(next.to_move(), Player::Second);
    }

    #[test]
    fn stockman_keeps_structure() {
        let pos = Position::new(undirected(&[("a", 2), ("b", 1)], &[("a", "b")]), "a", Ruleset::Stockman, Convention::Normal).unwrap();
        let next = pos.apply_move(&Move::to(1, "b")).unwrap();
        assert_eq!(next.graph().weights(), &[1, 1]);
        assert_eq!(next.graph().edge_count(), 1);
        assert_eq!(next.current_id().unwrap().as_str(), "b");
    }

    #[test]
    fn emptying_last_vertex_ends_game() {
        let pos = Position::new(undirected(&[("a", 1)], &[("a", "a")]), "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        let done = pos.apply_move(&Move::end()).unwrap();
        assert!(done.graph().is_empty());
        assert_eq!(done.terminal_status(), TerminalStatus::PreviousMoverWins);
        assert_eq!(done.with_convention(Convention::Misere).unwrap().terminal_status(), TerminalStatus::MoverToActWins);
        assert_eq!(done.legal_moves(), Err(RulesError::Terminal));
    }

    #[test]
    fn stockman_zero_start_is_lost() {
        let pos = Position::new(undirected(&[("a", 0), ("b", 2)], &[("a", "b")]), "a", Ruleset::Stockman, Convention::Normal).unwrap();
        assert_eq!(pos.terminal_status(), TerminalStatus::PreviousMoverWins);
    }

    #[test]
    fn illegal_moves_are_reported() {
        let g = undirected(&[("a", 2), ("b", 3), ("c", 1)], &[("a", "b"), ("b", "c")]);
        let pos = Position::new(g, "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        let err = |m: Move| match pos.apply_move(&m) {
            Err(RulesError::Illegal(e)) => e,
            other => panic!("expected illegal move, got {other:?}"),
        };
        assert!(matches!(err(Move::to(2, "b")), IllegalMove::BadReduction { .. }));
        assert!(matches!(err(Move::to(1, "c")), IllegalMove::NotAdjacent(_)));
        assert!(matches!(err(Move::to(1, "a")), IllegalMove::NotAdjacent(_)));
        assert!(matches!(err(Move::to(0, "a")), IllegalMove::DeletedDestination(_)));
        assert!(matches!(err(Move::end()), IllegalMove::PrematureEnd));
    }

    #[test]
    fn construction_checks() {
        let g = undirected(&[("a", 1), ("b", 0)], &[("a", "b")]);
        assert!(matches!(Position::new(g.clone(), "a", Ruleset::VertexNim, Convention::Normal), Err(RulesError::ZeroWeight(_))));
        assert_eq!(Position::new(g.clone(), "a", Ruleset::Stockman, Convention::Misere), Err(RulesError::UnsupportedMisereStockman));
        let split = undirected(&[("a", 1), ("b", 1)], &[]);
        assert!(matches!(Position::new(split, "a", Ruleset::VertexNim, Convention::Normal), Err(RulesError::NotPlayable(_))));
        assert!(matches!(Position::new(g, "z", Ruleset::Stockman, Convention::Normal), Err(RulesError::Graph(_))));
    }

    #[test]
    fn directed_last_vertex_ends_with_marker() {
        let g = GameGraph::build(Orientation::Directed, [("a", 1)], [("a", "a")]).unwrap();
        let pos = Position::new(g, "a", Ruleset::VertexNim, Convention::Normal).unwrap();
        assert_eq!(pos.legal_moves().unwrap(), vec![Move::end()]);
        assert_eq!(pos.describe_move(&Move::end()), "reduce a to 0, go end");
    }
}
