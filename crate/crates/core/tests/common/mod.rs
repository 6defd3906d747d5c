#![allow(dead_code)]

use proptest::prelude::*;
use vertexnim::rules::TerminalStatus;
use vertexnim::{Convention, GameGraph, Orientation, Outcome, Position, Ruleset};

/// Random playable position: undirected graphs grow from a random spanning
/// tree, digraphs from the Hamiltonian circuit `x0 -> x1 -> ... -> x0`.
pub fn position(
    orientation: Orientation,
    ruleset: Ruleset,
    convention: Convention,
    max_vertices: usize,
    max_weight: u64,
) -> impl Strategy<Value = Position> {
    let min_weight = match ruleset {
        Ruleset::VertexNim => 1,
        Ruleset::Stockman => 0,
    };
    (1..=max_vertices)
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec(min_weight..=max_weight, n),
                proptest::collection::vec(proptest::bool::weighted(0.4), n),
                proptest::collection::vec(any::<usize>(), n),
                proptest::collection::vec(proptest::bool::weighted(0.25), n * n),
                0..n,
            )
        })
        .prop_map(move |(n, weights, loops, parents, extra, start)| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let mut arcs = Vec::new();
            match orientation {
                Orientation::Undirected => {
                    for (v, parent) in parents.iter().enumerate().take(n).skip(1) {
                        arcs.push((parent % v, v));
                    }
                }
                Orientation::Directed if n > 1 => {
                    for v in 0..n {
                        arcs.push((v, (v + 1) % n));
                    }
                }
                Orientation::Directed => {}
            }
            for a in 0..n {
                for b in 0..n {
                    if a != b && extra[a * n + b] {
                        arcs.push((a, b));
                    }
                }
                if loops[a] {
                    arcs.push((a, a));
                }
            }
            let g = GameGraph::build(
                orientation,
                names.iter().zip(&weights).map(|(id, &w)| (id.as_str(), w as i64)),
                arcs.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str())),
            )
            .unwrap();
            Position::new(g, &names[start], ruleset, convention).unwrap()
        })
}

pub fn small_positions() -> impl Strategy<Value = Position> {
    prop_oneof![
        position(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal, 4, 3),
        position(Orientation::Undirected, Ruleset::VertexNim, Convention::Misere, 4, 3),
        position(Orientation::Directed, Ruleset::VertexNim, Convention::Normal, 4, 3),
        position(Orientation::Directed, Ruleset::VertexNim, Convention::Misere, 4, 3),
        position(Orientation::Undirected, Ruleset::Stockman, Convention::Normal, 4, 3),
        position(Orientation::Directed, Ruleset::Stockman, Convention::Normal, 4, 3),
    ]
}

/// Plain recursive minimax over the rules engine, no memo.
pub fn naive_outcome(pos: &Position) -> Outcome {
    match pos.terminal_status() {
        TerminalStatus::PreviousMoverWins => return Outcome::P,
        TerminalStatus::MoverToActWins => return Outcome::N,
        TerminalStatus::Nonterminal => {}
    }
    let wins = pos
        .legal_moves()
        .unwrap()
        .iter()
        .any(|m| naive_outcome(&pos.apply_move(m).unwrap()) == Outcome::P);
    Outcome::from_bool(wins)
}
