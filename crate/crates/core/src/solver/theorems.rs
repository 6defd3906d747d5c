//! Closed-form outcome rules, one function per family of instances.
//!
//! The public functions check their hypotheses and refuse instances outside
//! them. The `*_outcome` helpers assume the hypotheses hold and ignore the
//! convention, so the misère reduction can reuse them.

use super::labeling::{lo_core, lu_core};
use super::{Outcome, SolveError};
use crate::graph::{GameGraph, Orientation};
use crate::rules::{Convention, Position, Ruleset};

fn parity(odd_wins: bool, n: usize) -> Outcome {
    Outcome::from_bool((n % 2 == 1) == odd_wins)
}

fn require(cond: bool, what: &str) -> Result<(), SolveError> {
    if cond {
        Ok(())
    } else {
        Err(SolveError::Precondition(what.to_string()))
    }
}

fn current(pos: &Position) -> Result<usize, SolveError> {
    pos.current()
        .ok_or_else(|| SolveError::Precondition("position is terminal".into()))
}

fn require_normal(pos: &Position) -> Result<(), SolveError> {
    require(pos.convention() == Convention::Normal, "normal convention (use solve_misere)")
}

/// Closed form for a circuit read from the start vertex: an odd circuit is N;
/// an even one is N iff the first minimum sits at an even (1-based) index.
fn circuit_formula(weights: &[u64]) -> Outcome {
    if weights.len() % 2 == 1 {
        return Outcome::N;
    }
    let min = *weights.iter().min().expect("nonempty circuit");
    let first = weights.iter().position(|&w| w == min).expect("minimum present") + 1;
    Outcome::from_bool(first % 2 == 0)
}

/// Adjacent Nim: VertexNim on a directed circuit, weights listed from the
/// start vertex in arc order. Every weight must be at least 2.
pub fn solve_adjacent_nim(weights: &[u64]) -> Result<Outcome, SolveError> {
    if weights.len() < 3 {
        return Err(SolveError::InvalidInstance(format!(
            "a circuit needs at least 3 vertices, got {}",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|&&w| w <= 1) {
        return Err(SolveError::OutOfScope(format!(
            "circuit with a vertex of weight {w}; only weights >= 2 are covered"
        )));
    }
    Ok(circuit_formula(weights))
}

/// Stockman rules on a directed circuit: same closed form, weights >= 1.
pub fn solve_stockman_circuit(weights: &[u64]) -> Result<Outcome, SolveError> {
    if weights.len() < 3 {
        return Err(SolveError::InvalidInstance(format!(
            "a circuit needs at least 3 vertices, got {}",
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(SolveError::OutOfScope("stockman circuit with a zero-weight vertex".into()));
    }
    Ok(circuit_formula(weights))
}

/// Weights along the circuit starting at `start`, if `g` is a directed
/// elementary circuit on at least 3 vertices.
pub fn circuit_weights(g: &GameGraph, start: usize) -> Option<Vec<u64>> {
    let n = g.len();
    if g.orientation() != Orientation::Directed || n < 3 {
        return None;
    }
    if (0..n).any(|v| g.succ(v).len() != 1 || g.pred(v).len() != 1 || g.has_loop(v)) {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    let mut v = start;
    loop {
        order.push(g.weight(v));
        v = g.succ(v)[0];
        if v == start {
            break;
        }
    }
    (order.len() == n).then_some(order)
}

/// Directed VertexNim, strongly connected with a loop on every vertex.
pub fn solve_directed_all_loops(pos: &Position) -> Result<Outcome, SolveError> {
    require(pos.ruleset() == Ruleset::VertexNim, "vertexnim ruleset")?;
    require_normal(pos)?;
    let u = current(pos)?;
    let g = pos.graph();
    require(g.orientation() == Orientation::Directed, "directed graph")?;
    require(g.all_looped(), "a loop on every vertex")?;
    require(g.validate_playable().is_ok(), "strong connectivity")?;
    Ok(directed_all_loops_outcome(g, u))
}

pub(crate) fn directed_all_loops_outcome(g: &GameGraph, u: usize) -> Outcome {
    let ones: Vec<bool> = g.weights().iter().map(|&w| w == 1).collect();
    if ones.iter().all(|&o| o) {
        return parity(true, g.len());
    }
    if !ones[u] {
        // reduce to 0 if that wins, otherwise to 1 and stay
        return Outcome::N;
    }
    let (labels, _) = lo_core(g, ones, |_| 0);
    labels[u].expect("u is a weight-1 vertex")
}

/// Undirected VertexNim with a loop on every vertex: decided by the size of
/// the start vertex's component among weight-1 vertices.
pub fn solve_undirected_all_loops(pos: &Position) -> Result<Outcome, SolveError> {
    require(pos.ruleset() == Ruleset::VertexNim, "vertexnim ruleset")?;
    require_normal(pos)?;
    let u = current(pos)?;
    let g = pos.graph();
    require(g.orientation() == Orientation::Undirected, "undirected graph")?;
    require(g.all_looped(), "a loop on every vertex")?;
    require(g.validate_playable().is_ok(), "connectivity")?;
    Ok(undirected_all_loops_outcome(g, u))
}

pub(crate) fn undirected_all_loops_outcome(g: &GameGraph, u: usize) -> Outcome {
    let w = g.weights();
    if w.iter().all(|&x| x == 1) {
        return parity(true, g.len());
    }
    if w[u] >= 2 {
        return Outcome::N;
    }
    let component = g.reach(u, |v| w[v] == 1, false);
    let size = component.iter().filter(|&&c| c).count();
    Outcome::from_bool(size % 2 == 0)
}

/// Undirected VertexNim on any connected graph, loops optional.
pub fn solve_undirected(pos: &Position) -> Result<Outcome, SolveError> {
    require(pos.ruleset() == Ruleset::VertexNim, "vertexnim ruleset")?;
    require_normal(pos)?;
    let u = current(pos)?;
    let g = pos.graph();
    require(g.orientation() == Orientation::Undirected, "undirected graph")?;
    require(g.weights().iter().all(|&w| w >= 1), "positive weights")?;
    require(g.validate_playable().is_ok(), "connectivity")?;
    Ok(undirected_outcome(g, u))
}

/// Membership in the subgraph where the weight labeling decides: heavy,
/// loop-free, and no light neighbor.
fn heavy_core(g: &GameGraph) -> Vec<bool> {
    let w = g.weights();
    (0..g.len())
        .map(|v| w[v] >= 2 && !g.has_loop(v) && g.succ(v).iter().all(|&t| w[t] >= 2))
        .collect()
}

pub(crate) fn undirected_outcome(g: &GameGraph, u: usize) -> Outcome {
    let w = g.weights();
    let n = g.len();
    if (0..n).all(|v| v == u || w[v] == 1) {
        // everything but possibly u has weight 1
        return if w[u] == 1 { parity(true, n) } else { Outcome::N };
    }
    if w[u] >= 2 && g.has_loop(u) {
        return Outcome::N;
    }
    if w[u] == 1 {
        let component = g.reach(u, |v| w[v] == 1, false);
        let size = component.iter().filter(|&&c| c).count();
        return Outcome::from_bool(size % 2 == 0);
    }
    if g.succ(u).iter().any(|&v| w[v] == 1) {
        return Outcome::N;
    }
    heavy_core_label(g, u)
}

fn heavy_core_label(g: &GameGraph, u: usize) -> Outcome {
    let core = heavy_core(g);
    debug_assert!(core[u], "dispatch reached the weight labeling outside its subgraph");
    let (labels, _) = lu_core(g, core);
    labels[u].expect("u lies in the labeled subgraph")
}

/// Stockman's game (zero vertices persist) on a connected undirected graph.
pub fn solve_stockman_undirected(pos: &Position) -> Result<Outcome, SolveError> {
    require(pos.ruleset() == Ruleset::Stockman, "stockman ruleset")?;
    let u = current(pos)?;
    let g = pos.graph();
    require(g.orientation() == Orientation::Undirected, "undirected graph")?;
    require(g.validate_playable().is_ok(), "connectivity")?;
    Ok(stockman_undirected_outcome(g, u))
}

pub(crate) fn stockman_undirected_outcome(g: &GameGraph, u: usize) -> Outcome {
    let w = g.weights();
    if w[u] == 0 {
        return Outcome::P;
    }
    if g.succ(u).iter().any(|&v| w[v] == 0) {
        return Outcome::N;
    }
    let looped = g.has_loop(u);
    if w[u] == 1 && !looped {
        return Outcome::P;
    }
    if looped {
        return Outcome::N;
    }
    // Only a weight-1 neighbor that is itself P helps. One with a loop or a
    // zero neighbor hands the opponent an immediate win.
    if g.succ(u).iter().any(|&v| plain_light(g, v)) {
        return Outcome::N;
    }
    let core: Vec<bool> = (0..g.len())
        .map(|v| {
            w[v] >= 2
                && !g.has_loop(v)
                && g.succ(v).iter().all(|&t| w[t] != 0 && !plain_light(g, t))
        })
        .collect();
    let (labels, _) = lu_core(g, core);
    labels[u].expect("u lies in the labeled subgraph")
}

/// A weight-1 vertex with no loop and no zero neighbor: P under stockman rules.
fn plain_light(g: &GameGraph, v: usize) -> bool {
    let w = g.weights();
    w[v] == 1 && !g.has_loop(v) && g.succ(v).iter().all(|&t| w[t] != 0)
}

/// Misère VertexNim: all-ones boards flip parity, every other board keeps
/// its normal-play outcome. Covers undirected graphs and strongly connected
/// digraphs with a loop on every vertex.
pub fn solve_misere(pos: &Position) -> Result<Outcome, SolveError> {
    require(pos.convention() == Convention::Misere, "misère convention")?;
    if pos.ruleset() == Ruleset::Stockman {
        return Err(SolveError::Unsupported("misère play under stockman rules".into()));
    }
    let u = current(pos)?;
    let g = pos.graph();
    let normal = match g.orientation() {
        Orientation::Undirected => {
            require(g.validate_playable().is_ok(), "connectivity")?;
            if g.all_looped() {
                undirected_all_loops_outcome(g, u)
            } else {
                undirected_outcome(g, u)
            }
        }
        Orientation::Directed if g.all_looped() && g.validate_playable().is_ok() => directed_all_loops_outcome(g, u),
        Orientation::Directed => {
            return Err(SolveError::OutOfScope(
                "misère play on a digraph without a loop on every vertex".into(),
            ))
        }
    };
    if g.weights().iter().all(|&w| w == 1) {
        return Ok(parity(false, g.len()));
    }
    if g.len() == 1 && !g.has_loop(u) {
        // nowhere to go but the end of the game, so the weight is irrelevant
        return Ok(Outcome::P);
    }
    Ok(normal)
}
