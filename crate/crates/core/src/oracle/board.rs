//! Bitmask game state for exhaustive search.
//!
//! This is a second, self-contained implementation of the move rules; the
//! oracle never goes through [`crate::rules`] while searching, so the two can
//! be checked against each other.

use crate::rules::{Convention, Position, Ruleset};
use crate::solver::Outcome;

/// Memo key: the labeled board, with the rules folded into the header word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateKey(Box<[u64]>);

#[derive(Clone, Debug)]
pub(crate) struct Board {
    alive: u64,
    weight: Vec<u64>,
    out: Vec<u64>,
    inn: Vec<u64>,
    current: Option<usize>,
    deletes: bool,
    misere: bool,
    directed: bool,
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Board {
    /// Caller guarantees at most 64 vertices.
    pub fn from_position(pos: &Position) -> Board {
        let g = pos.graph();
        let n = g.len();
        assert!(n <= 64, "board holds at most 64 vertices");
        let mask_of = |list: &[usize]| list.iter().fold(0u64, |m, &i| m | 1 << i);
        Board {
            alive: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            weight: g.weights().to_vec(),
            out: (0..n).map(|v| mask_of(g.succ(v))).collect(),
            inn: (0..n).map(|v| mask_of(g.pred(v))).collect(),
            current: pos.current(),
            deletes: pos.ruleset() == Ruleset::VertexNim,
            misere: pos.convention() == Convention::Misere,
            directed: g.is_directed(),
        }
    }

    /// Outcome for the player to act if the game is over.
    pub fn terminal(&self) -> Option<Outcome> {
        if self.deletes {
            if self.alive == 0 {
                // the previous player made the last move
                return Some(if self.misere { Outcome::N } else { Outcome::P });
            }
            return None;
        }
        let u = self.current?;
        if self.weight[u] == 0 || self.out[u] & self.alive == 0 {
            Some(Outcome::P)
        } else {
            None
        }
    }

    pub fn key(&self) -> StateKey {
        let header = self.current.map_or(0xff, |c| c as u64)
            | (self.deletes as u64) << 8
            | (self.misere as u64) << 9
            | (self.directed as u64) << 10
            | (self.weight.len() as u64) << 16;
        let mut words = Vec::with_capacity(2 + 2 * self.alive.count_ones() as usize);
        words.push(header);
        words.push(self.alive);
        for v in bits(self.alive) {
            words.push(self.weight[v]);
            words.push(self.out[v]);
        }
        StateKey(words.into_boxed_slice())
    }

    /// Calls `visit` on each successor until it returns `true`.
    /// Returns whether some call returned `true`.
    pub fn any_child(&self, mut visit: impl FnMut(&Board) -> bool) -> bool {
        let u = self.current.expect("nonterminal board has a current vertex");
        let w = self.weight[u];
        let bit = 1u64 << u;

        if self.deletes {
            let others = self.alive & !bit;
            let mut emptied = self.clone();
            emptied.weight[u] = 0;
            emptied.alive = others;
            if others == 0 {
                emptied.current = None;
                if visit(&emptied) {
                    return true;
                }
            } else {
                let succ = self.out[u] & others;
                let pred = self.inn[u] & others;
                for p in bits(pred) {
                    emptied.out[p] |= succ;
                }
                for s in bits(succ) {
                    emptied.inn[s] |= pred;
                }
                for v in bits(others) {
                    emptied.out[v] &= !bit;
                    emptied.inn[v] &= !bit;
                }
                emptied.out[u] = 0;
                emptied.inn[u] = 0;
                for d in bits(succ) {
                    emptied.current = Some(d);
                    if visit(&emptied) {
                        return true;
                    }
                }
            }
        }

        let first = if self.deletes { 1 } else { 0 };
        let mut child = self.clone();
        for k in first..w {
            child.weight[u] = k;
            for d in bits(self.out[u] & self.alive) {
                child.current = Some(d);
                if visit(&child) {
                    return true;
                }
            }
        }
        false
    }
}
