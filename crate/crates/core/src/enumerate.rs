//! Exhaustive and sampled streams of small game positions.
//!
//! Graphs are labeled (no isomorphism reduction) with ids `v1..vn`. Every
//! emitted position is playable: undirected graphs are connected and
//! digraphs strongly connected.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GameGraph, Orientation};
use crate::rules::{Convention, Position, Ruleset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("envelope contains no instances: {0}")]
    Empty(String),
    #[error("envelope too large to enumerate: {0}")]
    TooLarge(String),
    #[error("misère play is not supported for the stockman ruleset")]
    Unsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// Every connected (undirected) or strongly connected (directed) graph.
    Connected,
    /// Only the cycle `v1 -> v2 -> ... -> vn -> v1` (undirected: `v1 - v2 - ... - vn - v1`).
    Circuits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopPolicy {
    Any,
    All,
    None,
}

/// The family of positions to emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub orientation: Orientation,
    pub ruleset: Ruleset,
    pub convention: Convention,
    pub vertices: RangeInclusive<usize>,
    /// Under vertexnim a lower bound of 0 is raised to 1. Under stockman
    /// all-zero weight vectors are skipped.
    pub weights: RangeInclusive<u64>,
    pub family: GraphFamily,
    pub loops: LoopPolicy,
}

impl Envelope {
    pub fn new(orientation: Orientation, ruleset: Ruleset, convention: Convention) -> Envelope {
        Envelope {
            orientation,
            ruleset,
            convention,
            vertices: 1..=3,
            weights: 1..=3,
            family: GraphFamily::Connected,
            loops: LoopPolicy::Any,
        }
    }

    pub fn vertices(mut self, range: RangeInclusive<usize>) -> Envelope {
        self.vertices = range;
        self
    }

    pub fn weights(mut self, range: RangeInclusive<u64>) -> Envelope {
        self.weights = range;
        self
    }

    pub fn family(mut self, family: GraphFamily) -> Envelope {
        self.family = family;
        self
    }

    pub fn loops(mut self, loops: LoopPolicy) -> Envelope {
        self.loops = loops;
        self
    }

    fn weight_range(&self) -> (u64, u64) {
        let lo = match self.ruleset {
            Ruleset::VertexNim => (*self.weights.start()).max(1),
            Ruleset::Stockman => *self.weights.start(),
        };
        (lo, *self.weights.end())
    }

    fn vertex_range(&self) -> (usize, usize) {
        let lo = match self.family {
            GraphFamily::Connected => (*self.vertices.start()).max(1),
            GraphFamily::Circuits => (*self.vertices.start()).max(3),
        };
        (lo, *self.vertices.end())
    }

    fn validate(&self) -> Result<(), EnumerateError> {
        if self.ruleset == Ruleset::Stockman && self.convention == Convention::Misere {
            return Err(EnumerateError::Unsupported);
        }
        let (wlo, whi) = self.weight_range();
        if wlo > whi || whi == 0 {
            return Err(EnumerateError::Empty(format!("no admissible weights in {:?}", self.weights)));
        }
        let (vlo, vhi) = self.vertex_range();
        if vlo > vhi {
            return Err(EnumerateError::Empty(format!("no admissible vertex counts in {:?}", self.vertices)));
        }
        let limit = match (self.family, self.orientation) {
            (GraphFamily::Circuits, _) => 64,
            (GraphFamily::Connected, Orientation::Undirected) => 6,
            (GraphFamily::Connected, Orientation::Directed) => 5,
        };
        if vhi > limit {
            return Err(EnumerateError::TooLarge(format!("{vhi} vertices (limit {limit} for this family)")));
        }
        Ok(())
    }
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// Loop-free arc sets on `n` labeled vertices that pass the connectivity
/// filter. Undirected edge sets list each edge once.
fn skeletons(orientation: Orientation, family: GraphFamily, n: usize) -> Vec<Vec<(usize, usize)>> {
    if family == GraphFamily::Circuits {
        return vec![(0..n).map(|i| (i, (i + 1) % n)).collect()];
    }
    let pairs: Vec<(usize, usize)> = match orientation {
        Orientation::Undirected => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        Orientation::Directed => (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect(),
    };
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    for subset in 0u64..(1u64 << pairs.len()) {
        let mut succ = vec![0u32; n];
        let mut pred = vec![0u32; n];
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if subset >> bit & 1 == 1 {
                succ[a] |= 1 << b;
                pred[b] |= 1 << a;
                if orientation == Orientation::Undirected {
                    succ[b] |= 1 << a;
                    pred[a] |= 1 << b;
                }
            }
        }
        if closure(&succ, 0) == full && closure(&pred, 0) == full {
            out.push(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| subset >> bit & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect(),
            );
        }
    }
    out
}

fn closure(adj: &[u32], start: usize) -> u32 {
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

fn loop_masks(policy: LoopPolicy, n: usize) -> Vec<u64> {
    match policy {
        LoopPolicy::None => vec![0],
        LoopPolicy::All => vec![(1u64 << n) - 1],
        LoopPolicy::Any => (0..1u64 << n).collect(),
    }
}

struct Spec {
    orientation: Orientation,
    ruleset: Ruleset,
    convention: Convention,
}

impl Spec {
    fn graph(&self, n: usize, skeleton: &[(usize, usize)], loops: u64, weights: &[u64]) -> GameGraph {
        let ids = names(n);
        let arcs = skeleton
            .iter()
            .copied()
            .chain((0..n).filter(|&v| loops >> v & 1 == 1).map(|v| (v, v)));
        GameGraph::build(
            self.orientation,
            ids.iter().zip(weights).map(|(id, &w)| (id.as_str(), w as i64)),
            arcs.map(|(a, b)| (ids[a].as_str(), ids[b].as_str())),
        )
        .expect("enumerated graphs are well formed")
    }

    fn position(&self, graph: GameGraph, start: usize) -> Position {
        let start = format!("v{}", start + 1);
        Position::new(graph, &start, self.ruleset, self.convention).expect("enumerated positions are playable")
    }
}

/// Every position in the envelope: each graph, loop subset, weight vector
/// and start vertex, in a fixed order.
pub fn enumerate_instances(env: &Envelope) -> Result<impl Iterator<Item = Position>, EnumerateError> {
    env.validate()?;
    let (vlo, vhi) = env.vertex_range();
    let (wlo, whi) = env.weight_range();
    let stockman = env.ruleset == Ruleset::Stockman;
    let spec = std::sync::Arc::new(Spec {
        orientation: env.orientation,
        ruleset: env.ruleset,
        convention: env.convention,
    });
    let (orientation, family, loops) = (env.orientation, env.family, env.loops);

    Ok((vlo..=vhi).flat_map(move |n| {
        let spec = spec.clone();
        let masks = loop_masks(loops, n);
        skeletons(orientation, family, n).into_iter().flat_map(move |skeleton| {
            let spec = spec.clone();
            masks.clone().into_iter().flat_map(move |mask| {
                let spec = spec.clone();
                let skeleton = skeleton.clone();
                weight_vectors(n, wlo, whi)
                    .filter(move |ws| !stockman || ws.iter().any(|&w| w > 0))
                    .flat_map(move |ws| {
                        let g = spec.graph(n, &skeleton, mask, &ws);
                        let spec = spec.clone();
                        (0..n).map(move |s| spec.position(g.clone(), s))
                    })
            })
        })
    }))
}

fn weight_vectors(n: usize, lo: u64, hi: u64) -> impl Iterator<Item = Vec<u64>> {
    let base = hi - lo + 1;
    let count = base.pow(n as u32);
    (0..count).map(move |mut code| {
        let mut ws = vec![lo; n];
        for w in ws.iter_mut() {
            *w = lo + code % base;
            code /= base;
        }
        ws
    })
}

/// `count` positions drawn uniformly per component (vertex count, graph,
/// loops, weights, start) with a seeded generator. Same seed, same output.
pub fn sample_instances(env: &Envelope, count: usize, seed: u64) -> Result<Vec<Position>, EnumerateError> {
    env.validate()?;
    let (vlo, vhi) = env.vertex_range();
    let (wlo, whi) = env.weight_range();
    let spec = Spec {
        orientation: env.orientation,
        ruleset: env.ruleset,
        convention: env.convention,
    };
    let skeleton_sets: Vec<Vec<Vec<(usize, usize)>>> =
        (vlo..=vhi).map(|n| skeletons(env.orientation, env.family, n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(vlo..=vhi);
        let options = &skeleton_sets[n - vlo];
        let skeleton = &options[rng.gen_range(0..options.len())];
        let loops = match env.loops {
            LoopPolicy::None => 0,
            LoopPolicy::All => (1u64 << n) - 1,
            LoopPolicy::Any => rng.gen_range(0..1u64 << n),
        };
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(wlo..=whi)).collect();
        if env.ruleset == Ruleset::Stockman && weights.iter().all(|&w| w == 0) {
            continue;
        }
        let start = rng.gen_range(0..n);
        out.push(spec.position(spec.graph(n, skeleton, loops, &weights), start));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_envelope_counts() {
        let env = Envelope::new(Orientation::Directed, Ruleset::VertexNim, Convention::Normal)
            .vertices(3..=3)
            .weights(2..=3)
            .family(GraphFamily::Circuits)
            .loops(LoopPolicy::None);
        assert_eq!(enumerate_instances(&env).unwrap().count(), 8 * 3);
    }

    #[test]
    fn directed_graphs_are_strongly_connected() {
        let env = Envelope::new(Orientation::Directed, Ruleset::VertexNim, Convention::Normal)
            .vertices(1..=3)
            .weights(1..=1)
            .loops(LoopPolicy::None);
        for pos in enumerate_instances(&env).unwrap() {
            assert!(pos.graph().validate_playable().is_ok());
        }
        // labeled strongly connected digraphs on 1, 2, 3 vertices: 1, 1, 18
        assert_eq!(skeletons(Orientation::Directed, GraphFamily::Connected, 3).len(), 18);
        assert_eq!(skeletons(Orientation::Directed, GraphFamily::Connected, 2).len(), 1);
        // the path a -> b never appears
        assert!(!skeletons(Orientation::Directed, GraphFamily::Connected, 2).contains(&vec![(0, 1)]));
    }

    #[test]
    fn connected_graph_counts() {
        // labeled connected graphs: 1, 1, 4, 38
        let counts: Vec<usize> = (1..=4)
            .map(|n| skeletons(Orientation::Undirected, GraphFamily::Connected, n).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 38]);
    }

    #[test]
    fn empty_envelopes_are_rejected() {
        let env = Envelope::new(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal);
        assert!(matches!(enumerate_instances(&env.clone().weights(0..=0)), Err(EnumerateError::Empty(_))));
        assert!(matches!(enumerate_instances(&env.clone().vertices(RangeInclusive::new(3, 2))), Err(EnumerateError::Empty(_))));
        assert!(matches!(
            enumerate_instances(&env.clone().family(GraphFamily::Circuits).vertices(1..=2)),
            Err(EnumerateError::Empty(_))
        ));
        assert!(matches!(enumerate_instances(&env.vertices(1..=9)), Err(EnumerateError::TooLarge(_))));
    }

    #[test]
    fn stockman_skips_all_zero_vectors() {
        let env = Envelope::new(Orientation::Undirected, Ruleset::Stockman, Convention::Normal)
            .vertices(1..=1)
            .weights(0..=2)
            .loops(LoopPolicy::None);
        let ws: Vec<u64> = enumerate_instances(&env).unwrap().map(|p| p.graph().weight(0)).collect();
        assert_eq!(ws, vec![1, 2]);
    }

    #[test]
    fn sampling_is_seeded() {
        let env = Envelope::new(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal).vertices(2..=4);
        let a = sample_instances(&env, 50, 7).unwrap();
        let b = sample_instances(&env, 50, 7).unwrap();
        let c = sample_instances(&env, 50, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
