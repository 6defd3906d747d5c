//! The two peeling labelings used by the directed and undirected solvers.
//!
//! Both repeatedly pick a base set `S`, label it, label its fringe `T` as N,
//! and continue on what is left:
//!
//! * `lo` (digraphs): `S` is a sink strongly connected component of the
//!   residual graph and `T` the vertices with an arc into `S`. An even `S` is
//!   labeled N and removed alone; an odd `S` is labeled P and removed with `T`.
//! * `lu` (weighted undirected graphs): `S` is the set of vertices no heavier
//!   than any neighbor, labeled P, and `T` their remaining neighbors.

use std::collections::BTreeMap;

use super::{Outcome, SolveError};
use crate::graph::{tarjan_scc, GameGraph, Orientation, VertexId};

/// One peeling round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelStep {
    pub base: Vec<VertexId>,
    pub base_label: Outcome,
    /// Always labeled N. Empty when an even `lo` component is removed alone.
    pub fringe: Vec<VertexId>,
}

/// P/N label for every vertex plus the rounds that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub labels: BTreeMap<VertexId, Outcome>,
    pub steps: Vec<LabelStep>,
}

impl Labeling {
    pub fn get(&self, v: &str) -> Option<Outcome> {
        self.labels.get(v).copied()
    }

    fn from_indices(g: &GameGraph, labels: Vec<Option<Outcome>>, steps: Vec<IndexStep>) -> Labeling {
        let names = |vs: Vec<usize>| vs.into_iter().map(|i| g.id(i).clone()).collect();
        Labeling {
            labels: labels
                .into_iter()
                .enumerate()
                .filter_map(|(i, l)| l.map(|l| (g.id(i).clone(), l)))
                .collect(),
            steps: steps
                .into_iter()
                .map(|s| LabelStep {
                    base: names(s.base),
                    base_label: s.base_label,
                    fringe: names(s.fringe),
                })
                .collect(),
        }
    }
}

pub(crate) struct IndexStep {
    pub base: Vec<usize>,
    pub base_label: Outcome,
    pub fringe: Vec<usize>,
}

/// `lo` labeling of a digraph. Sink components are taken in Tarjan order.
pub fn lo_labeling(g: &GameGraph) -> Result<Labeling, SolveError> {
    lo_labeling_with(g, |_| 0)
}

/// `lo` labeling where `pick` chooses which of the current sink components
/// (given as vertex index lists) to peel next. The result does not depend on
/// the choice.
pub fn lo_labeling_with(g: &GameGraph, pick: impl FnMut(&[Vec<usize>]) -> usize) -> Result<Labeling, SolveError> {
    if g.orientation() != Orientation::Directed {
        return Err(SolveError::Precondition("lo labeling needs a directed graph".into()));
    }
    if g.is_empty() {
        return Err(SolveError::EmptyGraph);
    }
    let (labels, steps) = lo_core(g, vec![true; g.len()], pick);
    Ok(Labeling::from_indices(g, labels, steps))
}

/// `lo` restricted to the vertices with `alive[i]` set (the induced subgraph).
pub(crate) fn lo_core(
    g: &GameGraph,
    mut alive: Vec<bool>,
    mut pick: impl FnMut(&[Vec<usize>]) -> usize,
) -> (Vec<Option<Outcome>>, Vec<IndexStep>) {
    let n = g.len();
    let mut labels = vec![None; n];
    let mut steps = Vec::new();
    let mut comp_of = vec![usize::MAX; n];
    let mut remaining = alive.iter().filter(|&&a| a).count();

    while remaining > 0 {
        let comps = tarjan_scc(g, &alive);
        for (c, members) in comps.iter().enumerate() {
            for &m in members {
                comp_of[m] = c;
            }
        }
        let sinks: Vec<Vec<usize>> = comps
            .iter()
            .enumerate()
            .filter(|(c, members)| {
                members
                    .iter()
                    .all(|&m| g.succ(m).iter().all(|&s| !alive[s] || comp_of[s] == *c))
            })
            .map(|(_, members)| members.clone())
            .collect();
        let choice = pick(&sinks);
        let base = sinks[choice].clone();
        let base_comp = comp_of[base[0]];

        let mut fringe: Vec<usize> = base
            .iter()
            .flat_map(|&m| g.pred(m).iter().copied())
            .filter(|&p| alive[p] && comp_of[p] != base_comp)
            .collect();
        fringe.sort_unstable();
        fringe.dedup();

        if base.len().is_multiple_of(2) {
            for &m in &base {
                labels[m] = Some(Outcome::N);
                alive[m] = false;
            }
            remaining -= base.len();
            steps.push(IndexStep {
                base,
                base_label: Outcome::N,
                fringe: Vec::new(),
            });
        } else {
            for &m in &base {
                labels[m] = Some(Outcome::P);
                alive[m] = false;
            }
            for &t in &fringe {
                labels[t] = Some(Outcome::N);
                alive[t] = false;
            }
            remaining -= base.len() + fringe.len();
            steps.push(IndexStep {
                base,
                base_label: Outcome::P,
                fringe,
            });
        }
    }
    (labels, steps)
}

/// `lu` labeling of a loop-free weighted undirected graph.
pub fn lu_labeling(g: &GameGraph) -> Result<Labeling, SolveError> {
    if g.orientation() != Orientation::Undirected {
        return Err(SolveError::Precondition("lu labeling needs an undirected graph".into()));
    }
    if g.is_empty() {
        return Err(SolveError::EmptyGraph);
    }
    if let Some(v) = (0..g.len()).find(|&v| g.has_loop(v)) {
        return Err(SolveError::Precondition(format!("lu labeling is undefined on looped vertex `{}`", g.id(v))));
    }
    let (labels, steps) = lu_core(g, vec![true; g.len()]);
    Ok(Labeling::from_indices(g, labels, steps))
}

/// `lu` restricted to the vertices with `alive[i]` set. Loops are ignored.
pub(crate) fn lu_core(g: &GameGraph, mut alive: Vec<bool>) -> (Vec<Option<Outcome>>, Vec<IndexStep>) {
    let n = g.len();
    let w = g.weights();
    let mut labels = vec![None; n];
    let mut steps = Vec::new();
    let mut live: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut in_base = vec![false; n];

    while !live.is_empty() {
        let base: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&v| g.succ(v).iter().all(|&x| x == v || !alive[x] || w[v] <= w[x]))
            .collect();
        debug_assert!(!base.is_empty(), "a lightest vertex always qualifies");
        for &v in &base {
            in_base[v] = true;
        }
        let fringe: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&v| !in_base[v] && g.succ(v).iter().any(|&x| alive[x] && in_base[x]))
            .collect();
        for &v in &base {
            labels[v] = Some(Outcome::P);
            alive[v] = false;
        }
        for &v in &fringe {
            labels[v] = Some(Outcome::N);
            alive[v] = false;
        }
        live.retain(|&v| alive[v]);
        steps.push(IndexStep {
            base,
            base_label: Outcome::P,
            fringe,
        });
    }
    (labels, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(vs: &[&str], arcs: &[(&str, &str)]) -> GameGraph {
        GameGraph::build(Orientation::Directed, vs.iter().map(|v| (*v, 1)), arcs.iter().copied()).unwrap()
    }

    fn weighted(vs: &[(&str, i64)], es: &[(&str, &str)]) -> GameGraph {
        GameGraph::build(Orientation::Undirected, vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn lo_single_vertex_is_p() {
        let l = lo_labeling(&digraph(&["u"], &[("u", "u")])).unwrap();
        assert_eq!(l.get("u"), Some(Outcome::P));
    }

    #[test]
    fn lo_even_cycle_is_n() {
        let l = lo_labeling(&digraph(&["a", "b"], &[("a", "b"), ("b", "a")])).unwrap();
        assert_eq!(l.get("a"), Some(Outcome::N));
        assert_eq!(l.get("b"), Some(Outcome::N));
        assert_eq!(l.steps.len(), 1);
        assert!(l.steps[0].fringe.is_empty());
    }

    #[test]
    fn lo_even_sink_leaves_feeder_for_later() {
        let l = lo_labeling(&digraph(&["a", "b", "c"], &[("a", "b"), ("b", "a"), ("c", "a")])).unwrap();
        assert_eq!(l.get("a"), Some(Outcome::N));
        assert_eq!(l.get("b"), Some(Outcome::N));
        assert_eq!(l.get("c"), Some(Outcome::P));
        assert_eq!(l.steps.len(), 2);
    }

    #[test]
    fn lo_odd_sink_takes_feeders() {
        // b is a lone sink; a feeds it and is labeled N with it.
        let l = lo_labeling(&digraph(&["a", "b"], &[("a", "b")])).unwrap();
        assert_eq!(l.get("b"), Some(Outcome::P));
        assert_eq!(l.get("a"), Some(Outcome::N));
        assert_eq!(l.steps.len(), 1);
    }

    #[test]
    fn lo_rejects_bad_input() {
        assert!(lo_labeling(&GameGraph::empty(Orientation::Directed)).is_err());
        assert!(lo_labeling(&weighted(&[("a", 1)], &[])).is_err());
    }

    #[test]
    fn lu_edge() {
        let l = lu_labeling(&weighted(&[("a", 2), ("b", 3)], &[("a", "b")])).unwrap();
        assert_eq!((l.get("a"), l.get("b")), (Some(Outcome::P), Some(Outcome::N)));
    }

    #[test]
    fn lu_equal_weights_are_all_base() {
        let l = lu_labeling(&weighted(&[("a", 2), ("b", 2)], &[("a", "b")])).unwrap();
        assert_eq!((l.get("a"), l.get("b")), (Some(Outcome::P), Some(Outcome::P)));
    }

    #[test]
    fn lu_path_two_rounds() {
        let g = weighted(
            &[("a", 2), ("b", 3), ("c", 4), ("d", 5), ("e", 4)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")],
        );
        let l = lu_labeling(&g).unwrap();
        let got: Vec<_> = ["a", "b", "c", "d", "e"].iter().map(|v| l.get(v).unwrap()).collect();
        use Outcome::*;
        assert_eq!(got, vec![P, N, P, N, P]);
        assert_eq!(l.steps.len(), 2);
        assert_eq!(l.steps[1].base, vec![VertexId::new("c").unwrap()]);
    }

    #[test]
    fn lu_rejects_loops() {
        assert!(matches!(
            lu_labeling(&weighted(&[("a", 2)], &[("a", "a")])),
            Err(SolveError::Precondition(_))
        ));
    }
}
