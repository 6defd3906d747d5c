//! Vertex-weighted game graphs.
//!
//! A [`GameGraph`] is an immutable value: every transformation returns a new
//! graph. Vertices are kept sorted by [`VertexId`] so that iteration order is
//! deterministic, and adjacency is stored as sorted index lists.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Token reserved for the end-of-game destination in move notation.
pub const END_TOKEN: &str = "end";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid vertex id {0:?}: ids must be non-empty, contain no whitespace and not be `end`")]
    InvalidId(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("edge references undeclared vertex `{0}`")]
    DanglingEndpoint(String),
    #[error("vertex `{0}` has negative weight {1}")]
    NegativeWeight(VertexId, i64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("operation requires a {expected} graph")]
    WrongOrientation { expected: Orientation },
}

/// Opaque vertex name. Printable, whitespace free.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty()
            || id == END_TOKEN
            || id.chars().any(|c| c.is_whitespace() || c.is_control())
        {
            return Err(GraphError::InvalidId(id));
        }
        Ok(VertexId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

impl TryFrom<String> for VertexId {
    type Error = GraphError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        VertexId::new(s)
    }
}

impl From<VertexId> for String {
    fn from(id: VertexId) -> String {
        id.0
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Directed,
    Undirected,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Directed => "directed",
            Orientation::Undirected => "undirected",
        })
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "directed" | "D" | "d" => Ok(Orientation::Directed),
            "undirected" | "U" | "u" => Ok(Orientation::Undirected),
            other => Err(format!("unknown orientation `{other}`")),
        }
    }
}

/// A pair of vertices with no path from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no path from `{from}` to `{to}`")]
pub struct Unreachable {
    pub from: VertexId,
    pub to: VertexId,
}

/// Weighted graph with optional loops and no parallel edges.
///
/// For undirected graphs `succ` holds the neighbor lists and `pred` is left
/// empty; [`GameGraph::pred`] falls back to `succ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    orientation: Orientation,
    ids: Vec<VertexId>,
    weights: Vec<u64>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl GameGraph {
    /// The terminal graph with no vertices.
    pub fn empty(orientation: Orientation) -> Self {
        GameGraph {
            orientation,
            ids: Vec::new(),
            weights: Vec::new(),
            succ: Vec::new(),
            pred: Vec::new(),
        }
    }

    /// Builds a normalized graph from a vertex/weight list and an edge list.
    ///
    /// Undirected edges are stored symmetrically and duplicates collapse.
    /// `(a, a)` declares a loop.
    pub fn build<V, E, S, T, U>(orientation: Orientation, vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (S, i64)>,
        E: IntoIterator<Item = (T, U)>,
        S: AsRef<str>,
        T: AsRef<str>,
        U: AsRef<str>,
    {
        let mut weights = BTreeMap::new();
        for (id, weight) in vertices {
            let id = VertexId::new(id.as_ref())?;
            if weight < 0 {
                return Err(GraphError::NegativeWeight(id, weight));
            }
            if weights.contains_key(&id) {
                return Err(GraphError::DuplicateVertex(id));
            }
            weights.insert(id, weight as u64);
        }
        let ids: Vec<VertexId> = weights.keys().cloned().collect();
        let weights: Vec<u64> = weights.into_values().collect();
        let lookup = |s: &str| -> Result<usize, GraphError> {
            ids.binary_search_by(|probe| probe.as_str().cmp(s))
                .map_err(|_| GraphError::DanglingEndpoint(s.to_string()))
        };
        let mut arcs = Vec::new();
        for (a, b) in edges {
            arcs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Ok(Self::from_arcs(orientation, ids, weights, arcs))
    }

    /// Index-level constructor. `ids` must be sorted and unique.
    pub(crate) fn from_arcs(
        orientation: Orientation,
        ids: Vec<VertexId>,
        weights: Vec<u64>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let n = ids.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut pred: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (a, b) in arcs {
            succ[a].insert(b);
            match orientation {
                Orientation::Directed => {
                    pred[b].insert(a);
                }
                Orientation::Undirected => {
                    succ[b].insert(a);
                }
            }
        }
        let to_vec = |sets: Vec<BTreeSet<usize>>| sets.into_iter().map(|s| s.into_iter().collect()).collect();
        GameGraph {
            orientation,
            ids,
            weights,
            succ: to_vec(succ),
            pred: match orientation {
                Orientation::Directed => to_vec(pred),
                Orientation::Undirected => Vec::new(),
            },
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_directed(&self) -> bool {
        self.orientation == Orientation::Directed
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex ids in sorted order; position `i` is vertex index `i`.
    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &VertexId {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|probe| probe.as_str().cmp(id)).ok()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize, GraphError> {
        self.index_of(id).ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> u64 {
        self.weights[index]
    }

    pub fn weight_of(&self, id: &str) -> Option<u64> {
        self.index_of(id).map(|i| self.weights[i])
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Out-neighbors (directed) or neighbors (undirected), sorted, including
    /// the vertex itself when it carries a loop.
    pub fn succ(&self, index: usize) -> &[usize] {
        &self.succ[index]
    }

    /// In-neighbors (directed) or neighbors (undirected).
    pub fn pred(&self, index: usize) -> &[usize] {
        match self.orientation {
            Orientation::Directed => &self.pred[index],
            Orientation::Undirected => &self.succ[index],
        }
    }

    pub fn has_loop(&self, index: usize) -> bool {
        self.succ[index].binary_search(&index).is_ok()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.succ[from].binary_search(&to).is_ok()
    }

    pub fn all_looped(&self) -> bool {
        (0..self.len()).all(|i| self.has_loop(i))
    }

    /// Number of edges (undirected, each counted once) or arcs, loops included.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.succ.iter().map(Vec::len).sum();
        match self.orientation {
            Orientation::Directed => total,
            Orientation::Undirected => {
                let loops = (0..self.len()).filter(|&i| self.has_loop(i)).count();
                (total - loops) / 2 + loops
            }
        }
    }

    /// Normalized edge list: arcs in (from, to) order, undirected edges with
    /// `a <= b`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (a, succ) in self.succ.iter().enumerate() {
            for &b in succ {
                if self.orientation == Orientation::Directed || a <= b {
                    out.push((self.ids[a].clone(), self.ids[b].clone()));
                }
            }
        }
        out
    }

    /// Copy of the graph with one weight replaced.
    pub fn with_weight(&self, index: usize, weight: u64) -> GameGraph {
        let mut g = self.clone();
        g.weights[index] = weight;
        g
    }

    /// Subgraph induced by the vertices with `keep[i]` set. Weights and loops
    /// carry over.
    pub fn induced(&self, keep: &[bool]) -> GameGraph {
        let mut remap = vec![usize::MAX; self.len()];
        let mut ids = Vec::new();
        let mut weights = Vec::new();
        for i in 0..self.len() {
            if keep[i] {
                remap[i] = ids.len();
                ids.push(self.ids[i].clone());
                weights.push(self.weights[i]);
            }
        }
        let arcs = (0..self.len())
            .filter(|&a| keep[a])
            .flat_map(|a| self.succ[a].iter().filter(|&&b| keep[b]).map(move |&b| (a, b)))
            .map(|(a, b)| (remap[a], remap[b]))
            .collect::<Vec<_>>();
        GameGraph::from_arcs(self.orientation, ids, weights, arcs)
    }

    /// Deletes a vertex whose weight dropped to zero.
    ///
    /// Undirected: the neighbors of `v` become a clique and each gains a loop.
    /// Directed: every in-neighbor `p` is joined to every out-neighbor `s`
    /// (a loop when `p == s`). A loop on `v` itself plays no part.
    pub fn remove_zero_vertex(&self, v: &str) -> Result<GameGraph, GraphError> {
        let index = self.require(v)?;
        Ok(self.remove_vertex_at(index))
    }

    pub(crate) fn remove_vertex_at(&self, v: usize) -> GameGraph {
        let shift = |i: usize| if i > v { i - 1 } else { i };
        let froms: Vec<usize> = self.pred(v).iter().copied().filter(|&p| p != v).collect();
        let tos: Vec<usize> = self.succ(v).iter().copied().filter(|&s| s != v).collect();

        let mut arcs = Vec::with_capacity(self.succ.iter().map(Vec::len).sum::<usize>() + froms.len() * tos.len());
        for (a, succ) in self.succ.iter().enumerate() {
            if a == v {
                continue;
            }
            for &b in succ {
                if b != v {
                    arcs.push((shift(a), shift(b)));
                }
            }
        }
        for &p in &froms {
            for &s in &tos {
                arcs.push((shift(p), shift(s)));
            }
        }

        let mut ids = self.ids.clone();
        ids.remove(v);
        let mut weights = self.weights.clone();
        weights.remove(v);
        GameGraph::from_arcs(self.orientation, ids, weights, arcs)
    }

    /// Strongly connected components with their condensation order.
    pub fn strongly_connected_components(&self) -> Result<SccPartition, GraphError> {
        if self.orientation != Orientation::Directed {
            return Err(GraphError::WrongOrientation {
                expected: Orientation::Directed,
            });
        }
        let alive = vec![true; self.len()];
        // Tarjan emits sinks first; reverse for a topological order.
        let mut comps = tarjan_scc(self, &alive);
        comps.reverse();
        let mut comp_of = vec![0usize; self.len()];
        for (c, members) in comps.iter().enumerate() {
            for &m in members {
                comp_of[m] = c;
            }
        }
        let successors = comps
            .iter()
            .enumerate()
            .map(|(c, members)| {
                members
                    .iter()
                    .flat_map(|&m| self.succ(m).iter().map(|&s| comp_of[s]))
                    .filter(|&d| d != c)
                    .collect::<BTreeSet<_>>()
            })
            .collect();
        Ok(SccPartition {
            components: comps
                .into_iter()
                .map(|members| members.into_iter().map(|m| self.ids[m].clone()).collect())
                .collect(),
            successors,
        })
    }

    /// The maximal connected vertex set containing `v` (undirected only).
    pub fn connected_component_of(&self, v: &str) -> Result<BTreeSet<VertexId>, GraphError> {
        if self.orientation != Orientation::Undirected {
            return Err(GraphError::WrongOrientation {
                expected: Orientation::Undirected,
            });
        }
        let start = self.require(v)?;
        let seen = self.reach(start, |_| true, false);
        Ok((0..self.len()).filter(|&i| seen[i]).map(|i| self.ids[i].clone()).collect())
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`,
    /// following successors (or predecessors when `reverse`).
    pub(crate) fn reach(&self, start: usize, allow: impl Fn(usize) -> bool, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let next = if reverse { self.pred(x) } else { self.succ(x) };
            for &y in next {
                if !seen[y] && allow(y) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Checks the connectivity requirement for play: strong connectivity for
    /// digraphs, connectivity for undirected graphs.
    pub fn validate_playable(&self) -> Result<(), Unreachable> {
        if self.is_empty() {
            return Ok(());
        }
        let missing = |seen: &[bool]| seen.iter().position(|&s| !s);
        let forward = self.reach(0, |_| true, false);
        if let Some(to) = missing(&forward) {
            return Err(Unreachable {
                from: self.ids[0].clone(),
                to: self.ids[to].clone(),
            });
        }
        if self.orientation == Orientation::Directed {
            let backward = self.reach(0, |_| true, true);
            if let Some(from) = missing(&backward) {
                return Err(Unreachable {
                    from: self.ids[from].clone(),
                    to: self.ids[0].clone(),
                });
            }
        }
        Ok(())
    }

    /// Graphviz rendering. Weights become labels, directed graphs use `->`.
    pub fn to_dot(&self, current: Option<usize>) -> String {
        let (kind, arrow) = match self.orientation {
            Orientation::Directed => ("digraph", "->"),
            Orientation::Undirected => ("graph", "--"),
        };
        let mut out = format!("{kind} G {{\n");
        for (i, id) in self.ids.iter().enumerate() {
            let shape = if Some(i) == current { ", shape=triangle" } else { "" };
            out.push_str(&format!("  \"{id}\" [label=\"{id}:{}\"{shape}];\n", self.weights[i]));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  \"{a}\" {arrow} \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Strongly connected components of the subgraph on `alive` vertices,
/// sinks first (Tarjan order). Iterative; roots and neighbors are visited in
/// index order so the output is deterministic. Members are sorted.
pub(crate) fn tarjan_scc(g: &GameGraph, alive: &[bool]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !alive[root] || index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            let succ = g.succ(v);
            if top.1 < succ.len() {
                let w = succ[top.1];
                top.1 += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Partition of a digraph into strongly connected components, listed in a
/// topological order of the condensation (sources before sinks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<Vec<VertexId>>,
    /// `successors[i]`: components reached by an arc leaving component `i`.
    pub successors: Vec<BTreeSet<usize>>,
}

impl SccPartition {
    /// Components with no arc leaving them.
    pub fn sink_components(&self) -> Vec<&[VertexId]> {
        self.components
            .iter()
            .zip(&self.successors)
            .filter(|(_, succ)| succ.is_empty())
            .map(|(c, _)| c.as_slice())
            .collect()
    }

    pub fn component_of(&self, v: &str) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.iter().any(|id| id.as_str() == v))
    }
}
