//! In-memory game sessions and the engine that answers human moves.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use vertexnim::{
    parse_instance, serialize, Convention, Destination, GameGraph, Move, Position, RulesError, Ruleset,
    SolveError, Solver, VertexId,
};

use crate::wire::{
    Actor, Analysis, CreateGame, Created, EngineSide, GameView, GraphSpec, HistoryEntry, MoveRequest, MoveResult,
    MoveView, StateView,
};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("no game with id `{0}`")]
    UnknownSession(String),
    #[error("{message}")]
    InvalidInstance { field: Option<String>, message: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    IllegalMove(String),
    #[error("it is not your turn")]
    WrongTurn,
    #[error("the game is over")]
    Finished,
    #[error("snapshot: {0}")]
    Snapshot(String),
}

fn invalid(field: impl Into<String>, message: impl ToString) -> SessionError {
    SessionError::InvalidInstance {
        field: Some(field.into()),
        message: message.to_string(),
    }
}

/// Builds the starting position, naming the request field at fault.
pub fn build_position(ruleset: Ruleset, convention: Convention, spec: &GraphSpec) -> Result<Position, SessionError> {
    if ruleset == Ruleset::Stockman && convention == Convention::Misere {
        return Err(SessionError::Unsupported(RulesError::UnsupportedMisereStockman.to_string()));
    }
    if spec.vertices.is_empty() {
        return Err(invalid("graph.vertices", "graph has no vertices"));
    }
    let mut seen = HashSet::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if let Err(e) = VertexId::new(v.id.as_str()) {
            return Err(invalid(format!("graph.vertices[{i}].id"), e));
        }
        if !seen.insert(v.id.as_str()) {
            return Err(invalid(format!("graph.vertices[{i}].id"), format!("duplicate vertex id `{}`", v.id)));
        }
        if v.weight < 0 || (v.weight == 0 && ruleset == Ruleset::VertexNim) {
            return Err(invalid(
                format!("graph.vertices[{i}].weight"),
                format!("weight {} is not allowed under {ruleset} rules", v.weight),
            ));
        }
    }
    for (i, (a, b)) in spec.edges.iter().enumerate() {
        if let Some(end) = [a, b].into_iter().find(|end| !seen.contains(end.as_str())) {
            return Err(invalid(format!("graph.edges[{i}]"), format!("`{end}` is not a declared vertex")));
        }
    }
    if !seen.contains(spec.start.as_str()) {
        return Err(invalid("graph.start", format!("start vertex `{}` is not declared", spec.start)));
    }
    let loops = spec
        .vertices
        .iter()
        .filter(|v| v.looped)
        .map(|v| (v.id.clone(), v.id.clone()));
    let graph = GameGraph::build(
        spec.orientation,
        spec.vertices.iter().map(|v| (v.id.as_str(), v.weight)),
        spec.edges.iter().cloned().chain(loops),
    )
    .map_err(|e| invalid("graph", e))?;
    Position::new(graph, &spec.start, ruleset, convention).map_err(|e| match e {
        RulesError::NotPlayable(_) => invalid("graph.edges", e),
        other => invalid("graph", other),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Played {
    by: Actor,
    play: Move,
}

/// One game: where it started, every move since, and who the engine plays.
#[derive(Clone, Debug)]
pub struct GameSession {
    id: String,
    initial: Position,
    position: Position,
    history: Vec<(Position, Played)>,
    engine: EngineSide,
    /// Analysis of the position after `history.len()` moves.
    analysis: Option<(usize, Analysis)>,
}

impl GameSession {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn position(&self) -> &Position {
        &self.position
    }

    pub fn engine_side(&self) -> EngineSide {
        self.engine
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.history.iter().map(|(_, p)| &p.play)
    }

    /// Every move with the position it was played from and who chose it.
    pub fn plays(&self) -> impl Iterator<Item = (&Position, Actor, &Move)> {
        self.history.iter().map(|(before, p)| (before, p.by, &p.play))
    }

    pub fn view(&self) -> GameView {
        GameView {
            state: StateView::new(&self.position),
            history: self
                .history
                .iter()
                .map(|(before, p)| HistoryEntry {
                    player: before.to_move(),
                    by: p.by,
                    play: MoveView::new(before, &p.play),
                })
                .collect(),
        }
    }

    /// Rebuilds the current position from the initial one and the history.
    pub fn replay(&self) -> Result<Position, RulesError> {
        self.moves()
            .try_fold(self.initial.clone(), |pos, m| pos.apply_move(m))
    }

    fn play(&mut self, by: Actor, m: Move) -> Result<MoveView, SessionError> {
        let next = self
            .position
            .apply_move(&m)
            .map_err(|e| SessionError::IllegalMove(e.to_string()))?;
        let view = MoveView::new(&self.position, &m);
        let before = std::mem::replace(&mut self.position, next);
        self.history.push((before, Played { by, play: m }));
        Ok(view)
    }

    fn engine_to_move(&self) -> bool {
        !self.position.is_terminal() && self.engine.plays(self.position.to_move())
    }
}

/// The engine's choice: a winning move when the solver has one, otherwise
/// the first destination by id, removing as little weight as allowed.
pub fn engine_move(solver: &Solver, pos: &Position) -> Option<Move> {
    if pos.is_terminal() {
        return None;
    }
    match solver.winning_move(pos) {
        Ok(Some(m)) => return Some(m),
        Ok(None) => {}
        Err(e) => log::debug!("engine falls back to the heuristic: {e}"),
    }
    fallback_move(pos)
}

fn fallback_move(pos: &Position) -> Option<Move> {
    let moves = pos.legal_moves().ok()?;
    moves
        .into_iter()
        .min_by(|a, b| {
            a.destination
                .cmp(&b.destination)
                .then(b.reduce_to.cmp(&a.reduce_to))
        })
}

pub fn analyze_position(solver: &Solver, pos: &Position) -> Analysis {
    match solver.solve(pos) {
        Ok(report) => Analysis {
            outcome: Some(report.outcome.to_string()),
            method: report.method.to_string(),
            witness: report.witness.map(|m| MoveView::new(pos, &m)),
            detail: None,
        },
        Err(SolveError::OpenProblem(reason)) => Analysis {
            outcome: None,
            method: "open-problem".into(),
            witness: None,
            detail: Some(reason),
        },
        Err(e) => Analysis {
            outcome: None,
            method: "error".into(),
            witness: None,
            detail: Some(e.to_string()),
        },
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SnapshotMove {
    by: Actor,
    reduce_to: u64,
    move_to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SnapshotEntry {
    id: String,
    /// Instance file text of the starting position.
    instance: String,
    engine_side: EngineSide,
    history: Vec<SnapshotMove>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Snapshot {
    sessions: Vec<SnapshotEntry>,
}

type Shared = Arc<Mutex<GameSession>>;

/// All live sessions. Each session has its own lock, so requests on
/// different games run in parallel.
pub struct SessionStore {
    solver: Arc<Solver>,
    sessions: RwLock<HashMap<String, Shared>>,
    /// Snapshot entries not yet requested since startup.
    pending: Mutex<HashMap<String, SnapshotEntry>>,
    state_file: Option<PathBuf>,
}

impl SessionStore {
    pub fn new(solver: Arc<Solver>) -> SessionStore {
        SessionStore {
            solver,
            sessions: RwLock::new(HashMap::new()),
            pending: Mutex::new(HashMap::new()),
            state_file: None,
        }
    }

    /// A store backed by a snapshot file. Saved games are rebuilt the first
    /// time they are requested.
    pub fn with_state_file(solver: Arc<Solver>, path: impl Into<PathBuf>) -> Result<SessionStore, SessionError> {
        let path = path.into();
        let mut store = SessionStore::new(solver);
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| SessionError::Snapshot(e.to_string()))?;
            let snapshot: Snapshot = serde_json::from_str(&text).map_err(|e| SessionError::Snapshot(e.to_string()))?;
            store.pending = Mutex::new(snapshot.sessions.into_iter().map(|e| (e.id.clone(), e)).collect());
        }
        store.state_file = Some(path);
        Ok(store)
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn state_file(&self) -> Option<&Path> {
        self.state_file.as_deref()
    }

    fn fresh_id(&self) -> String {
        format!("{:032x}", rand::thread_rng().gen::<u128>())
    }

    pub fn create(&self, request: &CreateGame) -> Result<Created, SessionError> {
        let initial = build_position(request.game.ruleset, request.game.convention, &request.graph)?;
        let mut session = GameSession {
            id: self.fresh_id(),
            position: initial.clone(),
            initial,
            history: Vec::new(),
            engine: request.engine_side,
            analysis: None,
        };
        let engine_reply = self.engine_turn(&mut session)?;
        let analysis = analyze_position(&self.solver, &session.position);
        session.analysis = Some((session.history.len(), analysis));
        let created = Created {
            id: session.id.clone(),
            state: StateView::new(&session.position),
            engine_reply,
        };
        self.sessions
            .write()
            .expect("session map lock")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(created)
    }

    pub fn get(&self, id: &str) -> Result<Shared, SessionError> {
        if let Some(found) = self.sessions.read().expect("session map lock").get(id) {
            return Ok(found.clone());
        }
        let entry = self.pending.lock().expect("pending lock").remove(id);
        let Some(entry) = entry else {
            return Err(SessionError::UnknownSession(id.to_string()));
        };
        let session = Arc::new(Mutex::new(restore(entry)?));
        let mut sessions = self.sessions.write().expect("session map lock");
        Ok(sessions.entry(id.to_string()).or_insert(session).clone())
    }

    pub fn view(&self, id: &str) -> Result<GameView, SessionError> {
        let shared = self.get(id)?;
        let session = shared.lock().expect("session lock");
        Ok(session.view())
    }

    pub fn submit_move(&self, id: &str, request: &MoveRequest) -> Result<MoveResult, SessionError> {
        let shared = self.get(id)?;
        let mut session = shared.lock().expect("session lock");
        if session.position.is_terminal() {
            return Err(SessionError::Finished);
        }
        if session.engine_to_move() {
            return Err(SessionError::WrongTurn);
        }
        let destination: Destination = request
            .move_to
            .parse()
            .map_err(|e: vertexnim::GraphError| SessionError::IllegalMove(e.to_string()))?;
        let m = Move {
            reduce_to: request.reduce_to,
            destination,
        };
        session.play(Actor::Human, m)?;
        let engine_reply = self.engine_turn(&mut session)?;
        Ok(MoveResult {
            state: StateView::new(&session.position),
            engine_reply,
        })
    }

    fn engine_turn(&self, session: &mut GameSession) -> Result<Option<MoveView>, SessionError> {
        if !session.engine_to_move() {
            return Ok(None);
        }
        match engine_move(&self.solver, &session.position) {
            Some(m) => session.play(Actor::Engine, m).map(Some),
            None => Ok(None),
        }
    }

    pub fn analyze(&self, id: &str) -> Result<Analysis, SessionError> {
        let shared = self.get(id)?;
        let mut session = shared.lock().expect("session lock");
        let ply = session.history.len();
        if let Some((at, cached)) = &session.analysis {
            if *at == ply {
                return Ok(cached.clone());
            }
        }
        let analysis = analyze_position(&self.solver, &session.position);
        session.analysis = Some((ply, analysis.clone()));
        Ok(analysis)
    }

    /// Writes every session, including ones still pending from the last
    /// snapshot, to the state file. No-op without a state file.
    pub fn save_snapshot(&self) -> Result<(), SessionError> {
        let Some(path) = &self.state_file else {
            return Ok(());
        };
        let mut entries: Vec<SnapshotEntry> = self.pending.lock().expect("pending lock").values().cloned().collect();
        for shared in self.sessions.read().expect("session map lock").values() {
            let session = shared.lock().expect("session lock");
            entries.push(SnapshotEntry {
                id: session.id.clone(),
                instance: serialize(&session.initial),
                engine_side: session.engine,
                history: session
                    .history
                    .iter()
                    .map(|(_, p)| SnapshotMove {
                        by: p.by,
                        reduce_to: p.play.reduce_to,
                        move_to: p.play.destination.to_string(),
                    })
                    .collect(),
            });
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        let text = serde_json::to_string_pretty(&Snapshot { sessions: entries })
            .map_err(|e| SessionError::Snapshot(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| SessionError::Snapshot(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len() + self.pending.lock().expect("pending lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn restore(entry: SnapshotEntry) -> Result<GameSession, SessionError> {
    let bad = |e: &dyn std::fmt::Display| SessionError::Snapshot(format!("game `{}`: {e}", entry.id));
    let initial = parse_instance(&entry.instance).map_err(|e| bad(&e))?;
    let mut session = GameSession {
        id: entry.id.clone(),
        position: initial.clone(),
        initial,
        history: Vec::new(),
        engine: entry.engine_side,
        analysis: None,
    };
    for m in &entry.history {
        let destination: Destination = m.move_to.parse().map_err(|e| bad(&e))?;
        let play = Move {
            reduce_to: m.reduce_to,
            destination,
        };
        session.play(m.by, play).map_err(|e| bad(&e))?;
    }
    Ok(session)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire::{GameRules, VertexSpec};
    use vertexnim::Orientation;

    fn path_request(engine: EngineSide) -> CreateGame {
        CreateGame {
            game: GameRules {
                ruleset: Ruleset::VertexNim,
                convention: Convention::Normal,
            },
            graph: GraphSpec {
                orientation: Orientation::Undirected,
                vertices: [("a", 2), ("b", 3), ("c", 2)]
                    .iter()
                    .map(|&(id, weight)| VertexSpec {
                        id: id.into(),
                        weight,
                        looped: false,
                    })
                    .collect(),
                edges: vec![("a".into(), "b".into()), ("b".into(), "c".into())],
                start: "b".into(),
            },
            engine_side: engine,
        }
    }

    #[test]
    fn ids_are_128_bit_hex() {
        let store = SessionStore::new(Arc::new(Solver::default()));
        let a = store.create(&path_request(EngineSide::None)).unwrap().id;
        let b = store.create(&path_request(EngineSide::None)).unwrap().id;
        assert_eq!(a.len(), 32);
        assert!(a.chars().all(|c| c.is_ascii_hexdigit()));
        assert_ne!(a, b);
    }

    #[test]
    fn field_diagnostics() {
        let mut req = path_request(EngineSide::None);
        req.graph.vertices[1].weight = 0;
        let err = build_position(req.game.ruleset, req.game.convention, &req.graph).unwrap_err();
        assert!(matches!(err, SessionError::InvalidInstance { field: Some(ref f), .. } if f == "graph.vertices[1].weight"));
        let mut req = path_request(EngineSide::None);
        req.graph.edges.pop();
        let err = build_position(req.game.ruleset, req.game.convention, &req.graph).unwrap_err();
        assert!(matches!(err, SessionError::InvalidInstance { field: Some(ref f), .. } if f == "graph.edges"));
    }

    #[test]
    fn heuristic_takes_first_destination_and_least_weight() {
        let req = path_request(EngineSide::None);
        let pos = build_position(req.game.ruleset, req.game.convention, &req.graph).unwrap();
        assert_eq!(fallback_move(&pos), Some(Move::to(2, "a")));
    }

    #[test]
    fn replay_matches_position() {
        let store = SessionStore::new(Arc::new(Solver::default()));
        let id = store.create(&path_request(EngineSide::Second)).unwrap().id;
        store
            .submit_move(&id, &MoveRequest { reduce_to: 1, move_to: "a".into() })
            .unwrap();
        let shared = store.get(&id).unwrap();
        let session = shared.lock().unwrap();
        assert_eq!(session.history.len(), 2);
        assert_eq!(serialize(&session.replay().unwrap()), serialize(session.position()));
    }
}
