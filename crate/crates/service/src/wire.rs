//! JSON bodies of the HTTP protocol.

use serde::{Deserialize, Serialize};
use vertexnim::{Convention, Move, Orientation, Player, Position, Ruleset};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineSide {
    /// Both sides are played through the API.
    #[default]
    None,
    First,
    Second,
}

impl EngineSide {
    pub fn plays(self, player: Player) -> bool {
        matches!(
            (self, player),
            (EngineSide::First, Player::First) | (EngineSide::Second, Player::Second)
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameRules {
    pub ruleset: Ruleset,
    #[serde(default = "normal")]
    pub convention: Convention,
}

fn normal() -> Convention {
    Convention::Normal
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub weight: i64,
    #[serde(default, rename = "loop")]
    pub looped: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub orientation: Orientation,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    pub start: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CreateGame {
    pub game: GameRules,
    pub graph: GraphSpec,
    #[serde(default)]
    pub engine_side: EngineSide,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveRequest {
    pub reduce_to: u64,
    /// A vertex id, or `"end"` when emptying the last vertex.
    pub move_to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveView {
    pub reduce_to: u64,
    pub move_to: String,
    /// e.g. `reduce b to 2, go a`
    pub text: String,
}

impl MoveView {
    pub fn new(pos: &Position, m: &Move) -> MoveView {
        MoveView {
            reduce_to: m.reduce_to,
            move_to: m.destination.to_string(),
            text: pos.describe_move(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Human,
    Engine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub player: Player,
    pub by: Actor,
    #[serde(flatten)]
    pub play: MoveView,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Status {
    Ongoing,
    Finished { winner: Player },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexView {
    pub id: String,
    pub weight: u64,
    #[serde(rename = "loop")]
    pub looped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub ruleset: Ruleset,
    pub convention: Convention,
    pub orientation: Orientation,
    pub vertices: Vec<VertexView>,
    /// Loops are reported on the vertices, not here.
    pub edges: Vec<(String, String)>,
    pub current: Option<String>,
    pub to_move: Player,
    pub status: Status,
    /// What the rules engine accepts next, for client-side validation.
    pub legal_moves: Vec<MoveView>,
}

impl StateView {
    pub fn new(pos: &Position) -> StateView {
        let g = pos.graph();
        let status = match pos.terminal_status() {
            vertexnim::rules::TerminalStatus::Nonterminal => Status::Ongoing,
            vertexnim::rules::TerminalStatus::PreviousMoverWins => Status::Finished {
                winner: pos.to_move().other(),
            },
            vertexnim::rules::TerminalStatus::MoverToActWins => Status::Finished { winner: pos.to_move() },
        };
        let legal_moves = if pos.is_terminal() {
            Vec::new()
        } else {
            pos.legal_moves()
                .map(|ms| ms.iter().map(|m| MoveView::new(pos, m)).collect())
                .unwrap_or_default()
        };
        StateView {
            ruleset: pos.ruleset(),
            convention: pos.convention(),
            orientation: g.orientation(),
            vertices: (0..g.len())
                .map(|v| VertexView {
                    id: g.id(v).to_string(),
                    weight: g.weight(v),
                    looped: g.has_loop(v),
                })
                .collect(),
            edges: g
                .edges()
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            current: pos.current_id().map(|id| id.to_string()),
            to_move: pos.to_move(),
            status,
            legal_moves,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameView {
    pub state: StateView,
    pub history: Vec<HistoryEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub state: StateView,
    /// Set when the engine moves first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_reply: Option<MoveView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveResult {
    pub state: StateView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_reply: Option<MoveView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    /// `"P"` or `"N"`; absent for open problems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    /// Method tag, or `open-problem`.
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MoveView>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    /// Offending request field, e.g. `graph.vertices[2].weight`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}
