//! Line-oriented instance files.
//!
//! ```text
//! # a 3-vertex circuit
//! game vertexnim normal
//! graph directed
//! v a 2
//! v b 3
//! v c 4
//! e a b
//! e b c
//! e c a
//! start a
//! ```
//!
//! `#` starts a comment, tokens are whitespace separated and `e x x`
//! declares a loop.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{GameGraph, GraphError, Orientation};
use crate::rules::{Convention, Position, RulesError, Ruleset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Semantic { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl ToString) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.to_string(),
    }
}

#[derive(Default)]
struct Draft<'a> {
    game: Option<(usize, Ruleset, Convention)>,
    graph: Option<(usize, Orientation)>,
    vertices: Vec<(usize, &'a str, i64)>,
    edges: Vec<(usize, &'a str, &'a str)>,
    start: Option<(usize, &'a str)>,
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Position, ParseError> {
    let mut draft = Draft::default();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(line, format!("`{keyword}` takes {n} argument(s), found {}", args.len())))
            }
        };
        match keyword {
            "game" => {
                arity(2)?;
                if draft.game.is_some() {
                    return Err(syntax(line, "duplicate `game` line"));
                }
                let ruleset = args[0].parse().map_err(|e: String| syntax(line, e))?;
                let convention = args[1].parse().map_err(|e: String| syntax(line, e))?;
                draft.game = Some((line, ruleset, convention));
            }
            "graph" => {
                arity(1)?;
                if draft.graph.is_some() {
                    return Err(syntax(line, "duplicate `graph` line"));
                }
                let orientation = match args[0] {
                    "directed" => Orientation::Directed,
                    "undirected" => Orientation::Undirected,
                    other => return Err(syntax(line, format!("unknown orientation `{other}`"))),
                };
                draft.graph = Some((line, orientation));
            }
            "v" => {
                arity(2)?;
                let weight = args[1]
                    .parse::<i64>()
                    .map_err(|_| syntax(line, format!("weight `{}` is not an integer", args[1])))?;
                draft.vertices.push((line, args[0], weight));
            }
            "e" => {
                arity(2)?;
                draft.edges.push((line, args[0], args[1]));
            }
            "start" => {
                arity(1)?;
                if draft.start.is_some() {
                    return Err(syntax(line, "duplicate `start` line"));
                }
                draft.start = Some((line, args[0]));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let eof = last_line + 1;
    let (game_line, ruleset, convention) = draft.game.ok_or_else(|| syntax(eof, "missing `game` line"))?;
    let (graph_line, orientation) = draft.graph.ok_or_else(|| syntax(eof, "missing `graph` line"))?;
    let (start_line, start) = draft.start.ok_or_else(|| syntax(eof, "missing `start` line"))?;
    if draft.vertices.is_empty() {
        return Err(semantic(graph_line, "graph has no vertices"));
    }

    let mut declared: HashMap<&str, usize> = HashMap::new();
    for &(line, id, weight) in &draft.vertices {
        if declared.insert(id, line).is_some() {
            return Err(semantic(line, format!("duplicate vertex `{id}`")));
        }
        if weight < 0 {
            return Err(semantic(line, format!("vertex `{id}` has negative weight {weight}")));
        }
        if weight == 0 && ruleset == Ruleset::VertexNim {
            return Err(semantic(line, format!("vertex `{id}` has weight 0; vertexnim weights must be positive")));
        }
    }
    for &(line, a, b) in &draft.edges {
        for end in [a, b] {
            if !declared.contains_key(end) {
                return Err(semantic(line, format!("edge endpoint `{end}` is not a declared vertex")));
            }
        }
    }
    if !declared.contains_key(start) {
        return Err(semantic(start_line, format!("start vertex `{start}` is not declared")));
    }

    let graph = GameGraph::build(
        orientation,
        draft.vertices.iter().map(|&(_, id, w)| (id, w)),
        draft.edges.iter().map(|&(_, a, b)| (a, b)),
    )
    .map_err(|e| {
        let line = match &e {
            GraphError::InvalidId(id) => declared.get(id.as_str()).copied().unwrap_or(graph_line),
            _ => graph_line,
        };
        semantic(line, e)
    })?;

    Position::new(graph, start, ruleset, convention).map_err(|e| match e {
        RulesError::UnsupportedMisereStockman => semantic(game_line, e),
        RulesError::NotPlayable(_) => semantic(graph_line, e),
        other => semantic(start_line, other),
    })
}

/// Normalized text form of a nonterminal position. Vertices and edges are
/// sorted; undirected edges are written once.
pub fn serialize(pos: &Position) -> String {
    let g = pos.graph();
    let mut out = format!("game {} {}\ngraph {}\n", pos.ruleset(), pos.convention(), g.orientation());
    for (id, w) in g.ids().iter().zip(g.weights()) {
        out.push_str(&format!("v {id} {w}\n"));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    if let Some(start) = pos.current_id() {
        out.push_str(&format!("start {start}\n"));
    }
    out
}
