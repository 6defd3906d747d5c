//! Browser bindings for the demo page in `www/`. Every function takes and
//! returns plain strings; results are JSON documents and errors are messages.

use serde::Serialize;
use vertexnim::check::circuit_position;
use vertexnim::solver::{lo_labeling, lu_labeling, solve_adjacent_nim, Labeling};
use vertexnim::{parse_instance, Convention, Method, Oracle, Orientation, Outcome, Position, Solver};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct StartLabel {
    id: String,
    outcome: Option<Outcome>,
    method: Option<Method>,
    error: Option<String>,
}

#[derive(Serialize)]
struct AnalysisView {
    outcome: Outcome,
    method: Method,
    witness: Option<String>,
    /// The same graph analyzed from every vertex.
    starts: Vec<StartLabel>,
}

#[derive(Serialize)]
struct StepView {
    base: Vec<String>,
    base_label: Outcome,
    fringe: Vec<String>,
}

#[derive(Serialize)]
struct LabelingView {
    kind: &'static str,
    labels: Vec<(String, Outcome)>,
    steps: Vec<StepView>,
}

#[derive(Serialize)]
struct CircuitStart {
    start: usize,
    oracle: Outcome,
    formula: Option<Outcome>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn parse(text: &str) -> Result<Position, String> {
    parse_instance(text).map_err(|e| e.to_string())
}

/// Outcome, method and winning move of an instance file, plus the outcome
/// from each possible start vertex.
#[wasm_bindgen]
pub fn analyze(instance: &str) -> Result<String, String> {
    let pos = parse(instance)?;
    let solver = Solver::default();
    let report = solver.solve(&pos).map_err(|e| e.to_string())?;
    let starts = pos
        .graph()
        .ids()
        .iter()
        .map(|id| {
            let from_here = Position::new(pos.graph().clone(), id.as_str(), pos.ruleset(), pos.convention())
                .map_err(|e| e.to_string())
                .and_then(|p| solver.outcome(&p).map_err(|e| e.to_string()));
            match from_here {
                Ok((outcome, method)) => StartLabel {
                    id: id.to_string(),
                    outcome: Some(outcome),
                    method: Some(method),
                    error: None,
                },
                Err(e) => StartLabel {
                    id: id.to_string(),
                    outcome: None,
                    method: None,
                    error: Some(e),
                },
            }
        })
        .collect();
    to_json(&AnalysisView {
        outcome: report.outcome,
        method: report.method,
        witness: report.witness.map(|m| pos.describe_move(&m)),
        starts,
    })
}

/// Peeling rounds of the labeling that matches the instance's orientation.
#[wasm_bindgen]
pub fn labeling(instance: &str) -> Result<String, String> {
    let pos = parse(instance)?;
    let (kind, result) = match pos.orientation() {
        Orientation::Directed => ("lo", lo_labeling(pos.graph())),
        Orientation::Undirected => ("lu", lu_labeling(pos.graph())),
    };
    let Labeling { labels, steps } = result.map_err(|e| e.to_string())?;
    to_json(&LabelingView {
        kind,
        labels: labels.into_iter().map(|(id, l)| (id.to_string(), l)).collect(),
        steps: steps
            .into_iter()
            .map(|s| StepView {
                base: s.base.iter().map(ToString::to_string).collect(),
                base_label: s.base_label,
                fringe: s.fringe.iter().map(ToString::to_string).collect(),
            })
            .collect(),
    })
}

/// Oracle outcome and circuit formula for every start of the directed
/// circuit with the given weights (separated by spaces or commas).
#[wasm_bindgen]
pub fn adjacent_nim(weights: &str) -> Result<String, String> {
    let weights = weights
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("`{t}` is not a weight")))
        .collect::<Result<Vec<u64>, String>>()?;
    let n = weights.len();
    if n < 3 {
        return Err(format!("a circuit needs at least 3 vertices, got {n}"));
    }
    if weights.contains(&0) {
        return Err("weights must be positive".into());
    }
    let oracle = Oracle::default();
    let rows = (1..=n)
        .map(|start| {
            let pos = circuit_position(&weights, start, Convention::Normal).map_err(|e| e.to_string())?;
            let rotated: Vec<u64> = (0..n).map(|i| weights[(start - 1 + i) % n]).collect();
            Ok(CircuitStart {
                start,
                oracle: oracle.solve(&pos).map_err(|e| e.to_string())?,
                formula: solve_adjacent_nim(&rotated).ok(),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&rows)
}
