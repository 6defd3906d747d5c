//! Cross-validation of the closed-form rules against the oracle, and the
//! circuit exploration table for circuits holding weight-1 vertices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::graph::GameGraph;
use crate::graph::Orientation;
use crate::instance::serialize;
use crate::oracle::{Oracle, OracleError};
use crate::rules::{Convention, Position, Ruleset, TerminalStatus};
use crate::solver::{route, solve_adjacent_nim, Method, Outcome, SolveError, Solver};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Also verify a witness move for every N position.
    pub witnesses: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discrepancy {
    Outcome { method: Method, theorem: Outcome, oracle: Outcome },
    /// No witness, or a witness whose successor is not P.
    Witness { method: Method, detail: String },
    /// Witness search needed reductions outside `{0, 1, w-1}`.
    FullScan { method: Method },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Instance file text reproducing the failure.
    pub instance: String,
    pub discrepancy: Discrepancy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub tested: usize,
    /// Positions no closed-form rule covers.
    pub skipped: usize,
    pub witnesses_checked: usize,
    pub by_method: BTreeMap<Method, usize>,
    /// Sorted by instance text.
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn full_scans(&self) -> usize {
        self.mismatches
            .iter()
            .filter(|m| matches!(m.discrepancy, Discrepancy::FullScan { .. }))
            .count()
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "tested {} skipped {} mismatched {} witnesses {}",
            self.tested,
            self.skipped,
            self.mismatches.len(),
            self.witnesses_checked
        );
        for (method, count) in &self.by_method {
            let _ = write!(out, "\n  {method}: {count}");
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    tested: usize,
    skipped: usize,
    witnesses: usize,
    by_method: BTreeMap<Method, usize>,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.tested += other.tested;
        self.skipped += other.skipped;
        self.witnesses += other.witnesses;
        for (m, c) in other.by_method {
            *self.by_method.entry(m).or_default() += c;
        }
        self.mismatches.extend(other.mismatches);
        self
    }
}

/// Compares the closed-form outcome with the oracle on every covered
/// position. Work is spread over threads; the report does not depend on the
/// schedule.
pub fn run_check<I>(instances: I, solver: &Solver, options: CheckOptions) -> Result<CheckReport, SolveError>
where
    I: IntoIterator<Item = Position>,
    I::IntoIter: Send,
{
    let tally = instances
        .into_iter()
        .par_bridge()
        .map(|pos| check_one(&pos, solver, options))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let mut mismatches = tally.mismatches;
    mismatches.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(CheckReport {
        tested: tally.tested,
        skipped: tally.skipped,
        witnesses_checked: tally.witnesses,
        by_method: tally.by_method,
        mismatches,
    })
}

fn check_one(pos: &Position, solver: &Solver, options: CheckOptions) -> Result<Tally, SolveError> {
    let mut tally = Tally::default();
    let (theorem, method) = match route(pos) {
        Ok(found) => found,
        Err(SolveError::OpenProblem(_)) => {
            tally.skipped = 1;
            return Ok(tally);
        }
        Err(e) => return Err(e),
    };
    tally.tested = 1;
    tally.by_method.insert(method, 1);
    let oracle = solver.oracle();
    let truth = oracle.solve(pos)?;
    let mismatch = |discrepancy| Mismatch {
        instance: serialize(pos),
        discrepancy,
    };
    if theorem != truth {
        tally.mismatches.push(mismatch(Discrepancy::Outcome {
            method,
            theorem,
            oracle: truth,
        }));
        return Ok(tally);
    }
    if options.witnesses && truth == Outcome::N {
        tally.witnesses = 1;
        match solver.witness_with_trace(pos) {
            Ok((Some(m), scanned)) => {
                if scanned {
                    tally.mismatches.push(mismatch(Discrepancy::FullScan { method }));
                }
                let next = pos.apply_move(&m)?;
                let sound = match next.terminal_status() {
                    TerminalStatus::PreviousMoverWins => true,
                    TerminalStatus::MoverToActWins => false,
                    TerminalStatus::Nonterminal => oracle.solve(&next)? == Outcome::P,
                };
                if !sound {
                    tally.mismatches.push(mismatch(Discrepancy::Witness {
                        method,
                        detail: format!("{} does not reach a P position", pos.describe_move(&m)),
                    }));
                }
            }
            Ok((None, _)) => tally.mismatches.push(mismatch(Discrepancy::Witness {
                method,
                detail: "no witness for an N position".into(),
            })),
            Err(e) => tally.mismatches.push(mismatch(Discrepancy::Witness {
                method,
                detail: e.to_string(),
            })),
        }
    }
    Ok(tally)
}

/// One oracle-solved circuit position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitRow {
    pub n: usize,
    /// Weights of `v1..vn`.
    pub weights: Vec<u64>,
    /// 1-based index of the start vertex.
    pub start: usize,
    pub outcome: Outcome,
    /// Closed-form prediction when every weight is at least 2.
    pub formula: Option<Outcome>,
}

pub const CIRCUIT_CSV_HEADER: &str = "n,weights,start,outcome,formula";

impl CircuitRow {
    pub fn csv(&self) -> String {
        let weights: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{}",
            self.n,
            weights.join("-"),
            self.start,
            self.outcome,
            self.formula.map(|f| f.to_string()).unwrap_or_default()
        )
    }
}

/// Directed VertexNim circuit `v1 -> ... -> vn -> v1`.
pub fn circuit_position(weights: &[u64], start: usize, convention: Convention) -> Result<Position, SolveError> {
    let n = weights.len();
    let ids: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let g = GameGraph::build(
        Orientation::Directed,
        ids.iter().zip(weights).map(|(id, &w)| (id.as_str(), w as i64)),
        (0..n).map(|i| (ids[i].as_str(), ids[(i + 1) % n].as_str())),
    )
    .map_err(|e| SolveError::InvalidInstance(e.to_string()))?;
    Ok(Position::new(g, &format!("v{start}"), Ruleset::VertexNim, convention)?)
}

/// Oracle outcomes for every circuit with `n` in `sizes` (at least 3),
/// weights in `1..=max_weight` with at least `min_ones` weight-1 vertices,
/// and every start vertex.
pub fn explore_circuits(
    sizes: RangeInclusive<usize>,
    max_weight: u64,
    min_ones: usize,
    oracle: &Oracle,
) -> Result<Vec<CircuitRow>, OracleError> {
    let mut rows = Vec::new();
    if max_weight == 0 {
        return Ok(rows);
    }
    for n in (*sizes.start()).max(3)..=*sizes.end() {
        let count = max_weight.pow(n as u32);
        for mut code in 0..count {
            let weights: Vec<u64> = (0..n)
                .map(|_| {
                    let w = 1 + code % max_weight;
                    code /= max_weight;
                    w
                })
                .collect();
            if weights.iter().filter(|&&w| w == 1).count() < min_ones {
                continue;
            }
            for start in 1..=n {
                let pos = circuit_position(&weights, start, Convention::Normal)
                    .expect("circuit construction cannot fail for positive weights");
                let outcome = oracle.solve(&pos)?;
                let rotated: Vec<u64> = (0..n).map(|i| weights[(start - 1 + i) % n]).collect();
                rows.push(CircuitRow {
                    n,
                    weights: weights.clone(),
                    start,
                    outcome,
                    formula: solve_adjacent_nim(&rotated).ok(),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_instances, Envelope, LoopPolicy};
    use crate::oracle::Budget;
    use crate::solver::SolverConfig;

    #[test]
    fn small_undirected_check_is_clean() {
        let env = Envelope::new(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal)
            .vertices(1..=3)
            .weights(1..=2);
        let solver = Solver::default();
        let report = run_check(enumerate_instances(&env).unwrap(), &solver, CheckOptions { witnesses: true }).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.skipped, 0);
        assert!(report.tested > 0);
    }

    #[test]
    fn uncovered_digraphs_are_skipped() {
        let env = Envelope::new(Orientation::Directed, Ruleset::VertexNim, Convention::Normal)
            .vertices(2..=2)
            .weights(1..=2)
            .loops(LoopPolicy::None);
        let report = run_check(enumerate_instances(&env).unwrap(), &Solver::default(), CheckOptions::default()).unwrap();
        assert_eq!(report.tested, 0);
        assert_eq!(report.skipped, 4 * 2);
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let env = Envelope::new(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal)
            .vertices(3..=3)
            .weights(3..=3);
        let solver = Solver::new(SolverConfig {
            budget: Budget::new(8, 4),
            oracle_fallback: true,
        });
        let err = run_check(enumerate_instances(&env).unwrap(), &solver, CheckOptions::default()).unwrap_err();
        assert!(matches!(err, SolveError::Oracle(OracleError::BudgetExceeded { .. })));
    }

    #[test]
    fn explore_three_cycle_with_a_one() {
        let oracle = Oracle::default();
        let rows = explore_circuits(3..=3, 2, 1, &oracle).unwrap();
        let picked: Vec<_> = rows.iter().filter(|r| r.weights == vec![1, 2, 2]).collect();
        assert_eq!(picked.len(), 3);
        assert!(picked.iter().all(|r| r.formula.is_none()));
        assert!(explore_circuits(RangeInclusive::new(5, 4), 3, 1, &oracle).unwrap().is_empty());
        assert_eq!(rows[0].csv().split(',').count(), CIRCUIT_CSV_HEADER.split(',').count());
    }
}
