mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vertexnim::rules::TerminalStatus;
use vertexnim::{Convention, Move, Oracle, Orientation, Position, Ruleset};

fn random_playout(start: &Position, seed: u64) -> Vec<(Position, Move)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = start.clone();
    let mut trail = Vec::new();
    while !pos.is_terminal() {
        let moves = pos.legal_moves().unwrap();
        assert!(!moves.is_empty(), "nonterminal position without moves");
        let m = moves[rng.gen_range(0..moves.len())].clone();
        let next = pos.apply_move(&m).unwrap();
        trail.push((pos, m));
        pos = next;
    }
    trail
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn playouts_end_and_shed_weight(pos in common::small_positions(), seed in any::<u64>()) {
        let trail = random_playout(&pos, seed);
        prop_assert!(trail.len() as u64 <= pos.total_weight());
        for (before, m) in &trail {
            let after = before.apply_move(m).unwrap();
            prop_assert!(after.total_weight() < before.total_weight());
            prop_assert_eq!(after.to_move(), before.to_move().other());
        }
    }

    #[test]
    fn deletion_keeps_vertexnim_graphs_playable(
        pos in prop_oneof![
            common::position(Orientation::Undirected, Ruleset::VertexNim, Convention::Normal, 6, 3),
            common::position(Orientation::Directed, Ruleset::VertexNim, Convention::Normal, 6, 3),
        ],
        seed in any::<u64>(),
    ) {
        for (before, m) in random_playout(&pos, seed) {
            let after = before.apply_move(&m).unwrap();
            if !after.graph().is_empty() {
                prop_assert!(after.graph().validate_playable().is_ok(), "{}", vertexnim::serialize(&before));
            }
        }
    }

    #[test]
    fn stockman_never_changes_structure(
        pos in common::position(Orientation::Undirected, Ruleset::Stockman, Convention::Normal, 5, 3),
        seed in any::<u64>(),
    ) {
        for (before, m) in random_playout(&pos, seed) {
            let after = before.apply_move(&m).unwrap();
            prop_assert_eq!(after.graph().edges(), before.graph().edges());
            prop_assert_eq!(after.graph().len(), before.graph().len());
        }
    }

    /// The oracle runs its own bitmask copy of the rules; both must agree.
    #[test]
    fn oracle_agrees_with_rules_engine(pos in common::small_positions()) {
        prop_assume!(pos.total_weight() <= 9);
        let oracle = Oracle::default();
        prop_assert_eq!(oracle.solve(&pos).unwrap(), common::naive_outcome(&pos), "{}", vertexnim::serialize(&pos));
    }

    #[test]
    fn oracle_best_move_reaches_p(pos in common::small_positions()) {
        let oracle = Oracle::default();
        if let Some(m) = oracle.best_move(&pos).unwrap() {
            let next = pos.apply_move(&m).unwrap();
            let lost = match next.terminal_status() {
                TerminalStatus::PreviousMoverWins => true,
                TerminalStatus::MoverToActWins => false,
                TerminalStatus::Nonterminal => oracle.solve(&next).unwrap() == vertexnim::Outcome::P,
            };
            prop_assert!(lost);
        } else if !pos.is_terminal() {
            prop_assert_eq!(oracle.solve(&pos).unwrap(), vertexnim::Outcome::P);
        }
    }
}
