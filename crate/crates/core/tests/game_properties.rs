use proptest::prelude::*;

use admissible_core::oracle::{random_game, random_lassos};
use admissible_core::{
    make_prefix_independent, parse_game, payoff_of_lasso, product_with_strategy, serialize_game,
    Game, Lasso, MooreStrategy, PayoffKind, Player,
};

fn game(seed: u64, size: usize, players: usize, measure: usize) -> Game {
    random_game(seed, size, (-2, 2), players, PayoffKind::ALL[measure])
}

proptest! {
    #[test]
    fn serialize_round_trips(seed in any::<u64>(), size in 1usize..=6, players in 1usize..=3, m in 0usize..6) {
        let g = game(seed, size, players, m);
        prop_assert_eq!(parse_game(&serialize_game(&g)).unwrap(), g);
    }

    #[test]
    fn cycle_rotation_keeps_limit_payoffs(seed in any::<u64>(), size in 1usize..=6, k in 0usize..6) {
        let g = game(seed, size, 2, 2);
        for l in random_lassos(&g, seed, 20, 10) {
            let mut rotated = l.cycle.clone();
            let n = rotated.len();
            rotated.rotate_left(k % n);
            let (a, b) = (Lasso::new(vec![], l.cycle.clone()), Lasso::new(vec![], rotated));
            for m in [PayoffKind::LimInf, PayoffKind::LimSup, PayoffKind::MeanPayoffInf, PayoffKind::MeanPayoffSup] {
                for p in Player::all(2) {
                    prop_assert_eq!(payoff_of_lasso(m, &g, p, &a).unwrap(), payoff_of_lasso(m, &g, p, &b).unwrap());
                }
            }
        }
    }

    #[test]
    fn measures_are_ordered(seed in any::<u64>(), size in 1usize..=6) {
        let g = game(seed, size, 2, 0);
        for l in random_lassos(&g, seed, 20, 10) {
            for p in Player::all(2) {
                let v: Vec<_> = [
                    PayoffKind::Inf,
                    PayoffKind::LimInf,
                    PayoffKind::MeanPayoffInf,
                    PayoffKind::LimSup,
                    PayoffKind::Sup,
                ]
                .iter()
                .map(|&m| payoff_of_lasso(m, &g, p, &l).unwrap())
                .collect();
                prop_assert!(v.windows(2).all(|w| w[0] <= w[1]), "{:?}", v);
                prop_assert_eq!(v[2], payoff_of_lasso(PayoffKind::MeanPayoffSup, &g, p, &l).unwrap());
            }
        }
    }

    #[test]
    fn transform_preserves_payoffs(seed in any::<u64>(), size in 1usize..=6, sup in any::<bool>()) {
        let g = game(seed, size, 2, if sup { 1 } else { 0 });
        let t = make_prefix_independent(&g);
        prop_assert!(make_prefix_independent(t.game()).is_identity());
        for l in random_lassos(&g, seed, 50, 10) {
            let lifted = t.lift_lasso(&l).unwrap();
            prop_assert_eq!(t.project_lasso(&lifted).first(), l.first());
            for p in Player::all(2) {
                prop_assert_eq!(
                    payoff_of_lasso(g.measure(), &g, p, &l).unwrap(),
                    payoff_of_lasso(t.game().measure(), t.game(), p, &lifted).unwrap()
                );
            }
        }
    }

    #[test]
    fn product_keeps_other_players_choices(seed in any::<u64>(), size in 1usize..=6, pick in any::<u64>()) {
        let g = game(seed, size, 2, 2);
        let p = Player::new(1);
        let choice: Vec<Option<usize>> = g
            .vertices()
            .map(|v| {
                let succ: Vec<usize> = g.successors(v).collect();
                (g.owner(v) == p).then(|| succ[(pick as usize + v) % succ.len()])
            })
            .collect();
        let s = MooreStrategy::memoryless(&g, p, &choice).unwrap();
        let prod = product_with_strategy(&g, &s).unwrap();
        for i in 0..prod.len() {
            let (v, _) = prod.state(i);
            let expected = if g.owner(v) == p { 1 } else { g.out_edges(v).len() };
            prop_assert_eq!(prod.out(i).len(), expected);
        }
    }
}
