//! Extreme payoffs of a fixed strategy, optimised by the other players.

use super::cooperative::{one_player_optimum, WeightedGraph};
use crate::game::Player;
use crate::rational::Rational;
use crate::transform::ProductGame;

/// The product as a graph weighted for `player`.
pub fn product_graph(p: &ProductGame, player: Player) -> WeightedGraph {
    WeightedGraph {
        succ: (0..p.len())
            .map(|s| {
                p.out(s)
                    .iter()
                    .map(|e| (e.target, p.weight(e, player)))
                    .collect()
            })
            .collect(),
    }
}

/// Per product state, the least and the greatest payoff of `player` over
/// all outcomes of the fixed strategy.
pub fn fixed_strategy_extremes(p: &ProductGame, player: Player) -> Vec<(Rational, Rational)> {
    let g = product_graph(p, player);
    let measure = p.arena().measure();
    let lo = one_player_optimum(&g, measure, false);
    let hi = one_player_optimum(&g, measure, true);
    lo.into_iter()
        .zip(hi)
        .map(|(a, b)| (a.expect("product is total"), b.expect("product is total")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::GameBuilder;
    use crate::game::PayoffKind;
    use crate::transform::{product_with_strategy, MooreStrategy};

    #[test]
    fn fig2_dominated_strategy_extremes() {
        let g = fixtures::fig2();
        let s =
            MooreStrategy::memoryless_by_name(&g, Player::new(1), &[("s1", "s2"), ("s4", "s6")])
                .unwrap();
        let p = product_with_strategy(&g, &s).unwrap();
        let ext = fixed_strategy_extremes(&p, Player::new(1));
        assert_eq!(ext[0], (Rational::from(3), Rational::from(4)));
    }

    #[test]
    fn fig3_sigma_inf_extremes() {
        let g = fixtures::fig3();
        let p = product_with_strategy(&g, &fixtures::fig3_sigma_inf(&g)).unwrap();
        let ext = fixed_strategy_extremes(&p, Player::new(1));
        assert_eq!(ext[0], (Rational::ZERO, Rational::from(2)));
    }

    #[test]
    fn absorbing_owned_loop() {
        let g = GameBuilder::new(1, PayoffKind::LimSup)
            .vertex("a", 1)
            .edge("a", "a", &[4])
            .init("a")
            .build()
            .unwrap();
        let s = MooreStrategy::memoryless_by_name(&g, Player::new(1), &[("a", "a")]).unwrap();
        let p = product_with_strategy(&g, &s).unwrap();
        assert_eq!(
            fixed_strategy_extremes(&p, Player::new(1)),
            vec![(Rational::from(4), Rational::from(4))]
        );
    }
}
