//! Game-solving engines: attractors and threshold objectives, zero-sum and
//! one-player values for every measure, and parity games.

pub mod arena;
pub mod cooperative;
pub mod fixed;
pub mod parity;
pub mod zero_sum;

pub use arena::{attractor, Arena, Region, Side, Solution};
pub use cooperative::{one_player_optimum, optimal_lasso, sccs, WeightedGraph};
pub use fixed::fixed_strategy_extremes;
pub use parity::{progress_measure, progress_moves, solve_parity, Measure, ParityGame};
pub use zero_sum::{
    solve_threshold, solve_zero_sum, zero_sum_value, CoalitionGame, SolverError, ZeroSumSolution,
};

use crate::game::{Game, Player};
use crate::rational::Rational;

/// The game graph weighted for `player`.
pub fn game_graph(g: &Game, player: Player) -> WeightedGraph {
    WeightedGraph {
        succ: g
            .vertices()
            .map(|v| {
                g.out_edges(v)
                    .iter()
                    .map(|&e| (g.edge(e).dst, g.weight(e, player)))
                    .collect()
            })
            .collect(),
    }
}

/// Cooperative optimum of `player` from every vertex, every vertex read as
/// a fresh start.
pub fn one_player_max_value(g: &Game, player: Player) -> Vec<Rational> {
    one_player_optimum(&game_graph(g, player), g.measure(), true)
        .into_iter()
        .map(|v| v.expect("every vertex has a successor"))
        .collect()
}
