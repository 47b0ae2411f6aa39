//! The worked examples shipped with the crate.
//!
//! Terminal payoffs are encoded as absorbing vertices whose self-loop carries
//! the terminal value, which gives the same payoff under `LimInf`, `LimSup`
//! and the mean-payoff measures.

use crate::game::{parse_game, Game, Player};
use crate::transform::MooreStrategy;

pub const FIG1: &str = include_str!("../fixtures/fig1.game");
pub const FIG1_LIMINF: &str = include_str!("../fixtures/fig1_liminf.game");
pub const FIG2: &str = include_str!("../fixtures/fig2.game");
pub const FIG3: &str = include_str!("../fixtures/fig3.game");
pub const FIG1_P2_BACK: &str = include_str!("../fixtures/fig1_p2_back.strat");
pub const FIG1_P2_LOOP: &str = include_str!("../fixtures/fig1_p2_loop.strat");
pub const FIG2_S2S5: &str = include_str!("../fixtures/fig2_s2s5.strat");
pub const FIG2_S2S6: &str = include_str!("../fixtures/fig2_s2s6.strat");
pub const FIG2_S3: &str = include_str!("../fixtures/fig2_s3.strat");
pub const GEQ2: &str = include_str!("../fixtures/geq2.spec");
pub const GEQ3: &str = include_str!("../fixtures/geq3.spec");

/// Two-player mean-payoff game with a square vertex for player 1.
pub fn fig1() -> Game {
    parse_game(FIG1).expect("fixture")
}

/// The same arena read with `LimInf`.
pub fn fig1_liminf() -> Game {
    parse_game(FIG1_LIMINF).expect("fixture")
}

/// Finite tree with leaf payoffs 2, 9, 4, 3, 5, 10 for player 1.
pub fn fig2() -> Game {
    parse_game(FIG2).expect("fixture")
}

/// The `s1`/`s2` loop with exits paying 1 (left) and 2 (right).
pub fn fig3() -> Game {
    parse_game(FIG3).expect("fixture")
}

/// Player 1 moves from `s1` to `s2` exactly `k` times and then leaves to `t1`.
pub fn fig3_sigma_k(g: &Game, k: usize) -> MooreStrategy {
    let s1 = g.vertex_by_name("s1").expect("s1");
    let t1 = g.vertex_by_name("t1").expect("t1");
    let s2 = g.vertex_by_name("s2").expect("s2");
    let n = g.vertex_count();
    let update = (0..=k)
        .map(|m| {
            (0..n)
                .map(|v| if v == s1 { (m + 1).min(k) } else { m })
                .collect()
        })
        .collect();
    let moves = (0..=k)
        .map(|m| {
            let mut row = vec![None; n];
            row[s1] = Some(if m < k { s2 } else { t1 });
            row
        })
        .collect();
    MooreStrategy::new(g, Player::new(1), 0, update, moves).expect("valid counting strategy")
}

/// Player 1 always moves from `s1` to `s2`.
pub fn fig3_sigma_inf(g: &Game) -> MooreStrategy {
    MooreStrategy::memoryless_by_name(g, Player::new(1), &[("s1", "s2")]).expect("valid strategy")
}
