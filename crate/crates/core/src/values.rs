//! Antagonistic, cooperative and antagonistic-cooperative values of every
//! player at every vertex of the prefix-independent arena.

use serde::Serialize;

use crate::game::{Game, History, PathError, Player, VertexId};
use crate::rational::Rational;
use crate::solvers::{game_graph, one_player_optimum, zero_sum_value, CoalitionGame};
use crate::transform::{make_prefix_independent, TransformedGame};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Values {
    pub aval: Rational,
    pub cval: Rational,
    pub acval: Rational,
}

#[derive(Clone, Debug)]
pub struct ValueTable {
    transformed: TransformedGame,
    /// `entries[player][vertex]` over transformed vertices
    entries: Vec<Vec<Values>>,
    a_values: Vec<Vec<Rational>>,
}

impl ValueTable {
    pub fn transformed(&self) -> &TransformedGame {
        &self.transformed
    }

    /// The prefix-independent arena the table is indexed by.
    pub fn arena(&self) -> &Game {
        self.transformed.game()
    }

    pub fn get(&self, player: Player, t: VertexId) -> Values {
        self.entries[player.index()][t]
    }

    pub fn aval(&self, player: Player, t: VertexId) -> Rational {
        self.get(player, t).aval
    }

    pub fn cval(&self, player: Player, t: VertexId) -> Rational {
        self.get(player, t).cval
    }

    pub fn acval(&self, player: Player, t: VertexId) -> Rational {
        self.get(player, t).acval
    }

    /// The distinct antagonistic values of `player`, ascending.
    pub fn a_values(&self, player: Player) -> &[Rational] {
        &self.a_values[player.index()]
    }

    /// Values after the raw history `h`.
    pub fn at_history(&self, h: &History, player: Player) -> Result<Values, PathError> {
        let t = self.transformed.run(h.vertices())?;
        Ok(self.get(player, t))
    }
}

/// Cooperative optimum of `player` per vertex inside the subgraph of
/// vertices whose antagonistic value is at least that of the start vertex.
pub fn antagonistic_cooperative(arena: &Game, player: Player, aval: &[Rational]) -> Vec<Rational> {
    let graph = game_graph(arena, player);
    let mut levels = aval.to_vec();
    levels.sort();
    levels.dedup();
    let mut out = vec![Rational::ZERO; arena.vertex_count()];
    for q in levels {
        let keep: Vec<bool> = aval.iter().map(|&a| a >= q).collect();
        let opt = one_player_optimum(&graph.restrict(&keep), arena.measure(), true);
        for v in arena.vertices() {
            if aval[v] == q {
                out[v] = opt[v].expect("restricted subgraph keeps an infinite path");
            }
        }
    }
    out
}

pub fn compute_value_table(g: &Game) -> ValueTable {
    let transformed = make_prefix_independent(g);
    let arena = transformed.game();
    let mut entries = Vec::new();
    let mut a_values = Vec::new();
    for player in Player::all(g.players()) {
        let aval = zero_sum_value(&CoalitionGame::new(arena, player), arena.measure());
        let cval: Vec<Rational> =
            one_player_optimum(&game_graph(arena, player), arena.measure(), true)
                .into_iter()
                .map(|v| v.expect("total arena"))
                .collect();
        let acval = antagonistic_cooperative(arena, player, &aval);
        let mut levels = aval.clone();
        levels.sort();
        levels.dedup();
        a_values.push(levels);
        entries.push(
            arena
                .vertices()
                .map(|v| Values {
                    aval: aval[v],
                    cval: cval[v],
                    acval: acval[v],
                })
                .collect(),
        );
    }
    ValueTable {
        transformed,
        entries,
        a_values,
    }
}

pub fn value_at_history(g: &Game, h: &History, player: Player) -> Result<Values, PathError> {
    compute_value_table(g).at_history(h, player)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{GameBuilder, PayoffKind};

    fn at(g: &Game, t: &ValueTable, p: usize, name: &str) -> Values {
        t.get(Player::new(p), g.vertex_by_name(name).unwrap())
    }

    #[test]
    fn fig1_table() {
        let g = fixtures::fig1();
        let t = compute_value_table(&g);
        for v in ["v1", "v2", "v3", "v4"] {
            let x = at(&g, &t, 1, v);
            assert_eq!((x.aval, x.cval), (1.into(), 2.into()), "{v}");
        }
        assert_eq!(at(&g, &t, 1, "v1").acval, 2.into());
        assert_eq!(t.a_values(Player::new(1)), &[Rational::from(1)]);
    }

    #[test]
    fn fig2_table() {
        let g = fixtures::fig2();
        let t = compute_value_table(&g);
        assert_eq!(at(&g, &t, 1, "s1").aval, 5.into());
        assert_eq!(at(&g, &t, 1, "s2").aval, 3.into());
        assert_eq!(at(&g, &t, 1, "s1").acval, 10.into());
        assert_eq!(at(&g, &t, 1, "s1").cval, 10.into());
    }

    #[test]
    fn sandwich_and_pinned_acval() {
        for g in [fixtures::fig1(), fixtures::fig2(), fixtures::fig3()] {
            let t = compute_value_table(&g);
            for p in Player::all(g.players()) {
                for v in g.vertices() {
                    let x = t.get(p, v);
                    assert!(x.aval <= x.acval && x.acval <= x.cval);
                    if x.aval == x.cval {
                        assert_eq!(x.acval, x.aval);
                    }
                }
            }
        }
    }

    #[test]
    fn history_values() {
        let g = fixtures::fig2();
        let h = History::from_names(&g, &["s1", "s2"]).unwrap();
        assert_eq!(
            value_at_history(&g, &h, Player::new(1)).unwrap().aval,
            3.into()
        );
        let h = History::from_names(&g, &["s1"]).unwrap();
        assert_eq!(
            value_at_history(&g, &h, Player::new(1)).unwrap().aval,
            5.into()
        );
    }

    #[test]
    fn inf_history_uses_record() {
        // a -3-> b, b -5-> c (loop 5), b -1-> d (loop 9); player 1 owns everything
        let g = GameBuilder::new(1, PayoffKind::Inf)
            .vertex("a", 1)
            .vertex("b", 1)
            .vertex("c", 1)
            .vertex("d", 1)
            .edge("a", "b", &[3])
            .edge("b", "c", &[5])
            .edge("b", "d", &[1])
            .edge("c", "c", &[5])
            .edge("d", "d", &[9])
            .init("a")
            .build()
            .unwrap();
        let h = History::from_names(&g, &["a", "b"]).unwrap();
        let after = value_at_history(&g, &h, Player::new(1)).unwrap();
        assert_eq!(after.aval, 3.into());
        // from b as a fresh start the value would be 5
        let fresh = compute_value_table(&g.with_init(g.vertex_by_name("b").unwrap()));
        let b0 = fresh.arena().init();
        assert_eq!(fresh.aval(Player::new(1), b0), 5.into());
    }
}
