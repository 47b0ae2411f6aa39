//! Value-derived edge labels and direct evaluation of the outcome
//! characterization of admissible strategies on lassos.

use crate::game::{payoff_of_lasso, EdgeId, Game, Lasso, PathError, Player};
use crate::rational::Rational;
use crate::values::{compute_value_table, ValueTable};

/// Propositions of one player on one edge `(u, v)` of the arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    /// `u` belongs to the player
    pub owned: bool,
    /// `aVal(u)`; the proposition `aVal_q` holds for exactly this `q`
    pub aval: Rational,
    /// `q` with `acVal(u) = q`, when that value is an antagonistic value
    pub acval: Option<Rational>,
    /// largest `cVal(v')` over the other successors `v'` of `u`, for `u`
    /// owned by someone else; `gAlt_q` holds iff `q` is below it
    pub alt_bound: Option<Rational>,
    /// the `q` in the antagonistic values with `gAlt_q`, ascending
    pub galt: Vec<Rational>,
}

impl EdgeLabel {
    pub fn galt(&self, q: Rational) -> bool {
        self.alt_bound.is_some_and(|b| q < b)
    }
}

/// The prefix-independent arena with per-player labels on every edge.
#[derive(Clone, Debug)]
pub struct LabeledGame {
    table: ValueTable,
    labels: Vec<Vec<EdgeLabel>>,
}

impl LabeledGame {
    pub fn table(&self) -> &ValueTable {
        &self.table
    }

    pub fn arena(&self) -> &Game {
        self.table.arena()
    }

    pub fn label(&self, player: Player, e: EdgeId) -> &EdgeLabel {
        &self.labels[player.index()][e]
    }

    pub fn a_values(&self, player: Player) -> &[Rational] {
        self.table.a_values(player)
    }
}

pub fn label_edges(table: &ValueTable) -> LabeledGame {
    let arena = table.arena();
    let labels = Player::all(arena.players())
        .map(|p| {
            let levels = table.a_values(p);
            arena
                .edges()
                .iter()
                .map(|e| {
                    let owned = arena.owner(e.src) == p;
                    let v = table.get(p, e.src);
                    let alt_bound = if owned {
                        None
                    } else {
                        arena
                            .successors(e.src)
                            .filter(|&w| w != e.dst)
                            .map(|w| table.cval(p, w))
                            .max()
                    };
                    let galt = levels
                        .iter()
                        .copied()
                        .filter(|&q| alt_bound.is_some_and(|b| q < b))
                        .collect();
                    EdgeLabel {
                        owned,
                        aval: v.aval,
                        acval: levels.binary_search(&v.acval).ok().map(|_| v.acval),
                        alt_bound,
                        galt,
                    }
                })
                .collect()
        })
        .collect();
    LabeledGame {
        table: table.clone(),
        labels,
    }
}

/// Labels for the prefix-independent arena of `g`.
pub fn labeled_game(g: &Game) -> LabeledGame {
    label_edges(&compute_value_table(g))
}

/// Evaluates `G(¬V_i ∨ φ1 ∨ φ2)` on a lasso of the labelled arena, with
/// `φ1 = aVal_q ∧ (payoff > q ∨ F gAlt_q)` and
/// `φ2 = aVal_q ∧ acVal_q ∧ payoff = q ∧ G aVal_q`.
pub fn eval_phi_adm_on_lasso(
    lg: &LabeledGame,
    player: Player,
    l: &Lasso,
) -> Result<bool, PathError> {
    let arena = lg.arena();
    let payoff = payoff_of_lasso(arena.measure(), arena, player, l)?;
    let (prefix, cycle) = l.edge_ids(arena)?;
    let label = |e: EdgeId| lg.label(player, e);
    // every position of the word occurs in the prefix or the first unrolling
    let positions: Vec<(usize, bool)> = (0..prefix.len())
        .map(|k| (k, true))
        .chain((0..cycle.len()).map(|k| (k, false)))
        .collect();
    for (k, in_prefix) in positions {
        let here = if in_prefix {
            label(prefix[k])
        } else {
            label(cycle[k])
        };
        if !here.owned {
            continue;
        }
        let q = here.aval;
        // edges from this position on, up to the end of one unrolling
        let later: Vec<EdgeId> = if in_prefix {
            prefix[k..].iter().chain(&cycle).copied().collect()
        } else {
            cycle.clone()
        };
        let phi1 = payoff > q || later.iter().any(|&e| label(e).galt(q));
        let phi2 =
            here.acval == Some(q) && payoff == q && later.iter().all(|&e| label(e).aval == q);
        if !(phi1 || phi2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lasso of the labelled arena for a raw lasso starting at the initial vertex.
pub fn lift(lg: &LabeledGame, raw: &Lasso) -> Result<Lasso, PathError> {
    lg.table().transformed().lift_lasso(raw)
}
