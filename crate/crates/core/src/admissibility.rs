//! Deciding admissibility of finite-memory strategies and constructing
//! admissible strategies.
//!
//! A strategy is admissible iff at every history compatible with it that
//! ends in a vertex of its player, either its cooperative value exceeds the
//! antagonistic value of the history, or its worst-case and cooperative
//! values, the antagonistic value and the antagonistic-cooperative value all
//! coincide. With prefix-independent payoffs and finite memory these
//! quantities depend only on the state of the product of the strategy with
//! the arena, so checking every reachable product state is complete.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::game::{Game, Player, VertexId};
use crate::rational::Rational;
use crate::solvers::{
    fixed_strategy_extremes, game_graph, optimal_lasso, solve_zero_sum, CoalitionGame,
};
use crate::transform::{product_over, MooreStrategy, ProductError, ProductGame};
use crate::values::{compute_value_table, ValueTable};

/// Which half of the negated condition holds at a violating state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `cVal(h,σ) ≤ aVal(h)` and `aVal(h,σ) < aVal(h)`
    #[serde(rename = "eq3")]
    Eq3,
    /// `aVal(h,σ) = cVal(h,σ) = aVal(h)` and `acVal(h) > aVal(h)`
    #[serde(rename = "eq4")]
    Eq4,
}

impl Violation {
    pub fn id(self) -> &'static str {
        match self {
            Violation::Eq3 => "eq3",
            Violation::Eq4 => "eq4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// raw vertex of the violating product state
    pub vertex: VertexId,
    pub memory: usize,
    /// raw vertices from the initial vertex to `vertex`
    pub history: Vec<VertexId>,
    pub violated: Violation,
    pub aval: Rational,
    pub acval: Rational,
    /// worst case of the strategy from the state
    pub aval_sigma: Rational,
    /// best case of the strategy from the state
    pub cval_sigma: Rational,
}

impl Witness {
    /// Re-checks the cited inequality from the reported values.
    pub fn holds(&self) -> bool {
        match self.violated {
            Violation::Eq3 => self.cval_sigma <= self.aval && self.aval_sigma < self.aval,
            Violation::Eq4 => {
                self.aval_sigma == self.aval
                    && self.cval_sigma == self.aval
                    && self.acval > self.aval
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityVerdict {
    Admissible,
    NotAdmissible(Box<Witness>),
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, AdmissibilityVerdict::Admissible)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            AdmissibilityVerdict::Admissible => None,
            AdmissibilityVerdict::NotAdmissible(w) => Some(w),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdmissibilityError {
    #[error(transparent)]
    Product(#[from] ProductError),
}

pub fn check_strategy_admissible(
    g: &Game,
    s: &MooreStrategy,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    check_with_table(&compute_value_table(g), s)
}

/// Admissibility check reusing a value table of the strategy's game.
pub fn check_with_table(
    table: &ValueTable,
    s: &MooreStrategy,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    let player = s.player();
    let tg = table.transformed();
    let product = product_over(tg, s)?;
    let ext = fixed_strategy_extremes(&product, player);
    for (state, &(lo, hi)) in ext.iter().enumerate() {
        let (t, memory) = product.state(state);
        if tg.game().owner(t) != player {
            continue;
        }
        let v = table.get(player, t);
        let eq1 = hi > v.aval;
        let eq2 = lo == hi && hi == v.aval && v.aval == v.acval;
        if eq1 || eq2 {
            continue;
        }
        let violated = if lo < v.aval {
            Violation::Eq3
        } else {
            Violation::Eq4
        };
        let history = product
            .path_to(state)
            .into_iter()
            .map(|i| tg.raw_vertex(product.state(i).0))
            .collect();
        return Ok(AdmissibilityVerdict::NotAdmissible(Box::new(Witness {
            vertex: tg.raw_vertex(t),
            memory,
            history,
            violated,
            aval: v.aval,
            acval: v.acval,
            aval_sigma: lo,
            cval_sigma: hi,
        })));
    }
    Ok(AdmissibilityVerdict::Admissible)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Plan {
    /// following the lasso planned at `owner`, currently at position `pos`
    Lasso { owner: VertexId, pos: usize },
    /// memoryless worst-case optimal play
    Worst,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Policy {
    /// cooperate wherever `cVal > aVal`, re-planning at every deviation
    StrongCooperative,
    /// follow an `acVal` witness, fall back to worst-case play on deviation
    WorstCaseCooperative,
}

/// A planned lasso as one sequence; positions past the end wrap to `cycle_start`.
struct Planned {
    seq: Vec<VertexId>,
    cycle_start: usize,
}

impl Planned {
    fn next(&self, pos: usize) -> usize {
        if pos + 1 < self.seq.len() {
            pos + 1
        } else {
            self.cycle_start
        }
    }
}

struct Planner<'a> {
    table: &'a ValueTable,
    player: Player,
    policy: Policy,
    lassos: Vec<Option<Planned>>,
    worst: Vec<Option<VertexId>>,
}

impl Planner<'_> {
    fn fresh(&self, t: VertexId) -> Plan {
        let v = self.table.get(self.player, t);
        match self.policy {
            Policy::StrongCooperative if v.cval > v.aval => Plan::Lasso { owner: t, pos: 0 },
            Policy::StrongCooperative => Plan::Worst,
            Policy::WorstCaseCooperative => Plan::Lasso { owner: t, pos: 0 },
        }
    }

    fn step(&self, plan: Plan, t_next: VertexId) -> Plan {
        let on_track = match plan {
            Plan::Lasso { owner, pos } => {
                let l = self.lassos[owner].as_ref().expect("planned lasso");
                let np = l.next(pos);
                (l.seq[np] == t_next).then_some(Plan::Lasso { owner, pos: np })
            }
            Plan::Worst => None,
        };
        match self.policy {
            Policy::StrongCooperative => {
                let v = self.table.get(self.player, t_next);
                if v.cval == v.aval {
                    Plan::Worst
                } else {
                    on_track.unwrap_or(Plan::Lasso {
                        owner: t_next,
                        pos: 0,
                    })
                }
            }
            Policy::WorstCaseCooperative => on_track.unwrap_or(Plan::Worst),
        }
    }

    fn choice(&self, plan: Plan, t: VertexId) -> Option<VertexId> {
        match plan {
            Plan::Lasso { owner, pos } => {
                let l = self.lassos[owner].as_ref().expect("planned lasso");
                Some(l.seq[l.next(pos)])
            }
            Plan::Worst => self.worst[t],
        }
    }

    /// Unfolds reachable `(transformed vertex, plan)` pairs into a Moore machine
    /// over the raw game.
    fn build(&self, raw: &Game) -> MooreStrategy {
        let tg = self.table.transformed();
        let arena = tg.game();
        let start = (arena.init(), self.fresh(arena.init()));
        let mut index: HashMap<(VertexId, Plan), usize> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut queue = VecDeque::from([0usize]);
        let mut transitions: Vec<Vec<(VertexId, usize)>> = vec![Vec::new()];
        while let Some(i) = queue.pop_front() {
            let (t, plan) = states[i];
            let targets: Vec<VertexId> = if arena.owner(t) == self.player {
                vec![self.choice(plan, t).expect("a move at owned vertices")]
            } else {
                arena.successors(t).collect()
            };
            for t2 in targets {
                let key = (t2, self.step(plan, t2));
                let j = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    transitions.push(Vec::new());
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                transitions[i].push((tg.raw_vertex(t2), j));
            }
        }
        let n = raw.vertex_count();
        let mut update: Vec<Vec<usize>> = (0..states.len()).map(|m| vec![m; n]).collect();
        let mut moves = vec![vec![None; n]; states.len()];
        for (m, &(t, plan)) in states.iter().enumerate() {
            for &(x, j) in &transitions[m] {
                update[m][x] = j;
            }
            let here = tg.raw_vertex(t);
            for v in raw.vertices().filter(|&v| raw.owner(v) == self.player) {
                moves[m][v] = if v == here {
                    self.choice(plan, t).map(|t2| tg.raw_vertex(t2))
                } else {
                    raw.successors(v).next()
                };
            }
        }
        MooreStrategy::new(raw, self.player, 0, update, moves)
            .expect("constructed strategies are well formed")
            .minimize(raw)
    }
}

fn worst_case_choices(table: &ValueTable, player: Player) -> Vec<Option<VertexId>> {
    let arena = table.arena();
    let sol = solve_zero_sum(&CoalitionGame::new(arena, player), arena.measure());
    arena
        .vertices()
        .map(|t| {
            (arena.owner(t) == player)
                .then(|| arena.edge(sol.strategy[t].expect("optimal move")).dst)
        })
        .collect()
}

fn planned(prefix_cycle: Option<(Vec<VertexId>, Vec<VertexId>)>, t: VertexId) -> Option<Planned> {
    let (prefix, cycle) = prefix_cycle?;
    let cycle_start = prefix.len();
    let seq: Vec<VertexId> = prefix.into_iter().chain(cycle).collect();
    debug_assert_eq!(seq[0], t);
    Some(Planned { seq, cycle_start })
}

/// A strongly cooperative-optimal strategy: it follows a cooperative-optimal
/// lasso wherever cooperation can beat the antagonistic value and plays
/// worst-case optimally elsewhere. Such strategies are admissible.
pub fn construct_sco(g: &Game, player: Player) -> MooreStrategy {
    let table = compute_value_table(g);
    construct_sco_with_table(g, &table, player)
}

pub fn construct_sco_with_table(g: &Game, table: &ValueTable, player: Player) -> MooreStrategy {
    let arena = table.arena();
    let graph = game_graph(arena, player);
    let lassos = arena
        .vertices()
        .map(|t| {
            let v = table.get(player, t);
            if v.cval > v.aval {
                planned(optimal_lasso(&graph, arena.measure(), t, v.cval), t)
            } else {
                None
            }
        })
        .collect();
    let planner = Planner {
        table,
        player,
        policy: Policy::StrongCooperative,
        lassos,
        worst: worst_case_choices(table, player),
    };
    planner.build(g)
}

/// Outcome of the worst-case cooperative-optimal construction.
#[derive(Clone, Debug)]
pub struct WcoCandidate {
    pub strategy: MooreStrategy,
    /// both defining equalities hold at every reachable product state
    pub verified: bool,
}

/// A candidate worst-case cooperative-optimal strategy: follow a lasso
/// realising `acVal` inside the subgraph that keeps the antagonistic value,
/// and play worst-case optimally once the others leave it.
pub fn construct_wco_candidate(g: &Game, player: Player) -> WcoCandidate {
    let table = compute_value_table(g);
    let arena = table.arena();
    let graph = game_graph(arena, player);
    let lassos = arena
        .vertices()
        .map(|t| {
            let v = table.get(player, t);
            let keep: Vec<bool> = arena
                .vertices()
                .map(|u| table.aval(player, u) >= v.aval)
                .collect();
            planned(
                optimal_lasso(&graph.restrict(&keep), arena.measure(), t, v.acval),
                t,
            )
        })
        .collect();
    let planner = Planner {
        table: &table,
        player,
        policy: Policy::WorstCaseCooperative,
        lassos,
        worst: worst_case_choices(&table, player),
    };
    let strategy = planner.build(g);
    let verified = verify_wco(&table, &strategy).unwrap_or(false);
    WcoCandidate { strategy, verified }
}

/// Checks `aVal(h,σ) = aVal(h)` and `cVal(h,σ) = acVal(h)` at every
/// reachable product state.
pub fn verify_wco(table: &ValueTable, s: &MooreStrategy) -> Result<bool, AdmissibilityError> {
    let product: ProductGame = product_over(table.transformed(), s)?;
    let ext = fixed_strategy_extremes(&product, s.player());
    Ok(ext.iter().enumerate().all(|(i, &(lo, hi))| {
        let v = table.get(s.player(), product.state(i).0);
        lo == v.aval && hi == v.acval
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::GameBuilder;
    use crate::game::PayoffKind;
    use crate::transform::parse_strategy;

    fn verdict(g: &Game, text: &str) -> AdmissibilityVerdict {
        check_strategy_admissible(g, &parse_strategy(text, g).unwrap()).unwrap()
    }

    #[test]
    fn fig2_verdicts() {
        let g = fixtures::fig2();
        let v = verdict(&g, fixtures::FIG2_S2S6);
        let w = v.witness().expect("dominated");
        assert_eq!(g.name(w.vertex), "s1");
        assert_eq!(w.violated, Violation::Eq3);
        assert_eq!(
            (w.cval_sigma, w.aval, w.aval_sigma),
            (4.into(), 5.into(), 3.into())
        );
        assert!(w.holds());
        assert!(verdict(&g, fixtures::FIG2_S2S5).is_admissible());
        assert!(verdict(&g, fixtures::FIG2_S3).is_admissible());
    }

    #[test]
    fn fig3_verdicts() {
        let g = fixtures::fig3();
        assert!(check_strategy_admissible(&g, &fixtures::fig3_sigma_inf(&g))
            .unwrap()
            .is_admissible());
        for k in 0..=5 {
            let v = check_strategy_admissible(&g, &fixtures::fig3_sigma_k(&g, k)).unwrap();
            let w = v.witness().expect("dominated");
            assert_eq!(w.violated, Violation::Eq4, "k={k}");
            assert_eq!(g.name(w.vertex), "s1");
            assert_eq!(w.memory, k);
            assert_eq!(
                (w.aval, w.acval, w.aval_sigma, w.cval_sigma),
                (1.into(), 2.into(), 1.into(), 1.into())
            );
        }
    }

    #[test]
    fn fig1_player2_verdicts() {
        let g = fixtures::fig1();
        let v = verdict(&g, fixtures::FIG1_P2_BACK);
        let w = v.witness().expect("dominated");
        assert_eq!(g.name(w.vertex), "v2");
        assert_eq!(w.violated, Violation::Eq3);
        let names: Vec<&str> = w.history.iter().map(|&x| g.name(x)).collect();
        assert_eq!(names, vec!["v1", "v2"]);
        assert!(verdict(&g, fixtures::FIG1_P2_LOOP).is_admissible());
    }

    #[test]
    fn sco_fig3_loops_forever() {
        let g = fixtures::fig3();
        let s = construct_sco(&g, Player::new(1));
        let s1 = g.vertex_by_name("s1").unwrap();
        assert_eq!(s.choice(s.initial_memory(), s1), g.vertex_by_name("s2"));
        assert!(check_strategy_admissible(&g, &s).unwrap().is_admissible());
    }

    #[test]
    fn sco_fig1_goes_to_v2() {
        let g = fixtures::fig1();
        let s = construct_sco(&g, Player::new(1));
        let v1 = g.vertex_by_name("v1").unwrap();
        assert_eq!(s.choice(s.initial_memory(), v1), g.vertex_by_name("v2"));
        assert!(check_strategy_admissible(&g, &s).unwrap().is_admissible());
    }

    #[test]
    fn single_successor_game() {
        let g = GameBuilder::new(2, PayoffKind::LimSup)
            .vertex("a", 1)
            .vertex("b", 2)
            .edge("a", "b", &[1, 0])
            .edge("b", "a", &[0, 1])
            .init("a")
            .build()
            .unwrap();
        let s = construct_sco(&g, Player::new(1));
        assert!(check_strategy_admissible(&g, &s).unwrap().is_admissible());
        assert!(construct_wco_candidate(&g, Player::new(1)).verified);
    }

    #[test]
    fn wco_fig1() {
        let g = fixtures::fig1();
        let c = construct_wco_candidate(&g, Player::new(1));
        assert!(c.verified);
        assert!(check_strategy_admissible(&g, &c.strategy)
            .unwrap()
            .is_admissible());
    }
}
