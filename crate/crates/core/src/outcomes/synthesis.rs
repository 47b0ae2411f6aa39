//! Assume-admissible synthesis.
//!
//! The objective is solved as a parity game over the product of the arena
//! with the obligation trackers and a Zielonka tree. A winning strategy of
//! the parity game need not be admissible, so the synthesized strategy is
//! built like a strongly cooperative-optimal one inside the arena restricted
//! to moves that decrease a progress measure: every play using only such
//! moves is winning, and the player cooperates wherever cooperation inside
//! the restriction can beat the antagonistic value. Every candidate is
//! checked for admissibility and for the objective before it is returned.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::muller::find_accepting_lasso;
use super::product::{explore, Components, Product};
use super::{labeled_game, Cond, LabeledGame, OutcomeError, PayoffSpec, ZielonkaTree};
use crate::admissibility::check_with_table;
use crate::game::{Game, Player};
use crate::rational::Rational;
use crate::solvers::{
    one_player_optimum, optimal_lasso, progress_measure, progress_moves, solve_parity,
    solve_zero_sum, Arena, CoalitionGame, ParityGame, WeightedGraph,
};
use crate::transform::MooreStrategy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynthResult {
    Realizable(MooreStrategy),
    Unrealizable,
}

/// The assume-admissible objective of `player` over the product tracking
/// every player's admissibility formula and the spec.
fn objective<'a>(
    lg: &'a LabeledGame,
    player: Player,
    spec: &'a PayoffSpec,
    strategy: Option<&'a MooreStrategy>,
) -> Result<(Components<'a>, Cond), OutcomeError> {
    let players: Vec<Player> = Player::all(lg.arena().players()).collect();
    let mut comps = Components::new(lg, players.clone(), strategy);
    let spec_cond = comps.compile(spec)?;
    let own = players
        .iter()
        .position(|&p| p == player)
        .expect("player of the game");
    let others: Vec<Cond> = (0..players.len())
        .filter(|&k| k != own)
        .map(|k| comps.phi_cond(k))
        .collect::<Result<_, _>>()?;
    let cond = Cond::And(vec![
        comps.phi_cond(own)?,
        Cond::Or(vec![Cond::And(others).not(), spec_cond]),
    ]);
    Ok((comps, cond))
}

/// A strategy for `player` winning `Φ_adm^player ∧ (⋀_{j≠player} Φ_adm^j → spec)`.
pub fn synthesize_assume_admissible(
    g: &Game,
    player: Player,
    spec: &PayoffSpec,
) -> Result<SynthResult, OutcomeError> {
    let lg = labeled_game(g);
    let (comps, cond) = objective(&lg, player, spec, None)?;
    let prod = explore(&comps)?;
    let tree = ZielonkaTree::new(&cond);
    let game = ParityProduct::new(&prod, &tree);
    let owner: Vec<bool> = game
        .states
        .iter()
        .map(|s| lg.arena().owner(prod.nodes[s.0].t) == player)
        .collect();
    let edges: Vec<(usize, usize)> = game
        .succ
        .iter()
        .enumerate()
        .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
        .collect();
    let arena = Arena::new(owner.clone(), edges);
    let priority = game.states.iter().map(|s| s.2).collect();
    let pg = ParityGame { arena, priority };
    let mu = progress_measure(&pg);
    if mu[0].is_none() {
        return Ok(SynthResult::Unrealizable);
    }
    let good = progress_moves(&pg, &mu);
    let ctx = Unfold {
        g,
        lg: &lg,
        prod: &prod,
        game: &game,
        player,
    };
    let cooperative = RestrictedPlanner::new(&ctx, &pg, &mu, &good)
        .build(&ctx)
        .minimize(g);
    if accepts(&lg, g, &cooperative, spec)? {
        return Ok(SynthResult::Realizable(cooperative));
    }
    let (win, _) = solve_parity(&pg);
    let winning = ctx
        .unfold(
            0,
            |s| s,
            |s| {
                if owner[s] {
                    vec![pg.arena.edge(win.strategy[s].expect("winning move")).1]
                } else {
                    game.succ[s].clone()
                }
            },
        )
        .minimize(g);
    if accepts(&lg, g, &winning, spec)? {
        return Ok(SynthResult::Realizable(winning));
    }
    Err(OutcomeError::NoAdmissibleWitness)
}

fn accepts(
    lg: &LabeledGame,
    g: &Game,
    s: &MooreStrategy,
    spec: &PayoffSpec,
) -> Result<bool, OutcomeError> {
    Ok(check_with_table(lg.table(), s)?.is_admissible() && wins_objective(g, s, spec)?)
}

/// Whether every outcome of `strategy` satisfies the assume-admissible
/// objective of its player for `spec`.
pub fn wins_objective(
    g: &Game,
    strategy: &MooreStrategy,
    spec: &PayoffSpec,
) -> Result<bool, OutcomeError> {
    let lg = labeled_game(g);
    let (comps, cond) = objective(&lg, strategy.player(), spec, Some(strategy))?;
    let prod = explore(&comps)?;
    Ok(find_accepting_lasso(&prod.graph, 0, &cond.not()).is_none())
}

/// Product states paired with Zielonka-tree states and the priority of the
/// transition that entered them.
struct ParityProduct {
    states: Vec<(usize, usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl ParityProduct {
    fn new(prod: &Product, tree: &ZielonkaTree) -> Self {
        let start = (0, tree.initial(), 0);
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut succ = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (n, leaf, _) = states[i];
            let mut out = Vec::new();
            for &(n2, colors) in &prod.graph.succ[n] {
                let (leaf2, p) = tree.step(leaf, colors);
                let key = (n2, leaf2, p);
                let id = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                if !out.contains(&id) {
                    out.push(id);
                }
            }
            succ.push(out);
            i += 1;
        }
        ParityProduct { states, succ }
    }
}

struct Unfold<'a> {
    g: &'a Game,
    lg: &'a LabeledGame,
    prod: &'a Product,
    game: &'a ParityProduct,
    player: Player,
}

impl Unfold<'_> {
    /// Transformed vertex of a game state.
    fn t(&self, s: usize) -> usize {
        self.prod.nodes[self.game.states[s].0].t
    }

    fn raw(&self, s: usize) -> usize {
        self.lg.table().transformed().raw_vertex(self.t(s))
    }

    fn owned(&self, s: usize) -> bool {
        self.lg.arena().owner(self.t(s)) == self.player
    }

    /// Moore machine over the raw game whose memory states are the states of
    /// an arbitrary finite machine `next` over game states, started at
    /// `start`, where `state` projects a memory key to its game state.
    /// Owned states must have exactly one successor.
    fn unfold<K: Copy + Eq + Hash>(
        &self,
        start: K,
        state: impl Fn(K) -> usize,
        next: impl Fn(K) -> Vec<K>,
    ) -> MooreStrategy {
        let mut index: HashMap<K, usize> = HashMap::from([(start, 0)]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([0usize]);
        let mut transitions: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(i) = queue.pop_front() {
            for k2 in next(order[i]) {
                let j = *index.entry(k2).or_insert_with(|| {
                    order.push(k2);
                    transitions.push(Vec::new());
                    queue.push_back(order.len() - 1);
                    order.len() - 1
                });
                transitions[i].push(j);
            }
        }
        let g = self.g;
        let mut update: Vec<Vec<usize>> = (0..order.len())
            .map(|m| vec![m; g.vertex_count()])
            .collect();
        let mut moves = vec![vec![None; g.vertex_count()]; order.len()];
        for (m, &k) in order.iter().enumerate() {
            let s = state(k);
            for &j in &transitions[m] {
                update[m][self.raw(state(order[j]))] = j;
            }
            for v in g.vertices().filter(|&v| g.owner(v) == self.player) {
                moves[m][v] = g.successors(v).next();
            }
            if self.owned(s) {
                let j = transitions[m][0];
                moves[m][self.raw(s)] = Some(self.raw(state(order[j])));
            }
        }
        MooreStrategy::new(g, self.player, 0, update, moves)
            .expect("unfolded strategies are well formed")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Plan {
    /// following the lasso planned at `owner`, currently at position `pos`
    Lasso { owner: usize, pos: usize },
    /// worst-case optimal play inside the restriction
    Worst,
}

/// Planned lasso as one sequence; positions past the end wrap to `cycle_start`.
struct Planned {
    seq: Vec<usize>,
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

/// Strongly cooperative play over the game states, restricted to winning
/// moves of the player.
struct RestrictedPlanner {
    /// states where cooperation inside the restriction beats the antagonistic value
    cooperate: Vec<bool>,
    lassos: Vec<Option<Planned>>,
    worst: Vec<Option<usize>>,
    succ: Vec<Vec<usize>>,
}

impl RestrictedPlanner {
    fn new(ctx: &Unfold, pg: &ParityGame, mu: &[crate::solvers::Measure], good: &[bool]) -> Self {
        let n = ctx.game.states.len();
        let arena = ctx.lg.arena();
        let weight = |s: usize, s2: usize| -> Rational {
            // losing states carry an unreachable placeholder loop
            match arena.edge_between(ctx.t(s), ctx.t(s2)) {
                Some(e) if mu[s].is_some() => arena.weight(e, ctx.player),
                _ => Rational::from(0),
            }
        };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            if mu[s].is_none() {
                succ[s].push(s);
                continue;
            }
            for &e in pg.arena.out(s) {
                let s2 = pg.arena.edge(e).1;
                if !ctx.owned(s) || good[e] {
                    succ[s].push(s2);
                }
            }
        }
        let graph = WeightedGraph {
            succ: succ
                .iter()
                .enumerate()
                .map(|(s, vs)| vs.iter().map(|&s2| (s2, weight(s, s2))).collect())
                .collect(),
        };
        let measure = arena.measure();
        let rc = one_player_optimum(&graph, measure, true);
        let edges: Vec<(usize, usize)> = succ
            .iter()
            .enumerate()
            .flat_map(|(s, vs)| vs.iter().map(move |&s2| (s, s2)))
            .collect();
        let weights = edges.iter().map(|&(s, s2)| weight(s, s2)).collect();
        let owner = (0..n).map(|s| ctx.owned(s)).collect();
        let cg = CoalitionGame {
            arena: Arena::new(owner, edges.clone()),
            weights,
        };
        let sol = solve_zero_sum(&cg, measure);
        let worst = (0..n)
            .map(|s| sol.strategy[s].map(|e| edges[e].1))
            .collect();
        let aval = |s: usize| ctx.lg.table().aval(ctx.player, ctx.t(s));
        let cooperate: Vec<bool> = (0..n)
            .map(|s| rc[s].as_ref().is_some_and(|c| *c > aval(s)))
            .collect();
        let lassos = (0..n)
            .map(|s| {
                if !cooperate[s] {
                    return None;
                }
                let (prefix, cycle) = optimal_lasso(&graph, measure, s, rc[s]?)?;
                let cycle_start = prefix.len();
                Some(Planned {
                    seq: prefix.into_iter().chain(cycle).collect(),
                    cycle_start,
                })
            })
            .collect();
        RestrictedPlanner {
            cooperate,
            lassos,
            worst,
            succ,
        }
    }

    fn fresh(&self, s: usize) -> Plan {
        if self.cooperate[s] && self.lassos[s].is_some() {
            Plan::Lasso { owner: s, pos: 0 }
        } else {
            Plan::Worst
        }
    }

    fn step(&self, plan: Plan, s2: usize) -> Plan {
        if !self.cooperate[s2] {
            return Plan::Worst;
        }
        if let Plan::Lasso { owner, pos } = plan {
            let l = self.lassos[owner].as_ref().expect("planned lasso");
            let np = l.next(pos);
            if l.seq[np] == s2 {
                return Plan::Lasso { owner, pos: np };
            }
        }
        self.fresh(s2)
    }

    fn choice(&self, plan: Plan, s: usize) -> usize {
        match plan {
            Plan::Lasso { owner, pos } => {
                let l = self.lassos[owner].as_ref().expect("planned lasso");
                l.seq[l.next(pos)]
            }
            Plan::Worst => self.worst[s].unwrap_or(self.succ[s][0]),
        }
    }

    fn build(&self, ctx: &Unfold) -> MooreStrategy {
        ctx.unfold(
            (0, self.fresh(0)),
            |k| k.0,
            |(s, plan)| {
                let targets = if ctx.owned(s) {
                    vec![self.choice(plan, s)]
                } else {
                    self.succ[s].clone()
                };
                targets
                    .into_iter()
                    .map(|s2| (s2, self.step(plan, s2)))
                    .collect()
            },
        )
    }
}
