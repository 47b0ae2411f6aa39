//! Prefix-independence transform for `Inf`/`Sup`, finite-memory strategies,
//! and the synchronized product of a strategy with an arena.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::game::{EdgeId, Game, GameBuilder, Lasso, PathError, PayoffKind, Player, VertexId};
use crate::rational::Rational;

/// Per-player extremum recorded so far. Before the first edge it holds the
/// neutral bound (largest weight for `Inf`, smallest for `Sup`).
pub type Record = Vec<Rational>;

/// An arena on which every payoff is prefix-independent, together with the
/// map back to the original game.
///
/// For `Inf` (`Sup`) inputs the transformed arena carries, per player, the
/// running minimum (maximum) as its weights, so its measure is rewritten to
/// `LimInf` (`LimSup`): on non-increasing (non-decreasing) weight sequences
/// both readings coincide.
#[derive(Clone, Debug)]
pub struct TransformedGame {
    game: Game,
    source_measure: PayoffKind,
    back: Vec<(VertexId, Record)>,
    /// raw destination -> transformed destination, per transformed vertex
    step: Vec<HashMap<VertexId, VertexId>>,
}

impl TransformedGame {
    /// The trivial transform, keeping `g` and its measure as they are.
    pub fn identity(g: &Game) -> Self {
        let back = g.vertices().map(|v| (v, Vec::new())).collect();
        let step = g
            .vertices()
            .map(|v| g.successors(v).map(|u| (u, u)).collect())
            .collect();
        TransformedGame {
            game: g.clone(),
            source_measure: g.measure(),
            back,
            step,
        }
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn source_measure(&self) -> PayoffKind {
        self.source_measure
    }

    pub fn is_identity(&self) -> bool {
        self.source_measure == self.game.measure()
    }

    pub fn raw_vertex(&self, t: VertexId) -> VertexId {
        self.back[t].0
    }

    pub fn record(&self, t: VertexId) -> &Record {
        &self.back[t].1
    }

    /// The transformed successor of `t` reached by moving to raw vertex `raw_dst`.
    pub fn step(&self, t: VertexId, raw_dst: VertexId) -> Option<VertexId> {
        self.step[t].get(&raw_dst).copied()
    }

    /// Runs a raw path from the initial vertex through the transform.
    pub fn run(&self, raw_path: &[VertexId]) -> Result<VertexId, PathError> {
        let mut t = self.game.init();
        match raw_path.first() {
            Some(&v) if v == self.raw_vertex(t) => {}
            _ => return Err(PathError::NotFromInit),
        }
        for w in raw_path.windows(2) {
            t = self
                .step(t, w[1])
                .ok_or_else(|| PathError::NotAnEdge(w[0].to_string(), w[1].to_string()))?;
        }
        Ok(t)
    }

    /// Image of a raw lasso starting at the initial vertex.
    pub fn lift_lasso(&self, raw: &Lasso) -> Result<Lasso, PathError> {
        if raw.cycle.is_empty() {
            return Err(PathError::EmptyCycle);
        }
        let mut t = self.game.init();
        if raw.first() != self.raw_vertex(t) {
            return Err(PathError::NotFromInit);
        }
        let mut walk = vec![t];
        let full: Vec<VertexId> = raw.prefix.iter().chain(&raw.cycle).copied().collect();
        let bad = |a: VertexId, b: VertexId| PathError::NotAnEdge(a.to_string(), b.to_string());
        for w in full.windows(2) {
            t = self.step(t, w[1]).ok_or_else(|| bad(w[0], w[1]))?;
            walk.push(t);
        }
        // walk[i] corresponds to full[i]; unroll the cycle until its entry state repeats
        let entry_index = raw.prefix.len();
        let mut seen: HashMap<VertexId, usize> = HashMap::new();
        let mut start = entry_index;
        loop {
            let entry = walk[start];
            if let Some(&first) = seen.get(&entry) {
                return Ok(Lasso::new(
                    walk[..first].to_vec(),
                    walk[first..start].to_vec(),
                ));
            }
            seen.insert(entry, start);
            for i in 0..raw.cycle.len() {
                let next = raw.cycle[(i + 1) % raw.cycle.len()];
                let cur = *walk.last().unwrap();
                if start + i + 1 < walk.len() {
                    continue;
                }
                let nt = self
                    .step(cur, next)
                    .ok_or_else(|| bad(self.raw_vertex(cur), next))?;
                walk.push(nt);
            }
            start += raw.cycle.len();
        }
    }

    /// Projects a lasso of the transformed arena to raw vertices.
    pub fn project_lasso(&self, l: &Lasso) -> Lasso {
        Lasso::new(
            l.prefix.iter().map(|&t| self.raw_vertex(t)).collect(),
            l.cycle.iter().map(|&t| self.raw_vertex(t)).collect(),
        )
    }
}

fn combine(kind: PayoffKind, rec: Rational, w: Rational) -> Rational {
    if kind == PayoffKind::Inf {
        rec.min(w)
    } else {
        rec.max(w)
    }
}

pub fn make_prefix_independent(g: &Game) -> TransformedGame {
    let kind = g.measure();
    if kind.is_prefix_independent() {
        return TransformedGame::identity(g);
    }
    let mut index: HashMap<(VertexId, Record), usize> = HashMap::new();
    let mut states: Vec<(VertexId, Record)> = Vec::new();
    let mut edges: Vec<(usize, usize, Vec<Rational>)> = Vec::new();
    let neutral = Player::all(g.players())
        .map(|p| {
            let levels = g.weight_levels(p);
            if kind == PayoffKind::Inf {
                *levels.last().unwrap()
            } else {
                levels[0]
            }
        })
        .collect();
    let start = (g.init(), neutral);
    index.insert(start.clone(), 0);
    states.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let (v, rec) = states[s].clone();
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            let out: Vec<Rational> = rec
                .iter()
                .zip(&edge.weights)
                .map(|(r, w)| combine(kind, *r, *w))
                .collect();
            let key = (edge.dst, out.clone());
            let t = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            edges.push((s, t, out));
        }
    }
    // name states `<raw>__<k>` with k counting copies of the raw vertex in discovery order
    let mut copies = vec![0usize; g.vertex_count()];
    let names: Vec<String> = states
        .iter()
        .map(|(v, _)| {
            let k = copies[*v];
            copies[*v] += 1;
            format!("{}__{}", g.name(*v), k)
        })
        .collect();
    let mut b = GameBuilder::new(
        g.players(),
        if kind == PayoffKind::Inf {
            PayoffKind::LimInf
        } else {
            PayoffKind::LimSup
        },
    );
    for (i, (v, _)) in states.iter().enumerate() {
        b = b.vertex(&names[i], g.owner(*v).number());
    }
    for (s, t, w) in edges {
        b = b.edge_q(&names[s], &names[t], w);
    }
    let game = b
        .init(&names[0])
        .build()
        .expect("transformed arena is valid by construction");
    let mut back = vec![(0, Vec::new()); states.len()];
    for (i, st) in states.into_iter().enumerate() {
        back[game.vertex_by_name(&names[i]).unwrap()] = st;
    }
    let step = game
        .vertices()
        .map(|t| game.successors(t).map(|u| (back[u].0, u)).collect())
        .collect();
    TransformedGame {
        game,
        source_measure: kind,
        back,
        step,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("strategy is for player {strategy} but the game has {players} players")]
    PlayerMismatch { strategy: usize, players: usize },
    #[error("memory {memory} at `{vertex}`: `{target}` is not a successor")]
    IllegalMove {
        memory: usize,
        vertex: String,
        target: String,
    },
    #[error("memory {memory} at `{vertex}`: missing move")]
    MissingMove { memory: usize, vertex: String },
    #[error("memory state {0} out of range")]
    BadMemory(usize),
}

/// A finite-memory strategy given as a Moore machine. The memory is updated
/// with every vertex entered; the initial vertex is read with `initial_memory`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreStrategy {
    player: Player,
    initial_memory: usize,
    /// `update[m][v]`: memory after entering `v` with memory `m`
    update: Vec<Vec<usize>>,
    /// `moves[m][v]`: chosen successor at a vertex `v` owned by the player
    moves: Vec<Vec<Option<VertexId>>>,
}

impl MooreStrategy {
    pub fn new(
        g: &Game,
        player: Player,
        initial_memory: usize,
        update: Vec<Vec<usize>>,
        moves: Vec<Vec<Option<VertexId>>>,
    ) -> Result<Self, StrategyError> {
        if player.number() > g.players() {
            return Err(StrategyError::PlayerMismatch {
                strategy: player.number(),
                players: g.players(),
            });
        }
        let memory = update.len();
        if initial_memory >= memory || moves.len() != memory {
            return Err(StrategyError::BadMemory(initial_memory));
        }
        for m in 0..memory {
            for v in g.vertices() {
                if update[m][v] >= memory {
                    return Err(StrategyError::BadMemory(update[m][v]));
                }
                if g.owner(v) != player {
                    continue;
                }
                match moves[m][v] {
                    None => {
                        return Err(StrategyError::MissingMove {
                            memory: m,
                            vertex: g.name(v).into(),
                        })
                    }
                    Some(t) if g.edge_between(v, t).is_none() => {
                        return Err(StrategyError::IllegalMove {
                            memory: m,
                            vertex: g.name(v).into(),
                            target: g
                                .vertex_by_name(g.name(t))
                                .map(|x| g.name(x).to_string())
                                .unwrap_or_default(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(MooreStrategy {
            player,
            initial_memory,
            update,
            moves,
        })
    }

    /// Memoryless strategy from a successor choice per owned vertex.
    pub fn memoryless(
        g: &Game,
        player: Player,
        choice: &[Option<VertexId>],
    ) -> Result<Self, StrategyError> {
        MooreStrategy::new(
            g,
            player,
            0,
            vec![vec![0; g.vertex_count()]],
            vec![choice.to_vec()],
        )
    }

    /// Memoryless strategy from `(vertex, successor)` name pairs.
    pub fn memoryless_by_name(
        g: &Game,
        player: Player,
        pairs: &[(&str, &str)],
    ) -> Result<Self, StrategyError> {
        let mut choice = vec![None; g.vertex_count()];
        for (v, t) in pairs {
            let v = g.vertex_by_name(v).ok_or(StrategyError::Syntax {
                line: 0,
                msg: format!("unknown `{v}`"),
            })?;
            let t = g.vertex_by_name(t).ok_or(StrategyError::Syntax {
                line: 0,
                msg: format!("unknown `{t}`"),
            })?;
            choice[v] = Some(t);
        }
        MooreStrategy::memoryless(g, player, &choice)
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn memory_size(&self) -> usize {
        self.update.len()
    }

    pub fn initial_memory(&self) -> usize {
        self.initial_memory
    }

    pub fn next_memory(&self, m: usize, entered: VertexId) -> usize {
        self.update[m][entered]
    }

    pub fn choice(&self, m: usize, v: VertexId) -> Option<VertexId> {
        self.moves[m][v]
    }

    /// An equivalent strategy with merged memory states. Entries never used
    /// on a play from the initial vertex are reset to canonical defaults,
    /// then states with the same moves and equivalent updates are merged.
    /// The result plays exactly like `self` on every play of `g`.
    pub fn minimize(&self, g: &Game) -> MooreStrategy {
        let n = self.memory_size();
        let owned = |v: VertexId| g.owner(v) == self.player;
        let mut seen = vec![vec![false; g.vertex_count()]; n];
        let mut used_update = vec![vec![false; g.vertex_count()]; n];
        let mut used_move = vec![vec![false; g.vertex_count()]; n];
        let mut queue = VecDeque::from([(g.init(), self.initial_memory)]);
        seen[self.initial_memory][g.init()] = true;
        while let Some((v, m)) = queue.pop_front() {
            let targets: Vec<VertexId> = if owned(v) {
                used_move[m][v] = true;
                self.moves[m][v].into_iter().collect()
            } else {
                g.successors(v).collect()
            };
            for x in targets {
                used_update[m][x] = true;
                let m2 = self.update[m][x];
                if !seen[m2][x] {
                    seen[m2][x] = true;
                    queue.push_back((x, m2));
                }
            }
        }
        let update: Vec<Vec<usize>> = (0..n)
            .map(|m| {
                (0..g.vertex_count())
                    .map(|x| {
                        if used_update[m][x] {
                            self.update[m][x]
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let moves: Vec<Vec<Option<VertexId>>> = (0..n)
            .map(|m| {
                g.vertices()
                    .map(|v| match owned(v) {
                        true if used_move[m][v] => self.moves[m][v],
                        true => g.successors(v).next(),
                        false => None,
                    })
                    .collect()
            })
            .collect();
        // Moore partition refinement
        let mut class: Vec<usize> = vec![0; n];
        let mut count = 0;
        loop {
            let mut index: HashMap<(Vec<Option<VertexId>>, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|m| {
                    let key = (
                        moves[m].clone(),
                        update[m].iter().map(|&m2| class[m2]).collect(),
                    );
                    let k = index.len();
                    *index.entry(key).or_insert(k)
                })
                .collect();
            let stable = index.len() == count;
            count = index.len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes by first reach from the initial state
        let mut number = vec![usize::MAX; count];
        let mut rep = Vec::new();
        let mut queue = VecDeque::from([self.initial_memory]);
        number[class[self.initial_memory]] = 0;
        rep.push(self.initial_memory);
        while let Some(m) = queue.pop_front() {
            for &m2 in &update[m] {
                if number[class[m2]] == usize::MAX {
                    number[class[m2]] = rep.len();
                    rep.push(m2);
                    queue.push_back(m2);
                }
            }
        }
        MooreStrategy {
            player: self.player,
            initial_memory: 0,
            update: rep
                .iter()
                .map(|&m| update[m].iter().map(|&m2| number[class[m2]]).collect())
                .collect(),
            moves: rep.iter().map(|&m| moves[m].clone()).collect(),
        }
    }
}

pub fn parse_strategy(text: &str, g: &Game) -> Result<MooreStrategy, StrategyError> {
    let mut player = None;
    let mut memory = None;
    let mut initmem = None;
    let mut updates = Vec::new();
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap();
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: String| StrategyError::Syntax { line, msg };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| syntax(format!("expected a number, got `{s}`")))
        };
        let vertex = |s: &str| {
            g.vertex_by_name(s)
                .ok_or_else(|| syntax(format!("unknown vertex `{s}`")))
        };
        match (toks[0], toks.len()) {
            ("strategy", 2) => {
                let p = num(toks[1])?;
                if p == 0 || p > g.players() {
                    return Err(StrategyError::PlayerMismatch {
                        strategy: p,
                        players: g.players(),
                    });
                }
                player = Some(Player::new(p));
            }
            ("memory", 2) => {
                let m = num(toks[1])?;
                if m == 0 {
                    return Err(syntax("memory must be positive".into()));
                }
                memory = Some(m);
            }
            ("initmem", 2) => initmem = Some(num(toks[1])?),
            ("update", 4) => updates.push((line, num(toks[1])?, vertex(toks[2])?, num(toks[3])?)),
            ("move", 4) => moves.push((line, num(toks[1])?, vertex(toks[2])?, vertex(toks[3])?)),
            (d, _) => return Err(syntax(format!("malformed `{d}` directive"))),
        }
    }
    let player = player.ok_or(StrategyError::Syntax {
        line: 0,
        msg: "missing `strategy`".into(),
    })?;
    let memory = memory.ok_or(StrategyError::Syntax {
        line: 0,
        msg: "missing `memory`".into(),
    })?;
    let initmem = initmem.unwrap_or(0);
    let mut update: Vec<Vec<usize>> = (0..memory).map(|m| vec![m; g.vertex_count()]).collect();
    let mut mv = vec![vec![None; g.vertex_count()]; memory];
    for (line, m, v, m2) in updates {
        if m >= memory || m2 >= memory {
            return Err(StrategyError::Syntax {
                line,
                msg: "memory state out of range".into(),
            });
        }
        update[m][v] = m2;
    }
    for (line, m, v, t) in moves {
        if m >= memory {
            return Err(StrategyError::Syntax {
                line,
                msg: "memory state out of range".into(),
            });
        }
        if g.owner(v) != player {
            return Err(StrategyError::Syntax {
                line,
                msg: format!("`{}` is not owned by player {player}", g.name(v)),
            });
        }
        mv[m][v] = Some(t);
    }
    MooreStrategy::new(g, player, initmem, update, mv)
}

pub fn serialize_strategy(s: &MooreStrategy, g: &Game) -> String {
    let mut out = format!(
        "strategy {}\nmemory {}\ninitmem {}\n",
        s.player,
        s.memory_size(),
        s.initial_memory
    );
    for m in 0..s.memory_size() {
        for v in g.vertices() {
            if s.update[m][v] != m {
                out.push_str(&format!("update {m} {} {}\n", g.name(v), s.update[m][v]));
            }
        }
    }
    for m in 0..s.memory_size() {
        for v in g.vertices() {
            if let Some(t) = s.moves[m][v] {
                out.push_str(&format!("move {m} {} {}\n", g.name(v), g.name(t)));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductEdge {
    pub target: usize,
    /// edge of the underlying arena
    pub edge: EdgeId,
}

/// Reachable synchronized product of an arena with a strategy.
#[derive(Clone, Debug)]
pub struct ProductGame {
    arena: Game,
    player: Player,
    states: Vec<(VertexId, usize)>,
    succ: Vec<Vec<ProductEdge>>,
    parent: Vec<Option<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("memory {memory} at `{vertex}`: the move leaves the arena")]
    NonEdge { memory: usize, vertex: String },
}

impl ProductGame {
    pub fn arena(&self) -> &Game {
        &self.arena
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `(arena vertex, memory)` of a product state; state 0 is initial.
    pub fn state(&self, s: usize) -> (VertexId, usize) {
        self.states[s]
    }

    pub fn out(&self, s: usize) -> &[ProductEdge] {
        &self.succ[s]
    }

    pub fn weight(&self, e: &ProductEdge, player: Player) -> Rational {
        self.arena.weight(e.edge, player)
    }

    /// Product states on a shortest path from the initial state to `s`.
    pub fn path_to(&self, s: usize) -> Vec<usize> {
        let mut path = vec![s];
        let mut cur = s;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn find(&self, v: VertexId, m: usize) -> Option<usize> {
        self.states.iter().position(|&st| st == (v, m))
    }
}

pub fn product_with_strategy(g: &Game, s: &MooreStrategy) -> Result<ProductGame, ProductError> {
    product_over(&TransformedGame::identity(g), s)
}

/// Product of a strategy on the raw game with a transformed arena: the
/// strategy observes raw vertices while states track transformed ones.
pub fn product_over(tg: &TransformedGame, s: &MooreStrategy) -> Result<ProductGame, ProductError> {
    let arena = tg.game();
    if s.player.number() > arena.players() {
        return Err(StrategyError::PlayerMismatch {
            strategy: s.player.number(),
            players: arena.players(),
        }
        .into());
    }
    let mut index: HashMap<(VertexId, usize), usize> = HashMap::new();
    let mut states = vec![(arena.init(), s.initial_memory)];
    let mut parent = vec![None];
    let mut succ: Vec<Vec<ProductEdge>> = Vec::new();
    index.insert(states[0], 0);
    let mut i = 0;
    while i < states.len() {
        let (t, m) = states[i];
        let raw = tg.raw_vertex(t);
        let edges: Vec<EdgeId> = if arena.owner(t) == s.player {
            let target = s.choice(m, raw).ok_or_else(|| StrategyError::MissingMove {
                memory: m,
                vertex: arena.name(t).to_string(),
            })?;
            let nt = tg.step(t, target).ok_or_else(|| ProductError::NonEdge {
                memory: m,
                vertex: arena.name(t).to_string(),
            })?;
            vec![arena.edge_between(t, nt).unwrap()]
        } else {
            arena.out_edges(t).to_vec()
        };
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            let dst = arena.edge(e).dst;
            let key = (dst, s.next_memory(m, tg.raw_vertex(dst)));
            let target = *index.entry(key).or_insert_with(|| {
                states.push(key);
                parent.push(Some(i));
                states.len() - 1
            });
            out.push(ProductEdge { target, edge: e });
        }
        succ.push(out);
        i += 1;
    }
    Ok(ProductGame {
        arena: arena.clone(),
        player: s.player,
        states,
        succ,
        parent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{parse_game, payoff_of_lasso};

    fn inf_chain() -> Game {
        GameBuilder::new(1, PayoffKind::Inf)
            .vertex("a", 1)
            .vertex("b", 1)
            .vertex("c", 1)
            .edge("a", "b", &[3])
            .edge("b", "c", &[5])
            .edge("c", "c", &[5])
            .init("a")
            .build()
            .unwrap()
    }

    #[test]
    fn identity_for_prefix_independent() {
        let g = fixtures::fig1_liminf();
        let t = make_prefix_independent(&g);
        assert!(t.is_identity());
        assert_eq!(t.game(), &g);
        for v in g.vertices() {
            assert_eq!(t.raw_vertex(v), v);
        }
    }

    #[test]
    fn inf_records_running_minimum() {
        let g = inf_chain();
        let t = make_prefix_independent(&g);
        let tg = t.game();
        assert_eq!(tg.measure(), PayoffKind::LimInf);
        let b = t.run(&[0, 1]).unwrap();
        assert_eq!(t.record(b), &vec![Rational::from(3)]);
        let c = t.step(b, 2).unwrap();
        let e = tg.edge_between(b, c).unwrap();
        assert_eq!(tg.weight(e, Player::new(1)), Rational::from(3));
    }

    #[test]
    fn sup_single_loop() {
        let g = GameBuilder::new(1, PayoffKind::Sup)
            .vertex("a", 1)
            .edge("a", "a", &[7])
            .init("a")
            .build()
            .unwrap();
        let t = make_prefix_independent(&g);
        assert_eq!(t.game().vertex_count(), 1);
        let loops: Vec<_> = t.game().edges().iter().filter(|e| e.src == e.dst).collect();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].weights[0], Rational::from(7));
    }

    #[test]
    fn lift_preserves_payoff() {
        let g = inf_chain();
        let t = make_prefix_independent(&g);
        let raw = Lasso::new(vec![0, 1], vec![2]);
        let lifted = t.lift_lasso(&raw).unwrap();
        let p = Player::new(1);
        assert_eq!(
            payoff_of_lasso(PayoffKind::Inf, &g, p, &raw).unwrap(),
            payoff_of_lasso(PayoffKind::LimInf, t.game(), p, &lifted).unwrap()
        );
        assert_eq!(t.project_lasso(&lifted).cycle, vec![2]);
    }

    #[test]
    fn strategy_round_trip() {
        let g = fixtures::fig2();
        let text = fixtures::FIG2_S2S6;
        let s = parse_strategy(text, &g).unwrap();
        let again = parse_strategy(&serialize_strategy(&s, &g), &g).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn illegal_move_rejected() {
        let g = fixtures::fig2();
        let err = parse_strategy(
            "strategy 1\nmemory 1\ninitmem 0\nmove 0 s1 s4\nmove 0 s4 s5\n",
            &g,
        )
        .unwrap_err();
        assert!(matches!(err, StrategyError::IllegalMove { .. }), "{err}");
        let err = parse_strategy("strategy 1\nmemory 1\nmove 0 s1 s2\n", &g).unwrap_err();
        assert!(matches!(err, StrategyError::MissingMove { .. }), "{err}");
    }

    #[test]
    fn fig2_memoryless_product() {
        let g = fixtures::fig2();
        let s =
            MooreStrategy::memoryless_by_name(&g, Player::new(1), &[("s1", "s2"), ("s4", "s6")])
                .unwrap();
        let p = product_with_strategy(&g, &s).unwrap();
        // s1 s2 s4 s6 l3 l4
        assert_eq!(p.len(), 6);
        for i in 0..p.len() {
            let (v, _) = p.state(i);
            if g.owner(v) == Player::new(1) {
                assert_eq!(p.out(i).len(), 1);
            } else {
                assert_eq!(p.out(i).len(), g.out_edges(v).len());
            }
        }
    }

    #[test]
    fn fig3_counting_strategy() {
        let g = fixtures::fig3();
        let s = fixtures::fig3_sigma_k(&g, 1);
        let p = product_with_strategy(&g, &s).unwrap();
        let s1 = g.vertex_by_name("s1").unwrap();
        let t1 = g.vertex_by_name("t1").unwrap();
        let second = p.find(s1, 1).expect("second visit to s1");
        let targets: Vec<_> = p.out(second).iter().map(|e| p.state(e.target).0).collect();
        assert_eq!(targets, vec![t1]);
    }

    #[test]
    fn forced_strategy_is_isomorphic() {
        let g = parse_game(
            "players 2\nmeasure liminf\ninit a\nvertex a 1\nvertex b 2\nvertex c 1\nedge a b 0 0\nedge b a 1 1\nedge b c 0 0\nedge c c 2 2\n",
        )
        .unwrap();
        let s = MooreStrategy::memoryless_by_name(&g, Player::new(1), &[("a", "b"), ("c", "c")])
            .unwrap();
        let p = product_with_strategy(&g, &s).unwrap();
        assert_eq!(p.len(), 3);
        let edges: usize = (0..p.len()).map(|i| p.out(i).len()).sum();
        assert_eq!(edges, g.edges().len());
    }

    #[test]
    fn minimize_merges_copies() {
        let g = fixtures::fig3();
        let s = fixtures::fig3_sigma_k(&g, 3);
        // two copies of the memory, each entry of s1 switches copy
        let n = s.memory_size();
        let s1 = g.vertex_by_name("s1").unwrap();
        let update = (0..2 * n)
            .map(|m| {
                g.vertices()
                    .map(|v| {
                        let next = s.next_memory(m % n, v);
                        if v == s1 {
                            (next + n * (1 - m / n)) % (2 * n)
                        } else {
                            next + n * (m / n)
                        }
                    })
                    .collect()
            })
            .collect();
        let moves = (0..2 * n)
            .map(|m| g.vertices().map(|v| s.choice(m % n, v)).collect())
            .collect();
        let doubled = MooreStrategy::new(&g, Player::new(1), 0, update, moves).unwrap();
        let min = doubled.minimize(&g);
        assert_eq!(min.memory_size(), n);
        assert_eq!(fixtures::fig3_sigma_inf(&g).minimize(&g).memory_size(), 1);
        let (mut a, mut b) = (doubled.initial_memory(), min.initial_memory());
        let s2 = g.vertex_by_name("s2").unwrap();
        for _ in 0..10 {
            assert_eq!(doubled.choice(a, s1), min.choice(b, s1));
            if doubled.choice(a, s1) != Some(s2) {
                break;
            }
            for v in [s2, s1] {
                a = doubled.next_memory(a, v);
                b = min.next_memory(b, v);
            }
        }
    }
}
