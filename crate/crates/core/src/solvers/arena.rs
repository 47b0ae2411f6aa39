//! Two-player arenas, attractors and the edge-based threshold objectives
//! (reachability, safety, Büchi, co-Büchi).

use crate::game::{Game, Player};

/// The two sides of a zero-sum game. `Max` is the distinguished player of a
/// coalition game and player 0 of a parity game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Max,
    Min,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Max => Side::Min,
            Side::Min => Side::Max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    max_owned: Vec<bool>,
}

impl Arena {
    /// Panics if an endpoint is out of range.
    pub fn new(max_owned: Vec<bool>, edges: Vec<(usize, usize)>) -> Self {
        let n = max_owned.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            succ[u].push(e);
            pred[v].push(e);
        }
        Arena {
            edges,
            succ,
            pred,
            max_owned,
        }
    }

    /// The arena of `g` seen by `player` against the merged coalition.
    /// Edge ids coincide with those of `g`.
    pub fn from_game(g: &Game, player: Player) -> Self {
        Arena::new(
            g.vertices().map(|v| g.owner(v) == player).collect(),
            g.edges().iter().map(|e| (e.src, e.dst)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.max_owned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max_owned.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn into(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn owner(&self, v: usize) -> Side {
        if self.max_owned[v] {
            Side::Max
        } else {
            Side::Min
        }
    }
}

/// A vertex set with a memoryless strategy (edge id per vertex) for the side
/// that wins it. Vertices where any move is fine may have no entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub vertices: Vec<bool>,
    pub strategy: Vec<Option<usize>>,
}

impl Region {
    pub fn empty(n: usize) -> Self {
        Region {
            vertices: vec![false; n],
            strategy: vec![None; n],
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices[v]
    }

    pub fn count(&self) -> usize {
        self.vertices.iter().filter(|&&b| b).count()
    }
}

/// Both winning regions of a determined game.
#[derive(Clone, Debug)]
pub struct Solution {
    pub max: Region,
    pub min: Region,
}

impl Solution {
    pub fn region(&self, side: Side) -> &Region {
        match side {
            Side::Max => &self.max,
            Side::Min => &self.min,
        }
    }

    fn from_sides(side: Side, winner: Region, loser: Region) -> Self {
        match side {
            Side::Max => Solution {
                max: winner,
                min: loser,
            },
            Side::Min => Solution {
                max: loser,
                min: winner,
            },
        }
    }
}

/// Vertices from which `side` forces a visit to `target_vertices` or a
/// traversal of a `target_edges` edge.
pub fn attractor(
    arena: &Arena,
    side: Side,
    target_vertices: &[bool],
    target_edges: &[bool],
) -> Region {
    attractor_in(
        arena,
        &vec![true; arena.len()],
        side,
        target_vertices,
        target_edges,
    )
}

/// Attractor inside the subarena `alive`; edges leaving `alive` are ignored.
pub fn attractor_in(
    arena: &Arena,
    alive: &[bool],
    side: Side,
    target_vertices: &[bool],
    target_edges: &[bool],
) -> Region {
    let n = arena.len();
    let mut region = Region::empty(n);
    let mut remaining = vec![0usize; n];
    let mut queue = Vec::new();
    let live_edge = |e: usize| {
        let (u, v) = arena.edge(e);
        alive[u] && alive[v]
    };
    for v in 0..n {
        if !alive[v] {
            continue;
        }
        if target_vertices.get(v).copied().unwrap_or(false) {
            region.vertices[v] = true;
            queue.push(v);
            continue;
        }
        let live: Vec<usize> = arena
            .out(v)
            .iter()
            .copied()
            .filter(|&e| live_edge(e))
            .collect();
        let hits: Vec<usize> = live.iter().copied().filter(|&e| target_edges[e]).collect();
        if arena.owner(v) == side {
            if let Some(&e) = hits.first() {
                region.vertices[v] = true;
                region.strategy[v] = Some(e);
                queue.push(v);
            }
        } else {
            remaining[v] = live.len() - hits.len();
            if remaining[v] == 0 && !live.is_empty() {
                region.vertices[v] = true;
                queue.push(v);
            }
        }
    }
    while let Some(v) = queue.pop() {
        for &e in arena.into(v) {
            let (u, _) = arena.edge(e);
            if !alive[u] || region.vertices[u] || target_edges[e] {
                continue;
            }
            if arena.owner(u) == side {
                region.vertices[u] = true;
                region.strategy[u] = Some(e);
                queue.push(u);
            } else {
                remaining[u] -= 1;
                if remaining[u] == 0 {
                    region.vertices[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    region
}

/// For each vertex of `set` owned by `side`, an edge staying in `set`
/// that is not flagged in `avoid`.
fn stay_strategy(
    arena: &Arena,
    side: Side,
    set: &[bool],
    avoid: &[bool],
    strategy: &mut [Option<usize>],
) {
    for v in 0..arena.len() {
        if set[v] && arena.owner(v) == side {
            strategy[v] = arena
                .out(v)
                .iter()
                .copied()
                .find(|&e| set[arena.edge(e).1] && !avoid[e]);
        }
    }
}

fn complement_in(alive: &[bool], set: &[bool]) -> Vec<bool> {
    alive.iter().zip(set).map(|(&a, &s)| a && !s).collect()
}

/// `side` wants to traverse an edge of `target` at least once.
pub fn solve_reach(arena: &Arena, alive: &[bool], side: Side, target: &[bool]) -> Solution {
    let win = attractor_in(arena, alive, side, &[], target);
    let mut lose = Region {
        vertices: complement_in(alive, &win.vertices),
        strategy: vec![None; arena.len()],
    };
    stay_strategy(
        arena,
        side.opponent(),
        &lose.vertices.clone(),
        target,
        &mut lose.strategy,
    );
    Solution::from_sides(side, win, lose)
}

/// `side` wants to never traverse an edge of `bad`.
pub fn solve_safety(arena: &Arena, alive: &[bool], side: Side, bad: &[bool]) -> Solution {
    solve_reach(arena, alive, side.opponent(), bad)
}

/// `side` wants to traverse edges of `target` infinitely often.
pub fn solve_buchi(arena: &Arena, alive: &[bool], side: Side, target: &[bool]) -> Solution {
    let n = arena.len();
    let mut w = alive.to_vec();
    let mut lose = Region::empty(n);
    loop {
        let live_target: Vec<bool> = (0..arena.edge_count())
            .map(|e| {
                let (u, v) = arena.edge(e);
                target[e] && w[u] && w[v]
            })
            .collect();
        let r = attractor_in(arena, &w, side, &[], &live_target);
        let trap = complement_in(&w, &r.vertices);
        if !trap.iter().any(|&b| b) {
            let mut win = r;
            win.vertices = w;
            return Solution::from_sides(side, win, lose);
        }
        stay_strategy(arena, side.opponent(), &trap, target, &mut lose.strategy);
        let a = attractor_in(
            arena,
            &w,
            side.opponent(),
            &trap,
            &vec![false; arena.edge_count()],
        );
        for v in 0..n {
            if a.vertices[v] {
                lose.vertices[v] = true;
                w[v] = false;
                if !trap[v] {
                    lose.strategy[v] = a.strategy[v];
                }
            }
        }
    }
}

/// `side` wants to traverse edges of `bad` only finitely often.
pub fn solve_cobuchi(arena: &Arena, alive: &[bool], side: Side, bad: &[bool]) -> Solution {
    solve_buchi(arena, alive, side.opponent(), bad)
}
