//! Brute-force values on small games, used as ground truth for the solvers.
//!
//! Zero-sum values range over memoryless profiles only. This is exact for
//! the six measures because each of them admits memoryless optimal
//! strategies for both sides on finite arenas (threshold objectives are
//! reachability, safety, Büchi or co-Büchi; mean-payoff games are
//! memoryless determined).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{payoff_of_lasso, Game, GameBuilder, Lasso, PayoffKind, Player, VertexId};
use crate::rational::Rational;
use crate::values::{compute_value_table, Values};

pub const DEFAULT_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the oracle handles at most {bound} vertices, the game has {size}")]
    TooLarge { size: usize, bound: usize },
}

fn check_size(g: &Game, bound: usize) -> Result<(), OracleError> {
    if g.vertex_count() > bound {
        Err(OracleError::TooLarge {
            size: g.vertex_count(),
            bound,
        })
    } else {
        Ok(())
    }
}

/// A successor per vertex.
pub type MemorylessProfile = Vec<VertexId>;

/// Enumerates choice vectors: vertices in `free` range over their
/// successors, the others keep the entry of `base`.
pub fn for_each_choice(
    g: &Game,
    free: &[VertexId],
    base: &MemorylessProfile,
    mut f: impl FnMut(&MemorylessProfile),
) {
    let succ: Vec<Vec<VertexId>> = free.iter().map(|&v| g.successors(v).collect()).collect();
    let mut idx = vec![0usize; free.len()];
    let mut profile = base.clone();
    loop {
        for (k, &v) in free.iter().enumerate() {
            profile[v] = succ[k][idx[k]];
        }
        f(&profile);
        let mut k = 0;
        loop {
            if k == free.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < succ[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The lasso followed from `start` when every vertex plays `profile`.
pub fn lasso_of_profile(profile: &MemorylessProfile, start: VertexId) -> Lasso {
    let mut path = vec![start];
    loop {
        let next = profile[*path.last().unwrap()];
        if let Some(i) = path.iter().position(|&v| v == next) {
            return Lasso::new(path[..i].to_vec(), path[i..].to_vec());
        }
        path.push(next);
    }
}

fn payoff(g: &Game, player: Player, l: &Lasso) -> Rational {
    payoff_of_lasso(g.measure(), g, player, l).expect("profile lassos follow edges")
}

/// Max over memoryless strategies of `player` of the min over memoryless
/// coalition strategies, from every vertex as a fresh start.
pub fn brute_zero_sum(g: &Game, player: Player) -> Result<Vec<Rational>, OracleError> {
    brute_zero_sum_bounded(g, player, DEFAULT_BOUND)
}

pub fn brute_zero_sum_bounded(
    g: &Game,
    player: Player,
    bound: usize,
) -> Result<Vec<Rational>, OracleError> {
    check_size(g, bound)?;
    let mine: Vec<VertexId> = g.vertices().filter(|&v| g.owner(v) == player).collect();
    let theirs: Vec<VertexId> = g.vertices().filter(|&v| g.owner(v) != player).collect();
    let base: MemorylessProfile = g
        .vertices()
        .map(|v| g.successors(v).next().unwrap())
        .collect();
    let mut best: Vec<Option<Rational>> = vec![None; g.vertex_count()];
    for_each_choice(g, &mine, &base, |sigma| {
        let mut worst: Vec<Option<Rational>> = vec![None; g.vertex_count()];
        for_each_choice(g, &theirs, sigma, |profile| {
            for v in g.vertices() {
                let p = payoff(g, player, &lasso_of_profile(profile, v));
                if worst[v].is_none_or(|w| p < w) {
                    worst[v] = Some(p);
                }
            }
        });
        for v in g.vertices() {
            best[v] = best[v].max(worst[v]);
        }
    });
    Ok(best.into_iter().map(Option::unwrap).collect())
}

/// Visits every lasso with a simple prefix and a simple cycle from `start`
/// in the graph given by `succ`.
fn for_each_simple_lasso(succ: &[Vec<usize>], start: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn go(
        succ: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        f: &mut impl FnMut(&[usize], usize),
    ) {
        let v = *path.last().unwrap();
        for &u in &succ[v] {
            if on_path[u] {
                let i = path.iter().position(|&x| x == u).unwrap();
                f(path, i);
            } else {
                on_path[u] = true;
                path.push(u);
                go(succ, path, on_path, f);
                path.pop();
                on_path[u] = false;
            }
        }
    }
    let mut on_path = vec![false; succ.len()];
    on_path[start] = true;
    go(succ, &mut vec![start], &mut on_path, f);
}

/// Best lasso payoff from every vertex over all simple lassos.
pub fn brute_cooperative(g: &Game, player: Player) -> Result<Vec<Rational>, OracleError> {
    check_size(g, DEFAULT_BOUND)?;
    let succ: Vec<Vec<usize>> = g.vertices().map(|v| g.successors(v).collect()).collect();
    Ok(g.vertices()
        .map(|v| {
            let mut best: Option<Rational> = None;
            for_each_simple_lasso(&succ, v, &mut |path, i| {
                let l = Lasso::new(path[..i].to_vec(), path[i..].to_vec());
                best = best.max(Some(payoff(g, player, &l)));
            });
            best.unwrap()
        })
        .collect())
}

/// Best cooperative payoff from `vertex` among outcomes that a worst-case
/// optimal strategy of `player` can allow.
pub fn brute_acval(g: &Game, player: Player, vertex: VertexId) -> Result<Rational, OracleError> {
    let aval = brute_zero_sum(g, player)?;
    let a = aval[vertex];
    match g.measure() {
        PayoffKind::Sup => Ok(brute_acval_sup(g, player, vertex, &aval)),
        _ => {
            // lassos staying among vertices whose value is at least a
            let succ: Vec<Vec<usize>> = g
                .vertices()
                .map(|v| {
                    if aval[v] >= a {
                        g.successors(v).filter(|&u| aval[u] >= a).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let mut best: Option<Rational> = None;
            for_each_simple_lasso(&succ, vertex, &mut |path, i| {
                let l = Lasso::new(path[..i].to_vec(), path[i..].to_vec());
                best = best.max(Some(payoff(g, player, &l)));
            });
            Ok(best.expect("the restricted subgraph keeps a lasso"))
        }
    }
}

/// For `Sup`, the value must stay enforceable only until an edge of weight
/// at least `aVal(vertex)` has been seen; states are `(vertex, secured)`.
fn brute_acval_sup(g: &Game, player: Player, vertex: VertexId, aval: &[Rational]) -> Rational {
    let a = aval[vertex];
    let n = g.vertex_count();
    let state = |v: usize, secured: bool| v + if secured { n } else { 0 };
    let mut succ = vec![Vec::new(); 2 * n];
    let mut weight = std::collections::HashMap::new();
    for v in g.vertices() {
        for &e in g.out_edges(v) {
            let u = g.edge(e).dst;
            let w = g.weight(e, player);
            for secured in [false, true] {
                if !secured && (aval[v] < a || aval[u] < a) && w < a {
                    continue;
                }
                let to = state(u, secured || w >= a);
                succ[state(v, secured)].push(to);
                weight.insert((state(v, secured), to), w);
            }
        }
    }
    let mut best: Option<Rational> = None;
    for_each_simple_lasso(&succ, state(vertex, false), &mut |path, i| {
        let last = *path.last().unwrap();
        let mut m = path.windows(2).map(|w| weight[&(w[0], w[1])]).max();
        m = m.max(Some(weight[&(last, path[i])]));
        best = best.max(m);
    });
    best.expect("the secured product keeps a lasso")
}

/// Antagonistic-cooperative values of every vertex as a fresh start.
pub fn brute_acval_all(g: &Game, player: Player) -> Result<Vec<Rational>, OracleError> {
    g.vertices().map(|v| brute_acval(g, player, v)).collect()
}

/// Seeded random game: every vertex gets between one and three successors,
/// weights are integers in `weights`, owners are uniform.
pub fn random_game(
    seed: u64,
    size: usize,
    weights: (i64, i64),
    players: usize,
    measure: PayoffKind,
) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| format!("v{i}");
    let mut b = GameBuilder::new(players, measure);
    for i in 0..size {
        b = b.vertex(&name(i), rng.gen_range(1..=players));
    }
    for i in 0..size {
        let degree = rng.gen_range(1..=3.min(size));
        let mut targets: Vec<usize> = (0..size).collect();
        for k in 0..degree {
            let j = rng.gen_range(k..size);
            targets.swap(k, j);
        }
        for &t in &targets[..degree] {
            let w: Vec<i64> = (0..players)
                .map(|_| rng.gen_range(weights.0..=weights.1))
                .collect();
            b = b.edge(&name(i), &name(t), &w);
        }
    }
    b.init(&name(0)).build().expect("random games are valid")
}

/// Seeded random lassos from the initial vertex: a random walk of up to
/// `max_walk` steps whose cycle closes at a random earlier position along
/// a shortest path back.
pub fn random_lassos(g: &Game, seed: u64, count: usize, max_walk: usize) -> Vec<Lasso> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut walk = vec![g.init()];
        for _ in 0..rng.gen_range(0..=max_walk) {
            let succ: Vec<VertexId> = g.successors(*walk.last().unwrap()).collect();
            walk.push(succ[rng.gen_range(0..succ.len())]);
        }
        let j = rng.gen_range(0..walk.len());
        let Some(back) = shortest_path(g, *walk.last().unwrap(), walk[j]) else {
            continue;
        };
        let mut cycle = walk[j..].to_vec();
        cycle.extend(&back[1..back.len() - 1]);
        out.push(Lasso::new(walk[..j].to_vec(), cycle));
    }
    out
}

/// Vertices of a shortest path of at least one edge from `from` to `to`.
fn shortest_path(g: &Game, from: VertexId, to: VertexId) -> Option<Vec<VertexId>> {
    let mut parent = vec![None; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for v in g.successors(from) {
        if parent[v].is_none() {
            parent[v] = Some(from);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut v = to;
            loop {
                v = parent[v].unwrap();
                path.push(v);
                if v == from && path.len() > 1 {
                    break;
                }
            }
            path.reverse();
            return Some(path);
        }
        for v in g.successors(u) {
            if parent[v].is_none() {
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub player: usize,
    pub vertex: String,
    pub solver: Values,
    pub brute: Values,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.solver == self.brute
    }
}

/// Solver values against brute-force values, per player and raw vertex,
/// each vertex read as a fresh start.
pub fn compare(g: &Game) -> Result<Vec<OracleRow>, OracleError> {
    check_size(g, DEFAULT_BOUND)?;
    let mut rows = Vec::new();
    let solver = solver_fresh_values(g);
    for p in Player::all(g.players()) {
        let a = brute_zero_sum(g, p)?;
        let c = brute_cooperative(g, p)?;
        let ac = brute_acval_all(g, p)?;
        for v in g.vertices() {
            rows.push(OracleRow {
                player: p.number(),
                vertex: g.name(v).to_string(),
                solver: solver[p.index()][v],
                brute: Values {
                    aval: a[v],
                    cval: c[v],
                    acval: ac[v],
                },
            });
        }
    }
    Ok(rows)
}

/// Solver values per player and raw vertex with each vertex as the start.
pub fn solver_fresh_values(g: &Game) -> Vec<Vec<Values>> {
    if g.measure().is_prefix_independent() {
        let t = compute_value_table(g);
        return Player::all(g.players())
            .map(|p| g.vertices().map(|v| t.get(p, v)).collect())
            .collect();
    }
    let tables: Vec<_> = g
        .vertices()
        .map(|v| compute_value_table(&g.with_init(v)))
        .collect();
    Player::all(g.players())
        .map(|p| {
            g.vertices()
                .map(|v| tables[v].get(p, tables[v].arena().init()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn at(g: &Game, vals: &[Rational], name: &str) -> Rational {
        vals[g.vertex_by_name(name).unwrap()]
    }

    #[test]
    fn fig1_brute() {
        let g = fixtures::fig1();
        assert!(brute_zero_sum(&g, Player::new(1))
            .unwrap()
            .iter()
            .all(|&x| x == 1.into()));
        assert_eq!(
            at(&g, &brute_cooperative(&g, Player::new(1)).unwrap(), "v1"),
            2.into()
        );
    }

    #[test]
    fn fig2_brute() {
        let g = fixtures::fig2();
        assert_eq!(
            at(
                &g,
                &brute_zero_sum_bounded(&g, Player::new(1), 12).unwrap(),
                "s1"
            ),
            5.into()
        );
    }

    #[test]
    fn fig3_brute() {
        let g = fixtures::fig3();
        let s1 = g.vertex_by_name("s1").unwrap();
        assert_eq!(
            at(&g, &brute_cooperative(&g, Player::new(1)).unwrap(), "s1"),
            2.into()
        );
        assert_eq!(brute_acval(&g, Player::new(1), s1).unwrap(), 2.into());
    }

    #[test]
    fn chain_to_loop() {
        let g = GameBuilder::new(2, PayoffKind::LimInf)
            .vertex("a", 1)
            .vertex("b", 2)
            .vertex("c", 1)
            .edge("a", "b", &[5, 0])
            .edge("b", "c", &[-1, 0])
            .edge("c", "c", &[3, 0])
            .init("a")
            .build()
            .unwrap();
        assert!(brute_zero_sum(&g, Player::new(1))
            .unwrap()
            .iter()
            .all(|&x| x == 3.into()));
    }

    #[test]
    fn random_games_are_deterministic_and_valid() {
        for seed in 0..20 {
            let a = random_game(seed, 6, (-2, 2), 2, PayoffKind::LimInf);
            assert_eq!(a, random_game(seed, 6, (-2, 2), 2, PayoffKind::LimInf));
            assert!(a.to_builder().validate().is_empty());
            for e in a.edges() {
                assert!(e
                    .weights
                    .iter()
                    .all(|w| *w >= (-2).into() && *w <= 2.into()));
            }
        }
        assert_eq!(
            random_game(1, 4, (-2, 2), 2, PayoffKind::Sup).vertex_count(),
            4
        );
    }

    #[test]
    fn too_large() {
        let g = random_game(3, 9, (0, 1), 2, PayoffKind::LimSup);
        assert!(brute_zero_sum(&g, Player::new(1)).is_err());
    }
}
