//! Max-parity games solved with Zielonka's recursive algorithm.

use super::arena::{attractor_in, Arena, Region, Side};

/// Player 0 (`Side::Max`) wins a play when the largest priority seen
/// infinitely often is even.
#[derive(Clone, Debug)]
pub struct ParityGame {
    pub arena: Arena,
    pub priority: Vec<usize>,
}

fn side_of(priority: usize) -> Side {
    if priority.is_multiple_of(2) {
        Side::Max
    } else {
        Side::Min
    }
}

/// Winning regions of player 0 and player 1, each with a memoryless
/// winning strategy for its owner.
pub fn solve_parity(pg: &ParityGame) -> (Region, Region) {
    let n = pg.arena.len();
    let mut strategy = vec![None; n];
    let alive = vec![true; n];
    let win0 = zielonka(pg, &alive, &mut strategy);
    let mut even = Region::empty(n);
    let mut odd = Region::empty(n);
    for v in 0..n {
        let (region, side) = if win0[v] {
            (&mut even, Side::Max)
        } else {
            (&mut odd, Side::Min)
        };
        region.vertices[v] = true;
        if pg.arena.owner(v) == side {
            region.strategy[v] = strategy[v];
        }
    }
    (even, odd)
}

/// Returns the player-0 winning set of the subgame `alive`, writing
/// winning moves for both players into `strategy`.
fn zielonka(pg: &ParityGame, alive: &[bool], strategy: &mut [Option<usize>]) -> Vec<bool> {
    let n = pg.arena.len();
    let Some(d) = (0..n).filter(|&v| alive[v]).map(|v| pg.priority[v]).max() else {
        return vec![false; n];
    };
    let p = side_of(d);
    let no_edges = vec![false; pg.arena.edge_count()];
    let top: Vec<bool> = (0..n).map(|v| alive[v] && pg.priority[v] == d).collect();
    let a = attractor_in(&pg.arena, alive, p, &top, &no_edges);
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a.vertices[v]).collect();
    let sub0 = zielonka(pg, &rest, strategy);
    let sub_opp: Vec<bool> = (0..n)
        .map(|v| rest[v] && (sub0[v] != (p == Side::Max)))
        .collect();
    if !sub_opp.iter().any(|&b| b) {
        // p wins the whole subgame
        for v in 0..n {
            if a.vertices[v] && pg.arena.owner(v) == p {
                strategy[v] = if top[v] {
                    pg.arena
                        .out(v)
                        .iter()
                        .copied()
                        .find(|&e| alive[pg.arena.edge(e).1])
                } else {
                    a.strategy[v]
                };
            }
        }
        return (0..n).map(|v| alive[v] && p == Side::Max).collect();
    }
    let b = attractor_in(&pg.arena, alive, p.opponent(), &sub_opp, &no_edges);
    for v in 0..n {
        if b.vertices[v] && !sub_opp[v] && pg.arena.owner(v) == p.opponent() {
            strategy[v] = b.strategy[v];
        }
    }
    let remaining: Vec<bool> = (0..n).map(|v| alive[v] && !b.vertices[v]).collect();
    let sub = zielonka(pg, &remaining, strategy);
    (0..n)
        .map(|v| {
            if b.vertices[v] {
                p.opponent() == Side::Max
            } else {
                sub[v]
            }
        })
        .collect()
}

/// Small progress measure of player 0: `None` is the top element. For a
/// max-parity game the tuple has one counter per odd priority, the counter
/// of the highest priority being the most significant (stored last).
pub type Measure = Option<Vec<usize>>;

fn odd_slot(p: usize) -> usize {
    p / 2
}

/// Least measure `r` with `r >=_p m` (strictly when `p` is odd), counters
/// below `p` reset.
fn prog(bounds: &[usize], p: usize, m: &Measure) -> Measure {
    let mut r = m.clone()?;
    let low = odd_slot(p);
    for c in &mut r[..low] {
        *c = 0;
    }
    if p % 2 == 1 {
        let mut k = low;
        loop {
            if k == r.len() {
                return None;
            }
            if r[k] < bounds[k] {
                r[k] += 1;
                break;
            }
            r[k] = 0;
            k += 1;
        }
    }
    Some(r)
}

fn measure_le(a: &Measure, b: &Measure) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x.iter().rev().le(y.iter().rev()),
    }
}

/// Jurdziński's lifting. Every play in which player 0 only takes moves
/// from [`progress_moves`] is won by player 0 from a vertex of finite measure.
pub fn progress_measure(pg: &ParityGame) -> Vec<Measure> {
    let n = pg.arena.len();
    let top = pg.priority.iter().copied().max().unwrap_or(0);
    let slots = odd_slot(top) + usize::from(top % 2 == 1);
    let mut bounds = vec![0; slots];
    for &p in &pg.priority {
        if p % 2 == 1 {
            bounds[odd_slot(p)] += 1;
        }
    }
    let mut mu: Vec<Measure> = vec![Some(vec![0; slots]); n];
    let mut queued = vec![true; n];
    let mut work: std::collections::VecDeque<usize> = (0..n).collect();
    while let Some(v) = work.pop_front() {
        queued[v] = false;
        let p = pg.priority[v];
        let mut cands = pg
            .arena
            .out(v)
            .iter()
            .map(|&e| prog(&bounds, p, &mu[pg.arena.edge(e).1]));
        let first = cands.next().expect("total arena");
        let best = cands.fold(first, |acc, m| {
            let take_new = if pg.arena.owner(v) == Side::Max {
                measure_le(&m, &acc)
            } else {
                measure_le(&acc, &m)
            };
            if take_new {
                m
            } else {
                acc
            }
        });
        if !measure_le(&best, &mu[v]) {
            mu[v] = best;
            for &e in Arena::into(&pg.arena, v) {
                let u = pg.arena.edge(e).0;
                if !queued[u] {
                    queued[u] = true;
                    work.push_back(u);
                }
            }
        }
    }
    mu
}

/// Edges of player-0 vertices of finite measure that keep the progress
/// condition.
pub fn progress_moves(pg: &ParityGame, mu: &[Measure]) -> Vec<bool> {
    let top = pg.priority.iter().copied().max().unwrap_or(0);
    let slots = odd_slot(top) + usize::from(top % 2 == 1);
    let mut bounds = vec![0; slots];
    for &p in &pg.priority {
        if p % 2 == 1 {
            bounds[odd_slot(p)] += 1;
        }
    }
    (0..pg.arena.edge_count())
        .map(|e| {
            let (v, w) = pg.arena.edge(e);
            mu[v].is_some() && measure_le(&prog(&bounds, pg.priority[v], &mu[w]), &mu[v])
        })
        .collect()
}
