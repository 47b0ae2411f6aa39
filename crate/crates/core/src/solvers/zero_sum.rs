//! Zero-sum values of a player against the merged coalition of the others.

use thiserror::Error;

use super::arena::{solve_buchi, solve_cobuchi, solve_reach, solve_safety, Arena, Region, Side};
use crate::game::{Game, PayoffKind, Player};
use crate::rational::{common_denominator, Rational};

/// The arena of a game seen by one player (`Max`) against all others (`Min`),
/// with that player's weights.
#[derive(Clone, Debug)]
pub struct CoalitionGame {
    pub arena: Arena,
    pub weights: Vec<Rational>,
}

impl CoalitionGame {
    pub fn new(g: &Game, player: Player) -> Self {
        CoalitionGame {
            arena: Arena::from_game(g, player),
            weights: (0..g.edges().len()).map(|e| g.weight(e, player)).collect(),
        }
    }

    fn levels(&self) -> Vec<Rational> {
        let mut w = self.weights.clone();
        w.sort();
        w.dedup();
        w
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("threshold games are not defined for mean-payoff; use the mean-payoff solver")]
    MeanPayoffThreshold,
}

/// Winning region of `Max` for "payoff ≥ θ", with a memoryless witness.
pub fn solve_threshold(
    cg: &CoalitionGame,
    measure: PayoffKind,
    theta: Rational,
) -> Result<Region, SolverError> {
    let alive = vec![true; cg.arena.len()];
    let at_least: Vec<bool> = cg.weights.iter().map(|&w| w >= theta).collect();
    let below: Vec<bool> = at_least.iter().map(|b| !b).collect();
    let sol = match measure {
        PayoffKind::Sup => solve_reach(&cg.arena, &alive, Side::Max, &at_least),
        PayoffKind::Inf => solve_safety(&cg.arena, &alive, Side::Max, &below),
        PayoffKind::LimSup => solve_buchi(&cg.arena, &alive, Side::Max, &at_least),
        PayoffKind::LimInf => solve_cobuchi(&cg.arena, &alive, Side::Max, &below),
        _ => return Err(SolverError::MeanPayoffThreshold),
    };
    Ok(sol.max)
}

/// Values together with a memoryless strategy of `Max` that is optimal from
/// every vertex (for prefix-independent measures).
#[derive(Clone, Debug)]
pub struct ZeroSumSolution {
    pub values: Vec<Rational>,
    pub strategy: Vec<Option<usize>>,
}

pub fn zero_sum_value(cg: &CoalitionGame, measure: PayoffKind) -> Vec<Rational> {
    solve_zero_sum(cg, measure).values
}

pub fn solve_zero_sum(cg: &CoalitionGame, measure: PayoffKind) -> ZeroSumSolution {
    if measure.is_mean_payoff() {
        let values = mean_payoff_values(cg);
        let strategy = mean_payoff_strategy(cg, &values);
        return ZeroSumSolution { values, strategy };
    }
    let n = cg.arena.len();
    let mut values: Vec<Option<Rational>> = vec![None; n];
    let mut strategy = vec![None; n];
    for theta in cg.levels().into_iter().rev() {
        let region = solve_threshold(cg, measure, theta).expect("regular measure");
        for v in 0..n {
            if region.contains(v) && values[v].is_none() {
                values[v] = Some(theta);
                strategy[v] = region.strategy[v];
            }
        }
        if values.iter().all(Option::is_some) {
            break;
        }
    }
    // where the region's witness leaves the choice open, keep the value
    let values: Vec<Rational> = values
        .into_iter()
        .map(|v| v.expect("lowest threshold wins everywhere"))
        .collect();
    for v in 0..n {
        if cg.arena.owner(v) == Side::Max && strategy[v].is_none() {
            strategy[v] = cg
                .arena
                .out(v)
                .iter()
                .copied()
                .find(|&e| values[cg.arena.edge(e).1] >= values[v]);
        }
    }
    ZeroSumSolution { values, strategy }
}

fn scaled_weights(cg: &CoalitionGame) -> (i64, Vec<i128>) {
    let den = common_denominator(&cg.weights);
    let ints = cg
        .weights
        .iter()
        .map(|w| w.numer() as i128 * (den / w.denom()) as i128)
        .collect();
    (den, ints)
}

/// Exact mean-payoff values by value iteration followed by rounding to the
/// unique nearby rational whose denominator is at most the number of vertices.
pub fn mean_payoff_values(cg: &CoalitionGame) -> Vec<Rational> {
    let n = cg.arena.len();
    let (den, w) = scaled_weights(cg);
    let wmax = w.iter().map(|x| x.abs()).max().unwrap_or(0).max(1);
    let nn = n as i128;
    let k = 4 * nn * nn * nn * wmax + 1;
    let mut nu = vec![0i128; n];
    for _ in 0..k {
        nu = (0..n)
            .map(|v| {
                let it = cg
                    .arena
                    .out(v)
                    .iter()
                    .map(|&e| w[e] + nu[cg.arena.edge(e).1]);
                match cg.arena.owner(v) {
                    Side::Max => it.max().unwrap(),
                    Side::Min => it.min().unwrap(),
                }
            })
            .collect();
    }
    nu.iter()
        .map(|&x| {
            // nearest p/d to x/k with d <= n
            let mut best: Option<(i128, i128)> = None;
            for d in 1..=nn {
                let p = round_div(x * d, k);
                let better = match best {
                    None => true,
                    // |p/d - x/k| < |bp/bd - x/k|
                    Some((bp, bd)) => (p * k - x * d).abs() * bd < (bp * k - x * bd).abs() * d,
                };
                if better {
                    best = Some((p, d));
                }
            }
            let (p, d) = best.unwrap();
            Rational::new(
                i64::try_from(p).expect("fits"),
                i64::try_from(d).expect("fits") * den,
            )
        })
        .collect()
}

fn round_div(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r >= b {
        q + 1
    } else {
        q
    }
}

/// An optimal memoryless strategy of `Max` for mean-payoff, from energy
/// progress measures inside each value class.
fn mean_payoff_strategy(cg: &CoalitionGame, values: &[Rational]) -> Vec<Option<usize>> {
    let n = cg.arena.len();
    let a = &cg.arena;
    let (den, w) = scaled_weights(cg);
    let mut strategy = vec![None; n];
    let mut classes: Vec<Rational> = values.to_vec();
    classes.sort();
    classes.dedup();
    for c in classes {
        let members: Vec<usize> = (0..n).filter(|&v| values[v] == c).collect();
        let target = c * Rational::from(den);
        let (p, q) = (target.numer() as i128, target.denom() as i128);
        let shifted = |e: usize| q * w[e] - p;
        // Max keeps the value; Min edges to higher values end the energy game
        let internal = |e: usize| values[a.edge(e).1] == c;
        let bound: i128 = members
            .iter()
            .flat_map(|&v| a.out(v).iter().map(|&e| shifted(e).abs()))
            .max()
            .unwrap_or(0)
            * members.len() as i128
            + 1;
        let mut f: Vec<Option<i128>> = vec![Some(0); n];
        let lift = |f: &[Option<i128>], e: usize| -> Option<i128> {
            if !internal(e) {
                return Some(0);
            }
            let need = f[a.edge(e).1]? - shifted(e);
            let need = need.max(0);
            (need <= bound).then_some(need)
        };
        loop {
            let mut changed = false;
            for &v in &members {
                if f[v].is_none() {
                    continue;
                }
                let options: Vec<Option<i128>> = a
                    .out(v)
                    .iter()
                    .filter(|&&e| a.owner(v) == Side::Min || internal(e))
                    .map(|&e| lift(&f, e))
                    .collect();
                let next = match a.owner(v) {
                    // None (top) is worst for Max
                    Side::Max => options.iter().copied().flatten().min(),
                    Side::Min => {
                        if options.iter().any(Option::is_none) {
                            None
                        } else {
                            options.iter().copied().flatten().max()
                        }
                    }
                };
                let next = next.map(|x| x.max(f[v].unwrap()));
                if next != f[v] {
                    f[v] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for &v in &members {
            if a.owner(v) == Side::Max {
                strategy[v] = a
                    .out(v)
                    .iter()
                    .copied()
                    .filter(|&e| internal(e))
                    .min_by_key(|&e| lift(&f, e).unwrap_or(i128::MAX));
            }
        }
    }
    strategy
}
