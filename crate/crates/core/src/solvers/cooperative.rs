//! One-player optimisation over weighted graphs: strongly connected
//! components, maximum mean cycles, optimal values and witness lassos.

use std::collections::VecDeque;

use crate::game::PayoffKind;
use crate::rational::{common_denominator, Rational};

/// Successor lists with the weight of the optimised player on each edge.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    pub succ: Vec<Vec<(usize, Rational)>>,
}

impl WeightedGraph {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Keeps only vertices in `keep` and edges between them.
    pub fn restrict(&self, keep: &[bool]) -> WeightedGraph {
        let succ = self
            .succ
            .iter()
            .enumerate()
            .map(|(v, out)| {
                if keep[v] {
                    out.iter().copied().filter(|&(u, _)| keep[u]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        WeightedGraph { succ }
    }

    fn negated(&self) -> WeightedGraph {
        WeightedGraph {
            succ: self
                .succ
                .iter()
                .map(|out| out.iter().map(|&(u, w)| (u, -w)).collect())
                .collect(),
        }
    }

    fn filter_edges(&self, keep: impl Fn(usize, usize, Rational) -> bool) -> WeightedGraph {
        let succ = self
            .succ
            .iter()
            .enumerate()
            .map(|(v, out)| {
                out.iter()
                    .copied()
                    .filter(|&(u, w)| keep(v, u, w))
                    .collect()
            })
            .collect();
        WeightedGraph { succ }
    }

    fn levels(&self) -> Vec<Rational> {
        let mut w: Vec<Rational> = self.succ.iter().flatten().map(|&(_, w)| w).collect();
        w.sort();
        w.dedup();
        w
    }
}

/// Strongly connected components in reverse topological order (sinks first).
pub fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let u = succ[v][*i];
                *i += 1;
                if index[u] == usize::MAX {
                    index[u] = counter;
                    low[u] = counter;
                    counter += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    call.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

struct Components {
    list: Vec<Vec<usize>>,
    of: Vec<usize>,
    nontrivial: Vec<bool>,
}

fn components(g: &WeightedGraph) -> Components {
    let plain: Vec<Vec<usize>> = g
        .succ
        .iter()
        .map(|o| o.iter().map(|&(u, _)| u).collect())
        .collect();
    let list = sccs(&plain);
    let mut of = vec![0; g.len()];
    for (c, comp) in list.iter().enumerate() {
        for &v in comp {
            of[v] = c;
        }
    }
    let nontrivial = list
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            comp.iter()
                .any(|&v| g.succ[v].iter().any(|&(u, _)| of[u] == c))
        })
        .collect();
    Components {
        list,
        of,
        nontrivial,
    }
}

/// Vertices that can reach a member of `targets` (including the targets).
fn backward_reach(g: &WeightedGraph, targets: &[bool]) -> Vec<bool> {
    let mut pred = vec![Vec::new(); g.len()];
    for (v, out) in g.succ.iter().enumerate() {
        for &(u, _) in out {
            pred[u].push(v);
        }
    }
    let mut seen = targets.to_vec();
    let mut queue: Vec<usize> = (0..g.len()).filter(|&v| targets[v]).collect();
    while let Some(v) = queue.pop() {
        for &p in &pred[v] {
            if !seen[p] {
                seen[p] = true;
                queue.push(p);
            }
        }
    }
    seen
}

fn on_cycles(g: &WeightedGraph) -> Vec<bool> {
    let c = components(g);
    (0..g.len()).map(|v| c.nontrivial[c.of[v]]).collect()
}

/// Vertices with at least one infinite path.
pub fn live_vertices(g: &WeightedGraph) -> Vec<bool> {
    backward_reach(g, &on_cycles(g))
}

/// Propagates a per-component score to every vertex as the best score
/// among reachable components.
fn propagate(
    g: &WeightedGraph,
    c: &Components,
    score: Vec<Option<Rational>>,
) -> Vec<Option<Rational>> {
    let mut best: Vec<Option<Rational>> = score;
    for (ci, comp) in c.list.iter().enumerate() {
        // successors' components come earlier in reverse topological order
        for &v in comp {
            for &(u, _) in &g.succ[v] {
                let cu = c.of[u];
                if cu != ci {
                    best[ci] = best[ci].max(best[cu]);
                }
            }
        }
    }
    (0..g.len()).map(|v| best[c.of[v]]).collect()
}

fn scaled(g: &WeightedGraph) -> (i64, Vec<Vec<(usize, i128)>>) {
    let den = common_denominator(g.succ.iter().flatten().map(|(_, w)| w));
    let ints = g
        .succ
        .iter()
        .map(|out| {
            out.iter()
                .map(|&(u, w)| (u, (w.numer() as i128) * (den / w.denom()) as i128))
                .collect()
        })
        .collect();
    (den, ints)
}

/// Maximum cycle mean of the strongly connected `comp`, in scaled units.
fn karp(ints: &[Vec<(usize, i128)>], comp: &[usize], of: &[usize], ci: usize) -> (i128, i128) {
    let n = comp.len();
    let local = |v: usize| comp.binary_search(&v).unwrap();
    let mut d: Vec<Vec<Option<i128>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(0);
    for k in 1..=n {
        for (li, &v) in comp.iter().enumerate() {
            let Some(dv) = d[k - 1][li] else { continue };
            for &(u, w) in &ints[v] {
                if of[u] != ci {
                    continue;
                }
                let lu = local(u);
                let cand = dv + w;
                if d[k][lu].is_none_or(|x| cand > x) {
                    d[k][lu] = Some(cand);
                }
            }
        }
    }
    // best = max over v of min over k of (D_n(v) - D_k(v)) / (n - k)
    let mut best: Option<(i128, i128)> = None;
    for v in 0..n {
        let Some(dn) = d[n][v] else { continue };
        let mut worst: Option<(i128, i128)> = None;
        for (k, row) in d.iter().enumerate().take(n) {
            if let Some(dk) = row[v] {
                let cand = (dn - dk, (n - k) as i128);
                if worst.is_none_or(|w| cand.0 * w.1 < w.0 * cand.1) {
                    worst = Some(cand);
                }
            }
        }
        if let Some(w) = worst {
            if best.is_none_or(|b| w.0 * b.1 > b.0 * w.1) {
                best = Some(w);
            }
        }
    }
    best.expect("a nontrivial component has a cycle")
}

fn to_rational(num: i128, den: i128) -> Rational {
    let g = gcd(num.abs(), den.abs()).max(1);
    let (n, d) = (num / g, den / g);
    Rational::new(
        i64::try_from(n).expect("value fits i64"),
        i64::try_from(d).expect("value fits i64"),
    )
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn maximise(g: &WeightedGraph, measure: PayoffKind) -> Vec<Option<Rational>> {
    let live = live_vertices(g);
    let g = g.restrict(&live);
    let c = components(&g);
    match measure {
        PayoffKind::LimSup => {
            let score = c
                .list
                .iter()
                .enumerate()
                .map(|(ci, comp)| {
                    comp.iter()
                        .flat_map(|&v| {
                            g.succ[v]
                                .iter()
                                .filter(|(u, _)| c.of[*u] == ci)
                                .map(|&(_, w)| w)
                        })
                        .max()
                })
                .collect();
            propagate(&g, &c, score)
        }
        PayoffKind::Sup => {
            let score = c
                .list
                .iter()
                .map(|comp| {
                    comp.iter()
                        .flat_map(|&v| g.succ[v].iter().map(|&(_, w)| w))
                        .max()
                })
                .collect();
            propagate(&g, &c, score)
        }
        PayoffKind::LimInf | PayoffKind::Inf => {
            let mut value: Vec<Option<Rational>> = vec![None; g.len()];
            for theta in g.levels().into_iter().rev() {
                let good = g.filter_edges(|_, _, w| w >= theta);
                let cyc = on_cycles(&good);
                let reach = if measure == PayoffKind::Inf {
                    backward_reach(&good, &cyc)
                } else {
                    backward_reach(&g, &cyc)
                };
                for v in 0..g.len() {
                    if reach[v] && value[v].is_none() {
                        value[v] = Some(theta);
                    }
                }
            }
            value
        }
        PayoffKind::MeanPayoffInf | PayoffKind::MeanPayoffSup => {
            let (den, ints) = scaled(&g);
            let score = c
                .list
                .iter()
                .enumerate()
                .map(|(ci, comp)| {
                    c.nontrivial[ci].then(|| {
                        let (p, q) = karp(&ints, comp, &c.of, ci);
                        to_rational(p, q * den as i128)
                    })
                })
                .collect();
            propagate(&g, &c, score)
        }
    }
}

fn dual(measure: PayoffKind) -> PayoffKind {
    match measure {
        PayoffKind::Inf => PayoffKind::Sup,
        PayoffKind::Sup => PayoffKind::Inf,
        PayoffKind::LimInf => PayoffKind::LimSup,
        PayoffKind::LimSup => PayoffKind::LimInf,
        m => m,
    }
}

/// Best payoff per start vertex over all infinite paths, maximising or
/// minimising; `None` where no infinite path exists.
pub fn one_player_optimum(
    g: &WeightedGraph,
    measure: PayoffKind,
    maximize: bool,
) -> Vec<Option<Rational>> {
    if maximize {
        maximise(g, measure)
    } else {
        maximise(&g.negated(), dual(measure))
            .into_iter()
            .map(|v| v.map(|x| -x))
            .collect()
    }
}

fn bfs_path(succ: &[Vec<usize>], from: usize, targets: &[bool]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if targets[v] {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in &succ[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

fn plain(g: &WeightedGraph) -> Vec<Vec<usize>> {
    g.succ
        .iter()
        .map(|o| {
            let mut s: Vec<usize> = o.iter().map(|&(u, _)| u).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Shortest cycle through `start` using `succ`, as the vertex sequence
/// beginning at `start`.
fn cycle_through(succ: &[Vec<usize>], start: usize) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for &u in &succ[start] {
        let mut target = vec![false; succ.len()];
        target[start] = true;
        if let Some(p) = bfs_path(succ, u, &target) {
            let mut cycle = vec![start];
            cycle.extend(&p[..p.len() - 1]);
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best
}

/// Edges of the components with maximum mean `value` that lie on cycles of
/// mean exactly `value`.
fn tight_edges(g: &WeightedGraph, value: Rational) -> WeightedGraph {
    let c = components(g);
    let (den, ints) = scaled(g);
    // shifted weights q*w - p where value*den = p/q
    let target = value * Rational::from(den);
    let (p, q) = (target.numer() as i128, target.denom() as i128);
    let mut keep: Vec<Vec<bool>> = g.succ.iter().map(|o| vec![false; o.len()]).collect();
    for (ci, comp) in c.list.iter().enumerate() {
        if !c.nontrivial[ci] {
            continue;
        }
        let (kp, kq) = karp(&ints, comp, &c.of, ci);
        if to_rational(kp, kq * den as i128) != value {
            continue;
        }
        // longest distances from comp[0]; there is no positive cycle after shifting
        let mut dist: Vec<Option<i128>> = vec![None; g.len()];
        dist[comp[0]] = Some(0);
        for _ in 0..comp.len() {
            for &v in comp {
                let Some(dv) = dist[v] else { continue };
                for &(u, w) in &ints[v] {
                    if c.of[u] == ci {
                        let cand = dv + q * w - p;
                        if dist[u].is_none_or(|x| cand > x) {
                            dist[u] = Some(cand);
                        }
                    }
                }
            }
        }
        for &v in comp {
            for (k, &(u, w)) in ints[v].iter().enumerate() {
                if c.of[u] == ci
                    && dist[v]
                        .zip(dist[u])
                        .is_some_and(|(dv, du)| dv + q * w - p == du)
                {
                    keep[v][k] = true;
                }
            }
        }
    }
    let succ = g
        .succ
        .iter()
        .enumerate()
        .map(|(v, out)| {
            out.iter()
                .enumerate()
                .filter(|(k, _)| keep[v][*k])
                .map(|(_, &e)| e)
                .collect()
        })
        .collect();
    WeightedGraph { succ }
}

/// A lasso from `from` whose payoff is the maximal `value`, as
/// `(prefix, cycle)` vertex sequences; the prefix ends just before the
/// first cycle vertex.
pub fn optimal_lasso(
    g: &WeightedGraph,
    measure: PayoffKind,
    from: usize,
    value: Rational,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let live = live_vertices(g);
    if !live[from] {
        return None;
    }
    let g = g.restrict(&live);
    let all = plain(&g);
    let split = |path: Vec<usize>, cycle: Vec<usize>| {
        let prefix = path[..path.len() - 1].to_vec();
        Some((prefix, cycle))
    };
    match measure {
        PayoffKind::LimInf
        | PayoffKind::Inf
        | PayoffKind::MeanPayoffInf
        | PayoffKind::MeanPayoffSup => {
            let good = if measure.is_mean_payoff() {
                tight_edges(&g, value)
            } else {
                g.filter_edges(|_, _, w| w >= value)
            };
            let good_plain = plain(&good);
            let cyc = on_cycles(&good);
            let path = bfs_path(
                if measure == PayoffKind::Inf {
                    &good_plain
                } else {
                    &all
                },
                from,
                &cyc,
            )?;
            let end = *path.last().unwrap();
            let gc = components(&good);
            let inside: Vec<Vec<usize>> = good_plain
                .iter()
                .enumerate()
                .map(|(v, s)| {
                    s.iter()
                        .copied()
                        .filter(|&u| gc.of[u] == gc.of[v])
                        .collect()
                })
                .collect();
            let cycle = cycle_through(&inside, end)?;
            split(path, cycle)
        }
        PayoffKind::LimSup => {
            let c = components(&g);
            let sources: Vec<bool> = (0..g.len())
                .map(|v| {
                    g.succ[v]
                        .iter()
                        .any(|&(u, w)| w >= value && c.of[u] == c.of[v])
                })
                .collect();
            let path = bfs_path(&all, from, &sources)?;
            let a = *path.last().unwrap();
            let b = g.succ[a]
                .iter()
                .filter(|&&(u, w)| w >= value && c.of[u] == c.of[a])
                .map(|&(u, _)| u)
                .min()?;
            let inside: Vec<Vec<usize>> = all
                .iter()
                .enumerate()
                .map(|(v, s)| s.iter().copied().filter(|&u| c.of[u] == c.of[v]).collect())
                .collect();
            let mut target = vec![false; g.len()];
            target[a] = true;
            let back = bfs_path(&inside, b, &target)?;
            let mut cycle = vec![a];
            cycle.extend(&back[..back.len() - 1]);
            split(path, cycle)
        }
        PayoffKind::Sup => {
            let sources: Vec<bool> = (0..g.len())
                .map(|v| g.succ[v].iter().any(|&(_, w)| w >= value))
                .collect();
            let mut path = bfs_path(&all, from, &sources)?;
            let a = *path.last().unwrap();
            let b = g.succ[a]
                .iter()
                .filter(|&&(_, w)| w >= value)
                .map(|&(u, _)| u)
                .min()?;
            let cyc = on_cycles(&g);
            let tail = bfs_path(&all, b, &cyc)?;
            path.extend(tail);
            let end = *path.last().unwrap();
            let c = components(&g);
            let inside: Vec<Vec<usize>> = all
                .iter()
                .enumerate()
                .map(|(v, s)| s.iter().copied().filter(|&u| c.of[u] == c.of[v]).collect())
                .collect();
            let cycle = cycle_through(&inside, end)?;
            split(path, cycle)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> WeightedGraph {
        let mut succ = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            succ[u].push((v, Rational::from(w)));
        }
        WeightedGraph { succ }
    }

    fn lasso_payoff(
        g: &WeightedGraph,
        m: PayoffKind,
        prefix: &[usize],
        cycle: &[usize],
    ) -> Rational {
        let w = |a: usize, b: usize| g.succ[a].iter().find(|&&(u, _)| u == b).unwrap().1;
        let mut pw = Vec::new();
        let full: Vec<usize> = prefix.iter().chain(cycle).copied().collect();
        for i in 0..prefix.len() {
            pw.push(w(full[i], full[i + 1]));
        }
        let cw: Vec<Rational> = (0..cycle.len())
            .map(|i| w(cycle[i], cycle[(i + 1) % cycle.len()]))
            .collect();
        match m {
            PayoffKind::Inf => pw.iter().chain(&cw).copied().min().unwrap(),
            PayoffKind::Sup => pw.iter().chain(&cw).copied().max().unwrap(),
            PayoffKind::LimInf => cw.iter().copied().min().unwrap(),
            PayoffKind::LimSup => cw.iter().copied().max().unwrap(),
            _ => cw.iter().copied().sum::<Rational>() / Rational::from(cw.len() as i64),
        }
    }

    #[test]
    fn scc_order_sinks_first() {
        let comps = sccs(&[vec![1], vec![0, 2], vec![2]]);
        assert_eq!(comps, vec![vec![2], vec![0, 1]]);
    }

    #[test]
    fn karp_mean() {
        // cycles 0-1 (mean 3/2) and 1-2 (mean 2)
        let g = graph(3, &[(0, 1, 1), (1, 0, 2), (1, 2, 1), (2, 1, 3)]);
        let v = one_player_optimum(&g, PayoffKind::MeanPayoffInf, true);
        assert_eq!(v[0], Some(Rational::from(2)));
        let v = one_player_optimum(&g, PayoffKind::MeanPayoffInf, false);
        assert_eq!(v[0], Some(Rational::new(3, 2)));
    }

    #[test]
    fn zero_loop_everywhere() {
        let g = graph(3, &[(0, 1, 5), (1, 2, -3), (2, 2, 0)]);
        for m in [
            PayoffKind::LimInf,
            PayoffKind::LimSup,
            PayoffKind::MeanPayoffSup,
        ] {
            assert!(one_player_optimum(&g, m, true)
                .iter()
                .all(|&x| x == Some(Rational::ZERO)));
        }
        let v = one_player_optimum(&g, PayoffKind::Sup, true);
        assert_eq!(v[0], Some(Rational::from(5)));
        let v = one_player_optimum(&g, PayoffKind::Inf, true);
        assert_eq!(v[0], Some(Rational::from(-3)));
    }

    #[test]
    fn dead_ends_have_no_value() {
        let g = graph(2, &[(0, 1, 1)]);
        assert_eq!(
            one_player_optimum(&g, PayoffKind::LimSup, true),
            vec![None, None]
        );
    }

    #[test]
    fn lassos_attain_the_optimum() {
        let g = graph(
            4,
            &[
                (0, 1, 1),
                (1, 0, 2),
                (1, 2, 1),
                (2, 1, 3),
                (2, 3, -1),
                (3, 3, 0),
            ],
        );
        for m in PayoffKind::ALL {
            let vals = one_player_optimum(&g, m, true);
            for v in 0..4 {
                let val = vals[v].unwrap();
                let (prefix, c) = optimal_lasso(&g, m, v, val).unwrap();
                assert_eq!(prefix.first().copied().unwrap_or(c[0]), v);
                assert_eq!(lasso_payoff(&g, m, &prefix, &c), val, "{m} from {v}");
            }
        }
    }
}
