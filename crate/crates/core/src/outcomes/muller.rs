//! Acceptance conditions given as Boolean formulas over the set of colors
//! seen infinitely often, their conversion to max-parity through the
//! Zielonka tree, and emptiness of colored graphs.

use std::collections::VecDeque;

use crate::solvers::sccs;

pub type Colors = u64;

/// Color present on every transition, so that the set of colors seen
/// infinitely often is never empty.
pub const ALWAYS: Colors = 1 << 63;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cond {
    True,
    False,
    /// color `c` occurs infinitely often
    Inf(u32),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

impl Cond {
    pub fn not(self) -> Cond {
        match self {
            Cond::True => Cond::False,
            Cond::False => Cond::True,
            Cond::Not(c) => *c,
            c => Cond::Not(Box::new(c)),
        }
    }

    pub fn eval(&self, inf: Colors) -> bool {
        match self {
            Cond::True => true,
            Cond::False => false,
            Cond::Inf(c) => inf & (1 << c) != 0,
            Cond::Not(c) => !c.eval(inf),
            Cond::And(cs) => cs.iter().all(|c| c.eval(inf)),
            Cond::Or(cs) => cs.iter().any(|c| c.eval(inf)),
        }
    }

    /// Colors the condition depends on.
    pub fn colors(&self) -> Colors {
        match self {
            Cond::True | Cond::False => 0,
            Cond::Inf(c) => 1 << c,
            Cond::Not(c) => c.colors(),
            Cond::And(cs) | Cond::Or(cs) => cs.iter().fold(0, |acc, c| acc | c.colors()),
        }
    }
}

fn bits(mut x: Colors) -> impl Iterator<Item = Colors> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let low = x & x.wrapping_neg();
            x ^= low;
            low
        })
    })
}

#[derive(Clone, Debug)]
struct Node {
    label: Colors,
    parent: Option<usize>,
    children: Vec<usize>,
    priority: usize,
}

/// Deterministic max-parity automaton over color sets equivalent to a
/// Muller condition. States are the leaves of the Zielonka tree.
#[derive(Clone, Debug)]
pub struct ZielonkaTree {
    nodes: Vec<Node>,
    leaves: Vec<usize>,
}

impl ZielonkaTree {
    pub fn new(cond: &Cond) -> Self {
        let universe = cond.colors() | ALWAYS;
        let mut nodes = vec![Node {
            label: universe,
            parent: None,
            children: vec![],
            priority: 0,
        }];
        let mut depth = vec![0usize];
        let mut i = 0;
        while i < nodes.len() {
            let label = nodes[i].label;
            let status = cond.eval(label);
            let mut subsets: Vec<Colors> = Vec::new();
            let mut sub = label;
            loop {
                sub = (sub.wrapping_sub(1)) & label;
                if sub & ALWAYS != 0 && cond.eval(sub) != status {
                    subsets.push(sub);
                }
                if sub == 0 {
                    break;
                }
            }
            subsets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
            let mut maximal: Vec<Colors> = Vec::new();
            for s in subsets {
                if !maximal.iter().any(|&m| s & m == s) {
                    maximal.push(s);
                }
            }
            maximal.sort();
            for s in maximal {
                let id = nodes.len();
                nodes.push(Node {
                    label: s,
                    parent: Some(i),
                    children: vec![],
                    priority: 0,
                });
                depth.push(depth[i] + 1);
                nodes[i].children.push(id);
            }
            i += 1;
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let root_accepts = cond.eval(universe);
        // priorities shrink with depth; the root's parity matches its status
        let base = if (max_depth % 2 == 0) == root_accepts {
            max_depth
        } else {
            max_depth + 1
        };
        for (n, d) in nodes.iter_mut().zip(&depth) {
            n.priority = base - d;
        }
        let leaves = (0..nodes.len())
            .filter(|&n| nodes[n].children.is_empty())
            .collect();
        ZielonkaTree { nodes, leaves }
    }

    pub fn state_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    fn leftmost_leaf(&self, mut n: usize) -> usize {
        while let Some(&c) = self.nodes[n].children.first() {
            n = c;
        }
        self.leaves.binary_search(&n).expect("leaf")
    }

    /// Successor state and emitted priority after reading `colors`.
    pub fn step(&self, state: usize, colors: Colors) -> (usize, usize) {
        let mut leaf = self.leaves[state];
        let mut best = 0;
        for c in bits((colors & self.nodes[0].label) | ALWAYS) {
            let mut n = leaf;
            let mut below = None;
            while self.nodes[n].label & c == 0 {
                below = Some(n);
                n = self.nodes[n].parent.expect("root holds every color");
            }
            best = best.max(self.nodes[n].priority);
            if let Some(child) = below {
                let siblings = &self.nodes[n].children;
                let k = siblings.iter().position(|&x| x == child).unwrap();
                let next = siblings[(k + 1) % siblings.len()];
                leaf = self.leaves[self.leftmost_leaf(next)];
            }
        }
        (self.leaves.binary_search(&leaf).unwrap(), best)
    }
}

/// A finite graph whose transitions carry color sets.
#[derive(Clone, Debug, Default)]
pub struct ColoredGraph {
    pub succ: Vec<Vec<(usize, Colors)>>,
}

/// An accepting lasso: states from the start up to (excluding) the cycle
/// entry, and the cycle states starting at the entry.
pub type StateLasso = (Vec<usize>, Vec<usize>);

/// Finds a lasso from `start` whose cycle colors satisfy `cond`.
pub fn find_accepting_lasso(graph: &ColoredGraph, start: usize, cond: &Cond) -> Option<StateLasso> {
    let n = graph.succ.len();
    let reach = bfs_parents(graph, start, &vec![true; n], &|_, _| true);
    let relevant = cond.colors();
    let all: Vec<Colors> = bits(relevant).collect();
    // every subset of relevant colors to forbid, smallest first
    let mut masks: Vec<Colors> = (0..1u64 << all.len())
        .map(|sel| {
            (0..all.len())
                .filter(|k| sel & (1 << k) != 0)
                .fold(0, |m, k| m | all[k])
        })
        .collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for forbid in masks {
        let keep = |_: usize, c: Colors| c & forbid == 0;
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                if reach[u].is_none() {
                    return vec![];
                }
                graph.succ[u]
                    .iter()
                    .filter(|&&(_, c)| keep(u, c))
                    .map(|&(v, _)| v)
                    .collect()
            })
            .collect();
        let comps = sccs(&adjacency);
        let mut comp_of = vec![usize::MAX; n];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let mut colors = 0;
            let mut internal = false;
            for &u in c {
                for &(v, col) in &graph.succ[u] {
                    if keep(u, col) && comp_of[v] == i && reach[u].is_some() {
                        internal = true;
                        colors |= col | ALWAYS;
                    }
                }
            }
            if internal && cond.eval(colors) {
                let entry = *c
                    .iter()
                    .min_by_key(|&&v| (reach[v].map(|r| r.1), v))
                    .unwrap();
                candidates.push((i, entry));
            }
        }
        if let Some(&(i, entry)) = candidates
            .iter()
            .min_by_key(|&&(_, e)| (reach[e].map(|r| r.1), e))
        {
            let in_comp: Vec<bool> = (0..n).map(|v| comp_of[v] == i).collect();
            let prefix = path_from_parents(&reach, start, entry);
            let cycle = covering_cycle(graph, entry, &in_comp, &keep);
            return Some((prefix, cycle));
        }
    }
    None
}

/// BFS parents `(parent, distance)` within `alive` using allowed transitions.
fn bfs_parents(
    graph: &ColoredGraph,
    start: usize,
    alive: &[bool],
    allowed: &dyn Fn(usize, Colors) -> bool,
) -> Vec<Option<(usize, usize)>> {
    let mut seen = vec![None; graph.succ.len()];
    seen[start] = Some((start, 0));
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let d = seen[u].unwrap().1;
        for &(v, c) in &graph.succ[u] {
            if alive[v] && seen[v].is_none() && allowed(u, c) {
                seen[v] = Some((u, d + 1));
                queue.push_back(v);
            }
        }
    }
    seen
}

/// States from `start` up to (excluding) `target`.
fn path_from_parents(
    parents: &[Option<(usize, usize)>],
    start: usize,
    target: usize,
) -> Vec<usize> {
    let mut path = Vec::new();
    let mut v = target;
    while v != start {
        v = parents[v].unwrap().0;
        path.push(v);
    }
    path.reverse();
    path
}

/// A cycle through `entry` using every allowed transition inside `comp`.
fn covering_cycle(
    graph: &ColoredGraph,
    entry: usize,
    comp: &[bool],
    allowed: &dyn Fn(usize, Colors) -> bool,
) -> Vec<usize> {
    let mut cycle = vec![];
    let mut at = entry;
    let edges: Vec<(usize, usize)> = (0..graph.succ.len())
        .filter(|&u| comp[u])
        .flat_map(|u| {
            graph.succ[u]
                .iter()
                .filter(move |&&(v, c)| comp[v] && allowed(u, c))
                .map(move |&(v, _)| (u, v))
        })
        .collect();
    let walk = |from: usize, to: usize, cycle: &mut Vec<usize>| {
        let parents = bfs_parents(graph, from, comp, allowed);
        cycle.extend(path_from_parents(&parents, from, to));
    };
    for (u, v) in edges {
        walk(at, u, &mut cycle);
        cycle.push(u);
        at = v;
    }
    walk(at, entry, &mut cycle);
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inf(c: u32) -> Cond {
        Cond::Inf(c)
    }

    /// Parity acceptance of `prefix · cycle^ω` over color sets.
    fn parity_accepts(tree: &ZielonkaTree, prefix: &[Colors], cycle: &[Colors]) -> bool {
        let mut s = tree.initial();
        for &c in prefix {
            s = tree.step(s, c).0;
        }
        // iterate the cycle until the state at its start repeats
        let mut seen = vec![s];
        loop {
            for &c in cycle {
                s = tree.step(s, c).0;
            }
            if seen.contains(&s) {
                break;
            }
            seen.push(s);
        }
        let mut best = 0;
        let start = s;
        loop {
            for &c in cycle {
                let (t, p) = tree.step(s, c);
                best = best.max(p);
                s = t;
            }
            if s == start {
                break;
            }
        }
        best % 2 == 0
    }

    #[test]
    fn zielonka_tree_matches_condition() {
        let conds = vec![
            Cond::And(vec![
                Cond::Or(vec![inf(0), inf(1).not()]),
                Cond::Or(vec![inf(2), inf(3).not()]),
            ]),
            Cond::Or(vec![Cond::And(vec![inf(0), inf(1)]), inf(2).not()]),
            inf(0),
            inf(1).not(),
            Cond::True,
            Cond::False,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cond in &conds {
            let tree = ZielonkaTree::new(cond);
            for _ in 0..300 {
                let pl = rng.gen_range(0..4);
                let cl = rng.gen_range(1..5);
                let prefix: Vec<Colors> = (0..pl).map(|_| rng.gen_range(0..16)).collect();
                let cycle: Vec<Colors> = (0..cl).map(|_| rng.gen_range(0..16)).collect();
                let union = cycle.iter().fold(ALWAYS, |a, c| a | c);
                assert_eq!(
                    parity_accepts(&tree, &prefix, &cycle),
                    cond.eval(union),
                    "{cond:?} {cycle:?}"
                );
            }
        }
    }

    #[test]
    fn emptiness_finds_a_cycle_avoiding_a_color() {
        // 0 -> 1 (color 0), 1 -> 0 (none), 1 -> 2 (none), 2 -> 2 (color 1)
        let graph = ColoredGraph {
            succ: vec![vec![(1, 1)], vec![(0, 0), (2, 0)], vec![(2, 2)]],
        };
        let (prefix, cycle) = find_accepting_lasso(&graph, 0, &inf(0).not()).unwrap();
        assert_eq!((prefix, cycle), (vec![0, 1], vec![2]));
        let (prefix, cycle) = find_accepting_lasso(&graph, 0, &inf(0)).unwrap();
        assert_eq!((prefix, cycle), (vec![], vec![0, 1]));
        assert!(find_accepting_lasso(&graph, 0, &Cond::And(vec![inf(0), inf(1)])).is_none());
    }
}
