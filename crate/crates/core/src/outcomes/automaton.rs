//! Deterministic parity automata reading the edges of a game, with a native
//! text format and DOT export.
//!
//! Native format, one directive per line, `#` starts a comment:
//!
//! ```text
//! state <name>
//! initial <state>
//! priority <state> <n>
//! trans <state> <src-vertex> <dst-vertex> <state'>
//! ```
//!
//! A run is accepting when the largest priority of the states visited
//! infinitely often is even. States without a `priority` line have
//! priority 0. A missing transition moves to an implicit rejecting sink.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{Game, Lasso, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `initial`")]
    MissingInitial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAutomaton {
    names: Vec<String>,
    initial: usize,
    priority: Vec<usize>,
    /// `trans[q][(src, dst)]`
    trans: Vec<BTreeMap<(VertexId, VertexId), usize>>,
    /// game vertex each state sits at, when known
    at: Vec<Option<VertexId>>,
}

impl EdgeAutomaton {
    /// An automaton with states `0..priority.len()`, all without transitions.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        priority: Vec<usize>,
        at: Vec<Option<VertexId>>,
    ) -> Self {
        let n = names.len();
        EdgeAutomaton {
            names,
            initial,
            priority,
            trans: vec![BTreeMap::new(); n],
            at,
        }
    }

    pub fn add_transition(&mut self, q: usize, src: VertexId, dst: VertexId, q2: usize) {
        self.trans[q].insert((src, dst), q2);
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn priority(&self, q: usize) -> usize {
        self.priority[q]
    }

    pub fn vertex(&self, q: usize) -> Option<VertexId> {
        self.at[q]
    }

    /// Distinct priorities, ascending.
    pub fn priorities(&self) -> Vec<usize> {
        let mut p = self.priority.clone();
        p.sort();
        p.dedup();
        p
    }

    /// Successor on the edge `(src, dst)`; `None` is the rejecting sink.
    pub fn next(&self, q: usize, src: VertexId, dst: VertexId) -> Option<usize> {
        self.trans[q].get(&(src, dst)).copied()
    }

    pub fn transitions(
        &self,
        q: usize,
    ) -> impl Iterator<Item = ((VertexId, VertexId), usize)> + '_ {
        self.trans[q].iter().map(|(&k, &v)| (k, v))
    }

    /// Acceptance of the outcome `lasso` of the game the automaton reads.
    pub fn accepts(&self, lasso: &Lasso) -> bool {
        let (prefix, cycle) = lasso.edge_pairs();
        let mut q = self.initial;
        for (u, v) in prefix {
            match self.next(q, u, v) {
                Some(q2) => q = q2,
                None => return false,
            }
        }
        // the state at the cycle start is eventually periodic
        let mut starts = vec![q];
        loop {
            for &(u, v) in &cycle {
                match self.next(q, u, v) {
                    Some(q2) => q = q2,
                    None => return false,
                }
            }
            if starts.contains(&q) {
                break;
            }
            starts.push(q);
        }
        let entry = q;
        let mut best = 0;
        loop {
            for &(u, v) in &cycle {
                q = self.next(q, u, v).expect("run already checked");
                best = best.max(self.priority[q]);
            }
            if q == entry {
                break;
            }
        }
        best % 2 == 0
    }
}

pub fn parse_automaton(text: &str, g: &Game) -> Result<EdgeAutomaton, AutomatonError> {
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut priority: Vec<usize> = Vec::new();
    let mut trans: Vec<BTreeMap<(VertexId, VertexId), usize>> = Vec::new();
    let mut initial = None;
    let mut state =
        |name: &str, names: &mut Vec<String>, prio: &mut Vec<usize>, trans: &mut Vec<_>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                prio.push(0);
                trans.push(BTreeMap::new());
                names.len() - 1
            })
        };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap().split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: String| AutomatonError::Syntax { line, msg };
        let vertex = |s: &str| {
            g.vertex_by_name(s)
                .ok_or_else(|| syntax(format!("unknown vertex `{s}`")))
        };
        match (toks[0], toks.len()) {
            ("state", 2) => {
                state(toks[1], &mut names, &mut priority, &mut trans);
            }
            ("initial", 2) => initial = Some(state(toks[1], &mut names, &mut priority, &mut trans)),
            ("priority", 3) => {
                let q = state(toks[1], &mut names, &mut priority, &mut trans);
                priority[q] = toks[2]
                    .parse()
                    .map_err(|_| syntax(format!("bad priority `{}`", toks[2])))?;
            }
            ("trans", 5) => {
                let q = state(toks[1], &mut names, &mut priority, &mut trans);
                let (u, v) = (vertex(toks[2])?, vertex(toks[3])?);
                if g.edge_between(u, v).is_none() {
                    return Err(syntax(format!(
                        "`{} -> {}` is not an edge",
                        toks[2], toks[3]
                    )));
                }
                let q2 = state(toks[4], &mut names, &mut priority, &mut trans);
                if trans[q].insert((u, v), q2).is_some_and(|old| old != q2) {
                    return Err(syntax(format!(
                        "nondeterministic transition from `{}`",
                        toks[1]
                    )));
                }
            }
            (d, _) => return Err(syntax(format!("malformed `{d}` directive"))),
        }
    }
    let initial = initial.ok_or(AutomatonError::MissingInitial)?;
    let at = vec![None; names.len()];
    Ok(EdgeAutomaton {
        names,
        initial,
        priority,
        trans,
        at,
    })
}

pub fn serialize_automaton(a: &EdgeAutomaton, g: &Game) -> String {
    let mut out = String::new();
    for q in 0..a.state_count() {
        match a.at[q] {
            Some(v) => writeln!(out, "state {} # at {}", a.names[q], g.name(v)),
            None => writeln!(out, "state {}", a.names[q]),
        }
        .unwrap();
    }
    writeln!(out, "initial {}", a.names[a.initial]).unwrap();
    for q in 0..a.state_count() {
        writeln!(out, "priority {} {}", a.names[q], a.priority[q]).unwrap();
    }
    for q in 0..a.state_count() {
        for ((u, v), q2) in a.transitions(q) {
            writeln!(
                out,
                "trans {} {} {} {}",
                a.names[q],
                g.name(u),
                g.name(v),
                a.names[q2]
            )
            .unwrap();
        }
    }
    out
}

pub fn automaton_to_dot(a: &EdgeAutomaton, g: &Game) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..a.state_count() {
        let at = a.at[q]
            .map(|v| format!("\\n{}", g.name(v)))
            .unwrap_or_default();
        let shape = if a.priority[q].is_multiple_of(2) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(
            out,
            "  \"{}\" [shape={shape}, label=\"{}{at}\\np={}\"];",
            a.names[q], a.names[q], a.priority[q]
        )
        .unwrap();
    }
    writeln!(out, "  start -> \"{}\";", a.names[a.initial]).unwrap();
    for q in 0..a.state_count() {
        for ((u, v), q2) in a.transitions(q) {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}>{}\"];",
                a.names[q],
                a.names[q2],
                g.name(u),
                g.name(v)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const VISIT_T2: &str = "\
# accepts the outcomes that reach t2
state a
state b
initial a
priority a 1
priority b 2
trans a s1 s2 a
trans a s2 s1 a
trans a s1 t1 a
trans a t1 t1 a
trans a s2 t2 b
trans b t2 t2 b
";

    fn lasso(g: &Game, prefix: &[&str], cycle: &[&str]) -> Lasso {
        let id = |n: &&str| g.vertex_by_name(n).unwrap();
        Lasso::new(
            prefix.iter().map(id).collect(),
            cycle.iter().map(id).collect(),
        )
    }

    #[test]
    fn parse_run_and_round_trip() {
        let g = fixtures::fig3();
        let a = parse_automaton(VISIT_T2, &g).unwrap();
        assert!(a.accepts(&lasso(&g, &["s1", "s2"], &["t2"])));
        assert!(!a.accepts(&lasso(&g, &["s1"], &["t1"])));
        assert!(!a.accepts(&lasso(&g, &[], &["s1", "s2"])));
        let again = parse_automaton(&serialize_automaton(&a, &g), &g).unwrap();
        assert_eq!(a, again);
        assert!(automaton_to_dot(&a, &g).starts_with("digraph"));
    }

    #[test]
    fn missing_transition_rejects() {
        let g = fixtures::fig3();
        let a = parse_automaton(
            "initial a\npriority a 0\ntrans a s1 s2 a\ntrans a s2 s1 a\n",
            &g,
        )
        .unwrap();
        assert!(a.accepts(&lasso(&g, &[], &["s1", "s2"])));
        assert!(!a.accepts(&lasso(&g, &["s1"], &["t1"])));
    }

    #[test]
    fn errors() {
        let g = fixtures::fig3();
        assert!(matches!(
            parse_automaton("initial a\ntrans a s1 t2 a\n", &g),
            Err(AutomatonError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_automaton("state a\n", &g),
            Err(AutomatonError::MissingInitial)
        ));
        let nondet = "initial a\ntrans a s1 s2 a\ntrans a s1 s2 b\n";
        assert!(matches!(
            parse_automaton(nondet, &g),
            Err(AutomatonError::Syntax { line: 3, .. })
        ));
    }
}
