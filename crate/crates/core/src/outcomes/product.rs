//! Synchronous product of the labelled arena with obligation trackers for
//! the admissibility formulas, payoff-threshold events, edge automata and
//! optionally a fixed strategy. Transitions carry colors; acceptance is a
//! condition on the colors seen infinitely often.

use std::collections::HashMap;

use super::automaton::EdgeAutomaton;
use super::labels::{EdgeLabel, LabeledGame};
use super::muller::{ColoredGraph, Colors, Cond};
use super::spec::{CmpOp, PayoffSpec};
use super::OutcomeError;
use crate::game::{PayoffKind, Player, VertexId};
use crate::rational::Rational;
use crate::transform::MooreStrategy;

/// Pending obligations of one admissibility formula, as indices into the
/// player's antagonistic values. `open`: the largest `q` whose position
/// needs `payoff > q` unless `gAlt_q` occurs. `pin`: positions of the
/// current constant-value stretch that may still be satisfied by staying
/// at value `q` with `payoff = q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Obligations {
    open: Option<u16>,
    pin: Option<u16>,
}

impl Obligations {
    fn step(self, levels: &[Rational], l: &EdgeLabel) -> Obligations {
        let q = levels
            .binary_search(&l.aval)
            .expect("label value is antagonistic") as u16;
        let Obligations { mut open, mut pin } = self;
        if pin.is_some_and(|p| p != q) {
            open = open.max(pin);
            pin = None;
        }
        if let Some(b) = l.alt_bound {
            open = open.filter(|&o| levels[o as usize] >= b);
            pin = pin.filter(|&p| levels[p as usize] >= b);
        }
        if l.owned {
            if l.acval == Some(l.aval) {
                pin = Some(q);
            } else {
                open = open.max(Some(q));
            }
        }
        Obligations { open, pin }
    }
}

/// What the product tracks besides the arena vertex.
pub(crate) struct Components<'a> {
    pub lg: &'a LabeledGame,
    pub phis: Vec<Player>,
    pub automata: Vec<&'a EdgeAutomaton>,
    pub strategy: Option<&'a MooreStrategy>,
    /// edge-weight events `w_p op q`, one color each
    events: Vec<(Player, CmpOp, Rational)>,
    /// priorities of each automaton with the sink priority last
    priorities: Vec<Vec<usize>>,
}

const PHI_COLORS: u32 = 4;

impl<'a> Components<'a> {
    pub fn new(
        lg: &'a LabeledGame,
        phis: Vec<Player>,
        strategy: Option<&'a MooreStrategy>,
    ) -> Self {
        Components {
            lg,
            phis,
            automata: vec![],
            strategy,
            events: vec![],
            priorities: vec![],
        }
    }

    fn measure(&self) -> Result<PayoffKind, OutcomeError> {
        match self.lg.arena().measure() {
            m @ (PayoffKind::LimInf | PayoffKind::LimSup) => Ok(m),
            _ => Err(OutcomeError::UnsupportedMeasure(
                self.lg.table().transformed().source_measure(),
            )),
        }
    }

    fn event_base(&self) -> u32 {
        PHI_COLORS * self.phis.len() as u32
    }

    fn automaton_base(&self, k: usize) -> u32 {
        self.event_base()
            + self.events.len() as u32
            + self.priorities[..k]
                .iter()
                .map(|p| p.len() as u32)
                .sum::<u32>()
    }

    fn color_count(&self) -> u32 {
        self.automaton_base(self.priorities.len())
    }

    fn event(&mut self, player: Player, op: CmpOp, q: Rational) -> Cond {
        let k = match self.events.iter().position(|&x| x == (player, op, q)) {
            Some(k) => k,
            None => {
                self.events.push((player, op, q));
                self.events.len() - 1
            }
        };
        // events come before the automata colors, whose offsets shift
        Cond::Inf(self.event_base() + k as u32)
    }

    /// Condition of the admissibility formula of the `slot`-th tracked player.
    pub fn phi_cond(&self, slot: usize) -> Result<Cond, OutcomeError> {
        let b = PHI_COLORS * slot as u32;
        let (open_ok, pin_ok) = match self.measure()? {
            PayoffKind::LimInf => (Cond::Inf(b + 1).not(), Cond::Inf(b + 3).not()),
            _ => (Cond::Inf(b + 1), Cond::Inf(b + 3)),
        };
        Ok(Cond::And(vec![
            Cond::Or(vec![Cond::Inf(b), open_ok]),
            Cond::Or(vec![Cond::Inf(b + 2), pin_ok]),
        ]))
    }

    /// Registers the atoms of `spec` and returns its condition. Automaton
    /// colors are laid out after all events, so a product compiles at most
    /// one spec.
    pub fn compile(&mut self, spec: &'a PayoffSpec) -> Result<Cond, OutcomeError> {
        assert!(
            self.events.is_empty() && self.automata.is_empty(),
            "one spec per product"
        );
        let mut pending = Vec::new();
        let cond = self.compile_rec(spec, &mut pending)?;
        // automaton colors were allocated as placeholders; resolve them now
        Ok(self.resolve(cond, &pending))
    }

    fn compile_rec(
        &mut self,
        spec: &'a PayoffSpec,
        pending: &mut Vec<usize>,
    ) -> Result<Cond, OutcomeError> {
        Ok(match spec {
            PayoffSpec::True => Cond::True,
            PayoffSpec::False => Cond::False,
            PayoffSpec::Payoff { player, op, value } => {
                let (p, q) = (*player, *value);
                let liminf = self.measure()? == PayoffKind::LimInf;
                let mut atom = |op: CmpOp| -> Cond {
                    match (liminf, op) {
                        (true, CmpOp::Ge) => self.event(p, CmpOp::Lt, q).not(),
                        (true, CmpOp::Gt) => self.event(p, CmpOp::Le, q).not(),
                        (true, o) => self.event(p, o, q),
                        (false, CmpOp::Le) => self.event(p, CmpOp::Gt, q).not(),
                        (false, CmpOp::Lt) => self.event(p, CmpOp::Ge, q).not(),
                        (false, o) => self.event(p, o, q),
                    }
                };
                match op {
                    CmpOp::Eq => Cond::And(vec![atom(CmpOp::Ge), atom(CmpOp::Le)]),
                    &o => atom(o),
                }
            }
            PayoffSpec::Automaton { automaton, .. } => {
                let k = self.automata.len();
                self.automata.push(automaton);
                let mut prios = automaton.priorities();
                let top = prios.last().copied().unwrap_or(0);
                prios.push(if top % 2 == 0 { top + 1 } else { top + 2 });
                self.priorities.push(prios);
                pending.push(k);
                // placeholder color, resolved once all events are known
                Cond::Inf(u32::MAX - k as u32)
            }
            PayoffSpec::Not(s) => self.compile_rec(s, pending)?.not(),
            PayoffSpec::And(a, b) => Cond::And(vec![
                self.compile_rec(a, pending)?,
                self.compile_rec(b, pending)?,
            ]),
            PayoffSpec::Or(a, b) => Cond::Or(vec![
                self.compile_rec(a, pending)?,
                self.compile_rec(b, pending)?,
            ]),
        })
    }

    fn resolve(&self, cond: Cond, pending: &[usize]) -> Cond {
        match cond {
            Cond::Inf(c) if c > u32::MAX - 64 => {
                let k = (u32::MAX - c) as usize;
                debug_assert!(pending.contains(&k));
                self.parity_cond(k)
            }
            Cond::Not(c) => self.resolve(*c, pending).not(),
            Cond::And(cs) => Cond::And(cs.into_iter().map(|c| self.resolve(c, pending)).collect()),
            Cond::Or(cs) => Cond::Or(cs.into_iter().map(|c| self.resolve(c, pending)).collect()),
            c => c,
        }
    }

    /// Largest priority seen infinitely often is even.
    fn parity_cond(&self, k: usize) -> Cond {
        let base = self.automaton_base(k);
        let prios = &self.priorities[k];
        Cond::Or(
            prios
                .iter()
                .enumerate()
                .filter(|(_, p)| *p % 2 == 0)
                .map(|(i, _)| {
                    let mut parts = vec![Cond::Inf(base + i as u32)];
                    parts.extend((i + 1..prios.len()).map(|j| Cond::Inf(base + j as u32).not()));
                    Cond::And(parts)
                })
                .collect(),
        )
    }
}

/// A reachable product state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    /// vertex of the labelled arena
    pub t: VertexId,
    pub memory: usize,
    pub obligations: Vec<Obligations>,
    /// automaton states; `None` is the rejecting sink
    pub automata: Vec<Option<usize>>,
}

pub(crate) struct Product {
    pub nodes: Vec<Node>,
    pub graph: ColoredGraph,
}

impl Product {
    /// Raw vertex of product state `n`.
    pub fn raw(&self, c: &Components, n: usize) -> VertexId {
        c.lg.table().transformed().raw_vertex(self.nodes[n].t)
    }
}

pub(crate) fn explore(c: &Components) -> Result<Product, OutcomeError> {
    c.measure()?;
    if c.color_count() > 62 {
        return Err(OutcomeError::TooManyColors(c.color_count() as usize));
    }
    let lg = c.lg;
    let arena = lg.arena();
    let tg = lg.table().transformed();
    let levels: Vec<&[Rational]> = c.phis.iter().map(|&p| lg.a_values(p)).collect();
    let init = Node {
        t: arena.init(),
        memory: c.strategy.map(|s| s.initial_memory()).unwrap_or(0),
        obligations: vec![Obligations::default(); c.phis.len()],
        automata: c.automata.iter().map(|a| Some(a.initial())).collect(),
    };
    let mut index: HashMap<Node, usize> = HashMap::from([(init.clone(), 0)]);
    let mut nodes = vec![init];
    let mut succ: Vec<Vec<(usize, Colors)>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let node = nodes[i].clone();
        let u = tg.raw_vertex(node.t);
        let mut out = Vec::new();
        for &e in arena.out_edges(node.t) {
            let t2 = arena.edge(e).dst;
            let v = tg.raw_vertex(t2);
            let memory = match c.strategy {
                Some(s) => {
                    if s.player() == arena.owner(node.t) && s.choice(node.memory, u) != Some(v) {
                        continue;
                    }
                    s.next_memory(node.memory, v)
                }
                None => 0,
            };
            let mut colors: Colors = 0;
            let mut obligations = Vec::with_capacity(c.phis.len());
            for (slot, &p) in c.phis.iter().enumerate() {
                let o = node.obligations[slot].step(levels[slot], lg.label(p, e));
                let w = arena.weight(e, p);
                let b = PHI_COLORS * slot as u32;
                let liminf = arena.measure() == PayoffKind::LimInf;
                let hit = |q: u16, strict: bool| {
                    let q = levels[slot][q as usize];
                    match (liminf, strict) {
                        (true, true) => w <= q,
                        (true, false) => w < q,
                        (false, true) => w > q,
                        (false, false) => w >= q,
                    }
                };
                colors |= match o.open {
                    None => 1 << b,
                    Some(q) if hit(q, true) => 1 << (b + 1),
                    Some(_) => 0,
                };
                colors |= match o.pin {
                    None => 1 << (b + 2),
                    Some(q) if hit(q, false) => 1 << (b + 3),
                    Some(_) => 0,
                };
                obligations.push(o);
            }
            for (k, &(p, op, q)) in c.events.iter().enumerate() {
                if op.holds(arena.weight(e, p), q) {
                    colors |= 1 << (c.event_base() + k as u32);
                }
            }
            let mut automata = Vec::with_capacity(c.automata.len());
            for (k, a) in c.automata.iter().enumerate() {
                let next = node.automata[k].and_then(|q| a.next(q, u, v));
                let prios = &c.priorities[k];
                let rank = match next {
                    Some(q) => prios.binary_search(&a.priority(q)).unwrap(),
                    None => prios.len() - 1,
                };
                colors |= 1 << (c.automaton_base(k) + rank as u32);
                automata.push(next);
            }
            let next = Node {
                t: t2,
                memory,
                obligations,
                automata,
            };
            let id = *index.entry(next.clone()).or_insert_with(|| {
                nodes.push(next);
                nodes.len() - 1
            });
            out.push((id, colors));
        }
        succ.push(out);
        i += 1;
    }
    Ok(Product {
        nodes,
        graph: ColoredGraph { succ },
    })
}
