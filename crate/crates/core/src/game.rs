//! Game arenas, payoff measures, lassos and the line-oriented game file format.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

/// A player, numbered from 1 as in game files.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Player(usize);

impl Player {
    /// Panics on 0; players are numbered from 1.
    pub fn new(one_based: usize) -> Self {
        assert!(one_based >= 1, "players are numbered from 1");
        Player(one_based)
    }

    /// Zero-based index into per-player vectors.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    pub fn number(self) -> usize {
        self.0
    }

    pub fn all(count: usize) -> impl Iterator<Item = Player> {
        (1..=count).map(Player)
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PayoffKind {
    Inf,
    Sup,
    LimInf,
    LimSup,
    MeanPayoffInf,
    MeanPayoffSup,
}

impl PayoffKind {
    pub const ALL: [PayoffKind; 6] = [
        PayoffKind::Inf,
        PayoffKind::Sup,
        PayoffKind::LimInf,
        PayoffKind::LimSup,
        PayoffKind::MeanPayoffInf,
        PayoffKind::MeanPayoffSup,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            PayoffKind::Inf => "inf",
            PayoffKind::Sup => "sup",
            PayoffKind::LimInf => "liminf",
            PayoffKind::LimSup => "limsup",
            PayoffKind::MeanPayoffInf => "mp-inf",
            PayoffKind::MeanPayoffSup => "mp-sup",
        }
    }

    pub fn is_prefix_independent(self) -> bool {
        !matches!(self, PayoffKind::Inf | PayoffKind::Sup)
    }

    pub fn is_mean_payoff(self) -> bool {
        matches!(self, PayoffKind::MeanPayoffInf | PayoffKind::MeanPayoffSup)
    }

    /// Measures whose threshold objectives are omega-regular.
    pub fn is_regular(self) -> bool {
        !self.is_mean_payoff()
    }
}

impl fmt::Display for PayoffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for PayoffKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PayoffKind::ALL
            .into_iter()
            .find(|m| m.keyword() == s)
            .ok_or_else(|| format!("unknown measure `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub weights: Vec<Rational>,
}

/// A validated finite arena. Vertices are indexed in lexicographic order of
/// their ids and edges in order of `(src, dst)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    players: usize,
    measure: PayoffKind,
    names: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<Edge>,
    succ: Vec<Vec<EdgeId>>,
    init: VertexId,
}

impl Game {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn measure(&self) -> PayoffKind {
        self.measure
    }

    pub fn init(&self) -> VertexId {
        self.init
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owners[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Outgoing edge ids of `v`, sorted by destination.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.succ[v]
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.succ[v].iter().map(move |&e| self.edges[e].dst)
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let out = self.succ.get(u)?;
        out.binary_search_by(|&e| self.edges[e].dst.cmp(&v))
            .ok()
            .map(|i| out[i])
    }

    pub fn weight(&self, e: EdgeId, player: Player) -> Rational {
        self.edges[e].weights[player.index()]
    }

    pub fn with_init(&self, v: VertexId) -> Game {
        let mut g = self.clone();
        g.init = v;
        g
    }

    pub fn with_measure(&self, measure: PayoffKind) -> Game {
        let mut g = self.clone();
        g.measure = measure;
        g
    }

    /// Distinct weights of `player`, ascending.
    pub fn weight_levels(&self, player: Player) -> Vec<Rational> {
        let mut w: Vec<Rational> = self
            .edges
            .iter()
            .map(|e| e.weights[player.index()])
            .collect();
        w.sort();
        w.dedup();
        w
    }

    pub fn to_builder(&self) -> GameBuilder {
        GameBuilder {
            players: Some(self.players),
            measure: Some(self.measure),
            init: Some(self.names[self.init].clone()),
            vertices: self
                .vertices()
                .map(|v| (self.names[v].clone(), self.owners[v].number()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        self.names[e.src].clone(),
                        self.names[e.dst].clone(),
                        e.weights.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// A structural problem found while validating declared game data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    NoPlayers,
    MissingMeasure,
    MissingInit,
    UnknownInit(String),
    NoVertices,
    InvalidVertexId(String),
    DuplicateVertex(String),
    OwnerOutOfRange {
        vertex: String,
        owner: usize,
        players: usize,
    },
    UnknownEndpoint {
        src: String,
        dst: String,
        missing: String,
    },
    DuplicateEdge {
        src: String,
        dst: String,
    },
    WeightArity {
        src: String,
        dst: String,
        expected: usize,
        found: usize,
    },
    NoOutgoingEdge(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoPlayers => write!(f, "missing or zero player count"),
            Diagnostic::MissingMeasure => write!(f, "missing measure"),
            Diagnostic::MissingInit => write!(f, "missing init"),
            Diagnostic::UnknownInit(v) => write!(f, "init vertex `{v}` is not declared"),
            Diagnostic::NoVertices => write!(f, "no vertices declared"),
            Diagnostic::InvalidVertexId(v) => write!(f, "invalid vertex id `{v}`"),
            Diagnostic::DuplicateVertex(v) => write!(f, "vertex `{v}` declared twice"),
            Diagnostic::OwnerOutOfRange {
                vertex,
                owner,
                players,
            } => {
                write!(
                    f,
                    "vertex `{vertex}` has owner {owner} but the game has {players} players"
                )
            }
            Diagnostic::UnknownEndpoint { src, dst, missing } => {
                write!(f, "edge {src}->{dst}: unknown vertex `{missing}`")
            }
            Diagnostic::DuplicateEdge { src, dst } => write!(f, "duplicate edge {src}->{dst}"),
            Diagnostic::WeightArity {
                src,
                dst,
                expected,
                found,
            } => {
                write!(
                    f,
                    "edge {src}->{dst}: expected {expected} weights, found {found}"
                )
            }
            Diagnostic::NoOutgoingEdge(v) => write!(f, "vertex `{v}` has no outgoing edge"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: expected {expected} weights, found {found}")]
    WeightArity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid game: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("empty cycle")]
    EmptyCycle,
    #[error("empty history")]
    Empty,
    #[error("history must start at the initial vertex")]
    NotFromInit,
    #[error("vertex index {0} out of range")]
    UnknownVertex(VertexId),
    #[error("no edge {0}->{1}")]
    NotAnEdge(String, String),
}

/// Unvalidated game data, as declared in a file or assembled in code.
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    pub players: Option<usize>,
    pub measure: Option<PayoffKind>,
    pub init: Option<String>,
    pub vertices: Vec<(String, usize)>,
    pub edges: Vec<(String, String, Vec<Rational>)>,
}

pub fn is_valid_vertex_id(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GameBuilder {
    pub fn new(players: usize, measure: PayoffKind) -> Self {
        GameBuilder {
            players: Some(players),
            measure: Some(measure),
            ..Default::default()
        }
    }

    pub fn vertex(mut self, id: &str, owner: usize) -> Self {
        self.vertices.push((id.to_string(), owner));
        self
    }

    pub fn edge(mut self, src: &str, dst: &str, weights: &[i64]) -> Self {
        self.edges.push((
            src.to_string(),
            dst.to_string(),
            weights.iter().map(|&w| Rational::from(w)).collect(),
        ));
        self
    }

    pub fn edge_q(mut self, src: &str, dst: &str, weights: Vec<Rational>) -> Self {
        self.edges.push((src.to_string(), dst.to_string(), weights));
        self
    }

    pub fn init(mut self, id: &str) -> Self {
        self.init = Some(id.to_string());
        self
    }

    /// Every invariant violation, in a deterministic order.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let players = self.players.unwrap_or(0);
        if players == 0 {
            diags.push(Diagnostic::NoPlayers);
        }
        if self.measure.is_none() {
            diags.push(Diagnostic::MissingMeasure);
        }
        if self.vertices.is_empty() {
            diags.push(Diagnostic::NoVertices);
        }
        let mut owners: HashMap<&str, usize> = HashMap::new();
        for (id, owner) in &self.vertices {
            if !is_valid_vertex_id(id) {
                diags.push(Diagnostic::InvalidVertexId(id.clone()));
            }
            if owners.insert(id, *owner).is_some() {
                diags.push(Diagnostic::DuplicateVertex(id.clone()));
            }
            if players > 0 && (*owner == 0 || *owner > players) {
                diags.push(Diagnostic::OwnerOutOfRange {
                    vertex: id.clone(),
                    owner: *owner,
                    players,
                });
            }
        }
        match &self.init {
            None => diags.push(Diagnostic::MissingInit),
            Some(i) if !owners.contains_key(i.as_str()) => {
                diags.push(Diagnostic::UnknownInit(i.clone()))
            }
            _ => {}
        }
        let mut seen = HashMap::new();
        let mut has_out: HashMap<&str, bool> = owners.keys().map(|k| (*k, false)).collect();
        for (src, dst, w) in &self.edges {
            for end in [src, dst] {
                if !owners.contains_key(end.as_str()) {
                    diags.push(Diagnostic::UnknownEndpoint {
                        src: src.clone(),
                        dst: dst.clone(),
                        missing: end.clone(),
                    });
                }
            }
            if players > 0 && w.len() != players {
                diags.push(Diagnostic::WeightArity {
                    src: src.clone(),
                    dst: dst.clone(),
                    expected: players,
                    found: w.len(),
                });
            }
            if seen.insert((src.as_str(), dst.as_str()), ()).is_some() {
                diags.push(Diagnostic::DuplicateEdge {
                    src: src.clone(),
                    dst: dst.clone(),
                });
            }
            if let Some(flag) = has_out.get_mut(src.as_str()) {
                *flag = true;
            }
        }
        let mut sinks: Vec<&str> = has_out
            .iter()
            .filter(|(_, &b)| !b)
            .map(|(k, _)| *k)
            .collect();
        sinks.sort();
        diags.extend(
            sinks
                .into_iter()
                .map(|s| Diagnostic::NoOutgoingEdge(s.to_string())),
        );
        diags
    }

    pub fn build(&self) -> Result<Game, GameError> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(GameError::Invalid(diags));
        }
        let players = self.players.unwrap();
        let mut decl: Vec<(String, usize)> = self.vertices.clone();
        decl.sort();
        let names: Vec<String> = decl.iter().map(|(n, _)| n.clone()).collect();
        let owners: Vec<Player> = decl.iter().map(|(_, o)| Player::new(*o)).collect();
        let index: HashMap<&str, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(s, d, w)| Edge {
                src: index[s.as_str()],
                dst: index[d.as_str()],
                weights: w.clone(),
            })
            .collect();
        edges.sort_by_key(|e| (e.src, e.dst));
        let mut succ = vec![Vec::new(); names.len()];
        for (i, e) in edges.iter().enumerate() {
            succ[e.src].push(i);
        }
        let init = index[self.init.as_ref().unwrap().as_str()];
        Ok(Game {
            players,
            measure: self.measure.unwrap(),
            names,
            owners,
            edges,
            succ,
            init,
        })
    }
}

/// Diagnostics for already-declared data; empty when the data forms a valid game.
pub fn validate(builder: &GameBuilder) -> Vec<Diagnostic> {
    builder.validate()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_game(text: &str) -> Result<Game, GameError> {
    let mut b = GameBuilder::default();
    let mut declared: BTreeMap<String, usize> = BTreeMap::new();
    let mut pending_edges: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: String| GameError::Syntax { line, msg };
        if b.players.is_none() && toks[0] != "players" {
            return Err(syntax("`players` must be the first directive".into()));
        }
        match toks[0] {
            "players" => {
                if b.players.is_some() {
                    return Err(syntax("duplicate `players`".into()));
                }
                if toks.len() != 2 {
                    return Err(syntax("usage: players <n>".into()));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| syntax(format!("bad player count `{}`", toks[1])))?;
                if n == 0 {
                    return Err(syntax("player count must be positive".into()));
                }
                b.players = Some(n);
            }
            "measure" => {
                if toks.len() != 2 {
                    return Err(syntax(
                        "usage: measure <inf|sup|liminf|limsup|mp-inf|mp-sup>".into(),
                    ));
                }
                if b.measure.is_some() {
                    return Err(syntax("duplicate `measure`".into()));
                }
                b.measure = Some(toks[1].parse().map_err(syntax)?);
            }
            "init" => {
                if toks.len() != 2 {
                    return Err(syntax("usage: init <vertex-id>".into()));
                }
                if b.init.is_some() {
                    return Err(syntax("duplicate `init`".into()));
                }
                b.init = Some(toks[1].to_string());
            }
            "vertex" => {
                if toks.len() != 3 {
                    return Err(syntax("usage: vertex <id> <owner>".into()));
                }
                if !is_valid_vertex_id(toks[1]) {
                    return Err(syntax(format!("invalid vertex id `{}`", toks[1])));
                }
                let owner: usize = toks[2]
                    .parse()
                    .map_err(|_| syntax(format!("bad owner `{}`", toks[2])))?;
                declared.insert(toks[1].to_string(), line);
                b.vertices.push((toks[1].to_string(), owner));
            }
            "edge" => {
                if toks.len() < 3 {
                    return Err(syntax("usage: edge <src> <dst> <w1> ... <wn>".into()));
                }
                let weights = toks[3..]
                    .iter()
                    .map(|t| t.parse::<Rational>().map_err(|e| syntax(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                let expected = b.players.unwrap();
                if weights.len() != expected {
                    return Err(GameError::WeightArity {
                        line,
                        expected,
                        found: weights.len(),
                    });
                }
                pending_edges.push((line, toks[1].to_string(), toks[2].to_string()));
                b.edges
                    .push((toks[1].to_string(), toks[2].to_string(), weights));
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }
    if b.players.is_none() {
        return Err(GameError::Syntax {
            line: 0,
            msg: "missing `players`".into(),
        });
    }
    for (line, src, dst) in pending_edges {
        for name in [src, dst] {
            if !declared.contains_key(&name) {
                return Err(GameError::UnknownVertex { line, name });
            }
        }
    }
    b.build()
}

/// Canonical text: header, then vertices and edges in lexicographic order.
pub fn serialize_game(g: &Game) -> String {
    let mut out = String::new();
    out.push_str(&format!("players {}\n", g.players));
    out.push_str(&format!("measure {}\n", g.measure));
    out.push_str(&format!("init {}\n", g.names[g.init]));
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", g.names[v], g.owners[v]));
    }
    for e in &g.edges {
        out.push_str(&format!("edge {} {}", g.names[e.src], g.names[e.dst]));
        for w in &e.weights {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
    }
    out
}

/// The ultimately periodic path `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
}

impl Lasso {
    pub fn new(prefix: Vec<VertexId>, cycle: Vec<VertexId>) -> Self {
        Lasso { prefix, cycle }
    }

    pub fn first(&self) -> VertexId {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    /// Vertex pairs of the prefix part (including the edge into the cycle)
    /// and of one traversal of the cycle.
    pub fn edge_pairs(&self) -> (Vec<(VertexId, VertexId)>, Vec<(VertexId, VertexId)>) {
        let mut prefix = Vec::new();
        for w in self.prefix.windows(2) {
            prefix.push((w[0], w[1]));
        }
        if let Some(&last) = self.prefix.last() {
            prefix.push((last, self.cycle[0]));
        }
        let n = self.cycle.len();
        let cycle = (0..n)
            .map(|i| (self.cycle[i], self.cycle[(i + 1) % n]))
            .collect();
        (prefix, cycle)
    }

    /// Edge ids of the prefix part and of the cycle.
    pub fn edge_ids(&self, g: &Game) -> Result<(Vec<EdgeId>, Vec<EdgeId>), PathError> {
        if self.cycle.is_empty() {
            return Err(PathError::EmptyCycle);
        }
        for &v in self.prefix.iter().chain(&self.cycle) {
            if v >= g.vertex_count() {
                return Err(PathError::UnknownVertex(v));
            }
        }
        let lookup = |(u, v): (VertexId, VertexId)| {
            g.edge_between(u, v)
                .ok_or_else(|| PathError::NotAnEdge(g.name(u).to_string(), g.name(v).to_string()))
        };
        let (p, c) = self.edge_pairs();
        Ok((
            p.into_iter().map(lookup).collect::<Result<_, _>>()?,
            c.into_iter().map(lookup).collect::<Result<_, _>>()?,
        ))
    }

    pub fn display(&self, g: &Game) -> String {
        let names = |vs: &[VertexId]| vs.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(" ");
        format!("[{}] ([{}])^w", names(&self.prefix), names(&self.cycle))
    }
}

/// A finite play from the initial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History(Vec<VertexId>);

impl History {
    pub fn new(g: &Game, vertices: Vec<VertexId>) -> Result<Self, PathError> {
        let first = *vertices.first().ok_or(PathError::Empty)?;
        if first != g.init() {
            return Err(PathError::NotFromInit);
        }
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(PathError::UnknownVertex(v));
            }
        }
        for w in vertices.windows(2) {
            if g.edge_between(w[0], w[1]).is_none() {
                return Err(PathError::NotAnEdge(
                    g.name(w[0]).to_string(),
                    g.name(w[1]).to_string(),
                ));
            }
        }
        Ok(History(vertices))
    }

    pub fn from_names(g: &Game, names: &[&str]) -> Result<Self, PathError> {
        let vs = names
            .iter()
            .map(|n| {
                g.vertex_by_name(n)
                    .ok_or_else(|| PathError::NotAnEdge(n.to_string(), n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        History::new(g, vs)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().unwrap()
    }
}

/// Exact payoff of `player` on the outcome represented by `lasso`.
pub fn payoff_of_lasso(
    measure: PayoffKind,
    g: &Game,
    player: Player,
    lasso: &Lasso,
) -> Result<Rational, PathError> {
    let (prefix, cycle) = lasso.edge_ids(g)?;
    let w = |e: &EdgeId| g.weight(*e, player);
    Ok(match measure {
        PayoffKind::Inf => prefix.iter().chain(&cycle).map(w).min().unwrap(),
        PayoffKind::Sup => prefix.iter().chain(&cycle).map(w).max().unwrap(),
        PayoffKind::LimInf => cycle.iter().map(w).min().unwrap(),
        PayoffKind::LimSup => cycle.iter().map(w).max().unwrap(),
        PayoffKind::MeanPayoffInf | PayoffKind::MeanPayoffSup => {
            cycle.iter().map(w).sum::<Rational>() / Rational::from(cycle.len() as i64)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "players 1\nmeasure liminf\ninit a\nvertex a 1\nedge a a 0\n";

    #[test]
    fn minimal_self_loop() {
        let g = parse_game(MINIMAL).unwrap();
        assert_eq!(g.vertex_count(), 1);
        let text = serialize_game(&g);
        assert_eq!(text, MINIMAL);
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn missing_init() {
        let err = parse_game("players 1\nmeasure inf\nvertex a 1\nedge a a 0\n").unwrap_err();
        assert!(err.to_string().contains("missing init"), "{err}");
    }

    #[test]
    fn players_must_come_first() {
        let err = parse_game("measure inf\nplayers 1\n").unwrap_err();
        assert!(matches!(err, GameError::Syntax { line: 1, .. }));
    }

    #[test]
    fn unknown_vertex_reports_line() {
        let err =
            parse_game("players 1\nmeasure inf\ninit a\nvertex a 1\nedge a a 0\n\nedge a b 1\n")
                .unwrap_err();
        assert_eq!(
            err,
            GameError::UnknownVertex {
                line: 7,
                name: "b".into()
            }
        );
    }

    #[test]
    fn arity_mismatch() {
        let err =
            parse_game("players 2\nmeasure inf\ninit a\nvertex a 1\nedge a a 0\n").unwrap_err();
        assert_eq!(
            err,
            GameError::WeightArity {
                line: 5,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn sink_is_named() {
        let b = GameBuilder::new(1, PayoffKind::Inf)
            .vertex("a", 1)
            .vertex("sink", 1)
            .edge("a", "sink", &[0])
            .init("a");
        let diags = validate(&b);
        assert_eq!(diags, vec![Diagnostic::NoOutgoingEdge("sink".into())]);
    }

    #[test]
    fn owner_out_of_range() {
        let b = GameBuilder::new(2, PayoffKind::Inf)
            .vertex("a", 3)
            .edge("a", "a", &[0, 0])
            .init("a");
        assert!(validate(&b)
            .iter()
            .any(|d| matches!(d, Diagnostic::OwnerOutOfRange { owner: 3, .. })));
    }

    #[test]
    fn multi_edges_rejected() {
        let b = GameBuilder::new(1, PayoffKind::Inf)
            .vertex("a", 1)
            .edge("a", "a", &[0])
            .edge("a", "a", &[1])
            .init("a");
        assert!(
            matches!(b.build(), Err(GameError::Invalid(d)) if d.iter().any(|x| matches!(x, Diagnostic::DuplicateEdge{..})))
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_game(
            "# header\nplayers 1\n\nmeasure sup # trailing\ninit a\nvertex a 1\nedge a a 3/6\n",
        )
        .unwrap();
        assert_eq!(g.edge(0).weights[0], Rational::new(1, 2));
    }

    #[test]
    fn zero_loop_payoffs() {
        let g = parse_game(MINIMAL).unwrap();
        let l = Lasso::new(vec![], vec![0]);
        for m in PayoffKind::ALL {
            assert_eq!(
                payoff_of_lasso(m, &g, Player::new(1), &l).unwrap(),
                Rational::ZERO
            );
        }
    }

    #[test]
    fn inconsistent_lasso() {
        let g = GameBuilder::new(1, PayoffKind::Inf)
            .vertex("a", 1)
            .vertex("b", 1)
            .edge("a", "b", &[0])
            .edge("b", "b", &[0])
            .init("a")
            .build()
            .unwrap();
        let l = Lasso::new(vec![], vec![0]);
        assert!(payoff_of_lasso(PayoffKind::Inf, &g, Player::new(1), &l).is_err());
    }
}
