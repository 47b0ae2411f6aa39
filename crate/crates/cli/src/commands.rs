use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use admissible_core::admissibility::{
    check_strategy_admissible, construct_sco, construct_wco_candidate, AdmissibilityVerdict,
};
use admissible_core::oracle::compare;
use admissible_core::outcomes::{
    automaton_to_dot, build_phi_adm_automaton, labeled_game, model_check_admissible, parse_spec,
    serialize_automaton, synthesize_assume_admissible, LabeledGame, McVerdict, OutcomeError,
    PayoffSpec, SynthResult,
};
use admissible_core::{
    compute_value_table, parse_game, parse_strategy, serialize_strategy, Game, Lasso,
    MooreStrategy, Player,
};

use crate::{Cli, Command, Format};

/// What a command prints and its exit code.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

pub fn run(cli: &Cli) -> Result<u8> {
    let report = match &cli.command {
        Command::Values { game } => values(&load_game(game)?),
        Command::Check { game, strategy } => check(&load_game(game)?, strategy)?,
        Command::Sco {
            game,
            player,
            output,
        } => {
            let g = load_game(game)?;
            let s = construct_sco(&g, player_of(&g, *player)?);
            emit_strategy(&g, &s, output.as_deref(), 0, json!({}))?
        }
        Command::Wco {
            game,
            player,
            output,
        } => {
            let g = load_game(game)?;
            let c = construct_wco_candidate(&g, player_of(&g, *player)?);
            let code = if c.verified { 0 } else { 1 };
            let mut r = emit_strategy(
                &g,
                &c.strategy,
                output.as_deref(),
                code,
                json!({ "verified": c.verified }),
            )?;
            r.text = format!("verified: {}\n{}", c.verified, r.text);
            r
        }
        Command::Outcomes {
            game,
            player,
            format,
            output,
        } => {
            let g = load_game(game)?;
            outcomes(&g, player_of(&g, *player)?, *format, output.as_deref())?
        }
        Command::Mc { game, spec } => {
            let g = load_game(game)?;
            let s = load_spec(&g, spec)?;
            mc(&g, &s)?
        }
        Command::Synth {
            game,
            player,
            spec,
            output,
        } => {
            let g = load_game(game)?;
            let p = player_of(&g, *player)?;
            let s = load_spec(&g, spec)?;
            match synthesize_assume_admissible(&g, p, &s)? {
                SynthResult::Realizable(st) => {
                    let mut r = emit_strategy(
                        &g,
                        &st,
                        output.as_deref(),
                        0,
                        json!({ "result": "realizable" }),
                    )?;
                    r.text = format!("result: realizable\n{}", r.text);
                    r
                }
                SynthResult::Unrealizable => Report {
                    code: 1,
                    text: "result: unrealizable\n".into(),
                    json: json!({ "result": "unrealizable" }),
                },
            }
        }
        Command::Oracle { game } => oracle(&load_game(game)?)?,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report.json)?);
    } else {
        print!("{}", report.text);
    }
    Ok(report.code)
}

fn load_game(path: &Path) -> Result<Game> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_game(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Parses a spec file; automaton paths are relative to the spec's directory.
fn load_spec(g: &Game, path: &Path) -> Result<PayoffSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut load = |file: &str| fs::read_to_string(dir.join(file)).map_err(|e| e.to_string());
    parse_spec(&text, g, &mut load).with_context(|| format!("parsing {}", path.display()))
}

fn player_of(g: &Game, number: usize) -> Result<Player> {
    if number == 0 || number > g.players() {
        bail!("player {number} out of range 1..={}", g.players());
    }
    Ok(Player::new(number))
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit_strategy(
    g: &Game,
    s: &MooreStrategy,
    output: Option<&Path>,
    code: u8,
    mut json: Value,
) -> Result<Report> {
    let body = serialize_strategy(s, g);
    json["memory"] = json!(s.memory_size());
    let text = match output {
        Some(path) => {
            write_output(path, &body)?;
            json["output"] = json!(path.display().to_string());
            format!("wrote {} (memory {})\n", path.display(), s.memory_size())
        }
        None => {
            json["strategy"] = json!(body);
            body
        }
    };
    Ok(Report { code, text, json })
}

fn values(g: &Game) -> Report {
    let table = compute_value_table(g);
    let arena = table.arena();
    let mut text = String::new();
    let mut rows = Vec::new();
    for p in Player::all(g.players()) {
        for t in arena.vertices() {
            let v = table.get(p, t);
            let name = arena.name(t);
            writeln!(
                text,
                "player={} vertex={name} aval={} cval={} acval={}",
                p.number(),
                v.aval,
                v.cval,
                v.acval
            )
            .unwrap();
            rows.push(json!({
                "player": p.number(),
                "vertex": name,
                "aval": v.aval,
                "cval": v.cval,
                "acval": v.acval,
            }));
        }
    }
    Report {
        code: 0,
        text,
        json: json!({ "measure": g.measure().keyword(), "values": rows }),
    }
}

fn check(g: &Game, strategy: &PathBuf) -> Result<Report> {
    let text =
        fs::read_to_string(strategy).with_context(|| format!("reading {}", strategy.display()))?;
    let s = parse_strategy(&text, g).with_context(|| format!("parsing {}", strategy.display()))?;
    Ok(match check_strategy_admissible(g, &s)? {
        AdmissibilityVerdict::Admissible => Report {
            code: 0,
            text: "verdict: admissible\n".into(),
            json: json!({ "verdict": "admissible" }),
        },
        AdmissibilityVerdict::NotAdmissible(w) => {
            let history: Vec<&str> = w.history.iter().map(|&v| g.name(v)).collect();
            let state = format!("({}, m{})", g.name(w.vertex), w.memory);
            let text = format!(
                "verdict: not-admissible\nstate: {state}\nhistory: {}\nviolated: {}\naval={} acval={} aval_sigma={} cval_sigma={}\n",
                history.join(" "),
                w.violated.id(),
                w.aval,
                w.acval,
                w.aval_sigma,
                w.cval_sigma,
            );
            let json = json!({
                "verdict": "not-admissible",
                "state": { "vertex": g.name(w.vertex), "memory": w.memory },
                "history": history,
                "violated": w.violated.id(),
                "aval": w.aval,
                "acval": w.acval,
                "aval_sigma": w.aval_sigma,
                "cval_sigma": w.cval_sigma,
            });
            Report {
                code: 1,
                text,
                json,
            }
        }
    })
}

fn outcomes(g: &Game, player: Player, format: Format, output: Option<&Path>) -> Result<Report> {
    let lg = labeled_game(g);
    let body = match build_phi_adm_automaton(&lg, player) {
        Ok(a) => match format {
            Format::Native => serialize_automaton(&a, g),
            Format::Dot => automaton_to_dot(&a, g),
        },
        Err(OutcomeError::UnsupportedMeasure(m)) => {
            eprintln!(
                "note: no automaton for measure {m}; emitting the labelled arena and the formula"
            );
            symbolic_outcomes(&lg, player)
        }
        Err(e) => return Err(e.into()),
    };
    let mut json =
        json!({ "player": player.number(), "format": format!("{format:?}").to_lowercase() });
    let text = match output {
        Some(path) => {
            write_output(path, &body)?;
            json["output"] = json!(path.display().to_string());
            format!("wrote {}\n", path.display())
        }
        None => {
            json["automaton"] = json!(body);
            body
        }
    };
    Ok(Report {
        code: 0,
        text,
        json,
    })
}

/// Edge labels of `player` and the outcome formula over them, for measures
/// without an automaton construction.
fn symbolic_outcomes(lg: &LabeledGame, player: Player) -> String {
    let arena = lg.arena();
    let i = player.number();
    let mut out = String::from("# labels: src dst owned aval acval galt\n");
    for (e, edge) in arena.edges().iter().enumerate() {
        let l = lg.label(player, e);
        let acval = l.acval.map(|q| q.to_string()).unwrap_or_else(|| "-".into());
        let galt: Vec<String> = l.galt.iter().map(|q| q.to_string()).collect();
        writeln!(
            out,
            "label {} {} {} {} {} [{}]",
            arena.name(edge.src),
            arena.name(edge.dst),
            l.owned,
            l.aval,
            acval,
            galt.join(" ")
        )
        .unwrap();
    }
    let mut disjuncts = vec![format!("!V_{i}")];
    for q in lg.a_values(player) {
        disjuncts.push(format!("(aVal_{q} && (payoff({i}) > {q} || F gAlt_{q}))"));
        disjuncts.push(format!(
            "(aVal_{q} && acVal_{q} && payoff({i}) = {q} && G aVal_{q})"
        ));
    }
    writeln!(out, "formula G({})", disjuncts.join(" || ")).unwrap();
    out
}

fn lasso_json(g: &Game, l: &Lasso) -> Value {
    let names = |vs: &[usize]| {
        vs.iter()
            .map(|&v| g.name(v).to_string())
            .collect::<Vec<_>>()
    };
    json!({ "prefix": names(&l.prefix), "cycle": names(&l.cycle) })
}

fn mc(g: &Game, spec: &PayoffSpec) -> Result<Report> {
    Ok(match model_check_admissible(g, spec)? {
        McVerdict::Holds => Report {
            code: 0,
            text: "verdict: holds\n".into(),
            json: json!({ "verdict": "holds" }),
        },
        McVerdict::Fails(l) => {
            let names = |vs: &[usize]| vs.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(" ");
            let text = format!(
                "verdict: fails\nprefix: {}\ncycle: {}\n",
                names(&l.prefix),
                names(&l.cycle)
            );
            Report {
                code: 1,
                text,
                json: json!({ "verdict": "fails", "counterexample": lasso_json(g, &l) }),
            }
        }
    })
}

fn oracle(g: &Game) -> Result<Report> {
    let rows = compare(g)?;
    let mut text = String::from("# solver\n");
    for r in &rows {
        let v = &r.solver;
        writeln!(
            text,
            "player={} vertex={} aval={} cval={} acval={}",
            r.player, r.vertex, v.aval, v.cval, v.acval
        )
        .unwrap();
    }
    text.push_str("# brute force\n");
    for r in &rows {
        let v = &r.brute;
        writeln!(
            text,
            "player={} vertex={} aval={} cval={} acval={}",
            r.player, r.vertex, v.aval, v.cval, v.acval
        )
        .unwrap();
    }
    text.push_str("# diff\n");
    let diff: Vec<_> = rows.iter().filter(|r| !r.agrees()).collect();
    for r in &diff {
        writeln!(
            text,
            "player={} vertex={} solver=({}, {}, {}) brute=({}, {}, {})",
            r.player,
            r.vertex,
            r.solver.aval,
            r.solver.cval,
            r.solver.acval,
            r.brute.aval,
            r.brute.cval,
            r.brute.acval
        )
        .unwrap();
    }
    if diff.is_empty() {
        text.push_str("none\n");
    }
    let code = if diff.is_empty() { 0 } else { 1 };
    Ok(Report {
        code,
        text,
        json: json!({ "rows": rows, "agree": diff.is_empty() }),
    })
}
