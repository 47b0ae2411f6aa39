use admissible_core::admissibility::{check_strategy_admissible, construct_sco};
use admissible_core::oracle::{random_game, random_lassos};
use admissible_core::outcomes::{
    build_phi_adm_automaton, eval_phi_adm_on_lasso, labeled_game, lift, model_check_admissible,
    parse_spec, synthesize_assume_admissible, wins_objective, McVerdict, PayoffSpec, SynthResult,
};
use admissible_core::{fixtures, Game, MooreStrategy, PayoffKind, Player};

const REGULAR: [PayoffKind; 4] = [
    PayoffKind::Inf,
    PayoffKind::Sup,
    PayoffKind::LimInf,
    PayoffKind::LimSup,
];

fn spec(g: &Game, text: &str) -> PayoffSpec {
    parse_spec(text, g, &mut |_| Err("no files".into())).unwrap()
}

#[test]
fn automaton_agrees_with_evaluator() {
    let mut games = vec![fixtures::fig1_liminf(), fixtures::fig2(), fixtures::fig3()];
    for measure in REGULAR {
        for seed in 0..10 {
            games.push(random_game(
                300 + seed,
                2 + seed as usize % 5,
                (-2, 2),
                2,
                measure,
            ));
        }
    }
    for (k, g) in games.iter().enumerate() {
        let lg = labeled_game(g);
        let lassos = random_lassos(g, k as u64, 300, 10);
        for p in Player::all(g.players()) {
            let a = build_phi_adm_automaton(&lg, p).unwrap();
            for l in &lassos {
                let expected = eval_phi_adm_on_lasso(&lg, p, &lift(&lg, l).unwrap()).unwrap();
                assert_eq!(
                    a.accepts(l),
                    expected,
                    "game {k} player {p} lasso {}",
                    l.display(g)
                );
            }
        }
    }
}

#[test]
fn sco_outcomes_satisfy_the_formula() {
    for measure in REGULAR {
        for seed in 0..15 {
            let g = random_game(500 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            let lg = labeled_game(&g);
            for p in Player::all(2) {
                let s = construct_sco(&g, p);
                let a = build_phi_adm_automaton(&lg, p).unwrap();
                // lassos consistent with the strategy: follow it from the init
                for l in random_lassos(&g, seed, 200, 10) {
                    let consistent = {
                        let (pre, cyc) = l.edge_pairs();
                        let mut m = s.initial_memory();
                        let mut ok = true;
                        // two unrollings so the memory sees the cycle twice
                        for &(u, v) in pre.iter().chain(&cyc).chain(&cyc) {
                            if g.owner(u) == p && s.choice(m, u) != Some(v) {
                                ok = false;
                                break;
                            }
                            m = s.next_memory(m, v);
                        }
                        ok
                    };
                    if consistent {
                        assert!(
                            a.accepts(&l),
                            "{measure} seed {seed} player {p}: {}",
                            l.display(&g)
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn model_checking_counterexamples_reverify() {
    let mut failures = 0;
    for measure in REGULAR {
        for seed in 0..25 {
            let g = random_game(700 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            for text in [
                "payoff(1) >= 1",
                "payoff(2) > 0 || payoff(1) < 0",
                "payoff(1) = 0 && !(payoff(2) <= -1)",
            ] {
                let s = spec(&g, text);
                match model_check_admissible(&g, &s).unwrap() {
                    McVerdict::Holds => {}
                    McVerdict::Fails(l) => {
                        failures += 1;
                        assert!(!s.eval(&g, &l).unwrap());
                    }
                }
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn synthesized_strategies_reverify() {
    let mut realizable = 0;
    for measure in REGULAR {
        for seed in 0..25 {
            let g = random_game(900 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            for p in Player::all(2) {
                for text in [
                    "payoff(1) >= 1",
                    "payoff(2) > 0",
                    "payoff(1) >= 0 && payoff(2) >= 0",
                    "true",
                ] {
                    let s = spec(&g, text);
                    let r = synthesize_assume_admissible(&g, p, &s).unwrap_or_else(|e| {
                        panic!(
                            "{measure} seed {seed} player {p} `{text}`: {e}\n{}",
                            admissible_core::serialize_game(&g)
                        )
                    });
                    if let SynthResult::Realizable(st) = r {
                        realizable += 1;
                        assert!(check_strategy_admissible(&g, &st).unwrap().is_admissible());
                        assert!(wins_objective(&g, &st, &s).unwrap());
                    } else {
                        assert_ne!(text, "true");
                    }
                }
            }
        }
    }
    assert!(realizable > 0);
}

/// Follows `lasso` and, once another player leaves it at `x`, plays an SCO
/// strategy of the game started at `x`.
fn follow_then_sco(g: &Game, p: Player, lasso: &admissible_core::Lasso) -> MooreStrategy {
    let seq: Vec<usize> = lasso.prefix.iter().chain(&lasso.cycle).copied().collect();
    let next = |i: usize| {
        if i + 1 < seq.len() {
            i + 1
        } else {
            lasso.prefix.len()
        }
    };
    let scos: Vec<MooreStrategy> = g
        .vertices()
        .map(|x| construct_sco(&g.with_init(x), p))
        .collect();
    let mut offset = vec![seq.len()];
    for s in &scos {
        offset.push(offset.last().unwrap() + s.memory_size());
    }
    let mut update = Vec::new();
    let mut moves = Vec::new();
    let default = |v: usize| (g.owner(v) == p).then(|| g.successors(v).next().unwrap());
    for i in 0..seq.len() {
        update.push(
            g.vertices()
                .map(|x| {
                    if x == seq[next(i)] {
                        next(i)
                    } else {
                        offset[x] + scos[x].initial_memory()
                    }
                })
                .collect(),
        );
        moves.push(
            g.vertices()
                .map(|v| {
                    if v == seq[i] && g.owner(v) == p {
                        Some(seq[next(i)])
                    } else {
                        default(v)
                    }
                })
                .collect(),
        );
    }
    for (x, s) in scos.iter().enumerate() {
        for m in 0..s.memory_size() {
            update.push(
                g.vertices()
                    .map(|v| offset[x] + s.next_memory(m, v))
                    .collect(),
            );
            moves.push(g.vertices().map(|v| s.choice(m, v)).collect());
        }
    }
    MooreStrategy::new(g, p, 0, update, moves).unwrap()
}

#[test]
fn accepted_outcomes_have_admissible_strategies() {
    let mut built = 0;
    for measure in [PayoffKind::LimInf, PayoffKind::LimSup] {
        for seed in 0..20 {
            let g = random_game(1100 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            let lg = labeled_game(&g);
            for p in Player::all(2) {
                for l in random_lassos(&g, seed, 30, 8) {
                    if !eval_phi_adm_on_lasso(&lg, p, &lift(&lg, &l).unwrap()).unwrap() {
                        continue;
                    }
                    built += 1;
                    let s = follow_then_sco(&g, p, &l);
                    let v = check_strategy_admissible(&g, &s).unwrap();
                    assert!(
                        v.is_admissible(),
                        "{measure} seed {seed} player {p} lasso {}: {v:?}",
                        l.display(&g)
                    );
                }
            }
        }
    }
    assert!(built > 0);
}
