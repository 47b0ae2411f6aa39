use std::collections::HashMap;

use admissible_core::admissibility::{
    check_strategy_admissible, construct_sco, construct_wco_candidate, Violation,
};
use admissible_core::oracle::{for_each_choice, random_game, MemorylessProfile};
use admissible_core::solvers::{solve_zero_sum, CoalitionGame};
use admissible_core::{
    parse_strategy, payoff_of_lasso, serialize_strategy, Game, Lasso, MooreStrategy, PayoffKind,
    Player, Rational, VertexId,
};

#[test]
fn sco_strategies_are_admissible() {
    for measure in PayoffKind::ALL {
        for seed in 0..40 {
            let g = random_game(1000 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            for p in Player::all(2) {
                let s = construct_sco(&g, p);
                let v = check_strategy_admissible(&g, &s).unwrap();
                assert!(
                    v.is_admissible(),
                    "{measure} seed {seed} player {p}: {v:?}\n{}",
                    admissible_core::serialize_game(&g)
                );
                let again = parse_strategy(&serialize_strategy(&s, &g), &g).unwrap();
                assert_eq!(again, s);
            }
        }
    }
}

#[test]
fn verified_wco_candidates_are_admissible() {
    let mut verified = 0;
    for measure in PayoffKind::ALL {
        for seed in 0..20 {
            let g = random_game(2000 + seed, 2 + seed as usize % 5, (-2, 2), 2, measure);
            for p in Player::all(2) {
                let c = construct_wco_candidate(&g, p);
                if c.verified {
                    verified += 1;
                    let v = check_strategy_admissible(&g, &c.strategy).unwrap();
                    assert!(v.is_admissible(), "{measure} seed {seed} player {p}: {v:?}");
                }
            }
        }
    }
    assert!(verified > 0);
}

/// The play of `s` against an adversary that follows `prefix` while the play
/// agrees with it and `tau` afterwards.
fn play(g: &Game, s: &MooreStrategy, prefix: &[VertexId], tau: &MemorylessProfile) -> Lasso {
    let p = s.player();
    let mut state = (g.init(), s.initial_memory(), Some(0));
    let mut seen = HashMap::new();
    let mut path = Vec::new();
    loop {
        if let Some(&i) = seen.get(&state) {
            return Lasso::new(path[..i].to_vec(), path[i..].to_vec());
        }
        let (v, m, k) = state;
        seen.insert(state, path.len());
        path.push(v);
        let scripted = k.filter(|&k| k + 1 < prefix.len()).map(|k| prefix[k + 1]);
        let next = if g.owner(v) == p {
            s.choice(m, v).unwrap()
        } else {
            scripted.unwrap_or(tau[v])
        };
        let k = k.filter(|_| scripted == Some(next)).map(|k| k + 1);
        state = (next, s.next_memory(m, next), k);
    }
}

/// `sigma` until the first visit of `v`, then `alt` started afresh at `v`.
fn switch_at(
    g: &Game,
    sigma: &[Option<VertexId>],
    v: VertexId,
    alt: &MooreStrategy,
) -> MooreStrategy {
    let n = alt.memory_size();
    let mut update = vec![(0..g.vertex_count())
        .map(|x| if x == v { 1 + alt.initial_memory() } else { 0 })
        .collect()];
    let mut moves = vec![sigma.to_vec()];
    for a in 0..n {
        update.push(g.vertices().map(|x| 1 + alt.next_memory(a, x)).collect());
        moves.push(g.vertices().map(|x| alt.choice(a, x)).collect());
    }
    let init = if g.init() == v {
        1 + alt.initial_memory()
    } else {
        0
    };
    MooreStrategy::new(g, alt.player(), init, update, moves).unwrap()
}

/// Every rejected memoryless strategy is dominated by the strategy that
/// switches at the reported state, checked against memoryless adversaries
/// and against adversaries that first replay the reported history.
#[test]
fn rejected_memoryless_strategies_are_dominated() {
    let (mut eq3, mut eq4) = (0, 0);
    for measure in [
        PayoffKind::LimInf,
        PayoffKind::LimSup,
        PayoffKind::MeanPayoffInf,
    ] {
        for seed in 0..40 {
            let g = random_game(5000 + seed, 2 + seed as usize % 4, (-2, 2), 2, measure);
            for p in Player::all(2) {
                let worst = solve_zero_sum(&CoalitionGame::new(&g, p), measure).strategy;
                let worst: Vec<Option<VertexId>> = g
                    .vertices()
                    .map(|v| (g.owner(v) == p).then(|| g.edges()[worst[v].unwrap()].dst))
                    .collect();
                let mine: Vec<VertexId> = g.vertices().filter(|&v| g.owner(v) == p).collect();
                let theirs: Vec<VertexId> = g.vertices().filter(|&v| g.owner(v) != p).collect();
                let base: MemorylessProfile = g
                    .vertices()
                    .map(|v| g.successors(v).next().unwrap())
                    .collect();
                for_each_choice(&g, &mine, &base, |choice| {
                    let sigma: Vec<Option<VertexId>> = g
                        .vertices()
                        .map(|v| (g.owner(v) == p).then_some(choice[v]))
                        .collect();
                    let s = MooreStrategy::memoryless(&g, p, &sigma).unwrap();
                    let verdict = check_strategy_admissible(&g, &s).unwrap();
                    let Some(w) = verdict.witness() else { return };
                    let alt = match w.violated {
                        Violation::Eq3 => {
                            eq3 += 1;
                            MooreStrategy::memoryless(&g, p, &worst).unwrap()
                        }
                        Violation::Eq4 => {
                            eq4 += 1;
                            // secures aVal and reaches acVal cooperatively,
                            // even where the full candidate check fails
                            construct_wco_candidate(&g.with_init(w.vertex), p).strategy
                        }
                    };
                    let better = switch_at(&g, &sigma, w.vertex, &alt);
                    let value = |st: &MooreStrategy,
                                 prefix: &[VertexId],
                                 tau: &MemorylessProfile|
                     -> Rational {
                        payoff_of_lasso(measure, &g, p, &play(&g, st, prefix, tau)).unwrap()
                    };
                    let mut strict = false;
                    for_each_choice(&g, &theirs, &base, |tau| {
                        for prefix in [&[g.init()][..], &w.history[..]] {
                            let (a, b) = (value(&s, prefix, tau), value(&better, prefix, tau));
                            assert!(
                                b >= a,
                                "{measure} seed {seed} player {p}: {a} > {b} under {tau:?}\n{}",
                                admissible_core::serialize_game(&g)
                            );
                            strict |= b > a;
                        }
                    });
                    assert!(
                        strict,
                        "{measure} seed {seed} player {p}: no strict improvement for {w:?}\n{}",
                        admissible_core::serialize_game(&g)
                    );
                });
            }
        }
    }
    assert!(eq3 > 0 && eq4 > 0, "eq3 {eq3} eq4 {eq4}");
}
