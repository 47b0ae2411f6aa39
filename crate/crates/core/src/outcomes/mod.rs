//! Outcomes compatible with admissible strategies: edge labelling, the
//! characterizing formula on lassos and as a parity automaton, model
//! checking under admissibility and assume-admissible synthesis.

mod automaton;
mod labels;
mod muller;
mod product;
mod spec;
mod synthesis;

use std::collections::HashMap;

use thiserror::Error;

pub use automaton::{
    automaton_to_dot, parse_automaton, serialize_automaton, AutomatonError, EdgeAutomaton,
};
pub use labels::{eval_phi_adm_on_lasso, label_edges, labeled_game, lift, EdgeLabel, LabeledGame};
pub use muller::{Colors, Cond, ZielonkaTree};
pub use spec::{parse_spec, CmpOp, PayoffSpec, SpecError};
pub use synthesis::{synthesize_assume_admissible, wins_objective, SynthResult};

use crate::admissibility::AdmissibilityError;
use crate::game::{Game, Lasso, PathError, PayoffKind, Player};
use muller::find_accepting_lasso;
use product::{explore, Components};

#[derive(Debug, Error)]
pub enum OutcomeError {
    #[error("measure {0} is not omega-regular; only inf, sup, liminf and limsup are supported")]
    UnsupportedMeasure(PayoffKind),
    #[error("the product needs {0} colors, more than the supported 62")]
    TooManyColors(usize),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
    #[error("internal check failed: {0}")]
    Unverified(String),
    #[error("the objective is winnable but no admissible winning strategy was constructed")]
    NoAdmissibleWitness,
}

/// Deterministic parity automaton over the edges of `g` accepting exactly
/// the outcomes that satisfy the admissibility formula of `player`.
pub fn build_phi_adm_automaton(
    lg: &LabeledGame,
    player: Player,
) -> Result<EdgeAutomaton, OutcomeError> {
    let comps = Components::new(lg, vec![player], None);
    let cond = comps.phi_cond(0)?;
    let prod = explore(&comps)?;
    let tree = ZielonkaTree::new(&cond);
    let mut index: HashMap<(usize, usize, usize), usize> =
        HashMap::from([((0, tree.initial(), 0), 0)]);
    let mut states = vec![(0, tree.initial(), 0)];
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (n, leaf, _) = states[i];
        for &(n2, colors) in &prod.graph.succ[n] {
            let (leaf2, p) = tree.step(leaf, colors);
            let key = (n2, leaf2, p);
            let id = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            trans.push((i, prod.raw(&comps, n), prod.raw(&comps, n2), id));
        }
        i += 1;
    }
    let names = (0..states.len()).map(|k| format!("q{k}")).collect();
    let priority = states.iter().map(|s| s.2).collect();
    let at = states.iter().map(|s| Some(prod.raw(&comps, s.0))).collect();
    let mut a = EdgeAutomaton::new(names, 0, priority, at);
    for (q, u, v, q2) in trans {
        a.add_transition(q, u, v, q2);
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McVerdict {
    Holds,
    /// an outcome satisfying every admissibility formula and violating the spec
    Fails(Lasso),
}

/// Whether every outcome compatible with admissible strategies of all
/// players satisfies `spec`.
pub fn model_check_admissible(g: &Game, spec: &PayoffSpec) -> Result<McVerdict, OutcomeError> {
    let lg = labeled_game(g);
    let players: Vec<Player> = Player::all(g.players()).collect();
    let mut comps = Components::new(&lg, players.clone(), None);
    let spec_cond = comps.compile(spec)?;
    let mut parts: Vec<Cond> = (0..players.len())
        .map(|k| comps.phi_cond(k))
        .collect::<Result<_, _>>()?;
    parts.push(spec_cond.not());
    let prod = explore(&comps)?;
    let Some((prefix, cycle)) = find_accepting_lasso(&prod.graph, 0, &Cond::And(parts)) else {
        return Ok(McVerdict::Holds);
    };
    let raw = |states: &[usize]| states.iter().map(|&n| prod.raw(&comps, n)).collect();
    let lasso = normalize_lasso(Lasso::new(raw(&prefix), raw(&cycle)));
    let lifted = lift(&lg, &lasso)?;
    for &p in &players {
        if !eval_phi_adm_on_lasso(&lg, p, &lifted)? {
            return Err(OutcomeError::Unverified(format!(
                "counterexample violates the formula of player {p}"
            )));
        }
    }
    if spec.eval(g, &lasso)? {
        return Err(OutcomeError::Unverified(
            "counterexample satisfies the spec".into(),
        ));
    }
    Ok(McVerdict::Fails(lasso))
}

/// Shortest equivalent form: minimal cycle period, prefix rolled into the cycle.
pub fn normalize_lasso(l: Lasso) -> Lasso {
    let Lasso {
        mut prefix,
        mut cycle,
    } = l;
    let n = cycle.len();
    if let Some(p) = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| cycle[i] == cycle[i - p])) {
        cycle.truncate(p);
    }
    while prefix.last().is_some_and(|&v| Some(&v) == cycle.last()) {
        prefix.pop();
        cycle.rotate_right(1);
    }
    Lasso::new(prefix, cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn spec(g: &Game, text: &str) -> PayoffSpec {
        parse_spec(text, g, &mut |_| Err("no files".into())).unwrap()
    }

    fn lasso(g: &Game, prefix: &[&str], cycle: &[&str]) -> Lasso {
        let id = |n: &&str| g.vertex_by_name(n).unwrap();
        Lasso::new(
            prefix.iter().map(id).collect(),
            cycle.iter().map(id).collect(),
        )
    }

    #[test]
    fn fig3_automaton() {
        let g = fixtures::fig3();
        let lg = labeled_game(&g);
        let a = build_phi_adm_automaton(&lg, Player::new(1)).unwrap();
        assert!(a.accepts(&lasso(&g, &["s1", "s2"], &["t2"])));
        assert!(!a.accepts(&lasso(&g, &["s1"], &["t1"])));
        assert!(a.accepts(&lasso(&g, &[], &["s1", "s2"])));
        let again = parse_automaton(&serialize_automaton(&a, &g), &g).unwrap();
        assert!(again.accepts(&lasso(&g, &["s1", "s2"], &["t2"])));
    }

    #[test]
    fn mean_payoff_is_rejected() {
        let lg = labeled_game(&fixtures::fig1());
        assert!(matches!(
            build_phi_adm_automaton(&lg, Player::new(1)),
            Err(OutcomeError::UnsupportedMeasure(_))
        ));
    }

    #[test]
    fn universal_without_owned_vertices() {
        let g = crate::game::GameBuilder::new(2, PayoffKind::LimInf)
            .vertex("a", 2)
            .vertex("b", 2)
            .edge("a", "b", &[0, 1])
            .edge("b", "a", &[3, 0])
            .edge("b", "b", &[-1, 0])
            .init("a")
            .build()
            .unwrap();
        let a = build_phi_adm_automaton(&labeled_game(&g), Player::new(1)).unwrap();
        assert!(a.accepts(&lasso(&g, &["a"], &["b"])));
        assert!(a.accepts(&lasso(&g, &[], &["a", "b"])));
    }

    #[test]
    fn fig1_liminf_model_checking() {
        let g = fixtures::fig1_liminf();
        assert_eq!(
            model_check_admissible(&g, &spec(&g, "payoff(1) >= 1")).unwrap(),
            McVerdict::Holds
        );
        assert_eq!(
            model_check_admissible(&g, &spec(&g, "true")).unwrap(),
            McVerdict::Holds
        );
        let McVerdict::Fails(l) = model_check_admissible(&g, &spec(&g, "payoff(1) >= 3")).unwrap()
        else {
            panic!("expected a counterexample");
        };
        assert!(!spec(&g, "payoff(1) >= 3").eval(&g, &l).unwrap());
    }

    #[test]
    fn fig1_liminf_synthesis() {
        let g = fixtures::fig1_liminf();
        let p1 = Player::new(1);
        let SynthResult::Realizable(s) =
            synthesize_assume_admissible(&g, p1, &spec(&g, "payoff(1) >= 2")).unwrap()
        else {
            panic!("expected realizable");
        };
        let v1 = g.vertex_by_name("v1").unwrap();
        assert_eq!(s.choice(s.initial_memory(), v1), g.vertex_by_name("v2"));
        assert_eq!(
            synthesize_assume_admissible(&g, p1, &spec(&g, "payoff(1) >= 3")).unwrap(),
            SynthResult::Unrealizable
        );
        assert!(matches!(
            synthesize_assume_admissible(&g, p1, &spec(&g, "true")).unwrap(),
            SynthResult::Realizable(_)
        ));
    }

    #[test]
    fn normalize() {
        let l = normalize_lasso(Lasso::new(vec![0, 1, 2], vec![3, 1, 2, 3, 1, 2]));
        assert_eq!(l, Lasso::new(vec![0], vec![1, 2, 3]));
    }
}
