use admissible_core::oracle::{compare, random_game};
use admissible_core::PayoffKind;

#[test]
fn solver_tables_match_brute_force() {
    for measure in PayoffKind::ALL {
        for seed in 0..60 {
            let size = 2 + (seed as usize % 5);
            let g = random_game(seed, size, (-2, 2), 2, measure);
            for row in compare(&g).unwrap() {
                assert!(
                    row.agrees(),
                    "{measure} seed {seed} player {} vertex {}: solver {:?} brute {:?}\n{}",
                    row.player,
                    row.vertex,
                    row.solver,
                    row.brute,
                    admissible_core::serialize_game(&g)
                );
            }
        }
    }
}
