//! Admissible strategies in multi-player quantitative games on finite graphs.
//!
//! The crate computes antagonistic, cooperative and antagonistic-cooperative
//! values, decides admissibility of finite-memory strategies, constructs
//! admissible strategies, builds parity automata for the outcomes of
//! admissible strategies, and answers model-checking and assume-admissible
//! synthesis queries.

pub mod admissibility;
pub mod fixtures;
pub mod game;
pub mod oracle;
pub mod outcomes;
pub mod rational;
pub mod solvers;
pub mod transform;
pub mod values;

pub use game::{
    parse_game, payoff_of_lasso, serialize_game, validate, Diagnostic, Edge, EdgeId, Game,
    GameBuilder, GameError, History, Lasso, PathError, PayoffKind, Player, VertexId,
};
pub use rational::Rational;
pub use transform::{
    make_prefix_independent, parse_strategy, product_with_strategy, serialize_strategy,
    MooreStrategy, ProductGame, StrategyError, TransformedGame,
};

pub use values::{compute_value_table, value_at_history, ValueTable, Values};
