//! Exact belief updating after surprising events.
//!
//! Beliefs, acts and updating rules live on a finite state space and use
//! exact rational arithmetic throughout. The crate covers:
//!
//! - conditional probability systems ([`rules`]), with a chain-rule checker
//!   that reports the first violating triple;
//! - ordered surprises ([`ordered_surprises`]) and their ε variant;
//! - hypothesis testing ([`hypothesis_testing`]) with constructions that
//!   embed both ordered-surprises variants;
//! - lexicographic probability systems ([`lps`]);
//! - conditional preference families and axiom checks ([`preferences`]).
//!
//! The `examples/` directory has one runnable program per capability, and
//! the `beliefkit` binary runs the same pipelines on JSON scenario files.

pub mod act;
pub mod belief;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod hypothesis_testing;
pub mod lps;
pub mod ordered_surprises;
pub mod preferences;
pub mod rational;
pub mod rules;
pub mod space;

pub use act::{compose_act, seu_value, Act, Lottery, UtilityFunction};
pub use belief::{bayes_update, is_null_event, Belief};
pub use error::Error;
pub use hypothesis_testing::{
    eps_os_to_ht, ht_rule, ht_select, os_to_ht, rules_equal, EpsHtConstruction, HtRepresentation,
    OsHtConstruction, SelectionTrace,
};
pub use lps::{clps_condition, lps_compare, lps_value, LexValue, LpsRepresentation};
pub use ordered_surprises::{
    canonicalize_os, cps_to_os, eps_os_update, os_rule, os_update, surprise_partition, OsRepresentation,
};
pub use preferences::{os_prefer, ConditionalPreferences, PreferenceFamily, Verdict};
pub use rational::Rational;
pub use rules::{bayesian_rule, conservative_rule, validate_cps, CpsVerdict, UpdatingRule};
pub use space::{Event, StateSpace};
