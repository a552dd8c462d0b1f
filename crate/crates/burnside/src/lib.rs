//! Canonical forms in free Burnside groups `B(m, n)` of large odd exponent.
//!
//! Words are freely reduced sequences of signed generators. Relators `aⁿ` are graded by
//! how deeply τ-powers nest inside their periods, and a word is brought to its canonical
//! form rank by rank: occurrences of long fractional powers are turned into their
//! complements until every relator sees its winning side.

pub mod canonical;
pub mod cli;
pub mod config;
pub mod error;
pub mod occurrences;
pub mod periodicity;
pub mod relators;
pub mod semican;
pub mod support;
pub mod turns;
pub mod words;

pub use canonical::{can, can_1, can_r, mult_r, power_form, winner_side, CanonicalForm};
pub use config::{Measure, Mode, Params};
pub use error::{Error, Result};
pub use occurrences::{maximal_occurrences, Occurrence};
pub use turns::{inverse_turn, multi_turn, turn, StableSequence, TurnResult, TurnType};
pub use words::{Letter, Word};
