//! Deterministic automata for the commutative closure of regular group
//! languages.
//!
//! The pipeline: compute state labels over a box of letter-count vectors
//! ([`grid`]), read off where labels become periodic along each axis, and
//! build the product of per-letter phase counters ([`closure`]). The unary
//! decomposition automata of [`decomposition`] explain the same labels one
//! axis at a time and carry the group-case bounds; [`oracle`] provides
//! brute-force ground truth.

pub mod automata;
pub mod closure;
pub mod decomposition;
pub mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod random;
pub mod samples;
mod state_set;

pub use automata::{equivalent, minimize, unary_profile, CycleStructure, Dfa, Equivalence, UnaryProfile};
pub use closure::{build_closure, group_bound, jfa_to_dfa, Closure, ClosureOptions, ClosureReport, PhaseProfile};
pub use error::{Error, Result};
pub use grid::{sigma_grid, GridBox, LabelGrid, ParikhVector};
pub use state_set::{LetterImage, StateSet, MAX_STATES};
