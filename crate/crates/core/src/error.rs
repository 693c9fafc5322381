use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A line along one axis whose label sequence did not show a repeating
/// pattern inside the explored box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnstableLine {
    pub axis: usize,
    pub base: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("letter index {0} out of range")]
    UnknownLetter(usize),
    #[error("letter `{0}` does not act as a permutation")]
    NotPermutation(String),
    #[error("automaton is not a permutation automaton")]
    NotPermutationAutomaton,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("alphabets differ: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
    #[error("automaton has {0} states; state labels support at most 64")]
    TooManyStates(usize),
    #[error("box of {points} points exceeds budget of {budget}")]
    BoxTooLarge { points: u128, budget: u128 },
    #[error("point {0:?} lies outside the box")]
    OutOfBox(Vec<usize>),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("chain at base {0:?} never closed its cycle")]
    ChainOpen(Vec<usize>),
    #[error("region mismatch: {0}")]
    RegionMismatch(String),
    #[error("label phases did not stabilize on {} line(s)", .0.len())]
    NotStabilized(Vec<UnstableLine>),
    #[error("phase automaton of {states} states exceeds budget of {budget}")]
    StateBudgetExceeded { states: u128, budget: u128 },
    #[error("word of length {len} exceeds oracle bound {max_len}")]
    LengthExceeded { len: usize, max_len: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
