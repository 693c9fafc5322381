//! The phase-product automaton accepting the commutative closure.
//!
//! Once labels repeat with index `I_j` and period `P_j` along every axis,
//! a word's letter counts only matter up to their phase: count `x` on axis
//! `j` collapses to `x` if `x < I_j`, else `I_j + (x - I_j) mod P_j`. The
//! product of these unary counters is commutative by construction, and a
//! phase tuple is final iff some accepted word reaches it.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::automata::{minimize, Dfa, UnaryProfile};
use crate::error::{Error, Result};
use crate::grid::{detect_axis_phases, sigma_grid_with_budget, GridBox, LabelGrid, DEFAULT_POINT_BUDGET};

/// Default limit on the number of phase tuples.
pub const DEFAULT_STATE_BUDGET: u128 = 10_000_000;

/// Per-letter `(index, period)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseProfile(pub Vec<UnaryProfile>);

impl PhaseProfile {
    pub fn new(phases: Vec<UnaryProfile>) -> Result<Self> {
        if phases.iter().any(|p| p.period == 0) {
            return Err(Error::PreconditionViolated("periods must be positive".into()));
        }
        Ok(PhaseProfile(phases))
    }

    pub fn radices(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.index + p.period).collect()
    }

    /// `∏ (I_j + P_j)`.
    pub fn size(&self) -> u128 {
        self.0.iter().map(|p| (p.index + p.period) as u128).product()
    }

    /// Phase of a single count on one axis.
    pub fn reduce(&self, axis: usize, count: usize) -> usize {
        let UnaryProfile { index, period } = self.0[axis];
        if count < index {
            count
        } else {
            index + (count - index) % period
        }
    }

    pub fn phase_of(&self, p: &[usize]) -> Vec<usize> {
        p.iter().enumerate().map(|(j, &x)| self.reduce(j, x)).collect()
    }
}

/// Reads `(I_j, P_j)` off a grid whose lines all stabilized.
pub fn phases_from_grid(grid: &LabelGrid) -> Result<PhaseProfile> {
    let phases = detect_axis_phases(grid);
    if !phases.stabilized {
        return Err(Error::NotStabilized(phases.unstable_lines()));
    }
    PhaseProfile::new(
        phases
            .axes
            .iter()
            .map(|a| UnaryProfile { index: a.index, period: a.period })
            .collect(),
    )
}

/// Product of per-letter counters with finals, tuples numbered row-major
/// with radices `I_j + P_j` (last letter fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseAutomaton {
    profile: PhaseProfile,
    radices: Vec<usize>,
    strides: Vec<usize>,
    finals: Vec<bool>,
}

impl PhaseAutomaton {
    pub fn profile(&self) -> &PhaseProfile {
        &self.profile
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(t, s)| t * s).sum()
    }

    pub fn decode(&self, mut state: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let t = state / s;
                state %= s;
                t
            })
            .collect()
    }

    /// Advances the counter of `letter` by one.
    pub fn step(&self, state: usize, letter: usize) -> usize {
        let t = (state / self.strides[letter]) % self.radices[letter];
        let UnaryProfile { index, .. } = self.profile.0[letter];
        let next = if t + 1 < self.radices[letter] { t + 1 } else { index };
        state - t * self.strides[letter] + next * self.strides[letter]
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    /// Flattens into an ordinary automaton over the source alphabet.
    pub fn to_dfa(&self, alphabet: &[String]) -> Dfa {
        let n = self.state_count();
        let delta = (0..self.radices.len())
            .map(|j| (0..n).map(|s| self.step(s, j)).collect())
            .collect();
        let finals = (0..n).filter(|&s| self.finals[s]);
        Dfa::new(alphabet.iter().cloned(), n, 0, finals, delta).expect("phase automaton is valid")
    }
}

fn product_shape(profile: &PhaseProfile, budget: u128) -> Result<(Vec<usize>, Vec<usize>)> {
    let states = profile.size();
    if states > budget {
        return Err(Error::StateBudgetExceeded { states, budget });
    }
    let radices = profile.radices();
    let mut strides = vec![1; radices.len()];
    for j in (0..radices.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * radices[j + 1];
    }
    Ok((radices, strides))
}

pub fn build_phase_automaton(profile: &PhaseProfile, d: &Dfa) -> Result<PhaseAutomaton> {
    build_phase_automaton_with_budget(profile, d, DEFAULT_STATE_BUDGET)
}

/// Finals come from a breadth-first search over pairs (phase tuple, source
/// state) started at (origin, start): a tuple is final iff it is paired with
/// a final source state.
pub fn build_phase_automaton_with_budget(
    profile: &PhaseProfile,
    d: &Dfa,
    budget: u128,
) -> Result<PhaseAutomaton> {
    if profile.0.len() != d.letter_count() {
        return Err(Error::PreconditionViolated(format!(
            "profile has {} letters, automaton has {}",
            profile.0.len(),
            d.letter_count()
        )));
    }
    let (radices, strides) = product_shape(profile, budget)?;
    let states = profile.size() as usize;
    let mut pa = PhaseAutomaton { profile: profile.clone(), radices, strides, finals: vec![false; states] };
    let n = d.state_count();
    let mut visited = vec![false; states * n];
    visited[d.start()] = true;
    let mut queue = VecDeque::from([(0usize, d.start())]);
    while let Some((t, s)) = queue.pop_front() {
        if d.is_final(s) {
            pa.finals[t] = true;
        }
        for j in 0..d.letter_count() {
            let (t2, s2) = (pa.step(t, j), d.step(s, j));
            if !std::mem::replace(&mut visited[t2 * n + s2], true) {
                queue.push_back((t2, s2));
            }
        }
    }
    Ok(pa)
}

/// Second computation of the finals: a tuple is final iff some grid point
/// with that phase has a label meeting the final states.
pub fn grid_finals(profile: &PhaseProfile, grid: &LabelGrid) -> Result<Vec<bool>> {
    let (_, strides) = product_shape(profile, u128::MAX)?;
    let finals = grid.dfa().final_set();
    let mut out = vec![false; profile.size() as usize];
    let mut covered = vec![false; out.len()];
    for (i, p) in grid.bounds().points().enumerate() {
        let t: usize = profile.phase_of(&p).iter().zip(&strides).map(|(t, s)| t * s).sum();
        covered[t] = true;
        if grid.label_at(i).intersects(finals) {
            out[t] = true;
        }
    }
    if let Some(t) = covered.iter().position(|c| !c) {
        return Err(Error::RegionMismatch(format!("phase tuple #{t} has no point in the grid")));
    }
    Ok(out)
}

/// `n^k * ∏ L_j` for a permutation automaton with `n` states and letter orders `L_j`.
pub fn group_bound(d: &Dfa) -> Result<u64> {
    if !d.is_permutation_automaton() {
        return Err(Error::NotPermutationAutomaton);
    }
    let n = d.state_count() as u64;
    (0..d.letter_count()).try_fold(1u64, |acc, j| {
        let l = d.letter_order(j)?;
        acc.checked_mul(n)
            .and_then(|a| a.checked_mul(l))
            .ok_or(Error::Overflow("group bound"))
    })
}

/// Box whose extents along each axis cover the worst-case index plus two
/// periods of a permutation automaton: `(n - 1) L_j + 2 L_j`.
pub fn group_box(d: &Dfa) -> Result<GridBox> {
    let n = d.state_count() as u64;
    let extents = (0..d.letter_count())
        .map(|j| {
            let l = d.letter_order(j)?;
            (n + 1)
                .checked_mul(l)
                .and_then(|e| usize::try_from(e).ok())
                .ok_or(Error::Overflow("grid extent"))
        })
        .collect::<Result<Vec<_>>>()?;
    GridBox::new(extents)
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    /// Keep the phase automaton as built instead of minimizing it.
    pub raw: bool,
    /// Per-axis extent of the explored box for automata that are not
    /// permutation automata. `None` uses `max(16, 4n)`.
    pub exploration_extent: Option<usize>,
    pub point_budget: u128,
    pub state_budget: u128,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            raw: false,
            exploration_extent: None,
            point_budget: DEFAULT_POINT_BUDGET,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

pub const ASYMPTOTIC_BOUND: &str = "O((n·e^√(n ln n))^k)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub profile: Option<PhaseProfile>,
    pub raw_size: Option<u64>,
    pub minimized_size: Option<u64>,
    pub group_bound: Option<u64>,
    pub bound_respected: bool,
    pub stabilized: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub asymptotic_bound: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub dfa: Dfa,
    pub phase: PhaseAutomaton,
    pub report: ClosureReport,
}

/// Grid, phases, phase automaton, flattening and (unless `raw`) minimization.
pub fn build_closure(d: &Dfa, options: &ClosureOptions) -> Result<Closure> {
    let is_group = d.is_permutation_automaton();
    let bounds = if is_group {
        group_box(d)?
    } else {
        let extent = options.exploration_extent.unwrap_or((4 * d.state_count()).max(16));
        GridBox::cube(d.letter_count(), extent)?
    };
    let grid = sigma_grid_with_budget(d, &bounds, options.point_budget)?;
    let profile = phases_from_grid(&grid)?;
    let phase = build_phase_automaton_with_budget(&profile, d, options.state_budget)?;
    let raw = phase.to_dfa(d.alphabet());
    let minimized = minimize(&raw);
    let group_bound = if is_group { Some(group_bound(d)?) } else { None };
    let raw_size = raw.state_count() as u64;
    let report = ClosureReport {
        profile: Some(profile),
        raw_size: Some(raw_size),
        minimized_size: Some(minimized.state_count() as u64),
        group_bound,
        bound_respected: group_bound.is_none_or(|b| raw_size <= b),
        stabilized: true,
        asymptotic_bound: is_group.then(|| ASYMPTOTIC_BOUND.to_string()),
    };
    let dfa = if options.raw { raw } else { minimized };
    Ok(Closure { dfa, phase, report })
}

/// Report for a run whose phases never stabilized.
pub fn unstable_report(d: &Dfa) -> ClosureReport {
    let group_bound = group_bound(d).ok();
    ClosureReport {
        profile: None,
        raw_size: None,
        minimized_size: None,
        group_bound,
        bound_respected: false,
        stabilized: false,
        asymptotic_bound: None,
    }
}

/// A permutation automaton read as a jumping automaton accepts the
/// commutative closure of its language; returns the minimal DFA for it.
pub fn jfa_to_dfa(d: &Dfa) -> Result<Dfa> {
    if !d.is_permutation_automaton() {
        return Err(Error::NotPermutationAutomaton);
    }
    Ok(build_closure(d, &ClosureOptions::default())?.dfa)
}
