//! Decomposition of the state label function into unary automata, one per
//! base point on the face `p[axis] == 0`.
//!
//! The automaton at base `p` reads the axis letter. Its states are pairs
//! `(label, counter)`. Starting from `(label(p), 0)`, one step maps
//! `(S, i)` to `(T, i')` where
//!
//! ```text
//! T  = delta(S, a) ∪ ⋃ delta(label of A_q after i+1 steps, b)   for p = q + e_b
//! i' = i + 1 if i + 1 < I + P, else I
//! ```
//!
//! with `I` the largest index and `P` the lcm of the periods of the
//! predecessor automata `A_q` (0 and 1 when there are none).

use std::collections::HashMap;

use crate::automata::{checked_lcm, Dfa, UnaryProfile};
use crate::error::{Error, Result};
use crate::grid::{GridBox, LabelGrid};
use crate::state_set::{LetterImage, StateSet, MAX_STATES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainState {
    pub label: StateSet,
    pub counter: usize,
}

impl std::fmt::Display for ChainState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.label, self.counter)
    }
}

/// The reachable part of one unary decomposition automaton: a tail followed
/// by a cycle that re-enters the chain at `loop_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryChainAutomaton {
    pub axis: usize,
    pub base: Vec<usize>,
    pub chain: Vec<ChainState>,
    pub loop_target: Option<usize>,
    pub inherited_index: usize,
    pub inherited_period: usize,
    /// Predecessor automata as `(region index, letter)` with `base = q + e_letter`.
    pub predecessors: Vec<(usize, usize)>,
}

impl UnaryChainAutomaton {
    pub fn is_closed(&self) -> bool {
        self.loop_target.is_some()
    }

    /// State after reading `steps` copies of the axis letter.
    pub fn run_unary(&self, steps: usize) -> Result<ChainState> {
        if let Some(s) = self.chain.get(steps) {
            return Ok(*s);
        }
        let tail = self.loop_target.ok_or_else(|| Error::ChainOpen(self.base.clone()))?;
        let period = self.chain.len() - tail;
        Ok(self.chain[tail + (steps - tail) % period])
    }

    pub fn unary_index_period(&self) -> Result<UnaryProfile> {
        let tail = self.loop_target.ok_or_else(|| Error::ChainOpen(self.base.clone()))?;
        Ok(UnaryProfile { index: tail, period: self.chain.len() - tail })
    }

    /// Whether the label after `steps` letters meets `finals`.
    pub fn unary_language_membership(&self, steps: usize, finals: StateSet) -> Result<bool> {
        Ok(self.run_unary(steps)?.label.intersects(finals))
    }

    /// Positions on the cycle; empty while the chain is open.
    pub fn cycle(&self) -> std::ops::Range<usize> {
        match self.loop_target {
            Some(t) => t..self.chain.len(),
            None => 0..0,
        }
    }
}

/// All decomposition automata along one axis over a finite region of base points.
#[derive(Clone, Debug)]
pub struct DecompositionFamily {
    dfa: Dfa,
    axis: usize,
    region: GridBox,
    automata: Vec<UnaryChainAutomaton>,
}

/// Chain length limit used when none is given: enough for the group-case
/// bound `n * L_j` and at least `4 * diameter * n` otherwise.
pub fn default_step_budget(d: &Dfa, axis: usize, region: &GridBox) -> usize {
    let n = d.state_count();
    let diameter: usize = region.extents().iter().map(|e| e - 1).sum::<usize>().max(1);
    let group = d
        .letter_order(axis)
        .ok()
        .and_then(|l| usize::try_from(l).ok())
        .map_or(0, |l| n.saturating_mul(l) + 1);
    group.max(4 * diameter * n)
}

/// Builds every automaton of the region (whose extent along `axis` must be 1)
/// in row-major order, so predecessors always come first.
pub fn build_family(
    d: &Dfa,
    axis: usize,
    region: &GridBox,
    step_budget: usize,
) -> Result<DecompositionFamily> {
    let k = d.letter_count();
    if d.state_count() > MAX_STATES {
        return Err(Error::TooManyStates(d.state_count()));
    }
    if axis >= k {
        return Err(Error::UnknownLetter(axis));
    }
    if region.dims() != k || region.extents()[axis] != 1 {
        return Err(Error::RegionMismatch(format!(
            "region {:?} must have {k} axes and extent 1 along axis {axis}",
            region.extents()
        )));
    }
    let images: Vec<LetterImage> = (0..k).map(|j| LetterImage::new(d.targets(j))).collect();
    let mut automata: Vec<UnaryChainAutomaton> = Vec::with_capacity(region.point_count() as usize);
    for (idx, base) in region.points().enumerate() {
        let predecessors: Vec<(usize, usize)> = (0..k)
            .filter(|&b| b != axis && base[b] > 0)
            .map(|b| (idx - region.stride(b), b))
            .collect();
        let mut inherited_index = 0;
        let mut inherited_period = 1u64;
        let mut start = if predecessors.is_empty() {
            StateSet::singleton(d.start())
        } else {
            StateSet::EMPTY
        };
        for &(q, b) in &predecessors {
            let prof = automata[q].unary_index_period()?;
            inherited_index = inherited_index.max(prof.index);
            inherited_period = checked_lcm(inherited_period, prof.period as u64)
                .ok_or(Error::Overflow("inherited period"))?;
            start |= images[b].apply(automata[q].chain[0].label);
        }
        let inherited_period =
            usize::try_from(inherited_period).map_err(|_| Error::Overflow("inherited period"))?;
        let wrap = inherited_index + inherited_period;

        let mut chain = vec![ChainState { label: start, counter: 0 }];
        let mut seen: HashMap<ChainState, usize> = HashMap::from([(chain[0], 0)]);
        let loop_target = loop {
            let cur = *chain.last().unwrap();
            let mut label = images[axis].apply(cur.label);
            for &(q, b) in &predecessors {
                label |= images[b].apply(automata[q].run_unary(cur.counter + 1)?.label);
            }
            let counter = if cur.counter + 1 < wrap { cur.counter + 1 } else { inherited_index };
            let next = ChainState { label, counter };
            if let Some(&pos) = seen.get(&next) {
                break pos;
            }
            if chain.len() >= step_budget {
                return Err(Error::BudgetExceeded(format!(
                    "chain along axis {axis} at base {base:?} did not close within {step_budget} steps"
                )));
            }
            seen.insert(next, chain.len());
            chain.push(next);
        };
        automata.push(UnaryChainAutomaton {
            axis,
            base,
            chain,
            loop_target: Some(loop_target),
            inherited_index,
            inherited_period,
            predecessors,
        });
    }
    Ok(DecompositionFamily { dfa: d.clone(), axis, region: region.clone(), automata })
}

impl DecompositionFamily {
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn region(&self) -> &GridBox {
        &self.region
    }

    pub fn automata(&self) -> &[UnaryChainAutomaton] {
        &self.automata
    }

    pub fn get(&self, base: &[usize]) -> Option<&UnaryChainAutomaton> {
        self.region.index(base).map(|i| &self.automata[i])
    }

    /// Largest index and lcm of periods over the whole family.
    pub fn aggregate_profile(&self) -> Result<UnaryProfile> {
        let mut index = 0;
        let mut period = 1u64;
        for u in &self.automata {
            let p = u.unary_index_period()?;
            index = index.max(p.index);
            period = checked_lcm(period, p.period as u64).ok_or(Error::Overflow("family period"))?;
        }
        let period = usize::try_from(period).map_err(|_| Error::Overflow("family period"))?;
        Ok(UnaryProfile { index, period })
    }

    /// Membership of `word` in the closure, decided by splitting it into the
    /// axis-letter part and the rest: the rest fixes the base point, the
    /// number of axis letters is fed to that base point's automaton.
    pub fn shuffle_membership(&self, word: &[usize]) -> Result<bool> {
        let mut base = vec![0; self.dfa.letter_count()];
        let mut steps = 0;
        for &j in word {
            if j >= base.len() {
                return Err(Error::UnknownLetter(j));
            }
            if j == self.axis {
                steps += 1;
            } else {
                base[j] += 1;
            }
        }
        let u = self
            .get(&base)
            .ok_or_else(|| Error::RegionMismatch(format!("base {base:?} outside region")))?;
        u.unary_language_membership(steps, self.dfa.final_set())
    }
}

/// Compares every grid label with the label reached by the automaton at the
/// point's projection. Returns the first point where they differ.
pub fn decomposition_check(
    family: &DecompositionFamily,
    grid: &LabelGrid,
) -> Result<Option<Vec<usize>>> {
    if grid.dfa() != family.dfa() {
        return Err(Error::RegionMismatch("grid and family come from different automata".into()));
    }
    let axis = family.axis;
    for p in grid.bounds().points() {
        let mut base = p.clone();
        base[axis] = 0;
        let u = family
            .get(&base)
            .ok_or_else(|| Error::RegionMismatch(format!("base {base:?} outside family region")))?;
        if u.run_unary(p[axis])?.label != grid.sigma(&p)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Outcome of the group-case checks for one automaton of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainChecks {
    pub base: Vec<usize>,
    pub profile: UnaryProfile,
    /// Label sizes never shrink along the chain and are constant on the cycle.
    pub nondecreasing: bool,
    /// The period divides the letter order.
    pub period_divides_order: bool,
    /// `index <= (|T| - 1) * order` for every cycle label `T`.
    pub index_bound: bool,
    /// From any state with counter at least the inherited index, `order`
    /// more steps either grow the label or return to the same state.
    pub order_step: bool,
    /// From step `m >= I`, `lcm(P, L_S)` more steps either grow the label or
    /// return to the same state.
    pub cycle_detection: bool,
}

impl ChainChecks {
    pub fn passed(&self) -> bool {
        self.nondecreasing
            && self.period_divides_order
            && self.index_bound
            && self.order_step
            && self.cycle_detection
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPropertyReport {
    pub axis: usize,
    pub letter_order: u64,
    pub chains: Vec<ChainChecks>,
}

impl GroupPropertyReport {
    pub fn all_passed(&self) -> bool {
        self.chains.iter().all(ChainChecks::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChainChecks> {
        self.chains.iter().filter(|c| !c.passed())
    }
}

/// Checks the structural properties that hold for families built from
/// permutation automata.
pub fn group_property_report(d: &Dfa, family: &DecompositionFamily) -> Result<GroupPropertyReport> {
    if !d.is_permutation_automaton() {
        return Err(Error::NotPermutationAutomaton);
    }
    let axis = family.axis;
    let order = d.letter_order(axis)?;
    let order_steps = usize::try_from(order).map_err(|_| Error::Overflow("letter order"))?;
    let mut chains = Vec::with_capacity(family.automata.len());
    for u in &family.automata {
        let profile = u.unary_index_period()?;
        let cycle = u.cycle();
        let size = |i: usize| u.chain[i].label.len();

        let tail_ok = u.chain.windows(2).all(|w| w[0].label.len() <= w[1].label.len());
        let cycle_const = cycle.clone().all(|i| size(i) == size(cycle.start));
        let nondecreasing = tail_ok && cycle_const;

        let period_divides_order = order % profile.period as u64 == 0;
        let index_bound = cycle
            .clone()
            .all(|i| profile.index as u64 <= (size(i) as u64).saturating_sub(1) * order);

        let mut order_step = true;
        let mut cycle_detection = true;
        for (m, s) in u.chain.iter().enumerate() {
            if s.counter < u.inherited_index {
                continue;
            }
            let t = u.run_unary(m + order_steps)?;
            if t.label.len() < s.label.len() || (t.label.len() == s.label.len() && t != *s) {
                order_step = false;
            }
            let ls = d.subset_cycle_lcm(axis, s.label)?;
            let jump = checked_lcm(u.inherited_period as u64, ls)
                .ok_or(Error::Overflow("cycle detection step"))?;
            let t = u.run_unary(m + jump as usize)?;
            if t.label.len() == s.label.len() && t != *s {
                cycle_detection = false;
            }
        }
        chains.push(ChainChecks {
            base: u.base.clone(),
            profile,
            nondecreasing,
            period_divides_order,
            index_bound,
            order_step,
            cycle_detection,
        });
    }
    Ok(GroupPropertyReport { axis, letter_order: order, chains })
}
