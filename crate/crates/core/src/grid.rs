//! The state label function over a finite box of Parikh vectors, and
//! detection of the eventual periodicity of labels along each axis.
//!
//! The label of a point `p` is the set of states reachable from the start
//! state by some word whose letter counts equal `p`. Labels are filled by the
//! recurrence `label(p) = ⋃ delta(label(p - e_b), b)` over the letters `b`
//! with `p_b > 0`, starting from `{start}` at the origin.

use std::fmt;

use crate::automata::{checked_lcm, Dfa, UnaryProfile};
use crate::error::{Error, Result, UnstableLine};
use crate::state_set::{LetterImage, StateSet, MAX_STATES};

/// Default limit on the number of points a grid may hold.
pub const DEFAULT_POINT_BUDGET: u128 = 100_000_000;

/// Letter counts of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParikhVector(pub Vec<usize>);

impl ParikhVector {
    pub fn zero(k: usize) -> Self {
        ParikhVector(vec![0; k])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::ops::Deref for ParikhVector {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl std::ops::Add for &ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        ParikhVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Letter counts of a word given as letter indices over a `k`-letter alphabet.
pub fn parikh(word: &[usize], k: usize) -> Result<ParikhVector> {
    let mut counts = vec![0; k];
    for &j in word {
        *counts.get_mut(j).ok_or(Error::UnknownLetter(j))? += 1;
    }
    Ok(ParikhVector(counts))
}

/// Letter counts of a whitespace-separated word over the automaton's alphabet.
pub fn parikh_symbols(word: &str, d: &Dfa) -> Result<ParikhVector> {
    parikh(&d.parse_word(word)?, d.letter_count())
}

/// The points `p` with `0 <= p_j < extents[j]`, linearised row-major
/// (last axis fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBox {
    extents: Vec<usize>,
    strides: Vec<usize>,
}

impl GridBox {
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::RegionMismatch("box needs at least one axis".into()));
        }
        if let Some(j) = extents.iter().position(|&e| e == 0) {
            return Err(Error::RegionMismatch(format!("extent of axis {j} must be positive")));
        }
        let mut strides = vec![1usize; extents.len()];
        for j in (0..extents.len() - 1).rev() {
            strides[j] = strides[j + 1].saturating_mul(extents[j + 1]);
        }
        Ok(GridBox { extents, strides })
    }

    pub fn cube(k: usize, extent: usize) -> Result<Self> {
        GridBox::new(vec![extent; k])
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn point_count(&self) -> u128 {
        self.extents.iter().map(|&e| e as u128).product()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        p.len() == self.extents.len() && p.iter().zip(&self.extents).all(|(x, e)| x < e)
    }

    pub fn index(&self, p: &[usize]) -> Option<usize> {
        self.contains(p)
            .then(|| p.iter().zip(&self.strides).map(|(x, s)| x * s).sum())
    }

    pub fn point(&self, mut index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let x = index / s;
                index %= s;
                x
            })
            .collect()
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.point_count() as usize).map(|i| self.point(i))
    }
}

/// Labels of every point of a box.
#[derive(Clone, Debug)]
pub struct LabelGrid {
    dfa: Dfa,
    bounds: GridBox,
    labels: Vec<StateSet>,
}

pub fn sigma_grid(d: &Dfa, bounds: &GridBox) -> Result<LabelGrid> {
    sigma_grid_with_budget(d, bounds, DEFAULT_POINT_BUDGET)
}

pub fn sigma_grid_with_budget(d: &Dfa, bounds: &GridBox, budget: u128) -> Result<LabelGrid> {
    if d.state_count() > MAX_STATES {
        return Err(Error::TooManyStates(d.state_count()));
    }
    if bounds.dims() != d.letter_count() {
        return Err(Error::RegionMismatch(format!(
            "box has {} axes, alphabet has {} letters",
            bounds.dims(),
            d.letter_count()
        )));
    }
    let points = bounds.point_count();
    if points > budget {
        return Err(Error::BoxTooLarge { points, budget });
    }
    let k = d.letter_count();
    let images: Vec<LetterImage> = (0..k).map(|j| LetterImage::new(d.targets(j))).collect();
    let total = points as usize;
    let mut labels = vec![StateSet::EMPTY; total];
    labels[0] = StateSet::singleton(d.start());
    // Row-major order visits every predecessor p - e_b before p.
    let mut coords = vec![0usize; k];
    for idx in 1..total {
        for j in (0..k).rev() {
            coords[j] += 1;
            if coords[j] < bounds.extents[j] {
                break;
            }
            coords[j] = 0;
        }
        let mut label = StateSet::EMPTY;
        for b in 0..k {
            if coords[b] > 0 {
                label |= images[b].apply(labels[idx - bounds.strides[b]]);
            }
        }
        labels[idx] = label;
    }
    Ok(LabelGrid { dfa: d.clone(), bounds: bounds.clone(), labels })
}

impl LabelGrid {
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn bounds(&self) -> &GridBox {
        &self.bounds
    }

    /// The stored label of `p`.
    pub fn sigma(&self, p: &[usize]) -> Result<StateSet> {
        self.bounds
            .index(p)
            .map(|i| self.labels[i])
            .ok_or_else(|| Error::OutOfBox(p.to_vec()))
    }

    pub fn label_at(&self, index: usize) -> StateSet {
        self.labels[index]
    }

    /// Whether some word with letter counts `p` is accepted.
    pub fn parikh_image_membership(&self, p: &[usize]) -> Result<bool> {
        Ok(self.sigma(p)?.intersects(self.dfa.final_set()))
    }

    /// Labels along axis `axis` starting from `base` (which must have
    /// `base[axis] == 0`).
    pub fn line(&self, axis: usize, base: &[usize]) -> Vec<StateSet> {
        let start = self.bounds.index(base).expect("base inside box");
        let stride = self.bounds.strides[axis];
        (0..self.bounds.extents[axis]).map(|t| self.labels[start + t * stride]).collect()
    }

    /// Points of the face `p[axis] == 0`, in lexicographic order.
    pub fn bases(&self, axis: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.bounds.points().filter(move |p| p[axis] == 0)
    }
}

/// Phase data of one line of the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinePhase {
    pub base: Vec<usize>,
    /// `None` when the line is too short to show its period twice.
    pub profile: Option<UnaryProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisPhase {
    pub axis: usize,
    /// Largest index over all stabilized lines.
    pub index: usize,
    /// Lcm of the periods of all stabilized lines.
    pub period: usize,
    pub lines: Vec<LinePhase>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisPhases {
    pub axes: Vec<AxisPhase>,
    pub stabilized: bool,
}

impl AxisPhases {
    pub fn unstable_lines(&self) -> Vec<UnstableLine> {
        self.axes
            .iter()
            .flat_map(|a| {
                a.lines
                    .iter()
                    .filter(|l| l.profile.is_none())
                    .map(move |l| UnstableLine { axis: a.axis, base: l.base.clone() })
            })
            .collect()
    }
}

/// Minimal `(index, period)` of an eventually periodic sequence, judged only
/// from the given window.
///
/// For each candidate period `p` the smallest `i` with `seq[t] == seq[t + p]`
/// for all `i <= t < len - p` is found by scanning backwards; a candidate
/// counts only if the window holds the period twice (`i + 2p <= len`).
/// The smallest index wins, ties broken by the smallest period.
pub fn line_phase<T: PartialEq>(seq: &[T]) -> Option<UnaryProfile> {
    let len = seq.len();
    let mut best: Option<UnaryProfile> = None;
    for p in 1..=len / 2 {
        let mut i = len - p;
        while i > 0 && seq[i - 1] == seq[i - 1 + p] {
            i -= 1;
        }
        if i + 2 * p > len {
            continue;
        }
        if best.is_none_or(|b| i < b.index) {
            best = Some(UnaryProfile { index: i, period: p });
        }
    }
    best
}

pub fn detect_axis_phases(grid: &LabelGrid) -> AxisPhases {
    let mut stabilized = true;
    let axes = (0..grid.bounds.dims())
        .map(|axis| {
            let mut index = 0;
            let mut period = 1u64;
            let lines: Vec<LinePhase> = grid
                .bases(axis)
                .map(|base| {
                    let profile = line_phase(&grid.line(axis, &base));
                    match profile {
                        Some(pr) => {
                            index = index.max(pr.index);
                            // an overflowing lcm cannot describe a usable phase automaton
                            match checked_lcm(period, pr.period as u64) {
                                Some(l) => period = l,
                                None => stabilized = false,
                            }
                        }
                        None => stabilized = false,
                    }
                    LinePhase { base, profile }
                })
                .collect();
            AxisPhase { axis, index, period: period as usize, lines }
        })
        .collect();
    AxisPhases { axes, stabilized }
}
