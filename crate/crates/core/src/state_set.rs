//! Subsets of the states of a source automaton, stored as a 64-bit mask.

use std::fmt;

/// Maximum number of states a [`StateSet`] can index.
pub const MAX_STATES: usize = 64;

/// A set of state indices in `[0, 64)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn singleton(state: usize) -> Self {
        debug_assert!(state < MAX_STATES);
        StateSet(1 << state)
    }

    pub fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_STATES {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, state: usize) -> bool {
        state < MAX_STATES && self.0 >> state & 1 == 1
    }

    pub fn insert(&mut self, state: usize) {
        self.0 |= 1 << state;
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn intersects(self, other: StateSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = StateSet::EMPTY;
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl std::ops::BitOr for StateSet {
    type Output = StateSet;

    fn bitor(self, rhs: StateSet) -> StateSet {
        self.union(rhs)
    }
}

impl std::ops::BitOrAssign for StateSet {
    fn bitor_assign(&mut self, rhs: StateSet) {
        self.0 |= rhs.0;
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let s = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(s)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Formats as `{s0,s2}`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "s{s}")?;
        }
        f.write_str("}")
    }
}

/// Precomputed image tables of one letter, applied to a whole [`StateSet`]
/// one byte at a time.
#[derive(Clone, Debug)]
pub struct LetterImage {
    chunks: Vec<[u64; 256]>,
}

impl LetterImage {
    pub fn new(targets: &[usize]) -> Self {
        let n = targets.len();
        let mut chunks = vec![[0u64; 256]; n.div_ceil(8)];
        for (c, table) in chunks.iter_mut().enumerate() {
            for (byte, slot) in table.iter_mut().enumerate() {
                let mut img = 0u64;
                for bit in 0..8 {
                    let s = c * 8 + bit;
                    if byte >> bit & 1 == 1 && s < n {
                        img |= 1 << targets[s];
                    }
                }
                *slot = img;
            }
        }
        LetterImage { chunks }
    }

    pub fn apply(&self, set: StateSet) -> StateSet {
        let mut bits = set.0;
        let mut out = 0u64;
        let mut c = 0;
        while bits != 0 {
            out |= self.chunks[c][(bits & 0xff) as usize];
            bits >>= 8;
            c += 1;
        }
        StateSet(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_lists_sorted_members() {
        let s: StateSet = [2, 0].into_iter().collect();
        assert_eq!(s.to_string(), "{s0,s2}");
        assert_eq!(StateSet::EMPTY.to_string(), "{}");
    }

    #[test]
    fn letter_image_matches_elementwise_map() {
        let targets: Vec<usize> = (0..20).map(|s| (s * 7 + 3) % 20).collect();
        let img = LetterImage::new(&targets);
        for bits in [0u64, 1, 0b1011, 0xfffff, 0x80001] {
            let set = StateSet::from_bits(bits);
            let expected: StateSet = set.iter().map(|s| targets[s]).collect();
            assert_eq!(img.apply(set), expected);
        }
    }

    #[test]
    fn full_set_sizes() {
        assert_eq!(StateSet::full(3).len(), 3);
        assert_eq!(StateSet::full(64).len(), 64);
    }
}
