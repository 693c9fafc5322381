//! Complete deterministic automata, letter permutations and their cycle
//! arithmetic, unary index/period, minimization and equivalence.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::state_set::StateSet;

/// A complete deterministic finite automaton over an ordered alphabet.
///
/// `delta[j][s]` is the successor of state `s` on letter `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    delta: Vec<Vec<usize>>,
    start: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new<S: Into<String>>(
        alphabet: impl IntoIterator<Item = S>,
        states: usize,
        start: usize,
        finals: impl IntoIterator<Item = usize>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.is_empty() {
            return Err(Error::InvalidDfa("alphabet is empty".into()));
        }
        let mut seen = HashSet::new();
        for (i, a) in alphabet.iter().enumerate() {
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidDfa(format!("alphabet[{i}] duplicates `{a}`")));
            }
        }
        if states == 0 {
            return Err(Error::InvalidDfa("state count must be positive".into()));
        }
        if start >= states {
            return Err(Error::InvalidDfa(format!("start {start} out of range for {states} states")));
        }
        let mut accepting = vec![false; states];
        for (i, f) in finals.into_iter().enumerate() {
            if f >= states {
                return Err(Error::InvalidDfa(format!("finals[{i}] = {f} out of range")));
            }
            if accepting[f] {
                return Err(Error::InvalidDfa(format!("finals[{i}] duplicates state {f}")));
            }
            accepting[f] = true;
        }
        if delta.len() != alphabet.len() {
            return Err(Error::InvalidDfa(format!(
                "delta has {} rows, expected one per letter ({})",
                delta.len(),
                alphabet.len()
            )));
        }
        for (j, row) in delta.iter().enumerate() {
            if row.len() != states {
                return Err(Error::InvalidDfa(format!(
                    "delta[{j}] has {} entries, expected {states}",
                    row.len()
                )));
            }
            if let Some((s, t)) = row.iter().enumerate().find(|(_, &t)| t >= states) {
                return Err(Error::InvalidDfa(format!("delta[{j}][{s}] = {t} out of range")));
            }
        }
        Ok(Dfa { alphabet, delta, start, accepting })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// Final states in increasing order.
    pub fn finals(&self) -> Vec<usize> {
        (0..self.state_count()).filter(|&s| self.accepting[s]).collect()
    }

    /// Final states as a label; only meaningful for automata with at most 64 states.
    pub fn final_set(&self) -> StateSet {
        self.finals().into_iter().filter(|&s| s < 64).collect()
    }

    #[inline]
    pub fn step(&self, state: usize, letter: usize) -> usize {
        self.delta[letter][state]
    }

    /// The state map induced by one letter.
    pub fn targets(&self, letter: usize) -> &[usize] {
        &self.delta[letter]
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn letter_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == symbol)
    }

    /// Splits on whitespace and maps each symbol to its letter index.
    pub fn parse_word(&self, word: &str) -> Result<Vec<usize>> {
        word.split_whitespace()
            .map(|sym| self.letter_index(sym).ok_or_else(|| Error::UnknownSymbol(sym.to_string())))
            .collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter().map(|&j| self.alphabet[j].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// The state reached from the start state after reading `word`.
    pub fn run(&self, word: &[usize]) -> Result<usize> {
        word.iter().try_fold(self.start, |s, &j| {
            self.delta.get(j).map(|row| row[s]).ok_or(Error::UnknownLetter(j))
        })
    }

    pub fn run_symbols(&self, word: &str) -> Result<usize> {
        self.run(&self.parse_word(word)?)
    }

    pub fn accepts(&self, word: &[usize]) -> Result<bool> {
        Ok(self.accepting[self.run(word)?])
    }

    pub fn letter_is_permutation(&self, letter: usize) -> bool {
        let mut hit = vec![false; self.state_count()];
        self.delta[letter].iter().all(|&t| !std::mem::replace(&mut hit[t], true))
    }

    /// Every letter induces a bijection on the states.
    pub fn is_permutation_automaton(&self) -> bool {
        (0..self.letter_count()).all(|j| self.letter_is_permutation(j))
    }

    fn check_letter(&self, letter: usize) -> Result<()> {
        if letter >= self.letter_count() {
            return Err(Error::UnknownLetter(letter));
        }
        if !self.letter_is_permutation(letter) {
            return Err(Error::NotPermutation(self.alphabet[letter].clone()));
        }
        Ok(())
    }

    /// Disjoint cycle decomposition of a permutation letter, cycles listed
    /// by their smallest element.
    pub fn cycle_structure(&self, letter: usize) -> Result<CycleStructure> {
        self.check_letter(letter)?;
        let targets = &self.delta[letter];
        let mut seen = vec![false; self.state_count()];
        let mut cycles = Vec::new();
        let mut order = 1u64;
        for s in 0..self.state_count() {
            if seen[s] {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let mut t = targets[s];
            while t != s {
                seen[t] = true;
                cycle.push(t);
                t = targets[t];
            }
            order = checked_lcm(order, cycle.len() as u64).ok_or(Error::Overflow("letter order"))?;
            cycles.push(cycle);
        }
        Ok(CycleStructure { letter, cycles, order })
    }

    /// Order of a permutation letter, the lcm of all its cycle lengths.
    pub fn letter_order(&self, letter: usize) -> Result<u64> {
        Ok(self.cycle_structure(letter)?.order)
    }

    /// Lcm of the cycle lengths of the members of `subset` under `letter`.
    /// The empty subset yields 1.
    pub fn subset_cycle_lcm(&self, letter: usize, subset: StateSet) -> Result<u64> {
        let cs = self.cycle_structure(letter)?;
        let lengths = cs.cycle_lengths(self.state_count());
        subset.iter().try_fold(1u64, |acc, s| {
            checked_lcm(acc, lengths[s] as u64).ok_or(Error::Overflow("subset cycle lcm"))
        })
    }

    /// Whether applying `letter` exactly `m` times fixes every member of `subset`.
    pub fn subset_power_identity(&self, letter: usize, subset: StateSet, m: u64) -> Result<bool> {
        let cs = self.cycle_structure(letter)?;
        let lengths = cs.cycle_lengths(self.state_count());
        Ok(subset.iter().all(|s| m.is_multiple_of(lengths[s] as u64)))
    }

    /// Index and period of the trajectory of the start state under one letter.
    pub fn letter_profile(&self, letter: usize) -> Result<UnaryProfile> {
        if letter >= self.letter_count() {
            return Err(Error::UnknownLetter(letter));
        }
        Ok(unary_profile(&self.delta[letter], self.start))
    }

    /// Reachable states in breadth-first order (letters in alphabet order).
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for row in &self.delta {
                let t = row[s];
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Whether any two letters commute on every reachable state.
    pub fn is_commutative(&self) -> bool {
        let k = self.letter_count();
        self.reachable().into_iter().all(|s| {
            (0..k).all(|a| {
                (a + 1..k).all(|b| self.step(self.step(s, a), b) == self.step(self.step(s, b), a))
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStructure {
    pub letter: usize,
    pub cycles: Vec<Vec<usize>>,
    pub order: u64,
}

impl CycleStructure {
    /// Cycle length of every state, indexed by state.
    pub fn cycle_lengths(&self, states: usize) -> Vec<usize> {
        let mut lengths = vec![0; states];
        for c in &self.cycles {
            for &s in c {
                lengths[s] = c.len();
            }
        }
        lengths
    }
}

/// Index and period of a unary trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct UnaryProfile {
    pub index: usize,
    pub period: usize,
}

/// Walks `start, next[start], ..` until a state repeats; the first repeated
/// state marks the index and the distance back to it the period.
pub fn unary_profile(next: &[usize], start: usize) -> UnaryProfile {
    let mut position = vec![usize::MAX; next.len()];
    let mut s = start;
    let mut step = 0;
    loop {
        if position[s] != usize::MAX {
            return UnaryProfile { index: position[s], period: step - position[s] };
        }
        position[s] = step;
        s = next[s];
        step += 1;
    }
}

/// If `next^k(s) = s` then the period of the automaton divides `k`.
/// Returns that divisibility, or an error when the premise fails.
pub fn unary_period_divides_check(
    profile: UnaryProfile,
    s: usize,
    k: usize,
    next: &[usize],
) -> Result<bool> {
    if s >= next.len() {
        return Err(Error::PreconditionViolated(format!("state {s} out of range")));
    }
    let mut t = s;
    for _ in 0..k {
        t = next[t];
    }
    if k == 0 || t != s {
        return Err(Error::PreconditionViolated(format!("{k} steps from state {s} do not return to it")));
    }
    Ok(k.is_multiple_of(profile.period))
}

pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / num_integer::gcd(a, b)).checked_mul(b)
}

/// Minimal complete DFA for the same language. Unreachable states are
/// dropped, equivalent states merged (Moore refinement) and the result
/// numbered in breadth-first order from the start state.
pub fn minimize(d: &Dfa) -> Dfa {
    let reach = d.reachable();
    let k = d.letter_count();
    let mut class: HashMap<usize, usize> =
        reach.iter().map(|&s| (s, usize::from(d.is_final(s)))).collect();
    let mut classes = class.values().collect::<HashSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = HashMap::with_capacity(reach.len());
        for &s in &reach {
            let sig = (class[&s], (0..k).map(|j| class[&d.step(s, j)]).collect::<Vec<_>>());
            let fresh = ids.len();
            next.insert(s, *ids.entry(sig).or_insert(fresh));
        }
        let count = ids.len();
        class = next;
        if count == classes {
            break;
        }
        classes = count;
    }

    // renumber classes in BFS order from the start class
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut repr = Vec::new();
    number.insert(class[&d.start()], 0);
    repr.push(d.start());
    let mut head = 0;
    while head < repr.len() {
        let s = repr[head];
        head += 1;
        for j in 0..k {
            let t = d.step(s, j);
            if let std::collections::hash_map::Entry::Vacant(e) = number.entry(class[&t]) {
                e.insert(repr.len());
                repr.push(t);
            }
        }
    }
    let delta = (0..k)
        .map(|j| repr.iter().map(|&s| number[&class[&d.step(s, j)]]).collect())
        .collect();
    let finals: Vec<usize> = (0..repr.len()).filter(|&i| d.is_final(repr[i])).collect();
    Dfa::new(d.alphabet.clone(), repr.len(), 0, finals, delta).expect("minimized automaton is valid")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// Lexicographically least among the shortest words accepted by
    /// exactly one of the automata, as letter indices of the first one.
    Counterexample(Vec<usize>),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// For each letter of `a`, the index of the same symbol in `b`.
pub fn alphabet_map(a: &Dfa, b: &Dfa) -> Result<Vec<usize>> {
    let mismatch = || Error::AlphabetMismatch(a.alphabet.clone(), b.alphabet.clone());
    if a.letter_count() != b.letter_count() {
        return Err(mismatch());
    }
    a.alphabet.iter().map(|sym| b.letter_index(sym).ok_or_else(mismatch)).collect()
}

/// Language equality by breadth-first search over the product automaton.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Result<Equivalence> {
    let map = alphabet_map(d1, d2)?;
    let n2 = d2.state_count();
    let key = |p: usize, q: usize| p * n2 + q;
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let root = key(d1.start(), d2.start());
    let mut visited = HashSet::from([root]);
    let mut queue = VecDeque::from([(d1.start(), d2.start())]);
    while let Some((p, q)) = queue.pop_front() {
        if d1.is_final(p) != d2.is_final(q) {
            let mut word = Vec::new();
            let mut node = key(p, q);
            while let Some(&(prev, j)) = parent.get(&node) {
                word.push(j);
                node = prev;
            }
            word.reverse();
            return Ok(Equivalence::Counterexample(word));
        }
        for (j, &j2) in map.iter().enumerate() {
            let (p2, q2) = (d1.step(p, j), d2.step(q, j2));
            if visited.insert(key(p2, q2)) {
                parent.insert(key(p2, q2), (key(p, q), j));
                queue.push_back((p2, q2));
            }
        }
    }
    Ok(Equivalence::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn run_follows_transitions() {
        let g = samples::grid_automaton();
        assert_eq!(g.run_symbols("a1 a2").unwrap(), 0);
        assert_eq!(g.run(&[]).unwrap(), g.start());
        let p = samples::permutation_automaton();
        assert_eq!(p.run_symbols("a1 a1 a1").unwrap(), 0);
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let g = samples::grid_automaton();
        assert!(matches!(g.run_symbols("a1 b"), Err(Error::UnknownSymbol(s)) if s == "b"));
        assert!(matches!(g.run(&[5]), Err(Error::UnknownLetter(5))));
    }

    #[test]
    fn permutation_detection() {
        assert!(samples::permutation_automaton().is_permutation_automaton());
        assert!(!samples::grid_automaton().is_permutation_automaton());
        let one = Dfa::new(["a", "b"], 1, 0, [0], vec![vec![0], vec![0]]).unwrap();
        assert!(one.is_permutation_automaton());
    }

    #[test]
    fn cycle_structures_of_permutation_example() {
        let p = samples::permutation_automaton();
        let a1 = p.cycle_structure(0).unwrap();
        assert_eq!(a1.cycles, vec![vec![0, 1, 2]]);
        assert_eq!(a1.order, 3);
        let a2 = p.cycle_structure(1).unwrap();
        assert_eq!(a2.cycles, vec![vec![0, 1], vec![2]]);
        assert_eq!(a2.order, 2);
        let id = Dfa::new(["a"], 4, 0, [], vec![vec![0, 1, 2, 3]]).unwrap();
        let cs = id.cycle_structure(0).unwrap();
        assert_eq!(cs.cycles.len(), 4);
        assert_eq!(cs.order, 1);
        assert!(matches!(
            samples::grid_automaton().cycle_structure(0),
            Err(Error::NotPermutation(_))
        ));
    }

    #[test]
    fn subset_cycle_lcm_examples() {
        let p = samples::permutation_automaton();
        let set = |xs: &[usize]| xs.iter().copied().collect::<StateSet>();
        assert_eq!(p.subset_cycle_lcm(1, set(&[2])).unwrap(), 1);
        assert_eq!(p.subset_cycle_lcm(1, set(&[0, 2])).unwrap(), 2);
        assert_eq!(p.subset_cycle_lcm(0, StateSet::full(3)).unwrap(), 3);
        assert_eq!(p.subset_cycle_lcm(0, StateSet::EMPTY).unwrap(), 1);
    }

    #[test]
    fn subset_power_identity_examples() {
        let p = samples::permutation_automaton();
        assert!(p.subset_power_identity(0, StateSet::full(3), 3).unwrap());
        assert!(p.subset_power_identity(1, StateSet::full(3), 0).unwrap());
        assert!(!p.subset_power_identity(1, StateSet::singleton(0), 1).unwrap());
        assert!(p.subset_power_identity(1, StateSet::singleton(2), 1).unwrap());
    }

    #[test]
    fn unary_profiles() {
        assert_eq!(unary_profile(&[0], 0), UnaryProfile { index: 0, period: 1 });
        let cycle5 = [1, 2, 3, 4, 0];
        assert_eq!(unary_profile(&cycle5, 0), UnaryProfile { index: 0, period: 5 });
        // 0 -> 1 -> 2 -> 2
        assert_eq!(unary_profile(&[1, 2, 2], 0), UnaryProfile { index: 2, period: 1 });
    }

    #[test]
    fn period_divides_hook() {
        let cycle5 = [1, 2, 3, 4, 0];
        let prof = unary_profile(&cycle5, 0);
        assert!(unary_period_divides_check(prof, 3, 10, &cycle5).unwrap());
        let tail = [1, 2, 2];
        let prof = unary_profile(&tail, 0);
        assert!(unary_period_divides_check(prof, 2, 7, &tail).unwrap());
        let cycle3 = [1, 2, 0];
        assert!(unary_period_divides_check(unary_profile(&cycle3, 0), 1, 3, &cycle3).unwrap());
        assert!(matches!(
            unary_period_divides_check(prof, 0, 2, &tail),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn minimize_merges_duplicate_finals() {
        // 0 -a-> 1, 0 -b-> 2, 1 and 2 are final and behave identically, 3 is a sink
        let d = Dfa::new(
            ["a", "b"],
            4,
            0,
            [1, 2],
            vec![vec![1, 3, 3, 3], vec![2, 3, 3, 3]],
        )
        .unwrap();
        let m = minimize(&d);
        assert_eq!(m.state_count(), 3);
        assert!(equivalent(&d, &m).unwrap().is_equivalent());
        assert_eq!(minimize(&m), m);
        assert_eq!(minimize(&samples::permutation_automaton()).state_count(), 3);
    }

    #[test]
    fn minimize_drops_unreachable_states() {
        let d = Dfa::new(["a"], 3, 0, [0, 2], vec![vec![0, 2, 1]]).unwrap();
        let m = minimize(&d);
        assert_eq!(m.state_count(), 1);
        assert!(m.is_final(0));
    }

    #[test]
    fn counterexample_is_shortest_and_least() {
        // accepts words with at least one b
        let some_b = Dfa::new(["a", "b"], 2, 0, [1], vec![vec![0, 1], vec![1, 1]]).unwrap();
        // accepts words with at least one a or one b, i.e. non-empty words
        let nonempty = Dfa::new(["a", "b"], 2, 0, [1], vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            equivalent(&some_b, &nonempty).unwrap(),
            Equivalence::Counterexample(vec![0])
        );
    }

    #[test]
    fn equivalence_matches_alphabet_by_name() {
        let d = Dfa::new(["a", "b"], 2, 0, [1], vec![vec![0, 1], vec![1, 1]]).unwrap();
        let swapped = Dfa::new(["b", "a"], 2, 0, [1], vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert!(equivalent(&d, &swapped).unwrap().is_equivalent());
        let other = Dfa::new(["a", "c"], 2, 0, [1], vec![vec![0, 1], vec![1, 1]]).unwrap();
        assert!(matches!(equivalent(&d, &other), Err(Error::AlphabetMismatch(..))));
    }

    #[test]
    fn lcm_overflow_is_detected() {
        assert_eq!(checked_lcm(4, 6), Some(12));
        assert_eq!(checked_lcm(u64::MAX, u64::MAX - 1), None);
    }

    #[test]
    fn invalid_automata_are_rejected() {
        assert!(Dfa::new(["a", "a"], 1, 0, [], vec![vec![0], vec![0]]).is_err());
        assert!(Dfa::new(["a"], 1, 1, [], vec![vec![0]]).is_err());
        assert!(Dfa::new(["a"], 2, 0, [], vec![vec![0, 2]]).is_err());
        assert!(Dfa::new(["a"], 2, 0, [0, 0], vec![vec![0, 1]]).is_err());
        assert!(Dfa::new(["a"], 2, 0, [], vec![vec![0]]).is_err());
    }
}
