//! Brute-force ground truth for the commutative closure, computed without
//! the label grid: Parikh images by memoised word search, jumping-automaton
//! simulation, and bounded-length comparison of a candidate automaton.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{alphabet_map, Dfa};
use crate::error::{Error, Result};
use crate::grid::parikh;

/// Default seed for randomized spot checks.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Upper limit on enumeration work (vectors times states, or words).
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Letter-count vectors of accepted words up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParikhSet {
    pub k: usize,
    pub max_len: usize,
    pub members: BTreeSet<Vec<usize>>,
}

impl ParikhSet {
    pub fn contains(&self, p: &[usize]) -> bool {
        self.members.contains(p)
    }
}

/// All vectors of `k` naturals with sum at most `max_len`, ordered by sum and
/// then by their sorted representative word `a1^x1 a2^x2 ..`.
pub fn vectors_up_to(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn fill(k: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k - 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in (0..=remaining).rev() {
            prefix.push(x);
            fill(k, remaining - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=max_len {
        let mut level = Vec::new();
        fill(k, total, &mut Vec::new(), &mut level);
        level.sort_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn binomial(n: u128, r: u128) -> u128 {
    (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Whether some arrangement of the letters counted by `remaining`, read
/// from `state`, ends in a final state.
fn can_finish(
    d: &Dfa,
    remaining: &mut Vec<usize>,
    state: usize,
    memo: &mut HashMap<(Vec<usize>, usize), bool>,
) -> bool {
    if remaining.iter().all(|&x| x == 0) {
        return d.is_final(state);
    }
    if let Some(&r) = memo.get(&(remaining.clone(), state)) {
        return r;
    }
    let mut found = false;
    for b in 0..remaining.len() {
        if remaining[b] == 0 {
            continue;
        }
        remaining[b] -= 1;
        found = can_finish(d, remaining, d.step(state, b), memo);
        remaining[b] += 1;
        if found {
            break;
        }
    }
    memo.insert((remaining.clone(), state), found);
    found
}

pub fn parikh_set(d: &Dfa, max_len: usize) -> Result<ParikhSet> {
    let k = d.letter_count();
    let vectors = binomial((max_len + k) as u128, k as u128);
    let work = vectors.saturating_mul(d.state_count() as u128);
    if work > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "Parikh enumeration needs {work} steps, budget {ENUMERATION_BUDGET}"
        )));
    }
    let mut memo = HashMap::new();
    let members = vectors_up_to(k, max_len)
        .into_iter()
        .filter(|v| can_finish(d, &mut v.clone(), d.start(), &mut memo))
        .collect();
    Ok(ParikhSet { k, max_len, members })
}

/// A word is in the closure iff its letter counts are those of an accepted word.
pub fn closure_membership_oracle(ps: &ParikhSet, word: &[usize]) -> Result<bool> {
    if word.len() > ps.max_len {
        return Err(Error::LengthExceeded { len: word.len(), max_len: ps.max_len });
    }
    Ok(ps.contains(&parikh(word, ps.k)?))
}

/// Jumping semantics: the automaton may consume any remaining symbol next.
/// Explores configurations (remaining letter counts, state).
pub fn jumping_accepts(d: &Dfa, word: &[usize]) -> Result<bool> {
    let counts = parikh(word, d.letter_count())?.0;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(counts, d.start())]);
    while let Some((rem, s)) = queue.pop_front() {
        if !seen.insert((rem.clone(), s)) {
            continue;
        }
        if rem.iter().all(|&x| x == 0) {
            if d.is_final(s) {
                return Ok(true);
            }
            continue;
        }
        for b in 0..rem.len() {
            if rem[b] > 0 {
                let mut next = rem.clone();
                next[b] -= 1;
                queue.push_back((next, d.step(s, b)));
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_len: usize,
    pub seed: u64,
    /// Shuffled variants of each representative word tried on the candidate.
    pub shuffles: usize,
}

impl VerifyOptions {
    pub fn new(max_len: usize) -> Self {
        VerifyOptions { max_len, seed: DEFAULT_SEED, shuffles: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass { words_checked: u64 },
    /// A word (over the original's alphabet) on which the candidate and the
    /// closure of the original disagree.
    Counterexample(Vec<usize>),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }
}

/// Compares `candidate` with the closure of `original` on all words up to
/// `max_len`. When the candidate's letters commute on its reachable states,
/// acceptance is invariant under reordering and one representative per
/// letter-count vector (plus seeded shuffles of it) is checked; otherwise
/// every word is enumerated.
pub fn verify_closure(candidate: &Dfa, original: &Dfa, opts: &VerifyOptions) -> Result<Verification> {
    let map = alphabet_map(original, candidate)?;
    let ps = parikh_set(original, opts.max_len)?;
    let accepts = |w: &[usize]| -> bool {
        let s = w.iter().fold(candidate.start(), |s, &j| candidate.step(s, map[j]));
        candidate.is_final(s)
    };
    let k = original.letter_count();
    let mut checked = 0u64;
    if candidate.is_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for v in vectors_up_to(k, opts.max_len) {
            let expected = ps.contains(&v);
            let mut word: Vec<usize> =
                v.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat_n(j, c)).collect();
            for round in 0..=opts.shuffles {
                if round > 0 {
                    word.shuffle(&mut rng);
                }
                checked += 1;
                if accepts(&word) != expected {
                    return Ok(Verification::Counterexample(word));
                }
            }
        }
    } else {
        let total: u128 = (0..=opts.max_len as u32).map(|l| (k as u128).saturating_pow(l)).sum();
        if total > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "{total} words up to length {}, budget {ENUMERATION_BUDGET}",
                opts.max_len
            )));
        }
        for len in 0..=opts.max_len {
            let mut word = vec![0; len];
            loop {
                checked += 1;
                if accepts(&word) != closure_membership_oracle(&ps, &word)? {
                    return Ok(Verification::Counterexample(word));
                }
                // next word of this length in lexicographic order
                let Some(pos) = word.iter().rposition(|&j| j + 1 < k) else { break };
                word[pos] += 1;
                word[pos + 1..].fill(0);
            }
        }
    }
    Ok(Verification::Pass { words_checked: checked })
}

/// All words over `k` letters of length at most `max_len`, shortest first.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max_len).flat_map(move |len| {
        let count = k.pow(len as u32);
        (0..count).map(move |mut code| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            w
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn vectors_enumeration() {
        let v = vectors_up_to(2, 2);
        assert_eq!(v, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(vectors_up_to(3, 4).len() as u128, binomial(7, 3));
    }

    #[test]
    fn parikh_sets_of_examples() {
        let p = samples::permutation_automaton();
        let ps = parikh_set(&p, 2).unwrap();
        assert!(ps.contains(&[0, 0]));
        assert!(ps.contains(&[1, 1]));
        assert!(!ps.contains(&[1, 0]));
        let g = samples::grid_automaton();
        let ps = parikh_set(&g, 4).unwrap();
        let expected: BTreeSet<Vec<usize>> = [vec![0, 0], vec![1, 1], vec![2, 2]].into_iter().collect();
        assert_eq!(ps.members, expected);
        let empty = Dfa::new(["a"], 1, 0, [], vec![vec![0]]).unwrap();
        assert!(parikh_set(&empty, 5).unwrap().members.is_empty());
    }

    #[test]
    fn membership_oracle() {
        let g = samples::grid_automaton();
        let ps = parikh_set(&g, 4).unwrap();
        assert!(closure_membership_oracle(&ps, &g.parse_word("a2 a1").unwrap()).unwrap());
        assert!(closure_membership_oracle(&ps, &[]).unwrap());
        let p = samples::permutation_automaton();
        let ps = parikh_set(&p, 4).unwrap();
        assert!(!closure_membership_oracle(&ps, &[0]).unwrap());
        assert!(matches!(
            closure_membership_oracle(&ps, &[0; 5]),
            Err(Error::LengthExceeded { len: 5, max_len: 4 })
        ));
    }

    #[test]
    fn jumping_examples() {
        let p = samples::permutation_automaton();
        assert!(jumping_accepts(&p, &p.parse_word("a2 a1").unwrap()).unwrap());
        assert!(jumping_accepts(&p, &[]).unwrap());
        assert!(!jumping_accepts(&p, &[0]).unwrap());
        let g = samples::grid_automaton();
        assert!(jumping_accepts(&g, &g.parse_word("a2 a2 a1 a1").unwrap()).unwrap());
        assert!(!jumping_accepts(&g, &g.parse_word("a2 a2 a1").unwrap()).unwrap());
    }

    #[test]
    fn corrupted_closure_yields_counterexample() {
        let p = samples::permutation_automaton();
        // accepts everything
        let all = Dfa::new(["a1", "a2"], 1, 0, [0], vec![vec![0], vec![0]]).unwrap();
        let v = verify_closure(&all, &p, &VerifyOptions::new(6)).unwrap();
        assert_eq!(v, Verification::Counterexample(vec![0]));
        // not commutative: accepts exactly words starting with a2
        let first_a2 = Dfa::new(["a1", "a2"], 3, 0, [1], vec![vec![2, 1, 2], vec![1, 1, 2]]).unwrap();
        assert!(!verify_closure(&first_a2, &p, &VerifyOptions::new(6)).unwrap().passed());
    }

    #[test]
    fn word_enumeration_counts() {
        assert_eq!(words_up_to(2, 3).count(), 1 + 2 + 4 + 8);
        assert_eq!(words_up_to(3, 2).nth(4), Some(vec![0, 0]));
    }
}
