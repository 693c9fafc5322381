//! Seeded generators of random automata for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::Dfa;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn alphabet(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("a{j}")).collect()
}

fn random_finals<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(0.4)).collect()
}

/// Every letter is a uniformly random permutation of `0..n`.
pub fn random_permutation_automaton<R: Rng>(rng: &mut R, n: usize, k: usize) -> Dfa {
    let delta = (0..k)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let finals = random_finals(rng, n);
    Dfa::new(alphabet(k), n, 0, finals, delta).expect("valid random automaton")
}

/// Uniformly random transition targets.
pub fn random_dfa<R: Rng>(rng: &mut R, n: usize, k: usize) -> Dfa {
    let delta = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..n)).collect()).collect();
    let finals = random_finals(rng, n);
    Dfa::new(alphabet(k), n, 0, finals, delta).expect("valid random automaton")
}
