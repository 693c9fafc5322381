//! Small automata used throughout the documentation, tests and demo.

use crate::automata::Dfa;

/// Three-state permutation automaton over `{a1, a2}`: `a1` is the 3-cycle
/// `s0 -> s1 -> s2 -> s0`, `a2` swaps `s0` and `s1` and fixes `s2`.
/// Only `s0` is final.
pub fn permutation_automaton() -> Dfa {
    Dfa::new(["a1", "a2"], 3, 0, [0], vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
}

/// Minimal automaton of `(a1 a2)*` with sink `s2`. Its commutative closure
/// (equal letter counts) is not regular.
pub fn grid_automaton() -> Dfa {
    Dfa::new(["a1", "a2"], 3, 0, [0], vec![vec![1, 2, 2], vec![2, 0, 2]]).unwrap()
}

/// States `0..n`; `a1` swaps 0 and 1, `a2` is the rotation `x -> x+1 mod n`.
/// Start and only final state is 0.
pub fn transposition_rotation(n: usize) -> Dfa {
    assert!(n >= 1);
    let swap = (0..n)
        .map(|x| match x {
            0 if n > 1 => 1,
            1 => 0,
            x => x,
        })
        .collect();
    let rot = (0..n).map(|x| (x + 1) % n).collect();
    Dfa::new(["a1", "a2"], n, 0, [0], vec![swap, rot]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_letter_orders() {
        for n in 2..6 {
            let d = transposition_rotation(n);
            assert!(d.is_permutation_automaton());
            assert_eq!(d.letter_order(0).unwrap(), 2);
            assert_eq!(d.letter_order(1).unwrap(), n as u64);
        }
        assert!(transposition_rotation(1).is_permutation_automaton());
    }
}
