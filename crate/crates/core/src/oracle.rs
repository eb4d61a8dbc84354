//! Brute-force reference searches used by the test suite to cross-check
//! the structured algorithms at small scale. Everything here enumerates
//! blindly and shares no machinery with the code it checks; absence of a
//! hit only means "not found within budget".

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::freeprod::{FreeProductSignature, Word};
use crate::sl2z::Sl2Matrix;

/// Caps for the enumeration searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Longest product of generator letters explored.
    pub max_word_length: usize,
    /// Matrices with any entry beyond this bound are pruned.
    pub max_matrix_entry: u64,
}

impl SearchBudget {
    pub fn new(max_word_length: usize, max_matrix_entry: u64) -> Self {
        assert!(max_word_length >= 1 && max_matrix_entry >= 1);
        SearchBudget {
            max_word_length,
            max_matrix_entry,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(10, 9)
    }
}

/// All reduced words expressible as products of at most
/// `budget.max_word_length` generators or inverse generators.
pub fn bfs_subgroup_elements(
    sig: &FreeProductSignature,
    generators: &[Word],
    budget: &SearchBudget,
) -> HashSet<Word> {
    let mut steps: Vec<Word> = Vec::new();
    for g in generators {
        steps.push(g.clone());
        steps.push(g.inverse(sig));
    }
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(Word::empty());
    let mut frontier: Vec<Word> = vec![Word::empty()];
    for _ in 0..budget.max_word_length {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &steps {
                let prod = w.concat(s, sig);
                if seen.insert(prod.clone()) {
                    next.push(prod);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

fn entry_bound(m: &Sl2Matrix) -> BigInt {
    m.entries()
        .iter()
        .map(|e| e.abs())
        .max()
        .expect("four entries")
}

/// Searches products of the standard generators for a matrix Q with
/// Q·A·Q⁻¹ = B, breadth-first with entry pruning.
pub fn brute_conjugator(a: &Sl2Matrix, b: &Sl2Matrix, budget: &SearchBudget) -> Option<Sl2Matrix> {
    let cap = BigInt::from(budget.max_matrix_entry);
    let steps = [
        Sl2Matrix::gen_s(),
        Sl2Matrix::gen_s().inverse(),
        Sl2Matrix::gen_t(),
        Sl2Matrix::gen_t().inverse(),
    ];
    let mut seen: HashSet<Sl2Matrix> = HashSet::new();
    seen.insert(Sl2Matrix::identity());
    let mut frontier = vec![Sl2Matrix::identity()];
    if a == b {
        return Some(Sl2Matrix::identity());
    }
    for _ in 0..budget.max_word_length {
        let mut next = Vec::new();
        for q in &frontier {
            for s in &steps {
                let candidate = q.mul(s);
                if entry_bound(&candidate) > cap {
                    continue;
                }
                if !seen.insert(candidate.clone()) {
                    continue;
                }
                if candidate.conjugate(a) == *b {
                    return Some(candidate);
                }
                next.push(candidate);
            }
        }
        frontier = next;
    }
    None
}

/// Searches coefficient tuples in [−bound, bound]ⁿ for an integer
/// combination of the generators equal to the target. Exponential in the
/// generator count; callers keep n small.
pub fn brute_lattice_member(
    target: &[BigInt; 2],
    generators: &[[BigInt; 2]],
    bound: u64,
) -> Option<Vec<BigInt>> {
    let n = generators.len();
    if n == 0 {
        return (target[0].is_zero() && target[1].is_zero()).then(Vec::new);
    }
    let side = 2 * bound + 1;
    let mut counter = vec![0u64; n];
    loop {
        let coeffs: Vec<BigInt> = counter
            .iter()
            .map(|&c| BigInt::from(c as i128 - bound as i128))
            .collect();
        let mut sum = [BigInt::zero(), BigInt::zero()];
        for (c, g) in coeffs.iter().zip(generators) {
            sum[0] += c * &g[0];
            sum[1] += c * &g[1];
        }
        if sum == *target {
            return Some(coeffs);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            counter[i] += 1;
            if counter[i] < side {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeprod;

    #[test]
    fn subgroup_enumeration_matches_small_cases() {
        let sig = FreeProductSignature::psl();
        let budget = SearchBudget::new(4, 9);
        let a = Word::parse("a", &sig).unwrap();
        let b = Word::parse("b", &sig).unwrap();
        let of_a = bfs_subgroup_elements(&sig, std::slice::from_ref(&a), &budget);
        assert_eq!(of_a.len(), 2);
        assert!(of_a.contains(&Word::empty()) && of_a.contains(&a));
        let of_b = bfs_subgroup_elements(&sig, std::slice::from_ref(&b), &budget);
        assert_eq!(of_b.len(), 3);
        assert!(of_b.contains(&Word::parse("b2", &sig).unwrap()));
        let ab = Word::parse("ab", &sig).unwrap();
        let of_ab = bfs_subgroup_elements(&sig, std::slice::from_ref(&ab), &budget);
        assert!(of_ab.contains(&Word::empty()));
        assert!(of_ab.contains(&ab));
        assert!(of_ab.contains(&Word::parse("b2a", &sig).unwrap()));
        assert!(of_ab.contains(&Word::parse("abab", &sig).unwrap()));
    }

    #[test]
    fn subgroup_enumeration_agrees_with_core_graph_membership() {
        let sig = FreeProductSignature::psl();
        let gens = [
            Word::parse("ab", &sig).unwrap(),
            Word::parse("b2a", &sig).unwrap(),
        ];
        let graph = freeprod::build(&sig, &gens).unwrap();
        for w in bfs_subgroup_elements(&sig, &gens, &SearchBudget::new(5, 9)) {
            assert!(
                freeprod::member(&graph, &w).is_some(),
                "{}",
                w.display(&sig)
            );
        }
    }

    #[test]
    fn conjugator_search_witnesses_and_gaps() {
        let budget = SearchBudget::default();
        let s = Sl2Matrix::gen_s();
        let t = Sl2Matrix::gen_t();
        assert_eq!(
            brute_conjugator(&t, &t, &budget),
            Some(Sl2Matrix::identity())
        );
        let moved = s.conjugate(&t);
        let q = brute_conjugator(&t, &moved, &budget).unwrap();
        assert_eq!(q.conjugate(&t), moved);
        let minus_s = Sl2Matrix::minus_identity().mul(&s);
        assert_eq!(brute_conjugator(&s, &minus_s, &budget), None);
        assert_eq!(brute_conjugator(&t, &t.inverse(), &budget), None);
    }

    #[test]
    fn lattice_search_matches_hand_cases() {
        let v = |x: i64, y: i64| [BigInt::from(x), BigInt::from(y)];
        assert_eq!(brute_lattice_member(&v(0, 0), &[], 9), Some(vec![]));
        assert_eq!(
            brute_lattice_member(&v(0, 0), &[v(1, 0), v(0, 1)], 3),
            Some(vec![BigInt::zero(), BigInt::zero()])
        );
        let hit = brute_lattice_member(&v(3, 3), &[v(1, 0), v(1, 1)], 4).unwrap();
        assert_eq!(hit, vec![BigInt::zero(), BigInt::from(3)]);
        assert_eq!(brute_lattice_member(&v(1, 1), &[v(2, 0), v(0, 2)], 9), None);
    }
}
