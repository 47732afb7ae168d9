//! Small well-known solutions, handy for tests and experimentation.

use crate::perm::Perm;
use crate::solution::Solution;

/// A 4-element involutive solution whose group ⟨σₓ, τₓ⟩ is the full
/// symmetric group while ⟨σₓ⟩ has only 8 elements. Not 2-permutational.
pub fn involutive_four_point() -> Solution {
    let n = 4;
    let sigma = vec![
        Perm::from_cycles(n, &[vec![0, 2]]).unwrap(),
        Perm::from_cycles(n, &[vec![0, 1, 2, 3]]).unwrap(),
        Perm::from_cycles(n, &[vec![3, 2, 1, 0]]).unwrap(),
        Perm::from_cycles(n, &[vec![1, 3]]).unwrap(),
    ];
    let tau = vec![
        Perm::from_cycles(n, &[vec![0, 1]]).unwrap(),
        Perm::from_cycles(n, &[vec![0, 3, 1, 2]]).unwrap(),
        Perm::from_cycles(n, &[vec![0, 2, 1, 3]]).unwrap(),
        Perm::from_cycles(n, &[vec![2, 3]]).unwrap(),
    ];
    Solution::from_perm_rows(sigma, tau).unwrap()
}

/// The permutation solution σₓ = p, τₓ = q on n points; a solution exactly
/// when p and q commute.
pub fn permutation_solution(n: usize, p: &Perm, q: &Perm) -> Solution {
    Solution::from_tables(vec![p.images().to_vec(); n], vec![q.images().to_vec(); n])
        .expect("valid tables")
}

/// The projection solution r(x, y) = (y, x) on n points (σₓ = τₓ = id).
pub fn trivial_solution(n: usize) -> Solution {
    let id = Perm::identity(n);
    permutation_solution(n, &id, &id)
}
