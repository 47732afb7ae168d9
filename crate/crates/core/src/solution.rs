//! Finite solutions as a pair of n×n tables of permutation rows, with
//! axiom verification, property classification, and (iso)morphism search.
//!
//! Conventions: `sigma[x]` is the row of the permutation σₓ and `tau[y]`
//! the row of τ_y acting on the first argument, so
//! `r(x, y) = (sigma[x][y], tau[y][x])`.

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::structure::{self, Mpl};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    n: usize,
    sigma: Vec<Vec<usize>>,
    tau: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Solution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Solution(n={})", self.n)?;
        for x in 0..self.n {
            writeln!(f, "  sigma {x}: {:?}", self.sigma[x])?;
        }
        for x in 0..self.n {
            writeln!(f, "  tau {x}: {:?}", self.tau[x])?;
        }
        Ok(())
    }
}

/// Outcome of the braid and non-degeneracy checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub braid_ok: bool,
    pub nondegenerate_ok: bool,
    pub first_braid_violation: Option<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.braid_ok && self.nondegenerate_ok
    }
}

/// Classification flags of a verified solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub involutive: bool,
    pub square_free: bool,
    pub two_reductive: bool,
    pub two_permutational: bool,
    pub mpl: Mpl,
    /// Common cycle length of all σₓ, when uniform.
    pub cycle_len_sigma: Option<usize>,
    /// Common cycle length of all τₓ, when uniform.
    pub cycle_len_tau: Option<usize>,
}

impl Solution {
    /// Builds a solution from raw tables, checking shape and range only
    /// (bijectivity and the braid relation are checked by
    /// [`Solution::verify_axioms`]).
    pub fn from_tables(sigma: Vec<Vec<usize>>, tau: Vec<Vec<usize>>) -> Result<Solution> {
        let n = sigma.len();
        if tau.len() != n {
            return Err(Error::Structure(format!(
                "sigma has {n} rows but tau has {}",
                tau.len()
            )));
        }
        if n == 0 {
            return Err(Error::Structure("empty solution".into()));
        }
        for (name, table) in [("sigma", &sigma), ("tau", &tau)] {
            for (x, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Structure(format!(
                        "{name} row {x} has length {} != {n}",
                        row.len()
                    )));
                }
                if let Some(&v) = row.iter().find(|&&v| v >= n) {
                    return Err(Error::Structure(format!(
                        "{name} row {x} contains value {v} out of range 0..{n}"
                    )));
                }
            }
        }
        Ok(Solution { n, sigma, tau })
    }

    /// Builds a solution from permutation rows.
    pub fn from_perm_rows(sigma: Vec<Perm>, tau: Vec<Perm>) -> Result<Solution> {
        Solution::from_tables(
            sigma.into_iter().map(|p| p.images().to_vec()).collect(),
            tau.into_iter().map(|p| p.images().to_vec()).collect(),
        )
    }

    pub fn one_point() -> Solution {
        Solution { n: 1, sigma: vec![vec![0]], tau: vec![vec![0]] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma_row(&self, x: usize) -> &[usize] {
        &self.sigma[x]
    }

    pub fn tau_row(&self, x: usize) -> &[usize] {
        &self.tau[x]
    }

    /// σₓ as a permutation. Requires a non-degenerate row.
    pub fn sigma_perm(&self, x: usize) -> Perm {
        Perm::from_images(self.sigma[x].clone()).expect("sigma row is not a permutation")
    }

    /// τₓ as a permutation. Requires a non-degenerate row.
    pub fn tau_perm(&self, x: usize) -> Perm {
        Perm::from_images(self.tau[x].clone()).expect("tau row is not a permutation")
    }

    /// `r(x, y) = (σₓ(y), τ_y(x))`.
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x][y], self.tau[y][x])
    }

    /// Checks non-degeneracy and the braid relation on all of X³.
    pub fn verify_axioms(&self) -> AxiomReport {
        let nondegenerate_ok = self.rows_bijective();
        if !nondegenerate_ok {
            return AxiomReport {
                braid_ok: false,
                nondegenerate_ok,
                first_braid_violation: None,
            };
        }
        let mut first = None;
        'outer: for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    if self.braid_lhs(x, y, z) != self.braid_rhs(x, y, z) {
                        first = Some((x, y, z));
                        break 'outer;
                    }
                }
            }
        }
        AxiomReport {
            braid_ok: first.is_none(),
            nondegenerate_ok,
            first_braid_violation: first,
        }
    }

    fn rows_bijective(&self) -> bool {
        let ok = |row: &Vec<usize>| {
            let mut seen = vec![false; self.n];
            row.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        };
        self.sigma.iter().all(ok) && self.tau.iter().all(ok)
    }

    /// (id×r)(r×id)(id×r) applied to (x, y, z).
    fn braid_lhs(&self, x: usize, y: usize, z: usize) -> (usize, usize, usize) {
        let (b, c) = self.r(y, z);
        let (a, b) = self.r(x, b);
        let (b, c) = self.r(b, c);
        (a, b, c)
    }

    /// (r×id)(id×r)(r×id) applied to (x, y, z).
    fn braid_rhs(&self, x: usize, y: usize, z: usize) -> (usize, usize, usize) {
        let (a, b) = self.r(x, y);
        let (b, c) = self.r(b, z);
        let (a, b) = self.r(a, b);
        (a, b, c)
    }

    /// Errs with an axiom failure unless `verify_axioms` passes.
    pub fn ensure_verified(&self) -> Result<()> {
        let report = self.verify_axioms();
        if !report.nondegenerate_ok {
            return Err(Error::Axiom("solution is degenerate".into()));
        }
        if let Some(t) = report.first_braid_violation {
            return Err(Error::Axiom(format!("braid relation fails at {t:?}")));
        }
        Ok(())
    }

    /// Whether x and y have identical σ- and τ-rows (the retraction
    /// relation ≈).
    pub fn rows_equal(&self, x: usize, y: usize) -> bool {
        self.sigma[x] == self.sigma[y] && self.tau[x] == self.tau[y]
    }

    /// Generators of the permutation group G(X) = ⟨σₓ, τₓ⟩.
    pub fn group_generators(&self) -> Vec<Perm> {
        (0..self.n)
            .map(|x| self.sigma_perm(x))
            .chain((0..self.n).map(|x| self.tau_perm(x)))
            .collect()
    }

    /// Whether G(X) acts transitively.
    pub fn is_indecomposable(&self) -> bool {
        crate::permgroup::orbits(&self.group_generators(), self.n).len() == 1
    }
}

/// Diagonal maps `U(x) = σₓ⁻¹(x)` and `T(x) = τₓ⁻¹(x)`; they always
/// commute, which is asserted.
pub fn diagonal_maps(s: &Solution) -> (Perm, Perm) {
    let n = s.n();
    let mut u = vec![0; n];
    let mut t = vec![0; n];
    for x in 0..n {
        u[x] = s.sigma_row(x).iter().position(|&v| v == x).expect("non-degenerate row");
        t[x] = s.tau_row(x).iter().position(|&v| v == x).expect("non-degenerate row");
    }
    let u = Perm::from_images(u).expect("U is a permutation");
    let t = Perm::from_images(t).expect("T is a permutation");
    assert!(u.commutes_with(&t), "diagonal maps must commute");
    (u, t)
}

/// Derived actions `Lₓ = σₓ∘U` and `Rₓ = τₓ∘T` as permutation rows.
pub fn derived_actions(s: &Solution) -> (Vec<Perm>, Vec<Perm>) {
    let (u, t) = diagonal_maps(s);
    let l = (0..s.n()).map(|x| s.sigma_perm(x).compose(&u)).collect();
    let r = (0..s.n()).map(|x| s.tau_perm(x).compose(&t)).collect();
    (l, r)
}

/// Classifies a verified solution. The involutivity flag is computed from
/// `r² = id` and cross-checked against the diagonal-map criterion
/// (`U = T⁻¹` and `(σₓU)⁻¹ = τₓT`); the two must agree.
pub fn classify_properties(s: &Solution) -> PropertyReport {
    let n = s.n();
    let involutive = (0..n).all(|x| {
        (0..n).all(|y| {
            let (a, b) = s.r(x, y);
            s.r(a, b) == (x, y)
        })
    });
    let (u, t) = diagonal_maps(s);
    let by_criterion = u == t.inverse()
        && (0..n).all(|x| {
            s.sigma_perm(x).compose(&u).inverse() == s.tau_perm(x).compose(&t)
        });
    assert_eq!(
        involutive, by_criterion,
        "involutivity criterion disagrees with direct r² check"
    );

    let square_free = (0..n).all(|x| s.r(x, x) == (x, x));
    let (two_reductive, two_permutational) = structure::reductivity_flags(s);
    let mpl = structure::mpl(s);

    PropertyReport {
        involutive,
        square_free,
        two_reductive,
        two_permutational,
        mpl,
        cycle_len_sigma: uniform_cycle_len(s, true),
        cycle_len_tau: uniform_cycle_len(s, false),
    }
}

fn uniform_cycle_len(s: &Solution, sigma_side: bool) -> Option<usize> {
    let mut common: Option<usize> = None;
    for x in 0..s.n() {
        let p = if sigma_side { s.sigma_perm(x) } else { s.tau_perm(x) };
        for len in p.cycle_lengths() {
            match common {
                None => common = Some(len),
                Some(c) if c != len => return None,
                _ => {}
            }
        }
    }
    common
}

/// A map between solutions, candidate for being a homomorphism.
#[derive(Clone, Debug)]
pub struct SolutionMap {
    pub source: Solution,
    pub target: Solution,
    pub images: Vec<usize>,
}

impl SolutionMap {
    pub fn new(source: Solution, target: Solution, images: Vec<usize>) -> Result<SolutionMap> {
        if images.len() != source.n() {
            return Err(Error::Structure(format!(
                "map has {} images for {} source elements",
                images.len(),
                source.n()
            )));
        }
        if let Some(&v) = images.iter().find(|&&v| v >= target.n()) {
            return Err(Error::Structure(format!(
                "image {v} out of range 0..{}",
                target.n()
            )));
        }
        Ok(SolutionMap { source, target, images })
    }

    pub fn identity(s: &Solution) -> SolutionMap {
        SolutionMap {
            source: s.clone(),
            target: s.clone(),
            images: (0..s.n()).collect(),
        }
    }

    /// Φλ_y = σ_{Φ(y)}Φ and Φρ_y = τ_{Φ(y)}Φ at every pair.
    pub fn is_homomorphism(&self) -> bool {
        let phi = &self.images;
        for y in 0..self.source.n() {
            for z in 0..self.source.n() {
                if phi[self.source.sigma_row(y)[z]]
                    != self.target.sigma_row(phi[y])[phi[z]]
                {
                    return false;
                }
                if phi[self.source.tau_row(y)[z]] != self.target.tau_row(phi[y])[phi[z]] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.n()];
        for &v in &self.images {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.n() == self.target.n() && self.is_surjective()
    }
}

/// Extends the seed `y0 ↦ x0` to the unique homomorphism, by propagating
/// images under σ, τ and their inverses until a fixpoint; returns `None`
/// when the propagation derives a contradiction (or fails to cover the
/// source, which cannot happen for indecomposable sources of level ≤ 2).
pub fn extend_hom_from_seed(
    src: &Solution,
    dst: &Solution,
    y0: usize,
    x0: usize,
) -> Option<SolutionMap> {
    let n = src.n();
    const UNSET: usize = usize::MAX;
    let mut phi = vec![UNSET; n];
    phi[y0] = x0;
    let mut known = vec![y0];

    let src_sigma_inv: Vec<Perm> = (0..n).map(|x| src.sigma_perm(x).inverse()).collect();
    let src_tau_inv: Vec<Perm> = (0..n).map(|x| src.tau_perm(x).inverse()).collect();
    let dst_sigma_inv: Vec<Perm> = (0..dst.n()).map(|x| dst.sigma_perm(x).inverse()).collect();
    let dst_tau_inv: Vec<Perm> = (0..dst.n()).map(|x| dst.tau_perm(x).inverse()).collect();

    loop {
        let mut changed = false;
        // Propagate over all currently-known index/operand pairs.
        let snapshot = known.clone();
        for &y in &snapshot {
            for &z in &snapshot {
                let (py, pz) = (phi[y], phi[z]);
                let derived = [
                    (src.sigma_row(y)[z], dst.sigma_row(py)[pz]),
                    (src.tau_row(y)[z], dst.tau_row(py)[pz]),
                    (src_sigma_inv[y].apply(z), dst_sigma_inv[py].apply(pz)),
                    (src_tau_inv[y].apply(z), dst_tau_inv[py].apply(pz)),
                ];
                for (p, q) in derived {
                    if phi[p] == UNSET {
                        phi[p] = q;
                        known.push(p);
                        changed = true;
                    } else if phi[p] != q {
                        return None;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if phi.iter().any(|&v| v == UNSET) {
        return None;
    }
    let map = SolutionMap {
        source: src.clone(),
        target: dst.clone(),
        images: phi,
    };
    debug_assert!(map.is_homomorphism());
    Some(map)
}

/// Per-element signature used to prune isomorphism search.
fn signature(s: &Solution, x: usize) -> (Vec<usize>, Vec<usize>) {
    (s.sigma_perm(x).cycle_lengths(), s.tau_perm(x).cycle_lengths())
}

fn backtracking_isomorphism(a: &Solution, b: &Solution) -> Option<SolutionMap> {
    let n = a.n();
    let sig_a: Vec<_> = (0..n).map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| signature(b, x)).collect();

    fn consistent(a: &Solution, b: &Solution, phi: &[usize], x: usize) -> bool {
        const UNSET: usize = usize::MAX;
        let n = a.n();
        for y in 0..n {
            if phi[y] == UNSET {
                continue;
            }
            for (p, q) in [(x, y), (y, x)] {
                if phi[p] == UNSET || phi[q] == UNSET {
                    continue;
                }
                let sp = a.sigma_row(p)[q];
                if phi[sp] != UNSET && phi[sp] != b.sigma_row(phi[p])[phi[q]] {
                    return false;
                }
                let tp = a.tau_row(p)[q];
                if phi[tp] != UNSET && phi[tp] != b.tau_row(phi[p])[phi[q]] {
                    return false;
                }
            }
        }
        true
    }

    fn rec(
        a: &Solution,
        b: &Solution,
        sig_a: &[(Vec<usize>, Vec<usize>)],
        sig_b: &[(Vec<usize>, Vec<usize>)],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        x: usize,
    ) -> bool {
        const UNSET: usize = usize::MAX;
        let n = a.n();
        if x == n {
            return true;
        }
        for img in 0..n {
            if used[img] || sig_a[x] != sig_b[img] {
                continue;
            }
            phi[x] = img;
            used[img] = true;
            if consistent(a, b, phi, x) && rec(a, b, sig_a, sig_b, phi, used, x + 1) {
                return true;
            }
            phi[x] = UNSET;
            used[img] = false;
        }
        false
    }

    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if rec(a, b, &sig_a, &sig_b, &mut phi, &mut used, 0) {
        let map = SolutionMap {
            source: a.clone(),
            target: b.clone(),
            images: phi,
        };
        debug_assert!(map.is_homomorphism());
        Some(map)
    } else {
        None
    }
}

/// Searches for an isomorphism. Uses seed extension (fix 0 in the source,
/// try every target point) when both solutions are indecomposable of
/// multipermutation level ≤ 2, and backtracking with cycle-type pruning
/// otherwise.
pub fn are_isomorphic(a: &Solution, b: &Solution) -> Option<SolutionMap> {
    if a.n() != b.n() {
        return None;
    }
    let fast = a.is_indecomposable()
        && b.is_indecomposable()
        && matches!(structure::mpl(a), Mpl::Level(k) if k <= 2)
        && matches!(structure::mpl(b), Mpl::Level(k) if k <= 2);
    if fast {
        for x0 in 0..b.n() {
            if let Some(map) = extend_hom_from_seed(a, b, 0, x0) {
                if map.is_bijective() && map.is_homomorphism() {
                    return Some(map);
                }
            }
        }
        None
    } else {
        backtracking_isomorphism(a, b)
    }
}

/// Partitions a list of verified solutions into isomorphism classes;
/// each class lists indices into the input, classes ordered by their
/// least member.
pub fn isomorphism_classes(solutions: &[Solution]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, s) in solutions.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if are_isomorphic(&solutions[class[0]], s).is_some() {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::fixtures::involutive_four_point as example_2_3;

    #[test]
    fn one_point_solution_verifies() {
        let s = Solution::one_point();
        let rep = s.verify_axioms();
        assert!(rep.braid_ok && rep.nondegenerate_ok);
    }

    #[test]
    fn example_2_3_verifies_and_is_involutive() {
        let s = example_2_3();
        let rep = s.verify_axioms();
        assert!(rep.braid_ok, "violation: {:?}", rep.first_braid_violation);
        assert!(rep.nondegenerate_ok);
        let props = classify_properties(&s);
        assert!(props.involutive);
        assert!(!props.two_permutational);
    }

    #[test]
    fn braid_violation_is_recorded() {
        // σ₀ = σ₁ = id, τ₀ = id, τ₁ = (0,1): braid fails first at (0,0,1).
        let s = Solution::from_tables(
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let rep = s.verify_axioms();
        assert!(!rep.braid_ok);
        assert!(rep.nondegenerate_ok);
        assert_eq!(rep.first_braid_violation, Some((0, 0, 1)));
    }

    #[test]
    fn degenerate_rows_reported() {
        let s = Solution::from_tables(
            vec![vec![0, 0], vec![0, 1]],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let rep = s.verify_axioms();
        assert!(!rep.nondegenerate_ok);
    }

    #[test]
    fn malformed_tables_are_structural_errors() {
        assert!(matches!(
            Solution::from_tables(vec![vec![0, 1]], vec![vec![0]]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            Solution::from_tables(vec![vec![2]], vec![vec![0]]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn example_2_3_diagonal_maps() {
        let s = example_2_3();
        let (u, t) = diagonal_maps(&s);
        assert_eq!(t, Perm::from_cycles(4, &[vec![0, 1, 3, 2]]).unwrap());
        assert_eq!(u, t.inverse()); // involutive
    }

    #[test]
    fn square_free_solution_has_identity_diagonals() {
        // Trivial projection solution on 3 points: σₓ = τₓ = id.
        let id = vec![0, 1, 2];
        let s = Solution::from_tables(vec![id.clone(); 3], vec![id; 3]).unwrap();
        assert!(s.verify_axioms().ok());
        let (u, t) = diagonal_maps(&s);
        assert!(u.is_identity() && t.is_identity());
        let (l, r) = derived_actions(&s);
        for x in 0..3 {
            assert_eq!(l[x], s.sigma_perm(x));
            assert_eq!(r[x], s.tau_perm(x));
        }
    }

    #[test]
    fn example_2_3_derived_action_composes_tables() {
        let s = example_2_3();
        let (u, _) = diagonal_maps(&s);
        let (l, _) = derived_actions(&s);
        assert_eq!(l[0], s.sigma_perm(0).compose(&u));
    }

    #[test]
    fn identity_and_constant_maps_are_homomorphisms() {
        let s = example_2_3();
        assert!(SolutionMap::identity(&s).is_homomorphism());
        let one = Solution::one_point();
        let constant = SolutionMap::new(s.clone(), one, vec![0; 4]).unwrap();
        assert!(constant.is_homomorphism());
    }

    #[test]
    fn seed_extension_identity() {
        let s = example_2_3();
        let map = extend_hom_from_seed(&s, &s, 0, 0).unwrap();
        assert_eq!(map.images, vec![0, 1, 2, 3]);
    }

    #[test]
    fn one_solution_one_class() {
        let s = example_2_3();
        assert_eq!(isomorphism_classes(&[s]), vec![vec![0]]);
    }
}
