//! Finite permutation groups by explicit element closure, orbits,
//! stabilizers, the five groups attached to a solution, and the
//! abelian coset-group structure used for quotients like Dis(X)/Dis(X)_e.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::solution::{diagonal_maps, Solution};

/// Default cap on the number of elements a closure may produce.
pub const CLOSURE_CAP: usize = 1_000_000;

/// A finite permutation group with its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// All elements, sorted lexicographically by image array.
    elements: Vec<Perm>,
}

/// Breadth-first closure of the generators under composition. Fails with a
/// resource error when more than `cap` elements appear.
pub fn closure_capped(generators: &[Perm], degree: usize, cap: usize) -> Result<PermGroup> {
    for g in generators {
        assert_eq!(g.degree(), degree, "generator degree mismatch");
    }
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::Resource(format!(
                        "group closure exceeded {cap} elements"
                    )));
                }
                frontier.push(q);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Ok(PermGroup {
        degree,
        generators: generators.to_vec(),
        elements,
    })
}

pub fn closure(generators: &[Perm], degree: usize) -> PermGroup {
    closure_capped(generators, degree, CLOSURE_CAP).expect("closure cap exceeded")
}

impl PermGroup {
    pub fn trivial(degree: usize) -> PermGroup {
        closure(&[], degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Same element set (generators may differ).
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.elements == other.elements
    }

    pub fn is_abelian(&self) -> bool {
        // Pairwise commuting generators suffice.
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Whether conjugation by every generator of `big` keeps this group's
    /// element set fixed.
    pub fn is_normal_in(&self, big: &PermGroup) -> bool {
        big.generators.iter().all(|g| {
            let gi = g.inverse();
            self.elements
                .iter()
                .all(|p| self.contains(&g.compose(p).compose(&gi)))
        })
    }

    /// Elements fixing the given point.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        assert!(point < self.degree, "point out of range");
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|p| p.apply(point) == point)
            .cloned()
            .collect();
        PermGroup {
            degree: self.degree,
            generators: elements.clone(),
            elements,
        }
    }

    /// Intersection as element sets.
    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        PermGroup {
            degree: self.degree,
            generators: elements.clone(),
            elements,
        }
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        orbit_of_point(&self.generators, self.degree, point)
    }
}

fn orbit_of_point(generators: &[Perm], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut stack = vec![point];
    let mut orbit = vec![point];
    while let Some(p) = stack.pop() {
        for g in generators {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                orbit.push(q);
                stack.push(q);
            }
        }
    }
    orbit.sort_unstable();
    orbit
}

/// Orbit partition of `{0..degree-1}`, each orbit sorted, orbits ordered by
/// least element.
pub fn orbits(generators: &[Perm], degree: usize) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for p in 0..degree {
        if assigned[p] {
            continue;
        }
        let orbit = orbit_of_point(generators, degree, p);
        for &q in &orbit {
            assigned[q] = true;
        }
        out.push(orbit);
    }
    out
}

pub fn is_transitive(generators: &[Perm], degree: usize) -> bool {
    orbits(generators, degree).len() == 1
}

/// The five permutation groups attached to a verified solution.
#[derive(Clone, Debug)]
pub struct SolutionGroups {
    /// G(X) = ⟨σₓ, τₓ⟩
    pub g: PermGroup,
    /// D(X) = ⟨U, T⟩
    pub d: PermGroup,
    /// LR(X) = ⟨σₓU, τₓT⟩
    pub lr: PermGroup,
    /// Dis(X) = ⟨σₓσ_y⁻¹, τₓτ_y⁻¹⟩
    pub dis: PermGroup,
    /// GD(X) = ⟨σₓ, τₓ, U, T⟩
    pub gd: PermGroup,
}

pub fn solution_groups(s: &Solution) -> Result<SolutionGroups> {
    solution_groups_capped(s, CLOSURE_CAP)
}

pub fn solution_groups_capped(s: &Solution, cap: usize) -> Result<SolutionGroups> {
    let n = s.n();
    let (u, t) = diagonal_maps(s);
    let sigma: Vec<Perm> = (0..n).map(|x| s.sigma_perm(x)).collect();
    let tau: Vec<Perm> = (0..n).map(|x| s.tau_perm(x)).collect();

    let g_gens: Vec<Perm> = sigma.iter().chain(tau.iter()).cloned().collect();
    let d_gens = vec![u.clone(), t.clone()];
    let lr_gens: Vec<Perm> = sigma
        .iter()
        .map(|p| p.compose(&u))
        .chain(tau.iter().map(|p| p.compose(&t)))
        .collect();
    // σₓσ_y⁻¹ = (σₓσ₀⁻¹)(σ_yσ₀⁻¹)⁻¹, so reference rows against row 0.
    let s0_inv = sigma[0].inverse();
    let t0_inv = tau[0].inverse();
    let dis_gens: Vec<Perm> = sigma
        .iter()
        .map(|p| p.compose(&s0_inv))
        .chain(tau.iter().map(|p| p.compose(&t0_inv)))
        .collect();
    let gd_gens: Vec<Perm> = g_gens.iter().cloned().chain(d_gens.iter().cloned()).collect();

    Ok(SolutionGroups {
        g: closure_capped(&g_gens, n, cap)?,
        d: closure_capped(&d_gens, n, cap)?,
        lr: closure_capped(&lr_gens, n, cap)?,
        dis: closure_capped(&dis_gens, n, cap)?,
        gd: closure_capped(&gd_gens, n, cap)?,
    })
}

/// The coset group of an abelian permutation group modulo a stabilizer (or
/// any subgroup), with invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct CosetGroupStructure {
    /// Canonical coset representatives (least element of each coset),
    /// sorted; index = coset number.
    pub cosets: Vec<Perm>,
    /// Invariant factors m₁ | m₂ | … of the coset group (all > 1).
    pub moduli: Vec<i64>,
    to_vector: HashMap<Perm, Vec<i64>>,
    from_vector: HashMap<Vec<i64>, Perm>,
}

impl CosetGroupStructure {
    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    /// Coordinates of the coset of a group element.
    pub fn to_vector(&self, p: &Perm) -> Vec<i64> {
        self.to_vector
            .get(p)
            .unwrap_or_else(|| panic!("element not in the group: {p}"))
            .clone()
    }

    /// The canonical representative of the coset with given coordinates.
    pub fn from_vector(&self, v: &[i64]) -> Perm {
        let g = crate::abelian::FinAbGroup::new(self.moduli.clone()).unwrap();
        self.from_vector
            .get(&g.reduce(v))
            .unwrap_or_else(|| panic!("bad coordinate vector {v:?}"))
            .clone()
    }

    pub fn group(&self) -> crate::abelian::FinAbGroup {
        crate::abelian::FinAbGroup::new(self.moduli.clone()).unwrap()
    }
}

/// Computes the invariant-factor structure of `gp/stab` for an abelian
/// `gp`. The basis is extracted by repeatedly splitting off an element of
/// maximal order (lexicographically least representative among ties), with
/// each basis element adjusted so its order in the quotient equals the
/// order of its cyclic factor.
pub fn abelian_coset_structure(gp: &PermGroup, stab: &PermGroup) -> Result<CosetGroupStructure> {
    if !gp.is_abelian() {
        return Err(Error::Contract(
            "abelian_coset_structure requires an abelian group".into(),
        ));
    }
    if !stab.is_subgroup_of(gp) {
        return Err(Error::Contract("stab is not a subgroup".into()));
    }

    // Coset representative = least element of the coset p·stab.
    let stab_set: HashSet<Perm> = stab.elements().iter().cloned().collect();
    let rep = |p: &Perm| -> Perm {
        stab.elements()
            .iter()
            .map(|s| p.compose(s))
            .min()
            .expect("stab nonempty")
    };
    let mut cosets: Vec<Perm> = Vec::new();
    {
        let mut seen: HashSet<Perm> = HashSet::new();
        for p in gp.elements() {
            if seen.contains(p) {
                continue;
            }
            let r = rep(p);
            for s in stab.elements() {
                seen.insert(p.compose(s));
            }
            cosets.push(r);
        }
    }
    cosets.sort();

    let id_coset = rep(&Perm::identity(gp.degree()));
    // Order of a coset in the quotient.
    let coset_order = |p: &Perm| -> i64 {
        let mut q = p.clone();
        let mut k = 1i64;
        while !stab_set.contains(&q) {
            q = q.compose(p);
            k += 1;
        }
        k
    };

    // Greedy basis extraction over the quotient.
    let mut basis: Vec<Perm> = Vec::new();
    let mut orders: Vec<i64> = Vec::new();
    // Subgroup of the quotient currently generated by the basis, as a set
    // of canonical reps.
    let mut generated: HashSet<Perm> = HashSet::new();
    generated.insert(id_coset.clone());

    while generated.len() < cosets.len() {
        // Maximal order modulo the generated subgroup; tie-break on the
        // lexicographically least canonical representative.
        let mut best: Option<(i64, Perm)> = None;
        for p in &cosets {
            if generated.contains(p) {
                continue;
            }
            // order of p modulo <generated>: least k with p^k in generated
            let mut q = p.clone();
            let mut k = 1i64;
            while !generated.contains(&rep(&q)) {
                q = q.compose(p);
                k += 1;
            }
            match &best {
                None => best = Some((k, p.clone())),
                Some((bk, bp)) => {
                    if k > *bk || (k == *bk && p < bp) {
                        best = Some((k, p.clone()));
                    }
                }
            }
        }
        let (k, p) = best.expect("quotient not yet generated");
        // Adjust p so its order in the quotient is exactly k: p^k lies in
        // the generated subgroup; divide out a k-th root of it. Because the
        // first basis element has maximal (exponent) order, a root always
        // exists among the generated elements.
        let pk = p.pow(k);
        let mut adjusted = None;
        'search: for candidate in subgroup_elements(&basis, &orders, gp.degree()) {
            let root_k = candidate.pow(k);
            if rep(&root_k.compose(&pk)).eq(&id_coset) || stab_set.contains(&root_k.compose(&pk)) {
                adjusted = Some(p.compose(&candidate));
                break 'search;
            }
        }
        let p = adjusted.unwrap_or_else(|| p.clone());
        debug_assert_eq!(coset_order(&p), k, "basis adjustment failed");

        basis.push(p);
        orders.push(k);
        // Regenerate the span.
        generated = subgroup_elements(&basis, &orders, gp.degree())
            .into_iter()
            .map(|q| rep(&q))
            .collect();
    }

    // Exponent-first extraction yields divisibility m₁ ≥ m₂ ≥ …; the
    // published coordinates use ascending invariant factors.
    basis.reverse();
    orders.reverse();

    let quotient_group = crate::abelian::FinAbGroup::new(orders.clone())?;
    let mut from_vector = HashMap::new();
    let mut to_vector = HashMap::new();
    let total = quotient_group.order() as usize;
    debug_assert_eq!(total, cosets.len(), "basis does not span the quotient");
    for r in 0..total {
        let v = quotient_group.rank_to_vec(r);
        let mut acc = Perm::identity(gp.degree());
        for (x, b) in v.iter().zip(&basis) {
            acc = acc.compose(&b.pow(*x));
        }
        let canon = rep(&acc);
        from_vector.insert(v.clone(), canon.clone());
        for s in stab.elements() {
            to_vector.insert(acc.compose(s), v.clone());
        }
    }
    // every group element must have coordinates
    for p in gp.elements() {
        debug_assert!(to_vector.contains_key(p), "element missed by coordinates");
    }

    Ok(CosetGroupStructure {
        cosets,
        moduli: orders,
        to_vector,
        from_vector,
    })
}

/// All products of powers of the basis elements.
fn subgroup_elements(basis: &[Perm], orders: &[i64], degree: usize) -> Vec<Perm> {
    let mut out = vec![Perm::identity(degree)];
    for (b, &o) in basis.iter().zip(orders) {
        let mut next = Vec::with_capacity(out.len() * o as usize);
        let mut pow = Perm::identity(degree);
        for _ in 0..o {
            for p in &out {
                next.push(p.compose(&pow));
            }
            pow = pow.compose(b);
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_identity_and_cycle() {
        assert_eq!(closure(&[Perm::identity(4)], 4).order(), 1);
        let c = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(closure(&[c], 4).order(), 4);
    }

    #[test]
    fn closure_cap_fails_fast() {
        let c = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        assert!(matches!(
            closure_capped(&[c, t], 5, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn orbits_of_identity_are_singletons() {
        assert_eq!(
            orbits(&[Perm::identity(3)], 3),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn stabilizer_orbit_sizes() {
        let c = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let g = closure(&[c], 4);
        let st = g.stabilizer(0);
        assert_eq!(st.order(), 1);
        assert_eq!(g.orbit_of(0).len() * st.order(), g.order());
    }

    #[test]
    fn trivial_coset_structure() {
        let g = PermGroup::trivial(3);
        let st = PermGroup::trivial(3);
        let cs = abelian_coset_structure(&g, &st).unwrap();
        assert!(cs.moduli.is_empty());
        assert_eq!(cs.order(), 1);
    }

    #[test]
    fn coset_structure_of_z6_like_group() {
        // <(0,1,2)(3,4), id> acting on 5 points: cyclic of order 6.
        let p = Perm::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        let g = closure(&[p.clone()], 5);
        assert_eq!(g.order(), 6);
        let cs = abelian_coset_structure(&g, &PermGroup::trivial(5)).unwrap();
        assert_eq!(cs.moduli, vec![6]);
        let v = cs.to_vector(&p);
        let back = cs.from_vector(&v);
        assert_eq!(back, p);
        // to/from are mutually inverse on all elements
        for e in g.elements() {
            assert_eq!(&cs.from_vector(&cs.to_vector(e)), e);
        }
    }

    #[test]
    fn coset_structure_klein_group() {
        let a = Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let b = Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let g = closure(&[a, b], 4);
        assert_eq!(g.order(), 4);
        let cs = abelian_coset_structure(&g, &PermGroup::trivial(4)).unwrap();
        assert_eq!(cs.moduli, vec![2, 2]);
    }

    #[test]
    fn nonabelian_input_rejected() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let g = closure(&[a, b], 3);
        assert!(matches!(
            abelian_coset_structure(&g, &PermGroup::trivial(3)),
            Err(Error::Contract(_))
        ));
    }
}
