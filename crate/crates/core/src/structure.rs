//! Retraction, multipermutation level, 2-reductivity / 2-permutationality,
//! and the mesh (disjoint union of abelian groups) normal form of
//! 2-reductive solutions.

use std::fmt;

use crate::abelian::{subgroup, FinAbGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::permgroup::{self, PermGroup};
use crate::solution::Solution;

/// Multipermutation level: least k with |Retᵏ(X)| = 1, or the marker for
/// solutions whose retraction sequence stabilizes above one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mpl {
    Level(u32),
    NotMultipermutation,
}

impl Mpl {
    pub fn at_most(&self, k: u32) -> bool {
        matches!(self, Mpl::Level(l) if *l <= k)
    }
}

impl fmt::Display for Mpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mpl::Level(k) => write!(f, "{k}"),
            Mpl::NotMultipermutation => write!(f, "not-multipermutation"),
        }
    }
}

/// The retraction of a solution: quotient by the relation identifying
/// elements with equal σ- and τ-rows.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub quotient: Solution,
    /// Class index of each element; classes numbered by first occurrence.
    pub class_of: Vec<usize>,
}

/// Computes Ret(X). Fails with an internal consistency error when the
/// quotient tables would depend on the representatives (impossible for a
/// verified solution).
pub fn retract(s: &Solution) -> Result<Retraction> {
    let n = s.n();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..n {
        if let Some(k) = reps.iter().position(|&r| s.rows_equal(r, x)) {
            class_of[x] = k;
        } else {
            class_of[x] = reps.len();
            reps.push(x);
        }
    }
    let m = reps.len();
    let mut sigma = vec![vec![0usize; m]; m];
    let mut tau = vec![vec![0usize; m]; m];
    for (a, &x) in reps.iter().enumerate() {
        for (b, &y) in reps.iter().enumerate() {
            sigma[a][b] = class_of[s.sigma_row(x)[y]];
            tau[a][b] = class_of[s.tau_row(x)[y]];
        }
    }
    // Representative independence.
    for x in 0..n {
        for y in 0..n {
            if class_of[s.sigma_row(x)[y]] != sigma[class_of[x]][class_of[y]]
                || class_of[s.tau_row(x)[y]] != tau[class_of[x]][class_of[y]]
            {
                return Err(Error::Internal(
                    "retraction tables depend on representatives; input cannot be a verified solution"
                        .into(),
                ));
            }
        }
    }
    let quotient = Solution::from_tables(sigma, tau)?;
    if !quotient.verify_axioms().ok() {
        return Err(Error::Internal(
            "retraction quotient fails the axioms; input cannot be a verified solution".into(),
        ));
    }
    Ok(Retraction { quotient, class_of })
}

/// Multipermutation level of a verified solution.
pub fn mpl(s: &Solution) -> Mpl {
    let mut cur = s.clone();
    let mut steps = 0u32;
    loop {
        if cur.n() == 1 {
            return Mpl::Level(steps);
        }
        let next = retract(&cur).expect("mpl requires a verified solution").quotient;
        if next.n() == cur.n() {
            return Mpl::NotMultipermutation;
        }
        cur = next;
        steps += 1;
    }
}

/// `(two_reductive, two_permutational)` by the defining row identities,
/// cross-checked against the retraction characterizations (2-reductive iff
/// the retract has identity tables; 2-permutational iff mpl ≤ 2).
pub fn reductivity_flags(s: &Solution) -> (bool, bool) {
    let n = s.n();
    let rows_eq = |x: usize, y: usize| s.sigma_row(x) == s.sigma_row(y);
    let taus_eq = |x: usize, y: usize| s.tau_row(x) == s.tau_row(y);

    let mut two_reductive = true;
    'red: for x in 0..n {
        for y in 0..n {
            let sx_y = s.sigma_row(x)[y];
            let tx_y = s.tau_row(x)[y];
            if !(rows_eq(sx_y, y) && taus_eq(tx_y, y) && rows_eq(tx_y, y) && taus_eq(sx_y, y)) {
                two_reductive = false;
                break 'red;
            }
        }
    }

    let mut two_permutational = true;
    'per: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let sx_z = s.sigma_row(x)[z];
                let sy_z = s.sigma_row(y)[z];
                let tx_z = s.tau_row(x)[z];
                let ty_z = s.tau_row(y)[z];
                if !(rows_eq(sx_z, sy_z)
                    && taus_eq(tx_z, ty_z)
                    && rows_eq(tx_z, ty_z)
                    && taus_eq(sx_z, sy_z))
                {
                    two_permutational = false;
                    break 'per;
                }
            }
        }
    }

    // Cross-checks against the retraction route.
    let ret = retract(s).expect("reductivity flags require a verified solution");
    let trivial_ret = (0..ret.quotient.n()).all(|x| {
        ret.quotient.sigma_perm(x).is_identity() && ret.quotient.tau_perm(x).is_identity()
    });
    assert_eq!(
        two_reductive, trivial_ret,
        "2-reductivity disagrees with the trivial-retract characterization"
    );
    assert_eq!(
        two_permutational,
        mpl(s).at_most(2),
        "2-permutationality disagrees with mpl ≤ 2"
    );

    (two_reductive, two_permutational)
}

/// A 2-reductive solution in mesh normal form: one abelian group per orbit
/// plus translation constants, together with the bijection between orbit
/// points and group vectors.
#[derive(Clone, Debug)]
pub struct MeshStructure {
    /// Orbit groups A_i.
    pub groups: Vec<FinAbGroup>,
    /// `c[i][j]` ∈ A_j: the constant added on orbit j by rows from orbit i.
    pub c: Vec<Vec<Vec<i64>>>,
    /// `d[i][j]` ∈ A_j, same for the τ side.
    pub d: Vec<Vec<Vec<i64>>>,
    /// `points[j][rank]` = solution element carrying the vector of that
    /// rank in A_j; for hand-built meshes this is the consecutive layout.
    pub points: Vec<Vec<usize>>,
}

impl MeshStructure {
    /// A mesh with the canonical consecutive point layout. Validates the
    /// generation condition `A_j = ⟨{c[i][j], d[i][j] : i}⟩`.
    pub fn new(
        groups: Vec<FinAbGroup>,
        c: Vec<Vec<Vec<i64>>>,
        d: Vec<Vec<Vec<i64>>>,
    ) -> Result<MeshStructure> {
        let k = groups.len();
        if c.len() != k || d.len() != k || c.iter().chain(d.iter()).any(|row| row.len() != k) {
            return Err(Error::Structure("mesh constant tables must be |I|×|I|".into()));
        }
        let mut points = Vec::with_capacity(k);
        let mut next = 0usize;
        for g in &groups {
            let sz = g.order() as usize;
            points.push((next..next + sz).collect());
            next += sz;
        }
        let mesh = MeshStructure { groups, c, d, points };
        mesh.validate()?;
        Ok(mesh)
    }

    fn validate(&self) -> Result<()> {
        let k = self.groups.len();
        for j in 0..k {
            let a_j = &self.groups[j];
            let mut gens = Vec::new();
            for i in 0..k {
                if !a_j.is_valid(&self.c[i][j]) || !a_j.is_valid(&self.d[i][j]) {
                    return Err(Error::Structure(format!(
                        "mesh constant ({i},{j}) is not a vector of A_{j}"
                    )));
                }
                gens.push(self.c[i][j].clone());
                gens.push(self.d[i][j].clone());
            }
            if !subgroup(a_j, &gens).is_full() {
                return Err(Error::Validation(format!(
                    "orbit group A_{j} is not generated by its mesh constants"
                )));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.groups.iter().map(|g| g.order() as usize).sum()
    }
}

/// Builds the solution with `σₓ(y) = y + c[i][j]` and `τₓ(y) = y + d[i][j]`
/// for x in orbit i, y in orbit j, in the element indexing recorded by the
/// mesh.
pub fn mesh_build(mesh: &MeshStructure) -> Result<Solution> {
    mesh.validate()?;
    let n = mesh.size();
    // element -> (orbit, vector)
    let mut locate = vec![(0usize, 0usize); n];
    for (j, pts) in mesh.points.iter().enumerate() {
        for (rank, &p) in pts.iter().enumerate() {
            if p >= n {
                return Err(Error::Structure(format!("mesh point {p} out of range")));
            }
            locate[p] = (j, rank);
        }
    }
    let mut sigma = vec![vec![0usize; n]; n];
    let mut tau = vec![vec![0usize; n]; n];
    for x in 0..n {
        let (i, _) = locate[x];
        for y in 0..n {
            let (j, rank_y) = locate[y];
            let a_j = &mesh.groups[j];
            let vy = a_j.rank_to_vec(rank_y);
            let sv = a_j.add(&vy, &mesh.c[i][j]);
            let tv = a_j.add(&vy, &mesh.d[i][j]);
            sigma[x][y] = mesh.points[j][a_j.vec_rank(&sv)];
            tau[x][y] = mesh.points[j][a_j.vec_rank(&tv)];
        }
    }
    let s = Solution::from_tables(sigma, tau)?;
    debug_assert!(s.verify_axioms().ok());
    Ok(s)
}

/// Recovers the mesh normal form of a 2-reductive solution. The group
/// structure of each orbit is transferred from the regular action of G(X)
/// restricted to that orbit, with the least element as zero; a nontrivial
/// point stabilizer aborts with an internal consistency error.
pub fn mesh_decompose(s: &Solution, two_reductive: bool) -> Result<MeshStructure> {
    if !two_reductive {
        return Err(Error::Contract("mesh decomposition requires a 2-reductive solution".into()));
    }
    let n = s.n();
    let gens = s.group_generators();
    let orbit_list = permgroup::orbits(&gens, n);
    let k = orbit_list.len();

    // Per orbit: restricted action, regular abelian structure, and the
    // point <-> vector bijection.
    let mut groups: Vec<FinAbGroup> = Vec::with_capacity(k);
    let mut points: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut vector_of: Vec<std::collections::HashMap<usize, Vec<i64>>> = Vec::with_capacity(k);
    for orbit in &orbit_list {
        let size = orbit.len();
        let pos_of = |p: usize| orbit.binary_search(&p).expect("point in orbit");
        let mut restricted: Vec<Perm> = Vec::new();
        for g in &gens {
            let images: Vec<usize> = orbit.iter().map(|&p| pos_of(g.apply(p))).collect();
            restricted.push(Perm::from_images(images).expect("orbit is invariant"));
        }
        let action = permgroup::closure(&restricted, size);
        if action.order() != size || action.stabilizer(0).order() != 1 {
            return Err(Error::Internal(
                "orbit action is not regular; input is not a genuine 2-reductive solution".into(),
            ));
        }
        let cs = permgroup::abelian_coset_structure(&action, &PermGroup::trivial(size))?;
        let group = cs.group();
        // g_p = the unique element sending the basepoint (position 0) to p.
        let mut vec_of_pos: Vec<Vec<i64>> = vec![Vec::new(); size];
        for e in action.elements() {
            vec_of_pos[e.apply(0)] = cs.to_vector(e);
        }
        let mut pts = vec![0usize; size];
        let mut map = std::collections::HashMap::new();
        for (pos, &p) in orbit.iter().enumerate() {
            let v = &vec_of_pos[pos];
            pts[group.vec_rank(v)] = p;
            map.insert(p, v.clone());
        }
        groups.push(group);
        points.push(pts);
        vector_of.push(map);
    }

    // Constants: c[i][j] = vector of σₓ(0_j) for any x in orbit i, with
    // representative independence asserted.
    let mut c = vec![vec![Vec::new(); k]; k];
    let mut d = vec![vec![Vec::new(); k]; k];
    for (i, orbit_i) in orbit_list.iter().enumerate() {
        for (j, orbit_j) in orbit_list.iter().enumerate() {
            let base_j = orbit_j[0];
            let x0 = orbit_i[0];
            let cv = vector_of[j][&s.sigma_row(x0)[base_j]].clone();
            let dv = vector_of[j][&s.tau_row(x0)[base_j]].clone();
            for &x in orbit_i {
                if vector_of[j][&s.sigma_row(x)[base_j]] != cv
                    || vector_of[j][&s.tau_row(x)[base_j]] != dv
                {
                    return Err(Error::Internal(
                        "mesh constants depend on the orbit representative".into(),
                    ));
                }
            }
            c[i][j] = cv;
            d[i][j] = dv;
        }
    }

    let mesh = MeshStructure { groups, c, d, points };
    mesh.validate()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutation_solution(n: usize, p: &Perm, q: &Perm) -> Solution {
        Solution::from_tables(
            vec![p.images().to_vec(); n],
            vec![q.images().to_vec(); n],
        )
        .unwrap()
    }

    #[test]
    fn one_point_mpl_zero() {
        let s = Solution::one_point();
        assert_eq!(mpl(&s), Mpl::Level(0));
        let r = retract(&s).unwrap();
        assert_eq!(r.quotient.n(), 1);
        let (red, per) = reductivity_flags(&s);
        assert!(red && per);
    }

    #[test]
    fn permutation_solution_retracts_to_a_point() {
        let p = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let s = permutation_solution(3, &p, &p.inverse());
        assert!(s.verify_axioms().ok());
        let r = retract(&s).unwrap();
        assert_eq!(r.quotient.n(), 1);
        assert_eq!(mpl(&s), Mpl::Level(1));
    }

    #[test]
    fn mesh_single_orbit_z2() {
        // I={0}, A₀=Z₂, c₀₀=d₀₀=1: the flip permutation solution.
        let mesh = MeshStructure::new(
            vec![FinAbGroup::power(2, 1)],
            vec![vec![vec![1]]],
            vec![vec![vec![1]]],
        )
        .unwrap();
        let s = mesh_build(&mesh).unwrap();
        assert!(s.verify_axioms().ok());
        assert_eq!(s.sigma_row(0), &[1, 0]);
        assert_eq!(s.tau_row(0), &[1, 0]);
        let props = crate::solution::classify_properties(&s);
        assert!(!props.square_free);
        assert!(props.two_reductive);
    }

    #[test]
    fn mesh_generation_condition_enforced() {
        // Constants all zero cannot generate Z₂.
        assert!(matches!(
            MeshStructure::new(
                vec![FinAbGroup::power(2, 1)],
                vec![vec![vec![0]]],
                vec![vec![vec![0]]],
            ),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn mesh_two_orbits() {
        // I={0,1}, A₀=A₁=Z₂, c_{i,j}=δ_{i≠j}, d=0.
        let z2 = FinAbGroup::power(2, 1);
        let mesh = MeshStructure::new(
            vec![z2.clone(), z2],
            vec![
                vec![vec![0], vec![1]],
                vec![vec![1], vec![0]],
            ],
            vec![
                vec![vec![0], vec![0]],
                vec![vec![0], vec![0]],
            ],
        );
        // d-side contributes nothing, but c side generates: valid.
        let mesh = mesh.unwrap();
        let s = mesh_build(&mesh).unwrap();
        assert!(s.verify_axioms().ok());
        let (red, _) = reductivity_flags(&s);
        assert!(red);
        assert_eq!(s.n(), 4);
    }

    #[test]
    fn mesh_roundtrip() {
        let z2 = FinAbGroup::power(2, 1);
        let mesh = MeshStructure::new(
            vec![z2.clone(), z2],
            vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]],
            vec![vec![vec![0], vec![0]], vec![vec![0], vec![0]]],
        )
        .unwrap();
        let s = mesh_build(&mesh).unwrap();
        let back = mesh_decompose(&s, true).unwrap();
        let s2 = mesh_build(&back).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn mesh_decompose_rejects_non_2_reductive() {
        let s = Solution::one_point();
        assert!(matches!(mesh_decompose(&s, false), Err(Error::Contract(_))));
    }
}
