//! Congruences of S(G × Z_n², c, d) as triples (S, H, Θ), quotient
//! construction by symbolic coset arithmetic, and the exhaustive
//! classification of indecomposable solutions of level ≤ 2 of a given
//! finite size.

use std::collections::HashMap;

use crate::abelian::{homs, quotient, subgroup, AbHom, AbSubgroup, FinAbGroup};
use crate::construct::{master_solution, SParams};
use crate::error::{Error, Result};
use crate::solution::Solution;
use crate::structure::Mpl;

/// A congruence descriptor: S ≤ Z_n², H ≤ G and Θ: S → G/H, subject to the
/// compatibility condition on the series.
#[derive(Clone)]
pub struct CongruenceTriple {
    pub params: SParams,
    pub s_sub: AbSubgroup,
    pub h_sub: AbSubgroup,
    pub theta: AbHom,
}

impl std::fmt::Debug for CongruenceTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Triple(S={:?}, H={:?}, theta={:?})",
            self.s_sub.canon_gens(),
            self.h_sub.canon_gens(),
            self.theta.gen_images()
        )
    }
}

/// The index group Z_n² of a parameter set.
pub fn index_group(params: &SParams) -> FinAbGroup {
    FinAbGroup::power(params.n as i64, 2)
}

/// Generators of Δ(S) = {i - i' : (i,i') ∈ S} from the canonical
/// generators of S.
fn delta_generators(s_sub: &AbSubgroup) -> Vec<i64> {
    s_sub
        .canon_gens()
        .iter()
        .map(|g| g[0] - g[1])
        .collect()
}

/// The compatibility subgroup K(S) = ⟨c_{μ+k} - c_k, d_{μ+k} - d_k⟩ over
/// generators μ of Δ(S) and all k; the least H admissible for S.
pub fn compatibility_subgroup(params: &SParams, s_sub: &AbSubgroup) -> AbSubgroup {
    let g = &params.group;
    let mut gens = Vec::new();
    for mu in delta_generators(s_sub) {
        for k in 0..params.n as i64 {
            gens.push(g.sub(params.c_at(mu + k), params.c_at(k)));
            gens.push(g.sub(params.d_at(mu + k), params.d_at(k)));
        }
    }
    subgroup(g, &gens)
}

/// Checks the triple invariants, returning the named violations instead of
/// failing: compatibility over a generating set of Δ(S), and the kind of
/// each component.
pub fn validate_triple(t: &CongruenceTriple) -> Vec<String> {
    let mut violations = Vec::new();
    let zn2 = index_group(&t.params);
    if t.s_sub.ambient() != &zn2 {
        violations.push("S does not live in Z_n^2".to_string());
        return violations;
    }
    if t.h_sub.ambient() != &t.params.group {
        violations.push("H does not live in G".to_string());
        return violations;
    }
    if t.theta.source() != &t.s_sub {
        violations.push("theta's source differs from S".to_string());
    }
    if t.theta.target().sub() != &t.h_sub {
        violations.push("theta's target differs from G/H".to_string());
    }
    let g = &t.params.group;
    for mu in delta_generators(&t.s_sub) {
        for k in 0..t.params.n as i64 {
            if !t.h_sub.member(&g.sub(t.params.c_at(mu + k), t.params.c_at(k))) {
                violations.push(format!("c_{{{mu}+{k}}} - c_{k} is not in H"));
            }
            if !t.h_sub.member(&g.sub(t.params.d_at(mu + k), t.params.d_at(k))) {
                violations.push(format!("d_{{{mu}+{k}}} - d_{k} is not in H"));
            }
        }
    }
    violations
}

/// Size of the quotient: [Z_n² : S] · [G : H].
pub fn triple_size(t: &CongruenceTriple) -> u128 {
    t.s_sub.index() * t.h_sub.index()
}

/// Involutivity by the triple criterion: (1,1) ∈ S, Θ((1,1)) = H, and
/// cᵢ + dᵢ ∈ H for all i.
pub fn triple_involutive(t: &CongruenceTriple) -> bool {
    let one_one = vec![1i64, 1];
    if !t.s_sub.member(&one_one) {
        return false;
    }
    if t.theta.eval(&one_one).iter().any(|&x| x != 0) {
        return false;
    }
    let g = &t.params.group;
    (0..t.params.n).all(|i| t.h_sub.member(&g.add(&t.params.c[i], &t.params.d[i])))
}

/// Square-freeness by the triple criterion: the diagonal r(x,x) = (x,x)
/// holds iff (1,0), (0,1) ∈ S with Θ((1,0)) = c_{n-1} + H and
/// Θ((0,1)) = d₁ + H.
pub fn triple_square_free(t: &CongruenceTriple) -> bool {
    let q = t.theta.target();
    let e10 = vec![1i64, 0];
    let e01 = vec![0i64, 1];
    if !t.s_sub.member(&e10) || !t.s_sub.member(&e01) {
        return false;
    }
    t.theta.eval(&e10) == q.project(t.params.c_at(-1))
        && t.theta.eval(&e01) == q.project(t.params.d_at(1))
}

/// Multipermutation level by the triple criteria: 0 for the one-point
/// quotient, 1 iff H = G, else 2.
pub fn triple_mpl(t: &CongruenceTriple) -> Mpl {
    if triple_size(t) == 1 {
        Mpl::Level(0)
    } else if t.h_sub.is_full() {
        Mpl::Level(1)
    } else {
        Mpl::Level(2)
    }
}

/// A classified catalog entry.
#[derive(Clone, Debug)]
pub struct ClassifiedEntry {
    pub triple: CongruenceTriple,
    pub size: u128,
    pub mpl_level: Mpl,
    pub involutive: bool,
    pub square_free: bool,
    pub solution: Option<Solution>,
}

/// Builds the quotient of S(G × Z_n², c, d) by the congruence
/// `(a,i,i') ≍ (b,j,j') ⟺ (i-j, i'-j') ∈ S and (a-b) + H = Θ((i-j,i'-j'))`.
///
/// Elements are the classes, represented by their least flattened index
/// and ordered by it; everything is computed by coset arithmetic, never by
/// materializing G × Z_n².
pub fn quotient_by_triple(t: &CongruenceTriple) -> Result<Solution> {
    let violations = validate_triple(t);
    if !violations.is_empty() {
        return Err(Error::Contract(format!(
            "invalid congruence triple: {}",
            violations.join("; ")
        )));
    }
    let params = &t.params;
    let n = params.n;
    let g = &params.group;
    let zn2 = index_group(params);

    // Class key of (a, i, i'): the S-coset representative (r, r') of (i,i')
    // plus the canonical H-coset representative of a - Θ̃((i,i') - (r,r')).
    let class_key = |a: &[i64], i: usize, ip: usize| -> (Vec<i64>, Vec<i64>) {
        let v = vec![i as i64, ip as i64];
        let srep = t.s_sub.coset_rep(&v);
        let diff = zn2.sub(&v, &srep);
        let theta_lift = t.theta.target().lift(&t.theta.eval(&diff));
        let adjusted = g.sub(a, &theta_lift);
        (srep, t.h_sub.coset_rep(&adjusted))
    };

    // The representative of least flattened index within a class: scan the
    // (i,i') inside the S-coset, take the lexicographically least vector in
    // the corresponding H-coset, and minimize (vec_rank(a), i, i').
    let least_rep = |key: &(Vec<i64>, Vec<i64>)| -> (Vec<i64>, usize, usize) {
        let (srep, hrep) = key;
        let mut best: Option<(Vec<i64>, usize, usize)> = None;
        for i in 0..n {
            for ip in 0..n {
                let v = vec![i as i64, ip as i64];
                if !t.s_sub.member(&zn2.sub(&v, srep)) {
                    continue;
                }
                // a must satisfy a - Θ̃(v - srep) ∈ hrep + H.
                let diff = zn2.sub(&v, srep);
                let theta_lift = t.theta.target().lift(&t.theta.eval(&diff));
                let a_min = t.h_sub.coset_rep(&g.add(hrep, &theta_lift));
                let cand = (a_min, i, ip);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.expect("class is nonempty")
    };

    // Enumerate all classes.
    let s_reps = t.s_sub.coset_reps()?;
    let h_reps = t.h_sub.coset_reps()?;
    let mut reps: Vec<(Vec<i64>, usize, usize)> = Vec::new();
    for srep in &s_reps {
        for hrep in &h_reps {
            let key = (srep.clone(), hrep.clone());
            reps.push(least_rep(&key));
        }
    }
    reps.sort();
    reps.dedup();
    let m = reps.len();
    if m as u128 != triple_size(t) {
        return Err(Error::Internal(format!(
            "class count {m} does not match the size formula {}",
            triple_size(t)
        )));
    }

    let mut index_of: HashMap<(Vec<i64>, Vec<i64>), usize> = HashMap::new();
    for (idx, (a, i, ip)) in reps.iter().enumerate() {
        index_of.insert(class_key(a, *i, *ip), idx);
    }
    let class_of = |a: &[i64], i: usize, ip: usize| -> usize {
        index_of[&class_key(a, i, ip)]
    };

    let mut sigma = vec![vec![0usize; m]; m];
    let mut tau = vec![vec![0usize; m]; m];
    for (x, (_, i, ip)) in reps.iter().enumerate() {
        let diff = *i as i64 - *ip as i64;
        for (y, (b, j, jp)) in reps.iter().enumerate() {
            let shift = diff + *jp as i64 - *j as i64;
            let bs = g.add(b, params.c_at(shift - 1));
            sigma[x][y] = class_of(&bs, (j + 1) % n, *jp);
            let bt = g.add(b, params.d_at(shift + 1));
            tau[x][y] = class_of(&bt, *j, (jp + 1) % n);
        }
    }
    let q = Solution::from_tables(sigma, tau)?;
    q.ensure_verified()?;
    Ok(q)
}

/// Evaluates the per-triple predicates and materializes the quotient
/// (quotient sizes equal the target size, so they are always under the
/// table cap in classification use).
pub fn triple_predicates(t: &CongruenceTriple) -> Result<ClassifiedEntry> {
    let q = quotient_by_triple(t)?;
    let entry = ClassifiedEntry {
        size: triple_size(t),
        mpl_level: triple_mpl(t),
        involutive: triple_involutive(t),
        square_free: triple_square_free(t),
        solution: Some(q),
        triple: t.clone(),
    };
    Ok(entry)
}

/// All congruence triples of the size-m master solution whose quotients
/// have exactly m elements, in canonical order (δ, S, H, Θ images). By the
/// congruence theory these quotients are pairwise non-isomorphic and cover
/// every indecomposable solution of level ≤ 2 of size m.
pub fn classify(m: usize) -> Result<Vec<ClassifiedEntry>> {
    classify_with_jobs(m, 1)
}

pub fn classify_with_jobs(m: usize, jobs: usize) -> Result<Vec<ClassifiedEntry>> {
    if m < 1 {
        return Err(Error::Validation("target size must be at least 1".into()));
    }
    let (params, _) = master_solution(m)?;
    let zn2 = index_group(&params);

    // Work items: one per admissible (S, H); Θ enumeration happens inside.
    let mut work: Vec<(u128, AbSubgroup, AbSubgroup)> = Vec::new();
    let mut deltas: Vec<u128> = (1..=m as u128).filter(|d| m as u128 % d == 0).collect();
    deltas.sort_unstable();
    for delta in deltas {
        let h_index = m as u128 / delta;
        for s_sub in crate::abelian::subgroups_of_index(&zn2, delta, &zn2.trivial_subgroup()) {
            let k = compatibility_subgroup(&params, &s_sub);
            if k.index() % h_index != 0 {
                continue;
            }
            for h_sub in crate::abelian::subgroups_of_index(&params.group, h_index, &k) {
                work.push((delta, s_sub.clone(), h_sub));
            }
        }
    }

    let run = |(delta, s_sub, h_sub): &(u128, AbSubgroup, AbSubgroup)| -> Result<Vec<ClassifiedEntry>> {
        let q = quotient(&params.group, h_sub);
        let mut out = Vec::new();
        for theta in homs(s_sub, &q) {
            let triple = CongruenceTriple {
                params: params.clone(),
                s_sub: s_sub.clone(),
                h_sub: h_sub.clone(),
                theta,
            };
            let violations = validate_triple(&triple);
            if !violations.is_empty() {
                return Err(Error::Internal(format!(
                    "enumerated triple fails validation: {}",
                    violations.join("; ")
                )));
            }
            debug_assert_eq!(triple_size(&triple), *delta * h_sub.index());
            out.push(triple_predicates(&triple)?);
        }
        Ok(out)
    };

    let results: Vec<Result<Vec<ClassifiedEntry>>> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
        pool.install(|| work.par_iter().map(run).collect())
    } else {
        work.iter().map(run).collect()
    };

    let mut entries = Vec::new();
    for r in results {
        entries.extend(r?);
    }
    // Canonical catalog order.
    entries.sort_by(|a, b| {
        (
            a.s_sub_index(),
            a.triple.s_sub.canon_gens(),
            a.triple.h_sub.canon_gens(),
            a.triple.theta.gen_images().to_vec(),
        )
            .cmp(&(
                b.s_sub_index(),
                b.triple.s_sub.canon_gens(),
                b.triple.h_sub.canon_gens(),
                b.triple.theta.gen_images().to_vec(),
            ))
    });
    Ok(entries)
}

impl ClassifiedEntry {
    /// δ = [Z_n² : S]
    pub fn s_sub_index(&self) -> u128 {
        self.triple.s_sub.index()
    }
}

/// Report of the structural cross-checks on a materialized entry.
#[derive(Clone, Debug, Default)]
pub struct CrossCheckReport {
    pub failures: Vec<String>,
}

impl CrossCheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Asserts, on the explicit quotient: axiom validity, indecomposability,
/// mpl agreement, |D(X)| = [Z_n² : Ker Θ] dividing |X|, uniform cycle
/// lengths, involutivity agreement, automorphism count = |X| for level-2
/// entries, canonical re-projection, and the Dis/Dis_e ≅ G/H moduli.
pub fn cross_check_entry(e: &ClassifiedEntry) -> Result<CrossCheckReport> {
    let mut rep = CrossCheckReport::default();
    let mut fail = |msg: String| rep.failures.push(msg);

    let Some(q) = &e.solution else {
        return Err(Error::Contract("cross check requires a materialized quotient".into()));
    };

    if !q.verify_axioms().ok() {
        fail("quotient fails the axioms".into());
    }
    if q.n() as u128 != e.size {
        fail(format!("size formula {} vs table {}", e.size, q.n()));
    }
    if !q.is_indecomposable() {
        fail("quotient is decomposable".into());
    }
    let table_mpl = crate::structure::mpl(q);
    if table_mpl != e.mpl_level {
        fail(format!("mpl {} vs table {}", e.mpl_level, table_mpl));
    }
    let props = crate::solution::classify_properties(q);
    if props.involutive != e.involutive {
        fail("involutivity flag disagrees with the table".into());
    }
    if props.square_free != e.square_free {
        fail("square-free flag disagrees with the table".into());
    }
    if props.cycle_len_sigma.is_none() {
        fail("sigma cycle lengths are not uniform".into());
    }
    if props.cycle_len_tau.is_none() {
        fail("tau cycle lengths are not uniform".into());
    }

    let groups = crate::permgroup::solution_groups(q)?;
    // |D(X)| = [Z_n² : Ker Θ], and it divides |X|.
    let ker = e.triple.theta.kernel();
    let expected_d = ker.index();
    if groups.d.order() as u128 != expected_d {
        fail(format!(
            "|D(X)| = {} but [Z_n^2 : Ker theta] = {expected_d}",
            groups.d.order()
        ));
    }
    if q.n() % groups.d.order() != 0 {
        fail(format!(
            "|D(X)| = {} does not divide |X| = {}",
            groups.d.order(),
            q.n()
        ));
    }

    // Dis(X)/Dis(X)_e has the invariant factors of G/H.
    let stab = groups.dis.stabilizer(0);
    let coset = crate::permgroup::abelian_coset_structure(&groups.dis, &stab)?;
    let gh = quotient(&e.triple.params.group, &e.triple.h_sub);
    let mut lhs = coset.moduli.clone();
    let mut rhs = gh.q_moduli().to_vec();
    lhs.sort_unstable();
    rhs.sort_unstable();
    if lhs != rhs {
        fail(format!("Dis/Dis_e moduli {lhs:?} differ from G/H moduli {rhs:?}"));
    }

    // Automorphism group is regular for level-2 entries.
    if e.mpl_level == Mpl::Level(2) {
        let mut autos = 0usize;
        for x0 in 0..q.n() {
            if let Some(map) = crate::solution::extend_hom_from_seed(q, q, 0, x0) {
                if map.is_bijective() && map.is_homomorphism() {
                    autos += 1;
                }
            }
        }
        if autos != q.n() {
            fail(format!("automorphism count {autos} != |X| = {}", q.n()));
        }
    }

    // The canonical solution projects back onto the quotient.
    match crate::construct::canonical(q) {
        Ok(can) => {
            if !can.epi.is_homomorphism() || !can.epi.is_surjective() {
                fail("canonical projection is not a surjective homomorphism".into());
            }
        }
        Err(err) => fail(format!("canonical construction failed: {err}")),
    }

    Ok(rep)
}

/// Kernel of Θ as a subgroup of Z_n² (delegates to the hom).
impl CongruenceTriple {
    pub fn theta_kernel(&self) -> AbSubgroup {
        self.theta.kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::sample_z2;

    fn identity_triple(params: &SParams) -> CongruenceTriple {
        let zn2 = index_group(params);
        let s_sub = zn2.trivial_subgroup();
        let h_sub = params.group.trivial_subgroup();
        let q = quotient(&params.group, &h_sub);
        let theta = homs(&s_sub, &q).pop().expect("trivial source has one hom");
        CongruenceTriple {
            params: params.clone(),
            s_sub,
            h_sub,
            theta,
        }
    }

    #[test]
    fn identity_triple_reproduces_the_solution() {
        let params = sample_z2();
        let t = identity_triple(&params);
        assert!(validate_triple(&t).is_empty());
        assert_eq!(triple_size(&t), 8);
        let q = quotient_by_triple(&t).unwrap();
        let direct = crate::construct::build_s(&params).unwrap();
        assert_eq!(q, direct);
    }

    #[test]
    fn full_s_with_small_h_violates_compatibility() {
        // n = 4 master, S = Z₄² forces all eᵢ, fᵢ into H, so an index-4 H
        // cannot satisfy compatibility.
        let (params, _) = master_solution(4).unwrap();
        let zn2 = index_group(&params);
        let s_sub = zn2.full_subgroup();
        let k = compatibility_subgroup(&params, &s_sub);
        assert!(k.is_full(), "K(S) must be all of G");
    }

    #[test]
    fn classify_sizes_2_and_3() {
        let c2 = classify(2).unwrap();
        assert_eq!(c2.len(), 3);
        assert!(c2.iter().all(|e| e.size == 2));
        assert!(c2.iter().all(|e| e.mpl_level == Mpl::Level(1)));
        assert_eq!(c2.iter().filter(|e| e.involutive).count(), 1);

        let c3 = classify(3).unwrap();
        assert_eq!(c3.len(), 4);
        assert!(c3.iter().all(|e| e.mpl_level == Mpl::Level(1)));
        assert_eq!(c3.iter().filter(|e| e.involutive).count(), 1);
    }

    #[test]
    fn classify_size_1() {
        let c1 = classify(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].size, 1);
        assert_eq!(c1[0].mpl_level, Mpl::Level(0));
    }

    #[test]
    fn classify_jobs_is_deterministic() {
        let a = classify_with_jobs(4, 1).unwrap();
        let b = classify_with_jobs(4, 4).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.solution, y.solution);
            assert_eq!(x.triple.theta.gen_images(), y.triple.theta.gen_images());
        }
    }
}
