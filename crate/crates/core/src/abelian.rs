//! Symbolic finite abelian groups `Z_{m₁} × … × Z_{m_k}`.
//!
//! Subgroups are generator matrices brought into a fixed Hermite normal
//! form (stacked with the moduli relations), which makes every subgroup
//! comparison, coset representative and enumeration order canonical.
//! Quotients and homomorphism enumeration go through Smith normal form;
//! ambient groups are never listed element by element unless small.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{hnf, smith_normal_form, solve_upper_triangular, Mat};

/// Threshold above which `elements()` refuses to materialize a group.
pub const ELEMENT_LIST_CAP: u128 = 100_000;

/// The group `Z_{m₁} × … × Z_{m_k}`; elements are residue vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    moduli: Vec<i64>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{:?}", self.moduli)
    }
}

impl FinAbGroup {
    pub fn new(moduli: Vec<i64>) -> Result<FinAbGroup> {
        if moduli.iter().any(|&m| m < 1) {
            return Err(Error::Structure(format!("moduli must be >= 1: {moduli:?}")));
        }
        Ok(FinAbGroup { moduli })
    }

    /// `Z_n^k`
    pub fn power(n: i64, k: usize) -> FinAbGroup {
        FinAbGroup { moduli: vec![n; k] }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.moduli.len()]
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.moduli.len());
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| x.rem_euclid(m))
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(&x, &y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(&x, &y)| x - y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|&x| -x).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|&x| k * x).collect::<Vec<_>>())
    }

    pub fn is_valid(&self, v: &[i64]) -> bool {
        v.len() == self.moduli.len()
            && v.iter().zip(&self.moduli).all(|(&x, &m)| 0 <= x && x < m)
    }

    /// Lexicographic rank of a (reduced) residue vector.
    pub fn vec_rank(&self, v: &[i64]) -> usize {
        debug_assert!(self.is_valid(v));
        let mut r: u128 = 0;
        for (&x, &m) in v.iter().zip(&self.moduli) {
            r = r * m as u128 + x as u128;
        }
        usize::try_from(r).expect("vec_rank only valid for materializable groups")
    }

    pub fn rank_to_vec(&self, mut r: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let m = self.moduli[i] as usize;
            v[i] = (r % m) as i64;
            r /= m;
        }
        v
    }

    /// All elements in `vec_rank` order. Errors above [`ELEMENT_LIST_CAP`].
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.order();
        if n > ELEMENT_LIST_CAP {
            return Err(Error::Resource(format!(
                "refusing to list {n} elements of {self:?}"
            )));
        }
        Ok((0..n as usize).map(|r| self.rank_to_vec(r)).collect())
    }

    /// Order of an element (least k >= 1 with k·v = 0).
    pub fn element_order(&self, v: &[i64]) -> i64 {
        use num_integer::Integer;
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m / m.gcd(&x))
            .fold(1i64, |a, b| a.lcm(&b))
    }

    /// The trivial subgroup.
    pub fn trivial_subgroup(&self) -> AbSubgroup {
        subgroup(self, &[])
    }

    /// The whole group as a subgroup of itself.
    pub fn full_subgroup(&self) -> AbSubgroup {
        let gens: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| {
                let mut e = self.zero();
                if self.moduli[i] > 1 {
                    e[i] = 1;
                }
                e
            })
            .collect();
        subgroup(self, &gens)
    }
}

/// A subgroup of a [`FinAbGroup`], canonicalized by the HNF of its
/// generator matrix stacked with the moduli relations.
#[derive(Clone)]
pub struct AbSubgroup {
    ambient: FinAbGroup,
    gens: Vec<Vec<i64>>,
    /// Square upper-triangular HNF basis of the lift lattice; unique per
    /// subgroup, so equality of `canon` is equality of subgroups.
    canon: Mat,
}

impl PartialEq for AbSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canon == other.canon
    }
}

impl Eq for AbSubgroup {}

impl std::hash::Hash for AbSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.canon.hash(state);
    }
}

impl fmt::Debug for AbSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sub{:?} of {:?}", self.canon_gens(), self.ambient)
    }
}

impl PartialOrd for AbSubgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbSubgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canon
            .rows_vec()
            .cmp(&other.canon.rows_vec())
            .then_with(|| self.ambient.cmp(&other.ambient))
    }
}

/// Canonical form of `gens` inside `ambient` (see [`AbSubgroup`]).
pub fn subgroup(ambient: &FinAbGroup, gens: &[Vec<i64>]) -> AbSubgroup {
    let k = ambient.rank();
    let mut rows: Vec<Vec<i64>> = gens.iter().map(|g| ambient.reduce(g)).collect();
    for i in 0..k {
        let mut rel = vec![0i64; k];
        rel[i] = ambient.moduli[i];
        rows.push(rel);
    }
    let canon = hnf(&Mat::from_rows(&rows));
    debug_assert_eq!(canon.nrows(), k, "lift lattice is full rank");
    AbSubgroup {
        ambient: ambient.clone(),
        gens: gens.iter().map(|g| ambient.reduce(g)).collect(),
        canon,
    }
}

impl AbSubgroup {
    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn gens(&self) -> &[Vec<i64>] {
        &self.gens
    }

    /// Nonzero rows of the canonical basis, reduced mod the moduli.
    pub fn canon_gens(&self) -> Vec<Vec<i64>> {
        self.canon
            .rows_vec()
            .iter()
            .map(|r| self.ambient.reduce(r))
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect()
    }

    /// `[ambient : self]` — the product of the canonical pivots.
    pub fn index(&self) -> u128 {
        (0..self.canon.nrows())
            .map(|i| self.canon[(i, i)] as u128)
            .product()
    }

    pub fn order(&self) -> u128 {
        self.ambient.order() / self.index()
    }

    pub fn member(&self, v: &[i64]) -> bool {
        let red = self.ambient.reduce(v);
        solve_upper_triangular(&self.canon, &red).is_some()
    }

    pub fn contains(&self, other: &AbSubgroup) -> bool {
        other.canon_gens().iter().all(|g| self.member(g))
    }

    pub fn is_full(&self) -> bool {
        self.index() == 1
    }

    /// Canonical coset representative of `v + self`: the lexicographically
    /// least residue vector in the coset.
    pub fn coset_rep(&self, v: &[i64]) -> Vec<i64> {
        let mut t = self.ambient.reduce(v);
        let k = self.canon.nrows();
        for i in 0..k {
            let p = self.canon[(i, i)];
            let q = t[i].div_euclid(p);
            if q != 0 {
                for j in i..k {
                    t[j] -= q * self.canon[(i, j)];
                }
            }
        }
        self.ambient.reduce(&t)
    }

    /// All canonical coset representatives, sorted lexicographically.
    /// Errors when the index exceeds [`ELEMENT_LIST_CAP`].
    pub fn coset_reps(&self) -> Result<Vec<Vec<i64>>> {
        let idx = self.index();
        if idx > ELEMENT_LIST_CAP {
            return Err(Error::Resource(format!(
                "refusing to list {idx} cosets"
            )));
        }
        // Mixed-radix walk over the canonical pivots: every coset has a
        // unique rep with coordinate i in [0, pivot_i) after reduction.
        let k = self.canon.nrows();
        let mut reps = vec![self.ambient.zero()];
        for i in 0..k {
            let p = self.canon[(i, i)];
            if p == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(reps.len() * p as usize);
            for rep in &reps {
                for a in 0..p {
                    let mut w = rep.clone();
                    w[i] = a;
                    next.push(w);
                }
            }
            reps = next;
        }
        let mut reps: Vec<Vec<i64>> = reps.iter().map(|w| self.coset_rep(w)).collect();
        reps.sort();
        reps.dedup();
        debug_assert_eq!(reps.len() as u128, idx);
        Ok(reps)
    }

    /// Cyclic decomposition: generators `g₁..g_t` with orders `d₁ | … | d_t`
    /// (trivial factors dropped) such that the subgroup is the direct sum of
    /// the `⟨gᵢ⟩`. Also returns the data needed to express members in these
    /// coordinates.
    pub fn cyclic_decomposition(&self) -> CyclicDecomposition {
        let k = self.ambient.rank();
        // diag(moduli) = W · canon, solved row by row.
        let mut w_rows = Vec::with_capacity(k);
        for i in 0..k {
            let mut rel = vec![0i64; k];
            rel[i] = self.ambient.moduli[i];
            let x = solve_upper_triangular(&self.canon, &rel)
                .expect("moduli relations lie in the lift lattice");
            w_rows.push(x);
        }
        let snf = smith_normal_form(&Mat::from_rows(&w_rows));
        let diag = snf.diag();
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (i, &d) in diag.iter().enumerate() {
            if d > 1 {
                let g_int = Mat::from_rows(&[snf.c_inv.row(i).to_vec()]).mul(&self.canon);
                gens.push(self.ambient.reduce(g_int.row(0)));
                orders.push(d);
            }
        }
        debug_assert_eq!(
            orders.iter().map(|&d| d as u128).product::<u128>(),
            self.order()
        );
        CyclicDecomposition {
            sub: self.clone(),
            gens,
            orders,
            all_orders: diag,
            coord_map: snf.c,
        }
    }
}

/// Result of [`AbSubgroup::cyclic_decomposition`].
#[derive(Clone)]
pub struct CyclicDecomposition {
    sub: AbSubgroup,
    /// Ambient vectors generating the nontrivial cyclic factors.
    pub gens: Vec<Vec<i64>>,
    /// Orders of `gens`, ascending divisibility chain.
    pub orders: Vec<i64>,
    all_orders: Vec<i64>,
    coord_map: Mat,
}

impl CyclicDecomposition {
    /// Coordinates of a member in the cyclic basis (one entry per
    /// nontrivial factor, reduced mod its order). `None` for non-members.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        let red = self.sub.ambient.reduce(v);
        let y = solve_upper_triangular(&self.sub.canon, &red)?;
        let x = Mat::from_rows(&[y]).mul(&self.coord_map);
        let mut out = Vec::with_capacity(self.gens.len());
        for (i, &d) in self.all_orders.iter().enumerate() {
            if d > 1 {
                out.push(x[(0, i)].rem_euclid(d));
            }
        }
        Some(out)
    }
}

/// Presentation of `ambient / sub` by invariant factors, with an explicit
/// projection and a section.
#[derive(Clone)]
pub struct QuotientPresentation {
    ambient: FinAbGroup,
    sub: AbSubgroup,
    q_moduli: Vec<i64>,
    /// Columns of the SNF transform giving quotient coordinates.
    proj: Mat,
    /// Rows lifting quotient unit vectors back to the ambient.
    lifts: Vec<Vec<i64>>,
    /// Indices of the kept (nontrivial) invariant factors.
    kept: Vec<usize>,
}

impl fmt::Debug for QuotientPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?} = Z{:?}", self.ambient, self.sub.canon_gens(), self.q_moduli)
    }
}

/// Quotient `ambient / sub` with invariant factors and projection maps.
pub fn quotient(ambient: &FinAbGroup, sub: &AbSubgroup) -> QuotientPresentation {
    assert_eq!(
        ambient, &sub.ambient,
        "subgroup does not live in the given ambient"
    );
    let snf = smith_normal_form(&sub.canon);
    let diag = snf.diag();
    let mut q_moduli = Vec::new();
    let mut lifts = Vec::new();
    let mut kept = Vec::new();
    for (i, &d) in diag.iter().enumerate() {
        if d > 1 {
            q_moduli.push(d);
            lifts.push(ambient.reduce(snf.c_inv.row(i)));
            kept.push(i);
        }
    }
    QuotientPresentation {
        ambient: ambient.clone(),
        sub: sub.clone(),
        q_moduli,
        proj: snf.c,
        lifts,
        kept,
    }
}

impl QuotientPresentation {
    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn sub(&self) -> &AbSubgroup {
        &self.sub
    }

    /// Invariant factors `q₁ | q₂ | …` of the quotient (all > 1).
    pub fn q_moduli(&self) -> &[i64] {
        &self.q_moduli
    }

    /// The quotient as an abstract group.
    pub fn group(&self) -> FinAbGroup {
        FinAbGroup { moduli: self.q_moduli.clone() }
    }

    pub fn order(&self) -> u128 {
        self.q_moduli.iter().map(|&m| m as u128).product()
    }

    /// Image of an ambient vector in quotient coordinates.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        let red = self.ambient.reduce(v);
        let x = Mat::from_rows(&[red]).mul(&self.proj);
        self.kept
            .iter()
            .zip(&self.q_moduli)
            .map(|(&i, &q)| x[(0, i)].rem_euclid(q))
            .collect()
    }

    /// A preimage of a quotient vector; `project(lift(q)) == q`.
    pub fn lift(&self, qv: &[i64]) -> Vec<i64> {
        debug_assert_eq!(qv.len(), self.q_moduli.len());
        let mut acc = self.ambient.zero();
        for (x, l) in qv.iter().zip(&self.lifts) {
            acc = self.ambient.add(&acc, &self.ambient.scale(*x, l));
        }
        acc
    }
}

/// A homomorphism from a subgroup into a quotient, stored by the images of
/// the subgroup's cyclic basis.
#[derive(Clone)]
pub struct AbHom {
    source: CyclicDecomposition,
    target: QuotientPresentation,
    gen_images: Vec<Vec<i64>>,
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom{:?}", self.gen_images)
    }
}

impl AbHom {
    pub fn source(&self) -> &AbSubgroup {
        &self.source.sub
    }

    pub fn target(&self) -> &QuotientPresentation {
        &self.target
    }

    /// Images of the cyclic-basis generators, in quotient coordinates.
    pub fn gen_images(&self) -> &[Vec<i64>] {
        &self.gen_images
    }

    /// Value at an arbitrary source member, in quotient coordinates.
    pub fn eval(&self, v: &[i64]) -> Vec<i64> {
        let coords = self
            .source
            .coords(v)
            .expect("eval called on a non-member of the source subgroup");
        let tg = self.target.group();
        let mut acc = tg.zero();
        for (x, img) in coords.iter().zip(&self.gen_images) {
            acc = tg.add(&acc, &tg.scale(*x, img));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.gen_images.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Kernel as a subgroup of the source's ambient group.
    pub fn kernel(&self) -> AbSubgroup {
        let tg = self.target.group();
        let lattice = if self.gen_images.is_empty() {
            Vec::new()
        } else {
            kernel_lattice(&Mat::from_rows(&self.gen_images), tg.moduli())
        };
        // Map kernel coordinates back through the cyclic generators, then
        // add the relations orders·gᵢ = 0.
        let amb = &self.source.sub.ambient;
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for x in &lattice {
            let mut acc = amb.zero();
            for (c, g) in x.iter().zip(&self.source.gens) {
                acc = amb.add(&acc, &amb.scale(*c, g));
            }
            gens.push(acc);
        }
        subgroup(amb, &gens)
    }
}

/// Generators of `{x ∈ Z^t : x·images ≡ 0 (mod moduli)}`.
fn kernel_lattice(images: &Mat, moduli: &[i64]) -> Vec<Vec<i64>> {
    let t = images.nrows();
    let s = images.ncols();
    debug_assert_eq!(s, moduli.len());
    let mut rows = images.rows_vec();
    for (i, &m) in moduli.iter().enumerate() {
        let mut rel = vec![0i64; s];
        rel[i] = m;
        rows.push(rel);
    }
    let stacked = Mat::from_rows(&rows);
    let snf = smith_normal_form(&stacked);
    let diag = snf.diag();
    let mut gens = Vec::new();
    for i in 0..stacked.nrows() {
        let zero_row = i >= diag.len() || diag[i] == 0;
        if zero_row {
            gens.push(snf.r.row(i)[..t].to_vec());
        }
    }
    gens
}

/// Whether a map given on generators extends to a homomorphism
/// `Z_{src_moduli} → Z_{tgt_moduli}` with `φ(gens[i]) = images[i]`.
///
/// Decided by linear solvability: a matrix `F` must exist with
/// `gens·F ≡ images` and `diag(src_moduli)·F ≡ 0`, componentwise mod the
/// target moduli.
pub fn hom_exists_on_generators(
    src: &FinAbGroup,
    gens: &[Vec<i64>],
    tgt: &FinAbGroup,
    images: &[Vec<i64>],
) -> bool {
    assert_eq!(gens.len(), images.len());
    let k = src.rank();
    let mut rows: Vec<Vec<i64>> = gens.iter().map(|g| src.reduce(g)).collect();
    let mut rhs: Vec<Vec<i64>> = images.iter().map(|v| tgt.reduce(v)).collect();
    for i in 0..k {
        let mut rel = vec![0i64; k];
        rel[i] = src.moduli[i];
        rows.push(rel);
        rhs.push(tgt.zero());
    }
    let a = Mat::from_rows(&rows);
    let snf = smith_normal_form(&a);
    let diag = snf.diag();
    let rb = snf.r.mul(&Mat::from_rows(&rhs));
    // After diagonalizing, each equation reads dᵢ·y ≡ bᵢ (mod q) per target
    // coordinate: solvable iff gcd(dᵢ, q) | bᵢ, with dᵢ = 0 demanding q | bᵢ.
    for (col, &q) in tgt.moduli.iter().enumerate() {
        for i in 0..rows.len() {
            let d = if i < diag.len() { diag[i] } else { 0 };
            let b = rb[(i, col)];
            let g = if d == 0 { q } else { num_integer::gcd(d, q) };
            if b.rem_euclid(g.max(1)) != 0 {
                return false;
            }
        }
    }
    true
}

/// All subgroups `H` with `containing ≤ H ≤ ambient` and
/// `[ambient : H] = index`, sorted by canonical form.
///
/// They are computed inside `ambient/containing` as kernels of surjections
/// onto each abelian group of order `index`, then pulled back. Returns an
/// empty list when no such subgroup exists.
pub fn subgroups_of_index(
    ambient: &FinAbGroup,
    index: u128,
    containing: &AbSubgroup,
) -> Vec<AbSubgroup> {
    assert_eq!(ambient, containing.ambient());
    if index == 1 {
        return vec![ambient.full_subgroup()];
    }
    if containing.index() % index != 0 {
        return Vec::new();
    }
    let q = quotient(ambient, containing);
    let qg = q.group();
    let mut found: Vec<AbSubgroup> = Vec::new();
    for target_moduli in abelian_groups_of_order(index) {
        let tg = FinAbGroup { moduli: target_moduli };
        for images in homs_on_basis(&qg, &tg) {
            // Surjective iff the images generate the target.
            if !subgroup(&tg, &images).is_full() {
                continue;
            }
            let lattice = kernel_lattice(&Mat::from_rows(&images), tg.moduli());
            let mut gens: Vec<Vec<i64>> = containing.gens.clone();
            for x in &lattice {
                // x is a coordinate vector over the quotient basis.
                gens.push(q.lift(&qg.reduce(x)));
            }
            let h = subgroup(ambient, &gens);
            if h.index() == index && !found.contains(&h) {
                found.push(h);
            }
        }
    }
    found.sort();
    found
}

/// Enumerates, for each basis generator of `src` (one per modulus), every
/// image in `tgt` whose order divides that modulus; the cartesian product
/// in lexicographic order.
fn homs_on_basis(src: &FinAbGroup, tgt: &FinAbGroup) -> Vec<Vec<Vec<i64>>> {
    let all = tgt
        .elements()
        .expect("hom enumeration requires a small target");
    let mut per_gen: Vec<Vec<Vec<i64>>> = Vec::new();
    for &m in src.moduli() {
        per_gen.push(
            all.iter()
                .filter(|v| tgt.scale(m, v).iter().all(|&x| x == 0))
                .cloned()
                .collect(),
        );
    }
    cartesian(&per_gen)
}

fn cartesian(choices: &[Vec<Vec<i64>>]) -> Vec<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for tuple in &out {
            for v in c {
                let mut t = tuple.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// All homomorphisms from a subgroup into a quotient, duplicate-free, in a
/// deterministic order (lexicographic over the image tuples).
pub fn homs(source: &AbSubgroup, target: &QuotientPresentation) -> Vec<AbHom> {
    let dec = source.cyclic_decomposition();
    let tg = target.group();
    let all = tg
        .elements()
        .expect("hom enumeration requires a small quotient");
    let mut per_gen: Vec<Vec<Vec<i64>>> = Vec::new();
    for &d in &dec.orders {
        per_gen.push(
            all.iter()
                .filter(|v| tg.scale(d, v).iter().all(|&x| x == 0))
                .cloned()
                .collect(),
        );
    }
    cartesian(&per_gen)
        .into_iter()
        .map(|gen_images| AbHom {
            source: dec.clone(),
            target: target.clone(),
            gen_images,
        })
        .collect()
}

/// One moduli list per isomorphism class of abelian groups of order `d`
/// (primary decomposition), deterministically ordered.
pub fn abelian_groups_of_order(d: u128) -> Vec<Vec<i64>> {
    if d == 1 {
        return vec![vec![]];
    }
    let factors = factorize(d);
    let mut per_prime: Vec<Vec<Vec<i64>>> = Vec::new();
    for &(p, e) in &factors {
        let mut shapes = Vec::new();
        for part in partitions(e) {
            shapes.push(
                part.iter()
                    .map(|&a| (p as i64).pow(a as u32))
                    .collect::<Vec<i64>>(),
            );
        }
        per_prime.push(shapes);
    }
    let mut out = cartesian(&per_prime)
        .into_iter()
        .map(|combo| combo.into_iter().flatten().collect::<Vec<i64>>())
        .collect::<Vec<_>>();
    out.sort();
    out
}

fn factorize(mut d: u128) -> Vec<(u128, usize)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= d {
        if d % p == 0 {
            let mut e = 0;
            while d % p == 0 {
                d /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

/// Partitions of `n` into non-increasing positive parts.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64, k: usize) -> FinAbGroup {
        FinAbGroup::power(n, k)
    }

    #[test]
    fn subgroup_orders_in_z4sq() {
        let g = z(4, 2);
        assert_eq!(g.trivial_subgroup().index(), 16);
        let s = subgroup(&g, &[vec![1, 1]]);
        assert_eq!(s.order(), 4);
        assert_eq!(s.index(), 4);
        let s2 = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        assert_eq!(s2.order(), 8);
        assert_eq!(s2.index(), 2);
    }

    #[test]
    fn canonical_form_is_generating_set_independent() {
        let g = z(4, 2);
        let a = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        let b = subgroup(&g, &[vec![3, 3], vec![1, 3]]);
        assert_eq!(a, b);
        assert!(a.member(&[3, 1]));
        assert!(!a.member(&[1, 0]));
    }

    #[test]
    fn coset_reps_are_lex_least() {
        let g = z(4, 2);
        let s = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        let reps = s.coset_reps().unwrap();
        assert_eq!(reps, vec![vec![0, 0], vec![0, 1]]);
        for rep in &reps {
            assert_eq!(&s.coset_rep(rep), rep);
        }
        assert_eq!(s.coset_rep(&[3, 2]), vec![0, 1]);
    }

    #[test]
    fn quotient_z4sq_by_diagonal() {
        let g = z(4, 2);
        let s = subgroup(&g, &[vec![1, 1]]);
        let q = quotient(&g, &s);
        assert_eq!(q.q_moduli(), &[4]);
        assert_eq!(q.project(&[1, 1]), vec![0]);
        let lifted = q.lift(&[1]);
        assert_eq!(q.project(&lifted), vec![1]);
    }

    #[test]
    fn quotient_of_master_compatibility_subgroup() {
        // Z4^6 / <e1+e2, e2+e3, f1+f2, f2+f3> = Z4^2, |K| = 4^4.
        let g = z(4, 6);
        let k = subgroup(
            &g,
            &[
                vec![1, 1, 0, 0, 0, 0],
                vec![0, 1, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 0],
                vec![0, 0, 0, 0, 1, 1],
            ],
        );
        assert_eq!(k.order(), 256);
        let q = quotient(&g, &k);
        assert_eq!(q.q_moduli(), &[4, 4]);
    }

    #[test]
    fn seven_index4_subgroups_of_z4sq() {
        let g = z(4, 2);
        let subs = subgroups_of_index(&g, 4, &g.trivial_subgroup());
        assert_eq!(subs.len(), 7);
        // 6 cyclic ones plus 2·Z4².
        let expected: Vec<AbSubgroup> = vec![
            subgroup(&g, &[vec![1, 1]]),
            subgroup(&g, &[vec![1, 2]]),
            subgroup(&g, &[vec![1, 3]]),
            subgroup(&g, &[vec![1, 0]]),
            subgroup(&g, &[vec![0, 1]]),
            subgroup(&g, &[vec![2, 1]]),
            subgroup(&g, &[vec![2, 0], vec![0, 2]]),
        ];
        for e in &expected {
            assert!(subs.contains(e), "missing {e:?}");
        }
    }

    #[test]
    fn index_one_returns_ambient() {
        let g = z(4, 2);
        let subs = subgroups_of_index(&g, 1, &g.trivial_subgroup());
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_full());
    }

    #[test]
    fn three_index2_subgroups_above_k_in_master() {
        let g = z(4, 6);
        let k = subgroup(
            &g,
            &[
                vec![1, 1, 0, 0, 0, 0],
                vec![0, 1, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 0],
                vec![0, 0, 0, 0, 1, 1],
            ],
        );
        let hs = subgroups_of_index(&g, 2, &k);
        assert_eq!(hs.len(), 3);
        for h in &hs {
            assert!(h.contains(&k));
            assert_eq!(h.index(), 2);
        }
    }

    #[test]
    fn hom_counts() {
        let g = z(4, 2);
        // target trivial -> exactly one hom
        let full = g.full_subgroup();
        let q_triv = quotient(&g, &full);
        assert_eq!(homs(&full, &q_triv).len(), 1);

        // source = <(1,1),(2,0)> = Z4 ⊕ Z2, target of order 2 -> 4 homs
        let s = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        let h = subgroup(&g, &[vec![1, 0], vec![0, 2]]);
        let q2 = quotient(&g, &h);
        assert_eq!(q2.order(), 2);
        assert_eq!(homs(&s, &q2).len(), 4);

        // source = Z4² full, target Z2 -> 4 homs
        assert_eq!(homs(&full, &q2).len(), 4);
    }

    #[test]
    fn hom_eval_is_additive() {
        let g = z(4, 2);
        let s = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        let h = subgroup(&g, &[vec![1, 0], vec![0, 2]]);
        let q = quotient(&g, &h);
        let members: Vec<Vec<i64>> = g
            .elements()
            .unwrap()
            .into_iter()
            .filter(|v| s.member(v))
            .collect();
        assert_eq!(members.len(), 8);
        let tg = q.group();
        for hom in homs(&s, &q) {
            for a in &members {
                for b in &members {
                    let lhs = hom.eval(&g.add(a, b));
                    let rhs = tg.add(&hom.eval(a), &hom.eval(b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn cyclic_decomposition_reconstructs_members() {
        let g = z(4, 2);
        let s = subgroup(&g, &[vec![1, 1], vec![2, 0]]);
        let dec = s.cyclic_decomposition();
        let mut orders = dec.orders.clone();
        orders.sort();
        assert_eq!(orders, vec![2, 4]);
        for v in g.elements().unwrap().iter().filter(|v| s.member(v)) {
            let coords = dec.coords(v).expect("member must have coordinates");
            let mut acc = g.zero();
            for (x, gen) in coords.iter().zip(&dec.gens) {
                acc = g.add(&acc, &g.scale(*x, gen));
            }
            assert_eq!(&acc, v);
        }
        assert!(dec.coords(&[1, 0]).is_none());
    }

    #[test]
    fn abelian_groups_of_small_orders() {
        assert_eq!(abelian_groups_of_order(1), vec![Vec::<i64>::new()]);
        assert_eq!(abelian_groups_of_order(4).len(), 2); // Z4, Z2²
        assert_eq!(abelian_groups_of_order(6).len(), 1); // Z6
        assert_eq!(abelian_groups_of_order(8).len(), 3);
        assert_eq!(abelian_groups_of_order(12).len(), 2);
    }

    #[test]
    fn element_orders() {
        let g = z(4, 2);
        assert_eq!(g.element_order(&[0, 0]), 1);
        assert_eq!(g.element_order(&[2, 0]), 2);
        assert_eq!(g.element_order(&[1, 2]), 4);
    }
}
