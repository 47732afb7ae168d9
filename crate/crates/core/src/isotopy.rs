//! (π₁,π₂)-isotopes of solutions and the distinguished (U,T)-isotope of
//! 2-permutational solutions.

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::solution::{diagonal_maps, Solution};
use crate::structure;

#[derive(Clone, Debug)]
pub struct IsotopyPair {
    pub p1: Perm,
    pub p2: Perm,
}

impl IsotopyPair {
    pub fn new(p1: Perm, p2: Perm) -> IsotopyPair {
        IsotopyPair { p1, p2 }
    }

    pub fn identity(n: usize) -> IsotopyPair {
        IsotopyPair { p1: Perm::identity(n), p2: Perm::identity(n) }
    }
}

fn is_automorphism(s: &Solution, p: &Perm) -> bool {
    let n = s.n();
    (0..n).all(|x| {
        let conj = p.compose(&s.sigma_perm(x)).compose(&p.inverse());
        let conj_t = p.compose(&s.tau_perm(x)).compose(&p.inverse());
        conj == s.sigma_perm(p.apply(x)) && conj_t == s.tau_perm(p.apply(x))
    })
}

/// Evaluates the general isotopy conditions for (π₁, π₂) on a verified
/// solution. For 2-reductive inputs the reduced conditions are evaluated
/// too, and when both maps are automorphisms also the commuting-row
/// criterion; all routes must agree.
pub fn check_isotopy(s: &Solution, p: &IsotopyPair) -> Result<bool> {
    let n = s.n();
    if p.p1.degree() != n || p.p2.degree() != n {
        return Err(Error::Structure("isotopy pair degree mismatch".into()));
    }
    let sigma: Vec<Perm> = (0..n).map(|x| s.sigma_perm(x)).collect();
    let tau: Vec<Perm> = (0..n).map(|x| s.tau_perm(x)).collect();
    let (p1, p2) = (&p.p1, &p.p2);

    // σₓπ₁σ_y = σ_{σₓπ₁(y)} π₁ σ_{τ_yπ₂(x)}
    let gis1 = (0..n).all(|x| {
        (0..n).all(|y| {
            let lhs = sigma[x].compose(p1).compose(&sigma[y]);
            let rhs = sigma[sigma[x].apply(p1.apply(y))]
                .compose(p1)
                .compose(&sigma[tau[y].apply(p2.apply(x))]);
            lhs == rhs
        })
    });
    // τₓπ₂τ_y = τ_{τₓπ₂(y)} π₂ τ_{σ_yπ₁(x)}
    let gis3 = (0..n).all(|x| {
        (0..n).all(|y| {
            let lhs = tau[x].compose(p2).compose(&tau[y]);
            let rhs = tau[tau[x].apply(p2.apply(y))]
                .compose(p2)
                .compose(&tau[sigma[y].apply(p1.apply(x))]);
            lhs == rhs
        })
    });
    // τ_{σ_{τ_yπ₂(x)}π₁(z)} π₂ σₓ π₁ (y) = σ_{τ_{σ_yπ₁(z)}π₂(x)} π₁ τ_z π₂ (y)
    let gis2 = (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                let li = sigma[tau[y].apply(p2.apply(x))].apply(p1.apply(z));
                let lhs = tau[li].apply(p2.apply(sigma[x].apply(p1.apply(y))));
                let ri = tau[sigma[y].apply(p1.apply(x))].apply(p2.apply(z));
                let rhs = sigma[ri].apply(p1.apply(tau[z].apply(p2.apply(y))));
                lhs == rhs
            })
        })
    });
    let general = gis1 && gis3 && gis2;

    let (two_reductive, _) = structure::reductivity_flags(s);
    if two_reductive {
        // Lₓπ₁L_y = L_{π₁(y)} π₁ L_{π₂(x)}  (rows are the L's here)
        let is1 = (0..n).all(|x| {
            (0..n).all(|y| {
                sigma[x].compose(p1).compose(&sigma[y])
                    == sigma[p1.apply(y)].compose(p1).compose(&sigma[p2.apply(x)])
            })
        });
        let is3 = (0..n).all(|x| {
            (0..n).all(|y| {
                tau[x].compose(p2).compose(&tau[y])
                    == tau[p2.apply(y)].compose(p2).compose(&tau[p1.apply(x)])
            })
        });
        // R_{π₁(y)} π₂ Lₓ π₁ = L_{π₂(x)} π₁ R_y π₂
        let is2 = (0..n).all(|x| {
            (0..n).all(|y| {
                tau[p1.apply(y)].compose(p2).compose(&sigma[x]).compose(p1)
                    == sigma[p2.apply(x)].compose(p1).compose(&tau[y]).compose(p2)
            })
        });
        let reduced = is1 && is3 && is2;
        assert_eq!(
            general, reduced,
            "general and 2-reductive isotopy conditions disagree"
        );

        if is_automorphism(s, p1) && is_automorphism(s, p2) {
            let p12 = p1.compose(p2);
            let p21 = p2.compose(p1);
            let simple = (0..n).all(|x| sigma[x] == sigma[p12.apply(x)])
                && (0..n).all(|x| tau[x] == tau[p21.apply(x)])
                && p12 == p21;
            assert_eq!(
                general, simple,
                "automorphism criterion disagrees with the isotopy conditions"
            );
        }
    }

    Ok(general)
}

/// The (π₁,π₂)-isotope: tables λₓ = σₓ∘π₁, ρₓ = τₓ∘π₂. Requires
/// [`check_isotopy`] to hold; the result passes the axioms.
pub fn isotope(s: &Solution, p: &IsotopyPair) -> Result<Solution> {
    if !check_isotopy(s, p)? {
        return Err(Error::Contract(
            "the given pair does not satisfy the isotopy conditions".into(),
        ));
    }
    let n = s.n();
    let lambda: Vec<Perm> = (0..n).map(|x| s.sigma_perm(x).compose(&p.p1)).collect();
    let rho: Vec<Perm> = (0..n).map(|x| s.tau_perm(x).compose(&p.p2)).collect();
    let out = Solution::from_perm_rows(lambda, rho)?;
    out.ensure_verified()?;
    Ok(out)
}

/// The (U,T)-isotope of a 2-permutational solution: square-free and
/// 2-reductive, with tables equal to the derived actions L, R.
pub fn ut_isotope(s: &Solution) -> Result<Solution> {
    let (_, two_permutational) = structure::reductivity_flags(s);
    if !two_permutational {
        return Err(Error::Contract(
            "the (U,T)-isotope requires multipermutation level <= 2".into(),
        ));
    }
    let (u, t) = diagonal_maps(s);
    isotope(s, &IsotopyPair::new(u, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pair_is_always_admissible() {
        let s = crate::fixtures::involutive_four_point();
        let p = IsotopyPair::identity(4);
        assert!(check_isotopy(&s, &p).unwrap());
        let iso = isotope(&s, &p).unwrap();
        assert_eq!(iso, s);
    }

    #[test]
    fn ut_isotope_fixes_square_free_2_reductive() {
        // σₓ = τₓ = id: square-free and 2-reductive, U = T = id.
        let id = vec![0, 1, 2];
        let s = Solution::from_tables(vec![id.clone(); 3], vec![id; 3]).unwrap();
        let iso = ut_isotope(&s).unwrap();
        assert_eq!(iso, s);
    }

    #[test]
    fn ut_isotope_rejected_for_non_2_permutational() {
        let s = crate::fixtures::involutive_four_point();
        assert!(matches!(ut_isotope(&s), Err(Error::Contract(_))));
    }

    #[test]
    fn example_2_3_ut_pair_matches_bruteforce_conditions() {
        // Not 2-permutational, so no shortcut: check_isotopy must equal the
        // brute-force evaluation of the general conditions (trivially true
        // here since check_isotopy IS that evaluation; assert it returns a
        // definite value and does not error).
        let s = crate::fixtures::involutive_four_point();
        let (u, t) = diagonal_maps(&s);
        let _ = check_isotopy(&s, &IsotopyPair::new(u, t)).unwrap();
    }
}
