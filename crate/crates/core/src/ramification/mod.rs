//! Ramification filtrations, Herbrand functions and Swan conductors.
//!
//! Lower numbering follows `G_u = G_{⌈u⌉}` for real `u > 0`, so that
//! `φ` has slope `|G_i|/|G_0|` on `(i-1, i]` and
//! `φ(v) = (|G_1| + ... + |G_v|)/|G_0|` at positive integers. All values are
//! exact rationals.

mod filtration;
mod herbrand;
mod rep;
mod swan;
mod tower;

pub use filtration::RamFiltration;
pub use herbrand::{integer_point_sum, Herbrand};
pub use rep::Representation;
pub use swan::{
    break_decomposition, swan_by_filtration, swan_conductor, swan_single_break, SwanReport,
};
pub use tower::{
    phi_transitivity_check, pullback_bound_check, PullbackReport, TransitivityPoint,
    TransitivityReport,
};

use crate::cover::BreakTable;
use crate::error::{Error, Result};

pub type Q = num_rational::Rational64;

pub fn filtration_from_breaks(bt: &BreakTable) -> Result<RamFiltration> {
    RamFiltration::from_breaks(bt)
}

/// `φ(j)` for every lower jump `j >= 0`.
pub fn upper_jumps(filt: &RamFiltration) -> Vec<Q> {
    let phi = Herbrand::phi(filt);
    filt.lower_jumps()
        .into_iter()
        .map(|j| phi.eval(Q::from_integer(j)))
        .collect()
}

/// True iff every upper jump is an integer. Only defined for abelian `G_0`.
pub fn hasse_arf_check(filt: &RamFiltration) -> Result<bool> {
    if !filt.group().is_abelian() {
        return Err(Error::NotAbelian);
    }
    Ok(upper_jumps(filt).iter().all(|x| x.is_integer()))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{FiniteField, LaurentSeries, MatrixFF, PrecisionPolicy, EXACT};
    use crate::cover::{
        build_artin_schreier, build_compositum_tower, build_kummer, lower_break_table,
        trivial_cover, GaloisCover,
    };
    use crate::group::FiniteGroup;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn as_cover(p: u64, m: i64) -> GaloisCover {
        let k = FiniteField::new(p, 1).unwrap();
        let f = LaurentSeries::from_terms(&k, &[(-m, 1)], EXACT);
        build_artin_schreier(&k, &f, PrecisionPolicy::default()).unwrap()
    }

    fn filt_of(c: &GaloisCover) -> RamFiltration {
        RamFiltration::from_breaks(&lower_break_table(c, PrecisionPolicy::default()).unwrap())
            .unwrap()
    }

    /// Character of a cyclic group `Z/n` sending the generator to `z`.
    fn character(g: &FiniteGroup, k: &Arc<FiniteField>, z: u32) -> Representation {
        let m = MatrixFF::from_rows(k, &[vec![z]]).unwrap();
        Representation::from_generator_images(g.clone(), k, 1, &[(1, m)]).unwrap()
    }

    #[test]
    fn filtration_examples() {
        let f = filt_of(&as_cover(2, 1));
        assert_eq!(f.i_max(), 1);
        assert_eq!((f.order(0), f.order(1), f.order(2)), (2, 2, 1));

        let k4 = FiniteField::new(2, 2).unwrap();
        let f = filt_of(&build_kummer(&k4, 3).unwrap());
        assert_eq!((f.order(0), f.order(1)), (3, 1));
        assert!(f.is_tame());

        let f = filt_of(&trivial_cover(&k4));
        assert_eq!((f.order(0), f.i_max()), (1, 0));
    }

    #[test]
    fn wild_part_must_be_a_p_group() {
        let g = FiniteGroup::cyclic(3);
        let bt = BreakTable::new(g, 2, BTreeMap::from([(1, 2), (2, 2)])).unwrap();
        assert!(matches!(
            RamFiltration::from_breaks(&bt),
            Err(Error::NotPGroupWildPart(_))
        ));
    }

    #[test]
    fn herbrand_examples() {
        let phi = Herbrand::phi(&filt_of(&as_cover(2, 1)));
        assert_eq!(phi.eval(q(1, 2)), q(1, 2));
        assert_eq!(phi.eval(q(1, 1)), q(1, 1));
        assert_eq!(phi.eval(q(3, 1)), q(2, 1));
        phi.check_shape().unwrap();

        let phi = Herbrand::phi(&filt_of(&as_cover(2, 3)));
        assert_eq!(phi.eval(q(3, 1)), q(3, 1));
        assert_eq!(phi.final_slope(), q(1, 2));
        assert_eq!(phi.eval(q(5, 1)), q(4, 1));

        let k4 = FiniteField::new(2, 2).unwrap();
        let phi = Herbrand::phi(&filt_of(&build_kummer(&k4, 3).unwrap()));
        assert_eq!(phi.breakpoints(), &[(q(0, 1), q(0, 1)), (q(1, 1), q(1, 3))]);
        assert_eq!(phi.slopes(), &[q(1, 3), q(1, 3)]);

        let psi = phi.inverse();
        for u in [q(0, 1), q(1, 3), q(7, 2)] {
            assert_eq!(psi.eval(phi.eval(u)), u);
        }
    }

    #[test]
    fn upper_jumps_and_hasse_arf() {
        let f = filt_of(&as_cover(2, 3));
        assert_eq!(upper_jumps(&f), vec![q(3, 1)]);
        assert!(hasse_arf_check(&f).unwrap());

        let k4 = FiniteField::new(2, 2).unwrap();
        let t = build_compositum_tower(
            &build_kummer(&k4, 3).unwrap(),
            &LaurentSeries::from_terms(&k4, &[(-1, 1)], EXACT),
            PrecisionPolicy::default(),
        )
        .unwrap();
        let f = filt_of(&t);
        assert_eq!(upper_jumps(&f), vec![q(0, 1), q(1, 1)]);
        assert!(hasse_arf_check(&f).unwrap());

        // S3 with G_1 = A3 in characteristic 3
        let s3 = s3_group();
        let a3: Vec<usize> = s3.p_elements(3);
        let bt = BreakTable::new(
            s3.clone(),
            3,
            s3.elements()
                .filter(|&x| x != s3.identity())
                .map(|x| (x, if a3.contains(&x) { 2 } else { 1 }))
                .collect(),
        )
        .unwrap();
        let f = RamFiltration::from_breaks(&bt).unwrap();
        assert_eq!(hasse_arf_check(&f), Err(Error::NotAbelian));
    }

    fn s3_group() -> FiniteGroup {
        // permutations of {0,1,2} composed left to right
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|&x| x == p).unwrap();
        let mut table = vec![0; 36];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                table[i * 6 + j] = idx([a[b[0]], a[b[1]], a[b[2]]]);
            }
        }
        FiniteGroup::from_table(
            6,
            table,
            (0..6).map(|i| format!("p{i}")).collect(),
            vec![1, 3],
        )
        .unwrap()
    }

    #[test]
    fn swan_examples() {
        let k3 = FiniteField::new(3, 1).unwrap();
        let f1 = filt_of(&as_cover(2, 1));
        let chi = character(f1.group(), &k3, 2);
        let rep = swan_conductor(&chi, &f1).unwrap();
        assert_eq!(rep.swan, q(1, 1));
        assert_eq!(rep.breaks, vec![(q(1, 1), 1)]);

        let f3 = filt_of(&as_cover(2, 3));
        let chi3 = character(f3.group(), &k3, 2);
        assert_eq!(swan_conductor(&chi3, &f3).unwrap().swan, q(3, 1));
        assert_eq!(break_decomposition(&chi3, &f3).unwrap(), vec![(q(3, 1), 1)]);
        let phi3 = Herbrand::phi(&f3);
        assert_eq!(swan_single_break(&chi3, &f3, &phi3).unwrap(), q(3, 1));

        let triv = Representation::trivial(f3.group().clone(), &k3, 2);
        assert_eq!(break_decomposition(&triv, &f3).unwrap(), vec![(q(0, 1), 2)]);
        assert!(matches!(
            swan_single_break(&triv, &f3, &phi3),
            Err(Error::PreconditionFailed(_))
        ));

        let sum = chi
            .direct_sum(&Representation::trivial(f1.group().clone(), &k3, 1))
            .unwrap();
        assert_eq!(
            break_decomposition(&sum, &f1).unwrap(),
            vec![(q(0, 1), 1), (q(1, 1), 1)]
        );

        let k4 = FiniteField::new(2, 2).unwrap();
        let k7 = FiniteField::new(7, 1).unwrap();
        let tame = filt_of(&build_kummer(&k4, 3).unwrap());
        let chi = character(tame.group(), &k7, 2);
        assert_eq!(swan_conductor(&chi, &tame).unwrap().swan, q(0, 1));
    }

    #[test]
    fn swan_rejects_mismatches() {
        let k3 = FiniteField::new(3, 1).unwrap();
        let f = filt_of(&as_cover(3, 1));
        let other = Representation::trivial(FiniteGroup::cyclic(2), &k3, 1);
        assert_eq!(swan_conductor(&other, &f), Err(Error::GroupMismatch));
        let same_char = Representation::trivial(f.group().clone(), &k3, 1);
        assert!(matches!(
            swan_conductor(&same_char, &f),
            Err(Error::InvalidInput(_))
        ));
    }

    fn z6_tower() -> GaloisCover {
        let k4 = FiniteField::new(2, 2).unwrap();
        build_compositum_tower(
            &build_kummer(&k4, 3).unwrap(),
            &LaurentSeries::from_terms(&k4, &[(-1, 1)], EXACT),
            PrecisionPolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn transitivity_on_z6() {
        let rep = phi_transitivity_check(&z6_tower(), PrecisionPolicy::default()).unwrap();
        assert!(rep.quotient_consistent);
        assert!(rep.points.iter().all(|p| p.residual == q(0, 1)));
        assert_eq!(rep.phi_l_k.eval(q(5, 1)), q(4, 3));
    }

    #[test]
    fn transitivity_degenerate_layers() {
        let k = FiniteField::new(3, 1).unwrap();
        let f = LaurentSeries::from_terms(&k, &[(-2, 1)], EXACT);
        let t = build_compositum_tower(&trivial_cover(&k), &f, PrecisionPolicy::default()).unwrap();
        let rep = phi_transitivity_check(&t, PrecisionPolicy::default()).unwrap();
        assert_eq!(rep.phi_l_k, rep.phi_l_kp);
        assert_eq!(rep.phi_kp_k, Herbrand::phi(&filt_of(&trivial_cover(&k))));
    }

    #[test]
    fn pullback_on_z6() {
        let t = z6_tower();
        let k7 = FiniteField::new(7, 1).unwrap();
        let g = t.group().clone();
        // (1,0) at index 3 ↦ -1, (0,1) at index 1 ↦ 1: the wild character
        let m = |z: u32| MatrixFF::from_rows(&k7, &[vec![z]]).unwrap();
        let wild =
            Representation::from_generator_images(g.clone(), &k7, 1, &[(3, m(6)), (1, m(1))])
                .unwrap();
        let rep = pullback_bound_check(&t, &wild, PrecisionPolicy::default()).unwrap();
        assert_eq!(
            (rep.sw_k, rep.sw_k_prime, rep.degree),
            (q(1, 1), q(3, 1), 3)
        );
        assert!(rep.holds && rep.equality);

        let triv = Representation::trivial(g, &k7, 1);
        let rep = pullback_bound_check(&t, &triv, PrecisionPolicy::default()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.sw_k_prime, q(0, 1));
    }
}
