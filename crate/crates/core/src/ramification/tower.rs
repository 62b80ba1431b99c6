//! Checks on a tower `K ⊂ K' ⊂ L` with `H = Gal(L/K')`.

use crate::algebra::PrecisionPolicy;
use crate::cover::{lower_break_table, GaloisCover, Intermediate};
use crate::error::{Error, Result};

use super::{swan_conductor, Herbrand, RamFiltration, Representation, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityPoint {
    pub u: Q,
    pub lhs: Q,
    pub rhs: Q,
    pub residual: Q,
}

#[derive(Clone, Debug)]
pub struct TransitivityReport {
    pub phi_l_k: Herbrand,
    pub phi_l_kp: Herbrand,
    pub phi_kp_k: Herbrand,
    /// The filtration of `Gal(K'/K)` from Herbrand's theorem has the same
    /// subgroup orders as the one read off the lower cover.
    pub quotient_consistent: bool,
    pub points: Vec<TransitivityPoint>,
}

fn intermediate(cover: &GaloisCover) -> Result<&Intermediate> {
    cover.intermediate().ok_or_else(|| {
        Error::PreconditionFailed("the cover has no marked intermediate field".into())
    })
}

fn orders(filt: &RamFiltration) -> Vec<usize> {
    (0..=filt.i_max() + 1).map(|i| filt.order(i)).collect()
}

/// Verifies `φ_{L/K} = φ_{K'/K} ∘ φ_{L/K'}` exactly at every breakpoint of
/// either inner function and at the integers `0..=i_max + 2`.
///
/// `φ_{L/K}` comes from the tower's own breaks, `φ_{L/K'}` from the
/// restriction to `H` (cross-checked with the upper cover built over `K'`),
/// and `φ_{K'/K}` from the lower cover's series.
pub fn phi_transitivity_check(
    cover: &GaloisCover,
    policy: PrecisionPolicy,
) -> Result<TransitivityReport> {
    let inter = intermediate(cover)?;
    let filt = RamFiltration::from_breaks(&lower_break_table(cover, policy)?)?;
    let (filt_h, _) = filt.restrict(&inter.subgroup)?;
    let upper = RamFiltration::from_breaks(&lower_break_table(&inter.upper, policy)?)?;
    if orders(&upper) != orders(&filt_h) {
        return Err(Error::MismatchDetected(
            "filtration of Gal(L/K') differs between the tower and the upper cover".into(),
        ));
    }
    let lower = RamFiltration::from_breaks(&lower_break_table(&inter.lower, policy)?)?;

    let phi_l_k = Herbrand::phi(&filt);
    let phi_l_kp = Herbrand::phi(&filt_h);
    let phi_kp_k = Herbrand::phi(&lower);

    let (via_quotient, _) = filt.quotient(&inter.subgroup, &phi_l_kp)?;
    let quotient_consistent = orders(&via_quotient) == orders(&lower);

    let mut us: Vec<Q> = (0..=filt.i_max() + 2).map(Q::from_integer).collect();
    us.extend(phi_l_k.breakpoints().iter().map(|b| b.0));
    us.extend(phi_l_kp.breakpoints().iter().map(|b| b.0));
    us.sort();
    us.dedup();

    let mut points = Vec::with_capacity(us.len());
    for u in us {
        let lhs = phi_l_k.eval(u);
        let rhs = phi_kp_k.eval(phi_l_kp.eval(u));
        let residual = lhs - rhs;
        if residual != Q::from_integer(0) {
            return Err(Error::MismatchDetected(format!(
                "φ_L/K({u}) = {lhs} but φ_K'/K(φ_L/K'({u})) = {rhs}"
            )));
        }
        points.push(TransitivityPoint {
            u,
            lhs,
            rhs,
            residual,
        });
    }
    if !quotient_consistent {
        return Err(Error::MismatchDetected(
            "quotient filtration disagrees with the lower cover".into(),
        ));
    }
    Ok(TransitivityReport {
        phi_l_k,
        phi_l_kp,
        phi_kp_k,
        quotient_consistent,
        points,
    })
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub sw_k: Q,
    pub sw_k_prime: Q,
    /// `[K':K]`.
    pub degree: u64,
    pub holds: bool,
    pub equality: bool,
    pub phi_l_k: Herbrand,
    pub phi_l_kp: Herbrand,
}

/// `Sw(ρ|_{K'}) <= [K':K] · Sw(ρ)`, with `ρ|_{K'}` the restriction to
/// `H = Gal(L/K')` and `H_u = G_u ∩ H`. The Swan conductor over `K'` is
/// also computed from the upper cover's own breaks and must agree.
pub fn pullback_bound_check(
    cover: &GaloisCover,
    rep: &Representation,
    policy: PrecisionPolicy,
) -> Result<PullbackReport> {
    let inter = intermediate(cover)?;
    let filt = RamFiltration::from_breaks(&lower_break_table(cover, policy)?)?;
    let sw_k = swan_conductor(rep, &filt)?.swan;

    let (filt_h, emb) = filt.restrict(&inter.subgroup)?;
    let rep_h = rep.restrict(filt_h.group().clone(), &emb)?;
    let sw_k_prime = swan_conductor(&rep_h, &filt_h)?.swan;

    let upper = RamFiltration::from_breaks(&lower_break_table(&inter.upper, policy)?)?;
    let rep_upper = rep.restrict(upper.group().clone(), &inter.upper_embedding)?;
    let independent = swan_conductor(&rep_upper, &upper)?.swan;
    if independent != sw_k_prime {
        return Err(Error::MismatchDetected(format!(
            "Swan over K' is {sw_k_prime} by restriction but {independent} from the upper cover"
        )));
    }

    let degree = inter.lower.degree();
    let bound = sw_k * Q::from_integer(degree as i64);
    Ok(PullbackReport {
        sw_k,
        sw_k_prime,
        degree,
        holds: sw_k_prime <= bound,
        equality: sw_k_prime == bound,
        phi_l_k: Herbrand::phi(&filt),
        phi_l_kp: Herbrand::phi(&filt_h),
    })
}
