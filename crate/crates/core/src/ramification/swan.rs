use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{Herbrand, RamFiltration, Representation, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwanReport {
    pub swan: Q,
    /// Break decomposition: `(λ, multiplicity)` sorted by `λ`, zero
    /// multiplicities omitted.
    pub breaks: Vec<(Q, u64)>,
    /// `(x_j, dim V^{G_{j+1}} - dim V^{G_j})` for every lower jump `j >= 1`,
    /// with `x_j = φ(j)`.
    pub per_jump_terms: Vec<(Q, u64)>,
}

fn check_compatible(rep: &Representation, filt: &RamFiltration) -> Result<()> {
    if rep.group() != filt.group() {
        return Err(Error::GroupMismatch);
    }
    if rep.ell() == filt.residue_characteristic() {
        return Err(Error::InvalidInput(format!(
            "coefficient characteristic ℓ = {} equals the residue characteristic",
            rep.ell()
        )));
    }
    Ok(())
}

/// `Σ_{i>=1} |G_i|/|G_0| · (r - dim V^{G_i})`.
pub fn swan_by_filtration(rep: &Representation, filt: &RamFiltration) -> Result<Q> {
    check_compatible(rep, filt)?;
    let g0 = filt.order(0) as i64;
    let r = rep.rank() as i64;
    let mut sum = Q::from_integer(0);
    for i in 1..=filt.i_max() {
        let fixed = rep.fixed_dimension(filt.g(i))? as i64;
        sum += Q::new(filt.order(i) as i64 * (r - fixed), g0);
    }
    Ok(sum)
}

/// Slopes of `V`: `0` with multiplicity `dim V^{G_1}`, and `φ(j)` with
/// multiplicity `dim V^{G_{j+1}} - dim V^{G_j}` for each lower jump `j >= 1`.
pub fn break_decomposition(rep: &Representation, filt: &RamFiltration) -> Result<Vec<(Q, u64)>> {
    Ok(decompose(rep, filt)?.0)
}

#[allow(clippy::type_complexity)]
fn decompose(rep: &Representation, filt: &RamFiltration) -> Result<(Vec<(Q, u64)>, Vec<(Q, u64)>)> {
    check_compatible(rep, filt)?;
    let phi = Herbrand::phi(filt);
    let mut mult: BTreeMap<Q, u64> = BTreeMap::new();
    let tame_part = rep.fixed_dimension(filt.g(1))? as u64;
    if tame_part > 0 {
        mult.insert(Q::from_integer(0), tame_part);
    }
    let mut terms = Vec::new();
    for j in filt.lower_jumps().into_iter().filter(|&j| j >= 1) {
        let inc = rep.fixed_dimension(filt.g(j + 1))? - rep.fixed_dimension(filt.g(j))?;
        let x = phi.eval(Q::from_integer(j));
        terms.push((x, inc as u64));
        if inc > 0 {
            *mult.entry(x).or_default() += inc as u64;
        }
    }
    Ok((mult.into_iter().collect(), terms))
}

/// Swan conductor, computed from the filtration and cross-checked against
/// the break decomposition.
pub fn swan_conductor(rep: &Representation, filt: &RamFiltration) -> Result<SwanReport> {
    let swan = swan_by_filtration(rep, filt)?;
    let (breaks, per_jump_terms) = decompose(rep, filt)?;
    let from_breaks: Q = breaks
        .iter()
        .map(|&(l, m)| l * Q::from_integer(m as i64))
        .sum();
    if from_breaks != swan {
        return Err(Error::MismatchDetected(format!(
            "filtration sum {swan} ≠ break decomposition sum {from_breaks}"
        )));
    }
    let total: u64 = breaks.iter().map(|b| b.1).sum();
    if total != rep.rank() as u64 {
        return Err(Error::MismatchDetected(format!(
            "break multiplicities sum to {total}, rank is {}",
            rep.rank()
        )));
    }
    Ok(SwanReport {
        swan,
        breaks,
        per_jump_terms,
    })
}

/// `φ(u) · r` for the unique lower jump `u >= 1`, when `V^{G_u} = 0`.
pub fn swan_single_break(rep: &Representation, filt: &RamFiltration, phi: &Herbrand) -> Result<Q> {
    check_compatible(rep, filt)?;
    let jumps: Vec<i64> = filt.lower_jumps().into_iter().filter(|&j| j >= 1).collect();
    let [u] = jumps[..] else {
        return Err(Error::PreconditionFailed(format!(
            "expected exactly one lower jump u >= 1, found {}",
            jumps.len()
        )));
    };
    let fixed = rep.fixed_dimension(filt.g(u))?;
    if fixed != 0 {
        return Err(Error::PreconditionFailed(format!(
            "G_{u} fixes a subspace of dimension {fixed}"
        )));
    }
    Ok(phi.eval(Q::from_integer(u)) * Q::from_integer(rep.rank() as i64))
}
