//! Bounds on the image of wild inertia under a mod-`ℓ` representation.
//!
//! Given the image `Ī ⊂ GL_r(F_{ℓ^n})` of inertia, with normal `p`-Sylow
//! subgroup `P̄` and cyclic quotient `Ī/P̄ ≅ Z/M`, this module finds the
//! subgroup `H` of a complement that centralizes `P̄` (the kernel of the
//! conjugation action `Z/M → Aut(P̄)`), evaluates the explicit constants
//! bounding `|P̄|` and `[Ī:H]` in terms of `(ℓ, r, N)`, and checks the
//! counting identities for decomposition and inertia groups of branches.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::algebra::MatrixFF;
use crate::error::{Error, Result};
use crate::group::{is_power_of, FiniteGroup};
use crate::group_enum::group_from_matrices;
use crate::ramification::{swan_conductor, RamFiltration, Representation, Q};

/// Largest `M0` for which `M0!` is computed exactly.
pub const FACTORIAL_CAP: u64 = 5000;

/// Largest exponent `N'` for which `p^{N'}` is expanded.
const EXPONENT_CAP: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct InertiaStructure {
    pub group: FiniteGroup,
    pub p: u64,
    pub ell: u64,
    /// Matrix size `r`.
    pub r: usize,
    /// `P̄`, the elements of `p`-power order.
    pub p_sylow: Vec<usize>,
    /// `M = |Ī/P̄|`.
    pub m: u64,
    /// `n` with `M = ℓ^n · M'`, `ℓ ∤ M'`.
    pub ell_exponent: u32,
    pub m_prime: u64,
}

impl InertiaStructure {
    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }

    pub fn p_sylow_order(&self) -> u64 {
        self.p_sylow.len() as u64
    }
}

/// Reads off `P̄`, `M`, `n`, `M'` from a finite matrix group, failing if it
/// does not have the shape `1 → P̄ → Ī → Z/M → 1` with `p ∤ M`.
pub fn inertia_structure(elements: &[MatrixFF], p: u64) -> Result<InertiaStructure> {
    let group = group_from_matrices(elements.to_vec())?;
    if group.order() != elements.len() {
        return Err(Error::NotAGroup("repeated elements".into()));
    }
    structure_of(group, p)
}

/// As [`inertia_structure`], for a group already carrying matrices.
pub fn structure_of(group: FiniteGroup, p: u64) -> Result<InertiaStructure> {
    let mats = group
        .matrices()
        .ok_or_else(|| Error::InvalidInput("group has no matrix realization".into()))?;
    let field = mats[0].field();
    let ell = field.characteristic() as u64;
    let r = mats[0].dim();
    if ell == p {
        return Err(Error::InvalidInput(format!("ℓ = p = {p}")));
    }
    let p_sylow = group.p_elements(p);
    if !group.is_subgroup(&p_sylow) || !group.is_normal(&p_sylow) {
        return Err(Error::PSylowNotNormal);
    }
    let (quotient, _) = group.quotient(&p_sylow)?;
    if !quotient.is_cyclic() {
        return Err(Error::QuotientNotCyclic);
    }
    let m = quotient.order() as u64;
    if m.is_multiple_of(p) {
        return Err(Error::PSylowNotNormal);
    }
    let mut m_prime = m;
    let mut ell_exponent = 0;
    while m_prime.is_multiple_of(ell) {
        m_prime /= ell;
        ell_exponent += 1;
    }
    Ok(InertiaStructure {
        group,
        p,
        ell,
        r,
        p_sylow,
        m,
        ell_exponent,
        m_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim1Report {
    /// `ℓ^{n-1} <= r` for the `ℓ`-exponent `n` of `M`.
    pub exponent_bound: bool,
    /// Every `ℓ`-element of order `ℓ^d` has `(σ - 1)` of nilpotency index
    /// `k` with `ℓ^{d-1} < k <= min(ℓ^d, r)`.
    pub elements_ok: bool,
    pub max_ell_order: u64,
}

impl Claim1Report {
    pub fn holds(&self) -> bool {
        self.exponent_bound && self.elements_ok
    }
}

pub fn claim1_check(s: &InertiaStructure, r: usize) -> Claim1Report {
    let r = r as u64;
    let exponent_bound = s.ell_exponent == 0 || s.ell.pow(s.ell_exponent - 1) <= r;
    let mats = s.group.matrices().expect("structure groups carry matrices");
    let g = &s.group;
    let mut elements_ok = true;
    let mut max_ell_order = 1;
    for x in g.p_elements(s.ell) {
        let order = g.element_order(x);
        max_ell_order = max_ell_order.max(order);
        if order == 1 {
            continue;
        }
        let id = MatrixFF::identity(mats[x].field(), mats[x].dim());
        let k = mats[x]
            .sub(&id)
            .ok()
            .and_then(|d| d.nilpotency_index())
            .map_or(u64::MAX, |k| k as u64);
        let lower = order / s.ell;
        if !(lower < k && k <= order.min(r)) {
            elements_ok = false;
        }
    }
    Claim1Report {
        exponent_bound,
        elements_ok,
        max_ell_order,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameizingReport {
    /// Cyclic complement `⟨c⟩ ≅ Z/M` of `P̄`.
    pub complement: Vec<usize>,
    pub complement_generator: usize,
    /// Elements of the complement commuting with all of `P̄`.
    pub h: Vec<usize>,
    /// `[Ī : H]`.
    pub index_tame: u64,
    pub h_normal: bool,
    pub h_prime_to_p: bool,
    /// `|Ī/H| = |P̄| · M / |H|`.
    pub sequence_exact: bool,
}

impl TameizingReport {
    pub fn holds(&self) -> bool {
        self.h_normal && self.h_prime_to_p && self.sequence_exact
    }
}

/// Finds a cyclic complement of `P̄` by search and its subgroup `H`
/// acting trivially on `P̄` by conjugation.
pub fn tameizing_subgroup(s: &InertiaStructure) -> Result<TameizingReport> {
    let g = &s.group;
    let c = g
        .elements()
        .find(|&x| {
            g.element_order(x) == s.m && {
                let sub = g.subgroup_generated(&[x]);
                FiniteGroup::intersect(&sub, &s.p_sylow).len() == 1
            }
        })
        .ok_or(Error::ComplementNotFound(s.m))?;
    let complement = g.subgroup_generated(&[c]);
    let h = FiniteGroup::intersect(&complement, &g.centralizer(&s.p_sylow));
    let h_order = h.len() as u64;
    let index_tame = s.order() / h_order;
    let quotient_order = if g.is_normal(&h) {
        g.quotient(&h)?.0.order() as u64
    } else {
        0
    };
    Ok(TameizingReport {
        complement_generator: c,
        complement,
        h_normal: g.is_normal(&h),
        h_prime_to_p: h_order.gcd(&s.p) == 1,
        sequence_exact: quotient_order == s.p_sylow_order() * s.m / h_order,
        index_tame,
        h,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorialBound {
    Exact(BigUint),
    /// `M0!`, too large to expand.
    Symbolic {
        m0: BigUint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitConstants {
    /// `N' = ℓ · r · J · N`.
    pub n_prime: u64,
    /// `M0 = r · p^{N'} · J`.
    pub m0: BigUint,
    /// `M0!`.
    pub m_crude: FactorialBound,
}

/// Evaluates the a-priori constants. With `require_exact`, a factorial
/// beyond [`FACTORIAL_CAP`] is an error instead of a symbolic value.
pub fn explicit_constants(
    r: u64,
    p: u64,
    ell: u64,
    n: u64,
    j: u64,
    require_exact: bool,
) -> Result<ExplicitConstants> {
    if r == 0 || j == 0 || p < 2 || ell < 2 {
        return Err(Error::InvalidInput(
            "r, J must be positive; p, ℓ primes".into(),
        ));
    }
    if ell == p {
        return Err(Error::InvalidInput(format!("ℓ = p = {p}")));
    }
    let n_prime = ell
        .checked_mul(r)
        .and_then(|x| x.checked_mul(j))
        .and_then(|x| x.checked_mul(n))
        .ok_or_else(|| Error::OverflowPolicyExceeded("N' overflows 64 bits".into()))?;
    let m0 = r_p_pow_j(r, p, n_prime, j)?;
    let m_crude = match m0.to_u64() {
        Some(k) if k <= FACTORIAL_CAP => Exact(factorial(k)),
        _ if require_exact => {
            return Err(Error::OverflowPolicyExceeded(format!(
                "M0 = {m0} exceeds the factorial cap {FACTORIAL_CAP}"
            )))
        }
        _ => FactorialBound::Symbolic { m0: m0.clone() },
    };
    use FactorialBound::Exact;
    Ok(ExplicitConstants {
        n_prime,
        m0,
        m_crude,
    })
}

/// `r · p^e · J`.
fn r_p_pow_j(r: u64, p: u64, e: u64, j: u64) -> Result<BigUint> {
    if e > EXPONENT_CAP {
        return Err(Error::OverflowPolicyExceeded(format!(
            "exponent {e} exceeds {EXPONENT_CAP}"
        )));
    }
    Ok(BigUint::from(r) * BigUint::from(p).pow(e as u32) * BigUint::from(j))
}

fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `ℓ^n · J · N` with `n` the `ℓ`-exponent of `M`, the value the tower
/// `Ī ⊃ Ī' ⊃ A` gives when `n` is known.
pub fn derived_n_prime(ell: u64, ell_exponent: u32, j: u64, n: u64) -> Option<u64> {
    ell.checked_pow(ell_exponent)?
        .checked_mul(j)?
        .checked_mul(n)
}

/// Jordan constants `J(r)`: every finite subgroup of `GL_r` of order prime
/// to `ℓ` has an abelian normal subgroup of index at most `J(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanTable {
    entries: BTreeMap<u32, u64>,
    user_supplied: BTreeSet<u32>,
}

impl Default for JordanTable {
    /// Only `J(1) = 1`: subgroups of `GL_1` are abelian.
    fn default() -> Self {
        JordanTable {
            entries: BTreeMap::from([(1, 1)]),
            user_supplied: BTreeSet::new(),
        }
    }
}

impl JordanTable {
    pub fn with_entry(mut self, r: u32, j: u64) -> Result<Self> {
        if r == 0 || j == 0 {
            return Err(Error::InvalidInput(
                "Jordan table entries must be positive".into(),
            ));
        }
        self.entries.insert(r, j);
        self.user_supplied.insert(r);
        Ok(self)
    }

    pub fn jordan_bound(&self, r: u32) -> Result<u64> {
        self.entries
            .get(&r)
            .copied()
            .ok_or(Error::NoBoundConfigured(r))
    }

    pub fn is_user_supplied(&self, r: u32) -> bool {
        self.user_supplied.contains(&r)
    }

    pub fn entries(&self) -> &BTreeMap<u32, u64> {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildOrderReport {
    pub swan: Q,
    /// Number of distinct positive slopes in the break decomposition.
    pub jumps: u64,
    pub jumps_le_swan: bool,
    pub n_prime: u64,
    /// Order of `P̄ ∩ A` for the abelian normal subgroup `A` used.
    pub abelian_p_part: u64,
    pub abelian_from_search: bool,
    pub exponent_ok: bool,
    pub p_sylow_order: u64,
    /// `p^{r·N'} · J`.
    pub torus_bound: BigUint,
    pub torus_bound_holds: bool,
    /// `r · p^{N'} · J`, recorded only.
    pub printed_bound: BigUint,
    pub printed_bound_holds: bool,
}

impl WildOrderReport {
    pub fn holds(&self) -> bool {
        self.jumps_le_swan && self.exponent_ok && self.torus_bound_holds
    }
}

/// The steps bounding `|P̄|`: (a) positive slopes are at most `Sw <= N`,
/// (b) `P̄ ∩ A` is killed by `p^{N'}`, (c) `|P̄| <= p^{r N'} J`.
pub fn wild_order_bound_check(
    s: &InertiaStructure,
    filt: &RamFiltration,
    rep: &Representation,
    n_bound: u64,
    j: u64,
    n_prime: u64,
) -> Result<WildOrderReport> {
    if rep.image_matrices() != *s.group.matrices().expect("matrix group") {
        return Err(Error::PreconditionFailed(
            "the structure is not the image of the representation".into(),
        ));
    }
    let sw = swan_conductor(rep, filt)?;
    if sw.swan > Q::from_integer(n_bound as i64) {
        return Err(Error::PreconditionFailed(format!(
            "Sw = {} exceeds N = {n_bound}",
            sw.swan
        )));
    }
    let jumps = sw
        .breaks
        .iter()
        .filter(|b| b.0 > Q::from_integer(0))
        .count() as u64;

    let g = &s.group;
    let (abelian, from_search) = if g.is_abelian() {
        (g.elements().collect(), false)
    } else {
        (largest_abelian_normal(g), true)
    };
    let ap = FiniteGroup::intersect(&abelian, &s.p_sylow);
    let exponent_ok = ap
        .iter()
        .all(|&x| divides_p_power(g.element_order(x), s.p, n_prime));

    let r = s.r as u64;
    let torus_bound = BigUint::from(s.p).pow(
        u32::try_from(r * n_prime)
            .map_err(|_| Error::OverflowPolicyExceeded("r·N' exceeds 32 bits".into()))?,
    ) * BigUint::from(j);
    let printed_bound = r_p_pow_j(r, s.p, n_prime, j)?;
    let order = BigUint::from(s.p_sylow_order());
    Ok(WildOrderReport {
        swan: sw.swan,
        jumps,
        jumps_le_swan: Q::from_integer(jumps as i64) <= sw.swan
            && sw.swan <= Q::from_integer(n_bound as i64),
        n_prime,
        abelian_p_part: ap.len() as u64,
        abelian_from_search: from_search,
        exponent_ok,
        p_sylow_order: s.p_sylow_order(),
        torus_bound_holds: order <= torus_bound,
        printed_bound_holds: order <= printed_bound,
        torus_bound,
        printed_bound,
    })
}

/// `order | p^e`.
fn divides_p_power(order: u64, p: u64, e: u64) -> bool {
    let mut o = order;
    let mut k = 0;
    while o.is_multiple_of(p) {
        o /= p;
        k += 1;
    }
    o == 1 && k <= e
}

/// Largest abelian normal subgroup among the center and the normal
/// closures of cyclic and two-generated subgroups. Not guaranteed maximal.
fn largest_abelian_normal(g: &FiniteGroup) -> Vec<usize> {
    let mut best = g.center();
    let mut consider = |set: Vec<usize>| {
        if set.len() > best.len() && g.subset_is_abelian(&set) {
            best = set;
        }
    };
    for x in g.elements() {
        consider(g.normal_closure(&[x]));
    }
    if g.order() <= 200 {
        for x in g.elements() {
            for y in x + 1..g.order() {
                if g.commute(x, y) {
                    consider(g.normal_closure(&[x, y]));
                }
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionData {
    pub order_i: u64,
    /// Number of branches over the boundary point.
    pub t: u64,
    pub e: u64,
    pub f_sep: u64,
    pub f_insep: u64,
    pub p: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `|Ī^C| = e · f_insep`.
    pub order_ic: u64,
    pub tame: bool,
}

/// `|Ī^C| = e · f_insep = |Ī| / (t · f_sep)`; tame iff `f_insep = 1` and
/// `p ∤ e`.
pub fn decomposition_counts(d: &DecompositionData) -> Result<DecompositionReport> {
    let DecompositionData {
        order_i,
        t,
        e,
        f_sep,
        f_insep,
        p,
    } = *d;
    if [order_i, t, e, f_sep, f_insep].contains(&0) {
        return Err(Error::InconsistentCounts(
            "all counts must be positive".into(),
        ));
    }
    if !crate::algebra::field::is_prime(p) {
        return Err(Error::InconsistentCounts(format!("{p} is not prime")));
    }
    if !is_power_of(f_insep, p) {
        return Err(Error::InconsistentCounts(format!(
            "f_insep = {f_insep} is not a power of {p}"
        )));
    }
    let product = [t, e, f_sep, f_insep]
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x));
    if product != Some(order_i) {
        return Err(Error::InconsistentCounts(format!(
            "|Ī| = {order_i} but t·e·f_sep·f_insep = {t}·{e}·{f_sep}·{f_insep}"
        )));
    }
    let order_ic = e * f_insep;
    debug_assert_eq!(order_ic, order_i / (t * f_sep));
    Ok(DecompositionReport {
        order_ic,
        tame: f_insep == 1 && e.gcd(&p) == 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    pub kernel: Vec<usize>,
    pub holds: bool,
    pub kernel_sylow_order: u64,
    pub unique_sylow: bool,
}

/// Finds a normal subgroup `K̄` of the stabilizer `S` with `S/K̄` cyclic of
/// order `f_sep` and checks `|K̄| = e · f_insep`.
pub fn star_kernel_check(
    g: &FiniteGroup,
    stabilizer: &[usize],
    f_sep: u64,
    e: u64,
    f_insep: u64,
    p: u64,
) -> Result<StarReport> {
    let mut stab = stabilizer.to_vec();
    stab.sort_unstable();
    if !g.is_subgroup(&stab) {
        return Err(Error::NotAGroup("stabilizer is not a subgroup".into()));
    }
    if Some(stab.len() as u64) != e.checked_mul(f_sep).and_then(|x| x.checked_mul(f_insep)) {
        return Err(Error::NoSuchQuotient(format!(
            "|S| = {} is not e·f_sep·f_insep",
            stab.len()
        )));
    }
    let (s, emb) = g.induced(&stab)?;
    let target = s.order() as u64 / f_sep;
    let kernel = candidate_subgroups(&s)
        .into_iter()
        .filter(|k| k.len() as u64 == target && s.is_normal(k))
        .find(|k| s.quotient(k).map(|(q, _)| q.is_cyclic()).unwrap_or(false))
        .ok_or_else(|| Error::NoSuchQuotient(format!("no cyclic quotient of order {f_sep}")))?;
    let sylow = s.p_elements(p);
    let sylow_k = FiniteGroup::intersect(&kernel, &sylow);
    let (k_group, k_emb) = s.induced(&kernel)?;
    let k_sylow = k_group.p_elements(p);
    let unique_sylow = k_group.is_subgroup(&k_sylow) && k_group.is_normal(&k_sylow);
    debug_assert_eq!(k_sylow.len(), sylow_k.len());
    let _ = k_emb;
    Ok(StarReport {
        holds: kernel.len() as u64 == e * f_insep,
        kernel: kernel.iter().map(|&x| emb[x]).collect(),
        kernel_sylow_order: k_sylow.len() as u64,
        unique_sylow,
    })
}

/// Subgroups generated by at most two elements, deduplicated and sorted.
fn candidate_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    out.insert(vec![g.identity()]);
    for x in g.elements() {
        out.insert(g.subgroup_generated(&[x]));
        for y in x + 1..g.order() {
            out.insert(g.subgroup_generated(&[x, y]));
        }
    }
    out.into_iter().collect()
}
