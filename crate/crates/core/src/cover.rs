//! Explicit Galois covers `L/K` of `K = k((t))` and their lower-numbering
//! break data.
//!
//! Every cover is totally ramified and is presented as `L = k((s))`: we keep
//! `t` as a series in the uniformizer `s` and, for each group element `σ`,
//! the series `σ(s)`. The break of `σ ≠ 1` is `i_G(σ) = v_L(σ(s) - s)`.
//!
//! Artin–Schreier covers `y^p - y = f` with `v(f) = -m`, `p ∤ m` use the
//! uniformizer `s = t^a y^b` with `ap - bm = 1`. Writing `t = s^p λ^b` and
//! `1/y = s^m λ^a` for a unit `λ`, the defining equation becomes
//!
//! ```text
//! λ · u(s^p λ^b) + s^{m(p-1)} λ^{a(p-1)} - 1 = 0,     u(t) = t^m f(t),
//! ```
//!
//! which has the simple root `λ ≡ 1/u(0)` and is solved by Hensel lifting.
//! The generator `y ↦ y + j` then acts by `s ↦ s (1 + j/y)^b`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::field::FiniteField;
use crate::algebra::series::{hensel_lift_root, LaurentSeries, PrecisionPolicy, EXACT};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
pub enum CoverRecipe {
    /// `y^p - y = f`, with `f` already in reduced form.
    ArtinSchreier { f: LaurentSeries },
    /// `s^m = t`; `m = 1` is the trivial cover.
    Kummer { m: u64 },
    /// Compositum of the Kummer cover of degree `m` with `y^p - y = f`,
    /// `f` a series in `t`.
    Tower { m: u64, f: LaurentSeries },
}

/// The marked intermediate field `K ⊂ K' ⊂ L` of a tower.
#[derive(Clone, Debug)]
pub struct Intermediate {
    /// `Gal(L/K')` inside the cover group.
    pub subgroup: Vec<usize>,
    /// `K'/K`.
    pub lower: Box<GaloisCover>,
    /// `L/K'`, built directly over `K' = k((s'))`.
    pub upper: Box<GaloisCover>,
    /// Index in `upper.group` ↦ index in the tower group.
    pub upper_embedding: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GaloisCover {
    base: Arc<FiniteField>,
    recipe: CoverRecipe,
    precision: i64,
    group: FiniteGroup,
    t_in_s: LaurentSeries,
    sigma_action: Vec<LaurentSeries>,
    e: u64,
    uniformizer: Option<(i64, i64)>,
    intermediate: Option<Intermediate>,
}

impl GaloisCover {
    pub fn base(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn recipe(&self) -> &CoverRecipe {
        &self.recipe
    }

    /// Relative precision the cover was built with.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// `t` as a series in the uniformizer `s`.
    pub fn t_in_s(&self) -> &LaurentSeries {
        &self.t_in_s
    }

    /// `σ(s)` for the group element with index `sigma`.
    pub fn action(&self, sigma: usize) -> &LaurentSeries {
        &self.sigma_action[sigma]
    }

    pub fn ramification_index(&self) -> u64 {
        self.e
    }

    pub fn degree(&self) -> u64 {
        self.group.order() as u64
    }

    /// `(a, b)` with `s = t^a y^b` for covers with an Artin–Schreier layer.
    pub fn uniformizer_exponents(&self) -> Option<(i64, i64)> {
        self.uniformizer
    }

    pub fn intermediate(&self) -> Option<&Intermediate> {
        self.intermediate.as_ref()
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.base.characteristic() as u64
    }

    /// Rebuilds the same cover with another working precision.
    pub fn rebuild(&self, precision: i64) -> Result<GaloisCover> {
        match &self.recipe {
            CoverRecipe::ArtinSchreier { f } => artin_schreier_at(&self.base, f.clone(), precision),
            CoverRecipe::Kummer { m } => kummer_cover(&self.base, *m),
            CoverRecipe::Tower { m, f } => tower_at(&self.base, *m, f, precision),
        }
    }

    /// Checks the structural invariants against the stored series:
    /// `v(σ(s)) = 1`, `σ(t) = t`, and `(στ)(s) = σ(τ(s))` for every `σ` and
    /// every generator `τ`.
    pub fn verify_action(&self) -> Result<()> {
        let g = &self.group;
        for sigma in g.elements() {
            let img = &self.sigma_action[sigma];
            if img.valuation()? != 1 {
                return Err(Error::NotGaloisOverBase(format!(
                    "{}(s) has valuation {}",
                    g.label(sigma),
                    img.valuation()?
                )));
            }
            let moved = self.t_in_s.compose(img)?;
            if !agree(&moved, &self.t_in_s)? {
                return Err(Error::NotGaloisOverBase(format!(
                    "{} does not fix t",
                    g.label(sigma)
                )));
            }
            let gens: Vec<usize> = if g.generators().is_empty() {
                g.elements().collect()
            } else {
                g.generators().to_vec()
            };
            for tau in gens {
                let lhs = &self.sigma_action[g.mul(sigma, tau)];
                let rhs = self.sigma_action[tau].compose(img)?;
                if !agree(lhs, &rhs)? {
                    return Err(Error::NotGaloisOverBase(format!(
                        "action is not a homomorphism at ({}, {})",
                        g.label(sigma),
                        g.label(tau)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// True when `a - b` vanishes to the common precision.
pub fn agree(a: &LaurentSeries, b: &LaurentSeries) -> Result<bool> {
    Ok(a.sub(b)?.is_zero_to_precision())
}

/// Removes poles of order divisible by `p` via `f ↦ f - (g^p - g)` with
/// `g = c^{1/p} t^{-k}`.
pub fn reduce_artin_schreier(f: &LaurentSeries) -> Result<LaurentSeries> {
    if !f.is_exact() {
        return Err(Error::InvalidInput(
            "Artin–Schreier data must be an exact Laurent polynomial".into(),
        ));
    }
    let field = Arc::clone(f.field());
    let p = field.characteristic() as i64;
    let mut f = f.clone();
    loop {
        let v = match f.valuation() {
            Ok(v) => v,
            Err(_) => {
                return Err(Error::PoleOrderDivisibleByP(
                    "the equation reduces to f = 0 (split cover)".into(),
                ))
            }
        };
        if v >= 0 {
            return Err(Error::PoleOrderDivisibleByP(format!(
                "no pole remains after reduction (valuation {v})"
            )));
        }
        let m = -v;
        if m % p != 0 {
            return Ok(f);
        }
        let c = f.leading_coefficient().expect("nonzero");
        let root = field.pth_root(c);
        let g = LaurentSeries::monomial(&field, root, -m / p);
        f = f.sub(&g.pow(p)?)?.add(&g)?;
    }
}

struct ArtinSchreierData {
    a: i64,
    b: i64,
    /// `t` (or the base variable) in terms of `s`.
    base_var: LaurentSeries,
    /// `1/y` in terms of `s`.
    w: LaurentSeries,
}

fn artin_schreier_series(
    field: &Arc<FiniteField>,
    f: &LaurentSeries,
    precision: i64,
) -> Result<ArtinSchreierData> {
    let p = field.characteristic() as i64;
    let m = -f.valuation()?;
    debug_assert!(m > 0 && m % p != 0);
    // minimal b ≥ 0 with b·m ≡ -1 (mod p)
    let b = (0..p).find(|b| (b * m + 1) % p == 0).expect("p ∤ m");
    let a = (1 + b * m) / p;

    // u(t) = t^m f(t) = Σ u_k t^k
    let u: Vec<(i64, u32)> = f.terms().map(|(e, c)| (e + m, c)).collect();
    let u0 = f.leading_coefficient().unwrap();
    let deg = (b * u.iter().map(|t| t.0).max().unwrap() + 1).max(a * (p - 1)) as usize;
    let mut coeffs = vec![LaurentSeries::zero_to(field, EXACT); deg + 1];
    let mut add = |idx: i64, term: LaurentSeries| -> Result<()> {
        let slot = &mut coeffs[idx as usize];
        *slot = slot.add(&term)?;
        Ok(())
    };
    for &(k, c) in &u {
        add(b * k + 1, LaurentSeries::monomial(field, c, p * k))?;
    }
    add(a * (p - 1), LaurentSeries::monomial(field, 1, m * (p - 1)))?;
    add(0, LaurentSeries::monomial(field, field.neg(1), 0))?;

    let lambda0 = LaurentSeries::new(field, 0, vec![field.inv(u0)?], 1);
    let lambda = hensel_lift_root(&coeffs, &lambda0, precision)?;
    let s = |e: i64| LaurentSeries::monomial(field, 1, e);
    let base_var = s(p).mul(&lambda.pow(b)?)?;
    let w = s(m).mul(&lambda.pow(a)?)?;
    Ok(ArtinSchreierData { a, b, base_var, w })
}

/// `s (1 + j w)^b` scaled by `zeta`.
fn shifted_uniformizer(
    field: &Arc<FiniteField>,
    w: &LaurentSeries,
    j: i64,
    b: i64,
    zeta: u32,
) -> Result<LaurentSeries> {
    let one = LaurentSeries::one(field);
    let shifted = one.add(&w.scale(field.from_int(j)))?;
    LaurentSeries::monomial(field, zeta, 1).mul(&shifted.pow(b)?)
}

fn artin_schreier_at(
    base: &Arc<FiniteField>,
    f: LaurentSeries,
    precision: i64,
) -> Result<GaloisCover> {
    let p = base.characteristic() as usize;
    let data = artin_schreier_series(base, &f, precision)?;
    let sigma_action = (0..p as i64)
        .map(|j| shifted_uniformizer(base, &data.w, j, data.b, 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(GaloisCover {
        base: Arc::clone(base),
        recipe: CoverRecipe::ArtinSchreier { f },
        precision,
        group: FiniteGroup::cyclic(p),
        t_in_s: data.base_var,
        sigma_action,
        e: p as u64,
        uniformizer: Some((data.a, data.b)),
        intermediate: None,
    })
}

fn check_base(base: &Arc<FiniteField>, f: &LaurentSeries) -> Result<()> {
    if **base != **f.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Artin–Schreier cover `y^p - y = f` over `k((t))`, `k` the base field.
/// Poles of order divisible by `p` are reduced first.
pub fn build_artin_schreier(
    base: &Arc<FiniteField>,
    f: &LaurentSeries,
    policy: PrecisionPolicy,
) -> Result<GaloisCover> {
    check_base(base, f)?;
    let reduced = reduce_artin_schreier(f)?;
    artin_schreier_at(base, reduced, policy.initial)
}

fn kummer_cover(base: &Arc<FiniteField>, m: u64) -> Result<GaloisCover> {
    let zeta = base.root_of_unity(m)?;
    let sigma_action = (0..m as i64)
        .map(|k| Ok(LaurentSeries::monomial(base, base.pow(zeta, k)?, 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GaloisCover {
        base: Arc::clone(base),
        recipe: CoverRecipe::Kummer { m },
        precision: EXACT,
        group: FiniteGroup::cyclic(m as usize),
        t_in_s: LaurentSeries::monomial(base, 1, m as i64),
        sigma_action,
        e: m,
        uniformizer: None,
        intermediate: None,
    })
}

/// Kummer cover `s^m = t`; needs `μ_m ⊂ k`, i.e. `m | q - 1`.
pub fn build_kummer(base: &Arc<FiniteField>, m: u64) -> Result<GaloisCover> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "Kummer degree must be at least 2, got {m}"
        )));
    }
    kummer_cover(base, m)
}

/// `L = K`.
pub fn trivial_cover(base: &Arc<FiniteField>) -> GaloisCover {
    kummer_cover(base, 1).expect("degree 1 always exists")
}

fn tower_at(
    base: &Arc<FiniteField>,
    m: u64,
    f: &LaurentSeries,
    precision: i64,
) -> Result<GaloisCover> {
    let p = base.characteristic() as usize;
    let lower = kummer_cover(base, m)?;
    let zeta = base.root_of_unity(m)?;
    // f pulled back to K' = k((s')), t = s'^m
    let reduced = reduce_artin_schreier(f)?.compose(&LaurentSeries::monomial(base, 1, m as i64))?;
    let data = artin_schreier_series(base, &reduced, precision)?;
    let upper = artin_schreier_at(base, reduced, precision)?;

    let z_p = FiniteGroup::cyclic(p);
    let z_m = FiniteGroup::cyclic(m as usize);
    let group = FiniteGroup::direct_product(&z_p, &z_m);
    let mut sigma_action = Vec::with_capacity(group.order());
    for idx in group.elements() {
        let (j, k) = ((idx / m as usize) as i64, (idx % m as usize) as i64);
        let z = base.pow(zeta, k * data.a)?;
        sigma_action.push(shifted_uniformizer(base, &data.w, j, data.b, z)?);
    }
    let t_in_s = data.base_var.pow(m as i64)?;
    let subgroup: Vec<usize> = (0..p).map(|j| j * m as usize).collect();
    Ok(GaloisCover {
        base: Arc::clone(base),
        recipe: CoverRecipe::Tower { m, f: f.clone() },
        precision,
        group,
        t_in_s,
        sigma_action,
        e: p as u64 * m,
        uniformizer: Some((data.a, data.b)),
        intermediate: Some(Intermediate {
            upper_embedding: subgroup.clone(),
            subgroup,
            lower: Box::new(lower),
            upper: Box::new(upper),
        }),
    })
}

/// Compositum `L = K'·K(y)` of a Kummer cover `K'/K` with the
/// Artin–Schreier cover `y^p - y = upper_f` of `K`. The group is
/// `Z/p × Z/m` with `Gal(L/K') = Z/p × 0` marked as the intermediate
/// subgroup.
pub fn build_compositum_tower(
    lower: &GaloisCover,
    upper_f: &LaurentSeries,
    policy: PrecisionPolicy,
) -> Result<GaloisCover> {
    let CoverRecipe::Kummer { m } = lower.recipe else {
        return Err(Error::NotGaloisOverBase(
            "the lower layer of a tower must be a Kummer cover".into(),
        ));
    };
    check_base(&lower.base, upper_f)?;
    if !upper_f.is_exact() {
        return Err(Error::InvalidInput(
            "Artin–Schreier data must be an exact Laurent polynomial".into(),
        ));
    }
    tower_at(&lower.base, m, upper_f, policy.initial)
}

/// `i_G(σ)` for every `σ ≠ 1` of a cover's group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakTable {
    group: FiniteGroup,
    p: u64,
    breaks: Vec<Option<u64>>,
}

impl BreakTable {
    /// Validates `i_G(σ) >= 1` for `σ ≠ 1` and conjugation invariance.
    pub fn new(group: FiniteGroup, p: u64, breaks: BTreeMap<usize, u64>) -> Result<Self> {
        let mut table = vec![None; group.order()];
        for x in group.elements() {
            if x == group.identity() {
                continue;
            }
            let i = *breaks.get(&x).ok_or_else(|| {
                Error::InvalidInput(format!("no break given for {}", group.label(x)))
            })?;
            if i < 1 {
                return Err(Error::InvalidInput(format!(
                    "break of {} must be >= 1",
                    group.label(x)
                )));
            }
            table[x] = Some(i);
        }
        for x in group.elements() {
            for h in group.elements() {
                if table[x] != table[group.conjugate(x, h)] {
                    return Err(Error::InvalidInput(format!(
                        "breaks are not conjugation invariant at {}",
                        group.label(x)
                    )));
                }
            }
        }
        Ok(BreakTable {
            group,
            p,
            breaks: table,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn residue_characteristic(&self) -> u64 {
        self.p
    }

    /// `None` for the identity.
    pub fn i_g(&self, sigma: usize) -> Option<u64> {
        self.breaks[sigma]
    }

    pub fn max_break(&self) -> Option<u64> {
        self.breaks.iter().flatten().copied().max()
    }

    /// Breaks of a subgroup, which are the same numbers: both are
    /// valuations in `L`.
    pub fn restrict(&self, subgroup: &[usize]) -> Result<(BreakTable, Vec<usize>)> {
        let (sub, embedding) = self.group.induced(subgroup)?;
        let breaks = embedding.iter().map(|&x| self.breaks[x]).collect();
        Ok((
            BreakTable {
                group: sub,
                p: self.p,
                breaks,
            },
            embedding,
        ))
    }
}

/// Computes `i_G(σ) = v_L(σ(s) - s)` for every `σ ≠ 1`, rebuilding the
/// cover at higher precision while some difference vanishes to precision.
pub fn lower_break_table(cover: &GaloisCover, policy: PrecisionPolicy) -> Result<BreakTable> {
    let mut ladder: Vec<i64> = policy
        .ladder()
        .into_iter()
        .filter(|&p| p > cover.precision)
        .collect();
    let mut current = cover.clone();
    loop {
        match try_breaks(&current) {
            Ok(map) => {
                return BreakTable::new(
                    current.group.clone(),
                    current.residue_characteristic(),
                    map,
                )
            }
            Err(label) => {
                if ladder.is_empty() {
                    return Err(Error::PrecisionExhausted(format!(
                        "{label}(s) - s vanishes to precision cap {}",
                        policy.cap
                    )));
                }
                let next = ladder.remove(0);
                current = current.rebuild(next)?;
            }
        }
    }
}

fn try_breaks(cover: &GaloisCover) -> std::result::Result<BTreeMap<usize, u64>, String> {
    let g = &cover.group;
    let s = LaurentSeries::monomial(&cover.base, 1, 1);
    let mut out = BTreeMap::new();
    for sigma in g.elements() {
        if sigma == g.identity() {
            continue;
        }
        let d = cover.sigma_action[sigma]
            .sub(&s)
            .map_err(|_| g.label(sigma).to_string())?;
        match d.valuation() {
            Ok(v) if v >= 1 => {
                out.insert(sigma, v as u64);
            }
            _ => return Err(g.label(sigma).to_string()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(k: &Arc<FiniteField>, terms: &[(i64, u32)]) -> LaurentSeries {
        LaurentSeries::from_terms(k, terms, EXACT)
    }

    fn breaks(cover: &GaloisCover) -> Vec<Option<u64>> {
        let bt = lower_break_table(cover, PrecisionPolicy::default()).unwrap();
        cover.group().elements().map(|x| bt.i_g(x)).collect()
    }

    #[test]
    fn artin_schreier_p2_m1() {
        let k = FiniteField::new(2, 1).unwrap();
        let c =
            build_artin_schreier(&k, &series(&k, &[(-1, 1)]), PrecisionPolicy::default()).unwrap();
        assert_eq!(c.degree(), 2);
        assert_eq!(c.ramification_index(), 2);
        assert_eq!(c.uniformizer_exponents(), Some((1, 1)));
        c.verify_action().unwrap();
        assert_eq!(breaks(&c), vec![None, Some(2)]);
        // with s = t·y: t = s^2/(1+s)
        let expect = LaurentSeries::monomial(&k, 1, 2)
            .mul(&series(&k, &[(0, 1), (1, 1)]).inv_to(64).unwrap())
            .unwrap();
        assert!(agree(c.t_in_s(), &expect).unwrap());
    }

    #[test]
    fn artin_schreier_conductors() {
        for (p, m) in [(2u64, 1i64), (2, 3), (3, 1), (3, 2), (5, 1), (5, 3), (7, 2)] {
            let k = FiniteField::new(p, 1).unwrap();
            let c = build_artin_schreier(&k, &series(&k, &[(-m, 1)]), PrecisionPolicy::default())
                .unwrap();
            c.verify_action().unwrap();
            let b = breaks(&c);
            assert!(
                b[1..].iter().all(|&i| i == Some(m as u64 + 1)),
                "p={p} m={m}: {b:?}"
            );
        }
    }

    #[test]
    fn artin_schreier_with_lower_order_terms() {
        let k = FiniteField::new(3, 2).unwrap();
        let f = series(&k, &[(-2, 5), (-1, 1), (0, 7), (3, 2)]);
        let c = build_artin_schreier(&k, &f, PrecisionPolicy::default()).unwrap();
        c.verify_action().unwrap();
        assert_eq!(breaks(&c), vec![None, Some(3), Some(3)]);
    }

    #[test]
    fn reduction_of_poles_divisible_by_p() {
        let k = FiniteField::new(2, 1).unwrap();
        // t^-4 + t^-3 ~ t^-3 + t^-2 ~ ..., leading pole 3
        let f = series(&k, &[(-4, 1), (-3, 1)]);
        let r = reduce_artin_schreier(&f).unwrap();
        assert_eq!(r.valuation().unwrap(), -3);
        let c = build_artin_schreier(&k, &f, PrecisionPolicy::default()).unwrap();
        assert_eq!(breaks(&c), vec![None, Some(4)]);
        // t^-2 + t^-1 = (t^-1)^2 - t^-1 + 0 (char 2): split
        let split = series(&k, &[(-2, 1), (-1, 1)]);
        assert!(matches!(
            build_artin_schreier(&k, &split, PrecisionPolicy::default()),
            Err(Error::PoleOrderDivisibleByP(_))
        ));
        assert!(matches!(
            reduce_artin_schreier(&series(&k, &[(0, 1), (2, 1)])),
            Err(Error::PoleOrderDivisibleByP(_))
        ));
    }

    #[test]
    fn kummer_covers_are_tame() {
        let k4 = FiniteField::new(2, 2).unwrap();
        let c = build_kummer(&k4, 3).unwrap();
        c.verify_action().unwrap();
        assert_eq!(breaks(&c), vec![None, Some(1), Some(1)]);
        let k3 = FiniteField::new(3, 1).unwrap();
        let c = build_kummer(&k3, 2).unwrap();
        assert_eq!(breaks(&c), vec![None, Some(1)]);
        let k2 = FiniteField::new(2, 1).unwrap();
        assert!(matches!(
            build_kummer(&k2, 3),
            Err(Error::MissingRootsOfUnity { .. })
        ));
    }

    #[test]
    fn z6_tower() {
        let k4 = FiniteField::new(2, 2).unwrap();
        let lower = build_kummer(&k4, 3).unwrap();
        let c =
            build_compositum_tower(&lower, &series(&k4, &[(-1, 1)]), PrecisionPolicy::default())
                .unwrap();
        assert_eq!(c.degree(), 6);
        c.verify_action().unwrap();
        let b = breaks(&c);
        // (j,k) at index 3j + k: wild elements (1,0) break 4, the rest 1
        assert_eq!(b, vec![None, Some(1), Some(1), Some(4), Some(1), Some(1)]);
        let inter = c.intermediate().unwrap();
        assert_eq!(inter.subgroup, vec![0, 3]);
        assert_eq!(breaks(&inter.upper), vec![None, Some(4)]);
    }

    #[test]
    fn degenerate_tower_is_the_artin_schreier_cover() {
        let k = FiniteField::new(3, 1).unwrap();
        let f = series(&k, &[(-2, 1)]);
        let t = build_compositum_tower(&trivial_cover(&k), &f, PrecisionPolicy::default()).unwrap();
        let a = build_artin_schreier(&k, &f, PrecisionPolicy::default()).unwrap();
        assert_eq!(t.degree(), a.degree());
        assert_eq!(t.t_in_s(), a.t_in_s());
        for x in 0..3 {
            assert_eq!(t.action(x), a.action(x));
        }
    }

    #[test]
    fn tower_needs_kummer_lower_layer() {
        let k = FiniteField::new(2, 1).unwrap();
        let a =
            build_artin_schreier(&k, &series(&k, &[(-1, 1)]), PrecisionPolicy::default()).unwrap();
        assert!(matches!(
            build_compositum_tower(&a, &series(&k, &[(-1, 1)]), PrecisionPolicy::default()),
            Err(Error::NotGaloisOverBase(_))
        ));
    }

    #[test]
    fn break_tables_must_be_class_functions() {
        let g = FiniteGroup::cyclic(3);
        let ok = BreakTable::new(g.clone(), 3, BTreeMap::from([(1, 3), (2, 3)]));
        assert!(ok.is_ok());
        let missing = BreakTable::new(g, 3, BTreeMap::from([(1, 3)]));
        assert!(missing.is_err());
    }

    #[test]
    fn escalation_reports_exhaustion_at_cap() {
        let k = FiniteField::new(2, 1).unwrap();
        let c =
            build_artin_schreier(&k, &series(&k, &[(-1, 1)]), PrecisionPolicy::default()).unwrap();
        let low = c.rebuild(1).unwrap();
        // precision 1 still resolves the break; the cap must not be hit
        let policy = PrecisionPolicy { initial: 1, cap: 1 };
        assert!(lower_break_table(&low, policy).is_ok());
    }
}
