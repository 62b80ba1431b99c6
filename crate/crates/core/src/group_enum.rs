//! Brute-force enumeration and sampling in small matrix groups
//! `GL_r(F_{ℓ^n})`, used as an independent oracle for the bound pipeline.
//!
//! Everything here is deterministic: random choices come from a seeded
//! ChaCha stream, and every report says whether it was exhaustive.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteField, MatrixFF};
use crate::bound::inertia_structure;
use crate::error::{Error, Result};
use crate::group::{minimal_generators, FiniteGroup};

/// Largest group `group_closure` will build.
pub const GROUP_SIZE_CAP: usize = 10_000;

/// Largest matrix space `q^{r²}` walked exhaustively.
pub const EXHAUSTIVE_CAP: u64 = 1 << 18;

/// Largest multiplicative order searched for a single matrix.
const ORDER_CAP: u64 = 1 << 20;

fn canonical_sort(mats: &mut Vec<MatrixFF>) {
    mats.sort_by(|a, b| a.entries().cmp(b.entries()));
    mats.dedup();
}

/// The group formed by a finite set of matrices, elements in lexicographic
/// order of their entries. Fails unless the set is closed under products.
pub fn group_from_matrices(mut mats: Vec<MatrixFF>) -> Result<FiniteGroup> {
    if mats.is_empty() {
        return Err(Error::NotAGroup("empty set".into()));
    }
    canonical_sort(&mut mats);
    let index: HashMap<&MatrixFF, usize> = mats.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = mats.len();
    let mut table = vec![0; n * n];
    for (i, a) in mats.iter().enumerate() {
        for (j, b) in mats.iter().enumerate() {
            let prod = a.mul(b)?;
            table[i * n + j] = *index
                .get(&prod)
                .ok_or_else(|| Error::NotAGroup("set is not closed under multiplication".into()))?;
        }
    }
    let labels = (0..n).map(|i| format!("m{i}")).collect();
    let g = FiniteGroup::from_table(n, table, labels, vec![])?;
    let gens = minimal_generators(&g);
    Ok(g.with_generators(gens).with_matrices(mats))
}

/// Closure of a set of invertible matrices under multiplication.
pub fn group_closure(generators: &[MatrixFF], size_cap: usize) -> Result<FiniteGroup> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    for g in generators {
        if !g.is_invertible() {
            return Err(Error::InvalidInput("generator is not invertible".into()));
        }
    }
    let id = MatrixFF::identity(first.field(), first.dim());
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([id.entries().to_vec()]);
    let mut all = vec![id];
    let mut frontier = 0;
    while frontier < all.len() {
        let x = all[frontier].clone();
        frontier += 1;
        for g in generators {
            let y = x.mul(g)?;
            if seen.insert(y.entries().to_vec()) {
                if all.len() >= size_cap {
                    return Err(Error::SizeCapExceeded(format!(
                        "group generated has more than {size_cap} elements"
                    )));
                }
                all.push(y);
            }
        }
    }
    group_from_matrices(all)
}

fn field_for(ell: u64, n: u32) -> Result<Arc<FiniteField>> {
    FiniteField::new(ell, n)
}

fn space_size(q: u64, r: usize) -> Option<u64> {
    q.checked_pow((r * r) as u32)
}

/// Every `r × r` matrix over `field`, in lexicographic order.
fn all_matrices(field: &Arc<FiniteField>, r: usize) -> impl Iterator<Item = MatrixFF> + '_ {
    let q = field.order() as u64;
    let total = space_size(q, r).expect("checked by caller");
    (0..total).map(move |mut code| {
        let mut e = vec![0u32; r * r];
        for slot in e.iter_mut().rev() {
            *slot = (code % q) as u32;
            code /= q;
        }
        MatrixFF::new(field, r, e).expect("square")
    })
}

fn random_matrix(field: &Arc<FiniteField>, r: usize, rng: &mut ChaCha8Rng) -> MatrixFF {
    let q = field.order();
    let e = (0..r * r).map(|_| rng.gen_range(0..q)).collect();
    MatrixFF::new(field, r, e).expect("square")
}

fn random_invertible(field: &Arc<FiniteField>, r: usize, rng: &mut ChaCha8Rng) -> MatrixFF {
    loop {
        let m = random_matrix(field, r, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Order of a unipotent matrix `1 + N` in characteristic `ℓ`: the least
/// `ℓ^d` at least the nilpotency index of `N`.
fn unipotent_order(m: &MatrixFF, ell: u64) -> Option<u64> {
    let id = MatrixFF::identity(m.field(), m.dim());
    let k = m.sub(&id).ok()?.nilpotency_index()? as u64;
    let mut order = 1;
    while order < k {
        order *= ell;
    }
    Some(order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxOrderReport {
    pub max_order: u64,
    pub exhaustive: bool,
    /// Number of matrices inspected.
    pub examined: u64,
    /// `ℓ^{d-1} <= r` for the maximal order `ℓ^d`.
    pub claim_holds: bool,
}

/// Largest order of an `ℓ`-element of `GL_r(F_{ℓ^n})`. Exhaustive when the
/// matrix space is at most [`EXHAUSTIVE_CAP`] (or `force_exhaustive`), else
/// `samples` random unipotent matrices are examined.
pub fn max_ell_element_order(
    r: usize,
    ell: u64,
    n: u32,
    force_exhaustive: bool,
    samples: u64,
    seed: u64,
) -> Result<MaxOrderReport> {
    let field = field_for(ell, n)?;
    let q = field.order() as u64;
    let size = space_size(q, r);
    let exhaustive = match size {
        Some(s) if s <= EXHAUSTIVE_CAP => true,
        Some(_) if force_exhaustive => {
            return Err(Error::SizeCapExceeded(format!(
                "GL_{r}(F_{q}) is too large to enumerate"
            )))
        }
        _ => false,
    };
    let mut max_order = 1;
    let mut examined = 0;
    if exhaustive {
        for m in all_matrices(&field, r) {
            examined += 1;
            if let Some(o) = unipotent_order(&m, ell) {
                max_order = max_order.max(o);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            // random strictly upper triangular part, random change of basis
            let mut e = vec![0u32; r * r];
            for i in 0..r {
                e[i * r + i] = 1;
                for j in i + 1..r {
                    e[i * r + j] = rng.gen_range(0..field.order());
                }
            }
            let u = MatrixFF::new(&field, r, e)?;
            let c = random_invertible(&field, r, &mut rng);
            let m = c.mul(&u)?.mul(&c.inverse()?)?;
            examined += 1;
            if let Some(o) = unipotent_order(&m, ell) {
                max_order = max_order.max(o);
            }
        }
    }
    Ok(MaxOrderReport {
        max_order,
        exhaustive,
        examined,
        claim_holds: max_order == 1 || max_order / ell <= r as u64,
    })
}

/// Splits a matrix of order `o = p^v · w` into its `p`-part and `p'`-part.
fn p_parts(m: &MatrixFF, p: u64) -> Result<(MatrixFF, MatrixFF)> {
    let o = m.order(ORDER_CAP)?;
    let mut pv = 1;
    while (o / pv) % p == 0 {
        pv *= p;
    }
    Ok((m.pow(o / pv), m.pow(pv)))
}

/// Canonical key of a matrix group: its sorted entry lists.
fn canonical_key(g: &FiniteGroup) -> Vec<Vec<u32>> {
    g.matrices()
        .expect("matrix group")
        .iter()
        .map(|m| m.entries().to_vec())
        .collect()
}

fn conjugate_key(g: &FiniteGroup, c: &MatrixFF, c_inv: &MatrixFF) -> Result<Vec<Vec<u32>>> {
    let mut mats = g
        .matrices()
        .expect("matrix group")
        .iter()
        .map(|m| c.mul(m)?.mul(c_inv))
        .collect::<Result<Vec<_>>>()?;
    canonical_sort(&mut mats);
    Ok(mats.iter().map(|m| m.entries().to_vec()).collect())
}

/// Random subgroups of `GL_r(F_{ℓ^n})` with a normal `p`-Sylow subgroup
/// and cyclic quotient, generated by `p`-parts and `p'`-parts of random
/// matrices. Duplicates are pruned by exact match and by
/// a few random conjugators; the pruning is not complete.
pub fn inertia_candidate_sample(
    r: usize,
    ell: u64,
    n: u32,
    p: u64,
    count: usize,
    seed: u64,
    size_cap: usize,
) -> Result<Vec<FiniteGroup>> {
    if p == ell {
        return Err(Error::InvalidInput("p must differ from ℓ".into()));
    }
    let field = field_for(ell, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    let attempts = count * 200;
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let (wild, _) = p_parts(&random_invertible(&field, r, &mut rng), p)?;
        let (wild2, tame) = p_parts(&random_invertible(&field, r, &mut rng), p)?;
        let gens = match rng.gen_range(0..4) {
            0 => vec![wild],
            1 => vec![tame],
            2 => vec![wild, wild2],
            _ => vec![wild, tame],
        };
        let g = match group_closure(&gens, size_cap.min(GROUP_SIZE_CAP)) {
            Ok(g) => g,
            Err(Error::SizeCapExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        if inertia_structure(g.matrices().unwrap(), p).is_err() {
            continue;
        }
        let key = canonical_key(&g);
        if seen.contains(&key) {
            continue;
        }
        let mut duplicate = false;
        for _ in 0..8 {
            let c = random_invertible(&field, r, &mut rng);
            if seen.contains(&conjugate_key(&g, &c, &c.inverse()?)?) {
                duplicate = true;
                break;
            }
        }
        if duplicate {
            continue;
        }
        seen.insert(key);
        out.push(g);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    /// Degree `n` of the coefficient field `F_{ℓ^n}` used.
    pub n: u32,
    pub max_order_found: u64,
    pub exhaustive: bool,
    /// `max_order_found <= r · p^s`.
    pub le_printed_bound: bool,
    /// `max_order_found <= p^{r·s}`.
    pub le_torus_bound: bool,
}

/// Largest abelian subgroup of exponent dividing `p^s` in `GL_r(F_{ℓ^n})`,
/// `n` minimal with `p^s | ℓ^n - 1`. Exhaustive (maximum clique of the
/// commuting graph on elements killed by `p^s`) when the matrix space has
/// at most `cap` elements; otherwise the diagonal subgroup is reported.
pub fn abelian_p_bound_probe(r: usize, ell: u64, p: u64, s: u32, cap: u64) -> Result<ProbeReport> {
    let ps = p
        .checked_pow(s)
        .ok_or_else(|| Error::SizeCapExceeded("p^s overflows".into()))?;
    let mut n = 1u32;
    let mut q = ell;
    while !(q - 1).is_multiple_of(ps) {
        n += 1;
        q = q
            .checked_mul(ell)
            .filter(|&q| q <= crate::algebra::field::FIELD_SIZE_CAP)
            .ok_or_else(|| {
                Error::SizeCapExceeded(format!(
                    "no F_{ell}^n with {ps} | q - 1 below the field cap"
                ))
            })?;
    }
    let torus = (ps as u128).pow(r as u32);
    let exhaustive = space_size(q, r).is_some_and(|sz| sz <= cap);
    let max_order_found = if s == 0 {
        1
    } else if exhaustive {
        let field = field_for(ell, n)?;
        let killed: Vec<MatrixFF> = all_matrices(&field, r)
            .filter(|m| m.is_invertible() && m.pow(ps).is_identity())
            .collect();
        max_commuting_clique(&killed)? as u64
    } else {
        u64::try_from(torus).map_err(|_| Error::SizeCapExceeded("torus order overflows".into()))?
    };
    Ok(ProbeReport {
        n,
        max_order_found,
        exhaustive,
        le_printed_bound: max_order_found as u128 <= r as u128 * ps as u128,
        le_torus_bound: max_order_found as u128 <= torus,
    })
}

/// Bron–Kerbosch with pivoting on the commuting graph.
fn max_commuting_clique(mats: &[MatrixFF]) -> Result<usize> {
    let n = mats.len();
    let mut adj = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if mats[i].mul(&mats[j])? == mats[j].mul(&mats[i])? {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    fn expand(
        adj: &[BTreeSet<usize>],
        size: usize,
        mut cand: BTreeSet<usize>,
        mut excl: BTreeSet<usize>,
        best: &mut usize,
    ) {
        if cand.is_empty() {
            if excl.is_empty() {
                *best = (*best).max(size);
            }
            return;
        }
        if size + cand.len() <= *best {
            return;
        }
        let pivot = *cand
            .union(&excl)
            .max_by_key(|&&u| adj[u].intersection(&cand).count())
            .expect("nonempty");
        let todo: Vec<usize> = cand.difference(&adj[pivot]).copied().collect();
        for v in todo {
            let c2 = cand.intersection(&adj[v]).copied().collect();
            let e2 = excl.intersection(&adj[v]).copied().collect();
            expand(adj, size + 1, c2, e2, best);
            cand.remove(&v);
            excl.insert(v);
        }
    }
    let mut best = 0;
    expand(&adj, 0, (0..n).collect(), BTreeSet::new(), &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, a: u32) -> Arc<FiniteField> {
        FiniteField::new(p, a).unwrap()
    }

    #[test]
    fn closure_examples() {
        let k3 = f(3, 1);
        let id = MatrixFF::identity(&k3, 2);
        assert_eq!(group_closure(&[id], 100).unwrap().order(), 1);
        let swap = MatrixFF::from_rows(&k3, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = group_closure(&[swap], 100).unwrap();
        assert_eq!(g.order(), 2);
        g.verify_axioms().unwrap();

        let k2 = f(2, 1);
        let a = MatrixFF::from_rows(&k2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = MatrixFF::from_rows(&k2, &[vec![0, 1], vec![1, 1]]).unwrap();
        let gl = group_closure(&[a, b], 100).unwrap();
        assert_eq!(gl.order(), 6);
        gl.verify_axioms().unwrap();
        assert!(matches!(
            group_closure(
                &[MatrixFF::from_rows(&k3, &[vec![2, 1], vec![1, 0]]).unwrap()],
                3
            ),
            Err(Error::SizeCapExceeded(_))
        ));
    }

    #[test]
    fn closure_is_canonical() {
        let k3 = f(3, 1);
        let a = MatrixFF::from_rows(&k3, &[vec![0, 1], vec![2, 0]]).unwrap();
        let b = MatrixFF::from_rows(&k3, &[vec![1, 0], vec![0, 2]]).unwrap();
        let g1 = group_closure(&[a.clone(), b.clone()], 100).unwrap();
        let g2 = group_closure(&[b, a], 100).unwrap();
        assert_eq!(canonical_key(&g1), canonical_key(&g2));
        assert_eq!(g1, g2);
    }

    #[test]
    fn max_orders() {
        assert_eq!(
            max_ell_element_order(2, 2, 1, false, 0, 0)
                .unwrap()
                .max_order,
            2
        );
        let r3 = max_ell_element_order(3, 2, 1, false, 0, 0).unwrap();
        assert!(r3.exhaustive);
        assert_eq!(r3.max_order, 4);
        assert!(r3.claim_holds);
        assert_eq!(
            max_ell_element_order(1, 5, 1, false, 0, 0)
                .unwrap()
                .max_order,
            1
        );
        let sampled = max_ell_element_order(3, 7, 1, false, 200, 9).unwrap();
        assert!(!sampled.exhaustive);
        assert_eq!(sampled.max_order, 7);
    }

    #[test]
    fn samples_have_inertia_shape() {
        let gs = inertia_candidate_sample(1, 3, 2, 2, 5, 1, GROUP_SIZE_CAP).unwrap();
        assert!(gs.iter().all(|g| g.is_cyclic()));
        let gs = inertia_candidate_sample(2, 3, 1, 2, 20, 1, GROUP_SIZE_CAP).unwrap();
        assert!(!gs.is_empty());
        assert!(gs.iter().any(|g| !g.is_abelian()));
        assert!(inertia_candidate_sample(2, 3, 1, 2, 0, 1, GROUP_SIZE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn abelian_probe() {
        let r1 = abelian_p_bound_probe(1, 2, 3, 1, EXHAUSTIVE_CAP).unwrap();
        assert_eq!((r1.n, r1.max_order_found), (2, 3));
        assert!(r1.le_printed_bound && r1.le_torus_bound);
        let r2 = abelian_p_bound_probe(2, 2, 3, 1, EXHAUSTIVE_CAP).unwrap();
        assert!(r2.exhaustive);
        assert_eq!(r2.max_order_found, 9);
        assert!(r2.le_torus_bound);
        assert!(!r2.le_printed_bound);
        let r0 = abelian_p_bound_probe(2, 2, 3, 0, EXHAUSTIVE_CAP).unwrap();
        assert_eq!(r0.max_order_found, 1);
    }
}
